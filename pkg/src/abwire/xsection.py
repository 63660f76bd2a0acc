"""Cross sections and the scaled observable ``y = 2 pi p |f|^2``.

The total elastic cross section is deliberately absent: with AB-type
phases ``|S_m - 1|`` does not decay, so both ``int |f|^2`` and
``sum |S_m - 1|^2`` diverge.  Only angular densities, the absorption cross
section and the Parseval check of the decaying correction ``f_w`` are
meaningful.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .amplitude import PHI_MIN, SumSpec, _direct_correction, f_total, f_w, prefactor
from .errors import AccuracyError, DomainError
from .params import ChannelBounds, Reflecting, ScatterParams, ThinAbsorbing, WireModel, channel_bounds
from ._kernels import correction_terms

__all__ = [
    "ROW_FIELDS",
    "AngularScan",
    "angular_scan",
    "scaled_dcs",
    "sigma_absorption",
    "parseval_gap",
]

ROW_FIELDS = ("phi", "y", "re_f", "im_f", "re_f_abmod", "im_f_abmod", "re_f_w", "im_f_w",
              "tail_bound")


@dataclass(frozen=True)
class AngularScan:
    """Rows of an angular scan, one per grid angle, in grid order."""

    params: ScatterParams
    wire: WireModel
    p: float
    grid: np.ndarray
    rows: np.ndarray  # shape (n, len(ROW_FIELDS))

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, ROW_FIELDS.index(name)]


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("grid must be a non-empty 1-d array")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be strictly increasing")
    if grid[0] < PHI_MIN or grid[-1] > np.pi:
        raise DomainError(f"grid must lie in [{PHI_MIN:g}, pi]")
    return grid


def angular_scan(params: ScatterParams, wire: WireModel, p: float, grid,
                 spec: SumSpec = SumSpec(), workers: int = 1, chunk: int = 64) -> AngularScan:
    """Evaluate the amplitude split on ``grid`` and collect the table rows.

    Angles are processed in chunks, optionally on a thread pool; rows come
    back in grid order whatever the completion order.
    """
    grid = _check_grid(grid)
    bounds = channel_bounds(params, wire)
    pieces = [grid[i:i + chunk] for i in range(0, grid.size, chunk)]

    def work(phis):
        br = f_total(params, bounds, wire, phis, p, spec)
        y = 2.0 * math.pi * p * np.abs(br.f_total) ** 2
        return np.column_stack([phis, y, br.f_total.real, br.f_total.imag, br.f_ab_mod.real,
                                br.f_ab_mod.imag, br.f_w.real, br.f_w.imag, br.tail_bound])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(work, pieces))
    else:
        blocks = [work(ph) for ph in pieces]
    return AngularScan(params, wire, p, grid, np.vstack(blocks))


def scaled_dcs(params: ScatterParams, bounds: Optional[ChannelBounds], wire: WireModel, phi,
               p: float = 1.0, spec: SumSpec = SumSpec()):
    """``2 pi p |f(phi)|^2``, independent of ``p`` for the absorbing wires."""
    br = f_total(params, bounds, wire, phi, p, spec)
    y = 2.0 * math.pi * p * np.abs(br.f_total) ** 2
    return y[0] if np.ndim(phi) == 0 else y


def sigma_absorption(params: ScatterParams, bounds: Optional[ChannelBounds], wire: WireModel,
                     p: float = 1.0) -> float:
    """Absorption cross section ``(1/p) sum_m (1 - |S_m|^2)`` = absorbed count / p."""
    if isinstance(wire, Reflecting):
        raise DomainError("a reflecting wire absorbs nothing; the scattering is elastic")
    if not p > 0:
        raise DomainError("p must be positive")
    if bounds is None:
        bounds = channel_bounds(params, wire)
    return bounds.absorbed_count / p


def _coefficient_norm(params: ScatterParams, bounds: ChannelBounds, n_direct: int = 200_000):
    """``sum_m |S_m - S_m^AB|^2`` over elastic channels.

    Explicit terms up to ``n_direct`` past the split, then an
    Euler-Maclaurin tail on the ``(pi c / 2)^2 / (n - b)^2`` law.
    """
    c = params.coupling_sq
    if c == 0.0:
        return 0.0
    beta = params.beta
    k = math.ceil(beta)
    upper = max(bounds.hi + 1, k)
    lower = min(bounds.lo - 1, k - 1)
    total = 0.0
    for b, start in ((beta, upper), (-beta, -lower)):
        n = np.arange(start, start + n_direct, dtype=float)
        total += float(np.sum(np.abs(correction_terms(n - b, c)) ** 2))
        x = start + n_direct - b
        amp = (0.5 * math.pi * c) ** 2
        total += amp * (1.0 / x + 0.5 / x ** 2 + 1.0 / (6.0 * x ** 3))
    extra = np.concatenate([np.arange(bounds.hi + 1, upper), np.arange(lower + 1, bounds.lo)])
    if extra.size:
        total += float(np.sum(np.abs(_direct_correction(extra, params)) ** 2))
    return total


def _panel_nodes(edges, order):
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    return (lo + half * (x + 1.0)).ravel(), (half * w).ravel()


def _integral_abs2(params, bounds, p, spec, order):
    small = np.geomspace(PHI_MIN, 0.1, 41)
    big = np.linspace(0.1, np.pi, 61)
    edges = np.concatenate([small, big[1:]])
    nodes, weights = _panel_nodes(edges, order)
    phis = np.concatenate([nodes, -nodes])
    vals = f_w(params, bounds, phis, p, spec).value
    w2 = np.concatenate([weights, weights])
    return float(np.sum(w2 * np.abs(vals) ** 2))


def parseval_gap(params: ScatterParams, bounds: Optional[ChannelBounds] = None, p: float = 1.0,
                 spec: SumSpec = SumSpec()) -> float:
    """Relative mismatch between ``int |f_w|^2 dphi`` and ``(1/p) sum |c_m|^2``.

    The angular integral uses Gauss-Legendre panels, geometric towards
    ``PHI_MIN`` and uniform above 0.1, on both signs of ``phi``.  The
    excluded sliver ``|phi| < PHI_MIN`` is added from the small-angle law
    ``sqrt(2 pi p) exp(i pi/4) f_w ~ -i pi c cos(pi beta) ln|phi| + const``.  Raises
    :class:`AccuracyError` if doubling the node count moves the integral
    by more than ``1e-6`` relative.
    """
    if bounds is None:
        bounds = channel_bounds(params, ThinAbsorbing())
    norm = _coefficient_norm(params, bounds) / p
    if norm == 0.0:
        return 0.0
    coarse = _integral_abs2(params, bounds, p, spec, 16)
    fine = _integral_abs2(params, bounds, p, spec, 32)
    if abs(fine - coarse) > 1e-6 * abs(fine):
        raise AccuracyError(f"Parseval quadrature unresolved: {coarse!r} vs {fine!r}")
    return abs(fine + _sliver(params, bounds, p, spec) - norm) / norm


def _sliver(params, bounds, p, spec):
    # int_{|phi| < PHI_MIN} |a ln|phi| + b|^2 with the small-angle slope
    # a = -i pi c cos(pi beta) * PREF and b matched to f_w(+-PHI_MIN)
    eps = PHI_MIN
    lg = math.log(eps)
    a = -1j * math.pi * params.coupling_sq * math.cos(math.pi * params.beta) * prefactor(p)
    total = 0.0
    for g in f_w(params, bounds, np.array([eps, -eps]), p, spec).value:
        b = g - a * lg
        total += eps * (abs(a) ** 2 * (lg * lg - 2.0 * lg + 2.0)
                        + 2.0 * (a * np.conj(b)).real * (lg - 1.0) + abs(b) ** 2)
    return total
