"""Scattering amplitudes for the absorbing wire.

With ``z = exp(i phi)`` the amplitude is the Fourier series

    f(phi) = PREF * sum_m (S_m - 1) z^m,   PREF = exp(-i pi/4) / sqrt(2 pi p),

summed in the Abel sense.  It splits into the modified Aharonov-Bohm part
(pure AB phases outside the absorbed interval, closed form) and the
correction ``f_w`` built from ``S_m - S_m^AB``, whose terms fall off like
``1/m``.

Angles are reduced to ``(-pi, pi]``.  Every evaluation rejects
``|phi| < PHI_MIN``, where the forward amplitude diverges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy import integrate

from . import _kernels
from .errors import ConvergenceError, DomainError
from .params import (
    ChannelBounds,
    FiniteAbsorbing,
    Reflecting,
    ScatterParams,
    ThinAbsorbing,
    WireModel,
    channel_bounds,
    nu_squared,
)
from .smatrix import elastic_phase
from .specfun import digamma

__all__ = [
    "PHI_MIN",
    "SumSpec",
    "CorrectionSum",
    "AmplitudeBreakdown",
    "prefactor",
    "wrap_angle",
    "ab_phases",
    "f_ab_exact",
    "f_ab_mod",
    "f_w",
    "f_total",
    "lerch_unit",
    "abel_partial_wave",
    "richardson",
    "default_schedule",
]

PHI_MIN = 1e-6
ACCELERATIONS = ("plana", "log", "digamma", "none")
_ACCEL_ALIASES = {"LogSubtraction": "log", "DigammaFormula": "digamma", "None": "none"}


@dataclass(frozen=True)
class SumSpec:
    """Truncation control for the correction series.

    ``tol`` bounds the absolute error of the bracketed sum
    ``sqrt(2 pi p) |f_w|``; it does not depend on ``p``.  ``accel`` picks
    the tail treatment:

    ``"plana"``
        explicit terms up to the analytic region, then the Abel-Plana
        formula on contours rotated off the real axis (default).
    ``"log"``
        subtract ``i pi c / (2 m)`` from every term and restore it through
        ``-log(1 - z)``.  The ``O(1/m^2)`` remainder is summed until a
        summation-by-parts bound drops below ``tol``.
    ``"digamma"``
        like ``"log"`` but subtracts ``i pi c / (2 (m - beta))`` and
        restores it with the digamma formula of :func:`lerch_unit`.
    ``"none"``
        plain summation with the same tail bound.

    The names ``"LogSubtraction"``, ``"DigammaFormula"`` and ``"None"`` are
    accepted as aliases.
    """

    tol: float = 1e-10
    m_cap: int = 10 ** 7
    accel: str = "plana"

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        object.__setattr__(self, "accel", _ACCEL_ALIASES.get(self.accel, self.accel))
        if self.accel not in ACCELERATIONS:
            raise DomainError(f"accel must be one of {ACCELERATIONS}")


class CorrectionSum(NamedTuple):
    value: np.ndarray
    terms_used: int
    tail_bound: np.ndarray


@dataclass(frozen=True)
class AmplitudeBreakdown:
    """Amplitude and its two parts on an angle grid; ``f_total = f_ab_mod + f_w``."""

    phi: np.ndarray
    f_ab_mod: np.ndarray
    f_w: np.ndarray
    f_total: np.ndarray
    terms_used: int
    tail_bound: np.ndarray


def prefactor(p: float) -> complex:
    if not p > 0:
        raise DomainError(f"wavenumber must be positive, got {p}")
    return complex(np.exp(-0.25j * np.pi) / math.sqrt(2.0 * math.pi * p))


def wrap_angle(phi) -> np.ndarray:
    """Reduce to ``(-pi, pi]`` and reject the forward direction."""
    phi = np.asarray(phi, dtype=float)
    w = np.pi - np.mod(np.pi - phi, 2.0 * np.pi)
    if np.any(np.abs(w) < PHI_MIN):
        raise DomainError(f"|phi| must be at least {PHI_MIN:g} away from forward direction")
    return w


def _out(v):
    return v[()] if np.ndim(v) == 0 else v


def _geometric(z, first: int, last: int):
    """``sum_{n=first}^{last} z**n`` (zero if ``last < first``)."""
    if last < first:
        return np.zeros_like(z)
    return (z ** first - z ** (last + 1)) / (1.0 - z)


def ab_phases(m, beta: float):
    """Pure AB phase functions ``exp(i pi (m - |m - beta|))``."""
    m = np.asarray(m, dtype=float)
    return np.where(m >= beta, np.exp(1j * np.pi * beta), np.exp(-1j * np.pi * beta))


def _ab_sum(beta: float, phi: np.ndarray) -> np.ndarray:
    # Abel value of sum_m (S_m^AB - 1) z^m; reduces to -e^{i phi/2} sin(pi beta)/sin(phi/2)
    # for 0 < beta <= 1
    k = math.ceil(beta)
    return -np.exp(1j * (k - 0.5) * phi) * math.sin(math.pi * beta) / np.sin(0.5 * phi)


def f_ab_exact(beta: float, phi, p: float = 1.0):
    """Aharonov-Bohm amplitude for flux parameter ``beta``.

    For ``0 < beta <= 1`` this is
    ``-PREF exp(i phi / 2) sin(pi beta) / sin(phi / 2)``; the ``exp(i phi/2)``
    becomes ``exp(i (ceil(beta) - 1/2) phi)`` in general.
    """
    phi = wrap_angle(phi)
    return _out(prefactor(p) * _ab_sum(beta, phi))


def f_ab_mod(params: ScatterParams, bounds: ChannelBounds, phi, p: float = 1.0):
    """Modified AB amplitude: AB phases outside the absorbed interval, zero inside.

    Equals ``-PREF exp(i (m+ - m-) phi/2) sin(pi beta + (m+ + m- + 1) phi/2) / sin(phi/2)``
    whenever ``0 <= beta < 1`` and the absorbed interval contains ``m = 0``.
    With no absorbed channel it is the plain AB amplitude.
    """
    phi = wrap_angle(phi)
    beta = params.beta
    z = np.exp(1j * phi)
    total = _ab_sum(beta, phi)
    if not bounds.empty:
        k = math.ceil(beta)
        total = total - np.exp(1j * np.pi * beta) * _geometric(z, max(bounds.lo, k), bounds.hi)
        total = total - np.exp(-1j * np.pi * beta) * _geometric(z, bounds.lo, min(bounds.hi, k - 1))
    return _out(prefactor(p) * total)


# correction series ---------------------------------------------------------


def _h(q, c):
    """``exp(i pi chi) - 1`` with ``chi = c / (q + sqrt(q^2 - c))``, complex ``q``."""
    q = np.asarray(q, dtype=complex)
    root = math.sqrt(c)
    chi = c / (q + np.sqrt(q - root) * np.sqrt(q + root))
    return 2j * np.exp(0.5j * np.pi * chi) * np.sin(0.5 * np.pi * chi)


def _plana_tail(b, c, n0, phis, tol):
    """Abel-Plana value of ``sum_{n>=n0} h(n - b) e^{i n phi}`` for every angle."""
    sign = np.sign(phis)
    aphi = np.abs(phis)
    x0 = n0 - b
    y_end = 45.0 / aphi.min()
    points = []
    y = max(1.0, abs(x0))
    while y < y_end:
        points.append(y)
        y *= 4.0

    def rotated(y):
        hp, hm = _h(np.array([x0 + 1j * y, x0 - 1j * y]), c)
        return np.where(sign > 0, 1j * hp, -1j * hm) * np.exp(-aphi * y)

    def plana(t):
        if t == 0.0:
            return np.zeros_like(phis, dtype=complex)
        hp, hm = _h(np.array([x0 + 1j * t, x0 - 1j * t]), c)
        two_pi_t = 2.0 * np.pi * t
        den = -math.expm1(-two_pi_t)
        return 1j * (hp * np.exp(-(phis + 2.0 * np.pi) * t) - hm * np.exp((phis - 2.0 * np.pi) * t)) / den

    quad_tol = 0.1 * tol
    i1, e1 = integrate.quad_vec(rotated, 0.0, y_end, epsabs=quad_tol, epsrel=1e-13,
                                points=points or None, limit=4000)
    t_end = 40.0 / (2.0 * np.pi - aphi.max())
    i2, e2 = integrate.quad_vec(plana, 0.0, t_end, epsabs=quad_tol, epsrel=1e-13, limit=2000)
    zn = np.exp(1j * n0 * phis)
    value = zn * (i1 + 0.5 * _h(x0, c) + i2)
    return value, e1 + e2


def lerch_unit(alpha: float, phi):
    """``sum_{m>=0} e^{i m phi} / (m + alpha)`` for ``alpha > 0``, ``0 < |phi| <= pi``.

    Uses the closed form with ``(psi((alpha + 1)/2) - psi(alpha/2)) / 2``
    plus a finite integral over ``[|phi|, pi]``; negative angles by
    conjugation.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    phis = np.atleast_1d(np.asarray(phi, dtype=float))
    out = np.empty(phis.shape, dtype=complex)
    beta_a = 0.5 * (digamma(0.5 * (alpha + 1.0)) - digamma(0.5 * alpha))
    omega = alpha - 0.5
    for i, ph in enumerate(phis):
        a = abs(ph)
        if not 0 < a <= np.pi:
            raise DomainError("need 0 < |phi| <= pi")
        inv_sin = lambda t: 1.0 / math.sin(0.5 * t)
        if a < np.pi:
            if omega != 0:
                ic = integrate.quad(inv_sin, a, np.pi, weight="cos", wvar=omega, limit=500)[0]
                is_ = integrate.quad(inv_sin, a, np.pi, weight="sin", wvar=omega, limit=500)[0]
            else:
                ic = integrate.quad(inv_sin, a, np.pi, limit=500)[0]
                is_ = 0.0
            tail = 0.5 * np.exp(-1j * alpha * a) * (ic + 1j * is_)
        else:
            tail = 0j
        v = beta_a * np.exp(1j * alpha * (np.pi - a)) + tail
        out[i] = v if ph > 0 else np.conj(v)
    return _out(out) if np.ndim(phi) == 0 else out


def _branch_sum(b: float, c: float, start: int, phis: np.ndarray, spec: SumSpec):
    """``sum_{n>=start} h(n - b) e^{i n phi}`` with ``start - b >= sqrt(c)``.

    Returns the sum, the number of explicitly summed terms and the error bound.
    """
    if c == 0.0:
        return np.zeros(phis.shape, dtype=complex), 0, np.zeros(phis.shape)
    root = math.sqrt(c)
    if spec.accel == "plana":
        n0 = max(start, math.ceil(b + 1.5 * root) + 16)
        if n0 - start > spec.m_cap:
            raise ConvergenceError(f"needs {n0 - start} explicit terms, cap is {spec.m_cap}")
        head = _kernels.fourier_sum(_kernels.correction_terms(np.arange(start, n0) - b, c),
                                    start, phis)
        tail, err = _plana_tail(b, c, n0, phis, spec.tol)
        return head + tail, n0 - start, np.full(phis.shape, err)

    if spec.accel == "digamma":
        m0 = max(start, math.floor(b) + 1)
    else:
        m0 = max(start, 1)
    head = _kernels.fourier_sum(_kernels.correction_terms(np.arange(start, m0) - b, c),
                                start, phis)
    lead = 0j
    shift = 0.0
    closed = np.zeros(phis.shape, dtype=complex)
    if spec.accel == "log":
        lead = 0.5j * np.pi * c
        z = np.exp(1j * phis)
        partial = _kernels.fourier_sum(1.0 / np.arange(1, m0), 1, phis)
        closed = lead * (-np.log(1.0 - z) - partial)
    elif spec.accel == "digamma":
        lead = 0.5j * np.pi * c
        shift = b
        closed = lead * np.exp(1j * m0 * phis) * lerch_unit(m0 - b, phis)
    vals, used, bounds = _kernels.remainder_sum(b, c, m0, phis, lead, shift, spec.tol,
                                                m_cap=spec.m_cap)
    if np.any(bounds >= spec.tol):
        worst = int(np.argmax(bounds))
        raise ConvergenceError(
            f"correction series at phi={phis[worst]:.6g} reached m_cap={spec.m_cap} "
            f"with tail bound {bounds[worst]:.2e} > tol={spec.tol:.1e}")
    return head + closed + vals, int(m0 - start + used.max()), bounds


def _direct_correction(n, params: ScatterParams):
    # S_n - S_n^AB for isolated elastic channels
    n = np.asarray(n)
    s = np.exp(1j * np.pi * elastic_phase(n, params))
    return s - ab_phases(n, params.beta)


def f_w(params: ScatterParams, bounds: ChannelBounds, phi, p: float = 1.0,
        spec: SumSpec = SumSpec()) -> CorrectionSum:
    """Correction amplitude ``PREF * sum_{elastic m} (S_m - S_m^AB) z^m``.

    Upper channels contribute ``e^{i pi beta} (e^{i pi chi} - 1) z^m`` with
    ``chi = c / (m - beta + nu)``.  Lower channels contribute the mirror
    image with ``beta -> -beta``, ``phi -> -phi``.  ``tail_bound`` is the
    bound on the truncation error of the returned amplitude.
    """
    scalar = np.ndim(phi) == 0
    phis = np.atleast_1d(wrap_angle(phi))
    if spec.m_cap < bounds.hi + 10:
        raise DomainError("m_cap must exceed m_plus + 10")
    beta = params.beta
    c = params.coupling_sq
    k = math.ceil(beta)
    upper = max(bounds.hi + 1, k)
    lower = min(bounds.lo - 1, k - 1)
    if np.any(nu_squared(np.array([upper, lower]), params) < -1e-9 * max(1.0, c)):
        raise DomainError("elastic channels adjacent to the absorbed interval fall to the center")

    # each branch gets half of the tolerance
    half = SumSpec(0.5 * spec.tol, spec.m_cap, spec.accel)
    s1, n1, b1 = _branch_sum(beta, c, upper, phis, half)
    s2, n2, b2 = _branch_sum(-beta, c, -lower, -phis, half)
    total = np.exp(1j * np.pi * beta) * s1 + np.exp(-1j * np.pi * beta) * s2
    # channels between the interval and the split at ceil(beta) (finite wires only)
    extra = np.concatenate([np.arange(bounds.hi + 1, upper), np.arange(lower + 1, bounds.lo)])
    if extra.size:
        total = total + np.exp(1j * np.outer(phis, extra)) @ _direct_correction(extra, params)
    pref = prefactor(p)
    value = pref * total
    bound = abs(pref) * (b1 + b2)
    if scalar:
        return CorrectionSum(value[0], n1 + n2, bound[0])
    return CorrectionSum(value, n1 + n2, bound)


def f_total(params: ScatterParams, bounds: Optional[ChannelBounds], wire: WireModel, phi,
            p: float = 1.0, spec: SumSpec = SumSpec()) -> AmplitudeBreakdown:
    """Full absorbing-wire amplitude as modified-AB part plus correction."""
    if isinstance(wire, Reflecting):
        raise DomainError("the split amplitude is only derived for absorbing wires; "
                          "use abel_partial_wave for the reflecting wire")
    if bounds is None:
        bounds = channel_bounds(params, wire)
    phis = np.atleast_1d(wrap_angle(phi))
    ab = np.atleast_1d(f_ab_mod(params, bounds, phis, p))
    w = f_w(params, bounds, phis, p, spec)
    return AmplitudeBreakdown(phis, ab, w.value, ab + w.value, w.terms_used, w.tail_bound)


# Abel-summation oracle ----------------------------------------------------------


def richardson(h: Sequence[float], values: Sequence[complex]) -> complex:
    """Polynomial extrapolation of ``values(h)`` to ``h = 0`` (Neville)."""
    x = np.asarray(h, dtype=float)
    t = np.asarray(values, dtype=complex)
    for j in range(1, x.size):
        t = (x[:-j] * t[1:] - x[j:] * t[:-1]) / (x[:-j] - x[j:])
    return complex(t[0])


def default_schedule(k_min: int = 4, k_max: int = 12) -> list[float]:
    return [1.0 - 2.0 ** -k for k in range(k_min, k_max + 1)]


def abel_partial_wave(s_values: Callable[[np.ndarray], np.ndarray], phi, p: float = 1.0,
                      r_schedule: Optional[Sequence[float]] = None, order: int = 3,
                      max_residual: float = 1e-6, return_residual: bool = False):
    """Brute-force partial-wave sum ``PREF * sum_m (S_m - 1) r^|m| z^m``, ``r -> 1``.

    ``s_values`` maps an integer array of channels to ``S_m``.  The damped
    sums over ``r_schedule`` are extrapolated to ``r = 1`` with an
    ``order``-point polynomial in ``1 - r`` through the last radii.  The
    residual is the change against the same fit one radius earlier; it must
    stay below ``max_residual``.
    """
    phis = np.atleast_1d(wrap_angle(phi))
    sched = list(r_schedule) if r_schedule is not None else default_schedule()
    if len(sched) < order + 1:
        raise DomainError("r_schedule needs at least order + 1 radii")
    h = [1.0 - r for r in sched]
    n_max = int(math.ceil(37.0 / min(h)))
    m = np.arange(0, n_max + 1)
    a_pos = s_values(m) - 1.0
    a_neg = s_values(-m[1:]) - 1.0
    sums = []
    for r, hr in zip(sched, h):
        n = int(math.ceil(37.0 / hr))
        pos = _kernels.fourier_sum(a_pos[:n + 1], 0, phis, r)
        neg = _kernels.fourier_sum(a_neg[:n], 1, -phis, r)
        sums.append(pos + neg)
    sums = np.array(sums)
    pref = prefactor(p)
    value = np.empty(phis.shape, dtype=complex)
    resid = np.empty(phis.shape)
    for j in range(phis.size):
        best = richardson(h[-order:], sums[-order:, j])
        prev = richardson(h[-order - 1:-1], sums[-order - 1:-1, j])
        value[j] = pref * best
        resid[j] = abs(pref) * abs(best - prev)
    if np.any(resid > max_residual):
        worst = int(np.argmax(resid))
        raise ConvergenceError(f"Abel extrapolation at phi={phis[worst]:.6g} has residual "
                               f"{resid[worst]:.2e} > {max_residual:.1e}")
    if np.ndim(phi) == 0:
        value, resid = value[0], resid[0]
    if return_residual:
        return value, resid
    return value
