"""Phase functions ``S_m = exp(2 i delta_m)`` for absorbing and reflecting wires."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .errors import DomainError
from .params import (
    ChannelBounds,
    ChannelKind,
    FiniteAbsorbing,
    Reflecting,
    ScatterParams,
    ThinAbsorbing,
    WireModel,
    channel_bounds,
    m_sq_minus_nu_sq,
    nu_squared,
    order_nu,
)
from .specfun import hankel1_phase, bessel_j, bessel_y, imag_order_integral

__all__ = [
    "PhaseEntry",
    "elastic_phase",
    "s_matrix",
    "s_values",
    "hardcore_mu",
    "low_energy_delta",
]


@dataclass(frozen=True)
class PhaseEntry:
    m: int
    s: complex
    delta: Optional[float]
    channel_kind: ChannelKind


def elastic_phase(m, params: ScatterParams):
    """``|m| - nu`` for channels with ``nu**2 >= 0``, free of cancellation.

    ``exp(i pi (m - nu)) == exp(i pi (|m| - nu))`` because ``m - |m|`` is even.
    """
    m = np.asarray(m, dtype=float)
    nu = np.sqrt(np.maximum(nu_squared(m, params), 0.0))
    den = np.abs(m) + nu
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0, m_sq_minus_nu_sq(m, params) / np.where(den > 0, den, 1.0), 0.0)
    return out[()] if out.ndim == 0 else out


def _absorbing_s(m, params: ScatterParams, bounds: ChannelBounds):
    m = np.asarray(m)
    s = np.exp(1j * np.pi * elastic_phase(m, params))
    return np.where(bounds.contains(m), 0j, s)


def s_values(m, params: ScatterParams, wire: WireModel = ThinAbsorbing(),
             bounds: Optional[ChannelBounds] = None) -> np.ndarray:
    """``S_m`` for an integer array of channels.

    Absorbing wires are fully vectorized; the reflecting wire is evaluated
    channel by channel.
    """
    m = np.asarray(m, dtype=np.int64)
    if isinstance(wire, (ThinAbsorbing, FiniteAbsorbing)):
        if bounds is None:
            bounds = channel_bounds(params, wire)
        return _absorbing_s(m, params, bounds)
    return np.array([s_matrix(int(k), params, wire).s for k in m.ravel()],
                    dtype=complex).reshape(m.shape)


def s_matrix(m: int, params: ScatterParams, wire: WireModel = ThinAbsorbing()) -> PhaseEntry:
    """Phase function of channel ``m``.

    Absorbing wires give ``S_m = 0`` inside the removed interval and
    ``exp(i pi (m - nu))`` outside.  The reflecting wire of radius ``a``
    gives ``-exp(i pi (m - nu)) conj(H1_nu(a)) / H1_nu(a)`` for real
    ``nu``.  For imaginary ``nu`` it gives ``exp(i pi m) conj(I) / I``,
    where ``I`` is :func:`abwire.specfun.imag_order_integral`.
    """
    m = int(m)
    order = order_nu(m, params)
    if isinstance(wire, (ThinAbsorbing, FiniteAbsorbing)):
        bounds = channel_bounds(params, wire)
        if bounds.contains(m):
            return PhaseEntry(m, 0j, None, ChannelKind.ABSORBED)
        if order.kind is ChannelKind.ABSORBED:
            raise DomainError(f"channel {m} falls to the center but is not absorbed")
        x = float(elastic_phase(m, params))
        delta = 0.5 * math.pi * ((m - abs(m)) + x)
        return PhaseEntry(m, complex(np.exp(1j * math.pi * x)), delta, order.kind)

    if not isinstance(wire, Reflecting):
        raise TypeError(f"unknown wire model {wire!r}")
    a = wire.a
    if order.kind is ChannelKind.ABSORBED:
        integral = imag_order_integral(order.magnitude, a)
        theta = math.atan2(integral.imag, integral.real)
        s = complex(np.exp(1j * (math.pi * m - 2.0 * theta)))
        return PhaseEntry(m, s, 0.5 * math.pi * m - theta, order.kind)
    nu = math.sqrt(max(order.nu_sq, 0.0))
    theta = float(hankel1_phase(nu, a, unwrap=True))
    # H2 = conj(H1) for real order and argument, so H2/H1 = exp(-2 i theta);
    # the continuous branch of theta keeps delta continuous in a
    x = float(elastic_phase(m, params))
    phase = math.pi * x + math.pi - 2.0 * theta
    delta = 0.5 * math.pi * ((m - abs(m)) + x) - 0.5 * math.pi - theta
    return PhaseEntry(m, complex(np.exp(1j * phase)), delta, order.kind)


def hardcore_mu(m: int, params: ScatterParams, a: float) -> complex:
    """Hard-core factor ``mu_m(a) = J_nu(a) / H1_nu(a)`` for real ``nu``."""
    order = order_nu(m, params)
    if order.kind is ChannelKind.ABSORBED:
        raise DomainError(f"channel {m} has imaginary order; mu is not defined there")
    nu = math.sqrt(max(order.nu_sq, 0.0))
    j = float(bessel_j(nu, a))
    y = float(bessel_y(nu, a))
    if abs(y) >= abs(j):
        t = j / y
        return complex(t / (t + 1j))
    return complex(1.0 / (1.0 + 1j * y / j))


def low_energy_delta(m: int, params: ScatterParams, a: float, form: str = "tangent") -> float:
    """Small-``a`` phase shift of the reflecting wire.

    Real order: ``pi (m - nu) / 2``, independent of ``a``.  Imaginary order,
    ``form="tangent"``::

        pi m / 2 + arctan(tan(|nu| ln(a/2)) tan(pi |nu| / 2))

    ``form="leading"`` is the leading small-``a`` term of the imaginary
    order Hankel ratio::

        pi m / 2 + arctan(tanh(pi |nu| / 2) cot(|nu| ln(a/2) - arg Gamma(1 + i|nu|)))

    Both are defined modulo ``pi``.
    """
    order = order_nu(m, params)
    if order.kind is not ChannelKind.ABSORBED:
        x = float(elastic_phase(m, params))
        return 0.5 * math.pi * ((m - abs(m)) + x)
    nu = order.magnitude
    log_half = math.log(0.5 * a)
    if form == "tangent":
        return 0.5 * math.pi * m + math.atan(math.tan(nu * log_half) * math.tan(0.5 * math.pi * nu))
    if form == "leading":
        psi = nu * log_half - special.loggamma(1.0 + 1j * nu).imag
        return 0.5 * math.pi * m + math.atan2(math.tanh(0.5 * math.pi * nu) * math.cos(psi),
                                              math.sin(psi))
    raise ValueError(f"unknown form {form!r}")
