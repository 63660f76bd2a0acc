"""Field parameters, the channel spectrum and the absorbed-channel interval.

An atom of polarizability ``alpha`` moving near a wire charged to the
voltage parameter ``kappa`` (radial field ``E = kappa / (2 pi rho)``) in a
uniform field ``B`` sees an Aharonov-Bohm vector potential of strength
``beta`` and an attractive ``1/rho**2`` potential of strength ``gamma**2``.
Partial wave ``m`` then obeys a Bessel equation of order ``nu`` with::

    nu**2 = (m - beta)**2 - gamma**2 - beta**2 = m**2 - 2 m beta - gamma**2

Channels with ``nu**2 < 0`` fall onto the wire.

All inputs are SI.  ``beta = alpha kappa B / (2 pi hbar)`` and
``gamma = sqrt(alpha kappa**2 M0) / (2 pi hbar)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import constants

from .errors import DomainError

__all__ = [
    "PhysicalInputs",
    "ScatterParams",
    "ChannelKind",
    "OrderNu",
    "ThinAbsorbing",
    "FiniteAbsorbing",
    "Reflecting",
    "WireModel",
    "ChannelBounds",
    "derive_params",
    "nu_squared",
    "m_sq_minus_nu_sq",
    "order_nu",
    "is_absorbed",
    "channel_bounds",
    "floor_formula_bounds",
]

HBAR = constants.hbar


@dataclass(frozen=True)
class PhysicalInputs:
    """Laboratory parameters in SI units.

    Give exactly one of ``kappa`` (V) or ``E_field_at_surface`` (V/m); the
    latter needs ``rho0`` and sets ``kappa = 2 pi rho0 E``.
    """

    alpha: float
    B: float
    M0: float
    kappa: Optional[float] = None
    rho0: Optional[float] = None
    E_field_at_surface: Optional[float] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"polarizability must be positive, got {self.alpha}")
        if not self.M0 > 0:
            raise DomainError(f"rest mass must be positive, got {self.M0}")
        if self.B < 0:
            raise DomainError(f"B must be non-negative, got {self.B}")
        if self.rho0 is not None and not self.rho0 > 0:
            raise DomainError(f"rho0 must be positive, got {self.rho0}")
        if (self.kappa is None) == (self.E_field_at_surface is None):
            raise DomainError("give exactly one of kappa or E_field_at_surface")
        if self.E_field_at_surface is not None and self.rho0 is None:
            raise DomainError("E_field_at_surface needs the wire radius rho0")
        if self.kappa is not None and self.kappa < 0:
            raise DomainError(f"kappa must be non-negative, got {self.kappa}")

    @property
    def kappa_value(self) -> float:
        if self.kappa is not None:
            return float(self.kappa)
        return 2.0 * math.pi * self.rho0 * self.E_field_at_surface


@dataclass(frozen=True)
class ScatterParams:
    """Dimensionless parameters of the scattering problem.

    In ``"exact"`` mode the attractive strength is ``beta**2 + gamma**2``
    (the magnetic mass is kept).  In ``"decoupled"`` mode it is
    ``gamma_tilde**2`` independently of ``beta``, which makes observables
    periodic in ``beta``.
    """

    beta: float
    gamma: float
    epsilon: float = 0.0
    coupling_mode: str = "exact"
    gamma_tilde: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.beta):
            raise DomainError("beta must be finite")
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma}")
        if not self.epsilon >= 0:
            raise DomainError(f"epsilon must be non-negative, got {self.epsilon}")
        if self.coupling_mode not in ("exact", "decoupled"):
            raise DomainError(f"unknown coupling mode {self.coupling_mode!r}")
        if self.coupling_mode == "decoupled":
            if self.gamma_tilde is None or not self.gamma_tilde >= 0:
                raise DomainError("decoupled mode needs gamma_tilde >= 0")

    @classmethod
    def decoupled(cls, beta: float, gamma_tilde: float) -> "ScatterParams":
        return cls(beta=beta, gamma=gamma_tilde, coupling_mode="decoupled",
                   gamma_tilde=gamma_tilde)

    @property
    def coupling_sq(self) -> float:
        """Strength ``c`` in ``nu**2 = (m - beta)**2 - c``."""
        if self.coupling_mode == "exact":
            return self.beta * self.beta + self.gamma * self.gamma
        return self.gamma_tilde * self.gamma_tilde

    def mirrored(self) -> "ScatterParams":
        """Parameters with ``beta -> -beta``."""
        return ScatterParams(-self.beta, self.gamma, self.epsilon,
                             self.coupling_mode, self.gamma_tilde)

    def shifted(self, dbeta: float) -> "ScatterParams":
        return ScatterParams(self.beta + dbeta, self.gamma, self.epsilon,
                             self.coupling_mode, self.gamma_tilde)


def derive_params(phys: PhysicalInputs) -> ScatterParams:
    """Dimensionless ``beta``, ``gamma`` and magnetic-mass ratio from SI inputs.

    In SI the Roentgen term carries no ``1/c``, so the magnetic mass is
    ``alpha B**2`` and ``epsilon = alpha B**2 / M0 = beta**2 / gamma**2``.
    """
    kappa = phys.kappa_value
    h = 2.0 * math.pi * HBAR
    beta = phys.alpha * kappa * phys.B / h
    gamma = math.sqrt(phys.alpha * kappa * kappa * phys.M0) / h
    epsilon = phys.alpha * phys.B ** 2 / phys.M0
    return ScatterParams(beta=beta, gamma=gamma, epsilon=epsilon)


def nu_squared(m, params: ScatterParams):
    """Squared Bessel order of channel ``m`` (scalar or integer array)."""
    m = np.asarray(m, dtype=float)
    if params.coupling_mode == "exact":
        out = m * m - 2.0 * m * params.beta - params.gamma ** 2
    else:
        d = m - params.beta
        out = d * d - params.gamma_tilde ** 2
    return out[()] if out.ndim == 0 else out


def m_sq_minus_nu_sq(m, params: ScatterParams):
    """``m**2 - nu**2`` without cancellation; used for ``|m| - nu``."""
    m = np.asarray(m, dtype=float)
    if params.coupling_mode == "exact":
        out = 2.0 * m * params.beta + params.gamma ** 2
    else:
        out = 2.0 * m * params.beta - params.beta ** 2 + params.gamma_tilde ** 2
    return out[()] if out.ndim == 0 else out


def _zero_tol(m, params: ScatterParams):
    m = np.asarray(m, dtype=float)
    return 1e-12 * np.maximum(1.0, np.maximum(m * m, params.coupling_sq))


class ChannelKind(enum.Enum):
    ELASTIC = "elastic"
    THRESHOLD = "threshold"
    ABSORBED = "absorbed"


@dataclass(frozen=True)
class OrderNu:
    m: int
    nu_sq: float
    kind: ChannelKind

    @property
    def magnitude(self) -> float:
        return math.sqrt(abs(self.nu_sq))


def order_nu(m: int, params: ScatterParams) -> OrderNu:
    nsq = float(nu_squared(m, params))
    tol = float(_zero_tol(m, params))
    if abs(nsq) < tol:
        kind = ChannelKind.THRESHOLD
    elif nsq < 0:
        kind = ChannelKind.ABSORBED
    else:
        kind = ChannelKind.ELASTIC
    return OrderNu(int(m), nsq, kind)


def is_absorbed(m, params: ScatterParams):
    """True where ``nu**2`` is negative beyond the zero tolerance."""
    return nu_squared(m, params) < -_zero_tol(m, params)


@dataclass(frozen=True)
class ThinAbsorbing:
    """Line wire that swallows every atom falling onto it."""


@dataclass(frozen=True)
class FiniteAbsorbing:
    """Absorbing wire of scaled radius ``a = p rho0``."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"a = p*rho0 must be positive, got {self.a}")


@dataclass(frozen=True)
class Reflecting:
    """Hard-core wire of scaled radius ``a = p rho0``."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"a = p*rho0 must be positive, got {self.a}")


WireModel = Union[ThinAbsorbing, FiniteAbsorbing, Reflecting]


@dataclass(frozen=True)
class ChannelBounds:
    """Absorbed channels ``lo <= m <= hi``.

    For an empty set ``lo == hi + 1`` and the pair marks where elastic
    channels switch from ``m < beta`` to ``m >= beta``.
    """

    lo: int
    hi: int

    @property
    def m_minus(self) -> int:
        return -self.lo

    @property
    def m_plus(self) -> int:
        return self.hi

    @property
    def absorbed_count(self) -> int:
        return max(0, self.hi - self.lo + 1)

    @property
    def empty(self) -> bool:
        return self.hi < self.lo

    def contains(self, m):
        m = np.asarray(m)
        return (m >= self.lo) & (m <= self.hi)


def floor_formula_bounds(params: ScatterParams) -> tuple[int, int]:
    """``(m_minus, m_plus) = floor(sqrt(c) -+ beta)``; unreliable near integers."""
    root = math.sqrt(params.coupling_sq)
    return math.floor(root - params.beta), math.floor(root + params.beta)


def _scan_bounds(params: ScatterParams) -> ChannelBounds:
    # nu**2 is a parabola in m with its minimum at m = beta
    m0 = int(round(params.beta))
    if not is_absorbed(m0, params):
        k = math.ceil(params.beta)
        return ChannelBounds(k, k - 1)
    hi = m0
    while is_absorbed(hi + 1, params):
        hi += 1
    lo = m0
    while is_absorbed(lo - 1, params):
        lo -= 1
    root = math.sqrt(params.coupling_sq)
    if min(abs(root - params.beta - round(root - params.beta)),
           abs(root + params.beta - round(root + params.beta))) > 1e-9 * max(1.0, root):
        assert (-lo, hi) == floor_formula_bounds(params), (lo, hi, params)
    return ChannelBounds(lo, hi)


def channel_bounds(params: ScatterParams, wire: WireModel = ThinAbsorbing()) -> ChannelBounds:
    """Interval of channels removed from the outgoing flux.

    For thin and reflecting wires this is the fall-to-center interval found
    by scanning the sign of ``nu**2``.  A finite absorbing wire of radius
    ``a`` removes ``|m| <= floor(a)``, together with any channel that would
    still fall to the center.
    """
    bounds = _scan_bounds(params)
    if isinstance(wire, FiniteAbsorbing):
        k = math.floor(wire.a)
        if bounds.empty:
            return ChannelBounds(-k, k)
        return ChannelBounds(min(-k, bounds.lo), max(k, bounds.hi))
    return bounds
