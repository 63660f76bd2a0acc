"""Scattering of polarizable atoms by a charged wire in a magnetic field.

The induced dipole gives an Aharonov-Bohm type phase of strength ``beta``
and an attractive ``1/rho**2`` potential of strength ``gamma**2``; channels
that fall onto the wire are absorbed.
"""
from .errors import AbwireError, AccuracyError, ConvergenceError, DomainError
from .params import (
    ChannelBounds,
    FiniteAbsorbing,
    PhysicalInputs,
    Reflecting,
    ScatterParams,
    ThinAbsorbing,
    channel_bounds,
    derive_params,
    nu_squared,
    order_nu,
)
from .smatrix import s_matrix, s_values
from .amplitude import SumSpec, abel_partial_wave, f_ab_exact, f_ab_mod, f_total, f_w
from .xsection import angular_scan, parseval_gap, scaled_dcs, sigma_absorption

__version__ = "0.1.0"
