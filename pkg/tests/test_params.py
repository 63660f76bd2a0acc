import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import constants

from abwire.errors import DomainError
from abwire.params import (
    ChannelKind,
    FiniteAbsorbing,
    PhysicalInputs,
    Reflecting,
    ScatterParams,
    ThinAbsorbing,
    channel_bounds,
    derive_params,
    floor_formula_bounds,
    is_absorbed,
    m_sq_minus_nu_sq,
    nu_squared,
    order_nu,
)


def test_realistic_field_parameter():
    phys = PhysicalInputs(alpha=1.0e-39, B=5.0, M0=1e-25, rho0=1e-3, E_field_at_surface=1e7)
    assert phys.kappa_value == pytest.approx(2 * math.pi * 1e4)
    sp = derive_params(phys)
    want = 1.0e-39 * 2 * math.pi * 1e4 * 5.0 / (2 * math.pi * constants.hbar)
    assert sp.beta == pytest.approx(want, rel=1e-14)
    assert sp.beta == pytest.approx(0.48, abs=0.01)


def test_zero_field():
    sp = derive_params(PhysicalInputs(alpha=2e-39, B=0.0, M0=3e-26, kappa=1e3))
    assert sp.beta == 0 and sp.epsilon == 0


@settings(max_examples=100)
@given(st.floats(1e-42, 1e-36), st.floats(1e-3, 20), st.floats(1e-27, 1e-24), st.floats(1, 1e6))
def test_magnetic_mass_ratio(alpha, B, M0, kappa):
    sp = derive_params(PhysicalInputs(alpha=alpha, B=B, M0=M0, kappa=kappa))
    assert sp.beta ** 2 / sp.gamma ** 2 == pytest.approx(alpha * B ** 2 / M0, rel=1e-13)
    assert sp.epsilon * sp.gamma ** 2 == pytest.approx(sp.beta ** 2, rel=1e-13)


@pytest.mark.parametrize("kw", [
    dict(alpha=0.0, B=1.0, M0=1.0, kappa=1.0),
    dict(alpha=1.0, B=1.0, M0=-1.0, kappa=1.0),
    dict(alpha=1.0, B=1.0, M0=1.0),
    dict(alpha=1.0, B=1.0, M0=1.0, E_field_at_surface=1.0),
    dict(alpha=1.0, B=1.0, M0=1.0, kappa=1.0, E_field_at_surface=1.0, rho0=1.0),
])
def test_physical_inputs_rejected(kw):
    with pytest.raises(DomainError):
        PhysicalInputs(**kw)


def test_nu_squared_examples():
    assert nu_squared(0, ScatterParams(0.7, 1.9)) == pytest.approx(-1.9 ** 2)
    assert nu_squared(3, ScatterParams(0.5, 2.0)) == pytest.approx(2.0)
    sp = ScatterParams(0.5, 5.1)
    assert nu_squared(5, sp) == pytest.approx(-6.01)
    assert nu_squared(6, sp) == pytest.approx(3.99)


@settings(max_examples=200)
@given(st.integers(-500, 500), st.floats(-3, 3), st.floats(0, 60))
def test_exact_and_decoupled_forms_agree(m, beta, gamma):
    exact = ScatterParams(beta, gamma)
    dec = ScatterParams.decoupled(beta, math.sqrt(beta ** 2 + gamma ** 2))
    assert nu_squared(m, exact) == pytest.approx(nu_squared(m, dec), abs=1e-9 * max(1, m * m))
    assert m_sq_minus_nu_sq(m, exact) == pytest.approx(m * m - nu_squared(m, exact),
                                                       abs=1e-9 * max(1, m * m))


def test_order_kinds():
    sp = ScatterParams(0.0, 0.0)
    assert order_nu(0, sp).kind is ChannelKind.THRESHOLD
    sp = ScatterParams(0.5, 5.1)
    assert order_nu(5, sp).kind is ChannelKind.ABSORBED
    assert order_nu(6, sp).kind is ChannelKind.ELASTIC
    assert order_nu(5, sp).magnitude == pytest.approx(math.sqrt(6.01))


def test_bounds_example():
    b = channel_bounds(ScatterParams(0.5, 5.1))
    assert (b.m_minus, b.m_plus, b.absorbed_count) == (4, 5, 10)


def test_empty_set_at_zero_coupling():
    b = channel_bounds(ScatterParams(0.0, 0.0))
    assert b.empty and b.absorbed_count == 0


def test_finite_wire_uses_integer_part():
    b = channel_bounds(ScatterParams(0.5, 5.1), FiniteAbsorbing(7.9))
    assert (b.m_minus, b.m_plus) == (7, 7)
    assert channel_bounds(ScatterParams(0.5, 5.1), Reflecting(7.9)) == channel_bounds(ScatterParams(0.5, 5.1))


@settings(max_examples=300)
@given(st.floats(-4, 4), st.floats(0, 80))
def test_scan_matches_floor_formula_away_from_integers(beta, gamma):
    sp = ScatterParams(beta, gamma)
    root = math.sqrt(sp.coupling_sq)
    for v in (root - beta, root + beta):
        assume(abs(v - round(v)) > 1e-6)
    b = channel_bounds(sp)
    assume(not b.empty)
    assert (b.m_minus, b.m_plus) == floor_formula_bounds(sp)


@settings(max_examples=300)
@given(st.floats(-4, 4), st.floats(0, 80), st.sampled_from(["exact", "decoupled"]))
def test_bounds_are_exactly_the_negative_channels(beta, gamma, mode):
    sp = ScatterParams(beta, gamma) if mode == "exact" else ScatterParams.decoupled(beta, gamma)
    b = channel_bounds(sp)
    m = np.arange(-120, 121)
    assert np.array_equal(b.contains(m), is_absorbed(m, sp))


def test_params_validation():
    with pytest.raises(DomainError):
        ScatterParams(0.1, -1.0)
    with pytest.raises(DomainError):
        ScatterParams(0.1, 1.0, coupling_mode="decoupled")
    with pytest.raises(DomainError):
        FiniteAbsorbing(0.0)
