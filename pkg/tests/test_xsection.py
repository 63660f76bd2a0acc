import math

import numpy as np
import pytest

from abwire.amplitude import SumSpec, f_ab_mod, f_w
from abwire.errors import DomainError
from abwire.params import FiniteAbsorbing, Reflecting, ScatterParams, ThinAbsorbing, channel_bounds
from abwire.xsection import ROW_FIELDS, angular_scan, parseval_gap, scaled_dcs, sigma_absorption


def test_even_in_angle_without_field():
    sp = ScatterParams(0.0, 3.3)
    phis = np.array([0.2, 1.1, 2.5])
    assert np.allclose(scaled_dcs(sp, None, ThinAbsorbing(), phis),
                       scaled_dcs(sp, None, ThinAbsorbing(), -phis), rtol=1e-12)


def test_reduces_to_correction_at_modulation_zero():
    sp = ScatterParams(0.5, 5.1)
    b = channel_bounds(sp)
    y = scaled_dcs(sp, b, ThinAbsorbing(), np.pi / 2)
    assert y == pytest.approx(2 * np.pi * abs(f_w(sp, b, np.pi / 2).value) ** 2, rel=1e-9)


@pytest.mark.parametrize("wire", [ThinAbsorbing(), FiniteAbsorbing(3.2)])
def test_p_invariance(wire):
    sp = ScatterParams(0.5, 5.1)
    phis = np.array([0.05, 0.9, 2.4])
    ref = scaled_dcs(sp, None, wire, phis, 1.0)
    for p in (0.5, 2.0):
        assert np.allclose(scaled_dcs(sp, None, wire, phis, p), ref, rtol=1e-12, atol=0)


def test_reversal_symmetry():
    phis = np.array([0.3, 1.0, 2.9])
    a = scaled_dcs(ScatterParams(0.37, 4.0), None, ThinAbsorbing(), phis)
    b = scaled_dcs(ScatterParams(-0.37, 4.0), None, ThinAbsorbing(), -phis)
    assert np.allclose(a, b, rtol=1e-10)


def test_absorption_counts():
    assert sigma_absorption(ScatterParams(0.5, 5.1), None, ThinAbsorbing(), 1.0) == 10
    assert sigma_absorption(ScatterParams(0.0, 0.0), None, ThinAbsorbing(), 1.0) == 0
    assert sigma_absorption(ScatterParams(0.5, 5.1), None, FiniteAbsorbing(7.9), 2.0) == 7.5
    with pytest.raises(DomainError):
        sigma_absorption(ScatterParams(0.5, 5.1), None, Reflecting(1.0))


def test_parseval():
    assert parseval_gap(ScatterParams(0.0, 2.0)) < 1e-5
    assert parseval_gap(ScatterParams(0.0, 0.0)) == 0.0


def test_parseval_improves_with_tolerance():
    sp = ScatterParams(0.3, 1.5)
    loose = parseval_gap(sp, spec=SumSpec(tol=1e-2, accel="log"))
    tight = parseval_gap(sp, spec=SumSpec(tol=1e-3, accel="log"))
    assert tight < loose


def test_forward_growth_exponents():
    phis = np.geomspace(1e-3, 1e-2, 12)
    x = np.log(phis)
    slope_field = np.polyfit(x, np.log(scaled_dcs(ScatterParams(0.5, 5.1), None, ThinAbsorbing(), phis)), 1)[0]
    slope_free = np.polyfit(x, np.log(scaled_dcs(ScatterParams(0.0, 5.1), None, ThinAbsorbing(), phis)), 1)[0]
    assert -2.2 <= slope_field <= -1.8
    assert abs(slope_free) < abs(slope_field)


def test_averaged_modulation_factor():
    sp = ScatterParams(0.5, 50.1)
    b = channel_bounds(sp)
    k = b.m_plus + b.m_minus + 1
    period = 2 * np.pi / k
    phi = np.linspace(0.3, 0.3 + period, 4001)
    factor = np.sin(np.pi * sp.beta + 0.5 * k * phi) ** 2 / np.sin(np.pi * sp.beta) ** 2
    avg = np.trapezoid(factor, phi) / period
    assert avg == pytest.approx(0.5, rel=0.02)
    # the modulus of the modified part carries exactly this factor
    mod = np.abs(f_ab_mod(sp, b, phi)) ** 2 * 2 * np.pi * np.sin(0.5 * phi) ** 2
    assert np.allclose(mod, factor * np.sin(np.pi * sp.beta) ** 2, atol=1e-12)


def test_angular_scan_rows():
    sp = ScatterParams(0.5, 5.1)
    grid = np.linspace(0.1, np.pi, 70)
    scan = angular_scan(sp, ThinAbsorbing(), 1.0, grid, workers=3, chunk=16)
    assert scan.rows.shape == (70, len(ROW_FIELDS))
    assert np.array_equal(scan.column("phi"), grid)
    f = scan.column("re_f") + 1j * scan.column("im_f")
    assert np.allclose(scan.column("y"), 2 * np.pi * np.abs(f) ** 2)
    serial = angular_scan(sp, ThinAbsorbing(), 1.0, grid, chunk=16)
    assert np.array_equal(scan.rows, serial.rows)
    other = angular_scan(sp, ThinAbsorbing(), 1.0, grid)
    bound = scan.column("tail_bound") + other.column("tail_bound")
    assert np.all(np.abs(scan.column("re_f") - other.column("re_f")) <= bound)
    with pytest.raises(DomainError):
        angular_scan(sp, ThinAbsorbing(), 1.0, grid[::-1])
