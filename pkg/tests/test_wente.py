from __future__ import annotations

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from spectral_moduli.blowup import alpha0
from spectral_moduli.errors import DomainError
from spectral_moduli.polyalg import from_disk_roots, poly_roots
from spectral_moduli.wente import (
    WenteState,
    abresch_component,
    alpha_plus_field,
    real_symmetric_basis,
    wente_a,
    wente_coeffs,
    wente_field,
    wente_shape,
    wente_state,
)

GRID = (0.1, 0.5, 1.0, 2.0, 10.0)


def test_coefficients_at_one():
    a0 = alpha0()
    np.testing.assert_allclose(wente_coeffs(1.0), [1, -(4 + a0), 7 + 2 * a0, -(4 + a0), 1], atol=1e-15)


@pytest.mark.parametrize("u", GRID)
def test_wente_a_matches_closed_form(u):
    a = wente_a(u)
    np.testing.assert_allclose(a.coeffs, wente_coeffs(u), atol=1e-11 * max(1, u * u))
    assert a.roots_in_disk[0].imag > 0


@pytest.mark.parametrize("u", GRID)
def test_delta_identity(u):
    a = wente_a(u)
    ap, am = a(1.0).real, a(-1.0).real
    assert abs(ap - u * u) < 1e-12 * max(1, u * u)
    assert abs(am - ap - 4 * alpha0() * u - 16) < 1e-8 * max(1, u * u)


def test_wente_a_domain():
    with pytest.raises(DomainError):
        wente_a(0.0)


def test_field_examples():
    f = wente_field(WenteState(2.0, 0.0, 0.7, 1.3, -0.4))
    assert f.a_plus == f.a_minus == f.beta1 == 0.0
    assert f.beta2 == pytest.approx(-4 * -0.4 * 1.3)
    assert f.beta3 == pytest.approx(4 * 0.16)
    assert wente_field(WenteState(0.0, 16.0, 1.0, 1.0, -4.0)).beta3 == 0.0


def test_state_round_trip():
    s = WenteState(1.0, 2.0, 3.0, 4.0, 5.0)
    assert WenteState.from_array(s.as_array()) == s


@pytest.mark.parametrize("u", (0.1, 1.0, 10.0))
def test_basis_shapes(u):
    b1, b2 = real_symmetric_basis(wente_a(u))
    *_, res = wente_shape(b1, b2)
    assert res < 1e-7


def test_alpha_plus_field_consistency():
    # u = sqrt(a_+) with a_+' = 4 a_+ a_- gives u' = 2 u a_-
    for u in (0.3, 1.0, 4.0):
        am = wente_a(u)(-1.0).real
        assert alpha_plus_field(u) == pytest.approx(2 * u * am, rel=1e-10)


def test_flow_reproduces_family():
    u0, u1 = 0.5, 2.0
    # time needed for u to travel from u0 to u1
    T = solve_ivp(lambda u, t: [1.0 / alpha_plus_field(u)], (u0, u1), [0.0], rtol=1e-12, atol=1e-14).y[0, -1]
    sol = solve_ivp(lambda t, y: wente_field(WenteState.from_array(y)).as_array(), (0.0, T),
                    wente_state(u0).as_array(), method="DOP853", rtol=1e-12, atol=1e-12)
    got = sol.y[:, -1]
    want = wente_state(u1).as_array()
    np.testing.assert_allclose(got, want, rtol=1e-6)
    assert np.all(np.diff(sol.y[0]) > 0)  # a_+ strictly increasing


def test_abresch_components():
    assert abresch_component(wente_a(1.0)) == "A_minus"
    c = np.poly([5, 2.5, 0.4, 0.2])[::-1]
    assert abresch_component(c) == "A_plus"
    with pytest.raises(DomainError):
        abresch_component(from_disk_roots(0.5, 0.5j))
    # a double real root is neither
    assert abresch_component(np.poly([2, 2, 0.5, 0.5])[::-1]) == "Neither"


def test_wente_roots_off_circle():
    for u in GRID:
        z = poly_roots(wente_coeffs(u))
        assert np.min(np.abs(np.abs(z) - 1)) > 1e-3
