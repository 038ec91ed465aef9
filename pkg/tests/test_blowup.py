from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectral_moduli.blowup import (
    S2,
    SCirclePoint,
    ab_flow_field,
    alpha0,
    beta_by_flow,
    beta_of_alpha,
    field_local,
    fixa2_jacobian,
    g_by_periods,
    g_curve,
    h1,
    phi_A,
    phi_A_pair,
)
from spectral_moduli.errors import DomainError


def test_alpha0_value():
    a = alpha0()
    assert 1.3039 < a < 1.3049
    assert abs(beta_of_alpha(a)) < 1e-10


def test_beta_sign_at_zero():
    assert beta_of_alpha(0.0) < 0


def test_beta_two_routes():
    for end in (-1.5, 0.5, 1.9, 3.0):
        start = 0.0 if end < 2 else 2.5
        assert abs(beta_by_flow(start, end) - beta_of_alpha(end)) < 1e-8


def test_beta_increasing():
    al = np.linspace(-2 + 1e-3, 2 - 1e-3, 50)
    b = [beta_of_alpha(x) for x in al]
    assert np.all(np.diff(b) > 0)


def test_beta_endpoint_trend():
    # 1 - beta(2 - eps) and beta(-2 + eps) + 1 shrink as eps -> 0, but only logarithmically
    gaps_hi = [1 - beta_of_alpha(2 - e) for e in (1e-2, 1e-4, 1e-6)]
    gaps_lo = [beta_of_alpha(-2 + e) + 1 for e in (1e-2, 1e-4, 1e-6)]
    assert gaps_hi[0] > gaps_hi[1] > gaps_hi[2] > 0
    assert gaps_lo[0] > gaps_lo[1] > gaps_lo[2] > 0


def test_beta_domain():
    with pytest.raises(DomainError):
        beta_of_alpha(-2.5)


def test_ab_flow_fixed_points():
    assert ab_flow_field(2.0, 1.0, 1.0)[:2] == (0.0, 0.0)
    assert ab_flow_field(-2.0, -1.0, 1.0)[:2] == (0.0, 0.0)


@given(st.floats(-1.1, 1.1), st.floats(0.05, 1.5))
def test_fixa2_jacobian_finite_difference(a1, a4):
    h = 1e-6

    def F(x, y):
        f = field_local(SCirclePoint(x, 1.0, y), "FixA2")
        return np.array([f.a1, f.a4])

    fd = np.column_stack([(F(a1 + h, a4) - F(a1 - h, a4)) / (2 * h), (F(a1, a4 + h) - F(a1, a4 - h)) / (2 * h)])
    np.testing.assert_allclose(fixa2_jacobian(a1, a4), fd, atol=1e-6)


def test_fix_variants_keep_their_coefficient():
    p = SCirclePoint(0.3, 1.0, 0.4)
    assert field_local(p, "FixA4").a4 == 0.0
    assert field_local(p, "FixA2").a2 == 0.0
    with pytest.raises(ValueError):
        field_local(p, "Other")


def test_g_at_zero_and_symmetry():
    assert abs(g_curve(0.0) - alpha0() ** -2) < 1e-6
    assert abs(g_curve(0.6) - g_curve(-0.6)) < 1e-7


def test_g_above_lower_bound():
    s = np.linspace(-S2 + 1e-3, S2 - 1e-3, 50)
    assert all(g_curve(x) > h1(x) for x in s)


def test_g_two_routes():
    for s in (0.0, 0.3, -0.7):
        g = g_curve(s)
        assert abs(g_by_periods(s, lo=0.5 * g, hi=1.5 * g) - g) < 1e-8


def test_g_tends_to_zero_at_edges():
    tail = [g_curve(S2 - e) for e in (1e-1, 1e-2, 1e-3)]
    assert tail[0] > tail[1] > tail[2]
    assert tail[2] < 1e-2


def test_fixa2_tangent_to_g_curve():
    for s in np.linspace(-1.0, 1.0, 9):
        h = 1e-5
        slope = (g_curve(s + h) - g_curve(s - h)) / (2 * h)
        f = field_local(SCirclePoint(s, 1.0, g_curve(s)), "FixA2")
        normal = abs(f.a4 - slope * f.a1) / np.hypot(1, slope)
        assert normal < 1e-6 * np.hypot(f.a1, f.a4)


def test_phi_A_values():
    assert abs(phi_A(0.0) - np.pi / 2) < 1e-9
    assert phi_A(-S2) == 0.0 and phi_A(S2) == np.pi
    assert phi_A_pair(0.3)[1] == pytest.approx(np.pi - phi_A(0.3))
    with pytest.raises(DomainError):
        phi_A(1.3)


def test_phi_A_increasing_and_antisymmetric():
    s = np.linspace(-S2 + 1e-3, S2 - 1e-3, 25)
    v = np.array([phi_A(x) for x in s])
    assert np.all(np.diff(v) > 0)
    np.testing.assert_allclose(v + v[::-1], np.pi, atol=1e-8)
