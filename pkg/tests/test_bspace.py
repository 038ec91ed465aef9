from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import disk_pair
from spectral_moduli import curve as cv
from spectral_moduli.bspace import (
    ba_kernel,
    boundary_critical_root,
    change_of_basis,
    df_at_one,
    in_S21,
    normalised_basis,
    orient_frame,
    period_map_basis,
    solve_Ba,
    winding_number,
)
from spectral_moduli.errors import CycleCollision, NoPositiveOrientation, RootBracketFailure
from spectral_moduli.polyalg import from_disk_roots, is_self_inversive
from spectral_moduli.wente import wente_a


@settings(max_examples=10)
@given(disk_pair(0.15, 0.85, 0.1))
def test_solve_Ba_kernel(pair):
    a = from_disk_roots(*pair)
    try:
        cyc = cv.build_cycles(a)
    except CycleCollision:
        return
    space = solve_Ba(a)
    assert len(space.generators) == 2
    for g in space.generators:
        assert is_self_inversive(g.coeffs, 3, 1e-10)
        P = cv.period_matrix(a, g.coeffs, [cyc.A1, cyc.A2])
        assert np.max(np.abs(P)) < 1e-8


@settings(max_examples=8)
@given(disk_pair(0.15, 0.85, 0.1))
def test_period_map_basis_normalisation(pair):
    a = from_disk_roots(*pair)
    try:
        cyc = cv.build_cycles(a)
    except CycleCollision:
        return
    basis = period_map_basis(a, cycles=cyc)
    P = cv.period_matrix(a, basis.as_array(), [cyc.B1, cyc.B2])
    np.testing.assert_allclose(P, 2j * np.pi * np.eye(2), atol=1e-7)


def test_change_of_basis_round_trip():
    a = from_disk_roots(0.3 + 0.4j, 0.5 - 0.2j)
    space = solve_Ba(a)
    n, p = normalised_basis(space), period_map_basis(a, space)
    T = change_of_basis(n, p)
    np.testing.assert_allclose(T @ n.as_array(), p.as_array(), atol=1e-9)
    back = change_of_basis(p, n)
    np.testing.assert_allclose(back @ T, np.eye(2), atol=1e-9)


def test_normalised_basis_values_at_zero():
    b = normalised_basis(solve_Ba(from_disk_roots(0.3 + 0.4j, 0.5 - 0.2j)))
    assert abs(b.b1(0.0) - 1) < 1e-12 and abs(b.b2(0.0) - 1j) < 1e-12


def test_winding_number_lower_genus():
    assert winding_number([0.5]) == 0
    assert winding_number([]) == 1


@pytest.mark.parametrize("eps", [1e-3, 1e-2])
def test_winding_number_changes_across_S21(eps):
    r1, r2 = wente_a(1.0).roots_in_disk
    assert {winding_number((r1 * (1 - eps), r2)), winding_number((r1 * (1 + eps), r2))} == {-1, 1}


def test_S21_membership():
    assert in_S21(solve_Ba(wente_a(1.0)))
    assert not in_S21(solve_Ba(from_disk_roots(0.3 + 0.4j, 0.5 - 0.2j)))


def test_orient_frame_deterministic_and_positive():
    a = wente_a(0.5)
    f1, f2 = orient_frame(a), orient_frame(a)
    np.testing.assert_array_equal(f1.bs(), f2.bs())
    assert f1.orientations == f2.orientations
    assert min(f1.phi) > 0 and sum(f1.phi) < np.pi


def test_orient_frame_outside_S21():
    with pytest.raises(NoPositiveOrientation):
        orient_frame(from_disk_roots(0.3 + 0.4j, 0.5 - 0.2j))


def _df_finite_difference(alpha, h=1e-5):
    """|d/dt f(e^{it})| at t = 0 for f = b2/b1, by central differences."""
    b = normalised_basis(ba_kernel([alpha]))
    f = lambda t: b.b2(np.exp(1j * t)) / b.b1(np.exp(1j * t))  # noqa: E731
    if abs(f(0.0)) > 1e3:
        f = lambda t: b.b1(np.exp(1j * t)) / b.b2(np.exp(1j * t))  # noqa: E731
    return abs((f(h) - f(-h)) / (2 * h))


def test_boundary_critical_root_half():
    cr = boundary_critical_root(0.5)
    assert abs(abs(cr.alpha) - 0.5) < 1e-12
    assert df_at_one(cr.alpha) < 1e-7
    assert _df_finite_difference(cr.alpha) < 1e-6
    # a generic root of the same modulus is far from critical
    assert _df_finite_difference(0.5j) > 1.0


def test_boundary_critical_root_tends_to_one():
    vals = [abs(boundary_critical_root(k).alpha - 1) for k in (0.9, 0.99, 0.999)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 0.05


def test_boundary_critical_root_domain():
    with pytest.raises(RootBracketFailure):
        boundary_critical_root(1.5)
