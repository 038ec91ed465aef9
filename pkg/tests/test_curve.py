from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import disk_pair
from spectral_moduli import curve as cv
from spectral_moduli.bspace import solve_Ba
from spectral_moduli.errors import CycleCollision, NotInBa
from spectral_moduli.polyalg import from_disk_roots, from_real_coordinates

GENERIC = (0.3 + 0.4j, 0.5 - 0.2j)


def _circle(c, r, n=4000):
    return c + r * np.exp(1j * np.linspace(0, 2 * np.pi, n + 1))


def test_continue_nu_constant_path():
    a = from_disk_roots(*GENERIC)
    seed = np.sqrt(complex(0.5 * a(0.5)))
    bp = cv.continue_nu(a, np.full(10, 0.5 + 0j), seed)
    assert np.all(bp.nu_values == seed)


def test_continue_nu_monodromy():
    a = from_disk_roots(*GENERIC)
    al = GENERIC[0]
    one = _circle(al, 0.05)
    seed = np.sqrt(complex(one[0] * a(one[0])))
    assert abs(cv.continue_nu(a, one, seed).nu_values[-1] + seed) < 1e-10
    # around alpha_1 and its reflection: both branch points enclosed
    m, r = 0.5 * (al + 1 / np.conj(al)), 0.5 * abs(1 / np.conj(al) - al) + 0.05
    two = m + (r * np.cos(np.linspace(0, 2 * np.pi, 8001)) + 0.08j * np.sin(np.linspace(0, 2 * np.pi, 8001))) \
        * (1 / np.conj(al) - al) / abs(1 / np.conj(al) - al)
    seed = np.sqrt(complex(two[0] * a(two[0])))
    assert abs(cv.continue_nu(a, two, seed).nu_values[-1] - seed) < 1e-10


def test_build_cycles_symmetric_roots():
    al = 0.53 + 0.53j
    cyc = cv.build_cycles(from_disk_roots(al, np.conj(al)))
    assert abs(cyc.A1.p - al) < 1e-15
    assert abs(cyc.A1.q - (0.943396 + 0.943396j)) < 1e-6


def test_build_cycles_colinear_collision():
    with pytest.raises(CycleCollision):
        cv.build_cycles(from_disk_roots(0.3, 0.6))


def test_intersection_numbers():
    cyc = cv.build_cycles(from_disk_roots(0.5j, -0.5j))
    assert abs(cv.intersection_number(cyc.A1, cyc.B1)) == 1
    assert abs(cv.intersection_number(cyc.A2, cyc.B2)) == 1
    assert cv.intersection_number(cyc.A1, cyc.B2) == 0
    assert cv.intersection_number(cyc.A1, cyc.A2) == 0


def test_contractible_loop_has_zero_period():
    a = from_disk_roots(*GENERIC)
    z = _circle(-0.6 + 0.0j, 0.1, 20000)
    dz = 1j * (z - (-0.6))
    b = from_real_coordinates([1.0, 0.3, -0.4, 0.8], 3)
    val = cv.sampled_period(a, b, z, dz, 2 * np.pi / 20000)
    assert abs(val) < 1e-10


@settings(max_examples=15)
@given(disk_pair(0.15, 0.85, 0.1))
def test_generic_A_periods_are_real(pair):
    a = from_disk_roots(*pair)
    try:
        cyc = cv.build_cycles(a)
    except CycleCollision:
        return
    b = from_real_coordinates([0.7, -0.2, 1.3, 0.4], 3)
    for loop in (cyc.A1, cyc.A2):
        p = cv.period(a, b, loop)
        assert abs(p.imag) < 1e-8 * max(1.0, abs(p))


def test_period_against_stadium_trapezoid():
    a = from_disk_roots(*GENERIC)
    cyc = cv.build_cycles(a)
    b = from_real_coordinates([0.7, -0.2, 1.3, 0.4], 3)
    for loop in cyc.as_list():
        ref = cv.stadium_period(a, b, loop.p, loop.q, n=200_000)
        got = cv.period(a, b, loop)
        assert min(abs(got - ref), abs(got + ref)) < 1e-6 * max(1.0, abs(ref))


def test_Ba_elements_have_vanishing_A_periods():
    a = from_disk_roots(*GENERIC)
    cyc = cv.build_cycles(a)
    for g in solve_Ba(a).generators:
        for loop in (cyc.A1, cyc.A2):
            assert abs(cv.period(a, g.coeffs, loop)) < 1e-8


def test_q_at_sym_two_routes():
    al = 0.4 + 0.35j
    a = from_disk_roots(al, np.conj(al))
    G = np.array([g.coeffs for g in solve_Ba(a).generators])
    q = cv.q_at_sym(a, G)
    ref = cv.sampled_q_at_sym(a, G, n=400_000)
    assert np.max(np.abs(q.real)) < 1e-10
    np.testing.assert_allclose(q, ref, atol=1e-7)


def test_q_at_sym_rejects_non_Ba_input():
    a = from_disk_roots(*GENERIC)
    with pytest.raises(NotInBa):
        cv.q_at_sym(a, from_real_coordinates([1.0, 0.0, 0.0, 0.0], 3))


def test_bilinear_nondegeneracy():
    rng = np.random.default_rng(7)
    for _ in range(10):
        pair = [complex(*rng.uniform(-0.6, 0.6, 2)) for _ in range(2)]
        a = from_disk_roots(*pair)
        try:
            cyc = cv.build_cycles(a)
        except CycleCollision:
            continue
        # lambda p_k for a real basis p_k of P^1_R
        ps = np.array([[0, 1, 1, 0], [0, 1j, -1j, 0]], dtype=complex)
        M = np.array([[cv.period(a, p, loop).real for p in ps] for loop in (cyc.A1, cyc.A2)])
        assert np.linalg.cond(M) < 1e6
