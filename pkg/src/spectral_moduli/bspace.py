"""The space B_a of cubics whose differential Theta(b) has imaginary periods.

B_a is the kernel of the real-linear map b -> (A1-period, A2-period) on
P^3_R. Two bases are used: the normalised one (b1(0) = 1, b2(0) = i) and the
period-map basis, whose B-periods are 2 pi i times the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import curve as cv
from .errors import NoPositiveOrientation, OnS2Locus, RankDeficiency, RootBracketFailure
from .polyalg import (
    AdmissibleA,
    SelfInversivePoly,
    as_coeffs,
    disk_root_coeffs,
    from_disk_roots,
    real_basis,
)

KERNEL_RATIO = 1e-6
S21_TOL = 1e-7


@dataclass(frozen=True)
class BaSpace:
    """Orthonormal (in real coordinates) generators of B_a plus diagnostics."""

    generators: tuple[SelfInversivePoly, SelfInversivePoly]
    singular_values: np.ndarray
    residual: float


@dataclass(frozen=True)
class BaBasis:
    b1: SelfInversivePoly
    b2: SelfInversivePoly
    normalisation: str  # "Normalised" or "PeriodMap"
    cycles: cv.CycleSet | None = None

    def as_array(self) -> np.ndarray:
        return np.array([self.b1.coeffs, self.b2.coeffs])


@dataclass(frozen=True)
class Frame:
    """(a, b1, b2) with (b1, b2) the oriented period-map basis of B_a."""

    a: AdmissibleA
    b1: SelfInversivePoly
    b2: SelfInversivePoly
    orientations: tuple[int, int] = (1, 1)
    phi: tuple[float, float] | None = field(default=None, compare=False)

    @property
    def labelling(self) -> tuple[complex, complex]:
        return self.a.roots_in_disk

    def bs(self) -> np.ndarray:
        return np.array([self.b1.coeffs, self.b2.coeffs])

    def to_json(self) -> dict:
        d = {
            "schema": 1,
            "a": self.a.poly.to_json(),
            "b1": self.b1.to_json(),
            "b2": self.b2.to_json(),
            "labelling": [[z.real, z.imag] for z in map(complex, self.labelling)],
            "orientations": list(self.orientations),
        }
        if self.phi is not None:
            d["phi"] = list(self.phi)
        return d


# ---------------------------------------------------------------------------
# kernel


def _generic_cycles(roots: Sequence[complex], lead: complex):
    bp = [0.0, *roots, *(1 / np.conj(r) for r in roots)]
    return [cv.pair_loop(r, 1 / np.conj(r), bp, lead, name=f"A{k + 1}") for k, r in enumerate(roots)]


def ba_kernel(roots: Sequence[complex], rtol: float = cv.QUAD_RTOL) -> BaSpace:
    """Kernel of the A-period map on P^{g+1}_R for the curve with the given disk roots.

    Works for any genus g = len(roots); for g = 2 this is solve_Ba.
    """
    roots = [complex(r) for r in roots]
    g = len(roots)
    d = g + 1
    U = np.array(real_basis(d))
    if g == 0:
        gens = tuple(SelfInversivePoly(u, d) for u in U)
        return BaSpace(gens, np.zeros(0), 0.0)
    lead = complex(disk_root_coeffs(*roots)[-1])
    cycles = _generic_cycles(roots, lead)
    P = np.array([np.atleast_1d(cv.period(None, U, c, rtol)) for c in cycles])
    scale = float(np.max(np.abs(P)))
    if np.max(np.abs(P.imag)) > 1e-7 * scale:
        raise RankDeficiency("A-periods of real polynomials are not real")
    _, s, vh = np.linalg.svd(P.real)
    if s[-1] < KERNEL_RATIO * s[0]:
        raise RankDeficiency(f"A-period matrix is rank deficient (singular values {s})")
    K = vh[g:]
    if K.shape[0] != 2:
        raise RankDeficiency(f"kernel dimension {K.shape[0]} != 2")
    gens = tuple(SelfInversivePoly(k @ U, d) for k in K)
    res = float(np.max(np.abs(P.real @ K.T))) / scale
    return BaSpace(gens, s, res)


def solve_Ba(a: AdmissibleA, rtol: float = cv.QUAD_RTOL) -> BaSpace:
    return ba_kernel(a.roots_in_disk, rtol)


def normalised_basis(space: BaSpace) -> BaBasis:
    """b1(0) = 1, b2(0) = i."""
    g1, g2 = space.generators
    d = g1.degree_bound
    # b -> b(0) is an isomorphism from B_a onto C = R^2
    T = np.array([[g1.coeffs[0].real, g2.coeffs[0].real], [g1.coeffs[0].imag, g2.coeffs[0].imag]])
    x1 = np.linalg.solve(T, [1.0, 0.0])
    x2 = np.linalg.solve(T, [0.0, 1.0])
    b1 = SelfInversivePoly(x1[0] * g1.coeffs + x1[1] * g2.coeffs, d)
    b2 = SelfInversivePoly(x2[0] * g1.coeffs + x2[1] * g2.coeffs, d)
    return BaBasis(b1, b2, "Normalised")


def period_map_basis(a: AdmissibleA, space: BaSpace | None = None, cycles: cv.CycleSet | None = None,
                     rtol: float = cv.QUAD_RTOL) -> BaBasis:
    """Basis with B_k-period of Theta(b_l) equal to 2 pi i delta_{kl}."""
    if space is None:
        space = solve_Ba(a, rtol)
    if cycles is None:
        cycles = cv.build_cycles(a)
    G = np.array([g.coeffs for g in space.generators])
    P = cv.period_matrix(a, G, [cycles.B1, cycles.B2], rtol)
    if np.max(np.abs(P.real)) > 1e-6 * np.max(np.abs(P)):
        raise RankDeficiency("B-periods of B_a elements are not imaginary")
    M = (2j * np.pi * np.linalg.inv(P.T)).real
    B = M @ G
    return BaBasis(SelfInversivePoly(B[0], 3), SelfInversivePoly(B[1], 3), "PeriodMap", cycles)


def change_of_basis(src: BaBasis, dst: BaBasis) -> np.ndarray:
    """Real 2x2 matrix T with dst_l = sum_j T[l, j] src_j."""
    S = np.concatenate([src.as_array().real, src.as_array().imag], axis=1)
    D = np.concatenate([dst.as_array().real, dst.as_array().imag], axis=1)
    T, *_ = np.linalg.lstsq(S.T, D.T, rcond=None)
    return T.T


def in_S21(space: BaSpace, tol: float = S21_TOL) -> bool:
    return all(abs(g(1.0)) < tol * g.norm() for g in space.generators)


# ---------------------------------------------------------------------------
# winding number


def winding_number(roots: Sequence[complex] | AdmissibleA, samples: int = 4096, on_s2_tol: float = 1e-10) -> int:
    """Winding number of (b1 + i b2)/(b1 - i b2) on the unit circle (normalised basis)."""
    if isinstance(roots, AdmissibleA):
        roots = roots.roots_in_disk
    basis = normalised_basis(ba_kernel(roots))
    b1, b2 = basis.b1, basis.b2

    def ftilde(t):
        lam = np.exp(1j * t)
        num, den = b1(lam) + 1j * b2(lam), b1(lam) - 1j * b2(lam)
        return num, den

    t = np.linspace(0.0, 2 * np.pi, samples + 1)
    num, den = ftilde(t)
    scale = max(b1.norm(), b2.norm()) ** 2
    if np.min(np.abs(num * den)) < on_s2_tol * scale:
        raise OnS2Locus("b1 - i b2 and b1 + i b2 share a root on the unit circle")
    total = 0.0
    for k in range(samples):
        total += _arg_increment(ftilde, t[k], t[k + 1], 0)
    return int(round(total / (2 * np.pi)))


def _arg_increment(ftilde, t0: float, t1: float, depth: int) -> float:
    n0, d0 = ftilde(t0)
    n1, d1 = ftilde(t1)
    step = np.angle((n1 / d1) / (n0 / d0))
    if abs(step) > np.pi / 2 and depth < 40:
        tm = 0.5 * (t0 + t1)
        return _arg_increment(ftilde, t0, tm, depth + 1) + _arg_increment(ftilde, tm, t1, depth + 1)
    return float(step)


# ---------------------------------------------------------------------------
# orientation


def phi_of_basis(a: AdmissibleA, B: np.ndarray, rtol: float = cv.QUAD_RTOL) -> np.ndarray:
    """(-i q_1(y), -i q_2(y)) for the rows of B (real numbers)."""
    q = cv.q_at_sym(a, B, rtol=rtol, check=False)
    return (-1j * np.asarray(q)).real


def orient_frame(a: AdmissibleA, labelling: tuple[complex, complex] | None = None,
                 rtol: float = cv.QUAD_RTOL) -> Frame:
    """Oriented period-map frame: the sign pair making both components of phi positive."""
    if labelling is not None and tuple(labelling) != tuple(a.roots_in_disk):
        a = from_disk_roots(*labelling)
    space = solve_Ba(a, rtol)
    if not in_S21(space):
        raise NoPositiveOrientation("a is not in S^2_1: B_a has no common root at lambda = 1")
    basis = period_map_basis(a, space, rtol=rtol)
    B = basis.as_array()
    phi = phi_of_basis(a, B, rtol)
    if np.min(np.abs(phi)) < 1e-12:
        raise NoPositiveOrientation(f"phi component vanishes: {phi}")
    s = np.sign(phi).astype(int)
    b1 = SelfInversivePoly(s[0] * B[0], 3)
    b2 = SelfInversivePoly(s[1] * B[1], 3)
    return Frame(a, b1, b2, (int(s[0]), int(s[1])), (float(abs(phi[0])), float(abs(phi[1]))))


def frame_from_basis(a: AdmissibleA, B: np.ndarray, orientations=(1, 1), rtol: float = cv.QUAD_RTOL) -> Frame:
    phi = phi_of_basis(a, B, rtol)
    return Frame(a, SelfInversivePoly(B[0], 3), SelfInversivePoly(B[1], 3), tuple(orientations),
                 (float(phi[0]), float(phi[1])))


# ---------------------------------------------------------------------------
# boundary family


@dataclass(frozen=True)
class CriticalRoot:
    alpha: complex
    r: float
    k: float


def _genus1_period(k: float, r: float) -> float:
    """A-period of Theta((lambda - r)(lambda - 1/r)) on nu^2 = lambda (lambda - k)(lambda - 1/k)."""
    loop = cv.pair_loop(k, 1 / k, [0.0, k, 1 / k], lead=-1.0)
    b = as_coeffs([1.0, -(r + 1 / r), 1.0])
    val = cv.period(None, b, loop)
    return float(val.real if abs(val.real) >= abs(val.imag) else val.imag)


def boundary_critical_root(k: float) -> CriticalRoot:
    """alpha(k) with |alpha| = k such that (lambda-1)^2 (lambda-alpha)(conj(alpha) lambda-1)/|alpha|
    lies on the closure of S^2_1.

    The genus-one curve with roots k, 1/k has B = span{(lambda-r)(lambda-1/r), i(lambda^2-1)}
    for the r in (k, 1) where the first generator has vanishing A-period. The critical points
    of f are (2r +- i(1-r^2))/(r^2+1); rotating one of them to lambda = 1 gives alpha(k).
    """
    if not 0.0 < k < 1.0:
        raise RootBracketFailure("k must lie in (0, 1)")
    lo, hi = k * (1 + 1e-9) + 1e-12, 1.0 - 1e-12
    flo, fhi = _genus1_period(k, lo), _genus1_period(k, hi)
    if np.sign(flo) == np.sign(fhi):
        raise RootBracketFailure(f"no sign change of the A-period on ({k}, 1)")
    r = brentq(lambda x: _genus1_period(k, x), lo, hi, xtol=1e-15, rtol=1e-14)
    omega = (2 * r + 1j * (r * r - 1)) / (r * r + 1)
    return CriticalRoot(complex(k / omega), float(r), float(k))


def df_at_one(alpha: complex) -> float:
    """df(1) for f = b2/b1 on the genus-one curve with disk root alpha (normalised basis),
    using the chart 1/f when |f(1)| > 1e3."""
    basis = normalised_basis(ba_kernel([alpha]))
    b1, b2 = basis.b1, basis.b2
    w = np.polyval(b1.deriv()[::-1], 1.0) * b2(1.0) - b1(1.0) * np.polyval(b2.deriv()[::-1], 1.0)
    if abs(b2(1.0)) > 1e3 * abs(b1(1.0)):
        return float(abs(w / b2(1.0) ** 2))
    return float(abs(w / b1(1.0) ** 2))
