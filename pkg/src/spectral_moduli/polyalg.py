"""Self-inversive polynomials, root handling and the Cayley/scaling transforms.

Polynomials are stored as complex coefficient arrays, lowest degree first.
A polynomial p of degree bound d is self-inversive (belongs to P^d_R) when
c_k = conj(c_{d-k}); on the unit circle this makes lambda^{-d/2} p(lambda) real.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateRoots, PoleInput, RootOutOfDomain, SymPointAtInfinity

SELF_INVERSIVE_TOL = 1e-12
DEGENERACY_TOL = 1e-9


def as_coeffs(p, d: int | None = None) -> np.ndarray:
    """Complex coefficient array, zero padded to length d+1 when d is given."""
    c = np.atleast_1d(np.asarray(p, dtype=complex)).copy()
    if d is None:
        return c
    if len(c) > d + 1:
        if np.any(np.abs(c[d + 1:]) > 0):
            raise ValueError(f"polynomial has degree above bound {d}")
        c = c[: d + 1]
    return np.concatenate([c, np.zeros(d + 1 - len(c), dtype=complex)])


def reflect(c: np.ndarray, d: int) -> np.ndarray:
    """Coefficients of lambda^d conj(p(1/conj(lambda)))."""
    return np.conj(as_coeffs(c, d)[::-1])


def is_self_inversive(p, d: int, tol: float = SELF_INVERSIVE_TOL) -> bool:
    c = np.atleast_1d(np.asarray(p, dtype=complex))
    if len(c) > d + 1:
        if np.any(np.abs(c[d + 1:]) > tol):
            return False
        c = c[: d + 1]
    c = as_coeffs(c, d)
    return bool(np.all(np.abs(c - np.conj(c[::-1])) <= tol))


def real_basis(d: int) -> list[np.ndarray]:
    """A real basis of P^d_R (dimension d+1).

    Pairs (lambda^k + lambda^{d-k}, i(lambda^k - lambda^{d-k})) for k < d/2,
    and lambda^{d/2} when d is even.
    """
    basis = []
    for k in range((d + 1) // 2):
        e = np.zeros(d + 1, dtype=complex)
        e[k] += 1.0
        e[d - k] += 1.0
        basis.append(e)
        f = np.zeros(d + 1, dtype=complex)
        f[k] += 1j
        f[d - k] -= 1j
        basis.append(f)
    if d % 2 == 0:
        e = np.zeros(d + 1, dtype=complex)
        e[d // 2] = 1.0
        basis.append(e)
    return basis


def real_coordinates(p, d: int) -> np.ndarray:
    """Coordinates of p in :func:`real_basis` (inverse of :func:`from_real_coordinates`)."""
    c = as_coeffs(p, d)
    x = []
    for k in range((d + 1) // 2):
        x.append(c[k].real)
        x.append(c[k].imag)
    if d % 2 == 0:
        x.append(c[d // 2].real)
    return np.array(x)


def from_real_coordinates(x: Sequence[float], d: int) -> np.ndarray:
    c = np.zeros(d + 1, dtype=complex)
    for xi, e in zip(x, real_basis(d)):
        c += xi * e
    return c


@dataclass(frozen=True)
class SelfInversivePoly:
    """Element of P^d_R. Construction does not enforce the reflection condition;
    use :meth:`validate` or :func:`is_self_inversive` where it matters."""

    coeffs: np.ndarray
    degree_bound: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", as_coeffs(self.coeffs, self.degree_bound))

    def __call__(self, lam):
        return npoly.polyval(lam, self.coeffs)

    def deriv(self, m: int = 1) -> np.ndarray:
        return npoly.polyder(self.coeffs, m)

    def validate(self, tol: float = SELF_INVERSIVE_TOL) -> "SelfInversivePoly":
        if not is_self_inversive(self.coeffs, self.degree_bound, tol):
            raise ValueError("reflection condition violated")
        return self

    def symmetrized(self) -> "SelfInversivePoly":
        """Closest self-inversive polynomial (average with the reflection)."""
        c = 0.5 * (self.coeffs + reflect(self.coeffs, self.degree_bound))
        return SelfInversivePoly(c, self.degree_bound)

    def __add__(self, other: "SelfInversivePoly") -> "SelfInversivePoly":
        return SelfInversivePoly(self.coeffs + other.coeffs, self.degree_bound)

    def __neg__(self) -> "SelfInversivePoly":
        return SelfInversivePoly(-self.coeffs, self.degree_bound)

    def scaled(self, s: float) -> "SelfInversivePoly":
        return SelfInversivePoly(s * self.coeffs, self.degree_bound)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def to_json(self) -> list:
        return [[float(z.real), float(z.imag)] for z in self.coeffs]

    @classmethod
    def from_json(cls, data: list, degree_bound: int | None = None) -> "SelfInversivePoly":
        c = np.array([complex(re, im) for re, im in data])
        return cls(c, len(c) - 1 if degree_bound is None else degree_bound)


def polish_roots(c: np.ndarray, z: np.ndarray, tol: float = 1e-13, maxiter: int = 20) -> np.ndarray:
    """Newton-polish approximate roots of the polynomial with coefficients c."""
    dc = npoly.polyder(c)
    scale = np.sum(np.abs(c))
    z = np.array(z, dtype=complex)
    for k in range(len(z)):
        x = z[k]
        for _ in range(maxiter):
            f = npoly.polyval(x, c)
            if abs(f) <= tol * scale * max(1.0, abs(x)) ** (len(c) - 1):
                break
            df = npoly.polyval(x, dc)
            if df == 0:
                break
            step = f / df
            x = x - step
            if abs(step) <= 1e-16 * max(1.0, abs(x)):
                break
        z[k] = x
    return z


def poly_roots(p) -> np.ndarray:
    """Roots via companion-matrix eigenvalues, then Newton polishing."""
    c = np.trim_zeros(as_coeffs(p), "b")
    n = len(c) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return polish_roots(c, np.linalg.eigvals(comp))


def min_separation(z: Sequence[complex]) -> float:
    z = np.asarray(z)
    d = np.abs(z[:, None] - z[None, :])
    d[np.diag_indices(len(z))] = np.inf
    return float(d.min())


@dataclass(frozen=True)
class AdmissibleA:
    """A quartic a in H^2 together with a labelling of its disk roots."""

    poly: SelfInversivePoly
    roots_in_disk: tuple[complex, complex]
    separation: float = field(default=np.inf, compare=False)

    def __call__(self, lam):
        return self.poly(lam)

    @property
    def coeffs(self) -> np.ndarray:
        return self.poly.coeffs

    @property
    def roots(self) -> np.ndarray:
        a1, a2 = self.roots_in_disk
        return np.array([a1, a2, 1 / np.conj(a1), 1 / np.conj(a2)])

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[4])

    def deriv(self, m: int = 1) -> np.ndarray:
        return self.poly.deriv(m)

    def to_json(self) -> dict:
        return {
            "coeffs": self.poly.to_json(),
            "roots_in_disk": [[z.real, z.imag] for z in map(complex, self.roots_in_disk)],
        }


def disk_root_coeffs(*alphas: complex) -> np.ndarray:
    """Coefficients of prod_l (lambda - alpha_l)(1 - conj(alpha_l) lambda)/|alpha_l|."""
    c = np.array([1.0 + 0j])
    for al in alphas:
        f = np.array([-al, 1.0]) / abs(al)
        g = np.array([1.0, -np.conj(al)])
        c = npoly.polymul(c, npoly.polymul(f, g))
    return c


def from_disk_roots(alpha1: complex, alpha2: complex, tol: float = DEGENERACY_TOL) -> AdmissibleA:
    alpha1, alpha2 = complex(alpha1), complex(alpha2)
    for al in (alpha1, alpha2):
        if not 0.0 < abs(al) < 1.0:
            raise RootOutOfDomain(f"|alpha| = {abs(al)} is not in (0, 1)")
    roots = np.array([alpha1, alpha2, 1 / np.conj(alpha1), 1 / np.conj(alpha2)])
    sep = min_separation(roots)
    if sep < tol:
        raise DegenerateRoots(f"induced roots {sep:.3e} apart")
    poly = SelfInversivePoly(disk_root_coeffs(alpha1, alpha2), 4)
    return AdmissibleA(poly, (alpha1, alpha2), sep)


def disk_root_derivative(alpha1: complex, alpha2: complex, dalpha1: complex, dalpha2: complex) -> np.ndarray:
    """Directional derivative of :func:`disk_root_coeffs` (exact, via the product rule)."""

    def factor(al):
        f = np.array([-al, 1.0]) / abs(al)
        g = np.array([1.0, -np.conj(al)])
        return npoly.polymul(f, g)

    def dfactor(al, da):
        # d|al| = Re(conj(al) da)/|al|
        dr = (np.conj(al) * da).real / abs(al)
        f = np.array([-al, 1.0]) / abs(al)
        df = np.array([-da, 0.0]) / abs(al) - f * dr / abs(al)
        g = np.array([1.0, -np.conj(al)])
        dg = np.array([0.0, -np.conj(da)])
        return npoly.polymul(df, g) + npoly.polymul(f, dg)

    f1, f2 = factor(alpha1), factor(alpha2)
    # polymul trims trailing zeros, so pad before adding
    return (as_coeffs(npoly.polymul(dfactor(alpha1, dalpha1), f2), 4)
            + as_coeffs(npoly.polymul(f1, dfactor(alpha2, dalpha2)), 4))


def disk_roots_of(poly, tol: float = DEGENERACY_TOL) -> tuple[complex, complex]:
    """The two roots inside the unit disk, ordered by argument then modulus."""
    z = poly_roots(poly)
    inside = sorted((w for w in z if abs(w) < 1.0), key=lambda w: (np.angle(w), abs(w)))
    if len(inside) != 2:
        raise RootOutOfDomain("expected exactly two roots inside the unit disk")
    return complex(inside[0]), complex(inside[1])


def from_coeffs(c, labelling: tuple[complex, complex] | None = None) -> AdmissibleA:
    """Admissible a from raw coefficients, normalised to |a_4| = 1.

    With ``labelling`` the disk roots are matched to the given approximate
    positions, which keeps labels continuous along paths.
    """
    c = as_coeffs(c, 4)
    c = c / abs(c[4])
    al = disk_roots_of(c)
    if labelling is not None:
        l1, l2 = labelling
        if abs(al[0] - l1) + abs(al[1] - l2) > abs(al[1] - l1) + abs(al[0] - l2):
            al = (al[1], al[0])
    return from_disk_roots(*al)


def cayley(lam):
    lam = np.asarray(lam, dtype=complex)
    if np.any(np.abs(lam + 1) == 0):
        raise PoleInput("lambda = -1 maps to infinity")
    out = (lam - 1) / (1j * (lam + 1))
    return out[()] if out.ndim == 0 else out


def inverse_cayley(kappa):
    kappa = np.asarray(kappa, dtype=complex)
    if np.any(np.abs(kappa + 1j) == 0):
        raise PoleInput("kappa = -i maps to infinity")
    out = (1j - kappa) / (1j + kappa)
    return out[()] if out.ndim == 0 else out


def mobius_substitute(c: np.ndarray, d: int) -> np.ndarray:
    """Coefficients in kappa of (i+kappa)^d p((i-kappa)/(i+kappa))."""
    c = as_coeffs(c, d)
    out = np.zeros(d + 1, dtype=complex)
    minus = np.array([1j, -1.0])
    plus = np.array([1j, 1.0])
    for k, ck in enumerate(c):
        term = npoly.polymul(npoly.polypow(minus, k), npoly.polypow(plus, d - k))
        out += ck * as_coeffs(term, d)
    return out


@dataclass(frozen=True)
class RealQuartic:
    """Monic real quartic kappa^4 + a1 kappa^3 + a2 kappa^2 + a3 kappa + a4."""

    a1: float
    a2: float
    a3: float
    a4: float

    @property
    def coeffs(self) -> np.ndarray:
        """Lowest degree first."""
        return np.array([self.a4, self.a3, self.a2, self.a1, 1.0])

    def __call__(self, kappa):
        return npoly.polyval(kappa, self.coeffs)

    def roots(self) -> np.ndarray:
        return poly_roots(self.coeffs)

    def norm(self) -> float:
        return float((self.a1**12 + self.a2**6 + self.a3**4 + abs(self.a4) ** 3) ** (1.0 / 12.0))

    @classmethod
    def from_coeffs(cls, c) -> "RealQuartic":
        c = np.asarray(c, dtype=float)
        c = c / c[4]
        return cls(float(c[3]), float(c[2]), float(c[1]), float(c[0]))


def hat_transform(a: AdmissibleA, b=None, tol: float = 1e-12):
    """Cayley transform of a (and optionally a cubic b).

    Returns (a_hat, b_hat) where a_hat is a RealQuartic and b_hat the real
    coefficient array of 2i(i+k)^3 b((i-k)/(i+k))/sqrt(a(-1)), or None.
    """
    am1 = a(-1.0)
    if abs(am1) <= tol or am1.real <= tol:
        raise SymPointAtInfinity(f"a(-1) = {am1} is not positive")
    am1 = am1.real
    ah = mobius_substitute(a.coeffs, 4) / am1
    ahat = RealQuartic.from_coeffs(ah.real)
    if b is None:
        return ahat, None
    bc = b.coeffs if isinstance(b, SelfInversivePoly) else as_coeffs(b, 3)
    bh = 2j * mobius_substitute(bc, 3) / np.sqrt(am1)
    return ahat, bh.real


def inverse_hat(ahat: RealQuartic, labelling: tuple[complex, complex] | None = None) -> AdmissibleA:
    """Inverse of :func:`hat_transform` on the quartic, normalised to |lead| = 1."""
    lam_plus = np.array([1.0, 1.0])
    lam_minus = np.array([1j, -1j])  # i(1 - lambda)
    c = np.zeros(5, dtype=complex)
    for k, ak in enumerate(ahat.coeffs):
        c += ak * as_coeffs(npoly.polymul(npoly.polypow(lam_minus, k), npoly.polypow(lam_plus, 4 - k)), 4)
    return from_coeffs(c, labelling)


def scale_action(C: float, a: RealQuartic) -> RealQuartic:
    """(C.a)(kappa) = C^4 a(kappa/C)."""
    return RealQuartic(C * a.a1, C**2 * a.a2, C**3 * a.a3, C**4 * a.a4)


def s3_normalize(a: RealQuartic) -> RealQuartic:
    n = a.norm()
    if n == 0:
        raise ValueError("kappa^4 has no normalisation")
    return scale_action(1.0 / n, a)
