"""The spectral curve nu^2 = lambda a(lambda), its cycles and periods of
Theta(b) = b(lambda)/nu dlambda/lambda.

Closed cycles are realised as confocal ellipses around a segment [p, q] joining
two branch points. On the ellipse lambda = m + h (R e^{it} + e^{-it}/R)/2 the
factor sqrt((lambda-p)(lambda-q)) equals w = h (R e^{it} - e^{-it}/R)/2 exactly,
and dlambda = i w dt. The remaining factor of nu is a product of principal
square roots that is analytic on the convex region bounded by the ellipse, so
no branch tracking is needed and the integrand i f(lambda)/S(lambda) is a smooth
periodic function of t.

The sampled route (:func:`continue_nu` plus trapezoid sums on stadium contours)
is kept as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import quad_vec

from .errors import BranchPointCollision, CycleCollision, NotInBa, QuadratureFailure
from .polyalg import AdmissibleA, SelfInversivePoly, as_coeffs

QUAD_RTOL = 1e-10
QUAD_LIMIT = 4000
COLLISION_TOL = 1e-6
ROUNDOFF_SLACK = 1e3


def quad(f: Callable, a: float, b: float, rtol: float = QUAD_RTOL, atol: float = 0.0, points=None):
    """Adaptive Gauss-Kronrod (15 point) quadrature of a vector valued integrand.

    Returns (value, error_estimate). Raises QuadratureFailure when the
    subdivision limit is reached before the tolerance is met. A roundoff stop
    (status 2) is accepted when the error estimate is within ROUNDOFF_SLACK of
    the requested tolerance; this happens for nearly cancelling integrands close
    to the boundary of the moduli space.
    """
    val, err, info = quad_vec(
        f, a, b, epsrel=rtol, epsabs=atol, quadrature="gk15", limit=QUAD_LIMIT, full_output=True, points=points
    )
    if info.status == 2 and err <= ROUNDOFF_SLACK * max(atol, rtol * float(np.max(np.abs(val)))):
        return val, err
    if info.status != 0:
        raise QuadratureFailure(f"adaptive quadrature did not converge (status {info.status}, error {err:.2e})")
    return val, err


def _polyvals(cs: np.ndarray, lam):
    """Evaluate several polynomials (rows of cs, lowest degree first) at lam."""
    lam = np.asarray(lam)
    pad = (slice(None),) * (cs.ndim - 1) + (None,) * lam.ndim
    out = np.zeros(cs.shape[:-1] + lam.shape, dtype=complex)
    for k in range(cs.shape[-1] - 1, -1, -1):
        out = out * lam + cs[(...,) + (k,)][pad]
    return out


def stack_polys(bs) -> tuple[np.ndarray, bool]:
    """Coefficient matrix for one or several cubics; flag says whether input was single."""
    if isinstance(bs, SelfInversivePoly):
        return bs.coeffs[None, :], True
    arr = np.asarray([b.coeffs if isinstance(b, SelfInversivePoly) else as_coeffs(b) for b in bs]) if isinstance(
        bs, (list, tuple)
    ) else np.asarray(bs, dtype=complex)
    if arr.ndim == 1:
        return arr[None, :], True
    return arr.astype(complex), False


# ---------------------------------------------------------------------------
# pair loops


def elliptic_radius(z, p: complex, q: complex) -> np.ndarray:
    """rho(z) >= 1 such that z lies on the confocal ellipse of radius rho around [p, q]."""
    m, h = 0.5 * (p + q), 0.5 * (q - p)
    w = (np.asarray(z, dtype=complex) - m) / h
    u = w + np.sqrt(w - 1) * np.sqrt(w + 1)
    return np.maximum(np.abs(u), 1.0 / np.abs(u))


@dataclass(frozen=True)
class PairLoop:
    """Closed contour around the segment [p, q] between two branch points.

    ``others`` are the remaining finite branch points and ``lead`` the leading
    coefficient, so nu^2 = lead (x-p)(x-q) prod(x - r). R = 1 degenerates to the
    doubled segment, which is still a valid parameterisation for integrands
    regular at p and q.
    """

    p: complex
    q: complex
    R: float
    others: tuple
    lead: complex = 1.0
    name: str = ""

    @property
    def m(self) -> complex:
        return 0.5 * (self.p + self.q)

    @property
    def h(self) -> complex:
        return 0.5 * (self.q - self.p)

    def point(self, t):
        e = np.exp(1j * np.asarray(t))
        return self.m + 0.5 * self.h * (self.R * e + 1.0 / (self.R * e))

    def w(self, t):
        e = np.exp(1j * np.asarray(t))
        return 0.5 * self.h * (self.R * e - 1.0 / (self.R * e))

    def dpoint(self, t):
        return 1j * self.w(t)

    def cofactor(self, lam):
        """S(lam) with nu = w S on the loop; analytic inside the ellipse."""
        m = self.m
        s = np.sqrt(complex(self.lead)) * np.ones_like(np.asarray(lam, dtype=complex))
        for r in self.others:
            s = s * np.sqrt(m - r) * np.sqrt((lam - r) / (m - r))
        return s

    def nu(self, t):
        return self.w(t) * self.cofactor(self.point(t))

    def nodes(self, n: int) -> np.ndarray:
        return self.point(np.linspace(0.0, 2 * np.pi, n + 1))

    def reversed(self) -> "PairLoop":
        return PairLoop(self.q, self.p, self.R, self.others, self.lead, self.name)

    def clearance(self, n: int = 512) -> float:
        """Distance from the sampled contour to the nearest branch point."""
        z = self.nodes(n)
        pts = np.array([self.p, self.q, *self.others])
        return float(np.min(np.abs(z[:, None] - pts[None, :])))


def pair_loop(p: complex, q: complex, branch_points: Sequence[complex], lead: complex = 1.0, R: float | None = None,
              name: str = "") -> PairLoop:
    """Ellipse around [p, q] enclosing no other branch point.

    The default radius is the geometric mean of 1 and the smallest elliptic
    radius of the other branch points.
    """
    others = tuple(complex(r) for r in branch_points if abs(r - p) > 0 and abs(r - q) > 0)
    if len(others) != len(branch_points) - 2:
        raise ValueError("p and q must both be among the branch points")
    rho = elliptic_radius(np.array(others), p, q) if others else np.array([np.inf])
    rho_min = float(np.min(rho))
    if rho_min <= 1.0 + 1e-12:
        raise BranchPointCollision("a branch point lies on the segment")
    if R is None:
        R = float(np.sqrt(rho_min)) if np.isfinite(rho_min) else 2.0
    elif R >= rho_min:
        raise BranchPointCollision("loop radius reaches another branch point")
    return PairLoop(complex(p), complex(q), float(R), others, complex(lead), name)


def loop_integral(loop: PairLoop, fcoeffs, weight: Callable | None = None, rtol: float = QUAD_RTOL):
    """Integrals of f(x)/nu * weight(x) dx over the loop for each row f of fcoeffs.

    Returns (values, error_estimate).
    """
    cs, single = stack_polys(fcoeffs)

    def integrand(t):
        lam = loop.point(t)
        val = _polyvals(cs, lam) * 1j / loop.cofactor(lam)
        if weight is not None:
            val = val * weight(lam)
        return val

    atol = 1e-2 * rtol * _scale(integrand, 0.0, 2 * np.pi)
    val, err = quad(integrand, 0.0, 2 * np.pi, rtol=rtol, atol=atol)
    return (val[0] if single else val), err


def _scale(f: Callable, a: float, b: float, n: int = 64) -> float:
    """Crude L1 size of an integrand, used to set absolute tolerances for vanishing integrals."""
    t = a + (b - a) * (np.arange(n) + 0.5) / n
    return float(max(np.max(np.abs(f(tk))) for tk in t) * (b - a))


# ---------------------------------------------------------------------------
# the spectral curve


@dataclass(frozen=True)
class SpectralCurve:
    a: AdmissibleA

    @property
    def branch_points(self) -> np.ndarray:
        return np.concatenate([[0.0], self.a.roots]).astype(complex)

    @property
    def sym_point(self) -> tuple[complex, complex]:
        return 1.0 + 0j, complex(np.sqrt(self.a(1.0).real))

    def nu_squared(self, lam):
        return lam * self.a(lam)


@dataclass(frozen=True)
class CycleSet:
    A1: PairLoop
    A2: PairLoop
    B1: PairLoop
    B2: PairLoop

    def as_list(self) -> list[PairLoop]:
        return [self.A1, self.A2, self.B1, self.B2]


def _segment_distance(p1, q1, p2, q2) -> float:
    """Euclidean distance between two planar segments."""
    def cross(u, v):
        return (np.conj(u) * v).imag

    d1, d2 = q1 - p1, q2 - p2
    den = cross(d1, d2)
    if abs(den) > 1e-300:
        s = cross(p2 - p1, d2) / den
        t = cross(p2 - p1, d1) / den
        if 0 <= s <= 1 and 0 <= t <= 1:
            return 0.0

    def pt_seg(z, p, q):
        d = q - p
        t = np.clip(((z - p) * np.conj(d)).real / abs(d) ** 2, 0, 1)
        return abs(z - (p + t * d))

    return float(min(pt_seg(p1, p2, q2), pt_seg(q1, p2, q2), pt_seg(p2, p1, q1), pt_seg(q2, p1, q1)))


def build_cycles(a: AdmissibleA, tol: float = 1e-9) -> CycleSet:
    """A_l around [alpha_l, 1/conj(alpha_l)], B1 around [0, alpha_1].

    B2 is realised as the loop around [0, alpha_2]. The reflection
    lambda -> 1/conj(lambda) maps it to a loop around {1/conj(alpha_2), inf},
    and on forms with imaginary periods both give the same period up to sign.
    Signs are fixed later by the orientation selection.
    """
    a1, a2 = a.roots_in_disk
    r1, r2 = 1 / np.conj(a1), 1 / np.conj(a2)
    bp = [0.0, a1, a2, r1, r2]
    scale = max(abs(r1), abs(r2))
    if _segment_distance(a1, r1, a2, r2) < tol * scale:
        raise CycleCollision("the two A-segments intersect")
    if _segment_distance(0, a1, a2, r2) < tol * scale or _segment_distance(0, a2, a1, r1) < tol * scale:
        raise CycleCollision("a B-segment meets the other A-segment")
    lead = a.lead
    return CycleSet(
        A1=pair_loop(a1, r1, bp, lead, name="A1"),
        A2=pair_loop(a2, r2, bp, lead, name="A2"),
        B1=pair_loop(0.0, a1, bp, lead, name="B1"),
        B2=pair_loop(0.0, a2, bp, lead, name="B2"),
    )


def _inv_lambda(lam):
    return 1.0 / lam


def period(a: AdmissibleA, b, cycle: PairLoop, rtol: float = QUAD_RTOL):
    """Integral of Theta(b) over a pair loop (vectorised over several b)."""
    val, _ = loop_integral(cycle, b, weight=_inv_lambda, rtol=rtol)
    return val


def period_matrix(a: AdmissibleA, bs, cycles: Sequence[PairLoop], rtol: float = QUAD_RTOL) -> np.ndarray:
    """Matrix P[k, j] = integral over cycles[k] of Theta(bs[j])."""
    cs, _ = stack_polys(bs)
    return np.array([np.atleast_1d(period(a, cs, c, rtol)) for c in cycles])


# ---------------------------------------------------------------------------
# the real circle and the value at the Sym point


def real_locus_integrand(a: AdmissibleA, cs: np.ndarray):
    """t -> beta_j(t)/sqrt(r(t)) on lambda = e^{it}.

    Here r(t) = e^{-2it} a(e^{it}) > 0 and beta_j = e^{-3it/2} b_j(e^{it}) is real.
    Along t in [0, 2 pi] the branch nu = -e^{3it/2} sqrt(r) runs from sigma(y) to y.
    """
    ac = a.coeffs

    def f(t):
        e = np.exp(1j * t)
        r = (np.exp(-2j * t) * npoly.polyval(e, ac)).real
        beta = (np.exp(-1.5j * t) * _polyvals(cs, e)).real
        return beta / np.sqrt(r)

    return f


def q_at_sym(a: AdmissibleA, b, rtol: float = QUAD_RTOL, check: bool = True, cycles: CycleSet | None = None):
    """Half the integral of Theta(b) along the real circle from sigma(y(a)) to y(a).

    The result is purely imaginary, -i/2 times the integral of beta/sqrt(r).
    Vectorised over several b.
    """
    cs, single = stack_polys(b)
    if check:
        cyc = cycles if cycles is not None else build_cycles(a)
        P = period_matrix(a, cs, [cyc.A1, cyc.A2], rtol)
        scale = max(1.0, float(np.max(np.abs(cs))))
        if np.max(np.abs(P)) > 1e-6 * scale:
            raise NotInBa(f"A-periods {np.max(np.abs(P)):.2e} do not vanish")
    f = real_locus_integrand(a, cs)
    val, _ = quad(f, 0.0, 2 * np.pi, rtol=rtol, atol=1e-2 * rtol * _scale(f, 0.0, 2 * np.pi))
    q = -0.5j * val
    return q[0] if single else q


# ---------------------------------------------------------------------------
# sampled route: branch continuation and stadium contours


@dataclass(frozen=True)
class BranchPath:
    contour: np.ndarray
    nu_values: np.ndarray
    seed: complex


def continue_nu(a: AdmissibleA, path, seed: complex, collision_tol: float = COLLISION_TOL,
                nu_squared: Callable | None = None, branch_points=None) -> BranchPath:
    """Continue nu = sqrt(lambda a(lambda)) along sampled nodes starting from seed.

    At every node the square root closest to the previous value is taken.
    ``nu_squared`` and ``branch_points`` override the curve (used for other
    hyperelliptic models).
    """
    z = np.asarray(path, dtype=complex)
    if nu_squared is None:
        nu_squared = lambda x: x * a(x)  # noqa: E731
        branch_points = np.concatenate([[0.0], a.roots])
    bp = np.asarray(branch_points, dtype=complex)
    dist = np.min(np.abs(z[:, None] - bp[None, :]))
    if dist < collision_tol:
        raise BranchPointCollision(f"path passes {dist:.2e} from a branch point")
    root = np.sqrt(nu_squared(z).astype(complex))
    if abs(seed**2 - root[0] ** 2) > 1e-10 * max(1.0, abs(seed) ** 2):
        raise ValueError("seed is not a square root of lambda a(lambda) at the start point")
    nu = np.empty_like(root)
    nu[0] = seed
    prev = seed
    for k in range(1, len(z)):
        v = root[k]
        if abs(v - prev) > abs(v + prev):
            v = -v
        nu[k] = v
        prev = v
    return BranchPath(z, nu, complex(seed))


def stadium_nodes(p: complex, q: complex, offset: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Closed stadium around [p, q], sampled uniformly in arc length.

    Returns (nodes, derivative w.r.t. the arc-length parameter); the last node
    repeats the first.
    """
    d = q - p
    L = abs(d)
    u = d / L
    nrm = 1j * u
    total = 2 * L + 2 * np.pi * offset
    s = np.linspace(0.0, total, n + 1)
    z = np.empty(n + 1, dtype=complex)
    dz = np.empty(n + 1, dtype=complex)
    for k, sk in enumerate(s):
        if sk <= L:
            z[k] = p - offset * nrm + sk * u
            dz[k] = u
        elif sk <= L + np.pi * offset:
            ang = (sk - L) / offset
            z[k] = q + offset * (-nrm * np.cos(ang) + u * np.sin(ang))
            dz[k] = nrm * np.sin(ang) + u * np.cos(ang)
        elif sk <= 2 * L + np.pi * offset:
            z[k] = q + offset * nrm - (sk - L - np.pi * offset) * u
            dz[k] = -u
        else:
            ang = (sk - 2 * L - np.pi * offset) / offset
            z[k] = p + offset * (nrm * np.cos(ang) - u * np.sin(ang))
            dz[k] = -nrm * np.sin(ang) - u * np.cos(ang)
    return z, dz


def sampled_period(a: AdmissibleA, b, nodes: np.ndarray, dnodes: np.ndarray, ds: float, seed_sign: int = 1) -> complex:
    """Trapezoid sum of Theta(b) over a closed sampled contour using continue_nu."""
    nu0 = seed_sign * np.sqrt(complex(nodes[0] * a(nodes[0])))
    bp = continue_nu(a, nodes, nu0)
    cs, single = stack_polys(b)
    f = _polyvals(cs, nodes) / (nodes * bp.nu_values) * dnodes
    val = ds * (0.5 * f[..., 0] + f[..., 1:-1].sum(axis=-1) + 0.5 * f[..., -1])
    if abs(bp.nu_values[-1] - bp.nu_values[0]) > 1e-6 * abs(bp.nu_values[0]):
        raise BranchPointCollision("sampled contour is not closed on the curve")
    return val[0] if single else val


def stadium_period(a: AdmissibleA, b, p: complex, q: complex, n: int = 100_000, offset: float | None = None):
    """Period over a stadium loop around [p, q] at offset 0.1 * (min branch distance)."""
    if offset is None:
        bp = np.concatenate([[0.0], a.roots])
        d = np.abs(bp[:, None] - bp[None, :])
        d[np.diag_indices(len(bp))] = np.inf
        offset = 0.1 * float(d.min())
    nodes, dz = stadium_nodes(p, q, offset, n)
    total = 2 * abs(q - p) + 2 * np.pi * offset
    return sampled_period(a, b, nodes, dz, total / n)


def sampled_q_at_sym(a: AdmissibleA, b, n: int = 200_000) -> complex:
    """Trapezoid route for q_at_sym, with nu continued from sigma(y) = (1, -sqrt(a(1)))."""
    t = np.linspace(0.0, 2 * np.pi, n + 1)
    lam = np.exp(1j * t)
    seed = -np.sqrt(a(1.0).real) + 0j
    path = continue_nu(a, lam, seed)
    cs, single = stack_polys(b)
    f = _polyvals(cs, lam) / (lam * path.nu_values) * (1j * lam)
    h = 2 * np.pi / n
    val = h * (0.5 * f[..., 0] + f[..., 1:-1].sum(axis=-1) + 0.5 * f[..., -1])
    q = 0.5 * val
    return q[0] if single else q


def intersection_number(c1: PairLoop, c2: PairLoop, n: int = 4000) -> int:
    """Intersection number of the lifts of two pair loops.

    Counts planar crossings where both lifts sit on the same sheet, weighted
    by the orientation of the crossing. Crossings on opposite sheets are not
    intersections on the curve.
    """
    t = np.linspace(0.0, 2 * np.pi, n + 1)
    z1, z2 = c1.point(t), c2.point(t)
    n1, n2 = c1.nu(t), c2.nu(t)
    total = 0
    for i in range(n):
        p, r = z1[i], z1[i + 1] - z1[i]
        for j in np.nonzero(_crossings(p, r, z2[:-1], z2[1:] - z2[:-1]))[0]:
            s_, u_ = _crossing_params(p, r, z2[j], z2[j + 1] - z2[j])
            nu1 = n1[i] + s_ * (n1[i + 1] - n1[i])
            nu2 = n2[j] + u_ * (n2[j + 1] - n2[j])
            if abs(nu1 - nu2) < abs(nu1 + nu2):
                total += int(np.sign((np.conj(r) * (z2[j + 1] - z2[j])).imag))
    return total


def _crossing_params(p, r, q, s):
    den = (np.conj(r) * s).imag
    t = (np.conj(q - p) * s).imag / den
    u = (np.conj(q - p) * r).imag / den
    return t, u


def _crossings(p, r, q, s):
    den = (np.conj(r) * s).imag
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (np.conj(q - p) * s).imag / den
        u = (np.conj(q - p) * r).imag / den
    return (den != 0) & (t >= 0) & (t < 1) & (u >= 0) & (u < 1)
