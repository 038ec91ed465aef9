"""kappa-side objects at the quadruple root (lambda-1)^4.

* the period function beta(alpha) of (kappa^2 + beta)/nu on nu^2 = kappa^4 + alpha kappa^2 + 1,
  and its root alpha0;
* the reduced vector fields on monic quartics kappa^4 + a1 kappa^3 + a2 kappa^2 + a4;
* the exceptional-fibre function g and the hypotenuse limit phi_A.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import curve as cv
from .errors import DomainError, ManifoldEscape
from .polyalg import poly_roots

S2 = 2.0 / np.sqrt(3.0)


@dataclass(frozen=True)
class NlsCurve:
    alpha: float
    beta: float


@dataclass(frozen=True)
class SCirclePoint:
    a1: float
    a2: float
    a4: float


# ---------------------------------------------------------------------------
# beta(alpha) and alpha0


def nls_branch_pair(alpha: float) -> tuple[np.ndarray, complex, complex]:
    """Roots of kappa^4 + alpha kappa^2 + 1 and the pair spanning the A-cycle."""
    if alpha <= -2.0 or alpha == 2.0:
        raise DomainError(f"alpha = {alpha} is outside (-2, 2) U (2, inf)")
    if alpha < 2.0:
        psi = np.arccos(-alpha / 2.0)
        p, q = np.exp(-0.5j * psi), np.exp(0.5j * psi)
        roots = np.array([p, q, -p, -q])
    else:
        d = np.sqrt(alpha * alpha - 4.0)
        s1, s2 = np.sqrt((alpha - d) / 2.0), np.sqrt((alpha + d) / 2.0)
        p, q = 1j * s1, 1j * s2
        roots = np.array([p, q, -p, -q])
    return roots, complex(p), complex(q)


def beta_of_alpha(alpha: float, rtol: float = 1e-12) -> float:
    """The unique beta making the A-period of (kappa^2 + beta)/nu dkappa vanish.

    The A-cycle encircles the two right-half-plane branch points for alpha in (-2, 2)
    and the segment [i s1, i s2] on the imaginary axis for alpha > 2.
    """
    roots, p, q = nls_branch_pair(alpha)
    loop = cv.pair_loop(p, q, roots, 1.0)
    I, _ = cv.loop_integral(loop, np.array([[1.0, 0, 0], [0, 0, 1.0]], dtype=complex), rtol=rtol)
    beta = -I[1] / I[0]
    if abs(beta.imag) > 1e-8 * max(1.0, abs(beta)):
        raise DomainError(f"beta is not real ({beta})")
    return float(beta.real)


def ab_flow_field(alpha: float, beta: float, gamma: float) -> tuple[float, float, float]:
    """Isoperiodic deformation of (kappa^2 + beta)/nu on kappa^4 + alpha kappa^2 + 1."""
    return 4.0 - alpha * alpha, 1.0 - alpha * beta + beta * beta, 0.5 * (alpha - 2.0 * beta) * gamma


def beta_by_flow(alpha_start: float, alpha_end: float, beta_start: float | None = None,
                 rtol: float = 1e-12) -> float:
    """beta at alpha_end obtained by integrating d beta/d alpha = beta_dot/alpha_dot."""
    if beta_start is None:
        beta_start = beta_of_alpha(alpha_start)

    def rhs(al, y):
        ad, bd, _ = ab_flow_field(al, y[0], 1.0)
        return [bd / ad]

    sol = solve_ivp(rhs, (alpha_start, alpha_end), [beta_start], method="DOP853", rtol=rtol, atol=1e-14)
    return float(sol.y[0, -1])


@lru_cache(maxsize=1)
def alpha0() -> float:
    """Root of beta_of_alpha on (0, 2)."""
    return float(brentq(beta_of_alpha, 1.0, 1.6, xtol=1e-13, rtol=1e-14))


# ---------------------------------------------------------------------------
# reduced vector fields


def field_local(p: SCirclePoint, variant: str = "Full") -> SCirclePoint:
    """Vector fields on kappa^4 + a1 kappa^3 + a2 kappa^2 + a4.

    Full preserves the periods of kappa (kappa + a1/2)/nu and the highest
    coefficient of b; FixA4 and FixA2 add a multiple of the rescaling flow so
    that a4 respectively a2 stay constant (FixA2 assumes a2 = 1).
    """
    a1, a2, a4 = p.a1, p.a2, p.a4
    d = a2 - 0.25 * a1 * a1
    if variant == "Full":
        return SCirclePoint((4 * a2 - 3 * a1 * a1) * d - 16 * a4, -4 * a1 * a4, 6 * a1 * d * a4)
    if variant == "FixA4":
        return SCirclePoint(d * (4 * a2 - 4.5 * a1 * a1) - 16 * a4, -a1 * (3 * a2 * d + 4 * a4), 0.0)
    if variant == "FixA2":
        return SCirclePoint(
            2 * a4 * (8 - a1 * a1) - (4 - 3 * a1 * a1) * (1 - 0.25 * a1 * a1),
            0.0,
            a1 * a4 * (1.5 * a1 * a1 - 6 - 8 * a4),
        )
    raise ValueError(f"unknown variant {variant!r}")


def fixa2_jacobian(a1: float, a4: float) -> np.ndarray:
    """Jacobian of the FixA2 field in (a1, a4)."""
    return np.array(
        [
            [a1 * (8 - 3 * a1 * a1 - 4 * a4), 16 - 2 * a1 * a1],
            [a4 * (4.5 * a1 * a1 - 6 - 8 * a4), a1 * (1.5 * a1 * a1 - 6 - 16 * a4)],
        ]
    )


def h1(a1):
    """Zero set of the a1-component of the FixA2 field."""
    return (3 * a1**2 - 4) * (a1**2 - 4) / (8 * (8 - a1**2))


# ---------------------------------------------------------------------------
# the g-curve


G_EDGE = 1e-6


@lru_cache(maxsize=1)
def _g_branches():
    """Integral curve of FixA2 through (0, alpha0^-2), integrated as a graph over a1."""
    g0 = alpha0() ** -2

    def rhs(x, y):
        f = field_local(SCirclePoint(x, 1.0, y[0]), "FixA2")
        return [f.a4 / f.a1]

    def escaped(x, y):
        return y[0] - h1(x)

    escaped.terminal = True
    out = {}
    for sgn in (1.0, -1.0):
        end = sgn * (S2 - G_EDGE)
        sol = solve_ivp(rhs, (0.0, end), [g0], method="DOP853", rtol=1e-12, atol=1e-14, dense_output=True,
                        events=escaped)
        if sol.status != 0 or np.any(sol.y[0] <= 0):
            raise ManifoldEscape("integral curve left the region above h1 before reaching the edge")
        out[sgn] = sol
    return out


def g_curve(a1: float) -> float:
    """a4 = g(a1) on the exceptional fibre, |a1| < 2/sqrt(3) - 1e-6."""
    if abs(a1) >= S2 - G_EDGE:
        raise DomainError(f"a1 = {a1} outside (-2/sqrt(3), 2/sqrt(3))")
    br = _g_branches()
    sol = br[1.0] if a1 >= 0 else br[-1.0]
    return float(sol.sol(a1)[0])


def real_period_defect(a1: float, a4: float) -> float:
    """Period of kappa (kappa + a1/2)/nu dkappa around a conjugate pair of roots of
    kappa^4 + a1 kappa^3 + kappa^2 + a4.

    A real form has real or imaginary periods on conjugation-symmetric cycles; the
    form has purely real periods exactly when this one vanishes, i.e. on the g-curve.
    """
    roots = poly_roots([a4, 0.0, 1.0, a1, 1.0])
    top = max(roots, key=lambda z: (z.imag, -z.real))
    partner = roots[np.argmin(np.abs(roots - np.conj(top)))]
    loop = cv.pair_loop(top, partner, roots, 1.0)
    val, _ = cv.loop_integral(loop, np.array([0.0, 0.5 * a1, 1.0], dtype=complex))
    return float(val.imag if abs(val.imag) >= abs(val.real) else val.real)


def g_by_periods(a1: float, lo: float | None = None, hi: float = 2.0) -> float:
    """Independent route to g: the a4 where the period defect vanishes."""
    if lo is None:
        lo = max(h1(a1), 0.0) + 1e-9
    return float(brentq(lambda x: real_period_defect(a1, x), lo, hi, xtol=1e-14, rtol=1e-13))


# ---------------------------------------------------------------------------
# phi_A on the hypotenuse


def _blowup_data(s: float):
    a4 = g_curve(s)
    coeffs = np.array([a4, 0.0, 1.0, s, 1.0], dtype=complex)
    roots = poly_roots(coeffs)
    up = sorted((r for r in roots if r.imag > 0), key=lambda z: z.real)
    b = np.array([0.0, 0.5 * s, 1.0], dtype=complex)
    return roots, up, b


def _path_integral_to_branch(b: np.ndarray, roots: np.ndarray, alpha: complex, n_rtol: float = 1e-12) -> complex:
    """Integral of b/nu dkappa on a straight path from kappa = 0 to the branch point alpha.

    With kappa = alpha (1 - u^2) the square-root singularity at alpha is removed.
    """
    others = [r for r in roots if abs(r - alpha) > 1e-14]
    m = 0.5 * alpha
    sq = np.sqrt(-alpha)

    def S(kap):
        s = np.ones_like(kap, dtype=complex)
        for r in others:
            s = s * np.sqrt(m - r) * np.sqrt((kap - r) / (m - r))
        return s

    def f(u):
        kap = alpha * (1 - u * u)
        return np.atleast_1d(-2 * alpha * np.polyval(b[::-1], kap) / (sq * S(kap)))

    val, _ = cv.quad(f, 0.0, 1.0, rtol=n_rtol, atol=1e-300)
    return complex(val[0])


def phi_A_raw(s: float) -> float:
    """2 pi |Re J| / |P_B| for the upper root of smaller modulus, s in the open interval."""
    roots, up, b = _blowup_data(s)
    loop = cv.pair_loop(up[0], up[1], roots, 1.0)
    PB, _ = cv.loop_integral(loop, b)
    small = min(up, key=abs)
    J = _path_integral_to_branch(b, roots, small)
    return float(2 * np.pi * abs(J.real) / abs(PB))


def phi_A(s: float) -> float:
    """Limit of the first component of phi along sequences tending to (lambda-1)^4 with blowup
    parameter s = a1/sqrt(a2). Increasing from 0 at -2/sqrt(3) to pi at 2/sqrt(3)."""
    if abs(s) > S2 + 1e-12:
        raise DomainError(f"s = {s} outside [-2/sqrt(3), 2/sqrt(3)]")
    if abs(s) >= S2 - G_EDGE:
        return 0.0 if s < 0 else float(np.pi)
    v = phi_A_raw(s)
    return v if s <= 0 else float(np.pi - v)


def phi_A_pair(s: float) -> tuple[float, float]:
    v = phi_A(s)
    return v, float(np.pi - v)
