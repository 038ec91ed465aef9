"""The Wente family: real-coefficient curves on the diagonal of the triangle.

Members are a(lambda) = lambda^4 - (4 + alpha0 u) lambda^3 + (6 + 2 alpha0 u + u^2) lambda^2
- (4 + alpha0 u) lambda + 1 with u = sqrt(a(1)) > 0. Along the diagonal Whitham flow
the data (a_+, a_-, beta1, beta2, beta3) obey a closed polynomial ODE.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass

import numpy as np

from . import curve as cv
from .blowup import alpha0
from .bspace import solve_Ba
from .errors import DomainError
from .polyalg import AdmissibleA, as_coeffs, from_disk_roots, poly_roots

REAL_TOL = 1e-8
UNIMODULAR_TOL = 1e-8
# limit of the nonzero B-period of Theta(i (lambda-1)^3) as a -> (lambda-1)^4
B2_LIMIT_PERIOD = 8.0


@dataclass(frozen=True)
class WenteState:
    a_plus: float
    a_minus: float
    beta1: float
    beta2: float
    beta3: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, y) -> "WenteState":
        return cls(*(float(v) for v in y))


def wente_coeffs(alpha_plus: float) -> np.ndarray:
    """Real coefficients of the Wente quartic, lowest degree first."""
    u = float(alpha_plus)
    a0 = alpha0()
    c1 = -(4.0 + a0 * u)
    return np.array([1.0, c1, 6.0 + 2.0 * a0 * u + u * u, c1, 1.0], dtype=complex)


def wente_a(alpha_plus: float) -> AdmissibleA:
    """Member of the Wente family with a(1) = alpha_plus^2; alpha1 is the upper disk root."""
    if not alpha_plus > 0:
        raise DomainError("alpha_plus must be positive")
    c = wente_coeffs(alpha_plus)
    z = poly_roots(c)
    inside = sorted((r for r in z if abs(r) < 1), key=lambda r: -r.imag)
    if len(inside) != 2:
        raise DomainError(f"Wente quartic at alpha_plus = {alpha_plus} has roots on the unit circle")
    return from_disk_roots(inside[0], inside[1])


def wente_field(s: WenteState) -> WenteState:
    """Right-hand side of the diagonal Whitham flow in Wente coordinates."""
    ap, am, b1, b2, b3 = astuple(s)
    return WenteState(
        4.0 * ap * am,
        2.0 * (ap + am - 16.0) * am,
        -am * b1,
        -(am + 4.0 * b3) * b2,
        4.0 * b3 * b3 + 2.0 * am * b3 + 4.0 * am,
    )


def alpha_plus_field(u: float) -> float:
    """u' for u = sqrt(a_+) along the same flow."""
    a0 = alpha0()
    return 2.0 * u**3 + 8.0 * a0 * u**2 + 32.0 * u


def real_symmetric_basis(a: AdmissibleA) -> tuple[np.ndarray, np.ndarray]:
    """Generators of B_a with real coefficients (b1) and imaginary coefficients (b2).

    Scaled so that the leading coefficients are 1 and i; requires a with real coefficients.
    """
    g1, g2 = (g.coeffs for g in solve_Ba(a).generators)
    x = np.array([g1[0].real, g2[0].real])
    y = np.array([g1[0].imag, g2[0].imag])
    # b(0) real picks the real generator, b(0) imaginary the imaginary one
    b1 = -y[1] * g1 + y[0] * g2
    b2 = -x[1] * g1 + x[0] * g2
    return b1 / b1[3].real, b2 / b2[3].imag


def wente_shape(b1: np.ndarray, b2: np.ndarray) -> tuple[float, float, float, float]:
    """(beta1, beta2, beta3, residual) fitting b1 = beta1 (l-1)^2 (l+1), b2 = i beta2 (l-1)(l^2+(beta3+2)l+1)."""
    beta1 = float(b1[3].real)
    beta2 = float(b2[3].imag)
    beta3 = float(b2[2].imag / beta2 - 1.0)
    s1 = beta1 * np.array([1.0, -1.0, -1.0, 1.0])
    s2 = 1j * beta2 * np.array([-1.0, -(beta3 + 1.0), beta3 + 1.0, 1.0])
    res = max(np.max(np.abs(b1 - s1)) / abs(beta1), np.max(np.abs(b2 - s2)) / abs(beta2))
    return beta1, beta2, beta3, float(res)


def wente_state(alpha_plus: float) -> WenteState:
    """State on the Wente trajectory with the normalisation beta1 a_+^(1/4) = 1, beta2 -> 1."""
    a = wente_a(alpha_plus)
    b1, b2 = real_symmetric_basis(a)
    _, _, beta3, _ = wente_shape(b1, b2)
    cycles = cv.build_cycles(a)
    PB = cv.period(a, b2, cycles.B1)
    ap = float(alpha_plus) ** 2
    return WenteState(ap, float(a(-1.0).real), ap**-0.25, float(B2_LIMIT_PERIOD / abs(PB)), beta3)


def abresch_component(a: AdmissibleA | np.ndarray) -> str:
    """A_plus (four distinct real roots), A_minus (alpha, conj alpha and reflections off R u S^1)
    or Neither."""
    c = a.coeffs if isinstance(a, AdmissibleA) else as_coeffs(a, 4)
    c = c / c[4]
    if np.max(np.abs(c.imag)) > 1e-10 * np.max(np.abs(c)):
        raise DomainError("abresch_component needs real coefficients")
    z = poly_roots(c.real)
    real = np.abs(z.imag) < REAL_TOL
    on_circle = np.abs(np.abs(z) - 1.0) < UNIMODULAR_TOL
    d = np.abs(z[:, None] - z[None, :]) + np.eye(4)
    distinct = d.min() > REAL_TOL
    if real.all() and distinct:
        return "A_plus"
    if not real.any() and not on_circle.any() and distinct:
        return "A_minus"
    return "Neither"
