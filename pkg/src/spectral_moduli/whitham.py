"""Whitham flows on the frame space and the triangle map phi.

A frame (a, b1, b2) is deformed so that all periods of Theta(b_l) stay fixed.
For prescribed real values c_l(1) the tangent (adot, b1dot, b2dot) follows from
the linear equations

    2 a bdot_l - adot b_l = 2i lambda a c_l' - i c_l (a + lambda a')
    b2 c1 - b1 c2 = Q a

with c_l in P^3_R and Q in P^2_R. With c(1) = sqrt(a(1)) (x, y) the flow moves
phi with unit speed in direction (x, y).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import RK45

from . import curve as cv
from .blowup import S2, phi_A
from .bspace import Frame, orient_frame, period_map_basis, phi_of_basis
from .errors import (
    BoundaryHit,
    DivisionResidual,
    DomainError,
    PeriodDrift,
    SingularSystem,
    SpectralError,
    Unclassifiable,
)
from .polyalg import (
    AdmissibleA,
    SelfInversivePoly,
    as_coeffs,
    disk_root_derivative,
    from_disk_roots,
    from_real_coordinates,
    real_basis,
    real_coordinates,
)

ODE_TOL = 1e-9
STOP_EPS = 1e-6
BOUNDARY_EPS = 1e-3
MIN_STEP = 1e-12
DIVISION_TOL = 1e-6
DRIFT_TOL = 1e-6


@dataclass(frozen=True)
class WhithamTangent:
    adot: np.ndarray
    b1dot: np.ndarray
    b2dot: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    Q: np.ndarray
    alphadot: tuple[complex, complex]


@dataclass(frozen=True)
class FlowState:
    frame: Frame
    t: tuple[float, float]
    phi: tuple[float, float]
    trajectory: list = field(default_factory=list, compare=False, repr=False)
    period_drift: float = 0.0
    translation_error: float = 0.0


@dataclass(frozen=True)
class LimitClassification:
    case: str
    phi: tuple[float, float]
    roots: tuple[complex, complex]

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "phi": list(self.phi),
            "roots": [[z.real, z.imag] for z in map(complex, self.roots)],
        }


# ---------------------------------------------------------------------------
# tangent solve


def _pmul(*ps) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for p in ps:
        out = npoly.polymul(out, p)
    return out


def _psub(p, q) -> np.ndarray:
    return npoly.polysub(p, q)


def _operator_matrix(a: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Real matrix of (c1, c2, Q) -> b2 c1 - b1 c2 - Q a on real coordinates."""
    U3, U2 = real_basis(3), real_basis(2)
    cols = []
    for u in U3:
        cols.append(as_coeffs(npoly.polymul(B[1], u), 6))
    for u in U3:
        cols.append(as_coeffs(-npoly.polymul(B[0], u), 6))
    for u in U2:
        cols.append(as_coeffs(-npoly.polymul(a, u), 6))
    C = np.array(cols).T
    return np.concatenate([C.real, C.imag])


def _constraint_matrix(a: np.ndarray, x: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Rows fixing c_l(1) = x_l and Im c_l'(1) = c_l(1) Im a'(1) / (2 a(1)).

    The real part of the derivative condition holds on P^3_R automatically.
    """
    U3 = real_basis(3)
    a1 = npoly.polyval(1.0, a).real
    k = npoly.polyval(1.0, npoly.polyder(a)).imag / (2.0 * a1)
    val = np.array([npoly.polyval(1.0, u).real for u in U3])
    der = np.array([npoly.polyval(1.0, npoly.polyder(u)).imag for u in U3])
    C = np.zeros((4, 11))
    d = np.zeros(4)
    for l in range(2):
        C[2 * l, 4 * l:4 * l + 4] = val
        d[2 * l] = x[l]
        C[2 * l + 1, 4 * l:4 * l + 4] = der - k * val
    return C, d


def solve_cQ(a: np.ndarray, B: np.ndarray, x: Sequence[float]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(c1, c2, Q) by least squares on b2 c1 - b1 c2 = Q a with the conditions at 1 eliminated."""
    A = _operator_matrix(a, B)
    C, d = _constraint_matrix(a, x)
    zp = np.linalg.lstsq(C, d, rcond=None)[0]
    _, s, vh = np.linalg.svd(C)
    if s[-1] < 1e-12 * s[0]:
        raise SingularSystem("conditions at lambda = 1 are dependent")
    N = vh[4:].T
    AN = A @ N
    sv = np.linalg.svd(AN, compute_uv=False)
    if sv[-1] < 1e-12 * sv[0]:
        raise SingularSystem(f"Whitham system is rank deficient (singular values {sv})")
    w = np.linalg.lstsq(AN, -A @ zp, rcond=None)[0]
    # near a(1) -> 0 the solution grows like 1/sigma_min; refine once with the residual in extended precision
    L = np.longdouble
    r = -(A.astype(L) @ (zp.astype(L) + N.astype(L) @ w.astype(L)))
    w = w + np.linalg.lstsq(AN, np.asarray(r, dtype=float), rcond=None)[0]
    z = zp + N @ w
    c1 = from_real_coordinates(z[0:4], 3)
    c2 = from_real_coordinates(z[4:8], 3)
    Q = from_real_coordinates(z[8:11], 2)
    return c1, c2, Q


def _rhs_poly(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """2i lambda a c' - i c (a + lambda a')."""
    lam = np.array([0.0, 1.0])
    t1 = 2j * _pmul(lam, a, npoly.polyder(c))
    t2 = 1j * npoly.polymul(c, npoly.polyadd(a, npoly.polymul(lam, npoly.polyder(a))))
    return _psub(t1, t2)


def tangent_from_c(a: AdmissibleA, B: np.ndarray, c1: np.ndarray, c2: np.ndarray,
                   Q: np.ndarray) -> WhithamTangent:
    """adot from the disk roots and bdot by exact division, given a solution (c1, c2, Q)."""
    ac = a.coeffs
    cs = (c1, c2)
    alphadot = []
    for al in a.roots_in_disk:
        bv = [npoly.polyval(al, B[l]) for l in range(2)]
        l = int(np.argmax(np.abs(bv)))
        alphadot.append(-1j * al * npoly.polyval(al, cs[l]) / bv[l])
    adot = disk_root_derivative(*a.roots_in_disk, *alphadot)
    M = np.array([_pad(npoly.polymul(2.0 * ac, e), 8) for e in np.eye(4)]).T
    bdots = []
    for l in range(2):
        num = _pad(npoly.polyadd(_rhs_poly(ac, cs[l]), npoly.polymul(adot, B[l])), 8)
        # least squares instead of long division: a root far outside the disk makes the
        # recursion of long division unstable
        quo = np.linalg.lstsq(M, num, rcond=None)[0]
        rem = M @ quo - num
        scale = max(1.0, float(np.max(np.abs(num))))
        if np.max(np.abs(rem)) > DIVISION_TOL * scale:
            raise DivisionResidual(f"bdot_{l + 1} division remainder {np.max(np.abs(rem)):.2e}")
        bdots.append(quo)
    return WhithamTangent(adot, bdots[0], bdots[1], as_coeffs(c1, 3), as_coeffs(c2, 3), as_coeffs(Q, 2),
                          (complex(alphadot[0]), complex(alphadot[1])))


def _tangent(a: AdmissibleA, B: np.ndarray, x: Sequence[float]) -> WhithamTangent:
    c1, c2, Q = solve_cQ(a.coeffs, B, x)
    return tangent_from_c(a, B, c1, c2, Q)


def tangent(frame: Frame, c1_at_1: float, c2_at_1: float) -> WhithamTangent:
    """Unique solution of the Whitham equations with prescribed real c_l(1)."""
    return _tangent(frame.a, frame.bs(), (float(c1_at_1), float(c2_at_1)))


def tangent_sequential(a: AdmissibleA, B: np.ndarray, x: Sequence[float]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(c1, c2, Q) by the constructive route: Q from its derivatives at 1, c_l at the roots of
    b_k/(lambda-1) by interpolation, then the free p in C^1[lambda] from the conditions at 1.

    Evaluated in extended precision: when b_1/(lambda-1) and b_2/(lambda-1) have roots close
    to each other near lambda = 1 the interpolation step amplifies rounding by ~1e4.
    """
    E = np.clongdouble
    ac = np.asarray(a.coeffs, dtype=E)
    B = [np.asarray(b, dtype=E) for b in B]
    x1, x2 = float(x[0]), float(x[1])
    A1 = npoly.polyval(1.0, ac).real
    dA = npoly.polyval(1.0, npoly.polyder(ac))
    gamma = 0.5 + dA / (2.0 * A1)
    d = [[npoly.polyval(1.0, npoly.polyder(B[l], m)) if m else npoly.polyval(1.0, B[l]) for m in range(3)]
         for l in range(2)]
    Q1 = (d[1][1] * x1 - d[0][1] * x2) / A1
    Q2 = (d[1][2] * x1 + 2 * d[1][1] * x1 * gamma - d[0][2] * x2 - 2 * d[0][1] * x2 * gamma - 2 * dA * Q1) / A1
    # Q = Q1 (l-1) + Q2/2 (l-1)^2, Qt = Q/(l-1)
    Qt = np.array([Q1 - 0.5 * Q2, 0.5 * Q2])
    Q = npoly.polymul(Qt, [-1.0, 1.0])
    Bt = [npoly.polydiv(B[l], [-1.0, 1.0])[0] for l in range(2)]
    Qa = npoly.polymul(Qt, ac)

    def interp(at, vals):
        r0, r1 = at
        v0, v1 = vals
        slope = (v1 - v0) / (r1 - r0)
        return np.array([v0 - slope * r0, slope])

    def quad_roots(c):
        c0, c1, c2 = c
        w = np.sqrt(c1 * c1 - 4 * c2 * c0)
        w = w if (c1.conjugate() * w).real >= 0 else -w
        u = -(c1 + w) / (2 * c2)
        return u, c0 / (c2 * u)

    r1 = quad_roots(Bt[0])
    r2 = quad_roots(Bt[1])
    ct1 = interp(r1, [npoly.polyval(r, Qa) / npoly.polyval(r, Bt[1]) for r in r1])
    ct2 = interp(r2, [-npoly.polyval(r, Qa) / npoly.polyval(r, Bt[0]) for r in r2])
    num = npoly.polyadd(_psub(Qa, npoly.polymul(Bt[1], ct1)), npoly.polymul(Bt[0], ct2))
    q, _ = npoly.polydiv(num, npoly.polymul(Bt[0], Bt[1]))
    part = [npoly.polyadd(ct1, npoly.polymul(q, Bt[0])), ct2]
    l = 0 if abs(d[0][1]) >= abs(d[1][1]) else 1
    xl = (x1, x2)[l]
    Bl1 = npoly.polyval(1.0, Bt[l])
    dBl1 = npoly.polyval(1.0, npoly.polyder(Bt[l]))
    p1 = (xl - npoly.polyval(1.0, part[l])) / Bl1
    dp1 = (xl * gamma - npoly.polyval(1.0, npoly.polyder(part[l])) - p1 * dBl1) / Bl1
    p = np.array([p1 - dp1, dp1])
    c1 = npoly.polyadd(part[0], npoly.polymul(p, Bt[0]))
    c2 = npoly.polyadd(part[1], npoly.polymul(p, Bt[1]))
    return tuple(as_coeffs(np.asarray(v, dtype=complex), k) for v, k in ((c1, 3), (c2, 3), (Q, 2)))


def whitham_residuals(a: np.ndarray, B: np.ndarray, t: WhithamTangent) -> tuple[float, float, float]:
    """Max coefficient residuals of both Whitham equations, by direct convolution."""
    a = as_coeffs(a)
    conv = np.convolve
    lam_a = conv([0.0, 1.0], a)
    da = a[1:] * np.arange(1, len(a))
    lam_da = conv([0.0, 1.0], da)
    res = []
    for b, bd, c in ((B[0], t.b1dot, t.c1), (B[1], t.b2dot, t.c2)):
        dc = c[1:] * np.arange(1, len(c))
        lhs = _pad(2 * conv(a, bd), 8) - _pad(conv(t.adot, b), 8)
        rhs = _pad(2j * conv(lam_a, dc), 8) - _pad(1j * conv(c, _pad(a, 5) + _pad(lam_da, 5)), 8)
        res.append(float(np.max(np.abs(lhs - rhs))))
    r2 = _pad(conv(B[1], t.c1), 8) - _pad(conv(B[0], t.c2), 8) - _pad(conv(t.Q, a), 8)
    res.append(float(np.max(np.abs(r2))))
    return res[0], res[1], res[2]


def _pad(p, n):
    out = np.zeros(n, dtype=complex)
    p = np.asarray(p, dtype=complex)
    out[: len(p)] = p
    return out


# ---------------------------------------------------------------------------
# phi


def phi(frame: Frame, rtol: float = cv.QUAD_RTOL) -> tuple[float, float]:
    """(-i q_1(y(a)), -i q_2(y(a))) for the frame."""
    v = phi_of_basis(frame.a, frame.bs(), rtol)
    return float(v[0]), float(v[1])


def swap_labelling(frame: Frame) -> Frame:
    a = from_disk_roots(frame.a.roots_in_disk[1], frame.a.roots_in_disk[0])
    p = None if frame.phi is None else (frame.phi[1], frame.phi[0])
    return Frame(a, frame.b2, frame.b1, (frame.orientations[1], frame.orientations[0]), p)


# ---------------------------------------------------------------------------
# flow


def _pack(roots: Sequence[complex], B: np.ndarray) -> np.ndarray:
    a1, a2 = roots
    return np.concatenate([[a1.real, a1.imag, a2.real, a2.imag], real_coordinates(B[0], 3), real_coordinates(B[1], 3)])


def _unpack(y: np.ndarray) -> tuple[tuple[complex, complex], np.ndarray]:
    roots = (complex(y[0], y[1]), complex(y[2], y[3]))
    B = np.array([from_real_coordinates(y[4:8], 3), from_real_coordinates(y[8:12], 3)])
    return roots, B


def _field(direction: np.ndarray):
    def f(_s, y):
        roots, B = _unpack(y)
        a = from_disk_roots(*roots, tol=0.0)
        scale = math.sqrt(npoly.polyval(1.0, a.coeffs).real)
        t = _tangent(a, B, scale * direction)
        ad1, ad2 = t.alphadot
        return np.concatenate([[ad1.real, ad1.imag, ad2.real, ad2.imag],
                               real_coordinates(t.b1dot, 3), real_coordinates(t.b2dot, 3)])

    return f


def all_periods(a: AdmissibleA, B: np.ndarray, rtol: float = cv.QUAD_RTOL) -> np.ndarray:
    """4x2 matrix: row k is the cycle (A1, A2, B1, B2)[k], column l the form Theta(b_l)."""
    cyc = cv.build_cycles(a)
    return cv.period_matrix(a, B, cyc.as_list(), rtol)


def reproject(a: AdmissibleA, B: np.ndarray, rtol: float = cv.QUAD_RTOL) -> np.ndarray:
    """Oriented period-map basis of B_a closest in sign to B."""
    Bpm = period_map_basis(a, rtol=rtol).as_array()
    out = np.empty_like(Bpm)
    for l in range(2):
        s = np.sign(np.vdot(Bpm[l], B[l]).real) or 1.0
        out[l] = s * Bpm[l]
    return out


def _boundary_reason(roots: Sequence[complex], eps: float) -> str | None:
    z = np.array([roots[0], roots[1], 1 / np.conj(roots[0]), 1 / np.conj(roots[1])])
    for r in roots:
        if abs(r) < eps:
            return "root approaches 0"
        if abs(r) > 1 - eps:
            return "root approaches the unit circle"
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    if d.min() < eps:
        return "roots collide"
    return None


def flow(frame: Frame, delta_t: Sequence[float], *, ode_tol: float = ODE_TOL, rtol: float = cv.QUAD_RTOL,
         stop_eps: float = STOP_EPS, boundary_eps: float = BOUNDARY_EPS, reproject_each_step: bool = True,
         track_periods: bool = True, log: Callable[[dict], None] | None = None,
         t0: Sequence[float] = (0.0, 0.0)) -> FlowState:
    """Integrate the Whitham flow of the frame along the straight segment t0 -> t0 + delta_t.

    After each accepted RK45 step the basis is re-projected onto the oriented period-map
    basis (unless ``reproject_each_step`` is False) and phi is re-evaluated. ``log``
    receives one record per accepted step.
    """
    delta = np.asarray(delta_t, dtype=float)
    L = float(np.hypot(*delta))
    phi0 = frame.phi if frame.phi is not None else phi(frame, rtol)
    a = frame.a
    B = frame.bs()
    traj = [{"t": list(map(float, t0)), "phi": list(phi0), "roots": _roots_json(a.roots_in_disk),
             "period_drift": 0.0, "step_size": 0.0}]
    if L == 0.0:
        return FlowState(frame, tuple(map(float, t0)), tuple(phi0), traj)
    direction = delta / L
    P0 = all_periods(a, B, rtol) if track_periods else None
    y = _pack(a.roots_in_disk, B)
    s = 0.0
    h = None
    max_drift = 0.0
    cur_phi = tuple(phi0)

    def hit(msg, exc=None):
        roots_traj = [tuple(complex(*z) for z in r["roots"]) for r in traj]
        try:
            cls = classify_limit(roots_traj, eps=boundary_eps).to_json()
        except Unclassifiable:
            cls = None
        state = FlowState(Frame(a, SelfInversivePoly(B[0], 3), SelfInversivePoly(B[1], 3), frame.orientations,
                                cur_phi), tuple(traj[-1]["t"]), cur_phi, traj, max_drift)
        err = BoundaryHit(msg if exc is None else f"{msg}: {exc}", traj, cls, state)
        return err

    f = _field(direction)
    while s < L * (1 - 1e-14):
        try:
            solver = RK45(f, s, y, L, rtol=ode_tol, atol=ode_tol, first_step=h)
            solver.step()
        except SpectralError as exc:
            raise hit("vector field undefined", exc) from exc
        if solver.status == "failed" or solver.step_size is None or solver.step_size < MIN_STEP * max(L, 1.0):
            raise hit("step size collapsed")
        h_taken = solver.t - s
        s, y = solver.t, solver.y
        h = min(max(solver.step_size, MIN_STEP), max(L - s, MIN_STEP)) if s < L else None
        roots, Bn = _unpack(y)
        reason = _boundary_reason(roots, stop_eps)
        if reason is not None:
            _append(traj, t0, direction, s, cur_phi, roots, max_drift, h_taken)
            raise hit(reason)
        try:
            a = from_disk_roots(*roots, tol=0.0)
            drift = 0.0
            if track_periods:
                P = all_periods(a, Bn, rtol)
                drift = float(np.max(np.abs(P - P0)))
            if reproject_each_step:
                Bn = reproject(a, Bn, rtol)
            cur_phi = tuple(map(float, phi_of_basis(a, Bn, rtol)))
        except SpectralError as exc:
            _append(traj, t0, direction, s, cur_phi, roots, max_drift, h_taken)
            raise hit("quadrature failed near the boundary", exc) from exc
        if drift > DRIFT_TOL and reproject_each_step:
            raise PeriodDrift(f"period drift {drift:.2e} in one step")
        max_drift = max(max_drift, drift)
        B = Bn
        y = _pack(roots, B)
        _append(traj, t0, direction, s, cur_phi, roots, drift, h_taken)
        if log is not None:
            log(traj[-1])
    t_end = tuple(float(v) for v in np.asarray(t0) + delta)
    fr = Frame(a, SelfInversivePoly(B[0], 3), SelfInversivePoly(B[1], 3), frame.orientations, cur_phi)
    terr = float(np.max(np.abs(np.asarray(cur_phi) - np.asarray(phi0) - delta)))
    return FlowState(fr, t_end, cur_phi, traj, max_drift, terr)


def _roots_json(roots):
    return [[float(z.real), float(z.imag)] for z in map(complex, roots)]


def _append(traj, t0, direction, s, phi_v, roots, drift, h):
    t = np.asarray(t0) + s * direction
    traj.append({"t": [float(t[0]), float(t[1])], "phi": [float(phi_v[0]), float(phi_v[1])],
                 "roots": _roots_json(roots), "period_drift": float(drift), "step_size": float(h)})


def jsonl_logger(stream) -> Callable[[dict], None]:
    def log(rec):
        stream.write(json.dumps(rec) + "\n")

    return log


# ---------------------------------------------------------------------------
# tori


def in_triangle(p: Sequence[float], margin: float = 0.0) -> bool:
    return p[0] > margin and p[1] > margin and p[0] + p[1] < math.pi - margin


def locate_torus_frame(p1: float, p2: float, seed: Frame, tol: float = 1e-7, max_iter: int = 6,
                       **flow_kw) -> Frame:
    """Frame with phi = pi (p1, p2): flow by the offset, then correct by the residual."""
    target = np.array([math.pi * float(p1), math.pi * float(p2)])
    if not in_triangle(target):
        raise DomainError(f"target {target} is not inside the open triangle")
    fr = seed if seed.phi is not None else Frame(seed.a, seed.b1, seed.b2, seed.orientations, phi(seed))
    for it in range(max_iter):
        res = target - np.asarray(fr.phi)
        if np.max(np.abs(res)) < tol:
            return fr
        try:
            fr = flow(fr, res, track_periods=False, **flow_kw).frame
        except BoundaryHit:
            if it > 0:
                raise
            centre = np.array([math.pi / 3, math.pi / 3])
            fr = flow(fr, centre - np.asarray(fr.phi), track_periods=False, **flow_kw).frame
            fr = flow(fr, target - np.asarray(fr.phi), track_periods=False, **flow_kw).frame
    res = target - np.asarray(fr.phi)
    if np.max(np.abs(res)) < tol:
        return fr
    raise PeriodDrift(f"phi residual {np.max(np.abs(res)):.2e} after {max_iter} corrections")


def locate_torus(p1: float, p2: float, seed: Frame, tol: float = 1e-7, **kw) -> AdmissibleA:
    return locate_torus_frame(p1, p2, seed, tol, **kw).a


def default_seed() -> Frame:
    """Oriented frame of the Wente curve with a(1) = 1."""
    from .wente import wente_a

    return orient_frame(wente_a(1.0))


# ---------------------------------------------------------------------------
# boundary limits


def case_d_limit(alpha: float) -> float:
    """pi + 2 (arctan sqrt(alpha) - arctan(1/sqrt(alpha))) for alpha in (0, 1]."""
    r = math.sqrt(alpha)
    return math.pi + 2.0 * (math.atan(r) - math.atan(1.0 / r))


def blowup_parameter(alpha1: complex, alpha2: complex) -> tuple[float, bool]:
    """(a1/sqrt(a2), Re alpha1 < Re alpha2) of the rescaled roots (alpha_l - 1)/(i M)."""
    M = max(abs(alpha1 - 1), abs(alpha2 - 1))
    k1, k2 = (alpha1 - 1) / (1j * M), (alpha2 - 1) / (1j * M)
    c1 = -2.0 * (k1.real + k2.real)
    c2 = abs(k1) ** 2 + abs(k2) ** 2 + 4.0 * k1.real * k2.real
    s = c1 / math.sqrt(c2)
    return float(np.clip(s, -S2, S2)), bool(k1.real < k2.real)


def _extrapolate(xs: np.ndarray, ys: np.ndarray, order: int = 2) -> complex:
    """Polynomial extrapolation of ys(xs) to xs = 0 from the last points."""
    n = min(len(xs), order + 2)
    if n < 2:
        return complex(ys[-1])
    x, y = xs[-n:], ys[-n:]
    deg = min(order, n - 1)
    re = np.polyfit(x, y.real, deg)
    im = np.polyfit(x, y.imag, deg)
    return complex(np.polyval(re, 0.0), np.polyval(im, 0.0))


def classify_limit(roots_trajectory: Sequence[Sequence[complex]], eps: float = BOUNDARY_EPS) -> LimitClassification:
    """Boundary case A-E of a trajectory of disk roots and the limit of phi."""
    traj = np.array([[complex(r[0]), complex(r[1])] for r in roots_trajectory])
    if len(traj) == 0:
        raise Unclassifiable("empty trajectory")
    al1, al2 = traj[-1]
    near0 = [abs(al1) < eps, abs(al2) < eps]
    near1 = [abs(al1 - 1) < eps, abs(al2 - 1) < eps]
    unimod = [abs(abs(al1) - 1) < eps, abs(abs(al2) - 1) < eps]
    if near1[0] and near1[1]:
        s, first_left = blowup_parameter(al1, al2)
        v = phi_A(s)
        p = (v, math.pi - v) if first_left else (math.pi - v, v)
        return LimitClassification("A", p, (1.0, 1.0))
    if near0[0] and near0[1]:
        return LimitClassification("E", (0.0, 0.0), (0.0, 0.0))
    for k in range(2):
        other = 1 - k
        if near0[k] and unimod[other]:
            p = (math.pi, 0.0) if k == 0 else (0.0, math.pi)
            lim = (0.0, 1.0) if k == 0 else (1.0, 0.0)
            return LimitClassification("C", p, lim)
    for k in range(2):
        other = 1 - k
        if near0[k]:
            lim = _extrapolate(np.abs(traj[:, k]), traj[:, other])
            x = min(max(lim.real, 1e-300), 1.0)
            v = case_d_limit(x)
            p = (v, 0.0) if k == 0 else (0.0, v)
            roots = (0.0, lim) if k == 0 else (lim, 0.0)
            return LimitClassification("D", p, roots)
    for k in range(2):
        other = 1 - k
        if near1[other]:
            p = (math.pi, 0.0) if other == 1 else (0.0, math.pi)
            roots = (complex(al1), 1.0) if other == 1 else (1.0, complex(al2))
            return LimitClassification("B", p, roots)
    raise Unclassifiable(f"roots ({al1:.4g}, {al2:.4g}) match no boundary case within {eps}")
