"""Parallels, evolutes, involutes, pedal curves and envelope diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import (
    CurvaturePair,
    LegendreCurve,
    REL_ZERO,
    curvature_pair,
    make_legendre,
    scalar_derivative,
    _immersion_gap,
)
from .curves import NormalField, ParamCurve
from .errors import (
    DegenerateLine,
    KappaVanishes,
    NotAFront,
    RhoDegenerate,
    SingularPoint,
)
from .numerics import gauss5_segments, sign_crossings
from .plane import symplectic

RHO_FLOOR = 1e-6


def _require_front(cp: CurvaturePair):
    gap, t_bad = _immersion_gap(cp)
    if gap < REL_ZERO:
        raise NotAFront(f"alpha and kappa both vanish near t = {t_bad:.6g}")


def _require_kappa(cp: CurvaturePair):
    if np.min(np.abs(cp.kappa)) <= REL_ZERO * cp.kappa_scale:
        t_bad = float(cp.ts[int(np.argmin(np.abs(cp.kappa)))])
        raise KappaVanishes(f"kappa vanishes near t = {t_bad:.6g}")
    prod = cp.kappa[:-1] * cp.kappa[1:]
    if cp.closed:
        prod = np.append(prod, cp.kappa[-1] * cp.kappa[0])
    if np.any(prod < 0.0):
        t_bad = float(cp.ts[int(np.argmax(prod < 0.0))])
        raise KappaVanishes(f"kappa changes sign near t = {t_bad:.6g}")


def parallel(L: LegendreCurve, d: float) -> LegendreCurve:
    """Offset curve gamma + d eta with the same normal field."""
    cp = curvature_pair(L)
    _require_front(cp)
    gamma, eta = L.gamma, L.eta

    def pos(t):
        return gamma.point(t) + d * eta(t)

    def d1(t):
        return gamma.derivative(t, 1) + d * eta.derivative(t, 1)

    curve = ParamCurve(pos, gamma.domain, gamma.closed, (d1,), gamma.samples,
                       name=f"parallel[{d}]")
    return make_legendre(L.plane, curve, eta)


@dataclass
class EvoluteFrame:
    """Evolute curve with its own normal field and predicted curvature pair."""

    evolute: ParamCurve
    nu: NormalField
    pair: LegendreCurve
    rho_values: np.ndarray        # distortion at nu(t) on the base grid
    predicted_alpha: np.ndarray   # (alpha/kappa)'
    predicted_kappa: np.ndarray   # kappa / rho(nu), NaN where rho is degenerate

    def predicted(self, mask_floor=1e-3):
        ok = self.rho_values > mask_floor
        return ok, self.predicted_alpha, self.predicted_kappa


def evolute(L: LegendreCurve, cp: Optional[CurvaturePair] = None) -> EvoluteFrame:
    """Centers of curvature gamma - (alpha/kappa) eta as a new pair.

    The frame normal is nu = -b^{-1}(eta); its curvature pair is
    ((alpha/kappa)', kappa/rho(nu)) with rho the circle distortion, masked
    where rho falls below 1e-3.
    """
    if cp is None:
        cp = curvature_pair(L)
    _require_front(cp)
    _require_kappa(cp)
    plane, gamma, eta = L.plane, L.gamma, L.eta

    def pos(t):
        g = cp.ratio_at(t)
        return gamma.point(t) - np.asarray(g)[..., None] * eta(t)

    def d1(t):
        dg = cp.ratio_rate_at(t)
        return -np.asarray(dg)[..., None] * eta(t)

    e_curve = ParamCurve(pos, gamma.domain, gamma.closed, (d1,), gamma.samples,
                         name="evolute")

    def nu_eval(t):
        return -plane.normal_from_tangent(eta(t))

    def nu_rate(t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        _, dz, psi_rate = plane.normal_from_tangent_with_derivative(
            eta(t_arr), eta.derivative(t_arr, 1))
        flat = np.abs(psi_rate) < 1e-6
        if np.any(flat):
            from .numerics import differentiate
            h = gamma.span * 1e-4
            dz[flat] = -differentiate(nu_eval, t_arr[flat], 1, h,
                                      domain=gamma.domain, closed=gamma.closed)
        out = -dz
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return out[0]
        return out

    nu = NormalField(nu_eval, gamma.domain, gamma.closed, "induced_regular",
                     rate=nu_rate)
    frame = make_legendre(plane, e_curve, nu, residual_tol=1e-4)

    rho_vals = plane.rho(nu(cp.ts))
    pred_alpha = cp.ratio_rate_at(cp.ts)
    pred_kappa = np.where(rho_vals > RHO_FLOOR, cp.kappa / rho_vals, np.nan)
    return EvoluteFrame(e_curve, nu, frame, rho_vals, pred_alpha, pred_kappa)


def evolute_as_parallel_singularities(L: LegendreCurve, n_offsets: int = 512,
                                      cp: Optional[CurvaturePair] = None) -> np.ndarray:
    """Singular points swept by the parallel family; should trace the evolute.

    Offsets cover the range of -alpha/kappa expanded by 1%. Crossings of
    alpha + d kappa are located by inverse-linear interpolation on the grid,
    which is ample for the 1e-3 sweep tolerance.
    """
    if cp is None:
        cp = curvature_pair(L)
    _require_front(cp)
    _require_kappa(cp)
    ratio = -cp.alpha / cp.kappa
    lo, hi = float(np.min(ratio)), float(np.max(ratio))
    pad = 0.005 * max(hi - lo, 1e-12)
    ds = np.linspace(lo - pad, hi + pad, n_offsets)

    ts, alpha, kappa = cp.ts, cp.alpha, cp.kappa
    gamma_pts = L.gamma.point(ts)
    eta_pts = L.eta(ts)
    points = []
    for d in ds:
        f = alpha + d * kappa
        s = f[:-1] * f[1:]
        idx = np.nonzero(s < 0.0)[0]
        if L.closed and f[-1] * f[0] < 0.0:
            idx = np.append(idx, len(f) - 1)
        for i in idx:
            j = (i + 1) % len(f)
            frac = f[i] / (f[i] - f[j])
            g = gamma_pts[i] + frac * (gamma_pts[j] - gamma_pts[i])
            e = eta_pts[i] + frac * (eta_pts[j] - eta_pts[i])
            points.append(g + d * e)
    return np.asarray(points)


def normal_envelope_residual(L: LegendreCurve, t, v):
    """(F, dF/dt) for the normal-line family F(t, v) = [gamma(t) - v, eta(t)].

    Both vanish exactly when v is the center of curvature at t.
    """
    v = np.asarray(v, dtype=float)
    g = L.gamma.point(t)
    e = L.eta(t)
    de = L.eta.derivative(t, 1)
    dg = L.gamma.derivative(t, 1)
    F = symplectic(g - v, e)
    dF = symplectic(dg, e) + symplectic(g - v, de)
    return F, dF


def involute(L: LegendreCurve, d: float, cp: Optional[CurvaturePair] = None) -> LegendreCurve:
    """Unwinding curve sigma = gamma - (A - d) xi, A(t) = integral of alpha.

    Its normal field is xi = b(eta); the evolute of the result reproduces
    gamma. Requires nonvanishing kappa and nondegenerate distortion along
    eta (the xi rate is proportional to rho).
    """
    if cp is None:
        cp = curvature_pair(L)
    _require_front(cp)
    _require_kappa(cp)
    plane, gamma, eta = L.plane, L.gamma, L.eta

    rho_vals = plane.rho(eta(cp.ts))
    if np.min(rho_vals) <= RHO_FLOOR:
        t_bad = float(cp.ts[int(np.argmin(rho_vals))])
        raise RhoDegenerate(f"distortion vanishes along eta near t = {t_bad:.6g}")

    t0 = gamma.domain[0]
    ts = cp.ts
    seg = gauss5_segments(cp.alpha_at, ts[:-1], ts[1:])
    A_nodes = np.concatenate([[0.0], np.cumsum(seg)])

    def A_at(t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        j = np.clip(np.searchsorted(ts, t_arr) - 1, 0, len(ts) - 2)
        out = A_nodes[j] + gauss5_segments(cp.alpha_at, ts[j], t_arr)
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return float(out[0])
        return out

    def xi_eval(t):
        return plane.birkhoff(eta(t))

    def xi_rate(t):
        return plane.unit_tangent_with_derivative(eta(t), eta.derivative(t, 1))[1]

    def pos(t):
        A = np.asarray(A_at(t), dtype=float)
        return gamma.point(t) - (A - d)[..., None] * xi_eval(t)

    def d1(t):
        A = np.asarray(A_at(t), dtype=float)
        return (d - A)[..., None] * xi_rate(t)

    span_A = float(A_nodes[-1])
    closed = bool(gamma.closed and abs(span_A) < 1e-9)
    curve = ParamCurve(pos, gamma.domain, closed, (d1,), gamma.samples,
                       name=f"involute[{d}]")
    xi_field = NormalField(xi_eval, gamma.domain, gamma.closed, "analytic",
                           rate=xi_rate)
    return make_legendre(plane, curve, xi_field)


@dataclass
class PedalResult:
    """Pedal curve of a pair with respect to a fixed point."""

    gamma_p: ParamCurve
    base_point: np.ndarray
    frontal_claimed: bool         # false when the base point lies on the curve
    zeta: np.ndarray              # front direction field samples
    nu_p: Optional[np.ndarray]    # pedal normal samples, when claimed
    singular_ts: list
    pair: Optional[LegendreCurve]


def pedal(L: LegendreCurve, p, cp: Optional[CurvaturePair] = None) -> PedalResult:
    """Feet of the orthogonal drops from p onto the tangent lines.

    gamma_p = gamma + [gamma - p, eta] xi / [eta, xi]; the analytic
    derivative is kappa/[eta,xi] times the front field zeta built from the
    distortion rho, and the singular parameters are the kappa zeros when p
    is off the curve.
    """
    if cp is None:
        cp = curvature_pair(L)
    plane, gamma, eta = L.plane, L.gamma, L.eta
    p = np.asarray(p, dtype=float)

    def pieces(t):
        g = gamma.point(t)
        e = eta(t)
        xi = plane.birkhoff(e)
        denom = symplectic(e, xi)       # anti-norm of xi; positive
        return g, e, xi, denom

    def pos(t):
        g, e, xi, denom = pieces(t)
        lever = symplectic(g - p, e) / denom
        return g + lever[..., None] * xi

    def zeta_at(t):
        g, e, xi, denom = pieces(t)
        rho = plane.rho(e)
        bxi = plane.birkhoff(xi)
        rel = g - p
        coef_xi = (symplectic(rel, xi)
                   - rho * symplectic(rel, e) * symplectic(e, bxi) / denom)
        coef_b = rho * symplectic(rel, e)
        return coef_xi[..., None] * xi + coef_b[..., None] * bxi

    def d1(t):
        _, e, _, denom = pieces(t)
        kap = np.asarray(cp.kappa_at(t), dtype=float)
        return (kap / denom)[..., None] * zeta_at(t)

    curve = ParamCurve(pos, gamma.domain, gamma.closed, (d1,), gamma.samples,
                       name="pedal")

    ts = cp.ts
    min_dist = float(np.min(plane.norm(gamma.point(ts) - p)))
    claimed = min_dist > 1e-6
    zeta_samples = zeta_at(ts)

    singular = sign_crossings(ts, cp.kappa, 1e-7 * cp.kappa_scale, cp.kappa_at,
                              period=cp.span if cp.closed else None)

    nu_p = None
    pair = None
    if claimed:
        def nu_eval(t):
            return plane.normal_from_tangent(zeta_at(t))

        nu_field = NormalField(nu_eval, gamma.domain, gamma.closed, "induced_regular")
        pair = make_legendre(plane, curve, nu_field)
        nu_p = nu_eval(ts)
    return PedalResult(curve, p, claimed, zeta_samples, nu_p, list(singular), pair)


def pedal_envelope_residual(L: LegendreCurve, p, t, v,
                            ped: Optional[PedalResult] = None,
                            allow_limit: bool = False):
    """(F, dF/dt) for the pedal line family F = [gamma_p - v, b(gamma_p - p)].

    Both vanish exactly when v = gamma(t), reconstructing the base curve
    from its pedal. Raises DegenerateLine when gamma_p(t) hits p, unless a
    one-sided limit is allowed. Pass a precomputed PedalResult to avoid
    rebuilding it per query.
    """
    plane = L.plane
    if ped is None:
        ped = pedal(L, p)
    g = ped.gamma_p.point(t)
    w = g - np.asarray(p, dtype=float)
    scale = max(float(np.max(plane.norm(ped.gamma_p.point(ped.gamma_p.grid())
                                        - np.asarray(p)))), 1.0)
    if float(plane.norm(w)) < 1e-9 * scale:
        if not allow_limit:
            raise DegenerateLine("pedal point coincides with the base point")
        t = t + 1e-5 * ped.gamma_p.span
        g = ped.gamma_p.point(t)
        w = g - np.asarray(p, dtype=float)
    dg = ped.gamma_p.derivative(t, 1)
    b = plane.birkhoff(w)
    chi_rate = symplectic(w, dg) / (w[0] ** 2 + w[1] ** 2)
    theta = np.arctan2(w[1], w[0])
    db = plane._db_dtheta(theta) * chi_rate
    v = np.asarray(v, dtype=float)
    F = symplectic(g - v, b)
    dF = symplectic(dg, b) + symplectic(g - v, db)
    return float(F), float(dF)


def osculating_data(L: LegendreCurve, t, cp: Optional[CurvaturePair] = None) -> dict:
    """Center/radius of the best-fitting circle plus distance-squared checks.

    D(s) = ||gamma(s) - center||^2 in the plane's norm, differentiated in
    the arc-length variable; both derivatives vanish at the true center.
    """
    if cp is None:
        cp = curvature_pair(L)
    a = float(cp.alpha_at(t))
    k = float(cp.kappa_at(t))
    if abs(a) <= REL_ZERO * cp.alpha_scale:
        raise SingularPoint(f"t = {t:.6g} is a singular parameter")
    if abs(k) <= REL_ZERO * cp.kappa_scale:
        raise KappaVanishes(f"kappa vanishes at t = {t:.6g}")
    center = L.gamma.point(t) - (a / k) * L.eta(t)
    radius = abs(a / k)
    d1, d2 = distance_squared_rates(L, t, center)
    return {"center": center, "radius": radius, "D1": d1, "D2": d2}


def distance_squared_rates(L: LegendreCurve, t, point):
    """First and second arc-length derivatives of ||gamma - point||^2 at t."""
    plane, gamma = L.plane, L.gamma
    point = np.asarray(point, dtype=float)

    def dist2(s):
        return plane.norm(gamma.point(s) - point) ** 2

    def speed(s):
        return plane.norm(gamma.derivative(s, 1))

    Dt = float(scalar_derivative(dist2, t, 1, gamma.span,
                                 domain=gamma.domain, closed=gamma.closed))
    Dtt = float(scalar_derivative(dist2, t, 2, gamma.span,
                                  domain=gamma.domain, closed=gamma.closed))
    v = float(speed(t))
    dv = float(scalar_derivative(speed, t, 1, gamma.span,
                                 domain=gamma.domain, closed=gamma.closed))
    D1 = Dt / v
    D2 = (Dtt - D1 * dv) / (v * v)
    return D1, D2


def vertex_residual(L: LegendreCurve, t, cp: Optional[CurvaturePair] = None) -> float:
    """Second t-derivative of the normal-line function at the evolute point.

    Vanishes exactly at vertices; cross-validates the vertex detector.
    """
    if cp is None:
        cp = curvature_pair(L)
    k = float(cp.kappa_at(t))
    if abs(k) <= REL_ZERO * cp.kappa_scale:
        raise KappaVanishes(f"kappa vanishes at t = {t:.6g}")
    a = float(cp.alpha_at(t))
    g2 = L.gamma.derivative(t, 2)
    e = L.eta(t)
    e2 = L.eta.derivative(t, 2)
    return float(symplectic(g2, e) + (a / k) * symplectic(e, e2))
