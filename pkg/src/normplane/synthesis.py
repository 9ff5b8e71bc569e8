"""Reconstruction of a curve/normal pair from a prescribed curvature pair.

Given smooth alpha, kappa on [0, c] and initial data (point p, unit normal
v), the normal is eta(t) = phi(u0 + integral of kappa) with phi the
arc-length parametrization of the unit circle, and the curve integrates
gamma' = alpha b(eta). Both integrals use the classical 4th-order one-step
scheme with fixed step; since the right-hand sides depend only on t (and on
the accumulated u), all stage values are evaluated on the half-step grid in
one vectorized pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .analysis import LegendreCurve, make_legendre
from .curves import NormalField, ParamCurve
from .errors import BadParameter, NotAnIsometry, NotUnit
from .plane import NormedPlane


@dataclass
class SynthesisSpec:
    """Curvature-pair data for reconstruction on [0, length]."""

    alpha: Callable
    kappa: Callable
    gamma0: tuple
    eta0: tuple
    length: float
    steps: int = 4096


def synthesize(plane: NormedPlane, spec: SynthesisSpec) -> LegendreCurve:
    """Unique pair with curvature (alpha, kappa) and the given initial data."""
    if spec.length <= 0.0:
        raise BadParameter("synthesis length must be positive")
    v = np.asarray(spec.eta0, dtype=float)
    if abs(float(plane.norm(v)) - 1.0) > 1e-9:
        raise NotUnit("initial normal must be a unit vector of the plane")
    p = np.asarray(spec.gamma0, dtype=float)
    m = int(spec.steps)
    if m < 8:
        raise BadParameter("steps must be at least 8")

    u0 = float(plane.arclength_of_theta(np.arctan2(v[1], v[0])))
    c = float(spec.length)
    h = c / m
    t_half = np.linspace(0.0, c, 2 * m + 1)
    k_half = np.asarray(spec.kappa(t_half), dtype=float)
    a_half = np.asarray(spec.alpha(t_half), dtype=float)

    # u' = kappa(t): the four stage slopes collapse to Simpson on half steps
    u_nodes = np.zeros(m + 1)
    u_nodes[1:] = np.cumsum(h / 6.0 * (k_half[0:-1:2] + 4.0 * k_half[1::2]
                                       + k_half[2::2]))

    # gamma' = alpha(t) b(phi(u0 + u)): stage u-values per classical RK4
    kn, km, kp = k_half[0:-1:2], k_half[1::2], k_half[2::2]
    un = u_nodes[:-1]
    u_s2 = un + 0.5 * h * kn          # stage 2 (midpoint, Euler half step)
    u_s3 = un + 0.5 * h * km          # stage 3 (midpoint, stage-2 slope)
    u_s4 = un + h * km                # stage 4 (endpoint, stage-3 slope)

    def xi_at(u):
        return plane.birkhoff(plane.unit_circle_point(np.mod(u0 + u, plane.length)))

    f1 = a_half[0:-1:2, None] * xi_at(un)
    f2 = a_half[1::2, None] * xi_at(u_s2)
    f3 = a_half[1::2, None] * xi_at(u_s3)
    f4 = a_half[2::2, None] * xi_at(u_s4)
    steps_xy = h / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
    gamma_nodes = np.vstack([p, p + np.cumsum(steps_xy, axis=0)])

    t_nodes = np.linspace(0.0, c, m + 1)
    u_of_t = CubicSpline(t_nodes, u_nodes)
    pos = CubicSpline(t_nodes, gamma_nodes)

    def eta_eval(t):
        return plane.unit_circle_point(np.mod(u0 + u_of_t(t), plane.length))

    def xi_eval(t):
        return plane.birkhoff(eta_eval(t))

    def eta_rate(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(spec.kappa(t), dtype=float)[..., None] * xi_eval(t)

    def gamma_d1(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(spec.alpha(t), dtype=float)[..., None] * xi_eval(t)

    seam = float(np.linalg.norm(gamma_nodes[-1] - gamma_nodes[0]))
    d_seam = float(np.max(np.abs(gamma_d1(0.0) - gamma_d1(c))))
    closed = seam < 1e-9 and d_seam < 1e-6

    curve = ParamCurve(lambda t: np.asarray(pos(t), dtype=float), (0.0, c),
                       closed=closed, derivatives=(gamma_d1,), name="synthesized")
    eta = NormalField(eta_eval, (0.0, c), closed, "analytic", rate=eta_rate)
    return make_legendre(plane, curve, eta)


def apply_linear_map(L: LegendreCurve, matrix, is_isometry_of_plane: bool = False) -> LegendreCurve:
    """Transform a pair by a linear map, revalidating the result.

    With the isometry flag set, norm preservation is checked on 64 sampled
    unit vectors first.
    """
    M = np.asarray(matrix, dtype=float)
    if M.shape != (2, 2):
        raise BadParameter("expected a 2x2 matrix")
    plane = L.plane
    if is_isometry_of_plane:
        thetas = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
        pts = plane.circle_point(thetas)
        err = float(np.max(np.abs(plane.norm(pts @ M.T) - 1.0)))
        if err > 1e-9:
            raise NotAnIsometry(f"map distorts the unit circle by {err:.2e}")

    gamma, eta = L.gamma, L.eta

    def mapped(f):
        return lambda t: np.asarray(f(t), dtype=float) @ M.T

    derivs = tuple(None if d is None else mapped(d) for d in gamma.derivatives)
    new_gamma = ParamCurve(mapped(gamma.position), gamma.domain, gamma.closed,
                           derivs, gamma.samples, gamma.name)
    new_eta = NormalField(mapped(eta.evaluate), eta.domain, eta.closed,
                          "user_supplied",
                          rate=None if eta.rate is None else mapped(eta.rate))
    return make_legendre(plane, new_gamma, new_eta)
