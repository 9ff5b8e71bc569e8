"""Smooth, strictly convex normed planes and their orthogonality machinery.

A plane is represented by a positive radial profile r(theta): the unit circle
is c(theta) = r(theta) (cos theta, sin theta). All derived objects (arc
length, supporting directions, anti-norm, distortion) are built from cached
tables over a uniform theta grid plus local Newton polishing, so point
queries are deterministic and accurate to ~1e-12 in theta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (
    BadParameter,
    ConvexityViolation,
    NoConvergence,
    NotUnit,
    PositivityViolation,
    ZeroVector,
)
from .numerics import TWO_PI, gauss5_segments, golden_minimize, unwrap_mod

UNIT_TOL = 1e-9


def symplectic(a, b):
    """Fixed area form [a, b] = a_x b_y - a_y b_x."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


@dataclass(frozen=True)
class NormSpec:
    """Recipe for a norm: 'euclidean', 'lp' (needs p > 1), or 'fourier_radial'
    with r(theta) = coefficients[0] + sum_k coefficients[k] cos(2 k theta)."""

    kind: str
    p: float = 2.0
    coefficients: tuple = ()
    table_size: int = 4096


class _RadialProfile:
    """r, r', r'' for the supported norm families."""

    # theta guard band for the |.|^(p-2) factor when 1 < p < 2 (axis cusp in r'')
    GUARD = 1e-3

    def __init__(self, spec: NormSpec):
        kind = spec.kind
        if kind not in ("euclidean", "lp", "fourier_radial"):
            raise BadParameter(f"unknown norm kind {kind!r}")
        self.kind = kind
        if kind == "lp":
            p = float(spec.p)
            if not np.isfinite(p) or p <= 1.0:
                raise BadParameter(
                    "lp norm requires p > 1: the unit ball is not smooth and "
                    "strictly convex otherwise")
            self.p = p
        if kind == "fourier_radial":
            if not spec.coefficients:
                raise BadParameter("fourier_radial needs at least one coefficient")
            self.coef = np.asarray(spec.coefficients, dtype=float)

    def r(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.kind == "euclidean":
            return np.ones_like(theta)
        if self.kind == "lp":
            g = np.abs(np.cos(theta)) ** self.p + np.abs(np.sin(theta)) ** self.p
            return g ** (-1.0 / self.p)
        return self._fourier(theta, 0)

    def r1(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.kind == "euclidean":
            return np.zeros_like(theta)
        if self.kind == "lp":
            p = self.p
            c, s = np.cos(theta), np.sin(theta)
            g = np.abs(c) ** p + np.abs(s) ** p
            g1 = p * (-s * np.sign(c) * np.abs(c) ** (p - 1.0)
                      + c * np.sign(s) * np.abs(s) ** (p - 1.0))
            return (-1.0 / p) * g ** (-1.0 / p - 1.0) * g1
        return self._fourier(theta, 1)

    def r2(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.kind == "euclidean":
            return np.zeros_like(theta)
        if self.kind == "lp":
            p = self.p
            c, s = np.cos(theta), np.sin(theta)
            ac, asn = np.abs(c), np.abs(s)
            if p < 2.0:
                # keep |.|^(p-2) bounded inside the guard band near axis points
                ac = np.maximum(ac, self.GUARD)
                asn = np.maximum(asn, self.GUARD)
            g = np.abs(c) ** p + np.abs(s) ** p
            g1 = p * (-s * np.sign(c) * np.abs(c) ** (p - 1.0)
                      + c * np.sign(s) * np.abs(s) ** (p - 1.0))
            g2 = p * (-np.abs(c) ** p - np.abs(s) ** p
                      + (p - 1.0) * (s * s * ac ** (p - 2.0) + c * c * asn ** (p - 2.0)))
            e = -1.0 / p
            return e * (e - 1.0) * g ** (e - 2.0) * g1 ** 2 + e * g ** (e - 1.0) * g2
        return self._fourier(theta, 2)

    def _fourier(self, theta, order):
        out = np.zeros_like(theta)
        for k, a in enumerate(self.coef):
            w = 2.0 * k
            if order == 0:
                out = out + a * np.cos(w * theta)
            elif order == 1:
                out = out - a * w * np.sin(w * theta)
            else:
                out = out - a * w * w * np.cos(w * theta)
        return out


class NormedPlane:
    """Immutable geometry of one smooth strictly convex norm.

    Built by :func:`build_plane`; all methods are pure reads and accept
    vectors of shape (..., 2) (scalar points included).
    """

    def __init__(self, spec: NormSpec):
        self.spec = spec
        self._profile = _RadialProfile(spec)
        n = int(spec.table_size)
        if n < 64:
            raise BadParameter("table_size must be at least 64")
        self._n = n
        self._dtheta = TWO_PI / n
        self._theta_nodes = np.linspace(0.0, TWO_PI, n + 1)
        self._build_tables()

    # -- radial boundary -------------------------------------------------

    def circle_point(self, theta):
        theta = np.asarray(theta, dtype=float)
        r = self._profile.r(theta)
        return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)

    def circle_d1(self, theta):
        theta = np.asarray(theta, dtype=float)
        r, r1 = self._profile.r(theta), self._profile.r1(theta)
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([r1 * c - r * s, r1 * s + r * c], axis=-1)

    def circle_d2(self, theta):
        theta = np.asarray(theta, dtype=float)
        r = self._profile.r(theta)
        r1 = self._profile.r1(theta)
        r2 = self._profile.r2(theta)
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([(r2 - r) * c - 2.0 * r1 * s,
                         (r2 - r) * s + 2.0 * r1 * c], axis=-1)

    # -- build ------------------------------------------------------------

    def _build_tables(self):
        th = self._theta_nodes
        fine = np.linspace(0.0, TWO_PI, 4 * self._n, endpoint=False)
        if np.min(self._profile.r(fine)) <= 0.0:
            raise PositivityViolation("radial profile must be strictly positive")

        c = self.circle_point(th)
        d1 = self.circle_d1(th)
        d2 = self.circle_d2(th)

        if np.min(symplectic(c, d1)) <= 1e-9:
            raise ConvexityViolation("[c, c'] must stay positive on the unit circle")
        # lp circles with odd p have isolated axis points of zero turning, so
        # strictness is enforced through monotonicity of psi, not pointwise
        turning = symplectic(self.circle_d1(fine), self.circle_d2(fine))
        if np.min(turning) < -1e-9:
            raise ConvexityViolation("boundary turns clockwise somewhere: not convex")

        half = self._n // 2
        sym = np.max(np.abs(c[:half] + c[half:2 * half]))
        if sym > 1e-10 * np.max(np.abs(c)):
            raise BadParameter("radial profile is not centrally symmetric")

        self._speed_nodes = self.norm(d1)
        u = np.zeros(self._n + 1)
        u[1:] = np.cumsum(gauss5_segments(lambda t: self.norm(self.circle_d1(t)),
                                          th[:-1], th[1:]))
        self.length = float(u[-1])
        self._u_nodes = u
        if np.any(np.diff(u) <= 0.0):
            raise ConvexityViolation("arc length is not strictly increasing")
        self._theta_of_u = PchipInterpolator(u, th)

        psi = unwrap_mod(np.arctan2(d1[:, 1], d1[:, 0]), TWO_PI)
        if np.any(np.diff(psi) <= 0.0):
            raise ConvexityViolation("tangent angle is not strictly increasing")
        if np.max(np.diff(psi)) > 0.5 * np.pi:
            raise BadParameter("table_size too small to resolve this unit circle")
        if abs((psi[-1] - psi[0]) - TWO_PI) > 1e-8:
            raise ConvexityViolation("tangent angle winding differs from one turn")
        self._psi_nodes = psi
        self._theta_of_psi = PchipInterpolator(psi, th)

        norm_on_circle = self.norm(c)
        if np.max(np.abs(norm_on_circle - 1.0)) > 1e-12:
            raise NoConvergence("norm/boundary self-consistency check failed")

        self._rho_nodes = self._rho_at_theta(th[:-1])
        rho_sym = np.max(np.abs(self._rho_nodes[:half] - self._rho_nodes[half:]))
        if rho_sym > 1e-6 * max(1.0, np.max(self._rho_nodes)):
            raise NoConvergence("distortion table is not centrally symmetric")

    # -- basic queries ----------------------------------------------------

    def norm(self, v):
        """Norm of v: |v|_2 / r(arg v)."""
        v = np.asarray(v, dtype=float)
        mag = np.hypot(v[..., 0], v[..., 1])
        theta = np.arctan2(v[..., 1], v[..., 0])
        return mag / self._profile.r(theta)

    def birkhoff(self, v):
        """The unit vector b(v) supporting the circle through v, [v, b(v)] > 0."""
        v = np.asarray(v, dtype=float)
        if np.any(np.hypot(v[..., 0], v[..., 1]) == 0.0):
            raise ZeroVector("birkhoff map needs a nonzero vector")
        theta = np.arctan2(v[..., 1], v[..., 0])
        w = self.circle_d1(theta)
        return w / self.norm(w)[..., None]

    @property
    def circumference(self):
        return self.length

    def arclength_of_theta(self, theta):
        """u(theta): boundary arc length from c(0) to c(theta)."""
        theta = np.asarray(theta, dtype=float)
        th = np.mod(theta, TWO_PI)
        j = np.clip((th / self._dtheta).astype(int), 0, self._n - 1)
        base = self._u_nodes[j]
        local = gauss5_segments(lambda t: self.norm(self.circle_d1(t)),
                                self._theta_nodes[j], th)
        return base + local

    def theta_of_arclength(self, u):
        """Inverse of u(theta), exact to ~1e-12 via monotone-cubic init + Newton."""
        u = np.mod(np.asarray(u, dtype=float), self.length)
        theta = np.asarray(self._theta_of_u(u), dtype=float)
        for _ in range(4):
            F = self.arclength_of_theta(theta) - u
            theta = theta - F / self.norm(self.circle_d1(theta))
        if np.max(np.abs(self.arclength_of_theta(theta) - u)) > 1e-9 * max(1.0, self.length):
            raise NoConvergence("arc-length inversion did not converge")
        return np.mod(theta, TWO_PI)

    def unit_circle_point(self, u):
        """Arc-length parametrization of the unit circle."""
        return self.circle_point(self.theta_of_arclength(u))

    def _psi_prime(self, theta):
        d1 = self.circle_d1(theta)
        d2 = self.circle_d2(theta)
        return symplectic(d1, d2) / (d1[..., 0] ** 2 + d1[..., 1] ** 2)

    def tangent_theta(self, chi):
        """theta whose tangent direction has angle chi.

        psi is monotone but its rate may vanish at isolated points (lp with
        odd p), so the inverse is solved by bracketed bisection on the table
        cell rather than Newton.
        """
        chi = np.asarray(chi, dtype=float)
        shape = chi.shape
        chi = np.atleast_1d(chi)
        psi0 = self._psi_nodes[0]
        lift = psi0 + np.mod(chi - psi0, TWO_PI)
        j = np.clip(np.searchsorted(self._psi_nodes, lift) - 1, 0, self._n - 1)
        lo = self._theta_nodes[j].copy()
        hi = self._theta_nodes[j + 1].copy()
        target = lift - self._psi_nodes[j]
        w_lo = self.circle_d1(lo)
        for _ in range(42):
            mid = 0.5 * (lo + hi)
            w = self.circle_d1(mid)
            # angle swept from the cell's left edge; cell sweeps stay < pi/2
            dpsi = np.arctan2(symplectic(w_lo, w),
                              w_lo[..., 0] * w[..., 0] + w_lo[..., 1] * w[..., 1])
            high = dpsi > target
            hi = np.where(high, mid, hi)
            lo = np.where(high, lo, mid)
        theta = 0.5 * (lo + hi)
        w = self.circle_d1(theta)
        res = (np.arctan2(w[..., 1], w[..., 0]) - chi + np.pi) % TWO_PI - np.pi
        if np.max(np.abs(res)) > 1e-9:
            raise NoConvergence("supporting-direction inversion did not converge")
        return np.mod(theta, TWO_PI).reshape(shape)

    def normal_from_tangent(self, w):
        """Unit z whose supporting direction b(z) is positively parallel to w."""
        w = np.asarray(w, dtype=float)
        if np.any(np.hypot(w[..., 0], w[..., 1]) == 0.0):
            raise ZeroVector("tangent direction must be nonzero")
        chi = np.arctan2(w[..., 1], w[..., 0])
        return self.circle_point(self.tangent_theta(chi))

    def normal_from_tangent_with_derivative(self, w, dw):
        """(z, dz/dt, psi_rate) for z = normal_from_tangent(w(t)), w' = dw.

        psi_rate is the boundary turning rate at z; the chain rule divides by
        it, so callers should treat dz as unreliable where psi_rate is tiny
        (flat spots of lp circles with odd p).
        """
        w = np.asarray(w, dtype=float)
        dw = np.asarray(dw, dtype=float)
        chi = np.arctan2(w[..., 1], w[..., 0])
        theta = self.tangent_theta(chi)
        chi_rate = symplectic(w, dw) / (w[..., 0] ** 2 + w[..., 1] ** 2)
        psi_rate = self._psi_prime(theta)
        theta_rate = chi_rate / np.where(np.abs(psi_rate) < 1e-300, 1e-300, psi_rate)
        return (self.circle_point(theta), self.circle_d1(theta) * theta_rate[..., None],
                psi_rate)

    def unit_tangent_with_derivative(self, v, dv):
        """(xi, dxi/dt) for xi = b(v(t)) along a unit field v with rate dv.

        Uses the analytic derivative of b along the circle, so it stays
        well conditioned even where the turning rate vanishes.
        """
        v = np.asarray(v, dtype=float)
        dv = np.asarray(dv, dtype=float)
        theta = np.arctan2(v[..., 1], v[..., 0])
        theta_rate = symplectic(v, dv) / (v[..., 0] ** 2 + v[..., 1] ** 2)
        w = self.circle_d1(theta)
        xi = w / self.norm(w)[..., None]
        return xi, self._db_dtheta(theta) * theta_rate[..., None]

    def birkhoff_inverse(self, w):
        """Inverse of b restricted to the unit circle; w must be unit."""
        w = np.asarray(w, dtype=float)
        if np.max(np.abs(self.norm(w) - 1.0)) > UNIT_TOL:
            raise NotUnit("birkhoff_inverse expects a unit vector")
        return self.normal_from_tangent(w)

    # -- derived scalars ---------------------------------------------------

    def antinorm(self, x):
        """sup over unit y of |[x, y]|, via the supporting-point identity."""
        x = np.asarray(x, dtype=float)
        n = self.norm(x)
        scalar = x.ndim == 1
        xs = np.atleast_2d(x)
        ns = np.atleast_1d(n)
        out = np.zeros(len(xs))
        nz = ns > 0.0
        if np.any(nz):
            xh = xs[nz] / ns[nz][:, None]
            z = self.normal_from_tangent(xh)
            out[nz] = ns[nz] * symplectic(z, xh)
        return float(out[0]) if scalar else out.reshape(n.shape)

    def antinorm_supremum(self, x, refine=True):
        """Direct sampled-sup oracle for the anti-norm over the circle table."""
        x = np.asarray(x, dtype=float)
        th = self._theta_nodes[:-1]
        c = self.circle_point(th)
        vals = np.abs(symplectic(x, c))
        j = int(np.argmax(vals))
        if not refine:
            return float(vals[j])
        # parabolic refinement through the three nodes around the argmax
        f = lambda t: float(np.abs(symplectic(x, self.circle_point(t))))
        tm, t0, tp = th[j] - self._dtheta, th[j], th[j] + self._dtheta
        fm, f0, fp = f(tm), vals[j], f(tp)
        denom = fm - 2.0 * f0 + fp
        if denom < 0.0:
            t_star = t0 + 0.5 * self._dtheta * (fm - fp) / denom
            return max(f0, f(t_star))
        return float(f0)

    def rho(self, v):
        """Distortion ||Db_v(b(v))|| of the supporting map along the circle."""
        v = np.asarray(v, dtype=float)
        if np.max(np.abs(self.norm(v) - 1.0)) > UNIT_TOL:
            raise NotUnit("rho expects a unit vector")
        theta = np.arctan2(v[..., 1], v[..., 0])
        return self._rho_at_theta(theta)

    def _db_dtheta(self, theta):
        """d/dtheta of b(c(theta)) = c'(theta)/||c'(theta)||."""
        w = self.circle_d1(theta)
        wp = self.circle_d2(theta)
        e2 = w[..., 0] ** 2 + w[..., 1] ** 2
        e = np.sqrt(e2)
        de = (w[..., 0] * wp[..., 0] + w[..., 1] * wp[..., 1]) / e
        ang = np.arctan2(w[..., 1], w[..., 0])
        dang = symplectic(w, wp) / e2
        r = self._profile.r(ang)
        r1 = self._profile.r1(ang)
        n = e / r
        dn = de / r - e * r1 * dang / (r * r)
        return wp / n[..., None] - w * (dn / (n * n))[..., None]

    def _rho_at_theta(self, theta):
        n = self.norm(self.circle_d1(theta))
        return self.norm(self._db_dtheta(theta)) / n

    def rho_table_max(self):
        return float(np.max(self._rho_nodes))

    def radon_defect(self):
        """sup over circle nodes of |b(b(v)) + v|; zero iff orthogonality is symmetric."""
        v = self.circle_point(self._theta_nodes[:-1])
        bb = self.birkhoff(self.birkhoff(v))
        return float(np.max(np.hypot(bb[:, 0] + v[:, 0], bb[:, 1] + v[:, 1])))


def build_plane(spec: NormSpec) -> NormedPlane:
    """Validate a norm specification and build its cached geometry."""
    return NormedPlane(spec)


def is_birkhoff_orthogonal(plane: NormedPlane, x, y, tol=1e-7) -> bool:
    """Brute-force test of ||x + t y|| >= ||x|| by golden-section line search.

    Serves as the independent oracle for the birkhoff map.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = float(plane.norm(x))
    ny = float(plane.norm(y))
    if nx == 0.0 or ny == 0.0:
        raise ZeroVector("orthogonality test needs nonzero vectors")
    span = 4.0 * nx / ny
    _, fmin = golden_minimize(lambda t: float(plane.norm(x + t * y)), -span, span,
                              iters=200)
    return fmin >= nx * (1.0 - tol)


def transfer_unit(plane1: NormedPlane, plane2: NormedPlane, v):
    """Map a unit vector of plane1 to the plane2 unit vector sharing its
    supporting direction, with matching orientation."""
    v = np.asarray(v, dtype=float)
    if np.max(np.abs(plane1.norm(v) - 1.0)) > UNIT_TOL:
        raise NotUnit("transfer_unit expects a unit vector of the source plane")
    return plane2.normal_from_tangent(plane1.birkhoff(v))
