"""Curvature pairs of curve/normal pairs and their singular structure.

The central object is a pair (gamma, eta) with eta unit and orthogonal to
gamma' in the Birkhoff sense. Writing xi = b(eta) for the induced tangent
direction, the two scalar fields

    gamma'(t) = alpha(t) xi(t),        eta'(t) = kappa(t) xi(t)

classify everything observable: cusps are sign crossings of alpha,
inflections of kappa, vertices are critical points of alpha/kappa, and the
zigzag invariant of a closed generic front is computed three independent
ways from (alpha, kappa).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .curves import NormalField, ParamCurve, extend_normal, induced_normal, legendre_residual
from .errors import (
    BadParameter,
    DegenerateFrame,
    MethodsDisagree,
    NotAFront,
    NotClosed,
    PreconditionViolated,
    ResidualViolation,
    SingularPoint,
)
from .numerics import differentiate, sign_crossings, unwrap_mod
from .plane import NormedPlane, symplectic

RESIDUAL_TOL = 1e-5
REL_ZERO = 1e-6          # relative threshold below which a sampled field counts as zero
NOISE_FLOOR = 1e-7       # relative noise floor for crossing admission

# steps for scalar finite differences, per derivative order; higher orders
# use wider steps to stay above the roundoff floor of the evaluators
SCALAR_FD_STEPS = {1: 1e-4, 2: 8e-4, 3: 3e-3}


def scalar_derivative(f, t, order, span, domain=None, closed=False):
    h = span * SCALAR_FD_STEPS[order]
    return differentiate(f, t, order, h, domain=domain, closed=closed)


def sampled_noise_floor(values):
    """Robust noise scale of a sampled signal via second differences.

    Smooth content contributes O(h^2) to the second difference, so the
    median-absolute estimate isolates evaluator noise (finite differences,
    interpolated inputs) without being fooled by genuine variation.
    """
    if len(values) < 8:
        return 0.0
    dd = np.diff(values, n=2)
    return 1.4826 * float(np.median(np.abs(dd))) / np.sqrt(6.0)


@dataclass
class LegendreCurve:
    """A validated (curve, unit normal) pair over one normed plane."""

    plane: NormedPlane
    gamma: ParamCurve
    eta: NormalField
    residual: float
    _pair_cache: Optional["CurvaturePair"] = None

    def xi(self, t):
        """Induced tangent direction b(eta(t))."""
        return self.plane.birkhoff(self.eta(t))

    def grid(self):
        return self.gamma.grid()

    @property
    def closed(self):
        return self.gamma.closed


def make_legendre(plane: NormedPlane, gamma: ParamCurve, eta: NormalField,
                  residual_tol: float = RESIDUAL_TOL) -> LegendreCurve:
    """Validate the orthogonality residual and the unit constraint on eta."""
    ts = gamma.grid()
    unit_err = float(np.max(np.abs(plane.norm(eta(ts)) - 1.0)))
    if unit_err > 1e-8:
        raise ResidualViolation(f"normal field is not unit (max error {unit_err:.2e})")
    res = legendre_residual(plane, gamma, eta)
    if res >= residual_tol:
        raise ResidualViolation(
            f"orthogonality residual {res:.3e} exceeds {residual_tol:.1e}")
    return LegendreCurve(plane, gamma, eta, res)


def legendre_from_curve(plane: NormedPlane, curve: ParamCurve) -> LegendreCurve:
    """Build the pair with the induced normal, extending through isolated
    singularities when the curve is not regular."""
    try:
        eta = induced_normal(plane, curve)
    except SingularPoint:
        eta = extend_normal(plane, curve)
    return make_legendre(plane, curve, eta)


@dataclass
class CurvaturePair:
    """Sampled (alpha, kappa) plus pointwise evaluators on the same pair."""

    ts: np.ndarray
    alpha: np.ndarray
    kappa: np.ndarray
    alpha_at: Callable
    kappa_at: Callable
    span: float
    closed: bool
    domain: tuple

    @property
    def alpha_scale(self):
        return max(float(np.max(np.abs(self.alpha))), 1e-300)

    @property
    def kappa_scale(self):
        return max(float(np.max(np.abs(self.kappa))), 1e-300)

    values_at: Callable = None

    def ratio_at(self, t):
        """alpha/kappa, the signed curvature radius field."""
        if self.values_at is not None:
            a, k = self.values_at(t)
            return a / k
        return self.alpha_at(t) / self.kappa_at(t)

    def ratio_rate_at(self, t):
        return scalar_derivative(self.ratio_at, t, 1, self.span,
                                 domain=self.domain, closed=self.closed)

    def alpha_rate_at(self, t):
        return scalar_derivative(self.alpha_at, t, 1, self.span,
                                 domain=self.domain, closed=self.closed)

    def kappa_rate_at(self, t):
        return scalar_derivative(self.kappa_at, t, 1, self.span,
                                 domain=self.domain, closed=self.closed)


def curvature_pair(L: LegendreCurve) -> CurvaturePair:
    """Extract (alpha, kappa) from gamma' = alpha xi and eta' = kappa xi.

    The sampled pair is cached on the input (the computation is pure, so a
    repeated call just returns the same immutable object).
    """
    if L._pair_cache is not None:
        return L._pair_cache

    def frame(t):
        eta = L.eta(t)
        xi = L.plane.birkhoff(eta)
        denom = symplectic(eta, xi)
        if np.min(denom) < 1e-10:
            raise DegenerateFrame("[eta, xi] collapsed; plane tables corrupt")
        return eta, xi, denom

    def values_at(t):
        eta, _, denom = frame(t)
        a = symplectic(eta, L.gamma.derivative(t, 1)) / denom
        k = symplectic(eta, L.eta.derivative(t, 1)) / denom
        return a, k

    def alpha_at(t):
        eta, _, denom = frame(t)
        return symplectic(eta, L.gamma.derivative(t, 1)) / denom

    def kappa_at(t):
        eta, _, denom = frame(t)
        return symplectic(eta, L.eta.derivative(t, 1)) / denom

    ts = L.grid()
    alpha, kappa = values_at(ts)
    cp = CurvaturePair(ts, alpha, kappa, alpha_at, kappa_at,
                       L.gamma.span, L.closed, L.gamma.domain,
                       values_at=values_at)
    L._pair_cache = cp
    return cp


def circular_curvature(cp: CurvaturePair) -> np.ndarray:
    """kappa/alpha where alpha is resolvably nonzero, NaN elsewhere."""
    mask = np.abs(cp.alpha) > REL_ZERO * cp.alpha_scale
    out = np.full_like(cp.alpha, np.nan)
    out[mask] = cp.kappa[mask] / cp.alpha[mask]
    return out


@dataclass
class ProjectiveCurvatureMap:
    """Continuous angle lift of the direction [alpha : kappa]."""

    ts: np.ndarray
    theta: np.ndarray
    total_change: float


def projective_curvature_map(cp: CurvaturePair) -> ProjectiveCurvatureMap:
    raw = np.arctan2(cp.kappa, cp.alpha)
    theta = unwrap_mod(raw, np.pi)
    jumps = np.abs(np.diff(theta))
    closing = 0.0
    if cp.closed:
        closing = ((raw[0] - theta[-1]) + np.pi / 2.0) % np.pi - np.pi / 2.0
        jumps = np.append(jumps, abs(closing))
    if np.max(jumps) > np.pi / 2.0 - 1e-9:
        raise MethodsDisagree("projective lift under-resolved; refine the grid")
    total = (theta[-1] + closing) - theta[0] if cp.closed else theta[-1] - theta[0]
    return ProjectiveCurvatureMap(cp.ts, theta, float(total))


@dataclass
class Cusp:
    t: float
    kind: str          # zig | zag
    alpha_rate: float


@dataclass
class Inflection:
    t: float
    kind: str          # flip | flop


@dataclass
class Vertex:
    t: float
    regular: bool


@dataclass
class SingularityReport:
    cusps: list
    inflections: list
    vertices: list
    maslov: Optional[dict]
    counts: dict
    is_front: bool
    is_immersion: bool

    def to_json_dict(self):
        return {
            "cusps": [{"t": c.t, "type": c.kind, "alpha_prime": c.alpha_rate}
                      for c in self.cusps],
            "inflections": [{"t": i.t, "type": i.kind} for i in self.inflections],
            "vertices": [{"t": v.t, "regular": bool(v.regular)} for v in self.vertices],
            "maslov": self.maslov,
            "counts": self.counts,
            "is_front": bool(self.is_front),
            "is_immersion": bool(self.is_immersion),
        }


def _immersion_gap(cp: CurvaturePair):
    """Smallest joint magnitude of (alpha, kappa), refined between nodes."""
    from .numerics import golden_minimize

    rel = np.maximum(np.abs(cp.alpha) / cp.alpha_scale,
                     np.abs(cp.kappa) / cp.kappa_scale)
    j = int(np.argmin(rel))
    best, t_best = float(rel[j]), float(cp.ts[j])
    if best > 1e-3:
        return best, t_best

    def rel_at(t):
        if cp.values_at is not None:
            a, k = cp.values_at(t)
        else:
            a, k = cp.alpha_at(t), cp.kappa_at(t)
        return float(np.maximum(np.abs(a) / cp.alpha_scale,
                                np.abs(k) / cp.kappa_scale))

    step = cp.span / len(cp.ts)
    for i in np.nonzero(rel <= min(1e-3, 10.0 * best))[0]:
        t_star, r_star = golden_minimize(rel_at, cp.ts[i] - step, cp.ts[i] + step)
        if r_star < best:
            best, t_best = r_star, t_star
    return best, t_best


def _detect_cusps(cp: CurvaturePair):
    """Refined alpha crossings split into ordinary cusps and degenerate zeros."""
    period = cp.span if cp.closed else None
    floor = max(NOISE_FLOOR * cp.alpha_scale, sampled_noise_floor(cp.alpha))
    roots = sign_crossings(cp.ts, cp.alpha, floor, cp.alpha_at, period=period)
    arate_scale = max(float(np.max(np.abs(
        np.gradient(cp.alpha, cp.ts)))), 1e-300)
    cusps, degenerate = [], []
    for t in roots:
        da = float(cp.alpha_rate_at(t))
        kv = float(cp.kappa_at(t))
        if abs(da) > REL_ZERO * arate_scale and abs(kv) > REL_ZERO * cp.kappa_scale:
            cusps.append(Cusp(t, "zig" if kv > 0.0 else "zag", da))
        else:
            degenerate.append(t)
    # alpha zeros that are not sign crossings (even-order contact) are
    # singular too; refine the deepest dip of each |alpha| valley and keep
    # those where alpha' vanishes as well
    from .numerics import golden_minimize

    dip_idx = np.nonzero(np.abs(cp.alpha) <= 1e-3 * cp.alpha_scale)[0]
    known = np.asarray([c.t for c in cusps] + degenerate, dtype=float)
    step = cp.span / len(cp.ts)
    abs_alpha = lambda t: float(np.abs(cp.alpha_at(t)))
    groups = np.split(dip_idx, np.nonzero(np.diff(dip_idx) > 1)[0] + 1) \
        if dip_idx.size else []
    for grp in groups:
        i = grp[int(np.argmin(np.abs(cp.alpha[grp])))]
        t = float(cp.ts[i])
        if known.size and np.min(np.abs(known - t)) < 4.0 * step:
            continue
        t_star, a_star = golden_minimize(abs_alpha, t - step, t + step)
        if a_star > REL_ZERO * cp.alpha_scale:
            continue
        da = float(cp.alpha_rate_at(t_star))
        if abs(da) <= REL_ZERO * arate_scale:
            degenerate.append(t_star)
            known = np.append(known, t_star)
    degenerate.sort()
    merged = []
    for t in degenerate:
        if not merged or abs(t - merged[-1]) > 4.0 * step:
            merged.append(t)
    return cusps, merged


def _detect_inflections(cp: CurvaturePair):
    period = cp.span if cp.closed else None
    floor = max(NOISE_FLOOR * cp.kappa_scale, sampled_noise_floor(cp.kappa))
    roots = sign_crossings(cp.ts, cp.kappa, floor, cp.kappa_at, period=period)
    out = []
    for t in roots:
        av = float(cp.alpha_at(t))
        if abs(av) <= REL_ZERO * cp.alpha_scale:
            continue
        dk = float(cp.kappa_rate_at(t))
        out.append(Inflection(t, "flip" if av * dk > 0.0 else "flop"))
    return out


def _detect_vertices(cp: CurvaturePair, degenerate_singular):
    """Critical points of alpha/kappa on windows where kappa is resolvable."""
    ok = np.abs(cp.kappa) > REL_ZERO * cp.kappa_scale
    verts = []
    all_vertices = False
    if np.all(ok):
        g_rate = cp.ratio_rate_at(cp.ts)
        g_scale = max(float(np.max(np.abs(cp.alpha / cp.kappa))), 1.0)
        noise = max(1e-7 * float(np.max(np.abs(g_rate))),
                    1e-12 * g_scale / cp.span,
                    sampled_noise_floor(g_rate))
        if np.max(np.abs(g_rate)) <= max(1e-6 * g_scale / cp.span, 10.0 * noise):
            # resolution-limited constant ratio: every parameter is critical
            all_vertices = True
        else:
            period = cp.span if cp.closed else None
            roots = sign_crossings(cp.ts, g_rate, noise, cp.ratio_rate_at,
                                   period=period)
            for t in roots:
                verts.append(Vertex(t, abs(float(cp.alpha_at(t)))
                                    > REL_ZERO * cp.alpha_scale))
    else:
        # vertex search restricted to contiguous windows of resolvable kappa
        period = cp.span if cp.closed else None
        idx = np.nonzero(ok)[0]
        splits = np.nonzero(np.diff(idx) > 1)[0]
        blocks = np.split(idx, splits + 1)
        if cp.closed and len(blocks) > 1 and blocks[0][0] == 0 and blocks[-1][-1] == len(cp.ts) - 1:
            blocks = [np.concatenate([blocks[-1] - len(cp.ts), blocks[0]])] + blocks[1:-1]
        for blk in blocks:
            if len(blk) < 9:
                continue
            tw = cp.ts[blk % len(cp.ts)] + np.where(blk < 0, -cp.span, 0.0)
            g_rate = cp.ratio_rate_at(tw[4:-4])
            noise = max(1e-7 * float(np.max(np.abs(g_rate))),
                        sampled_noise_floor(g_rate), 1e-300)
            roots = sign_crossings(tw[4:-4], g_rate, noise, cp.ratio_rate_at,
                                   period=None)
            for t in roots:
                if cp.closed:
                    t = cp.domain[0] + (t - cp.domain[0]) % cp.span
                verts.append(Vertex(t, abs(float(cp.alpha_at(t)))
                                    > REL_ZERO * cp.alpha_scale))
    # a degenerate singular point is itself a vertex; keep one entry when the
    # crossing scan already found it
    tol = 1e-6 * cp.span
    for t in degenerate_singular:
        verts = [v for v in verts if abs(v.t - t) > tol]
        verts.append(Vertex(t, False))
    verts.sort(key=lambda v: v.t)
    return verts, all_vertices


def _reduce_cyclic_word(letters):
    stack = []
    for ch in letters:
        if stack and stack[-1] == ch:
            stack.pop()
        else:
            stack.append(ch)
    while len(stack) >= 2 and stack[0] == stack[-1]:
        stack.pop()
        stack.pop(0)
    return len(stack) // 2


def maslov_index(L: LegendreCurve, cp: Optional[CurvaturePair] = None) -> dict:
    """Zigzag invariant of a closed front, three independent ways.

    word_reduction counts the reduced alternating zig/zag word; flip_flop is
    half the flip/flop imbalance; rotation counts full turns of the
    projective direction [alpha : kappa] (one turn per 2 pi of angle lift,
    since the projective line is covered twice per turn of the plane).
    Raises MethodsDisagree on any pairwise mismatch.
    """
    if not L.closed:
        raise NotClosed("the zigzag invariant needs a closed front")
    if cp is None:
        cp = curvature_pair(L)
    gap, t_bad = _immersion_gap(cp)
    if gap < REL_ZERO:
        raise NotAFront(f"alpha and kappa both vanish near t = {t_bad:.6g}")

    cusps, degenerate = _detect_cusps(cp)
    if degenerate:
        raise NotAFront("degenerate singular points present; front is not generic")
    if len(cusps) % 2 != 0:
        raise MethodsDisagree("odd cusp count on a closed front; grid too coarse")
    word = _reduce_cyclic_word(["a" if c.kind == "zig" else "b" for c in cusps])

    infl = _detect_inflections(cp)
    n_flip = sum(1 for i in infl if i.kind == "flip")
    n_flop = sum(1 for i in infl if i.kind == "flop")
    if (n_flip - n_flop) % 2 != 0:
        raise MethodsDisagree("odd flip/flop imbalance; grid too coarse")
    flip_flop = abs(n_flip - n_flop) // 2

    lift = projective_curvature_map(cp)
    turns = abs(lift.total_change) / (2.0 * np.pi)
    rotation = int(round(turns))
    if abs(turns - rotation) > 0.05:
        raise MethodsDisagree("projective rotation is far from an integer")

    if not (word == flip_flop == rotation):
        raise MethodsDisagree(
            f"zigzag computations disagree: word={word} flips={flip_flop} "
            f"rotation={rotation}")
    return {"word_reduction": word, "flip_flop": flip_flop, "rotation": rotation}


def singularity_report(L: LegendreCurve, cp: Optional[CurvaturePair] = None) -> SingularityReport:
    """Full singular-structure classification of a validated pair."""
    if cp is None:
        cp = curvature_pair(L)
    gap, t_bad = _immersion_gap(cp)
    if gap < REL_ZERO:
        raise NotAFront(f"alpha and kappa both vanish near t = {t_bad:.6g}")

    cusps, degenerate = _detect_cusps(cp)
    inflections = _detect_inflections(cp)
    vertices, all_vertices = _detect_vertices(cp, degenerate)

    maslov = None
    if L.closed:
        try:
            maslov = maslov_index(L, cp)
        except (NotAFront, MethodsDisagree):
            maslov = None

    counts = {
        "cusps": len(cusps),
        "zigs": sum(1 for c in cusps if c.kind == "zig"),
        "zags": sum(1 for c in cusps if c.kind == "zag"),
        "inflections": len(inflections),
        "flips": sum(1 for i in inflections if i.kind == "flip"),
        "flops": sum(1 for i in inflections if i.kind == "flop"),
        "vertices": len(vertices),
        "degenerate_singular": len(degenerate),
        "all_vertices": bool(all_vertices),
        "genericity_verified": False,
    }
    return SingularityReport(cusps, inflections, vertices, maslov, counts,
                             is_front=True, is_immersion=True)


def lateral_tangent_sign(L: LegendreCurve, t0: float, offset: float = 1e-3) -> str:
    """Independent cusp classification from [gamma'(t0-offset), gamma'(t0+offset)];
    negative means zig."""
    w1 = L.gamma.derivative(t0 - offset, 1)
    w2 = L.gamma.derivative(t0 + offset, 1)
    return "zig" if float(symplectic(w1, w2)) < 0.0 else "zag"


def pair_jets(L: LegendreCurve, t: float, order: int):
    """Jets of the curve and of its normal at t, validated finite."""
    from .curves import Jet

    g = Jet(t, tuple([L.gamma.point(t)]
                     + [L.gamma.derivative(t, k) for k in range(1, order + 1)]))
    e = Jet(t, tuple([L.eta(t)]
                     + [L.eta.derivative(t, k) for k in range(1, order + 1)]))
    return g, e


def contact_order(L1: LegendreCurve, t0: float, L2: LegendreCurve, u0: float,
                  kmax: int = 4) -> int:
    """Largest j <= kmax with pair derivatives 0..j-1 agreeing componentwise."""
    if not 1 <= kmax <= 4:
        raise BadParameter("kmax must be between 1 and 4")
    j1, f1 = pair_jets(L1, t0, kmax - 1)
    j2, f2 = pair_jets(L2, u0, kmax - 1)
    g1, e1 = np.asarray(j1.derivs), np.asarray(f1.derivs)
    g2, e2 = np.asarray(j2.derivs), np.asarray(f2.derivs)
    scale = max(float(np.max(np.abs(np.concatenate([g1, e1, g2, e2])))), 1e-300)
    tol = 1e-5 * scale
    j = 0
    while j < kmax:
        if np.max(np.abs(g1[j] - g2[j])) > tol or np.max(np.abs(e1[j] - e2[j])) > tol:
            break
        j += 1
    return j


def contact_implies_curvature_match(L1: LegendreCurve, t0: float,
                                    L2: LegendreCurve, u0: float, k: int) -> dict:
    """Residuals of d^j (alpha, kappa) across two pairs for j = 0..k-1.

    Requires contact of order at least k at the matched parameters.
    """
    if contact_order(L1, t0, L2, u0, kmax=k) < k:
        raise PreconditionViolated("pairs do not have the required contact order")
    cp1 = curvature_pair(L1)
    cp2 = curvature_pair(L2)
    residuals = {}
    for j in range(k):
        vals = []
        for cp, t in ((cp1, t0), (cp2, u0)):
            if j == 0:
                a, kk = float(cp.alpha_at(t)), float(cp.kappa_at(t))
            else:
                a = float(scalar_derivative(cp.alpha_at, t, j, cp.span,
                                            domain=cp.domain, closed=cp.closed))
                kk = float(scalar_derivative(cp.kappa_at, t, j, cp.span,
                                             domain=cp.domain, closed=cp.closed))
            vals.append((a, kk))
        residuals[j] = max(abs(vals[0][0] - vals[1][0]), abs(vals[0][1] - vals[1][1]))
    return {"order": k, "residuals": residuals}


def transfer_legendre(L: LegendreCurve, plane2: NormedPlane) -> LegendreCurve:
    """Re-normalize the pair for another norm; gamma is untouched."""
    plane1 = L.plane

    def evaluate(t):
        return plane2.normal_from_tangent(plane1.birkhoff(L.eta(t)))

    eta2 = NormalField(evaluate, L.gamma.domain, L.gamma.closed, "transferred")
    return make_legendre(plane2, L.gamma, eta2)
