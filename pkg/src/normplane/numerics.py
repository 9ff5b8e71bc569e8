"""Small numerical kernels: finite differences, line search, quadrature, crossings."""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence

TWO_PI = 2.0 * np.pi

# 5-point Gauss-Legendre rule on [0, 1]
_G5_X = np.array([
    0.5 - 0.45308992296933199640, 0.5 - 0.26923465505284154552, 0.5,
    0.5 + 0.26923465505284154552, 0.5 + 0.45308992296933199640,
])
_G5_W = np.array([
    0.11846344252809454376, 0.23931433524968323402, 0.28444444444444444444,
    0.23931433524968323402, 0.11846344252809454376,
])


def fd_weights(offsets, order):
    """Finite-difference weights for the given derivative order at 0.

    Fornberg's recursion on arbitrary nodes; exact for polynomials up to
    degree len(offsets)-1, so a 7-point stencil is at least 4th-order
    accurate for derivative orders up to 3.
    """
    x = np.asarray(offsets, dtype=float)
    n = len(x)
    if order >= n:
        raise ValueError("stencil too short for requested order")
    z = 0.0
    c = np.zeros((n, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0] - z
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def differentiate(f, t, order, h, domain=None, closed=False):
    """Derivative of a (possibly vector valued) callable by a 7-point stencil.

    The window t + {-3h..3h} is shifted to stay inside an open domain; closed
    domains sample through the wrap instead. `t` may be scalar or an array.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    base = np.arange(-3, 4, dtype=float)
    if closed or domain is None:
        shifts = np.zeros(t_arr.shape, dtype=int)
    else:
        t0, t1 = domain
        lo = np.ceil(np.maximum(0.0, (t0 - (t_arr - 3.0 * h)) / h - 1e-9)).astype(int)
        hi = np.ceil(np.maximum(0.0, ((t_arr + 3.0 * h) - t1) / h - 1e-9)).astype(int)
        shifts = lo - hi
    out = None
    for s in np.unique(shifts):
        mask = shifts == s
        offs = (base + s) * h
        w = fd_weights(offs, order)
        ts = t_arr[mask][:, None] + offs[None, :]
        vals = f(ts.ravel())
        vals = np.asarray(vals, dtype=float)
        vals = vals.reshape(ts.shape + vals.shape[1:])
        acc = np.tensordot(w, np.moveaxis(vals, 1, 0), axes=(0, 0))
        if out is None:
            out = np.zeros(t_arr.shape + acc.shape[1:])
        out[mask] = acc
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return out[0]
    return out


def golden_minimize(f, a, b, iters=200, tol=1e-12):
    """Golden-section minimum of a scalar unimodal function on [a, b]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if b - a < tol * (1.0 + abs(a) + abs(b)):
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def gauss5_segments(fn, a, b):
    """Integral of fn over each segment [a_i, b_i] by 5-point Gauss."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    span = b - a
    nodes = a[..., None] + span[..., None] * _G5_X
    vals = fn(nodes.ravel()).reshape(nodes.shape)
    return span * (vals @ _G5_W)


def brent_root(f, a, b, xtol=1e-12, maxiter=120):
    """Root of f in [a, b] with a sign change; Brent via scipy."""
    from scipy.optimize import brentq

    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        # fall back to the min of |f|; callers use this only for near-tangential zeros
        t, _ = golden_minimize(lambda t: abs(f(t)), a, b)
        return t
    return brentq(f, a, b, xtol=xtol, maxiter=maxiter)


def sign_crossings(ts, vals, noise, refine, period=None):
    """Refined zero crossings of a sampled function.

    Nodes with |value| <= noise count as zeros; a crossing needs flanking
    values of opposite sign exceeding 10x the noise floor. With `period`
    given, the sample sequence is treated cyclically. Returns refined
    parameters in ascending order.
    """
    ts = np.asarray(ts, dtype=float)
    vals = np.asarray(vals, dtype=float)
    n = len(ts)
    s = np.where(np.abs(vals) <= noise, 0, np.sign(vals)).astype(int)
    strong = np.abs(vals) > 10.0 * noise
    nz = np.nonzero(s != 0)[0]
    if len(nz) < 2:
        return []
    roots = []
    pairs = list(zip(nz[:-1], nz[1:]))
    if period is not None:
        pairs.append((nz[-1], nz[0] + n))
    for i, j_raw in pairs:
        j = j_raw % n
        if s[i] * s[j] >= 0 or not (strong[i] and strong[j]):
            continue
        a = ts[i]
        b = ts[j] if j_raw < n else ts[j] + period
        r = brent_root(refine, a, b, xtol=1e-10)
        if period is not None:
            r = ts[0] + (r - ts[0]) % period
        roots.append(r)
    roots.sort()
    # merge duplicates from wrap handling
    out = []
    for r in roots:
        if not out or abs(r - out[-1]) > 1e-9:
            out.append(r)
    if period is not None and len(out) >= 2 and abs((out[-1] - out[0]) - period) < 1e-9:
        out.pop()
    return out


def unwrap_mod(raw, period):
    """Continuous lift of angles known only modulo `period`."""
    raw = np.asarray(raw, dtype=float)
    d = np.diff(raw)
    jumps = (d + period / 2.0) % period - period / 2.0
    out = np.empty_like(raw)
    out[0] = raw[0]
    out[1:] = raw[0] + np.cumsum(jumps)
    return out


def _point_segment_dist2(points, seg_a, seg_b):
    """Squared distances from each point to the nearest of the given segments."""
    d = seg_b - seg_a                      # (m, 2)
    l2 = np.maximum(np.einsum("ij,ij->i", d, d), 1e-300)
    best = np.full(len(points), np.inf)
    chunk = max(1, 262144 // max(len(d), 1))
    for s in range(0, len(points), chunk):
        p = points[s:s + chunk]
        ap = p[:, None, :] - seg_a[None, :, :]          # (c, m, 2)
        tt = np.clip(np.einsum("cmj,mj->cm", ap, d) / l2, 0.0, 1.0)
        diff = ap - tt[..., None] * d[None, :, :]
        best[s:s + chunk] = np.min(np.einsum("cmj,cmj->cm", diff, diff), axis=1)
    return best


def hausdorff_polyline(pts_a, pts_b, closed_a=False, closed_b=False):
    """Symmetric Hausdorff distance between two sampled curves.

    Point-to-polyline distances are used on both sides so the result measures
    geometric deviation rather than sampling phase.
    """
    pts_a = np.asarray(pts_a, dtype=float)
    pts_b = np.asarray(pts_b, dtype=float)

    def segs(p, closed):
        if closed:
            return p, np.roll(p, -1, axis=0)
        return p[:-1], p[1:]

    a0, a1 = segs(pts_a, closed_a)
    b0, b1 = segs(pts_b, closed_b)
    d_ab = np.sqrt(np.max(_point_segment_dist2(pts_a, b0, b1)))
    d_ba = np.sqrt(np.max(_point_segment_dist2(pts_b, a0, a1)))
    return max(d_ab, d_ba)


def require_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise NoConvergence(f"non-finite values in {what}")
    return arr
