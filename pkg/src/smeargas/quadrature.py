"""Adaptive Gauss-Kronrod quadrature in one and two dimensions.

Both integrators use the 7-point Gauss / 15-point Kronrod pair (QUADPACK's
``qk15`` rule). Integrands must be vectorized: they receive numpy arrays of
abscissae and return arrays of the same shape. The error estimate of a panel
is ``|K15 - G7|``, which is pessimistic for smooth integrands.

The 2-D integrator applies the tensor-product rule on rectangular panels and
refines by bisecting both axes of the worst panels. All panels of one
refinement round are evaluated in a single vectorized call.
"""

from __future__ import annotations

import heapq

import numpy as np

from smeargas.errors import QuadratureError

# Kronrod abscissae on [0, 1]; odd indices are the Gauss-7 nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full symmetric rule on [-1, 1].
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]


def _breakpoints(a, b, points):
    pts = [a, b]
    if points is not None:
        pts.extend(p for p in points if a < p < b)
    return np.unique(np.asarray(pts, dtype=float))


def gk15(f, a, b):
    """Apply the 15-point Kronrod rule on ``[a, b]``; return (K15, |K15 - G7|)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fx = f(c + h * NODES)
    k = h * np.dot(KRONROD_WEIGHTS, fx)
    g = h * np.dot(GAUSS_WEIGHTS, fx)
    return k, abs(k - g)


def integrate_1d(f, a, b, abs_tol=0.0, rel_tol=1e-10, points=None, max_panels=2000):
    """Adaptively integrate ``f`` over the finite interval ``[a, b]``.

    Parameters
    ----------
    f : callable
        Vectorized integrand.
    a, b : float
        Finite integration limits, ``a <= b``.
    abs_tol, rel_tol : float
        Stop once the summed error estimate is below
        ``max(abs_tol, rel_tol * |integral|)``.
    points : sequence of float, optional
        Interior breakpoints used for the initial partition.
    max_panels : int
        Refinement budget; exceeding it raises :class:`QuadratureError`.

    Returns
    -------
    value, error : float
    """
    if a == b:
        return 0.0, 0.0
    edges = _breakpoints(a, b, points)
    heap = []
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        k, e = gk15(f, lo, hi)
        heapq.heappush(heap, (-e, lo, hi, k))
        total += k
        err += e
    while err > max(abs_tol, rel_tol * abs(total)):
        if len(heap) >= max_panels:
            raise QuadratureError(
                f"1-D quadrature did not converge: error {err:.3e} after {len(heap)} panels"
            )
        neg_e, lo, hi, k = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureError("1-D quadrature panel collapsed below machine resolution")
        k1, e1 = gk15(f, lo, mid)
        k2, e2 = gk15(f, mid, hi)
        total += k1 + k2 - k
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, k1))
        heapq.heappush(heap, (-e2, mid, hi, k2))
    # recompute sums to shed accumulated drift
    total = float(sum(item[3] for item in heap))
    err = float(sum(-item[0] for item in heap))
    return total, err


def _eval_panels(f, x0, x1, y0, y1):
    cx = 0.5 * (x0 + x1)
    hx = 0.5 * (x1 - x0)
    cy = 0.5 * (y0 + y1)
    hy = 0.5 * (y1 - y0)
    # shape (panels, 15, 15)
    xs = (cx[:, None] + hx[:, None] * NODES[None, :])[:, :, None]
    ys = (cy[:, None] + hy[:, None] * NODES[None, :])[:, None, :]
    fv = f(xs, ys)
    area = hx * hy
    k = area * np.einsum("i,pij,j->p", KRONROD_WEIGHTS, fv, KRONROD_WEIGHTS)
    g = area * np.einsum("i,pij,j->p", GAUSS_WEIGHTS, fv, GAUSS_WEIGHTS)
    return k, np.abs(k - g)


def integrate_2d(f, x_range, y_range, abs_tol, x_points=None, y_points=None,
                 max_panels=50_000):
    """Adaptively integrate ``f(x, y)`` over a rectangle.

    ``f`` is called with broadcastable arrays ``x`` and ``y`` and must return
    their broadcast shape. The initial partition is the tensor grid of the
    breakpoints; each round bisects (in both axes) the largest-error panels
    until the summed error estimate drops below ``abs_tol``.

    Returns
    -------
    value, error : float
    """
    xe = _breakpoints(*x_range, x_points)
    ye = _breakpoints(*y_range, y_points)
    if len(xe) < 2 or len(ye) < 2:
        return 0.0, 0.0
    gx0, gy0 = np.meshgrid(xe[:-1], ye[:-1], indexing="ij")
    gx1, gy1 = np.meshgrid(xe[1:], ye[1:], indexing="ij")
    x0, x1 = gx0.ravel(), gx1.ravel()
    y0, y1 = gy0.ravel(), gy1.ravel()
    k, e = _eval_panels(f, x0, x1, y0, y1)

    while True:
        err = e.sum()
        if err <= abs_tol:
            break
        if k.size >= max_panels:
            raise QuadratureError(
                f"2-D quadrature did not converge: error {err:.3e} after {k.size} panels"
            )
        # split the worst panels until the untouched ones carry < half the budget
        order = np.argsort(e)[::-1]
        remaining = err - np.cumsum(e[order])
        n_split = int(np.searchsorted(-remaining, -0.5 * abs_tol)) + 1
        split = order[:n_split]
        keep = np.ones(k.size, dtype=bool)
        keep[split] = False

        sx0, sx1, sy0, sy1 = x0[split], x1[split], y0[split], y1[split]
        mx = 0.5 * (sx0 + sx1)
        my = 0.5 * (sy0 + sy1)
        if np.any((mx <= sx0) | (mx >= sx1) | (my <= sy0) | (my >= sy1)):
            raise QuadratureError("2-D quadrature panel collapsed below machine resolution")
        nx0 = np.concatenate([sx0, mx, sx0, mx])
        nx1 = np.concatenate([mx, sx1, mx, sx1])
        ny0 = np.concatenate([sy0, sy0, my, my])
        ny1 = np.concatenate([my, my, sy1, sy1])
        nk, ne = _eval_panels(f, nx0, nx1, ny0, ny1)

        x0 = np.concatenate([x0[keep], nx0])
        x1 = np.concatenate([x1[keep], nx1])
        y0 = np.concatenate([y0[keep], ny0])
        y1 = np.concatenate([y1[keep], ny1])
        k = np.concatenate([k[keep], nk])
        e = np.concatenate([e[keep], ne])

    return float(np.sum(k)), float(err)
