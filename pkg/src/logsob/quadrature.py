"""Adaptive Simpson quadrature and bracketed search primitives.

Integrands and residuals are numpy-vectorized: they receive a 1-D array of
abscissae and return an array whose leading axis matches it.  Extra trailing
axes are treated as independent output components, which lets callers push
many expectation values through a single refinement pass.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BracketFailure, QuadratureFailure

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def adaptive_simpson(f, a, b, rtol=1e-12, atol=0.0, max_depth=48, initial_cells=1):
    """Integrate ``f`` over [a, b] by adaptive Simpson subdivision.

    Starts from ``initial_cells`` equal panels (one vectorized call seeds
    them all).  A cell is accepted once one extra halving changes its value
    by no more than 15 * (atol + rtol * |value|) in every output component;
    the usual one-fifteenth Richardson correction is folded into the
    accepted value.  ``atol`` is a per-cell floor, needed for integrands
    that change sign.

    Raises QuadratureFailure when ``max_depth`` rounds of halving cannot
    reach the tolerance.
    """
    a = float(a)
    b = float(b)
    if b < a:
        return -adaptive_simpson(
            f, b, a, rtol=rtol, atol=atol, max_depth=max_depth, initial_cells=initial_cells
        )
    m = max(1, int(initial_cells))
    edges = np.linspace(a, b, m + 1)
    nodes = np.empty(2 * m + 1)
    nodes[0::2] = edges
    nodes[1::2] = 0.5 * (edges[:-1] + edges[1:])
    first = np.asarray(f(nodes), dtype=float)
    out_shape = first.shape[1:]
    if b == a:
        return np.zeros(out_shape) if out_shape else 0.0
    flo = first[0:-1:2]
    fmid = first[1::2]
    fhi = first[2::2]
    lo = edges[:-1].copy()
    hi = edges[1:].copy()
    pad = (Ellipsis,) + (None,) * len(out_shape)
    cell = ((hi - lo)[pad] / 6.0) * (flo + 4.0 * fmid + fhi)
    total = np.zeros(out_shape)

    for _ in range(max_depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        vals = np.asarray(f(np.concatenate([lmid, rmid])), dtype=float)
        n = lo.size
        flm, frm = vals[:n], vals[n:]
        h12 = (hi - lo)[pad] / 12.0
        s_left = h12 * (flo + 4.0 * flm + fmid)
        s_right = h12 * (fmid + 4.0 * frm + fhi)
        s2 = s_left + s_right
        err = np.abs(s2 - cell)
        tol = 15.0 * (atol + rtol * np.abs(s2))
        ok = err <= tol
        if ok.ndim > 1:
            ok = ok.all(axis=tuple(range(1, ok.ndim)))
        if ok.any():
            total = total + (s2[ok] + (s2[ok] - cell[ok]) / 15.0).sum(axis=0)
        if ok.all():
            return total if out_shape else float(total)
        keep = ~ok
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        flo = np.concatenate([flo[keep], fmid[keep]])
        fhi = np.concatenate([fmid[keep], fhi[keep]])
        fmid = np.concatenate([flm[keep], frm[keep]])
        cell = np.concatenate([s_left[keep], s_right[keep]])
    raise QuadratureFailure(
        "adaptive Simpson did not reach tolerance rtol=%g atol=%g after %d halvings "
        "(%d cells pending)" % (rtol, atol, max_depth, lo.size)
    )


def golden_section_max(f, lo, hi, xtol=1e-8, max_iter=200):
    """Maximize a unimodal scalar function on [lo, hi]; returns (x, f(x))."""
    lo = float(lo)
    hi = float(hi)
    if hi < lo:
        lo, hi = hi, lo
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
    xm = 0.5 * (lo + hi)
    return xm, f(xm)


def bracketed_newton(g, dg, lo, hi, bisect_width=1e-3, root_tol=1e-10, max_iter=200):
    """Elementwise root of an increasing residual g on [lo, hi].

    ``g`` and ``dg`` receive the full abscissa array on every call.  The
    bracket is first narrowed to ``bisect_width`` by bisection; Newton steps
    (clipped into the live bracket, midpoint fallback when a step escapes or
    the derivative misbehaves) then polish to ``root_tol`` in x.

    Raises BracketFailure when some endpoint pair does not straddle zero.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    glo = np.asarray(g(lo), dtype=float)
    ghi = np.asarray(g(hi), dtype=float)
    bad = (glo > 0.0) | (ghi < 0.0)
    if bad.any():
        raise BracketFailure(
            "%d of %d points have no sign change over the initial bracket"
            % (int(bad.sum()), bad.size)
        )

    width = float(np.max(hi - lo))
    n_bisect = 0
    if width > bisect_width:
        n_bisect = int(math.ceil(math.log2(width / bisect_width)))
    for _ in range(n_bisect):
        mid = 0.5 * (lo + hi)
        neg = np.asarray(g(mid)) < 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)

    y = 0.5 * (lo + hi)
    done = (hi - lo) <= root_tol
    for _ in range(max_iter):
        if done.all():
            break
        gy = np.asarray(g(y), dtype=float)
        dgy = np.asarray(dg(y), dtype=float)
        neg = gy < 0.0
        lo = np.where(~done & neg, y, lo)
        hi = np.where(~done & ~neg, y, hi)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ynew = y - gy / dgy
        fallback = ~np.isfinite(ynew) | (ynew < lo) | (ynew > hi)
        ynew = np.where(fallback, 0.5 * (lo + hi), ynew)
        newly = ~done & ((np.abs(ynew - y) <= root_tol) | ((hi - lo) <= root_tol))
        y = np.where(done, y, ynew)
        done |= newly
    else:
        raise QuadratureFailure("bracketed root refinement stalled")
    return y
