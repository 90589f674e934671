"""Monotone rearrangement from a source Gaussian onto the smoothed measure.

With F the source CDF and G the smoothed one, the increasing map T with
G(T(x)) = F(x) pushes gamma_delta onto mu * gamma_delta and has derivative
T'(x) = p(x) / q(T(x)).  Its Lipschitz norm turns the Gaussian log-Sobolev
constant into one for the smoothed measure, so this module reports both a
numerical sup of T' over a sweep window and the closed-form slope bound.

Computation runs in the unit-variance normalized frame (push the centered
base through x -> x/sqrt(delta), smooth with variance 1) and maps back
affinely; the conjugation leaves T' and hence the Lipschitz norm unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .logdomain import MAX_EXP_LOG, LogValue
from .measures import pushforward_affine
from .quadrature import bracketed_newton, golden_section_max
from .smoothing import (
    SmoothedMeasure,
    gaussian_cdf,
    gaussian_sf,
    log_gaussian_density,
)


@dataclass(frozen=True)
class LipschitzEstimate:
    """Numerical sup of the transport derivative over a sweep window.

    ``tail_log_bound`` records the analytic slope bound for the unswept
    outer region (log domain); it is reported, not folded into the max,
    because the sweep value is the estimator of record.
    """

    log_value: float
    argmax: float
    grid_points: int
    window: tuple
    tail_log_bound: float

    @property
    def value(self):
        if self.log_value > MAX_EXP_LOG:
            return None
        return math.exp(self.log_value)


def lipschitz_theoretical_bound(radius_normalized) -> LogValue:
    """Closed-form bound on the transport slope for normalized radius R.

    max(exp(2R^2 + 2R + 1/8), exp(12R^2)): the first branch covers the outer
    regions |x| >= 2R, the second the middle band.
    """
    r = float(radius_normalized)
    if r < 0.0:
        raise ValueError("normalized radius must be nonnegative")
    return LogValue(max(2.0 * r * r + 2.0 * r + 0.125, 12.0 * r * r))


class TransportMap:
    """Increasing map pushing gamma_delta onto the smoothed target measure."""

    def __init__(self, target: SmoothedMeasure, grid_points: int = 4001, extent: float = 8.0):
        self.target = target
        self.delta = target.delta
        self.sigma = target.sigma
        self.center = target.center
        self.radius = target.radius
        self.grid_points = int(grid_points)
        self.extent = float(extent)
        if target.delta == 1.0 and target.center == 0.0:
            self.unit = target
        else:
            base = target.centered_base
            if target.delta != 1.0:
                base = pushforward_affine(base, 1.0 / target.sigma)
            self.unit = SmoothedMeasure(base, 1.0, target.config)
        self.radius_normalized = self.radius / self.sigma
        self._samples = None

    # -- unit-frame solve ------------------------------------------------

    def _eval_unit(self, xn):
        """Solve G(y) = F(x) in the normalized frame, tail-stable on both sides."""
        rn = self.radius_normalized
        pad = 1e-9 + 1e-12 * np.abs(xn)
        lo = xn - rn - pad
        hi = xn + rn + pad
        right = xn >= 0.0
        f_sf = gaussian_sf(xn)
        f_cdf = gaussian_cdf(xn)
        unit = self.unit

        def resid(y):
            out = np.empty_like(y)
            if right.any():
                out[right] = f_sf[right] - unit._sf_c(y[right])
            left = ~right
            if left.any():
                out[left] = unit._cdf_c(y[left]) - f_cdf[left]
            return out

        return bracketed_newton(
            resid, unit._density_c, lo, hi, root_tol=self.target.config.root_tol
        )

    def _log_derivative_unit(self, xn, yn):
        return log_gaussian_density(xn, 1.0) - self.unit._log_density_c(yn)

    # -- public evaluators (original coordinates) -------------------------

    def eval(self, x):
        """T(x); strictly increasing, with x - R <= T(x) - center <= x + R."""
        arr = np.asarray(x, dtype=float)
        xn = np.atleast_1d(arr).ravel() / self.sigma
        yn = self._eval_unit(xn)
        out = self.center + self.sigma * yn
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    def derivative(self, x):
        """T'(x) = p(x) / q(T(x)) > 0."""
        return self.eval_and_derivative(x)[1]

    def eval_and_derivative(self, x):
        arr = np.asarray(x, dtype=float)
        xn = np.atleast_1d(arr).ravel() / self.sigma
        yn = self._eval_unit(xn)
        t = self.center + self.sigma * yn
        d = np.exp(self._log_derivative_unit(xn, yn))
        if arr.ndim == 0:
            return float(t[0]), float(d[0])
        return t.reshape(arr.shape), d.reshape(arr.shape)

    def envelope(self, x):
        """Hard bounds (T_lo, T_hi) valid for every x."""
        arr = np.asarray(x, dtype=float)
        return arr + self.center - self.radius, arr + self.center + self.radius

    def lipschitz_estimate(
        self, grid_points: int | None = None, extent: float | None = None, refine_xtol: float = 1e-8
    ) -> LipschitzEstimate:
        """Sweep max of T' over [-2R-extent, 2R+extent] (normalized), refined.

        The grid max is polished by golden-section search between its
        neighboring grid points.  Beyond the window no numerical evaluation
        is attempted; the analytic outer-region bound is reported alongside.
        """
        gp = int(grid_points) if grid_points else self.grid_points
        ext = float(extent) if extent else self.extent
        rn = self.radius_normalized
        xs = np.linspace(-(2.0 * rn + ext), 2.0 * rn + ext, gp)
        ys = self._eval_unit(xs)
        logd = self._log_derivative_unit(xs, ys)
        i = int(np.argmax(logd))
        self._samples = (
            self.sigma * xs,
            self.center + self.sigma * ys,
            np.exp(logd),
        )

        def logd_at(x):
            xa = np.array([x])
            return float(self._log_derivative_unit(xa, self._eval_unit(xa))[0])

        xr, fr = golden_section_max(
            logd_at, xs[max(i - 1, 0)], xs[min(i + 1, gp - 1)], xtol=refine_xtol
        )
        if fr >= logd[i]:
            best_x, best_log = xr, fr
        else:
            best_x, best_log = float(xs[i]), float(logd[i])
        return LipschitzEstimate(
            log_value=best_log,
            argmax=self.sigma * best_x,
            grid_points=gp,
            window=(self.sigma * float(xs[0]), self.sigma * float(xs[-1])),
            tail_log_bound=2.0 * rn * rn + 2.0 * rn + 0.125,
        )

    @property
    def samples(self):
        """(x, T(x), T'(x)) from the last sweep, or None before any sweep."""
        return self._samples


def transport_table(tm: TransportMap, points: int = 1001, extent: float = 8.0):
    """Columns for the transport report: x, T, T', and the hard envelope."""
    rn = tm.radius_normalized
    xs = tm.sigma * np.linspace(-(2.0 * rn + extent), 2.0 * rn + extent, int(points))
    t, d = tm.eval_and_derivative(xs)
    env_lo, env_hi = tm.envelope(xs)
    return {"x": xs, "T": t, "T_prime": d, "envelope_lo": env_lo, "envelope_hi": env_hi}
