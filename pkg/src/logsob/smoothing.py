"""Gaussian smoothing of a compactly supported measure.

For a base measure mu (support radius R once centered) and variance delta,
the smoothed measure mu * gamma_delta has density

    q(t) = integral of phi_delta(t - s) dmu(s),

which is smooth and strictly positive, so its CDF has a well-defined smooth
inverse.  This module evaluates q, the CDF and survival function, their
logs, the inverse CDF, and the tilted-moment objects (the mgf of mu and the
induced tail shift) that control how far q's tail sits from the source
Gaussian's.

All evaluation happens in coordinates centered on the support midpoint and
is translated back at the interface; translations do not move LSI constants.
For a piecewise-linear density part the convolution and its CDF reduce to
closed forms in phi and Phi, which keeps dense sweeps cheap; the generic
quadrature route stays available through :func:`logsob.measures.integrate`
and is used by the tests as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr, ndtr

from .errors import BracketFailure, DomainError
from .measures import Measure1D, centered, integrate
from .quadrature import bracketed_newton

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _std_pdf(z):
    return np.exp(-0.5 * z * z) / _SQRT_2PI


def _lse_rows(a):
    """logsumexp over the last axis, shift-stabilized (rows of -inf give -inf)."""
    m = np.max(a, axis=-1)
    safe = np.where(np.isfinite(m), m, 0.0)
    out = safe + np.log(np.sum(np.exp(a - safe[..., None]), axis=-1))
    return np.where(np.isfinite(m), out, m)


def _check_delta(delta) -> float:
    delta = float(delta)
    if not delta > 0.0:
        raise DomainError("variance delta must be positive")
    return delta


def gaussian_density(t, delta=1.0):
    """Density of the centered Gaussian with variance delta."""
    delta = _check_delta(delta)
    t = np.asarray(t, dtype=float)
    return np.exp(-t * t / (2.0 * delta)) / math.sqrt(2.0 * math.pi * delta)


def log_gaussian_density(t, delta=1.0):
    delta = _check_delta(delta)
    t = np.asarray(t, dtype=float)
    return -t * t / (2.0 * delta) - 0.5 * math.log(delta) - _LOG_SQRT_2PI


def gaussian_cdf(x, delta=1.0):
    """CDF of the centered Gaussian with variance delta."""
    delta = _check_delta(delta)
    return ndtr(np.asarray(x, dtype=float) / math.sqrt(delta))


def gaussian_sf(x, delta=1.0):
    delta = _check_delta(delta)
    return ndtr(-np.asarray(x, dtype=float) / math.sqrt(delta))


def log_gaussian_cdf(x, delta=1.0):
    delta = _check_delta(delta)
    return log_ndtr(np.asarray(x, dtype=float) / math.sqrt(delta))


def log_gaussian_sf(x, delta=1.0):
    delta = _check_delta(delta)
    return log_ndtr(-np.asarray(x, dtype=float) / math.sqrt(delta))


@dataclass(frozen=True)
class GaussianParams:
    """Variance of the smoothing Gaussian."""

    delta: float

    def __post_init__(self):
        object.__setattr__(self, "delta", _check_delta(self.delta))


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and truncation for all smoothed-measure evaluations.

    Integrals over the whole line are truncated to the support hull padded by
    ``tail_mult`` standard deviations; the neglected Gaussian mass is below
    ndtr(-tail_mult), which must stay under ``cdf_tol``.
    """

    tail_mult: float = 12.0
    integ_tol: float = 1e-10
    cdf_tol: float = 1e-9
    root_tol: float = 1e-10
    cache_points_per_sigma: int = 50

    def __post_init__(self):
        for name in ("tail_mult", "integ_tol", "cdf_tol", "root_tol"):
            if not float(getattr(self, name)) > 0.0:
                raise DomainError("%s must be positive" % name)
        if ndtr(-float(self.tail_mult)) > float(self.cdf_tol):
            raise DomainError("tail_mult too small for the requested cdf_tol")


# antiderivatives of Phi and z*Phi, used by the piecewise-linear convolution
def _anti_cdf(z):
    return z * ndtr(z) + _std_pdf(z)


def _anti_z_cdf(z):
    return 0.5 * ((z * z - 1.0) * ndtr(z) + z * _std_pdf(z))


class SmoothedMeasure:
    """A compactly supported measure convolved with a centered Gaussian.

    Immutable after construction: the monotone CDF table used for quantile
    bracketing is built eagerly, and every evaluator is pure, so instances
    are safe to share across threads.  Evaluators accept scalars or arrays
    in the base measure's original coordinates.
    """

    def __init__(self, base: Measure1D, delta=1.0, config: QuadratureConfig | None = None):
        if isinstance(delta, GaussianParams):
            delta = delta.delta
        self.delta = _check_delta(delta)
        self.sigma = math.sqrt(self.delta)
        self.config = config or QuadratureConfig()
        self.base = base
        mu_c, sr = centered(base)
        self.centered_base = mu_c
        self.radius = float(sr.radius)
        self.center = float(sr.center)

        self._aloc = np.array([x for x, _ in mu_c.atoms], dtype=float)
        self._awt = np.array([w for _, w in mu_c.atoms], dtype=float)
        if mu_c.density is not None:
            grid = mu_c.density.grid
            vals = mu_c.density.values
            s0, s1 = grid[:-1], grid[1:]
            slope = (vals[1:] - vals[:-1]) / (s1 - s0)
            self._cells = (s0, s1, vals[:-1] - slope * s0, slope)
        else:
            self._cells = None

        self.cutoff = self.radius + self.config.tail_mult * self.sigma
        step = self.sigma / self.config.cache_points_per_sigma
        n = max(3, int(round(2.0 * self.cutoff / step)) + 1)
        self._grid = np.linspace(-self.cutoff, self.cutoff, n)
        # monotone tables for quantile bracketing; enforce monotonicity
        # against last-ulp quadrature noise
        self._grid_cdf = np.maximum.accumulate(self._cdf_c(self._grid))
        self._grid_sf = np.minimum.accumulate(self._sf_c(self._grid))

    # -- centered-frame evaluators -------------------------------------

    def _density_atoms(self, t):
        z = (t[:, None] - self._aloc) / self.sigma
        return (self._awt * np.exp(-0.5 * z * z)).sum(axis=1) / (self.sigma * _SQRT_2PI)

    def _density_cells(self, t):
        s0, s1, alpha, beta = self._cells
        u0 = (s0 - t[:, None]) / self.sigma
        u1 = (s1 - t[:, None]) / self.sigma
        # Phi(u1) - Phi(u0) via whichever tail avoids cancellation
        cdf_gap = np.where(
            u0 + u1 > 0.0, ndtr(-u0) - ndtr(-u1), ndtr(u1) - ndtr(u0)
        )
        lin = alpha + beta * t[:, None]
        terms = lin * cdf_gap + beta * self.sigma * (_std_pdf(u0) - _std_pdf(u1))
        return np.maximum(terms.sum(axis=1), 0.0)

    def _density_c(self, t):
        out = np.zeros_like(t)
        if self._aloc.size:
            out = out + self._density_atoms(t)
        if self._cells is not None:
            out = out + self._density_cells(t)
        return out

    def _log_density_c(self, t):
        if self._aloc.size:
            z = (t[:, None] - self._aloc) / self.sigma
            la = np.log(self._awt) - 0.5 * z * z - math.log(self.sigma) - _LOG_SQRT_2PI
            out = _lse_rows(la)
        else:
            out = np.full(t.shape, -np.inf)
        if self._cells is not None:
            with np.errstate(divide="ignore"):
                out = np.logaddexp(out, np.log(self._density_cells(t)))
        return out

    def _cdf_c(self, x):
        out = np.zeros_like(x)
        if self._aloc.size:
            z = (x[:, None] - self._aloc) / self.sigma
            out = out + (self._awt * ndtr(z)).sum(axis=1)
        if self._cells is not None:
            out = out + self._cells_cdf_only(x)
        return np.clip(out, 0.0, 1.0)

    def _sf_c(self, x):
        out = np.zeros_like(x)
        if self._aloc.size:
            z = (x[:, None] - self._aloc) / self.sigma
            out = out + (self._awt * ndtr(-z)).sum(axis=1)
        if self._cells is not None:
            out = out + self._cells_sf_only(x)
        return np.clip(out, 0.0, 1.0)

    def _log_cdf_c(self, x):
        if self._aloc.size:
            z = (x[:, None] - self._aloc) / self.sigma
            out = _lse_rows(np.log(self._awt) + log_ndtr(z))
        else:
            out = np.full(x.shape, -np.inf)
        if self._cells is not None:
            with np.errstate(divide="ignore"):
                out = np.logaddexp(out, np.log(self._cells_cdf_only(x)))
        return np.minimum(out, 0.0)

    def _cells_cdf_only(self, x):
        s0, s1, alpha, beta = self._cells
        z0 = (x[:, None] - s0) / self.sigma
        z1 = (x[:, None] - s1) / self.sigma
        lin = alpha + beta * x[:, None]
        terms = lin * (_anti_cdf(z0) - _anti_cdf(z1))
        terms = terms - beta * self.sigma * (_anti_z_cdf(z0) - _anti_z_cdf(z1))
        return self.sigma * np.maximum(terms, 0.0).sum(axis=1)

    def _cells_sf_only(self, x):
        s0, s1, alpha, beta = self._cells
        w0 = (s0 - x[:, None]) / self.sigma
        w1 = (s1 - x[:, None]) / self.sigma
        lin = alpha + beta * x[:, None]
        terms = lin * (_anti_cdf(w1) - _anti_cdf(w0))
        terms = terms + beta * self.sigma * (_anti_z_cdf(w1) - _anti_z_cdf(w0))
        return self.sigma * np.maximum(terms, 0.0).sum(axis=1)

    def _log_sf_c(self, x):
        if self._aloc.size:
            z = (x[:, None] - self._aloc) / self.sigma
            out = _lse_rows(np.log(self._awt) + log_ndtr(-z))
        else:
            out = np.full(x.shape, -np.inf)
        if self._cells is not None:
            with np.errstate(divide="ignore"):
                out = np.logaddexp(out, np.log(self._cells_sf_only(x)))
        return np.minimum(out, 0.0)

    # -- public interface (original coordinates) -----------------------

    def _wrap(self, fn, x):
        arr = np.asarray(x, dtype=float)
        flat = np.atleast_1d(arr).ravel() - self.center
        out = fn(flat)
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    def density(self, t):
        """Smoothed density q(t); strictly positive for all finite t."""
        return self._wrap(self._density_c, t)

    def log_density(self, t):
        return self._wrap(self._log_density_c, t)

    def cdf(self, x):
        return self._wrap(self._cdf_c, x)

    def sf(self, x):
        """Survival function 1 - cdf, computed directly for tail accuracy."""
        return self._wrap(self._sf_c, x)

    def log_cdf(self, x):
        return self._wrap(self._log_cdf_c, x)

    def log_sf(self, x):
        return self._wrap(self._log_sf_c, x)

    def window(self):
        """Interval outside which the smoothed mass is below cdf_tol."""
        return (self.center - self.cutoff, self.center + self.cutoff)

    def inv_cdf(self, u):
        """Quantile: x with |cdf(x) - u| below cdf_tol, root_tol-accurate in x.

        Brackets from the cached monotone table, then polishes with Newton
        steps driven by the density.  Raises BracketFailure when u is more
        extreme than the mass inside the tail cutoff can resolve.
        """
        arr = np.asarray(u, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        if flat.size and (np.any(flat <= 0.0) | np.any(flat >= 1.0)):
            raise DomainError("quantile argument must lie strictly inside (0, 1)")
        gc = self._grid_cdf
        if flat.size and (np.any(flat < gc[0]) or np.any(flat > gc[-1])):
            raise BracketFailure(
                "quantile beyond the tail cutoff; widen tail_mult to resolve it"
            )
        idx = np.clip(np.searchsorted(gc, flat), 1, gc.size - 1)
        lo = self._grid[np.maximum(idx - 2, 0)]
        hi = self._grid[np.minimum(idx + 1, gc.size - 1)]
        use_sf = flat > 0.5
        ubar = 1.0 - flat

        def resid(y):
            out = np.empty_like(y)
            if use_sf.any():
                out[use_sf] = ubar[use_sf] - self._sf_c(y[use_sf])
            rest = ~use_sf
            if rest.any():
                out[rest] = self._cdf_c(y[rest]) - flat[rest]
            return out

        y = bracketed_newton(resid, self._density_c, lo, hi, root_tol=self.config.root_tol)
        y = y + self.center
        if arr.ndim == 0:
            return float(y[0])
        return y.reshape(arr.shape)

    # -- tilted moments of the centered base measure --------------------

    def _tilted_stats(self, x):
        """(log mgf, tilted mean) of the centered base, overflow-shifted.

        The integrand is rescaled by exp(-x * s_star) with s_star the support
        endpoint favored by the tilt, which pins it inside (0, 1] for every x.
        """
        xa = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
        s_star = np.where(xa >= 0.0, self.radius, -self.radius)
        shift = xa * s_star

        def g(s):
            e = np.exp(np.multiply.outer(s, xa) - shift)
            return np.stack([e, s[:, None] * e], axis=1)

        vals = integrate(self.centered_base, g, rtol=self.config.integ_tol, atol=1e-16)
        vals = np.asarray(vals, dtype=float)
        base = np.maximum(vals[0], np.finfo(float).tiny)
        return shift + np.log(base), vals[1] / base

    def log_mgf(self, x):
        """log of the base measure's moment generating function."""
        arr = np.asarray(x, dtype=float)
        out = self._tilted_stats(arr)[0]
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    def mgf(self, x):
        with np.errstate(over="ignore"):
            return np.exp(self.log_mgf(x))

    def tilt_mean(self, x):
        """Mean of the base measure tilted by exp(x*s); equals (log mgf)'."""
        arr = np.asarray(x, dtype=float)
        out = self._tilted_stats(arr)[1]
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    def tail_shift(self, x):
        """Shift K with q(x + K(x)) comparable to the source density at x.

        Defined for x != 0; the sandwich bounds hold on |x| >= 2*radius.
        """
        arr = np.asarray(x, dtype=float)
        if np.any(arr == 0.0):
            raise DomainError("tail shift is undefined at 0")
        lm = self._tilted_stats(arr)[0].reshape(arr.shape)
        out = (lm + self.radius) / arr
        return float(out) if arr.ndim == 0 else out

    def tail_shift_deriv(self, x):
        """Derivative of the tail shift; bounded by radius on |x| >= 2*radius."""
        arr = np.asarray(x, dtype=float)
        if np.any(arr == 0.0):
            raise DomainError("tail shift is undefined at 0")
        lm, tm = self._tilted_stats(arr)
        lm = lm.reshape(arr.shape)
        tm = tm.reshape(arr.shape)
        out = tm / arr - lm / (arr * arr) - self.radius / (arr * arr)
        return float(out) if arr.ndim == 0 else out
