"""Compactly supported probability measures on the real line.

A measure is a finite list of atoms plus an optional tabulated density,
interpolated linearly between its grid nodes.  Everything downstream goes
through :func:`integrate`, which is exact over atoms and adaptive-Simpson
over density cells.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DomainError,
    InvalidDensity,
    MassNotNormalized,
    MeasureParseError,
    NonpositiveWeight,
    ZeroScale,
)
from .quadrature import adaptive_simpson

#: rejected (not renormalized) when the total mass misses 1 by more than this
MASS_TOL = 1e-9
#: default relative tolerance for density-cell quadrature
INTEG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TabulatedDensity:
    """Nonnegative density tabulated on an increasing grid, linear between nodes."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if grid.ndim != 1 or grid.size < 2 or values.shape != grid.shape:
            raise InvalidDensity("grid and values must be 1-D arrays of equal length >= 2")
        if not np.all(np.isfinite(grid)) or not np.all(np.isfinite(values)):
            raise InvalidDensity("grid and values must be finite")
        if np.any(np.diff(grid) <= 0.0):
            raise InvalidDensity("grid must be strictly increasing")
        if np.any(values < 0.0):
            raise InvalidDensity("density values must be nonnegative")

    def __call__(self, x):
        return np.interp(x, self.grid, self.values, left=0.0, right=0.0)

    @property
    def mass(self) -> float:
        # trapezoid is exact for a piecewise-linear density
        v0, v1 = self.values[:-1], self.values[1:]
        return float(np.sum(0.5 * (v0 + v1) * np.diff(self.grid)))


@dataclass(frozen=True)
class SupportRadius:
    """Half-length of the support interval and its midpoint."""

    radius: float
    center: float


@dataclass(frozen=True, eq=False)
class Measure1D:
    """Probability measure with atoms and/or a tabulated density.

    Invariants checked at construction: positive weights, nonnegative
    density, total mass 1 within ``mass_tol``, everything inside
    ``support``.
    """

    atoms: tuple = ()
    density: TabulatedDensity | None = None
    support: tuple = (0.0, 0.0)
    mass_tol: float = MASS_TOL

    def __post_init__(self):
        atoms = tuple((float(x), float(w)) for x, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        a, b = float(self.support[0]), float(self.support[1])
        object.__setattr__(self, "support", (a, b))
        if not (a <= b):
            raise DomainError("support interval must satisfy a <= b")
        if not atoms and self.density is None:
            raise DomainError("measure needs atoms or a density")
        for x, w in atoms:
            if not w > 0.0:
                raise NonpositiveWeight("atom at %r has weight %r" % (x, w))
            if not (a <= x <= b):
                raise DomainError("atom at %r outside support [%r, %r]" % (x, a, b))
        if self.density is not None:
            g = self.density.grid
            if g[0] < a - 1e-12 or g[-1] > b + 1e-12:
                raise DomainError("density grid extends outside the support interval")
        deviation = self.mass - 1.0
        if abs(deviation) > self.mass_tol:
            raise MassNotNormalized(deviation, self.mass_tol)

    @property
    def mass(self) -> float:
        total = sum(w for _, w in self.atoms)
        if self.density is not None:
            total += self.density.mass
        return total


def make_discrete(atoms, mass_tol=MASS_TOL) -> Measure1D:
    """Purely atomic measure; support is the hull of the atom locations."""
    atoms = [(float(x), float(w)) for x, w in atoms]
    if not atoms:
        raise DomainError("need at least one atom")
    locs = [x for x, _ in atoms]
    return Measure1D(
        atoms=tuple(atoms),
        density=None,
        support=(min(locs), max(locs)),
        mass_tol=mass_tol,
    )


def make_measure(atoms=(), density=None, mass_tol=MASS_TOL) -> Measure1D:
    """Mixed measure; support is the hull of atoms and density grid."""
    atoms = [(float(x), float(w)) for x, w in atoms]
    ends = [x for x, _ in atoms]
    if density is not None:
        ends.extend([float(density.grid[0]), float(density.grid[-1])])
    if not ends:
        raise DomainError("measure needs atoms or a density")
    return Measure1D(
        atoms=tuple(atoms),
        density=density,
        support=(min(ends), max(ends)),
        mass_tol=mass_tol,
    )


def make_uniform(a, b, nodes=5) -> Measure1D:
    """Uniform density on [a, b]."""
    a, b = float(a), float(b)
    if not b > a:
        raise DomainError("need b > a for a uniform density")
    grid = np.linspace(a, b, int(nodes))
    values = np.full(grid.shape, 1.0 / (b - a))
    return make_measure(density=TabulatedDensity(grid, values))


def integrate(mu: Measure1D, g, rtol=INTEG_TOL, atol=0.0):
    """Integrate g against mu: sum over atoms plus quadrature over density cells.

    ``g`` maps a 1-D abscissa array to an array with the same leading axis;
    trailing axes pass through, so a single call can integrate a whole batch
    of integrands.
    """
    total = None
    if mu.atoms:
        locs = np.array([x for x, _ in mu.atoms])
        wts = np.array([w for _, w in mu.atoms])
        vals = np.asarray(g(locs), dtype=float)
        total = np.einsum("i,i...->...", wts, vals)
    if mu.density is not None:
        dens = mu.density

        def integrand(s):
            gv = np.asarray(g(s), dtype=float)
            rho = dens(s)
            return gv * rho.reshape(rho.shape + (1,) * (gv.ndim - 1))

        for s0, s1 in zip(dens.grid[:-1], dens.grid[1:]):
            part = adaptive_simpson(integrand, s0, s1, rtol=rtol, atol=atol)
            total = part if total is None else total + part
    if np.ndim(total) == 0:
        return float(total)
    return total


def pushforward_affine(mu: Measure1D, scale, shift=0.0) -> Measure1D:
    """Image of mu under x -> scale*x + shift."""
    scale = float(scale)
    shift = float(shift)
    if scale == 0.0:
        raise ZeroScale("affine push-forward needs a nonzero scale")
    atoms = tuple((scale * x + shift, w) for x, w in mu.atoms)
    density = None
    if mu.density is not None:
        grid = scale * mu.density.grid + shift
        values = mu.density.values / abs(scale)
        if scale < 0.0:
            grid = grid[::-1]
            values = values[::-1]
        density = TabulatedDensity(grid, values)
    a, b = mu.support
    lo, hi = sorted((scale * a + shift, scale * b + shift))
    return Measure1D(atoms=atoms, density=density, support=(lo, hi), mass_tol=mu.mass_tol)


def support_radius(mu: Measure1D) -> SupportRadius:
    a, b = mu.support
    return SupportRadius(radius=0.5 * (b - a), center=0.5 * (a + b))


def centered(mu: Measure1D):
    """Translate mu so its support midpoint sits at 0; returns (measure, radius)."""
    sr = support_radius(mu)
    if sr.center == 0.0:
        return mu, sr
    return pushforward_affine(mu, 1.0, -sr.center), sr


def measure_to_dict(mu: Measure1D) -> dict:
    out = {"atoms": [{"x": x, "w": w} for x, w in mu.atoms], "density": None}
    if mu.density is not None:
        out["density"] = {
            "grid": [float(v) for v in mu.density.grid],
            "values": [float(v) for v in mu.density.values],
        }
    return out


def measure_from_dict(data: dict, mass_tol=MASS_TOL) -> Measure1D:
    if not isinstance(data, dict):
        raise MeasureParseError("measure document must be a JSON object")
    atoms = []
    for entry in data.get("atoms") or []:
        try:
            atoms.append((float(entry["x"]), float(entry["w"])))
        except (TypeError, KeyError, ValueError) as exc:
            raise MeasureParseError("atom entries need numeric 'x' and 'w': %r" % (entry,)) from exc
    density = None
    dens = data.get("density")
    if dens is not None:
        try:
            density = TabulatedDensity(np.asarray(dens["grid"]), np.asarray(dens["values"]))
        except (TypeError, KeyError, ValueError) as exc:
            raise MeasureParseError("density needs 'grid' and 'values' arrays") from exc
        except InvalidDensity as exc:
            raise MeasureParseError(str(exc)) from exc
    try:
        return make_measure(atoms=atoms, density=density, mass_tol=mass_tol)
    except (NonpositiveWeight, MassNotNormalized, DomainError) as exc:
        raise MeasureParseError(str(exc)) from exc


def load_measure(path, mass_tol=MASS_TOL) -> Measure1D:
    """Read a measure from a JSON file; see measure_from_dict for the schema."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MeasureParseError("%s: %s" % (path, exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureParseError("%s:%d: %s" % (path, exc.lineno, exc.msg)) from exc
    try:
        return measure_from_dict(data, mass_tol=mass_tol)
    except MeasureParseError as exc:
        raise MeasureParseError("%s: %s" % (path, exc)) from exc
