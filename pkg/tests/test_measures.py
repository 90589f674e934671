import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import logsob as L
from logsob.errors import (
    DomainError,
    MassNotNormalized,
    MeasureParseError,
    NonpositiveWeight,
    ZeroScale,
)


def test_point_mass_has_zero_radius():
    mu = L.make_discrete([(0.0, 1.0)])
    sr = L.support_radius(mu)
    assert sr.radius == 0.0 and sr.center == 0.0


def test_two_atom_symmetric():
    mu = L.make_discrete([(-1.0, 0.5), (1.0, 0.5)])
    sr = L.support_radius(mu)
    assert sr.radius == 1.0 and sr.center == 0.0


def test_two_atom_offcenter():
    mu = L.make_discrete([(0.0, 0.3), (2.0, 0.7)])
    sr = L.support_radius(mu)
    assert sr.radius == 1.0 and sr.center == 1.0


def test_negative_weight_rejected():
    with pytest.raises(NonpositiveWeight):
        L.make_discrete([(0.0, -0.5), (1.0, 1.5)])


def test_mass_deviation_reported():
    with pytest.raises(MassNotNormalized) as err:
        L.make_discrete([(0.0, 0.4), (1.0, 0.5)])
    assert abs(err.value.deviation + 0.1) < 1e-12


def test_integrate_point_mass_exp():
    mu = L.make_discrete([(0.0, 1.0)])
    assert L.integrate(mu, np.exp) == 1.0


def test_integrate_bernoulli_square():
    mu = L.make_discrete([(-1.0, 0.5), (1.0, 0.5)])
    assert L.integrate(mu, lambda s: s * s) == 1.0


def test_integrate_uniform_mean():
    mu = L.make_uniform(0.0, 1.0)
    # antiderivative s^2/2 gives exactly 1/2
    assert abs(L.integrate(mu, lambda s: s) - 0.5) <= 1e-10


def test_integrate_uniform_second_moment():
    mu = L.make_uniform(0.0, 1.0)
    assert abs(L.integrate(mu, lambda s: s * s) - 1.0 / 3.0) <= 1e-10


def test_integrate_vector_output():
    mu = L.make_discrete([(-1.0, 0.5), (1.0, 0.5)])
    out = L.integrate(mu, lambda s: np.stack([s, s * s], axis=-1))
    assert np.allclose(out, [0.0, 1.0])


def test_pushforward_identity():
    mu = L.make_discrete([(-1.0, 0.5), (1.0, 0.5)])
    nu = L.pushforward_affine(mu, 1.0, 0.0)
    assert nu.atoms == mu.atoms and nu.support == mu.support


def test_pushforward_rescale():
    mu = L.make_discrete([(-1.0, 0.5), (1.0, 0.5)])
    nu = L.pushforward_affine(mu, 1.0 / math.sqrt(4.0))
    assert [x for x, _ in nu.atoms] == [-0.5, 0.5]
    assert L.support_radius(nu).radius == 0.5


def test_pushforward_point_mass():
    mu = L.make_discrete([(0.0, 1.0)])
    nu = L.pushforward_affine(mu, 3.0, 2.5)
    assert nu.atoms == ((2.5, 1.0),)


def test_pushforward_zero_scale():
    mu = L.make_discrete([(0.0, 1.0)])
    with pytest.raises(ZeroScale):
        L.pushforward_affine(mu, 0.0)


def test_pushforward_density_mass_preserved():
    mu = L.make_uniform(-1.0, 1.0)
    nu = L.pushforward_affine(mu, -2.0, 1.0)
    assert abs(nu.mass - 1.0) < 1e-12
    assert L.support_radius(nu).radius == pytest.approx(2.0)


@given(
    lam=st.floats(min_value=0.1, max_value=10.0).filter(lambda v: v != 0),
    shift=st.floats(min_value=-5.0, max_value=5.0),
    flip=st.booleans(),
)
def test_pushforward_roundtrip(lam, shift, flip):
    if flip:
        lam = -lam
    mu = L.make_discrete([(-1.0, 0.25), (0.5, 0.75)])
    back = L.pushforward_affine(
        L.pushforward_affine(mu, lam, shift), 1.0 / lam, -shift / lam
    )
    for (x0, w0), (x1, w1) in zip(mu.atoms, back.atoms):
        assert abs(x0 - x1) < 1e-9 * max(1.0, abs(lam)) and w0 == w1
    assert abs(back.support[0] - mu.support[0]) < 1e-9
    assert abs(back.support[1] - mu.support[1]) < 1e-9


@given(
    weights=st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=1, max_size=5),
    lam=st.floats(min_value=0.25, max_value=4.0),
)
def test_mass_and_radius_scaling(weights, lam):
    total = sum(weights)
    atoms = [(float(i), w / total) for i, w in enumerate(weights)]
    mu = L.make_discrete(atoms, mass_tol=1e-6)
    assert abs(L.integrate(mu, lambda s: np.ones_like(s)) - 1.0) <= 1e-6
    assert L.support_radius(L.pushforward_affine(mu, lam)).radius == pytest.approx(
        lam * L.support_radius(mu).radius
    )


def test_centered_moves_midpoint_to_zero():
    mu = L.make_discrete([(0.0, 0.3), (2.0, 0.7)])
    mu_c, sr = L.centered(mu)
    assert sr.center == 1.0
    assert L.support_radius(mu_c).center == 0.0


def test_measure_json_roundtrip(tmp_path):
    mu = L.make_measure(
        atoms=[(0.5, 0.5)],
        density=L.TabulatedDensity(np.linspace(-1, 0, 5), np.full(5, 0.5)),
    )
    path = tmp_path / "m.json"
    path.write_text(__import__("json").dumps(L.measure_to_dict(mu)))
    back = L.load_measure(path)
    assert back.atoms == mu.atoms
    assert np.allclose(back.density.grid, mu.density.grid)


def test_load_measure_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(MeasureParseError):
        L.load_measure(path)


def test_load_measure_missing_file(tmp_path):
    with pytest.raises(MeasureParseError):
        L.load_measure(tmp_path / "absent.json")


def test_empty_measure_rejected():
    with pytest.raises(DomainError):
        L.make_measure(atoms=[])
