import numpy as np
import pytest
from scipy.integrate import quad

from rotset.errors import NonFiniteOrbit
from rotset.maps import (builtin, compose, displacement, eval_lift, identity, inverse, shear_x,
                         shear_y, translation)
from rotset.observable import (SamplingPlan, mean_rotation_vector, orbit_rotation_vector,
                               orbit_vectors, power_scaling_check, random_starts,
                               sample_observable)

# reference double-precision run, recorded at build time
F1_ORBIT_0123_0456_T1000 = (0.5161006766657519, 0.4904675286776754)


@pytest.mark.parametrize("v", [(0.25, -0.5), (0.1, 0.7), (1 / 3, 2 / 7)])
@pytest.mark.parametrize("T", [1, 7, 1000])
def test_translation_exact(v, T):
    s = orbit_rotation_vector(translation(*v), (0.3, 0.9), T)
    assert s.vector == v
    assert s.length == T


def test_example2_orbits():
    starts = np.random.default_rng(0).random((100, 2))
    vec = orbit_vectors(builtin("example2"), starts, 300)
    assert np.all(vec[:, 1] == 0.0)
    assert np.all(np.abs(vec[:, 0]) <= 1.0)


def test_f1_regression_value():
    s = orbit_rotation_vector(builtin("f1"), (0.123, 0.456), 1000)
    np.testing.assert_allclose(s.vector, F1_ORBIT_0123_0456_T1000, rtol=0, atol=1e-12)


def test_example3_observable_vector():
    # y=1/2 is the attracting invariant circle (derivative 1 - 2*pi/100), where D = (-1, 0)
    plan = SamplingPlan("random", 100, 3000, seed=3)
    vec = sample_observable(builtin("example3"), plan).vectors
    assert np.all(np.linalg.norm(vec - [-1.0, 0.0], axis=1) < 0.1)


def test_non_finite_orbit():
    with pytest.raises(NonFiniteOrbit):
        orbit_vectors(builtin("f1", {"p_bump": 1e308, "p_ratio": 1e308}), [[0.1, 0.2]], 3)


def test_random_starts_counter_based():
    a = random_starts(7, range(10))
    b = random_starts(7, [3, 4, 5])
    assert np.array_equal(a[3:6], b)
    assert np.all((a >= 0) & (a < 1))
    assert not np.array_equal(random_starts(8, range(10)), a)


def test_identity_plan():
    s = sample_observable(identity(), SamplingPlan("random", 10, 5))
    assert len(s) == 10 and not s.vectors.any()
    assert [r.length for r in s] == [5] * 10


def test_grid_plan_starts():
    s = sample_observable(translation(0.1, 0.0), SamplingPlan("grid", 3, 2))
    expect = [(i / 3, j / 3) for i in range(3) for j in range(3)]
    assert [r.start for r in s] == expect


def test_seed_determinism_across_workers():
    plan = SamplingPlan("random", 9000, 20, seed=11)
    a = sample_observable(builtin("f2"), plan, workers=1)
    b = sample_observable(builtin("f2"), plan, workers=4)
    assert np.array_equal(a.starts, b.starts)
    assert np.array_equal(a.vectors, b.vectors)


def test_plan_validation():
    with pytest.raises(ValueError):
        SamplingPlan("spiral", 10, 10)
    with pytest.raises(ValueError):
        SamplingPlan("random", 0, 10)
    with pytest.raises(ValueError):
        SamplingPlan("random", 10, 10, seed=-1)


@pytest.mark.parametrize("name", ["f1", "f2", "example2", "example3"])
def test_sample_norm_bounded_by_sup_displacement(name):
    m = builtin(name)
    grid = (np.stack(np.meshgrid(np.arange(400), np.arange(400)), -1).reshape(-1, 2) + 0.5) / 400
    sup = np.max(np.linalg.norm(displacement(m, grid), axis=1))
    vec = sample_observable(m, SamplingPlan("random", 200, 50, seed=2)).vectors
    assert np.all(np.linalg.norm(vec, axis=1) <= sup + 1e-3)


def test_mean_trivial():
    assert mean_rotation_vector(translation(0.3, -0.2), 7).tolist() == [0.3, -0.2]
    assert mean_rotation_vector(identity(), 16).tolist() == [0.0, 0.0]


def _bump(ratio, freq):
    return lambda s: np.sin(4 * np.pi * s) ** 2 * (np.sin(6 * np.pi * s) + ratio * np.cos(2 * freq * np.pi * s))


@pytest.mark.parametrize("ratio, freq", [(0.3754, 13), (0.4243, 11)])
def test_oscillatory_terms_integrate_to_zero(ratio, freq):
    val, _ = quad(_bump(ratio, freq), 0, 1, limit=200, epsabs=1e-13)
    assert abs(val) < 1e-9
    val, _ = quad(lambda s: np.cos(2 * np.pi * s), 0, 1, epsabs=1e-13)
    assert abs(val) < 1e-9


def test_mean_f1():
    np.testing.assert_allclose(mean_rotation_vector(builtin("f1"), 1024), [0.5, 0.5], atol=1e-6)


def test_power_scaling_translation():
    lhs, rhs = power_scaling_check(translation(0.1, 0.2), 3, (0.5, 0.5), 10)
    np.testing.assert_allclose(lhs, [0.3, 0.6], atol=1e-15)
    np.testing.assert_allclose(rhs, [0.3, 0.6], atol=1e-15)


@pytest.mark.parametrize("name, q, start, T", [
    ("f1", 2, (0.2, 0.3), 500),
    ("example2", 5, (0.77, 0.41), 200),
    ("f2", 3, (0.05, 0.95), 200),
])
def test_power_scaling(name, q, start, T):
    lhs, rhs = power_scaling_check(builtin(name), q, start, T)
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-9)


# H conjugates F; started at H(x) mod 1 the orbit vector moves by at most 2*sup|H - Id|/T.
# Long T only for maps without expanding orbits, where roundoff stays small.
CONJUGATORS = [shear_x(0.3, 0.1, 0.02, 0.5, 3), shear_y(0.2, -0.05), builtin("P")]


def _sup_shift(H):
    s = np.linspace(0, 1, 4001)
    pts = np.stack([s, s], -1)
    return float(np.max(np.linalg.norm(displacement(H, pts), axis=1)))


@pytest.mark.parametrize("H", CONJUGATORS)
@pytest.mark.parametrize("name, T", [("example3", 400), ("translation", 100), ("example2", 5), ("f1", 5)])
def test_conjugacy_drift_bound(H, name, T):
    F = builtin(name, {"vx": 0.31, "vy": 0.17} if name == "translation" else None)
    G = compose(H, compose(F, inverse(H)))
    starts = np.random.default_rng(9).random((50, 2))
    moved = eval_lift(H, starts) % 1.0
    drift = np.linalg.norm(orbit_vectors(G, moved, T) - orbit_vectors(F, starts, T), axis=1)
    bound = 2 * _sup_shift(H) / T
    assert np.all(drift <= bound + 1e-9)
