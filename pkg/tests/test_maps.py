import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import mp_f1, mp_f2
from rotset.errors import NotInvertible, UnknownMap
from rotset.maps import (BUILTIN_DEFAULTS, MapSpec, builtin, compose, composite, displacement,
                         eval_lift, identity, inverse, is_invertible, power, shear_x, shear_y,
                         translation)

ALL_BUILTINS = sorted(BUILTIN_DEFAULTS)

# f1(0.25, 0.25) and D(f2)(0, 0) from a 50-digit evaluation of the formulas
F1_AT_QUARTER = (0.74147850403906195195, 0.74568884801724199418)
F2_DISP_AT_ORIGIN = (0.99976356681364123488, 0.99963571767350304073)


def test_identity_point():
    assert eval_lift(identity(), (0.3, 0.7)).tolist() == [0.3, 0.7]


def test_unperturbed_vertical_shear_at_origin():
    assert eval_lift(shear_y(0.5), (0.0, 0.0)).tolist() == [0.0, 1.0]


def test_f1_against_high_precision():
    got = eval_lift(builtin("f1"), (0.25, 0.25))
    np.testing.assert_allclose(got, F1_AT_QUARTER, rtol=0, atol=1e-14)
    ref = [float(c) for c in mp_f1(0.25, 0.25)]
    np.testing.assert_allclose(got, ref, rtol=0, atol=1e-14)


def test_f2_displacement_at_origin():
    got = displacement(builtin("f2"), (0.0, 0.0))
    np.testing.assert_allclose(got, F2_DISP_AT_ORIGIN, rtol=0, atol=1e-14)


@pytest.mark.parametrize("pt", [(0.1, 0.9), (0.5, 0.5), (0.731, 0.012)])
def test_f2_matches_oracle(pt):
    np.testing.assert_allclose(eval_lift(builtin("f2"), pt), [float(c) for c in mp_f2(*pt)],
                               rtol=0, atol=1e-13)


def test_translation_displacement_constant():
    t = translation(0.25, -0.5)
    pts = np.random.default_rng(0).random((50, 2))
    assert np.all(displacement(t, pts) == np.array([0.25, -0.5]))


@pytest.mark.parametrize("y", [0.0, 0.3, 0.99])
def test_example2_displacement_at_half(y):
    np.testing.assert_allclose(displacement(builtin("example2"), (0.5, y)), [-1.0, 0.0], atol=1e-15)


def test_example3_formula():
    x, y = 0.2, 0.35
    expect = (x + math.cos(2 * math.pi * y), y + math.sin(2 * math.pi * y) / 100)
    np.testing.assert_allclose(eval_lift(builtin("example3"), (x, y)), expect, atol=1e-15)


def test_builtin_compositions():
    pts = np.random.default_rng(1).random((20, 2))
    P, Q, R = builtin("P"), builtin("Q"), builtin("R")
    assert np.array_equal(eval_lift(builtin("f1"), pts), eval_lift(Q, eval_lift(P, pts)))
    assert np.array_equal(eval_lift(builtin("f2"), pts), eval_lift(R, eval_lift(Q, eval_lift(P, pts))))


def test_builtin_overrides_and_unknown():
    shifted = builtin("f1", {"alpha": 0.0, "beta": 0.0, "p_bump": 0.0, "q_bump": 0.0})
    # unperturbed shears: (0,0) -> (0,1) -> (1,1)
    np.testing.assert_allclose(eval_lift(shifted, (0.0, 0.0)), [1.0, 1.0], atol=1e-15)
    with pytest.raises(UnknownMap):
        builtin("nope")
    with pytest.raises(UnknownMap):
        builtin("f1", {"gamma": 1.0})


def test_compose_identity_and_translations():
    pts = np.random.default_rng(2).random((10, 2))
    m = builtin("f2")
    assert np.array_equal(eval_lift(compose(identity(), m), pts), eval_lift(m, pts))
    uv = compose(translation(0.25, 0.5), translation(0.5, -0.25))
    np.testing.assert_allclose(eval_lift(uv, pts), pts + [0.75, 0.25], atol=1e-15)
    assert np.array_equal(eval_lift(composite(), pts), pts)


def test_power():
    pts = np.random.default_rng(3).random((10, 2))
    np.testing.assert_allclose(eval_lift(power(translation(0.1, 0.2), 3), pts), pts + [0.3, 0.6],
                               atol=1e-15)
    f1 = builtin("f1")
    assert np.array_equal(eval_lift(power(f1, 1), pts), eval_lift(f1, pts))
    assert np.array_equal(eval_lift(power(f1, 2), pts), eval_lift(f1, eval_lift(f1, pts)))
    with pytest.raises(ValueError):
        power(f1, 0)


def test_inverse_rules():
    assert is_invertible(builtin("f1"))
    assert not is_invertible(builtin("f2"))
    for name in ("R", "f2", "example2", "example3"):
        with pytest.raises(NotInvertible):
            inverse(builtin(name))
    with pytest.raises(NotInvertible):
        inverse(power(builtin("R"), 2))
    p = builtin("P")
    assert inverse(inverse(p)) is p


@pytest.mark.parametrize("name", ["identity", "P", "Q", "f1"])
def test_inverse_round_trip(name):
    m = builtin(name)
    pts = np.random.default_rng(4).uniform(-3, 3, (200, 2))
    np.testing.assert_allclose(eval_lift(inverse(m), eval_lift(m, pts)), pts, atol=1e-9)
    np.testing.assert_allclose(eval_lift(m, eval_lift(inverse(m), pts)), pts, atol=1e-9)
    mq = inverse(power(m, 3))
    np.testing.assert_allclose(eval_lift(mq, eval_lift(power(m, 3), pts)), pts, atol=1e-9)


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_equivariance(name):
    rng = np.random.default_rng(5)
    m = builtin(name, {"vx": 0.3, "vy": -0.7} if name == "translation" else None)
    x = rng.uniform(-2, 2, (1000, 2))
    k = rng.integers(-3, 4, (1000, 2))
    err = eval_lift(m, x + k) - eval_lift(m, x) - k
    assert np.max(np.abs(err)) < 1e-9


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_displacement_lift_independent(name):
    rng = np.random.default_rng(6)
    m = builtin(name)
    x = rng.random((500, 2))
    k = rng.integers(-3, 4, (500, 2))
    lifted = eval_lift(m, x + k) - (x + k)
    assert np.max(np.abs(lifted - displacement(m, x))) < 1e-9


def test_displacement_additive_under_composition():
    P, Q = builtin("P"), builtin("Q")
    x = np.random.default_rng(7).random((500, 2))
    lhs = displacement(compose(Q, P), x)
    rhs = displacement(Q, eval_lift(P, x) % 1.0) + displacement(P, x)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.sampled_from(["f1", "f2", "example3"]))
def test_composite_evaluation_is_sequential(x, y, name):
    m = builtin(name)
    seq = (x, y)
    for f in m.factors or (m,):
        seq = eval_lift(f, seq)
    assert np.array_equal(eval_lift(m, (x, y)), seq)


def test_map_spec_round_trip():
    spec = MapSpec.parse("translation:0.25,0.25")
    assert spec.overrides == {"vx": 0.25, "vy": 0.25}
    assert MapSpec.parse(spec.to_string()) == spec
    assert MapSpec.from_text(spec.to_text()) == spec
    spec = MapSpec.parse("f2:alpha=0.002, r_x=0.01")
    assert MapSpec.from_text("name = f2\nalpha = 0.002  # comment\nr_x=0.01\n") == spec
    assert builtin("f2", spec.overrides).label == spec.to_string()
    with pytest.raises(UnknownMap):
        MapSpec.parse("g7")


def test_non_finite_parameters_rejected():
    with pytest.raises(ValueError):
        translation(float("nan"), 0.0)
    with pytest.raises(ValueError):
        shear_x(amp=float("inf"))
