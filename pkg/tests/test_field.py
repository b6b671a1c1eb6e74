import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qubitfield.field import FieldSpec, MagnitudeScale, NegativeFieldError, integrate, load_field, parse_field


def test_constant_field():
    assert integrate(FieldSpec.constant(2.0, 3.0)) == 6.0


def test_target_field_table_value():
    assert integrate(FieldSpec.from_target(math.fmod(math.pi, 10))) == pytest.approx(3.141592653, abs=1e-9)


def test_trapezoid_by_hand():
    # 0.5 * (1/2 + 1 + 1/2) = 1.0
    assert integrate(FieldSpec.grid([1, 1, 1], 0.5)) == 1.0


def test_zero_field_is_exactly_zero():
    assert integrate(FieldSpec.grid(np.zeros(17), 0.1)) == 0.0


def test_negative_samples_rejected_for_classical_use():
    f = FieldSpec.grid([1.0, -0.5, 2.0], 1.0)
    with pytest.raises(NegativeFieldError):
        integrate(f)
    assert integrate(f, nonnegative=False) == pytest.approx(1.0)
    assert integrate(FieldSpec.grid([1.0, -0.5, 2.0], 1.0, signed=True)) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "kwargs",
    [dict(kind="grid", samples=(1.0,), dx=1.0), dict(kind="grid", samples=(1.0, 2.0), dx=0.0),
     dict(kind="constant", amplitude=1.0, length=0.0), dict(kind="nope")],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        FieldSpec(**kwargs)


def test_magnitude_scale_positive():
    with pytest.raises(ValueError):
        MagnitudeScale(0.0)


samples = st.lists(st.floats(-100, 100), min_size=2, max_size=40)


@given(samples, st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 3))
def test_linearity(s1, a, b, dx):
    n = len(s1)
    s2 = np.cos(np.arange(n))  # a second field on the same grid
    lhs = integrate(FieldSpec.grid(a * np.asarray(s1) + b * s2, dx, signed=True))
    rhs = a * integrate(FieldSpec.grid(s1, dx, signed=True)) + b * integrate(FieldSpec.grid(s2, dx, signed=True))
    scale = dx * (np.abs(a) * np.abs(s1).sum() + np.abs(b) * np.abs(s2).sum()) + 1e-300
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_parse_documents(tmp_path):
    f = parse_field("# a field\nkind = grid\nsamples = 1, 1.5 2.0\ndx: 0.25\n")
    assert f.samples == (1.0, 1.5, 2.0)
    assert integrate(f) == pytest.approx(0.25 * (0.5 + 1.5 + 1.0))
    path = tmp_path / "field.txt"
    path.write_text("kind = constant\namplitude = 2\nlength = 3\n")
    assert integrate(load_field(path)) == 6.0
    assert parse_field("kind=target\ntarget=-2\nsigned=true").target == -2.0


@pytest.mark.parametrize(
    "text",
    ["amplitude = 1", "kind = constant\namplitude = 1", "kind = grid\nsamples = 1,2\ndx = 1\ncolour = red",
     "kind = target\ntarget = 1\ntarget = 2", "kind = target\ntarget 1", "kind = target\ntarget=1\nsigned=maybe"],
)
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_field(text)
