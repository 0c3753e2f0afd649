import numpy as np
import pytest
from numpy.testing import assert_allclose

from mfcsim.models.trajectory import ReferenceProfile, Segment, smoothstep

STAIRCASE = [(0.0, 0.0), (5.0, 0.0), (12.0, 2.0), (22.0, 2.0), (29.0, 4.0), (40.0, 4.0)]


def test_quintic_smoothstep_coefficients():
    assert_allclose(smoothstep(2).coef, [0, 0, 0, 10, -15, 6], atol=1e-12)
    assert_allclose(smoothstep(1).coef, [0, 0, 3, -2], atol=1e-12)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_smoothstep_boundary_conditions(order):
    step = smoothstep(order)
    assert step(0.0) == pytest.approx(0.0)
    assert step(1.0) == pytest.approx(1.0)
    for j in range(1, order + 1):
        assert step.deriv(j)(0.0) == pytest.approx(0.0, abs=1e-12)
        assert step.deriv(j)(1.0) == pytest.approx(0.0, abs=1e-12)


def test_values_outside_and_inside_transition():
    profile = ReferenceProfile([Segment(0.0, 0.0, 1.0, 1.0)])
    assert_allclose(profile.eval(-1.0), [0.0, 0.0, 0.0])
    assert_allclose(profile.eval(2.0), [1.0, 0.0, 0.0])
    mid = profile.eval(0.5)
    assert mid[0] == pytest.approx(0.5)
    assert mid[1] == pytest.approx(1.875)
    assert mid[2] == pytest.approx(0.0, abs=1e-12)


def test_time_scaling_of_derivatives():
    profile = ReferenceProfile([Segment(2.0, 1.0, 6.0, 3.0)])
    mid = profile.eval(4.0)
    assert mid[0] == pytest.approx(2.0)
    assert mid[1] == pytest.approx(2.0 * 1.875 / 4.0)


def test_derivatives_match_finite_differences():
    profile = ReferenceProfile.from_breakpoints(STAIRCASE)
    dt = 1e-3
    times = np.arange(0.01, 39.99, 0.037)
    for t in times:
        ahead, behind, here = profile.eval(t + dt), profile.eval(t - dt), profile.eval(t)
        assert (ahead[0] - behind[0]) / (2 * dt) == pytest.approx(here[1], abs=1e-6)
        assert (ahead[1] - behind[1]) / (2 * dt) == pytest.approx(here[2], abs=1e-5)


def test_derivatives_are_continuous_at_breakpoints():
    profile = ReferenceProfile.from_breakpoints(STAIRCASE)
    for t, _ in STAIRCASE[1:-1]:
        assert_allclose(profile.eval(t - 1e-12), profile.eval(t), atol=1e-9)


def test_transitions_are_monotone():
    profile = ReferenceProfile.from_breakpoints(STAIRCASE)
    values = profile.sample(np.linspace(0.0, 40.0, 4001))[:, 0]
    assert np.all(np.diff(values) >= -1e-12)
    assert values[0] == 0.0 and values[-1] == 4.0


def test_single_breakpoint_is_constant():
    profile = ReferenceProfile.from_breakpoints([(0.0, 0.7)])
    assert_allclose(profile.eval(123.0), [0.7, 0.0, 0.0])
    assert profile.span == 0.0


def test_span_and_to_dict():
    profile = ReferenceProfile.from_breakpoints(STAIRCASE, smoothness=3)
    assert profile.span == 4.0
    assert profile.start_value == 0.0
    assert len(profile.eval(1.0)) == 4
    data = profile.to_dict()
    assert data["order"] == 3
    assert data["breakpoints"] == [list(p) for p in STAIRCASE]


def test_invalid_profiles():
    with pytest.raises(ValueError):
        ReferenceProfile([])
    with pytest.raises(ValueError, match="overlaps"):
        ReferenceProfile([Segment(0.0, 0.0, 2.0, 1.0), Segment(1.0, 1.0, 3.0, 2.0)])
    with pytest.raises(ValueError, match="begins at"):
        ReferenceProfile([Segment(0.0, 0.0, 1.0, 1.0), Segment(1.0, 2.0, 3.0, 2.0)])
    with pytest.raises(ValueError):
        ReferenceProfile([Segment(1.0, 0.0, 1.0, 1.0)])
    with pytest.raises(ValueError, match="increase"):
        ReferenceProfile.from_breakpoints([(0.0, 0.0), (0.0, 1.0)])
