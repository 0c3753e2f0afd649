import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from mfcsim.estimation.buffer import AlgebraicEstimator, SignalBuffer
from mfcsim.estimation.differentiator import EstimatorSpec, build_kernel


def test_buffer_keeps_latest_samples_oldest_first():
    buffer = SignalBuffer(3, 0.1)
    buffer.push(1.0)
    buffer.push(2.0)
    assert not buffer.is_full
    assert_array_equal(buffer.window().samples, [1.0, 2.0])

    for value in (3.0, 4.0, 5.0):
        buffer.push(value)
    assert buffer.is_full
    assert len(buffer) == 3
    assert buffer.latest() == 5.0
    window = buffer.window()
    assert_array_equal(window.samples, [3.0, 4.0, 5.0])
    assert window.sample_period == 0.1


def test_buffer_window_is_a_copy():
    buffer = SignalBuffer(2, 1.0)
    buffer.push(1.0)
    buffer.push(2.0)
    window = buffer.window()
    buffer.push(3.0)
    assert_array_equal(window.samples, [1.0, 2.0])


def test_buffer_errors_and_clear():
    with pytest.raises(ValueError):
        SignalBuffer(0, 0.1)
    buffer = SignalBuffer(2, 0.1)
    with pytest.raises(ValueError):
        buffer.latest()
    buffer.push(1.0)
    buffer.clear()
    assert len(buffer) == 0


def test_estimator_warmup_then_exact_ramp_derivative():
    h = 1e-3
    kernel = build_kernel(EstimatorSpec(1, 3, 0.01, h))
    estimator = AlgebraicEstimator(kernel, name="y_1")
    assert estimator.warmup_samples == 11

    for k in range(40):
        t = k * h
        estimate = estimator.update(2.0 * t + 1.0)
        if k < estimator.warmup_samples - 1:
            assert not estimate.ready
            assert estimate.denoised == 2.0 * t + 1.0
            assert estimate.derivative(1) == 0.0
        else:
            assert estimate.ready
            assert estimate.derivative(1) == pytest.approx(2.0, abs=1e-9)
            assert estimate.denoised == pytest.approx(2.0 * t + 1.0, abs=1e-9)
            assert estimate.denoised == estimate.derivatives[0]

    with pytest.raises(ValueError):
        estimate.derivative(2)

    estimator.reset()
    assert not estimator.update(0.0).ready


def test_estimator_matches_kernel_after_wraparound():
    h = 0.01
    kernel = build_kernel(EstimatorSpec(2, 4, 0.1, h))
    estimator = AlgebraicEstimator(kernel)
    samples = np.random.default_rng(0).normal(size=50)
    for value in samples:
        estimate = estimator.update(value)

    last = samples[-kernel.sample_count:]
    signs = (-1.0) ** np.arange(3)
    expected = (kernel.weights @ last[::-1]) * signs
    assert_allclose(estimate.derivatives, expected, rtol=1e-12, atol=1e-12)
