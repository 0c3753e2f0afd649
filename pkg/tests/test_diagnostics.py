import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from mfcsim.estimation.diagnostics import (
    estimator_trace,
    make_signal,
    monte_carlo_variance,
    trace_errors,
)
from mfcsim.estimation.differentiator import EstimatorSpec, build_kernel


def test_polynomial_signal_derivatives():
    signal = make_signal("polynomial:1,2,3", duration=1.0, sample_period=0.01, max_order=2)
    t = signal.times
    assert len(t) == 101
    assert_allclose(signal.values, 1 + 2 * t + 3 * t ** 2)
    assert_allclose(signal.derivatives[:, 1], 2 + 6 * t)
    assert_allclose(signal.derivatives[:, 2], 6.0)
    assert signal.sample_period == pytest.approx(0.01)


def test_sine_signal_derivatives():
    signal = make_signal("sine:2,0.5", duration=2.0, sample_period=0.01, max_order=1)
    omega = np.pi
    assert_allclose(signal.values, 2 * np.sin(omega * signal.times), atol=1e-12)
    assert_allclose(signal.derivatives[:, 1], 2 * omega * np.cos(omega * signal.times), atol=1e-12)


@pytest.mark.parametrize("text", ["square:1", "sine:1", "polynomial:a,b"])
def test_bad_signal_specs(text):
    with pytest.raises(ValueError):
        make_signal(text, duration=1.0, sample_period=0.01, max_order=1)


def test_csv_signal(tmp_path):
    times = np.arange(51) * 0.01
    path = tmp_path / "signal.csv"
    pd.DataFrame({"t": times, "x": times ** 2}).to_csv(path, index=False)

    signal = make_signal(f"csv:{path}", duration=1.0, sample_period=0.01, max_order=1)
    assert signal.derivatives is None
    assert_allclose(signal.values, times ** 2)

    with pytest.raises(ValueError, match="column"):
        make_signal(f"csv:{path}:y", duration=1.0, sample_period=0.01, max_order=1)
    with pytest.raises(ValueError, match="uniformly"):
        make_signal(f"csv:{path}", duration=1.0, sample_period=0.02, max_order=1)
    with pytest.raises(ValueError, match="not found"):
        make_signal(f"csv:{tmp_path / 'missing.csv'}", duration=1.0, sample_period=0.01, max_order=1)


def test_trace_of_polynomial_is_exact():
    kernel = build_kernel(EstimatorSpec(2, 4, 0.5, 1e-3))
    signal = make_signal("polynomial:1,2,3", duration=2.0, sample_period=1e-3, max_order=2)
    trace = estimator_trace(kernel, signal)

    assert len(trace) == len(signal.times) - kernel.sample_count + 1
    assert trace["t"].iloc[0] == pytest.approx(0.5)
    errors = trace_errors(trace, 1e-3)
    assert list(errors["order"]) == [0, 1, 2]
    assert (errors["max_abs_error"] < 1e-6).all()


def test_kernel_beats_raw_difference_on_noisy_sine():
    h = 1e-3
    kernel = build_kernel(EstimatorSpec(1, 3, 0.5, h))
    signal = make_signal("sine:1,0.5", duration=5.0, sample_period=h, max_order=1)
    trace = estimator_trace(kernel, signal, noise_std=0.01, seed=4)
    errors = trace_errors(trace, h).set_index("order")

    assert errors.loc[1, "error_variance"] < errors.loc[1, "raw_difference_variance"]
    assert errors.loc[1, "raw_difference_variance"] == pytest.approx(2 * 0.01 ** 2 / h ** 2, rel=0.2)


def test_trace_needs_a_full_window():
    kernel = build_kernel(EstimatorSpec(1, 3, 0.5, 0.01))
    signal = make_signal("polynomial:0,1", duration=0.2, sample_period=0.01, max_order=1)
    with pytest.raises(ValueError):
        estimator_trace(kernel, signal)


def test_monte_carlo_is_reproducible():
    kernel = build_kernel(EstimatorSpec(1, 3, 0.1, 0.01))
    first = monte_carlo_variance(kernel, 0.1, trials=200, seed=9, level=2.0)
    second = monte_carlo_variance(kernel, 0.1, trials=200, seed=9, level=2.0)
    assert first.shape == (2,)
    assert np.array_equal(first, second)
    with pytest.raises(ValueError):
        monte_carlo_variance(kernel, 0.1, trials=1)
