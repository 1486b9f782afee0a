import numpy as np
import pytest

from rydsync.analysis import (contrast_ratio, dominant_frequency,
                              sync_metrics)
from rydsync.errors import AnalysisError


def sinusoid(freq, dt, n, amp=0.1, offset=0.3, phase=0.0):
    t = dt * np.arange(n)
    return offset + amp * np.sin(2 * np.pi * freq * t + phase)


class TestDominantFrequency:
    def test_synthetic_sinusoid(self):
        series = sinusoid(0.05, 0.5, 4096)
        res = dominant_frequency(series, dt=0.5)
        assert res.is_oscillatory
        assert res.frequency == pytest.approx(0.05, abs=0.001)
        assert res.amplitude == pytest.approx(0.1, abs=0.005)

    def test_constant_series(self):
        res = dominant_frequency(np.full(1000, 0.7), dt=0.1)
        assert not res.is_oscillatory
        assert res.frequency == 0.0

    def test_too_short_series_rejected(self):
        with pytest.raises(AnalysisError):
            dominant_frequency(np.ones(30), dt=0.1, t_min=0.0)
        with pytest.raises(AnalysisError):
            dominant_frequency(np.ones(100), dt=-0.1)

    def test_transient_cutoff_applied(self):
        # a huge transient before t_min must not leak into the analysis
        t = 0.1 * np.arange(3000)
        series = np.where(t < 10.0, 50.0 * np.exp(-t), 0.0)
        series = series + 0.05 * np.sin(2 * np.pi * 0.3 * t)
        res = dominant_frequency(series, dt=0.1, t_min=20.0)
        assert res.frequency == pytest.approx(0.3, abs=0.003)
        assert res.amplitude == pytest.approx(0.05, abs=0.005)

    def test_shift_invariance(self):
        series = sinusoid(0.08, 0.25, 2048)
        a = dominant_frequency(series, dt=0.25)
        b = dominant_frequency(series + 123.456, dt=0.25)
        assert a.frequency == pytest.approx(b.frequency, rel=1e-9)
        assert a.amplitude == pytest.approx(b.amplitude, rel=1e-9)

    def test_scale_equivariance(self):
        series = sinusoid(0.08, 0.25, 2048)
        a = dominant_frequency(series, dt=0.25)
        b = dominant_frequency(3.0 * series, dt=0.25)
        assert a.frequency == b.frequency
        assert b.amplitude == pytest.approx(3.0 * a.amplitude, rel=1e-9)

    def test_parabolic_refinement_off_grid(self):
        # frequencies between bins recovered to well under 0.1 bin width
        dt, n = 0.5, 4096
        rng = np.random.default_rng(17)
        for _ in range(10):
            n_kept = n - int(np.ceil((n - 1) * dt / 3.0 / dt))
            bin_width = 1.0 / (n_kept * dt)
            freq = rng.uniform(20, 200) * bin_width + rng.uniform(0, 1) * bin_width
            series = sinusoid(freq, dt, n, phase=rng.uniform(0, 2 * np.pi))
            res = dominant_frequency(series, dt=dt)
            assert abs(res.frequency - freq) < 0.1 * bin_width

    def test_linear_trend_removed(self):
        t = 0.2 * np.arange(4000)
        series = 0.01 * t + 0.05 * np.sin(2 * np.pi * 0.12 * t)
        res = dominant_frequency(series, dt=0.2)
        assert res.frequency == pytest.approx(0.12, abs=0.002)


class TestContrastRatio:
    def test_perfect_suppression(self):
        assert contrast_ratio(0.4, 0.0).eta == 1.0

    def test_symmetric_case(self):
        assert contrast_ratio(0.3, 0.3).eta == 0.0

    def test_both_zero_undefined(self):
        assert contrast_ratio(0.0, 0.0).eta is None

    def test_antisymmetry_exact(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            a, b = rng.uniform(0, 2, size=2)
            assert contrast_ratio(a, b).eta == -contrast_ratio(b, a).eta

    def test_negative_frequency_rejected(self):
        with pytest.raises(AnalysisError):
            contrast_ratio(-0.1, 0.2)


class TestSyncMetrics:
    def test_identical_sinusoids_fully_locked(self):
        dt, n, n_cls = 0.25, 2048, 12
        col = sinusoid(0.07, dt, n)
        mat = np.tile(col[:, None], (1, n_cls))
        w = np.full(n_cls, 1.0 / n_cls)
        m = sync_metrics(mat, w, dt)
        assert m.locked_fraction == pytest.approx(1.0)
        assert m.order_parameter == pytest.approx(1.0, abs=1e-6)
        assert m.ensemble_frequency.frequency == pytest.approx(0.07,
                                                               abs=0.001)

    def test_incommensurate_phases_cancel(self):
        dt, n, n_cls = 0.25, 4096, 60
        rng = np.random.default_rng(23)
        cols = [sinusoid(rng.uniform(0.02, 0.45), dt, n,
                         phase=rng.uniform(0, 2 * np.pi))
                for _ in range(n_cls)]
        w = np.full(n_cls, 1.0 / n_cls)
        m = sync_metrics(np.column_stack(cols), w, dt)
        assert m.order_parameter < 0.2

    def test_single_oscillatory_class_order_one(self):
        dt, n = 0.25, 2048
        mat = sinusoid(0.11, dt, n)[:, None]
        m = sync_metrics(mat, np.array([1.0]), dt)
        assert m.order_parameter == pytest.approx(1.0, abs=1e-12)

    def test_quiet_ensemble_locked_fraction_zero(self):
        mat = np.full((1024, 5), 0.2)
        w = np.full(5, 0.2)
        m = sync_metrics(mat, w, 0.25)
        assert m.locked_fraction == 0.0
        assert m.ensemble_frequency.frequency == 0.0

    def test_shape_validation(self):
        with pytest.raises(AnalysisError):
            sync_metrics(np.ones(100), np.array([1.0]), 0.1)
        with pytest.raises(AnalysisError):
            sync_metrics(np.ones((100, 3)), np.array([0.5, 0.5]), 0.1)
