import numpy as np
import pytest

from rydsync.errors import DomainError, IntegrationError
from rydsync.integrator import IntegratorConfig, integrate
from rydsync.fixed_points import integrate_self_consistent
from rydsync.model import ModelParams, ground_state


class TestConfigValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(rel_tol=0.0), dict(abs_tol=-1e-9), dict(output_dt=0.0),
        dict(t_end=-1.0), dict(max_step=0.0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            IntegratorConfig(**kwargs)


class TestIntegrate:
    def test_zero_rhs_constant(self):
        x0 = np.array([1.0, -2.0, 3.0])
        cfg = IntegratorConfig(output_dt=0.25, t_end=5.0)
        traj = integrate(lambda t, x: np.zeros_like(x), x0, cfg)
        assert traj.x.shape == (21, 3)
        assert np.all(traj.x == x0)

    def test_exponential_decay(self):
        cfg = IntegratorConfig(output_dt=0.05, t_end=1.0)
        traj = integrate(lambda t, x: -x, np.array([1.0]), cfg)
        np.testing.assert_allclose(traj.x[:, 0], np.exp(-traj.t), atol=1e-7)
        assert traj.x[-1, 0] == pytest.approx(np.exp(-1.0), abs=1e-8)

    def test_harmonic_oscillator(self):
        def rhs(t, x):
            return np.array([x[1], -x[0]])
        cfg = IntegratorConfig(output_dt=0.1, t_end=20.0)
        traj = integrate(rhs, np.array([1.0, 0.0]), cfg)
        np.testing.assert_allclose(traj.x[:, 0], np.cos(traj.t), atol=1e-6)

    def test_time_dependent_rhs(self):
        cfg = IntegratorConfig(output_dt=0.1, t_end=2.0)
        traj = integrate(lambda t, x: np.array([2.0 * t]), np.array([0.0]),
                         cfg)
        np.testing.assert_allclose(traj.x[:, 0], traj.t ** 2, atol=1e-9)

    def test_matrix_shaped_state(self):
        # the ensemble stacks classes along a leading axis
        x0 = np.arange(12.0).reshape(4, 3)
        cfg = IntegratorConfig(output_dt=0.5, t_end=1.0)
        traj = integrate(lambda t, x: -x, x0, cfg)
        np.testing.assert_allclose(traj.x[-1], x0 * np.exp(-1.0), atol=1e-7)

    def test_nonfinite_initial_state_rejected(self):
        cfg = IntegratorConfig(output_dt=0.1, t_end=1.0)
        with pytest.raises(DomainError):
            integrate(lambda t, x: -x, np.array([np.nan]), cfg)

    def test_blowup_reported_with_time(self):
        # finite-time blow-up: dx/dt = x^2 from x0=1 escapes at t = 1
        def rhs(t, x):
            return x * x
        cfg = IntegratorConfig(output_dt=0.1, t_end=2.0, max_step=2.0)
        with pytest.raises(IntegrationError) as err:
            integrate(rhs, np.array([1.0]), cfg)
        assert err.value.time is not None
        assert 0.5 < err.value.time <= 2.0

    def test_max_step_respected_in_output(self):
        # a coarse rhs sampled finely still lands on the analytic curve
        cfg = IntegratorConfig(output_dt=0.01, t_end=1.0, max_step=0.3)
        traj = integrate(lambda t, x: -x, np.array([1.0]), cfg)
        np.testing.assert_allclose(traj.x[:, 0], np.exp(-traj.t), atol=1e-7)


class TestTraceConservation:
    def test_random_parameter_trajectories(self):
        # randomized single-class runs keep the trace pinned to 1
        rng = np.random.default_rng(2024)
        cfg = IntegratorConfig(rel_tol=1e-8, abs_tol=1e-8, output_dt=1.0,
                               t_end=50.0)
        for _ in range(10):
            p = ModelParams(
                omega_p=rng.uniform(0, 8), omega_c=rng.uniform(0, 8),
                delta_p=rng.uniform(-5, 5), delta_c=rng.uniform(-5, 5),
                gamma_r=rng.uniform(0, 0.05),
                v_rr_bar=rng.uniform(-20, 20),
                b_exponent=rng.uniform(1.0, 3.0))
            traj = integrate_self_consistent(p, ground_state(), cfg)
            trace = traj.x[:, :3].sum(axis=1)
            assert np.abs(trace - 1.0).max() < 100 * (1e-8 + 1e-8)
