import numpy as np
import pytest

from rydsync.errors import DomainError
from rydsync.fixed_points import integrate_self_consistent
from rydsync.integrator import IntegratorConfig
from rydsync.model import I_GE_IM, I_GE_RE, I_RR, ModelParams, ground_state
from rydsync.thermal import (CouplingMode, Geometry, Sampling, ThermalConfig,
                             TransmissionConfig, VelocityClass,
                             doppler_detunings, integrate_ensemble,
                             make_ensemble_rhs, sample_velocities,
                             shared_shift, transmission)


def mild_thermal(geometry=Geometry.COUNTER_PROPAGATING, n_classes=5,
                 k_p=0.002, k_c=0.003):
    # wave numbers chosen so the Doppler spread stays within a few gamma
    return ThermalConfig(geometry=geometry, n_classes=n_classes,
                         k_p=k_p, k_c=k_c, gamma_unit=1.0)


def mild_params(v_rr_bar=3.0):
    return ModelParams(omega_p=2.0, omega_c=2.0, delta_p=0.0, delta_c=-1.0,
                       gamma_e=1.0, gamma_r=1e-3, v_rr_bar=v_rr_bar,
                       b_exponent=2.0)


class TestThermalConfig:
    def test_most_probable_speed_rb87_at_321k(self):
        assert ThermalConfig().most_probable_speed == pytest.approx(247.8,
                                                                    abs=0.1)

    @pytest.mark.parametrize("kwargs", [
        dict(temperature=0.0), dict(mass=-1.0), dict(k_p=-1.0),
        dict(gamma_unit=0.0), dict(n_classes=0), dict(v_min=1.0, v_max=1.0),
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(DomainError):
            ThermalConfig(**kwargs)


class TestSampleVelocities:
    def test_weights_normalized_and_symmetric(self):
        classes = sample_velocities(ThermalConfig(n_classes=151))
        w = np.array([c.weight for c in classes])
        v = np.array([c.v for c in classes])
        assert abs(w.sum() - 1.0) < 1e-12
        assert np.all(w >= 0)
        # f is even, so weights mirror across v = 0 on the symmetric grid
        np.testing.assert_allclose(w, w[::-1], rtol=1e-12)
        np.testing.assert_allclose(v, -v[::-1], atol=1e-12)

    def test_single_class_is_midpoint(self):
        cfg = ThermalConfig(n_classes=1, v_min=-100.0, v_max=300.0)
        classes = sample_velocities(cfg)
        assert len(classes) == 1
        assert classes[0].v == pytest.approx(100.0)
        assert classes[0].weight == 1.0

    def test_random_sampling_seeded_and_bounded(self):
        cfg = ThermalConfig(n_classes=40, sampling=Sampling.RANDOM_MAXWELL,
                            rng_seed=3)
        a = sample_velocities(cfg)
        b = sample_velocities(cfg)
        assert [c.v for c in a] == [c.v for c in b]
        for c in a:
            assert cfg.v_min <= c.v <= cfg.v_max
            assert c.weight == pytest.approx(1.0 / 40)

    def test_detunings_attached(self):
        cfg = mild_thermal(n_classes=3)
        classes = sample_velocities(cfg, delta_p=0.5, delta_c=-2.0)
        for c in classes:
            dp, dc = doppler_detunings(c.v, 0.5, -2.0, cfg)
            assert c.effective_delta_p == dp
            assert c.effective_delta_c == dc


class TestDopplerDetunings:
    def test_zero_velocity_unchanged(self):
        for geom in Geometry:
            cfg = ThermalConfig(geometry=geom)
            assert doppler_detunings(0.0, 1.5, -11.0, cfg) == (1.5, -11.0)

    def test_two_photon_shift_at_100_m_per_s(self):
        # at the default optical wave numbers the counter geometry shrinks
        # the two-photon shift while the co geometry adds the beams up
        counter = ThermalConfig(geometry=Geometry.COUNTER_PROPAGATING)
        co = ThermalConfig(geometry=Geometry.CO_PROPAGATING)
        dp, dc = doppler_detunings(100.0, 0.0, 0.0, counter)
        assert dp + dc == pytest.approx(-13.2, abs=0.1)
        dp, dc = doppler_detunings(100.0, 0.0, 0.0, co)
        assert dp + dc == pytest.approx(55.4, abs=0.1)

    def test_velocity_sign_flip(self):
        cfg = ThermalConfig(geometry=Geometry.COUNTER_PROPAGATING)
        dp_p, dc_p = doppler_detunings(250.0, 0.0, 0.0, cfg)
        dp_m, dc_m = doppler_detunings(-250.0, 0.0, 0.0, cfg)
        assert dp_m == -dp_p and dc_m == -dc_p


class TestSharedShift:
    def test_zero_populations(self):
        w = np.array([0.5, 0.5])
        p = mild_params(v_rr_bar=800.0)
        for mode in CouplingMode:
            assert shared_shift([0.0, 0.0], w, p, mode) == 0.0

    def test_modes_agree_at_linear_exponent(self):
        rng = np.random.default_rng(8)
        p = ModelParams(omega_p=1, omega_c=1, v_rr_bar=17.0, b_exponent=1.0)
        rr = rng.uniform(0, 1, size=6)
        w = rng.dirichlet(np.ones(6))
        a = shared_shift(rr, w, p, CouplingMode.AVERAGE_OF_POWER)
        b = shared_shift(rr, w, p, CouplingMode.POWER_OF_AVERAGE)
        assert a == pytest.approx(b, rel=1e-12)

    def test_mode_difference_documented_values(self):
        p = ModelParams(omega_p=1, omega_c=1, v_rr_bar=800.0, b_exponent=2.0)
        w = np.array([0.5, 0.5])
        rr = np.array([0.0, 0.4])
        assert shared_shift(rr, w, p,
                            CouplingMode.AVERAGE_OF_POWER) == pytest.approx(64.0)
        assert shared_shift(rr, w, p,
                            CouplingMode.POWER_OF_AVERAGE) == pytest.approx(32.0)

    def test_out_of_range_populations_clamped(self):
        p = ModelParams(omega_p=1, omega_c=1, v_rr_bar=10.0, b_exponent=2.0)
        w = np.array([1.0])
        assert shared_shift([-0.3], w, p) == 0.0
        assert shared_shift([1.7], w, p) == pytest.approx(10.0)


class TestTransmission:
    def test_unit_at_zero_coherence(self):
        assert transmission(0.0, 6.0, TransmissionConfig()) == 1.0

    def test_unit_at_zero_depth(self):
        cfg = TransmissionConfig(od_scale=0.0)
        assert transmission(0.44, 6.0, cfg) == 1.0

    def test_documented_value(self):
        cfg = TransmissionConfig(od_scale=10.0)
        assert transmission(0.3, 6.0, cfg) == pytest.approx(np.exp(-0.5))

    def test_monotone_decreasing(self):
        cfg = TransmissionConfig(od_scale=10.0)
        ims = np.linspace(-0.2, 0.5, 20)
        ts = transmission(ims, 6.0, cfg)
        assert np.all(np.diff(ts) < 0)
        assert np.all(ts[ims >= 0] <= 1.0)

    def test_requires_positive_probe(self):
        with pytest.raises(DomainError):
            transmission(0.1, 0.0, TransmissionConfig())


class TestIntegrateEnsemble:
    def test_single_stationary_class_reduces_to_homogeneous_model(self):
        p = mild_params()
        icfg = IntegratorConfig(output_dt=0.5, t_end=60.0)
        single = integrate_self_consistent(p, ground_state(), icfg)
        for geom in Geometry:
            cfg = ThermalConfig(geometry=geom, n_classes=1,
                                v_min=-400.0, v_max=400.0)
            ens = integrate_ensemble(p, cfg, TransmissionConfig(), icfg)
            assert ens.classes[0].v == 0.0
            assert np.abs(ens.states[:, 0, :] - single.x).max() < 1e-8

    def test_no_interaction_decouples_classes(self):
        p = mild_params(v_rr_bar=0.0)
        cfg = mild_thermal(n_classes=5)
        # tight tolerances so the stacked and the per-class step sequences
        # both converge onto the same trajectory to well below the bound
        icfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-10,
                                output_dt=0.5, t_end=40.0)
        ens = integrate_ensemble(p, cfg, TransmissionConfig(), icfg)
        for j, cls in enumerate(ens.classes):
            pj = ModelParams(omega_p=p.omega_p, omega_c=p.omega_c,
                             delta_p=cls.effective_delta_p,
                             delta_c=cls.effective_delta_c,
                             gamma_e=p.gamma_e, gamma_r=p.gamma_r,
                             v_rr_bar=0.0, b_exponent=p.b_exponent)
            solo = integrate_self_consistent(pj, ground_state(), icfg)
            assert np.abs(ens.states[:, j, :] - solo.x).max() < 1e-8

    def test_geometry_irrelevant_without_coupling_doppler(self):
        p = mild_params()
        icfg = IntegratorConfig(output_dt=0.5, t_end=30.0)
        runs = {}
        for geom in Geometry:
            cfg = ThermalConfig(geometry=geom, n_classes=5, k_p=0.002,
                                k_c=0.0, gamma_unit=1.0)
            runs[geom] = integrate_ensemble(p, cfg, TransmissionConfig(),
                                            icfg)
        a = runs[Geometry.CO_PROPAGATING]
        b = runs[Geometry.COUNTER_PROPAGATING]
        assert np.array_equal(a.states, b.states)
        assert np.array_equal(a.transmission, b.transmission)

    def test_averages_consistent_with_per_class_data(self):
        p = mild_params()
        cfg = mild_thermal(n_classes=7)
        icfg = IntegratorConfig(output_dt=1.0, t_end=30.0)
        ens = integrate_ensemble(p, cfg, TransmissionConfig(), icfg)
        w = ens.weights
        re = ens.states[:, :, I_GE_RE] @ w
        im = ens.states[:, :, I_GE_IM] @ w
        rr = ens.states[:, :, I_RR] @ w
        assert np.abs(ens.avg_rho_ge.real - re).max() < 1e-12
        assert np.abs(ens.avg_rho_ge.imag - im).max() < 1e-12
        assert np.abs(ens.avg_rho_rr - rr).max() < 1e-12
        expected_t = transmission(im, p.omega_p, TransmissionConfig(),
                                  gamma_e=p.gamma_e)
        np.testing.assert_allclose(ens.transmission, expected_t, rtol=1e-12)

    def test_per_class_trace_conserved(self):
        p = mild_params()
        cfg = mild_thermal(n_classes=6)
        icfg = IntegratorConfig(rel_tol=1e-8, abs_tol=1e-8, output_dt=1.0,
                                t_end=50.0)
        ens = integrate_ensemble(p, cfg, TransmissionConfig(), icfg)
        trace = ens.states[:, :, :3].sum(axis=2)
        assert np.abs(trace - 1.0).max() < 100 * (1e-8 + 1e-8)

    def test_heatmap_orientation(self):
        p = mild_params()
        cfg = mild_thermal(n_classes=4)
        icfg = IntegratorConfig(output_dt=1.0, t_end=20.0)
        ens = integrate_ensemble(p, cfg, TransmissionConfig(), icfg)
        hm = ens.im_rho_eg()
        assert hm.shape == (len(ens.t), 4)
        np.testing.assert_array_equal(hm, -ens.states[:, :, I_GE_IM])

    def test_shift_recorded_from_instantaneous_populations(self):
        p = mild_params()
        cfg = mild_thermal(n_classes=5)
        icfg = IntegratorConfig(output_dt=1.0, t_end=30.0)
        tcfg = TransmissionConfig(coupling_mode=CouplingMode.POWER_OF_AVERAGE)
        ens = integrate_ensemble(p, cfg, tcfg, icfg)
        w = ens.weights
        for k in (0, len(ens.t) // 2, -1):
            want = shared_shift(ens.states[k, :, I_RR], w, p,
                                tcfg.coupling_mode)
            assert ens.shift[k] == pytest.approx(want, rel=1e-12)

    def test_velocity_mirror_symmetry_of_sampling(self):
        # at delta_p = 0 in counter geometry the weight distribution and
        # the two-photon shift magnitudes mirror under v -> -v
        cfg = ThermalConfig(geometry=Geometry.COUNTER_PROPAGATING,
                            n_classes=21)
        classes = sample_velocities(cfg, delta_p=0.0, delta_c=0.0)
        w = np.array([c.weight for c in classes])
        two_photon = np.array([c.effective_delta_p + c.effective_delta_c
                               for c in classes])
        np.testing.assert_allclose(w, w[::-1], rtol=1e-12)
        np.testing.assert_allclose(np.abs(two_photon),
                                   np.abs(two_photon[::-1]), atol=1e-9)


class TestEnsembleRhs:
    def test_shared_shift_enters_every_class(self):
        # a class with zero drive still feels the shift through rho_gr/rho_er
        p = mild_params(v_rr_bar=5.0)
        classes = [VelocityClass(v=0.0, weight=0.5),
                   VelocityClass(v=0.0, weight=0.5)]
        rhs = make_ensemble_rhs(p, classes, CouplingMode.AVERAGE_OF_POWER)
        x = np.tile(ground_state(), (2, 1))
        x[0, I_RR] = 0.4
        x[1, 5] = 0.3          # rho_gr real part on the second class
        d = rhs(0.0, x)
        # shift = 5 * 0.5 * 0.4^2 = 0.4; with the effective detunings left
        # at zero, d(Im rho_gr) on the second class is exactly -s * Re rho_gr
        s = 5.0 * 0.5 * 0.16
        assert d[1, 6] == pytest.approx(-s * 0.3, rel=1e-9)
