import numpy as np
import pytest

from rydsync.errors import DomainError
from rydsync.model import (BlochState, ModelParams, bloch_rhs, ground_state,
                           packed_rhs, self_shift, self_shift_packed)


def monolithic_rhs(state, params, shift):
    """Independent complex-arithmetic implementation of the six equations.

    Written directly from the ladder equations with conjugate elements
    expanded, as an oracle for the packed real-valued production RHS.
    """
    gg, ee, rr = state[0], state[1], state[2]
    ge = state[3] + 1j * state[4]
    gr = state[5] + 1j * state[6]
    er = state[7] + 1j * state[8]
    eg, rg, re = np.conj(ge), np.conj(gr), np.conj(er)
    op, oc = params.omega_p, params.omega_c
    dp, dc = params.delta_p, params.delta_c
    gam_e, gam_r = params.gamma_e, params.gamma_r

    d_ge = 1j * dp - gam_e / 2
    d_gr = 1j * (dp + dc) - gam_r / 2
    d_er = 1j * dc - (gam_e + gam_r) / 2

    dgg = gam_e * ee - 0.5j * (-op * ge + op * eg)
    dee = (-gam_e * ee + gam_r * rr
           - 0.5j * (op * (ge - eg) + oc * (re - er)))
    drr = -gam_r * rr - 0.5j * (oc * er - oc * re)
    dge = d_ge * ge - 0.5j * (-op * gg - oc * gr + op * ee)
    dgr = d_gr * gr - 0.5j * (-oc * ge + op * er) - 1j * shift * gr
    der = d_er * er - 0.5j * (op * gr - oc * ee + oc * rr) - 1j * shift * er
    return np.array([dgg.real, dee.real, drr.real, dge.real, dge.imag,
                     dgr.real, dgr.imag, der.real, der.imag])


def random_params(rng):
    return ModelParams(
        omega_p=rng.uniform(0, 10), omega_c=rng.uniform(0, 10),
        delta_p=rng.uniform(-10, 10), delta_c=rng.uniform(-10, 10),
        gamma_e=rng.uniform(0.5, 2.0), gamma_r=rng.uniform(0, 0.1),
        v_rr_bar=rng.uniform(-20, 20), b_exponent=rng.uniform(0.5, 3.0))


class TestModelParams:
    def test_defaults_valid(self):
        p = ModelParams(omega_p=6.0, omega_c=4.4)
        assert p.gamma_e == 1.0 and p.b_exponent == 2.0

    @pytest.mark.parametrize("kwargs", [
        dict(gamma_e=0.0), dict(gamma_e=-1.0), dict(gamma_r=-0.1),
        dict(b_exponent=0.0), dict(omega_p=-1.0), dict(omega_c=-2.0),
        dict(delta_p=float("nan")), dict(v_rr_bar=float("inf")),
    ])
    def test_invalid_rejected(self, kwargs):
        base = dict(omega_p=1.0, omega_c=1.0)
        base.update(kwargs)
        with pytest.raises(DomainError):
            ModelParams(**base)


class TestBlochState:
    def test_pack_unpack_roundtrip(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=9)
        assert np.array_equal(BlochState.unpack(x).pack(), x)

    def test_trace(self):
        s = BlochState.unpack(ground_state())
        assert s.trace == 1.0


class TestBlochRhs:
    def test_undriven_ground_state_stationary(self):
        p = ModelParams(omega_p=0.0, omega_c=0.0)
        d = bloch_rhs(ground_state(), p, shift=5.0)
        assert np.all(d == 0.0)

    def test_excited_state_decay(self):
        # pure rho_ee = 1 decays at gamma_e into the ground state
        p = ModelParams(omega_p=0.0, omega_c=0.0, gamma_e=1.0)
        x = np.zeros(9)
        x[1] = 1.0
        d = bloch_rhs(x, p, shift=0.0)
        assert d[1] == -p.gamma_e
        assert d[0] == p.gamma_e
        assert np.all(d[2:] == 0.0)

    def test_population_derivatives_sum_to_zero(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            p = random_params(rng)
            x = rng.normal(size=9)
            d = bloch_rhs(x, p, shift=rng.uniform(-100, 100))
            scale = max(1.0, np.abs(d[:3]).max())
            assert abs(d[:3].sum()) < 1e-13 * scale

    def test_matches_monolithic_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            p = random_params(rng)
            x = rng.normal(size=9)
            s = self_shift(np.abs(x), p)
            got = bloch_rhs(x, p, s)
            want = monolithic_rhs(x, p, s)
            np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)

    def test_nonfinite_state_rejected(self):
        p = ModelParams(omega_p=1.0, omega_c=1.0)
        x = ground_state()
        x[4] = np.nan
        with pytest.raises(DomainError):
            bloch_rhs(x, p, 0.0)
        with pytest.raises(DomainError):
            bloch_rhs(ground_state(), p, float("inf"))

    def test_batched_matches_scalar(self):
        rng = np.random.default_rng(11)
        p = random_params(rng)
        xs = rng.normal(size=(6, 9))
        batch = packed_rhs(xs, p.omega_p, p.omega_c, p.delta_p, p.delta_c,
                           p.gamma_e, p.gamma_r, 1.5)
        for j in range(6):
            np.testing.assert_allclose(batch[j], bloch_rhs(xs[j], p, 1.5),
                                       rtol=0, atol=1e-14)


class TestSelfShift:
    def test_zero_population(self):
        p = ModelParams(omega_p=1, omega_c=1, v_rr_bar=123.0, b_exponent=2.7)
        x = ground_state()
        assert self_shift(x, p) == 0.0

    def test_quadratic_values(self):
        x = np.zeros(9)
        x[2] = 0.5
        p = ModelParams(omega_p=1, omega_c=1, v_rr_bar=-9.0, b_exponent=2.0)
        assert self_shift(x, p) == pytest.approx(-2.25)
        x[2] = 0.3
        p = ModelParams(omega_p=1, omega_c=1, v_rr_bar=800.0, b_exponent=2.0)
        assert self_shift(x, p) == pytest.approx(72.0)

    def test_negative_overshoot_clamped(self):
        x = np.zeros(9)
        x[2] = -1e-9
        p = ModelParams(omega_p=1, omega_c=1, v_rr_bar=5.0, b_exponent=1.5)
        assert self_shift(x, p) == 0.0

    def test_packed_matches_scalar(self):
        rng = np.random.default_rng(5)
        xs = rng.uniform(0, 1, size=(4, 9))
        p = ModelParams(omega_p=1, omega_c=1, v_rr_bar=3.0, b_exponent=1.7)
        got = self_shift_packed(xs, p.v_rr_bar, p.b_exponent)
        want = [self_shift(xs[j], p) for j in range(4)]
        np.testing.assert_allclose(got, want, rtol=1e-15)
