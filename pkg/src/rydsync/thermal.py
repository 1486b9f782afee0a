"""Doppler-broadened velocity ensembles coupled by a shared mean-field shift.

Every velocity class evolves under the same Bloch equations but with
Doppler-shifted detunings set by the beam geometry; the classes are
coupled only through the instantaneous weighted mean-field shift, which
enters every class's coherence equations simultaneously.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .integrator import IntegratorConfig, integrate
from .model import (I_GE_IM, I_GE_RE, I_RR, ModelParams,
                    ground_state, packed_rhs)

KB = 1.380649e-23          # J/K
MASS_RB87 = 1.4431e-25     # kg

DEFAULT_K_P = 2.0 * math.pi / 780e-9      # rad/m, probe
DEFAULT_K_C = 2.0 * math.pi / 480e-9      # rad/m, coupling
DEFAULT_GAMMA_UNIT = 2.0 * math.pi * 6.07e6   # rad/s value of gamma_e


class Geometry(str, Enum):
    CO_PROPAGATING = "co"
    COUNTER_PROPAGATING = "counter"


class Sampling(str, Enum):
    UNIFORM_GRID_WEIGHTED = "grid"
    RANDOM_MAXWELL = "random"


@dataclass(frozen=True)
class ThermalConfig:
    """Beam geometry, species constants, and the velocity discretization."""

    temperature: float = 321.0
    mass: float = MASS_RB87
    k_p: float = DEFAULT_K_P
    k_c: float = DEFAULT_K_C
    gamma_unit: float = DEFAULT_GAMMA_UNIT
    geometry: Geometry = Geometry.COUNTER_PROPAGATING
    n_classes: int = 150
    v_min: float = -400.0
    v_max: float = 400.0
    sampling: Sampling = Sampling.UNIFORM_GRID_WEIGHTED
    rng_seed: int = 0

    def __post_init__(self):
        if self.temperature <= 0 or self.mass <= 0:
            raise DomainError("temperature and mass must be positive")
        if self.k_p < 0 or self.k_c < 0 or self.gamma_unit <= 0:
            raise DomainError("wave numbers must be >= 0, gamma_unit > 0")
        if self.n_classes < 1:
            raise DomainError("n_classes must be at least 1")
        if not self.v_min < self.v_max:
            raise DomainError("v_min must be below v_max")

    @property
    def most_probable_speed(self) -> float:
        return math.sqrt(2.0 * KB * self.temperature / self.mass)


@dataclass(frozen=True)
class VelocityClass:
    v: float
    weight: float
    effective_delta_p: float = 0.0
    effective_delta_c: float = 0.0


class CouplingMode(str, Enum):
    AVERAGE_OF_POWER = "average_of_power"
    POWER_OF_AVERAGE = "power_of_average"


@dataclass(frozen=True)
class TransmissionConfig:
    """Lumped optical depth and the ensemble-coupling convention."""

    od_scale: float = 10.0
    coupling_mode: CouplingMode = CouplingMode.AVERAGE_OF_POWER

    def __post_init__(self):
        if self.od_scale < 0:
            raise DomainError("od_scale must be non-negative")


@dataclass
class EnsembleTrajectory:
    """Time-gridded per-class states plus thermally averaged observables."""

    t: np.ndarray                 # (m,)
    states: np.ndarray            # (m, n_classes, 9)
    classes: list[VelocityClass]
    avg_rho_ge: np.ndarray        # complex (m,)
    avg_rho_rr: np.ndarray        # (m,)
    transmission: np.ndarray      # (m,)
    shift: np.ndarray             # (m,)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.classes])

    @property
    def velocities(self) -> np.ndarray:
        return np.array([c.v for c in self.classes])

    def im_rho_eg(self) -> np.ndarray:
        """Per-class Im rho_eg heatmap data, shape (m, n_classes)."""
        return -self.states[:, :, I_GE_IM]


def maxwell_boltzmann_pdf(v, v_t):
    """1-D Maxwell-Boltzmann velocity density with most probable speed v_t."""
    v = np.asarray(v, dtype=float)
    return np.exp(-(v / v_t) ** 2) / (math.sqrt(math.pi) * v_t)


def doppler_detunings(v: float, delta_p: float, delta_c: float,
                      cfg: ThermalConfig) -> tuple[float, float]:
    """Detunings seen by a class moving at v, per beam geometry.

    The probe shift k_p*v always adds; the coupling shift adds in the
    co-propagating geometry and subtracts in the counter-propagating one.
    """
    dp = delta_p + cfg.k_p * v / cfg.gamma_unit
    if cfg.geometry is Geometry.COUNTER_PROPAGATING:
        dc = delta_c - cfg.k_c * v / cfg.gamma_unit
    else:
        dc = delta_c + cfg.k_c * v / cfg.gamma_unit
    return dp, dc


def sample_velocities(cfg: ThermalConfig, delta_p: float = 0.0,
                      delta_c: float = 0.0) -> list[VelocityClass]:
    """Velocity classes with normalized weights and Doppler detunings.

    Grid mode places classes uniformly on [v_min, v_max] with weights
    proportional to the Maxwell-Boltzmann density (renormalized over the
    truncated range); random mode draws seeded truncated samples with
    equal weights.
    """
    v_t = cfg.most_probable_speed
    if cfg.sampling is Sampling.UNIFORM_GRID_WEIGHTED:
        if cfg.n_classes == 1:
            v = np.array([0.5 * (cfg.v_min + cfg.v_max)])
            w = np.array([1.0])
        else:
            v = np.linspace(cfg.v_min, cfg.v_max, cfg.n_classes)
            w = maxwell_boltzmann_pdf(v, v_t)
            w = w / w.sum()
    else:
        rng = np.random.default_rng(cfg.rng_seed)
        sigma = v_t / math.sqrt(2.0)
        samples = []
        while len(samples) < cfg.n_classes:
            draw = rng.normal(0.0, sigma, size=4 * cfg.n_classes)
            samples.extend(draw[(draw >= cfg.v_min) & (draw <= cfg.v_max)])
        v = np.array(samples[:cfg.n_classes])
        w = np.full(cfg.n_classes, 1.0 / cfg.n_classes)

    classes = []
    for vj, wj in zip(v, w):
        dp, dc = doppler_detunings(float(vj), delta_p, delta_c, cfg)
        classes.append(VelocityClass(v=float(vj), weight=float(wj),
                                     effective_delta_p=dp,
                                     effective_delta_c=dc))
    return classes


def shared_shift(rho_rr_values, weights, params: ModelParams,
                 mode: CouplingMode = CouplingMode.AVERAGE_OF_POWER) -> float:
    """Ensemble mean-field shift from the instantaneous Rydberg populations."""
    rr = np.clip(np.asarray(rho_rr_values, dtype=float), 0.0, 1.0)
    w = np.asarray(weights, dtype=float)
    if mode is CouplingMode.AVERAGE_OF_POWER:
        return float(params.v_rr_bar * np.dot(w, rr ** params.b_exponent))
    return float(params.v_rr_bar * np.dot(w, rr) ** params.b_exponent)


def transmission(im_rho_ge_avg, omega_p: float, trans_cfg: TransmissionConfig,
                 gamma_e: float = 1.0):
    """Probe transmission of the lumped medium, monotone in Im rho_ge."""
    if omega_p <= 0:
        raise DomainError("transmission requires omega_p > 0")
    return np.exp(-trans_cfg.od_scale * np.asarray(im_rho_ge_avg)
                  * (gamma_e / omega_p))


def make_ensemble_rhs(params: ModelParams, classes: list[VelocityClass],
                      mode: CouplingMode):
    """Coupled RHS over stacked per-class states, shape (n_classes, 9).

    The shared shift is reduced from the rho_rr block first and then
    enters every class's derivative in the same evaluation, so no class
    ever observes a partially updated shift.
    """
    dp = np.array([c.effective_delta_p for c in classes])
    dc = np.array([c.effective_delta_c for c in classes])
    w = np.array([c.weight for c in classes])

    def rhs(t, x):
        s = shared_shift(x[:, I_RR], w, params, mode)
        return packed_rhs(x, params.omega_p, params.omega_c, dp, dc,
                          params.gamma_e, params.gamma_r, s)
    return rhs


def integrate_ensemble(params: ModelParams, thermal_cfg: ThermalConfig,
                       trans_cfg: TransmissionConfig,
                       integ_cfg: IntegratorConfig) -> EnsembleTrajectory:
    """Evolve the full velocity ensemble from the all-ground initial state."""
    classes = sample_velocities(thermal_cfg, params.delta_p, params.delta_c)
    rhs = make_ensemble_rhs(params, classes, trans_cfg.coupling_mode)
    traj = integrate(rhs, ground_state(len(classes)), integ_cfg)

    w = np.array([c.weight for c in classes])
    avg_ge = (traj.x[:, :, I_GE_RE] @ w) + 1j * (traj.x[:, :, I_GE_IM] @ w)
    avg_rr = traj.x[:, :, I_RR] @ w
    shifts = np.array([
        shared_shift(traj.x[k, :, I_RR], w, params, trans_cfg.coupling_mode)
        for k in range(len(traj.t))
    ])
    trans = transmission(avg_ge.imag, params.omega_p, trans_cfg,
                         gamma_e=params.gamma_e)
    return EnsembleTrajectory(t=traj.t, states=traj.x, classes=classes,
                              avg_rho_ge=avg_ge, avg_rho_rr=avg_rr,
                              transmission=trans, shift=shifts)
