"""Mean-field Bloch equations for a driven three-level ladder system.

The single-class state is a density matrix with real populations
(rho_gg, rho_ee, rho_rr) and complex coherences (rho_ge, rho_gr, rho_er),
packed into 9 reals in the fixed order

    [rho_gg, rho_ee, rho_rr,
     Re rho_ge, Im rho_ge, Re rho_gr, Im rho_gr, Re rho_er, Im rho_er]

Conjugate elements are never stored; Im rho_eg reads as -Im rho_ge.
All rates and frequencies are expressed in units of the intermediate-state
decay rate gamma_e, times in 1/gamma_e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Packed-state index constants
I_GG, I_EE, I_RR = 0, 1, 2
I_GE_RE, I_GE_IM = 3, 4
I_GR_RE, I_GR_IM = 5, 6
I_ER_RE, I_ER_IM = 7, 8

STATE_DIM = 9


@dataclass(frozen=True)
class ModelParams:
    """Physical rates and drives of one velocity class (units of gamma_e)."""

    omega_p: float
    omega_c: float
    delta_p: float = 0.0
    delta_c: float = 0.0
    gamma_e: float = 1.0
    gamma_r: float = 1e-3
    v_rr_bar: float = 0.0
    b_exponent: float = 2.0

    def __post_init__(self):
        vals = (self.omega_p, self.omega_c, self.delta_p, self.delta_c,
                self.gamma_e, self.gamma_r, self.v_rr_bar, self.b_exponent)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("all model parameters must be finite")
        if self.gamma_e <= 0:
            raise DomainError("gamma_e must be positive")
        if self.gamma_r < 0:
            raise DomainError("gamma_r must be non-negative")
        if self.b_exponent <= 0:
            raise DomainError("b_exponent must be positive")
        if self.omega_p < 0 or self.omega_c < 0:
            raise DomainError("Rabi frequencies must be non-negative "
                              "(phases are absorbed into the coherences)")


@dataclass(frozen=True)
class BlochState:
    """Named view of one packed density-matrix state."""

    rho_gg: float
    rho_ee: float
    rho_rr: float
    rho_ge: complex
    rho_gr: complex
    rho_er: complex

    def pack(self) -> np.ndarray:
        return np.array([
            self.rho_gg, self.rho_ee, self.rho_rr,
            self.rho_ge.real, self.rho_ge.imag,
            self.rho_gr.real, self.rho_gr.imag,
            self.rho_er.real, self.rho_er.imag,
        ])

    @staticmethod
    def unpack(x: np.ndarray) -> "BlochState":
        x = np.asarray(x, dtype=float)
        if x.shape != (STATE_DIM,):
            raise DomainError(f"packed state must have shape ({STATE_DIM},)")
        return BlochState(
            rho_gg=float(x[I_GG]), rho_ee=float(x[I_EE]), rho_rr=float(x[I_RR]),
            rho_ge=complex(x[I_GE_RE], x[I_GE_IM]),
            rho_gr=complex(x[I_GR_RE], x[I_GR_IM]),
            rho_er=complex(x[I_ER_RE], x[I_ER_IM]),
        )

    @property
    def trace(self) -> float:
        return self.rho_gg + self.rho_ee + self.rho_rr


def ground_state(n: int | None = None) -> np.ndarray:
    """Packed ground state, optionally stacked for n velocity classes."""
    if n is None:
        x = np.zeros(STATE_DIM)
        x[I_GG] = 1.0
        return x
    x = np.zeros((n, STATE_DIM))
    x[:, I_GG] = 1.0
    return x


def packed_rhs(x, omega_p, omega_c, delta_p, delta_c, gamma_e, gamma_r, shift):
    """Vectorized Bloch right-hand side on packed states.

    ``x`` has shape (..., 9); every parameter (including ``shift``) must
    broadcast against the leading axes.  The population derivatives sum to
    zero identically, so the trace is conserved by construction.
    """
    x = np.asarray(x, dtype=float)
    rho_ee = x[..., I_EE]
    rho_rr = x[..., I_RR]
    rho_ge = x[..., I_GE_RE] + 1j * x[..., I_GE_IM]
    rho_gr = x[..., I_GR_RE] + 1j * x[..., I_GR_IM]
    rho_er = x[..., I_ER_RE] + 1j * x[..., I_ER_IM]

    d_ge = 1j * delta_p - 0.5 * gamma_e
    d_gr = 1j * (np.asarray(delta_p) + np.asarray(delta_c) - np.asarray(shift)) - 0.5 * gamma_r
    d_er = 1j * (np.asarray(delta_c) - np.asarray(shift)) - 0.5 * (gamma_e + np.asarray(gamma_r))

    dge = d_ge * rho_ge - 0.5j * (omega_p * (rho_ee - x[..., I_GG]) - omega_c * rho_gr)
    dgr = d_gr * rho_gr - 0.5j * (omega_p * rho_er - omega_c * rho_ge)
    der = d_er * rho_er - 0.5j * (omega_p * rho_gr + omega_c * (rho_rr - rho_ee))

    pump = omega_p * x[..., I_GE_IM]
    drive = omega_c * x[..., I_ER_IM]

    out = np.empty_like(x)
    out[..., I_GG] = gamma_e * rho_ee - pump
    out[..., I_EE] = -(gamma_e * rho_ee) + gamma_r * rho_rr + pump - drive
    out[..., I_RR] = -(gamma_r * rho_rr) + drive
    out[..., I_GE_RE] = dge.real
    out[..., I_GE_IM] = dge.imag
    out[..., I_GR_RE] = dgr.real
    out[..., I_GR_IM] = dgr.imag
    out[..., I_ER_RE] = der.real
    out[..., I_ER_IM] = der.imag
    return out


def bloch_rhs(state, params: ModelParams, shift: float) -> np.ndarray:
    """Time derivative of one packed state for a given mean-field shift.

    The caller decides what ``shift`` is: the class's own self_shift for
    homogeneous dynamics, or an ensemble-shared value.
    """
    x = np.asarray(state, dtype=float)
    if x.shape != (STATE_DIM,):
        raise DomainError(f"state must be a packed {STATE_DIM}-vector")
    if not np.all(np.isfinite(x)) or not math.isfinite(shift):
        raise DomainError("bloch_rhs requires finite state and shift")
    return packed_rhs(x, params.omega_p, params.omega_c, params.delta_p,
                      params.delta_c, params.gamma_e, params.gamma_r, shift)


def self_shift(state, params: ModelParams) -> float:
    """Mean-field Rydberg level shift v_rr_bar * rho_rr**b of one class.

    rho_rr slightly below 0 (integrator overshoot) is clamped to 0 so the
    power stays real for non-integer exponents.
    """
    x = np.asarray(state, dtype=float)
    rho_rr = float(x[I_RR]) if x.ndim else float(x)
    if not math.isfinite(rho_rr):
        raise DomainError("self_shift requires a finite rho_rr")
    rho_rr = max(rho_rr, 0.0)
    return params.v_rr_bar * rho_rr ** params.b_exponent


def self_shift_packed(x, v_rr_bar, b_exponent):
    """Vectorized self_shift over packed states of shape (..., 9)."""
    rho_rr = np.maximum(np.asarray(x)[..., I_RR], 0.0)
    return v_rr_bar * rho_rr ** b_exponent
