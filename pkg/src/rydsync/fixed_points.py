"""Steady states, linear stability, regime classification, hysteresis.

All multistability of the mean-field model funnels through a scalar
self-consistency map: freezing the Rydberg shift at a value s makes the
Bloch equations linear, so the steady state is a 9x9 linear solve and the
fixed points are the roots of

    g(rho) = rho_rr[steady(v_rr_bar * rho**b)] - rho   on rho in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, SingularSystemError
from .integrator import IntegratorConfig, Trajectory, integrate
from .model import (I_RR, STATE_DIM, ModelParams, ground_state, packed_rhs,
                    self_shift, self_shift_packed)

EPS_STAB = 1e-9
_ROOT_TOL = 1e-12
_DEDUP_TOL = 1e-8


@dataclass(frozen=True)
class FixedPoint:
    """One self-consistent steady state with its linearization."""

    state: np.ndarray            # packed 9-vector
    shift: float                 # self-consistent v_rr_bar * rho_rr**b
    eigenvalues: np.ndarray      # 9 complex eigenvalues of the full Jacobian
    stable: bool
    max_real_part: float         # over the trace-reduced (8-dim) spectrum

    @property
    def rho_rr(self) -> float:
        return float(self.state[I_RR])


class RegimeTag(str, Enum):
    MONOSTABLE = "monostable"
    BISTABLE = "bistable"
    OSCILLATORY = "oscillatory"


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    fixed_points: tuple[FixedPoint, ...]

    @property
    def n_stable(self) -> int:
        return sum(fp.stable for fp in self.fixed_points)


@dataclass(frozen=True)
class HysteresisResult:
    delta_c_grid: np.ndarray
    forward_rho_rr: np.ndarray
    backward_rho_rr: np.ndarray
    loop_area: float
    forward_oscillatory: np.ndarray   # bool, final-window peak-to-peak flag
    backward_oscillatory: np.ndarray
    hold_time: float


def _linear_parts(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Matrices A0, A1 with d(rho)/dt = (A0 + s*A1) rho at frozen shift s.

    Columns are read off by evaluating the (linear, homogeneous) frozen
    RHS on the identity basis, so the matrices agree with bloch_rhs by
    construction.
    """
    basis = np.eye(STATE_DIM)
    cols0 = packed_rhs(basis, params.omega_p, params.omega_c, params.delta_p,
                       params.delta_c, params.gamma_e, params.gamma_r, 0.0)
    cols1 = packed_rhs(basis, params.omega_p, params.omega_c, params.delta_p,
                       params.delta_c, params.gamma_e, params.gamma_r, 1.0)
    return cols0.T, cols1.T - cols0.T


def _steady_system(a_matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Replace the redundant rho_gg row by the trace constraint."""
    m = a_matrix.copy()
    m[0, :] = 0.0
    m[0, :3] = 1.0
    b = np.zeros(STATE_DIM)
    b[0] = 1.0
    return m, b


def steady_state_given_shift(params: ModelParams, s: float) -> np.ndarray:
    """Unique steady state of the Bloch equations with the shift frozen at s."""
    if not np.isfinite(s):
        raise DomainError("shift must be finite")
    a0, a1 = _linear_parts(params)
    m, b = _steady_system(a0 + s * a1)
    try:
        x = np.linalg.solve(m, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"singular steady-state system at shift {s:.6g} "
            f"(condition ~ {np.linalg.cond(m):.3g})",
            condition=float(np.linalg.cond(m))) from exc
    cond = np.linalg.cond(m)
    if not np.all(np.isfinite(x)) or cond > 1e14:
        raise SingularSystemError(
            f"ill-conditioned steady-state system at shift {s:.6g} "
            f"(condition ~ {cond:.3g})", condition=float(cond))
    return x


def _steady_rho_rr_batch(params: ModelParams, shifts: np.ndarray) -> np.ndarray:
    """rho_rr of the frozen-shift steady state for many shift values at once."""
    a0, a1 = _linear_parts(params)
    mats = a0[None, :, :] + shifts[:, None, None] * a1[None, :, :]
    mats[:, 0, :] = 0.0
    mats[:, 0, :3] = 1.0
    b = np.zeros(STATE_DIM)
    b[0] = 1.0
    rhs = np.broadcast_to(b[:, None], (len(shifts), STATE_DIM, 1))
    sols = np.linalg.solve(mats, rhs)
    return sols[:, I_RR, 0]


def jacobian(state, params: ModelParams) -> np.ndarray:
    """Central finite-difference Jacobian of the full nonlinear RHS.

    The differentiated map is x -> bloch_rhs(x, params, self_shift(x)),
    including the chain-rule contribution of rho_rr**b through the shift.
    """
    x = np.asarray(state, dtype=float)
    if x.shape != (STATE_DIM,) or not np.all(np.isfinite(x)):
        raise DomainError("jacobian requires a finite packed 9-vector")
    h = 1e-6 * np.maximum(1.0, np.abs(x))
    pts = np.repeat(x[None, :], 2 * STATE_DIM, axis=0)
    idx = np.arange(STATE_DIM)
    pts[2 * idx, idx] += h
    pts[2 * idx + 1, idx] -= h
    shifts = self_shift_packed(pts, params.v_rr_bar, params.b_exponent)
    f = packed_rhs(pts, params.omega_p, params.omega_c, params.delta_p,
                   params.delta_c, params.gamma_e, params.gamma_r, shifts)
    return ((f[2 * idx] - f[2 * idx + 1]) / (2.0 * h[:, None])).T


def _reduced_spectrum(jac: np.ndarray) -> np.ndarray:
    """Spectrum on the trace-zero manifold (rho_gg eliminated).

    The flow conserves the trace exactly, so the full Jacobian carries a
    structural zero mode along the trace direction; stability must be
    judged on the remaining 8 directions.
    """
    embed = np.zeros((STATE_DIM, STATE_DIM - 1))
    embed[1:, :] = np.eye(STATE_DIM - 1)
    embed[0, 0] = -1.0   # d rho_gg = -(d rho_ee + d rho_rr)
    embed[0, 1] = -1.0
    return np.linalg.eigvals((jac @ embed)[1:, :])


def _make_fixed_point(params: ModelParams, rho: float) -> FixedPoint:
    s = params.v_rr_bar * max(rho, 0.0) ** params.b_exponent
    state = steady_state_given_shift(params, s)
    jac = jacobian(state, params)
    eigs = np.linalg.eigvals(jac)
    reduced = _reduced_spectrum(jac)
    max_re = float(np.max(reduced.real))
    return FixedPoint(state=state, shift=float(self_shift(state, params)),
                      eigenvalues=eigs, stable=max_re < -EPS_STAB,
                      max_real_part=max_re)


def self_consistent_fixed_points(params: ModelParams,
                                 grid_n: int = 2000) -> list[FixedPoint]:
    """All roots of the scalar self-consistency map on rho in [0, 1].

    Every sign change of g on the uniform grid is bracketed and refined by
    bisection; roots closer than 1e-8 are merged.  g(0) >= 0 and g(1) <= 0,
    so at least one root always exists.
    """
    if grid_n < 100:
        raise DomainError("grid_n must be at least 100")
    rho = np.linspace(0.0, 1.0, grid_n)
    shifts = params.v_rr_bar * rho ** params.b_exponent
    g = _steady_rho_rr_batch(params, shifts) - rho

    def g_scalar(r: float) -> float:
        s = params.v_rr_bar * max(r, 0.0) ** params.b_exponent
        return float(steady_state_given_shift(params, s)[I_RR] - r)

    roots: list[float] = []
    for i in range(grid_n - 1):
        if g[i] == 0.0:
            roots.append(float(rho[i]))
            continue
        if g[i] * g[i + 1] >= 0.0:
            continue
        lo, hi = float(rho[i]), float(rho[i + 1])
        g_lo = float(g[i])
        root = 0.5 * (lo + hi)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            g_mid = g_scalar(mid)
            root = mid
            if abs(g_mid) < _ROOT_TOL or (hi - lo) < 1e-16:
                break
            if g_lo * g_mid < 0.0:
                hi = mid
            else:
                lo, g_lo = mid, g_mid
        roots.append(root)
    if g[-1] == 0.0:
        roots.append(float(rho[-1]))

    deduped: list[float] = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > _DEDUP_TOL:
            deduped.append(r)
    return [_make_fixed_point(params, r) for r in deduped]


def classify_regime(params: ModelParams, grid_n: int = 2000) -> Regime:
    """Monostable / bistable / oscillatory by counting stable fixed points."""
    fps = tuple(self_consistent_fixed_points(params, grid_n))
    n_stable = sum(fp.stable for fp in fps)
    if n_stable == 0:
        tag = RegimeTag.OSCILLATORY
    elif n_stable == 1:
        tag = RegimeTag.MONOSTABLE
    else:
        tag = RegimeTag.BISTABLE
    return Regime(tag=tag, fixed_points=fps)


def make_self_consistent_rhs(params: ModelParams):
    """RHS closure for homogeneous dynamics with the state's own shift.

    Accepts packed states of shape (9,) or batches (m, 9); a batch is
    treated as independent systems, each with its own self-shift.
    """
    def rhs(t, x):
        s = self_shift_packed(x, params.v_rr_bar, params.b_exponent)
        return packed_rhs(x, params.omega_p, params.omega_c, params.delta_p,
                          params.delta_c, params.gamma_e, params.gamma_r, s)
    return rhs


def integrate_self_consistent(params: ModelParams, x0,
                              cfg: IntegratorConfig) -> Trajectory:
    """Integrate the homogeneous (single-class) nonlinear model."""
    return integrate(make_self_consistent_rhs(params), x0, cfg)


def _hold_readout(params_list, x, delta_c, hold_time, rel_tol, abs_tol,
                  max_step, baseline_p2p):
    """Integrate all systems for one hold; return (x_end, avgs, osc flags)."""
    m = len(params_list)
    omega_p = np.array([p.omega_p for p in params_list])
    omega_c = np.array([p.omega_c for p in params_list])
    delta_p = np.array([p.delta_p for p in params_list])
    gamma_e = np.array([p.gamma_e for p in params_list])
    gamma_r = np.array([p.gamma_r for p in params_list])
    v_bar = np.array([p.v_rr_bar for p in params_list])
    b_exp = np.array([p.b_exponent for p in params_list])

    def rhs(t, xx):
        s = self_shift_packed(xx, v_bar, b_exp)
        return packed_rhs(xx, omega_p, omega_c, delta_p, delta_c,
                          gamma_e, gamma_r, s)

    n_samples = 400
    cfg = IntegratorConfig(rel_tol=rel_tol, abs_tol=abs_tol, max_step=max_step,
                           output_dt=hold_time / n_samples, t_end=hold_time)
    traj = integrate(rhs, x, cfg)
    tail = traj.x[-(n_samples // 4):, :, I_RR]     # final 25% of the hold
    avg = tail.mean(axis=0)
    p2p = tail.max(axis=0) - tail.min(axis=0)
    osc = p2p > 10.0 * baseline_p2p
    return traj.x[-1], avg, osc


def hysteresis_sweep(params: ModelParams, delta_c_from: float,
                     delta_c_to: float, n_steps: int = 200,
                     hold_time: float = 2000.0, rel_tol: float = 1e-8,
                     abs_tol: float = 1e-8,
                     max_step: float = 0.5) -> HysteresisResult:
    """Adiabatic forward/backward sweep of delta_c recording rho_rr.

    At each grid value the state is held for hold_time and the time
    average of rho_rr over the final 25% of the hold is recorded; the end
    state seeds the next grid point.
    """
    results = hysteresis_sweep_multi([params], delta_c_from, delta_c_to,
                                     n_steps=n_steps, hold_time=hold_time,
                                     rel_tol=rel_tol, abs_tol=abs_tol,
                                     max_step=max_step)
    return results[0]


def hysteresis_sweep_multi(params_list, delta_c_from, delta_c_to,
                           n_steps=200, hold_time=2000.0, rel_tol=1e-8,
                           abs_tol=1e-8, max_step=0.5):
    """Batched hysteresis sweeps sharing one delta_c grid.

    All systems advance in lockstep through the same grid (one stacked
    integration per hold), which is how the acceptance suite compares
    loop areas across interaction strengths cheaply.
    """
    if n_steps < 2:
        raise DomainError("n_steps must be at least 2")
    if hold_time <= 0:
        raise DomainError("hold_time must be positive")
    grid = np.linspace(delta_c_from, delta_c_to, n_steps)
    m = len(params_list)
    # baseline peak-to-peak of a relaxed monostable hold, per system; used
    # to flag oscillatory holds
    baseline = 1e-6

    branches = {}
    for name, dc_seq in (("forward", grid), ("backward", grid[::-1])):
        x = ground_state(m)
        avgs = np.empty((n_steps, m))
        oscs = np.zeros((n_steps, m), dtype=bool)
        for i, dc in enumerate(dc_seq):
            x, avg, osc = _hold_readout(params_list, x, float(dc), hold_time,
                                        rel_tol, abs_tol, max_step, baseline)
            avgs[i] = avg
            oscs[i] = osc
        branches[name] = (avgs, oscs)

    fwd, fwd_osc = branches["forward"]
    bwd, bwd_osc = branches["backward"]
    bwd = bwd[::-1]            # re-order backward branch onto the grid
    bwd_osc = bwd_osc[::-1]

    out = []
    for j in range(m):
        area = abs(np.trapezoid(fwd[:, j] - bwd[:, j], grid))
        out.append(HysteresisResult(
            delta_c_grid=grid.copy(), forward_rho_rr=fwd[:, j].copy(),
            backward_rho_rr=bwd[:, j].copy(), loop_area=float(area),
            forward_oscillatory=fwd_osc[:, j].copy(),
            backward_oscillatory=bwd_osc[:, j].copy(), hold_time=hold_time))
    return out
