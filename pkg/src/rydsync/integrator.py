"""Adaptive explicit Runge-Kutta integration with dense uniform output.

Dormand-Prince 5(4) embedded pair: the 5th-order solution is propagated,
the 4th-order companion provides the local error estimate.  Works on state
arrays of any shape (the thermal ensemble stacks classes along a leading
axis), so the same stepper serves the single-class model, batched
parameter studies, and the coupled multi-class system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IntegrationError

# Butcher tableau (Dormand & Prince 1980)
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
# 5th-order weights equal the last A row (FSAL); error weights are b5 - b4
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920,
               -17253 / 339200, 22 / 525, -1 / 40])
# quartic continuous-extension coefficients (Shampine); row i gives the
# polynomial-in-s weights of stage i, x(t+sh) = x + h * sum_i k_i * Pi(s)
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608,
     -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933,
     87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304,
     -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408,
     701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883,
     -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423,
     69997945 / 29380423]])

_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_SAFETY = 0.9


@dataclass(frozen=True)
class IntegratorConfig:
    """Error tolerances and output grid of one integration run."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-8
    max_step: float = 0.1
    output_dt: float = 0.1
    t_end: float = 100.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.output_dt <= 0:
            raise DomainError("output_dt must be positive")
        if self.t_end <= 0:
            raise DomainError("t_end must be positive")
        if self.max_step <= 0:
            raise DomainError("max_step must be positive")


@dataclass
class Trajectory:
    """Uniformly sampled dense output of one integration."""

    t: np.ndarray          # (m,)
    x: np.ndarray          # (m, *state_shape)

    def __len__(self) -> int:
        return len(self.t)


def _error_norm(err, x_old, x_new, rel_tol, abs_tol):
    scale = abs_tol + rel_tol * np.maximum(np.abs(x_old), np.abs(x_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def integrate(rhs, x0, cfg: IntegratorConfig, t0: float = 0.0) -> Trajectory:
    """Integrate dx/dt = rhs(t, x) from t0 to t0 + cfg.t_end.

    Dense output is produced on the uniform grid t0 + k * output_dt by
    the pair's quartic continuous extension over each accepted step.
    """
    x = np.array(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("initial state must be finite")

    t_end = t0 + cfg.t_end
    n_out = int(np.floor(cfg.t_end / cfg.output_dt + 1e-9)) + 1
    t_out = t0 + cfg.output_dt * np.arange(n_out)
    out = np.empty((n_out,) + x.shape)
    out[0] = x
    next_out = 1

    t = t0
    f = rhs(t, x)
    h = min(cfg.max_step, cfg.output_dt, cfg.t_end / 10.0)
    h_min = 1e-14 * max(1.0, abs(t_end))
    k = [None] * 7

    while t < t_end - 1e-12 * max(1.0, abs(t_end)):
        h = min(h, cfg.max_step, t_end - t)
        k[0] = f
        for i in range(1, 6):
            dx = k[0] * _A[i][0]
            for j in range(1, i):
                dx = dx + k[j] * _A[i][j]
            k[i] = rhs(t + _C[i] * h, x + h * dx)
        x_new = x + h * (k[0] * _A[6][0] + k[2] * _A[6][2] + k[3] * _A[6][3]
                         + k[4] * _A[6][4] + k[5] * _A[6][5])
        # FSAL: the 7th stage is the derivative at the accepted point
        f_new = rhs(t + h, x_new)
        err = h * (k[0] * _E[0] + k[2] * _E[2] + k[3] * _E[3]
                   + k[4] * _E[4] + k[5] * _E[5] + f_new * _E[6])

        if not np.all(np.isfinite(x_new)):
            raise IntegrationError(f"non-finite state at t = {t + h:.6g}",
                                   time=t + h)
        norm = _error_norm(err, x, x_new, cfg.rel_tol, cfg.abs_tol)

        if norm <= 1.0:
            # accept; fill output samples covered by [t, t+h] with the
            # 4th-order continuous extension
            t_new = t + h
            k[6] = f_new
            while next_out < n_out and t_out[next_out] <= t_new + 1e-12:
                s = (t_out[next_out] - t) / h
                poly = _P @ np.array([s, s * s, s ** 3, s ** 4])
                acc = x + (h * poly[0]) * k[0]
                for i in range(2, 7):
                    acc = acc + (h * poly[i]) * k[i]
                out[next_out] = acc
                next_out += 1
            t, x, f = t_new, x_new, f_new
            factor = _MAX_FACTOR if norm == 0 else min(
                _MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * norm ** -0.2))
            h *= factor
        else:
            h *= max(_MIN_FACTOR, _SAFETY * norm ** -0.2)

        if h < h_min:
            raise IntegrationError(
                f"step size underflow at t = {t:.6g} (stiffness?)", time=t)

    if next_out < n_out:           # final samples landing exactly on t_end
        out[next_out:] = x
    return Trajectory(t=t_out, x=out)
