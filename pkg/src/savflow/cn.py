"""Linearly implicit Crank-Nicolson scheme for augmented gradient systems.

One step solves

    (z^{n+1} - z^n)/dt = Op(u_bar) grad E_mod((z^{n+1} + z^n)/2)

where u_bar is any second-order-accurate predictor of u(t_n + dt/2).  The
midpoint structure conserves E_mod exactly for skew-adjoint D -- for every
predictor, accurate or not -- and dissipates it for negative semidefinite D.

The step is resolved by block elimination: three solves with
J = I - (dt/2) D L, one 2x2 system for the auxiliary variables, then a
cheap reconstruction of u^{n+1}.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import AugmentedState, GradientSystem, phi
from .errors import ConfigError, MissingHistory, SingularMatrix, SplittingUnavailable
from .linalg import LinearSolvePlan, plan_implicit
from .records import RunRecord, run_loop
from .rk import phi1

# determinant guard for the 2x2 auxiliary system
DET_FLOOR = 1e-14


class PredictorKind(enum.Enum):
    EXTRAPOLATION = "extrapolation"
    HALF_STEP_EULER = "half_step_euler"
    HALF_STEP_EXP_EULER = "half_step_exp_euler"


@dataclass
class Predictor:
    """Midpoint predictor with the bit of history extrapolation needs."""

    kind: PredictorKind
    prev_u: Optional[np.ndarray] = None
    step_index: int = 0

    @classmethod
    def extrapolation(cls) -> "Predictor":
        return cls(PredictorKind.EXTRAPOLATION)

    @classmethod
    def half_step_euler(cls) -> "Predictor":
        return cls(PredictorKind.HALF_STEP_EULER)

    @classmethod
    def half_step_exponential_euler(cls) -> "Predictor":
        return cls(PredictorKind.HALF_STEP_EXP_EULER)

    def reset(self) -> None:
        self.prev_u = None
        self.step_index = 0

    def advance(self, u_n: np.ndarray) -> None:
        """Record u^n after the step n -> n+1 has been taken."""
        self.prev_u = np.asarray(u_n, dtype=float).copy()
        self.step_index += 1


def predict_half(pred: Predictor, sys: GradientSystem, z: AugmentedState, dt: float) -> np.ndarray:
    """Predict u(t_n + dt/2) from z^n without changing predictor state."""
    u = z.u
    if pred.kind is PredictorKind.EXTRAPOLATION:
        if pred.step_index == 0:
            # no history yet; accept the one-step order reduction
            return u.copy()
        if pred.prev_u is None:
            raise MissingHistory("extrapolation predictor needs u from the previous step")
        return 0.5 * (3.0 * u - pred.prev_u)
    if pred.kind is PredictorKind.HALF_STEP_EULER:
        return u + 0.5 * dt * sys.apply_structure(sys.original_gradient(u))
    if pred.kind is PredictorKind.HALF_STEP_EXP_EULER:
        if sys.splitting is None:
            raise SplittingUnavailable("exponential Euler predictor needs a semilinear splitting")
        h = 0.5 * dt
        hs = h * sys.splitting.linear.symbol
        u_hat = np.fft.fft(u)
        g_hat = np.fft.fft(sys.splitting.nonlinear(u))
        return np.fft.ifft(np.exp(hs) * u_hat + h * phi1(hs) * g_hat).real
    raise ValueError(f"unknown predictor kind {pred.kind!r}")


@dataclass
class CnWorkspace:
    """Per-run cache: the factorization of J = I - (dt/2) D L."""

    dt: float
    plan: LinearSolvePlan

    @classmethod
    def create(cls, sys: GradientSystem, dt: float) -> "CnWorkspace":
        return cls(dt=dt, plan=plan_implicit(sys.structure_op, sys.quad_op, 0.5 * dt))


def cn_step(
    sys: GradientSystem,
    z: AugmentedState,
    u_bar: np.ndarray,
    dt: float,
    workspace: Optional[CnWorkspace] = None,
) -> AugmentedState:
    """One Crank-Nicolson step with the midpoint frozen at u_bar."""
    ws = workspace if workspace is not None else CnWorkspace.create(sys, dt)
    if ws.dt != dt:
        raise ConfigError(f"workspace was planned for dt={ws.dt:g}, step asked for dt={dt:g}")

    phi_p = phi(sys, u_bar, "plus")
    phi_m = phi(sys, u_bar, "minus")
    ju = ws.plan.solve(z.u)                               # J^{-1} u^n
    kp = ws.plan.solve(sys.apply_structure(phi_p))        # J^{-1} D phi_plus
    km = ws.plan.solve(sys.apply_structure(phi_m))        # J^{-1} D phi_minus

    b_pp = sys.inner(phi_p, kp)
    b_pm = sys.inner(phi_p, km)
    b_mp = sys.inner(phi_m, kp)
    b_mm = sys.inner(phi_m, km)
    c_p = sys.inner(phi_p, ju - z.u)                      # <phi_plus, (J^{-1} - I) u^n>
    c_m = sys.inner(phi_m, ju - z.u)

    # 2x2 system for the new auxiliary variables
    m00 = 1.0 - dt * b_pp
    m01 = dt * b_pm
    m10 = -dt * b_mp
    m11 = 1.0 + dt * b_mm
    rhs0 = 2.0 * c_p + (1.0 + dt * b_pp) * z.r_plus - dt * b_pm * z.r_minus
    rhs1 = 2.0 * c_m + dt * b_mp * z.r_plus - (dt * b_mm - 1.0) * z.r_minus
    det = m00 * m11 - m01 * m10
    if abs(det) < DET_FLOOR:
        raise SingularMatrix(f"auxiliary 2x2 system is singular (det={det:g}) at dt={dt:g}")
    r_plus = (rhs0 * m11 - m01 * rhs1) / det
    r_minus = (m00 * rhs1 - m10 * rhs0) / det

    u_new = (2.0 * ju - z.u) + dt * (r_plus + z.r_plus) * kp - dt * (r_minus + z.r_minus) * km
    return AugmentedState(u_new, float(r_plus), float(r_minus))


def cn_run(
    sys: GradientSystem,
    z0: AugmentedState,
    dt: float,
    steps: int,
    predictor: Predictor,
    stride: int = 1,
    snapshots: bool = False,
) -> RunRecord:
    """Integrate `steps` Crank-Nicolson steps, recording energies."""
    if predictor.kind is PredictorKind.HALF_STEP_EXP_EULER and sys.splitting is None:
        raise SplittingUnavailable("this problem has no semilinear splitting; choose another predictor")
    ws = CnWorkspace.create(sys, dt)
    predictor.reset()

    def advance(z: AugmentedState, n: int) -> AugmentedState:
        u_bar = predict_half(predictor, sys, z, dt)
        z_new = cn_step(sys, z, u_bar, dt, ws)
        predictor.advance(z.u)
        return z_new

    return run_loop(sys, z0, dt, steps, advance, stride=stride, snapshots=snapshots)
