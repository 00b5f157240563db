"""Planar two-body problem as a conservative gradient system.

State w = (x, y, u, v) with energy E = (u^2 + v^2)/2 - 1/r, r = |(x, y)|.
The split takes the kinetic part as the quadratic form (L = diag(0,0,1,1))
and the whole potential as the subtracted bounded part E_minus = 1/r, so
E_plus is identically zero.  D is the canonical symplectic matrix.

The benchmark orbit starts at perihelion of an eccentricity-0.8 ellipse with
semi-major axis 1, so its period is exactly 2*pi.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from .core import GradientSystem, StructureKind
from .errors import DomainError
from .linalg import DenseOperator

KEPLER_PERIOD = 2.0 * math.pi

_BENCHMARK_STATE = np.array([0.2, 0.0, 0.0, 3.0])


def kepler_initial_state() -> np.ndarray:
    """Perihelion start (0.2, 0, 0, 3): unit semi-major axis, period 2*pi."""
    return _BENCHMARK_STATE.copy()


def kepler_vector_field(w: np.ndarray) -> np.ndarray:
    """Literal equations of motion (u, v, -x/r^3, -y/r^3)."""
    x, y, u, v = w
    r2 = x * x + y * y
    if r2 <= 0.0:
        raise DomainError("Kepler state hit the collision singularity r = 0")
    r3 = r2 * math.sqrt(r2)
    return np.array([u, v, -x / r3, -y / r3])


def _radius2(w: np.ndarray) -> float:
    r2 = float(w[0] * w[0] + w[1] * w[1])
    if r2 <= 0.0:
        raise DomainError("Kepler state hit the collision singularity r = 0")
    return r2


def _energy_minus(w: np.ndarray) -> float:
    return 1.0 / math.sqrt(_radius2(w))


def _grad_minus(w: np.ndarray) -> np.ndarray:
    r2 = _radius2(w)
    r3 = r2 * math.sqrt(r2)
    return np.array([-w[0] / r3, -w[1] / r3, 0.0, 0.0])


def kepler_system(shift_plus: float = 1.0, shift_minus: float = 1.0) -> GradientSystem:
    """Gradient-system form of the Kepler problem."""
    if shift_plus <= 0.0 or shift_minus <= 0.0:
        # inf E_plus = 0 and inf E_minus = 0, so both shifts must be positive
        raise DomainError("energy shifts must be positive for the Kepler split")
    structure = DenseOperator(np.block([
        [np.zeros((2, 2)), np.eye(2)],
        [-np.eye(2), np.zeros((2, 2))],
    ]))
    quad = DenseOperator(np.diag([0.0, 0.0, 1.0, 1.0]))
    dim4 = np.zeros(4)
    return GradientSystem(
        dim=4,
        structure_op=structure,
        structure_kind=StructureKind.SKEW_ADJOINT,
        quad_op=quad,
        energy_plus=lambda w: 0.0,
        energy_minus=_energy_minus,
        grad_plus=lambda w: dim4.copy(),
        grad_minus=_grad_minus,
        shift_plus=shift_plus,
        shift_minus=shift_minus,
        inner_weight=1.0,
    )


# dense-output reference trajectory, grown on demand and cached
_reference_cache: dict = {"t_max": 0.0, "sol": None}


def kepler_reference(t) -> np.ndarray:
    """High-accuracy reference orbit, used only for error measurement.

    Integrates the literal equations of motion with a high-order adaptive
    method at tolerances tight enough that the returned states are accurate
    to well below 1e-9 over a few periods.  Results are cached.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if t_arr.min() < 0.0:
        raise DomainError("reference trajectory is defined for t >= 0")
    t_need = float(t_arr.max())
    if _reference_cache["sol"] is None or t_need > _reference_cache["t_max"]:
        t_max = max(t_need * 1.01, KEPLER_PERIOD)
        ivp = solve_ivp(
            lambda _t, w: kepler_vector_field(w),
            (0.0, t_max),
            kepler_initial_state(),
            method="DOP853",
            rtol=1e-13,
            atol=1e-15,
            dense_output=True,
        )
        _reference_cache["t_max"] = t_max
        _reference_cache["sol"] = ivp.sol
    out = _reference_cache["sol"](t_arr)
    return out[:, 0] if np.isscalar(t) or np.ndim(t) == 0 else out.T
