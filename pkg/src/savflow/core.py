"""Gradient systems and their scalar-auxiliary-variable augmentation.

A flow  u' = D grad E(u)  is conservative when D is skew-adjoint and
dissipative when D is negative semidefinite.  The energy is split as

    E(u) = 1/2 <u, L u> + E_plus(u) - E_minus(u)

with L self-adjoint positive semidefinite and both nonquadratic parts bounded
below.  Each part gets a scalar auxiliary variable

    r_plus = sqrt(E_plus(u) + shift_plus),    r_minus likewise,

and in the augmented state z = (u, r_plus, r_minus) the energy turns into the
quadratic  E_mod(z) = 1/2 <u, L u> + r_plus**2 - r_minus**2.  The augmented
flow  z' = Op(u) grad E_mod(z)  uses an operator Op(u), assembled from D and
the normalized gradients phi, that inherits the definiteness of D.  That is
what lets linearly implicit schemes conserve (or dissipate) E_mod exactly.

All operations here are matrix-free; dense assembly for stage solvers lives
with the Runge-Kutta scheme.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from .errors import DimensionMismatch, DomainError
from .linalg import FourierDiagonalOperator, LinearOperator

# a radicand at or below this is treated as leaving the domain, never clamped
RADICAND_FLOOR = 1e-14

Which = Literal["plus", "minus"]


class StructureKind(enum.Enum):
    SKEW_ADJOINT = "skew_adjoint"
    NEGATIVE_SEMIDEFINITE = "negative_semidefinite"


@dataclass(frozen=True)
class Splitting:
    """Semilinear splitting u' = A u + g(u) for exponential integrators."""

    linear: FourierDiagonalOperator
    nonlinear: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GradientSystem:
    """A finite-dimensional gradient flow with a split energy.

    `structure_op` is D, `quad_op` is L.  `energy_plus`/`energy_minus` are the
    bounded-below nonquadratic energy parts entering E with + and - sign;
    their gradients are taken with respect to the (possibly weighted) inner
    product <u, v> = inner_weight * sum(u*v).
    """

    dim: int
    structure_op: LinearOperator
    structure_kind: StructureKind
    quad_op: LinearOperator
    energy_plus: Callable[[np.ndarray], float]
    energy_minus: Callable[[np.ndarray], float]
    grad_plus: Callable[[np.ndarray], np.ndarray]
    grad_minus: Callable[[np.ndarray], np.ndarray]
    shift_plus: float = 1.0
    shift_minus: float = 1.0
    inner_weight: float = 1.0
    splitting: Optional[Splitting] = None

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(self.inner_weight * np.dot(u, v))

    def apply_structure(self, v: np.ndarray) -> np.ndarray:
        return self.structure_op.apply(v)

    def apply_quad(self, v: np.ndarray) -> np.ndarray:
        return self.quad_op.apply(v)

    def original_gradient(self, u: np.ndarray) -> np.ndarray:
        """grad E(u) = L u + grad E_plus(u) - grad E_minus(u)."""
        return self.apply_quad(u) + self.grad_plus(u) - self.grad_minus(u)


@dataclass(frozen=True)
class AugmentedState:
    """State (u, r_plus, r_minus); doubles as a vector of the augmented space."""

    u: np.ndarray
    r_plus: float
    r_minus: float

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.u, [self.r_plus, self.r_minus]])

    @staticmethod
    def from_vector(vec: np.ndarray) -> "AugmentedState":
        vec = np.asarray(vec, dtype=float)
        return AugmentedState(vec[:-2].copy(), float(vec[-2]), float(vec[-1]))


def _radicand(sys: GradientSystem, u: np.ndarray, which: Which) -> float:
    if which == "plus":
        return float(sys.energy_plus(u)) + sys.shift_plus
    if which == "minus":
        return float(sys.energy_minus(u)) + sys.shift_minus
    raise ValueError(f"which must be 'plus' or 'minus', got {which!r}")


def init_augmented(sys: GradientSystem, u0: np.ndarray) -> AugmentedState:
    """Lift an initial state to the augmented space, r = sqrt(energy + shift)."""
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (sys.dim,):
        raise DimensionMismatch(f"system dim {sys.dim}, state shape {u0.shape}")
    if not np.all(np.isfinite(u0)):
        raise DomainError("initial state has non-finite entries")
    rads = {w: _radicand(sys, u0, w) for w in ("plus", "minus")}
    for w, rad in rads.items():
        if rad <= RADICAND_FLOOR:
            raise DomainError(f"energy_{w}(u0) + shift_{w} = {rad:g} is not safely positive; increase shift_{w}")
    return AugmentedState(u0.copy(), float(np.sqrt(rads["plus"])), float(np.sqrt(rads["minus"])))


def phi(sys: GradientSystem, u: np.ndarray, which: Which) -> np.ndarray:
    """Normalized energy gradient phi = grad E_x(u) / (2 sqrt(E_x(u) + shift))."""
    rad = _radicand(sys, u, which)
    if rad <= RADICAND_FLOOR:
        raise DomainError(f"energy_{which}(u) + shift_{which} = {rad:g} is not safely positive")
    grad = sys.grad_plus(u) if which == "plus" else sys.grad_minus(u)
    return grad / (2.0 * np.sqrt(rad))


def modified_energy(sys: GradientSystem, z: AugmentedState) -> float:
    """Quadratic energy of the augmented state, conserved by the schemes."""
    return 0.5 * sys.inner(z.u, sys.apply_quad(z.u)) + z.r_plus**2 - z.r_minus**2


def original_energy(sys: GradientSystem, u: np.ndarray) -> float:
    return 0.5 * sys.inner(u, sys.apply_quad(u)) + float(sys.energy_plus(u)) - float(sys.energy_minus(u))


def modified_gradient(sys: GradientSystem, z: AugmentedState) -> AugmentedState:
    """grad E_mod(z) = (L u, 2 r_plus, -2 r_minus), linear in z."""
    return AugmentedState(sys.apply_quad(z.u), 2.0 * z.r_plus, -2.0 * z.r_minus)


def apply_augmented_operator(sys: GradientSystem, u_bar: np.ndarray, w: AugmentedState) -> AugmentedState:
    """Apply the augmented structure operator Op(u_bar) to w, matrix-free.

    Op(u_bar) acts as  w |-> (D g, <phi_plus, D g>, <phi_minus, D g>)  with
    g = w.u + w.r_plus * phi_plus + w.r_minus * phi_minus, all phi evaluated at
    u_bar.  Skew-adjointness (or negative semidefiniteness) of D carries over
    to Op in the augmented inner product.
    """
    phi_p = phi(sys, u_bar, "plus")
    phi_m = phi(sys, u_bar, "minus")
    g = w.u + w.r_plus * phi_p + w.r_minus * phi_m
    du = sys.apply_structure(g)
    return AugmentedState(du, sys.inner(phi_p, du), sys.inner(phi_m, du))


def augmented_rhs(sys: GradientSystem, z: AugmentedState, u_bar: np.ndarray) -> AugmentedState:
    """Right-hand side Op(u_bar) grad E_mod(z) of the augmented flow.

    With the exact auxiliary values r = sqrt(E + shift) and u_bar = z.u the
    u-component reduces to the original right-hand side D grad E(u).
    """
    return apply_augmented_operator(sys, u_bar, modified_gradient(sys, z))


def z_inner(sys: GradientSystem, a: AugmentedState, b: AugmentedState) -> float:
    """Inner product of the augmented space (weighted on u, plain on the r's)."""
    return sys.inner(a.u, b.u) + a.r_plus * b.r_plus + a.r_minus * b.r_minus


def z_norm(sys: GradientSystem, a: AugmentedState) -> float:
    return float(np.sqrt(z_inner(sys, a, a)))
