"""Korteweg-de Vries equation, Fourier pseudospectral in space.

u_t = delta(-delta^2 u - 3 u*u) on a periodic interval, where delta is the
spectral differentiation operator with the Nyquist mode zeroed out.  The
energy  E[u] = sum_j ((delta u)_j^2 / 2 - u_j^3) dx  is split with
g_plus(s) = s^4 - s^3 and g_minus(s) = s^4, both bounded below on the line,
summed pointwise against the grid weight dx.

The traveling cnoidal wave provides an exact solution for benchmarks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GradientSystem, Splitting, StructureKind
from .elliptic import elliptic_K, jacobi_cn
from .errors import DomainError
from .linalg import FourierDiagonalOperator

# min of g_plus(s) = s^4 - s^3 is -27/256 at s = 3/4; the shift must beat it
G_PLUS_MIN = -27.0 / 256.0


@dataclass(frozen=True)
class KdvGrid:
    """Uniform periodic grid with an even number of points."""

    n_points: int
    domain_length: float

    def __post_init__(self):
        if self.n_points <= 0 or self.n_points % 2 != 0:
            raise DomainError(f"n_points must be a positive even integer, got {self.n_points}")
        if not self.domain_length > 0.0:
            raise DomainError(f"domain_length must be positive, got {self.domain_length}")

    @property
    def dx(self) -> float:
        return self.domain_length / self.n_points

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n_points) * self.dx


def spectral_delta(grid: KdvGrid) -> FourierDiagonalOperator:
    """First-derivative operator 2*pi*i*xi/L with a zeroed Nyquist mode.

    Zeroing mode N/2 keeps the symbol conjugate-symmetric, so odd derivatives
    of real vectors stay real.
    """
    n = grid.n_points
    modes = np.fft.fftfreq(n) * n
    modes[n // 2] = 0.0
    return FourierDiagonalOperator(2.0j * np.pi / grid.domain_length * modes)


def kdv_splitting(grid: KdvGrid) -> Splitting:
    """Semilinear form u' = A u + g(u) with A = -delta^3, g(u) = -3 delta(u*u)."""
    delta = spectral_delta(grid)
    linear = FourierDiagonalOperator(-delta.symbol**3)
    return Splitting(linear=linear, nonlinear=lambda u: -3.0 * delta.apply(u * u))


def kdv_system(grid: KdvGrid, shift_plus: float = 1.0, shift_minus: float = 1.0) -> GradientSystem:
    """Gradient-system form of the pseudospectral KdV equation."""
    lower_bound = -G_PLUS_MIN * grid.domain_length  # = 27/256 * L
    if shift_plus <= lower_bound:
        raise DomainError(
            f"shift_plus must exceed 27/256 * domain_length = {lower_bound:g} "
            f"to keep the plus radicand positive, got {shift_plus:g}"
        )
    if shift_minus <= 0.0:
        raise DomainError("shift_minus must be positive (inf E_minus = 0)")
    delta = spectral_delta(grid)
    quad = FourierDiagonalOperator(-delta.symbol**2)
    dx = grid.dx
    return GradientSystem(
        dim=grid.n_points,
        structure_op=delta,
        structure_kind=StructureKind.SKEW_ADJOINT,
        quad_op=quad,
        energy_plus=lambda u: float(np.sum(u**4 - u**3) * dx),
        energy_minus=lambda u: float(np.sum(u**4) * dx),
        grad_plus=lambda u: 4.0 * u**3 - 3.0 * u**2,
        grad_minus=lambda u: 4.0 * u**3,
        shift_plus=shift_plus,
        shift_minus=shift_minus,
        inner_weight=dx,
        splitting=kdv_splitting(grid),
    )


@dataclass(frozen=True)
class CnoidalParams:
    """Traveling cnoidal wave u(x, t) = offset + 2 kappa^2 m^2 cn^2(kappa(x - ct) | m)."""

    modulus: float
    kappa: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.modulus < 1.0:
            raise DomainError(f"modulus must lie in (0, 1), got {self.modulus}")
        if self.kappa <= 0.0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")

    @property
    def speed(self) -> float:
        return 6.0 * self.offset + 4.0 * (2.0 * self.modulus**2 - 1.0) * self.kappa**2

    @property
    def spatial_period(self) -> float:
        # cn^2 has period 2K, so the wave profile repeats every 2K/kappa
        return 2.0 * elliptic_K(self.modulus) / self.kappa

    @property
    def temporal_period(self) -> float:
        c = self.speed
        if c == 0.0:
            raise DomainError("standing wave (speed 0) has no temporal period")
        return self.spatial_period / abs(c)


def default_cnoidal_params() -> CnoidalParams:
    """Benchmark wave: m = sqrt(0.1), kappa = 1, zero offset (speed -3.2)."""
    return CnoidalParams(modulus=math.sqrt(0.1))


def cnoidal(params: CnoidalParams, grid: KdvGrid, t: float = 0.0) -> np.ndarray:
    """Sample the traveling cnoidal wave on the grid at time t."""
    phase = params.kappa * (grid.x - params.speed * t)
    cn = jacobi_cn(phase, params.modulus)
    return params.offset + 2.0 * params.kappa**2 * params.modulus**2 * cn**2
