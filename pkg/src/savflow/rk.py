"""Fourth-order scheme: the two-stage Gauss method with frozen stage arguments.

The classical Gauss method conserves quadratic invariants because its
coefficients satisfy the canonical condition b_i b_j = b_i a_ij + b_j a_ji.
Applied to the augmented flow with the operator argument frozen at predicted
stage values U_bar_j,

    Z_i = z^n + dt * sum_j a_ij Op(U_bar_j) grad E_mod(Z_j),

the stage equations are linear in (Z_1, Z_2) because grad E_mod is linear, so
one dense solve of size 2*(dim+2) replaces the nonlinear stage iteration.
E_mod is conserved exactly no matter how the U_bar_j are chosen; fourth-order
accuracy needs them to approximate u(t_n + c_j dt) to O(dt^3), which the two
predictors below deliver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from .core import AugmentedState, GradientSystem, Splitting, phi
from .errors import DimensionMismatch, SplittingUnavailable
from .linalg import solve_dense
from .records import RunRecord, run_loop

StagePair = Tuple[np.ndarray, np.ndarray]
StagePredictor = Callable[[GradientSystem, np.ndarray, float], StagePair]

# switch to the truncated series below this |z| to avoid cancellation
PHI_SERIES_RADIUS = 1e-2
_PHI_SERIES_TERMS = 10


@dataclass(frozen=True)
class ButcherTableau:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def canonical_residual(self) -> float:
        """max |b_i b_j - b_i a_ij - b_j a_ji|; zero for canonical methods."""
        bb = np.outer(self.b, self.b)
        ba = self.b[:, None] * self.a
        return float(np.abs(bb - ba - ba.T).max())


def gauss2_tableau() -> ButcherTableau:
    """Two-stage Gauss-Legendre method (order 4, canonical)."""
    s = math.sqrt(3.0) / 6.0
    a = np.array([[0.25, 0.25 - s], [0.25 + s, 0.25]])
    b = np.array([0.5, 0.5])
    c = np.array([0.5 - s, 0.5 + s])
    return ButcherTableau(a=a, b=b, c=c)


def phi1(z):
    """phi_1(z) = (e^z - 1)/z, series-evaluated near 0."""
    return _phi(z, shift=1)


def phi2(z):
    """phi_2(z) = (e^z - 1 - z)/z^2, series-evaluated near 0."""
    return _phi(z, shift=2)


def _expm1c(z: np.ndarray) -> np.ndarray:
    """e^z - 1 for complex arrays, stable near 0 (plain exp loses digits there)."""
    x, y = z.real, z.imag
    return np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2 + 1j * (np.exp(x) * np.sin(y))


def _phi(z, shift: int):
    za = np.asarray(z, dtype=complex)
    out = np.empty_like(za)
    small = np.abs(za) < PHI_SERIES_RADIUS
    # Horner sum of z^k / (k + shift)! for k = 0 .. terms-1
    zs = za[small]
    acc = np.full_like(zs, 1.0 / math.factorial(_PHI_SERIES_TERMS - 1 + shift))
    for k in range(_PHI_SERIES_TERMS - 2, -1, -1):
        acc = acc * zs + 1.0 / math.factorial(k + shift)
    out[small] = acc
    zb = za[~small]
    em1 = _expm1c(zb)
    if shift == 1:
        out[~small] = em1 / zb
    else:
        out[~small] = (em1 - zb) / zb**2
    return complex(out) if np.isscalar(z) else out


@dataclass(frozen=True)
class ExplicitPredictorTableau:
    """Strictly lower-triangular coefficients of the five-stage stage predictor."""

    abar: np.ndarray

    def __post_init__(self):
        if self.abar.shape != (5, 5) or np.abs(np.triu(self.abar)).max() != 0.0:
            raise DimensionMismatch("predictor tableau must be 5x5 strictly lower triangular")


def explicit_predictor_tableau() -> ExplicitPredictorTableau:
    """Five explicit stages whose last two land on the Gauss nodes.

    Rows 4 and 5 are second-order approximations at c_1 and c_2; feeding them
    to the frozen Gauss step reproduces the fully implicit stages to O(dt^3),
    which keeps the one-step error at O(dt^5).
    """
    s = math.sqrt(3.0) / 6.0
    abar = np.zeros((5, 5))
    abar[1, 0] = 0.25
    abar[2, 1] = 0.5
    abar[3, 0] = 1.0 / 6.0
    abar[3, 2] = 1.0 / 3.0 - s
    abar[4, 0] = 1.0 / 6.0
    abar[4, 2] = 1.0 / 3.0 + s
    return ExplicitPredictorTableau(abar=abar)


def predict_stages_explicit(sys: GradientSystem, u: np.ndarray, dt: float) -> StagePair:
    """Stage predictions from five explicit stages on the original flow."""
    abar = explicit_predictor_tableau().abar
    f = lambda v: sys.apply_structure(sys.original_gradient(v))
    stages = [u]
    rhs = [f(u)]
    for i in range(1, 5):
        y = u.copy()
        for j in range(i):
            if abar[i, j] != 0.0:
                y = y + dt * abar[i, j] * rhs[j]
        stages.append(y)
        if i < 3:
            # only the first three stages feed later rows
            rhs.append(f(y))
    return stages[3], stages[4]


@dataclass(frozen=True)
class ExpTableau:
    """Three-stage exponential method; entries are functions of z = dt*A."""

    a_funcs: tuple
    b_funcs: tuple
    c: np.ndarray


def exp_heun3_tableau() -> ExpTableau:
    """Exponential analogue of the third-order Heun method, nodes (0, 1/3, 2/3).

    Row sums equal c_i * phi_1(c_i z), so every stage is exact when the
    nonlinearity vanishes.
    """
    a21 = lambda z: phi1(z / 3.0) / 3.0
    a31 = lambda z: 2.0 / 3.0 * phi1(2.0 * z / 3.0) - 4.0 / 3.0 * phi2(2.0 * z / 3.0)
    a32 = lambda z: 4.0 / 3.0 * phi2(2.0 * z / 3.0)
    b1 = lambda z: phi1(z) - 1.5 * phi2(z)
    b3 = lambda z: 1.5 * phi2(z)
    return ExpTableau(
        a_funcs=((None, None, None), (a21, None, None), (a31, a32, None)),
        b_funcs=(b1, None, b3),
        c=np.array([0.0, 1.0 / 3.0, 2.0 / 3.0]),
    )


def erk_step(splitting: Splitting, u: np.ndarray, h: float, tableau: Optional[ExpTableau] = None) -> np.ndarray:
    """One exponential Runge-Kutta step of size h for u' = A u + g(u).

    Stage form U_i = u + h * sum_j a_ij(hA) (g(U_j) + A u); coefficients are
    applied through the Fourier symbol of A.
    """
    if h == 0.0:
        return u.copy()
    tab = tableau if tableau is not None else exp_heun3_tableau()
    z = h * splitting.linear.symbol
    au = splitting.linear.apply(u)
    stages = [u]
    f_hats = [np.fft.fft(splitting.nonlinear(u) + au)]
    n_stages = len(tab.b_funcs)
    for i in range(1, n_stages):
        acc = np.zeros_like(z)
        for j in range(i):
            func = tab.a_funcs[i][j]
            if func is not None:
                acc = acc + func(z) * f_hats[j]
        u_i = u + h * np.fft.ifft(acc).real
        stages.append(u_i)
        f_hats.append(np.fft.fft(splitting.nonlinear(u_i) + au))
    acc = np.zeros_like(z)
    for j, func in enumerate(tab.b_funcs):
        if func is not None:
            acc = acc + func(z) * f_hats[j]
    return u + h * np.fft.ifft(acc).real


def predict_stages_exponential(sys: GradientSystem, u: np.ndarray, dt: float) -> StagePair:
    """Stage predictions U_bar_j = ERK(c_j dt) u from the exponential method."""
    if sys.splitting is None:
        raise SplittingUnavailable("exponential stage predictor needs a semilinear splitting")
    c = gauss2_tableau().c
    return (erk_step(sys.splitting, u, c[0] * dt), erk_step(sys.splitting, u, c[1] * dt))


def augmented_operator_matrix(sys: GradientSystem, u_bar: np.ndarray) -> np.ndarray:
    """Dense (dim+2)^2 matrix of Op(u_bar), for stage-system assembly."""
    n = sys.dim
    w = sys.inner_weight
    phi_p = phi(sys, u_bar, "plus")
    phi_m = phi(sys, u_bar, "minus")
    d = sys.structure_op.to_dense()
    top = np.empty((n, n + 2))
    top[:, :n] = d
    top[:, n] = d @ phi_p
    top[:, n + 1] = d @ phi_m
    full = np.empty((n + 2, n + 2))
    full[:n] = top
    full[n] = w * (phi_p @ top)
    full[n + 1] = w * (phi_m @ top)
    return full


def modified_energy_hessian(sys: GradientSystem) -> np.ndarray:
    """Matrix of z -> grad E_mod(z): blockdiag(L, 2, -2)."""
    n = sys.dim
    h = np.zeros((n + 2, n + 2))
    h[:n, :n] = sys.quad_op.to_dense()
    h[n, n] = 2.0
    h[n + 1, n + 1] = -2.0
    return h


def rk4_step(
    sys: GradientSystem,
    z: AugmentedState,
    dt: float,
    stage_pred: Union[StagePredictor, Sequence[np.ndarray]],
    tableau: Optional[ButcherTableau] = None,
) -> AugmentedState:
    """One frozen-Gauss step; `stage_pred` is a predictor or an explicit pair."""
    tab = tableau if tableau is not None else gauss2_tableau()
    if callable(stage_pred):
        u_bar_1, u_bar_2 = stage_pred(sys, z.u, dt)
    else:
        u_bar_1, u_bar_2 = stage_pred
    n = sys.dim
    m = n + 2
    hess = modified_energy_hessian(sys)
    k1 = augmented_operator_matrix(sys, u_bar_1) @ hess
    k2 = augmented_operator_matrix(sys, u_bar_2) @ hess

    a = tab.a
    system = np.zeros((2 * m, 2 * m))
    system[:m, :m] = np.eye(m) - dt * a[0, 0] * k1
    system[:m, m:] = -dt * a[0, 1] * k2
    system[m:, :m] = -dt * a[1, 0] * k1
    system[m:, m:] = np.eye(m) - dt * a[1, 1] * k2

    z_vec = z.to_vector()
    sol = solve_dense(system, np.concatenate([z_vec, z_vec]))
    z1, z2 = sol[:m], sol[m:]
    z_new = z_vec + dt * (tab.b[0] * (k1 @ z1) + tab.b[1] * (k2 @ z2))
    return AugmentedState.from_vector(z_new)


def rk4_run(
    sys: GradientSystem,
    z0: AugmentedState,
    dt: float,
    steps: int,
    stage_pred: StagePredictor,
    stride: int = 1,
    snapshots: bool = False,
) -> RunRecord:
    """Integrate `steps` frozen-Gauss steps, recording energies."""

    def advance(z: AugmentedState, n: int) -> AugmentedState:
        return rk4_step(sys, z, dt, stage_pred)

    return run_loop(sys, z0, dt, steps, advance, stride=stride, snapshots=snapshots)
