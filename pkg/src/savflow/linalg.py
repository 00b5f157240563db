"""Linear operator backends and reusable implicit-step solvers.

Two operator representations cover every system in the package: a dense
matrix, and a diagonal operator in Fourier space (for periodic spectral
discretizations).  Both expose ``apply`` and ``to_dense`` so scheme code does
not branch on the backend.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import DimensionMismatch, SingularMatrix, SingularOperator

# relative pivot / denominator threshold below which a solve is declared broken
PIVOT_FLOOR = 1e-14


@dataclass
class DenseOperator:
    """A linear operator stored as a square matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DimensionMismatch("matrix entries must be finite")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"operator dim {self.dim}, vector shape {v.shape}")
        return self.matrix @ v

    def to_dense(self) -> np.ndarray:
        return self.matrix


@dataclass
class FourierDiagonalOperator:
    """An operator diagonalized by the discrete Fourier transform.

    ``apply`` computes ifft(symbol * fft(v)).real.  The symbol must be
    conjugate-symmetric (symbol[k] == conj(symbol[-k mod N])) so that real
    input maps to real output.
    """

    symbol: np.ndarray
    _dense: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        s = np.asarray(self.symbol, dtype=complex)
        if s.ndim != 1 or s.size == 0:
            raise DimensionMismatch("symbol must be a nonempty 1-d array")
        n = s.size
        mirrored = np.conj(s[(-np.arange(n)) % n])
        scale = max(np.abs(s).max(), 1.0)
        if np.abs(s - mirrored).max() > 1e-12 * scale:
            raise DimensionMismatch("symbol is not conjugate-symmetric; operator would not preserve real vectors")
        self.symbol = s

    @property
    def dim(self) -> int:
        return self.symbol.size

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"operator dim {self.dim}, vector shape {v.shape}")
        return np.fft.ifft(self.symbol * np.fft.fft(v)).real

    def to_dense(self) -> np.ndarray:
        if self._dense is None:
            eye = np.eye(self.dim)
            self._dense = np.fft.ifft(self.symbol[:, None] * np.fft.fft(eye, axis=0), axis=0).real
        return self._dense


LinearOperator = Union[DenseOperator, FourierDiagonalOperator]


class SolveBackend(enum.Enum):
    DENSE_LU = "dense_lu"
    FOURIER_DIAGONAL = "fourier_diagonal"


def _guarded_lu(matrix: np.ndarray, err: type):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # singularity is reported via the raise below
        lu, piv = lu_factor(matrix)
    scale = np.abs(matrix).max()
    if scale == 0.0 or np.abs(np.diag(lu)).min() < PIVOT_FLOOR * scale:
        raise err(f"pivot below {PIVOT_FLOOR:g} * max|A| while factoring a {matrix.shape[0]}x{matrix.shape[0]} matrix")
    return lu, piv


@dataclass
class LinearSolvePlan:
    """Reusable factorization of J = I - alpha*D*L for a fixed step size."""

    alpha: float
    backend: SolveBackend
    dim: int
    _lu: tuple | None = None
    _recip: np.ndarray | None = None

    def solve(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape != (self.dim,):
            raise DimensionMismatch(f"plan dim {self.dim}, rhs shape {f.shape}")
        if self.backend is SolveBackend.FOURIER_DIAGONAL:
            return np.fft.ifft(self._recip * np.fft.fft(f)).real
        return lu_solve(self._lu, f)


def plan_implicit(structure: LinearOperator, quad: LinearOperator, alpha: float) -> LinearSolvePlan:
    """Factor J = I - alpha * structure * quad once, for reuse across steps.

    When both operators are Fourier-diagonal the product is diagonal too and
    the solve is an elementwise division; otherwise a dense LU is built.
    A denominator or pivot below the breakdown threshold raises
    SingularOperator (the step size alpha is reported).
    """
    if structure.dim != quad.dim:
        raise DimensionMismatch(f"operator dims differ: {structure.dim} vs {quad.dim}")
    n = structure.dim
    if isinstance(structure, FourierDiagonalOperator) and isinstance(quad, FourierDiagonalOperator):
        denom = 1.0 - alpha * structure.symbol * quad.symbol
        if np.abs(denom).min() < PIVOT_FLOOR:
            raise SingularOperator(f"I - alpha*D*L has a vanishing Fourier symbol at alpha={alpha:g}")
        return LinearSolvePlan(alpha=alpha, backend=SolveBackend.FOURIER_DIAGONAL, dim=n, _recip=1.0 / denom)
    matrix = np.eye(n) - alpha * (structure.to_dense() @ quad.to_dense())
    try:
        lu = _guarded_lu(matrix, SingularOperator)
    except SingularOperator:
        raise SingularOperator(f"I - alpha*D*L is singular at alpha={alpha:g}") from None
    return LinearSolvePlan(alpha=alpha, backend=SolveBackend.DENSE_LU, dim=n, _lu=lu)


def solve_dense(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """LU solve with partial pivoting; raises SingularMatrix on breakdown."""
    matrix = np.asarray(matrix, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {matrix.shape}")
    if rhs.shape[0] != matrix.shape[0]:
        raise DimensionMismatch(f"matrix dim {matrix.shape[0]}, rhs shape {rhs.shape}")
    lu = _guarded_lu(matrix, SingularMatrix)
    return lu_solve(lu, rhs)
