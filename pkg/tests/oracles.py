"""Independent oracles used by the test suite.

Everything here re-derives results from first principles (dense assembly,
fixed-point iteration, brute-force summation) so that library outputs are
checked against a second, structurally different route.
"""
import numpy as np

from savflow.core import AugmentedState, GradientSystem, StructureKind, phi
from savflow.linalg import DenseOperator
from savflow.rk import gauss2_tableau


def operator_matrix(sys, u_bar):
    """Dense matrix of the augmented operator, assembled from scratch.

    Rows: u-block D[I, phi_plus, phi_minus]; r rows are weighted inner
    products of each phi with the u-block rows.
    """
    w = sys.inner_weight
    phi_p = phi(sys, u_bar, "plus")
    phi_m = phi(sys, u_bar, "minus")
    d = sys.structure_op.to_dense()
    top = np.hstack([d, (d @ phi_p)[:, None], (d @ phi_m)[:, None]])
    return np.vstack([top, w * (phi_p @ top), w * (phi_m @ top)])


def hessian_matrix(sys):
    """Matrix of the quadratic energy gradient: blockdiag(L, 2, -2)."""
    n = sys.dim
    h = np.zeros((n + 2, n + 2))
    h[:n, :n] = sys.quad_op.to_dense()
    h[n, n] = 2.0
    h[n + 1, n + 1] = -2.0
    return h


def monolithic_cn_step(sys, z, u_bar, dt):
    """Solve the full (n+2)-dimensional midpoint system in one dense solve.

    (I - dt/2 A H) z1 = (I + dt/2 A H) z0 with A the augmented operator at
    u_bar and H the quadratic-energy matrix.  No block elimination.
    """
    a = operator_matrix(sys, u_bar) @ hessian_matrix(sys)
    m = np.eye(a.shape[0])
    z0 = z.to_vector()
    z1 = np.linalg.solve(m - 0.5 * dt * a, (m + 0.5 * dt * a) @ z0)
    return AugmentedState.from_vector(z1)


def gauss2_nonlinear_step(sys, z, dt, tol=1e-14, max_iter=500):
    """Fully implicit two-stage Gauss step by fixed-point iteration.

    Stage operators are evaluated at each stage's own state (nothing
    frozen), so this is the genuinely nonlinear scheme.  Returns the new
    state and the converged stage vectors; raises if iteration stalls.
    """
    tab = gauss2_tableau()
    h = hessian_matrix(sys)
    zv = z.to_vector()
    stages = np.array([zv, zv])

    def rhs(stage_vec):
        return operator_matrix(sys, stage_vec[: sys.dim]) @ (h @ stage_vec)

    for _ in range(max_iter):
        f = np.array([rhs(stages[0]), rhs(stages[1])])
        new = np.array([
            zv + dt * (tab.a[i, 0] * f[0] + tab.a[i, 1] * f[1]) for i in range(2)
        ])
        delta = np.abs(new - stages).max()
        stages = new
        if delta <= tol * max(1.0, np.abs(stages).max()):
            f = np.array([rhs(stages[0]), rhs(stages[1])])
            z1 = zv + dt * (tab.b[0] * f[0] + tab.b[1] * f[1])
            return AugmentedState.from_vector(z1), stages
    raise AssertionError(f"fixed point did not converge within {max_iter} iterations at dt={dt:g}")


def random_small_system(rng, n):
    """Random conservative system of dimension n with quadratic energy parts.

    D is a random skew matrix, L = B^T B is positive semidefinite, and the
    split energies are 1/2 u^T S u with S positive semidefinite, so every
    state is admissible with unit shifts.
    """
    a = rng.standard_normal((n, n))
    d = a - a.T
    b = rng.standard_normal((n, n)) / np.sqrt(n)
    quad = b.T @ b
    s_plus = _random_psd(rng, n)
    s_minus = _random_psd(rng, n)
    return GradientSystem(
        dim=n,
        structure_op=DenseOperator(d),
        structure_kind=StructureKind.SKEW_ADJOINT,
        quad_op=DenseOperator(quad),
        energy_plus=lambda u, s=s_plus: 0.5 * float(u @ s @ u),
        energy_minus=lambda u, s=s_minus: 0.5 * float(u @ s @ u),
        grad_plus=lambda u, s=s_plus: s @ u,
        grad_minus=lambda u, s=s_minus: s @ u,
    )


def _random_psd(rng, n):
    b = rng.standard_normal((n, n)) / np.sqrt(n)
    return b.T @ b


def fit_loglog_slope(dts, errors):
    """Plain least-squares slope of log(err) against log(dt), no windowing."""
    return float(np.polyfit(np.log(np.asarray(dts, float)),
                            np.log(np.asarray(errors, float)), 1)[0])


def state_diff_norm(sys, a, b):
    """Norm of the difference of two augmented states in the z inner product."""
    from savflow.core import z_norm

    return z_norm(sys, AugmentedState.from_vector(a.to_vector() - b.to_vector()))
