import numpy as np
import pytest

from savflow.core import (
    AugmentedState,
    GradientSystem,
    StructureKind,
    apply_augmented_operator,
    augmented_rhs,
    init_augmented,
    modified_energy,
    modified_gradient,
    original_energy,
    phi,
    z_inner,
    z_norm,
)
from savflow.errors import DimensionMismatch, DomainError
from savflow.kdv import KdvGrid, cnoidal, default_cnoidal_params, kdv_system
from savflow.kepler import kepler_system
from savflow.linalg import DenseOperator

from oracles import random_small_system

RNG = np.random.default_rng(11)
PROBE_STATE = np.array([0.2, 0.0, 0.0, 0.3])


def _benchmark_kdv(n=16):
    params = default_cnoidal_params()
    grid = KdvGrid(n, params.spatial_period)
    return kdv_system(grid), grid, cnoidal(params, grid, 0.0)


def _linear_only_system():
    # constant energies: the flow reduces to u' = D L u
    d = DenseOperator(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    ell = DenseOperator(np.array([[2.0, 0.0], [0.0, 3.0]]))
    zero = lambda u: 0.0
    zero_vec = lambda u: np.zeros_like(u)
    return GradientSystem(
        dim=2,
        structure_op=d,
        structure_kind=StructureKind.SKEW_ADJOINT,
        quad_op=ell,
        energy_plus=zero,
        energy_minus=zero,
        grad_plus=zero_vec,
        grad_minus=zero_vec,
    )


def _random_augmented(sys, rng):
    u = rng.standard_normal(sys.dim)
    return AugmentedState(u=u, r_plus=rng.standard_normal(), r_minus=rng.standard_normal())


def test_init_augmented_kepler_probe_state():
    sys = kepler_system()
    z = init_augmented(sys, PROBE_STATE)
    assert z.r_plus == 1.0
    assert abs(z.r_minus - np.sqrt(6.0)) <= 1e-15


def test_init_augmented_zero_plus_energy_gives_unit_radius():
    sys = random_small_system(RNG, 3)
    zero_sys = GradientSystem(
        dim=sys.dim,
        structure_op=sys.structure_op,
        structure_kind=sys.structure_kind,
        quad_op=sys.quad_op,
        energy_plus=lambda u: 0.0,
        energy_minus=sys.energy_minus,
        grad_plus=lambda u: np.zeros_like(u),
        grad_minus=sys.grad_minus,
    )
    z = init_augmented(zero_sys, RNG.standard_normal(3))
    assert z.r_plus == 1.0


def test_init_augmented_kdv_radii_match_quadrature():
    sys, grid, u0 = _benchmark_kdv()
    z = init_augmented(sys, u0)
    dx = grid.dx
    want_plus = np.sqrt(dx * np.sum(u0**4 - u0**3) + sys.shift_plus)
    want_minus = np.sqrt(dx * np.sum(u0**4) + sys.shift_minus)
    assert abs(z.r_plus - want_plus) <= 1e-14
    assert abs(z.r_minus - want_minus) <= 1e-14


def test_init_augmented_guards():
    sys = kepler_system()
    with pytest.raises(DimensionMismatch):
        init_augmented(sys, np.zeros(3))
    with pytest.raises(DomainError):
        init_augmented(sys, np.array([0.2, 0.0, 0.0, np.nan]))
    # E_plus is identically zero, so the plus radicand equals the shift
    tight = kepler_system(shift_plus=1e-15)
    with pytest.raises(DomainError):
        init_augmented(tight, PROBE_STATE)
    with pytest.raises(DomainError):
        kepler_system(shift_plus=0.0)


def test_phi_zero_energy_is_zero_vector():
    sys = kepler_system()
    assert np.array_equal(phi(sys, PROBE_STATE, "plus"), np.zeros(4))


def test_phi_kepler_probe_value():
    sys = kepler_system()
    got = phi(sys, PROBE_STATE, "minus")
    want = np.array([-25.0 / (2.0 * np.sqrt(6.0)), 0.0, 0.0, 0.0])
    assert np.abs(got - want).max() <= 1e-13


@pytest.mark.parametrize("problem", ["kepler", "kdv"])
def test_phi_matches_finite_difference(problem):
    if problem == "kepler":
        sys = kepler_system()
        u = np.array([0.4, -0.3, 0.2, 1.1])
    else:
        sys, _, u = _benchmark_kdv()
    h = 1e-6
    rng = np.random.default_rng(23)
    for which, energy in (("plus", sys.energy_plus), ("minus", sys.energy_minus)):
        radius = np.sqrt(energy(u) + (sys.shift_plus if which == "plus" else sys.shift_minus))
        for _ in range(5):
            v = rng.standard_normal(sys.dim)
            derivative = (energy(u + h * v) - energy(u - h * v)) / (2.0 * h)
            got = sys.inner(phi(sys, u, which), v) * 2.0 * radius
            assert abs(got - derivative) <= 1e-6 * max(1.0, abs(derivative))


def test_modified_energy_trivial_cancellation():
    sys = kepler_system()
    z = AugmentedState(u=np.zeros(4), r_plus=1.0, r_minus=1.0)
    assert modified_energy(sys, z) == 0.0


def test_modified_energy_kepler_probe_state():
    sys = kepler_system()
    z = init_augmented(sys, PROBE_STATE)
    assert abs(modified_energy(sys, z) - (-4.955)) <= 1e-14


def test_modified_equals_shifted_original_at_init():
    for n in (2, 4, 6):
        sys = random_small_system(RNG, n)
        u0 = 0.3 * RNG.standard_normal(n)
        z = init_augmented(sys, u0)
        want = original_energy(sys, u0) + sys.shift_plus - sys.shift_minus
        assert abs(modified_energy(sys, z) - want) <= 1e-12 * max(1.0, abs(want))


def test_modified_energy_is_quadratic():
    sys = kepler_system()
    for _ in range(10):
        z = _random_augmented(sys, RNG)
        alpha = RNG.uniform(-2.0, 2.0)
        scaled = AugmentedState(u=alpha * z.u, r_plus=alpha * z.r_plus, r_minus=alpha * z.r_minus)
        want = alpha**2 * modified_energy(sys, z)
        assert abs(modified_energy(sys, scaled) - want) <= 1e-12 * max(1.0, abs(want))


def test_original_energy_kepler_probe_state():
    sys = kepler_system()
    assert abs(original_energy(sys, PROBE_STATE) - (-4.955)) <= 1e-14


def test_original_energy_zero_state():
    sys = random_small_system(RNG, 4)
    assert original_energy(sys, np.zeros(4)) == 0.0


def test_original_energy_kdv_matches_summation():
    sys, grid, u = _benchmark_kdv()
    du = sys.apply_quad(u)  # L = -delta^2
    dx = grid.dx
    want = 0.5 * dx * np.dot(u, du) + dx * np.sum(u**4 - u**3) - dx * np.sum(u**4)
    assert abs(original_energy(sys, u) - want) <= 1e-13 * max(1.0, abs(want))


def test_rhs_reduces_to_linear_flow():
    sys = _linear_only_system()
    u = np.array([0.7, -0.4])
    z = init_augmented(sys, u)
    dz = augmented_rhs(sys, z, u)
    want = sys.apply_structure(sys.apply_quad(u))
    assert np.abs(dz.u - want).max() <= 1e-15
    assert dz.r_plus == 0.0 and dz.r_minus == 0.0


def test_rhs_orthogonal_to_modified_gradient():
    # conservation mechanism: d/dt E_mod = <grad, rhs>_Z = 0
    sys = kepler_system()
    rng = np.random.default_rng(31)
    for _ in range(20):
        z = _random_augmented(sys, rng)
        u_bar = np.array([rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0), 0.0, 0.0])
        grad = modified_gradient(sys, z)
        dz = augmented_rhs(sys, z, u_bar)
        assert abs(z_inner(sys, grad, dz)) <= 1e-12 * z_norm(sys, grad) * z_norm(sys, dz)


@pytest.mark.parametrize("problem", ["kepler", "kdv"])
def test_rhs_consistent_with_unaugmented_field(problem):
    # with exact radii and u_bar = u the u-component is D grad E(u)
    rng = np.random.default_rng(5)
    if problem == "kepler":
        sys = kepler_system()
        u = np.array([0.6, 0.5, -0.2, 0.9])
    else:
        sys, _, u = _benchmark_kdv()
        u = u + 0.01 * rng.standard_normal(16)
    z = init_augmented(sys, u)
    dz = augmented_rhs(sys, z, u)
    want = sys.apply_structure(sys.original_gradient(u))
    assert np.abs(dz.u - want).max() <= 1e-12 * max(1.0, np.abs(want).max())


def test_operator_skew_small_sample():
    # the full 100-pair sweep lives in the acceptance suite
    sys = kepler_system()
    rng = np.random.default_rng(17)
    for _ in range(20):
        w = _random_augmented(sys, rng)
        u_bar = np.array([rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0), 0.0, 0.0])
        val = z_inner(sys, w, apply_augmented_operator(sys, u_bar, w))
        assert abs(val) <= 1e-12 * z_norm(sys, w) ** 2


def test_state_vector_round_trip():
    z = AugmentedState(u=np.array([1.0, 2.0]), r_plus=3.0, r_minus=4.0)
    vec = z.to_vector()
    assert np.array_equal(vec, np.array([1.0, 2.0, 3.0, 4.0]))
    back = AugmentedState.from_vector(vec)
    assert np.array_equal(back.u, z.u)
    assert back.r_plus == z.r_plus and back.r_minus == z.r_minus


def test_modified_gradient_components():
    sys = kepler_system()
    z = _random_augmented(sys, RNG)
    grad = modified_gradient(sys, z)
    assert np.abs(grad.u - sys.apply_quad(z.u)).max() <= 1e-15
    assert grad.r_plus == 2.0 * z.r_plus
    assert grad.r_minus == -2.0 * z.r_minus
