import numpy as np
import pytest

from savflow.core import original_energy
from savflow.errors import DomainError
from savflow.kepler import (
    KEPLER_PERIOD,
    kepler_initial_state,
    kepler_reference,
    kepler_system,
    kepler_vector_field,
)

PROBE_STATE = np.array([0.2, 0.0, 0.0, 0.3])


def test_structure_matrix_exactly_skew():
    d = kepler_system().structure_op.to_dense()
    assert np.array_equal(d.T, -d)


def test_field_at_probe_state():
    sys = kepler_system()
    got = sys.apply_structure(sys.original_gradient(PROBE_STATE))
    assert np.abs(got - np.array([0.0, 0.3, -25.0, 0.0])).max() <= 1e-12


def test_energy_at_probe_state():
    assert abs(original_energy(kepler_system(), PROBE_STATE) - (-4.955)) <= 1e-14


def test_gradient_matches_finite_difference():
    sys = kepler_system()
    rng = np.random.default_rng(3)
    h = 1e-6
    for _ in range(10):
        w = rng.standard_normal(4)
        w[0] += 2.0 * np.sign(w[0]) if abs(w[0]) < 0.5 else 0.0  # stay away from r=0
        grad = sys.grad_minus(w)
        for k in range(4):
            e = np.zeros(4)
            e[k] = h
            fd = (sys.energy_minus(w + e) - sys.energy_minus(w - e)) / (2.0 * h)
            assert abs(grad[k] - fd) <= 1e-6 * max(1.0, abs(fd))


def test_decomposition_reproduces_equations_of_motion():
    # pins L = diag(0,0,1,1): any other quadratic part breaks this identity
    sys = kepler_system()
    rng = np.random.default_rng(9)
    for _ in range(20):
        w = rng.standard_normal(4)
        if w[0] ** 2 + w[1] ** 2 < 0.01:
            w[0] += 1.0
        got = sys.apply_structure(sys.original_gradient(w))
        want = kepler_vector_field(w)
        assert np.abs(got - want).max() <= 1e-12 * max(1.0, np.abs(want).max())


def test_vector_field_collision_guard():
    with pytest.raises(DomainError):
        kepler_vector_field(np.array([0.0, 0.0, 1.0, 1.0]))


def test_initial_state_orbit_constants():
    w0 = kepler_initial_state()
    assert np.array_equal(w0, np.array([0.2, 0.0, 0.0, 3.0]))
    energy = original_energy(kepler_system(), w0)
    # semi-major axis -1/(2E) = 1 gives period 2*pi; eccentricity 0.8
    assert abs(energy - (-0.5)) <= 1e-14
    angular_momentum = w0[0] * w0[3] - w0[1] * w0[2]
    ecc = np.sqrt(1.0 + 2.0 * energy * angular_momentum**2)
    assert abs(ecc - 0.8) <= 1e-13


def test_reference_at_zero():
    assert np.abs(kepler_reference(0.0) - kepler_initial_state()).max() <= 1e-12


def test_reference_periodicity():
    w = kepler_reference(KEPLER_PERIOD)
    assert np.abs(w - kepler_initial_state()).max() <= 1e-9


def test_reference_energy_constant():
    sys = kepler_system()
    ts = np.linspace(0.0, KEPLER_PERIOD, 64)
    states = kepler_reference(ts)
    assert states.shape == (64, 4)
    energies = np.array([original_energy(sys, w) for w in states])
    assert np.abs(energies - energies[0]).max() <= 1e-10


def test_reference_rejects_negative_time():
    with pytest.raises(DomainError):
        kepler_reference(-1.0)
