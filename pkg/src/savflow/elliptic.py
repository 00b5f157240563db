"""Complete elliptic integral and Jacobi cn via arithmetic-geometric means.

Algorithms follow https://dlmf.nist.gov/19.8 and https://dlmf.nist.gov/22.20:
K(k) = pi / (2 agm(1, k')), and the amplitude of the Jacobi functions comes
from the descending Gauss transformation applied backwards through the AGM
sequence.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, DomainError

_AGM_TOL = 1e-15
_MAX_ITER = 64


def _check_modulus(k: float) -> float:
    k = float(k)
    if not 0.0 <= k < 1.0:
        raise DomainError(f"modulus must satisfy 0 <= k < 1, got {k!r}")
    return k


def elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind, K(0) = pi/2."""
    k = _check_modulus(k)
    a, b = 1.0, math.sqrt(1.0 - k * k)
    for _ in range(_MAX_ITER):
        if abs(a - b) <= _AGM_TOL:
            return math.pi / (2.0 * a)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    raise ConvergenceError(f"AGM did not converge within {_MAX_ITER} iterations for k={k!r}")


def _agm_scheme(k: float):
    # AGM sequence with error terms c_n; terminates when c_n is negligible
    a = [1.0]
    b = [math.sqrt(1.0 - k * k)]
    c = [k]
    for _ in range(_MAX_ITER):
        if abs(c[-1]) <= _AGM_TOL:
            return a, c
        a_next = 0.5 * (a[-1] + b[-1])
        b_next = math.sqrt(a[-1] * b[-1])
        c.append(0.5 * (a[-1] - b[-1]))
        a.append(a_next)
        b.append(b_next)
    raise ConvergenceError(f"AGM did not converge within {_MAX_ITER} iterations for k={k!r}")


def _sn_cn_dn(x, k: float):
    """Jacobi sn, cn, dn on real arguments (array-valued)."""
    k = _check_modulus(k)
    x = np.asarray(x, dtype=float)
    if k == 0.0:
        return np.sin(x), np.cos(x), np.ones_like(x)
    a, c = _agm_scheme(k)
    n = len(a) - 1
    amp = (2.0**n) * a[n] * x
    amp_prev = amp
    for i in range(n, 0, -1):
        amp_prev = amp
        ratio = np.clip(c[i] / a[i] * np.sin(amp), -1.0, 1.0)
        amp = 0.5 * (amp + np.arcsin(ratio))
    sn = np.sin(amp)
    cn = np.cos(amp)
    if n == 0:
        dn = np.ones_like(cn)
    else:
        dn = cn / np.cos(amp_prev - amp)
    return sn, cn, dn


def jacobi_cn(x, k: float):
    """Jacobi elliptic cn(x | k); reduces to cos(x) at k = 0."""
    scalar = np.isscalar(x)
    cn = _sn_cn_dn(x, k)[1]
    return float(cn) if scalar else cn
