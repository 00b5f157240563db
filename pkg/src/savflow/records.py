"""Run records shared by the time-stepping schemes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import AugmentedState, GradientSystem, modified_energy, original_energy
from .errors import ConfigError, SavflowError, StepError


@dataclass
class RunRecord:
    """Time series produced by a scheme run.

    Energies are recorded at every step; state snapshots only at the stride,
    so CSV output has steps/stride + 1 rows.
    """

    dt: float
    steps: int
    stride: int
    e_mod: np.ndarray
    e_orig: np.ndarray
    snapshot_steps: np.ndarray
    snapshots: Optional[np.ndarray]
    final_state: AugmentedState
    metadata: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.steps + 1) * self.dt

    @property
    def relerr_e_mod(self) -> np.ndarray:
        return np.abs(self.e_mod - self.e_mod[0]) / abs(self.e_mod[0])

    @property
    def relerr_e_orig(self) -> np.ndarray:
        return np.abs(self.e_orig - self.e_orig[0]) / abs(self.e_orig[0])

    @property
    def max_relerr_e_mod(self) -> float:
        return float(self.relerr_e_mod.max())

    @property
    def max_relerr_e_orig(self) -> float:
        return float(self.relerr_e_orig.max())

    @property
    def row_count(self) -> int:
        return self.snapshot_steps.size


def run_loop(
    sys: GradientSystem,
    z0: AugmentedState,
    dt: float,
    steps: int,
    advance: Callable[[AugmentedState, int], AugmentedState],
    stride: int = 1,
    snapshots: bool = False,
) -> RunRecord:
    """Drive `advance` for `steps` steps, recording energies and snapshots.

    Scheme errors are re-raised as StepError with the failing step index.
    """
    if steps < 1:
        raise ConfigError(f"steps must be >= 1, got {steps}")
    if stride < 1 or steps % stride != 0:
        raise ConfigError(f"stride must be >= 1 and divide steps, got stride={stride}, steps={steps}")
    if not dt > 0.0:
        raise ConfigError(f"dt must be positive, got {dt}")

    e_mod = np.empty(steps + 1)
    e_orig = np.empty(steps + 1)
    snapshot_steps = np.arange(0, steps + 1, stride)
    snaps = np.empty((snapshot_steps.size, sys.dim)) if snapshots else None

    z = z0
    e_mod[0] = modified_energy(sys, z)
    e_orig[0] = original_energy(sys, z.u)
    if snaps is not None:
        snaps[0] = z.u
    for n in range(steps):
        try:
            z = advance(z, n)
        except SavflowError as err:
            raise StepError(step=n, cause=err) from err
        e_mod[n + 1] = modified_energy(sys, z)
        e_orig[n + 1] = original_energy(sys, z.u)
        if snaps is not None and (n + 1) % stride == 0:
            snaps[(n + 1) // stride] = z.u
    return RunRecord(
        dt=dt,
        steps=steps,
        stride=stride,
        e_mod=e_mod,
        e_orig=e_orig,
        snapshot_steps=snapshot_steps,
        snapshots=snaps,
        final_state=z,
    )
