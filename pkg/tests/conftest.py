"""Shared fixtures: the expensive benchmark runs are computed once per session."""
import time

import pytest

from savflow.harness import ExperimentConfig, run_convergence, run_experiment

CONSERVATION_CASES = [
    ("kepler", "sav-cn-ext"),
    ("kepler", "sav-cn-euler"),
    ("kepler", "sav-rk4"),
    ("kdv", "sav-cn-ext"),
    ("kdv", "sav-cn-euler"),
    ("kdv", "sav-rk4"),
]

CONVERGENCE_CASES = [
    ("kepler", "sav-cn-ext", 7, 14),
    ("kepler", "sav-cn-euler", 7, 14),
    ("kepler", "sav-rk4", 7, 12),
    ("kdv", "sav-cn-ext", 3, 12),
    ("kdv", "sav-cn-euler", 3, 12),
    ("kdv", "sav-rk4", 3, 9),
]


@pytest.fixture(scope="session")
def conservation_data(tmp_path_factory):
    """Ten Kepler periods / one KdV period at dt = T/2^10 for every scheme.

    Returns ({(problem, scheme): RunRecord}, elapsed_seconds).
    """
    out = tmp_path_factory.mktemp("conservation")
    records = {}
    start = time.perf_counter()
    for problem, scheme in CONSERVATION_CASES:
        cfg = ExperimentConfig(
            problem=problem,
            scheme=scheme,
            dt_exp=10,
            periods=10 if problem == "kepler" else 1,
            out=str(out / f"{problem}_{scheme}"),
        )
        record, _ = run_experiment(cfg)
        records[(problem, scheme)] = record
    elapsed = time.perf_counter() - start
    return records, elapsed


@pytest.fixture(scope="session")
def convergence_data(tmp_path_factory):
    """One-period dt sweeps for every scheme/problem pair.

    Returns ({(problem, scheme): ConvergenceTable}, elapsed_seconds).
    """
    out = tmp_path_factory.mktemp("convergence")
    tables = {}
    start = time.perf_counter()
    for problem, scheme, lo, hi in CONVERGENCE_CASES:
        cfg = ExperimentConfig(
            problem=problem,
            scheme=scheme,
            exp_lo=lo,
            exp_hi=hi,
            out=str(out / f"{problem}_{scheme}"),
        )
        table, _ = run_convergence(cfg)
        tables[(problem, scheme)] = table
    elapsed = time.perf_counter() - start
    return tables, elapsed
