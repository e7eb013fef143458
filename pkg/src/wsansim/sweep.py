"""Paired multi-seed comparison of compensated vs. uncompensated actuators."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .engine import Scenario, run_scenario
from .formats import fmt_float


@dataclass(frozen=True)
class PairResult:
    seed: int
    iae_compensated: float
    iae_uncompensated: float
    packets_lost: int
    max_abs_y_compensated: float
    max_abs_y_uncompensated: float


@dataclass(frozen=True)
class ArmStats:
    median: float
    q1: float
    q3: float


@dataclass(frozen=True)
class SweepResult:
    pairs: tuple[PairResult, ...]
    compensated: ArmStats
    uncompensated: ArmStats

    @property
    def ratio_of_medians(self) -> float:
        return self.compensated.median / self.uncompensated.median


def run_pair(sc: Scenario, seed: int) -> PairResult:
    comp = run_scenario(sc.with_overrides(seed=seed, compensate=True)).summary
    base = run_scenario(sc.with_overrides(seed=seed, compensate=False)).summary
    # Same seed and stream order, so both arms lose the same packets.
    assert comp.packets_lost == base.packets_lost
    return PairResult(
        seed=seed,
        iae_compensated=comp.final_iae,
        iae_uncompensated=base.final_iae,
        packets_lost=comp.packets_lost,
        max_abs_y_compensated=comp.max_abs_y,
        max_abs_y_uncompensated=base.max_abs_y,
    )


def _arm_stats(values) -> ArmStats:
    q1, med, q3 = np.percentile(np.asarray(values, dtype=float), [25, 50, 75])
    return ArmStats(median=float(med), q1=float(q1), q3=float(q3))


def run_sweep(sc: Scenario, n_seeds: int, jobs: int = 1) -> SweepResult:
    """Run seeds ``sc.seed .. sc.seed + n_seeds - 1`` in both arms."""
    if n_seeds < 1:
        raise ValueError(f"need at least one seed, got {n_seeds}")
    seeds = [(sc.seed + i) % 2**64 for i in range(n_seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            pairs = list(pool.map(run_pair, [sc] * n_seeds, seeds))
    else:
        pairs = [run_pair(sc, s) for s in seeds]
    pairs.sort(key=lambda p: p.seed)
    return SweepResult(
        pairs=tuple(pairs),
        compensated=_arm_stats([p.iae_compensated for p in pairs]),
        uncompensated=_arm_stats([p.iae_uncompensated for p in pairs]),
    )


SWEEP_HEADER = (
    "seed,iae_compensated,iae_uncompensated,packets_lost,"
    "max_abs_y_compensated,max_abs_y_uncompensated"
)


def format_sweep_csv(result: SweepResult) -> str:
    rows = [SWEEP_HEADER]
    for p in result.pairs:
        rows.append(
            f"{p.seed},{fmt_float(p.iae_compensated)},{fmt_float(p.iae_uncompensated)},"
            f"{p.packets_lost},{fmt_float(p.max_abs_y_compensated)},"
            f"{fmt_float(p.max_abs_y_uncompensated)}"
        )
    return "\n".join(rows) + "\n"


def format_sweep_summary(result: SweepResult) -> str:
    lines = [f"seeds={len(result.pairs)}"]
    for name, arm in (("compensated", result.compensated), ("uncompensated", result.uncompensated)):
        lines += [
            f"{name}.median_iae={fmt_float(arm.median)}",
            f"{name}.q1_iae={fmt_float(arm.q1)}",
            f"{name}.q3_iae={fmt_float(arm.q3)}",
        ]
    lines.append(f"ratio_of_medians={fmt_float(result.ratio_of_medians)}")
    return "\n".join(lines) + "\n"
