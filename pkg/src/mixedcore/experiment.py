"""Monte-Carlo estimation of empirical 2-core thresholds.

A sweep builds ``trials_per_density`` random hypergraphs at each edge
density ``c = m / n`` and counts the ones whose 2-core is non-empty
(failures). Fitting a logistic curve to the failure rates gives the
empirical threshold as the curve's midpoint.

Every trial has its own seed, ``SeedSequence((base_seed, density_index,
trial_index))``, so results do not depend on how trials are scheduled.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .hypergraph import InvalidParams, generate_mixed, peel
from .numerics import SigmoidFit, fit_sigmoid
from .threshold import EdgeMix

U64 = (1 << 64) - 1


@dataclass(frozen=True)
class SweepConfig:
    mix: EdgeMix
    n: int
    densities: tuple[float, ...]
    trials_per_density: int
    base_seed: int = 0
    parallelism: int = 1

    def __post_init__(self):
        object.__setattr__(self, "densities", tuple(float(c) for c in self.densities))
        if not self.densities:
            raise InvalidParams("need at least one density")
        if any(b <= a for a, b in zip(self.densities, self.densities[1:])):
            raise InvalidParams("densities must be strictly increasing")
        if any(c < 0 for c in self.densities):
            raise InvalidParams("densities must be non-negative")
        if self.trials_per_density < 1:
            raise InvalidParams("trials_per_density must be >= 1")
        if self.n < self.mix.max_size:
            raise InvalidParams(f"n={self.n} is smaller than the largest edge size")


@dataclass(frozen=True)
class DensityRecord:
    c: float
    trials: int
    failures: int

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials


@dataclass
class SweepResult:
    records: list[DensityRecord]
    config: SweepConfig
    wall_time: float = field(default=0.0, compare=False)

    @property
    def densities(self) -> list[float]:
        return [r.c for r in self.records]

    @property
    def rates(self) -> list[float]:
        return [r.failure_rate for r in self.records]


def density_grid(center: float, span: float, steps: int) -> tuple[float, ...]:
    """``steps`` equidistant densities covering ``center +- span/2``."""
    if steps < 1:
        raise InvalidParams("steps must be >= 1")
    if steps == 1:
        return (center,)
    if not span > 0:
        raise InvalidParams("span must be positive")
    lo = center - span / 2
    return tuple(lo + span * i / (steps - 1) for i in range(steps))


def trial_seed(base_seed: int, density_index: int, trial_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence((base_seed & U64, density_index, trial_index))


def run_trial(mix: EdgeMix, n: int, m: int, seed: np.random.SeedSequence) -> bool:
    """True if the random hypergraph has a non-empty 2-core."""
    return peel(generate_mixed(n, m, mix, seed)).core_edge_count > 0


def _run_density(args) -> int:
    mix, n, c, di, trials, base_seed = args
    m = int(math.floor(c * n + 0.5))
    return sum(run_trial(mix, n, m, trial_seed(base_seed, di, t)) for t in range(trials))


def _run_chunk(args) -> list[bool]:
    mix, n, m, base_seed, di, t0, t1 = args
    return [run_trial(mix, n, m, trial_seed(base_seed, di, t)) for t in range(t0, t1)]


def run_sweep(config: SweepConfig) -> SweepResult:
    start = time.perf_counter()
    cfg = config
    trials = cfg.trials_per_density
    if cfg.parallelism <= 1:
        failures = [_run_density((cfg.mix, cfg.n, c, di, trials, cfg.base_seed))
                    for di, c in enumerate(cfg.densities)]
    else:
        chunk = max(1, math.ceil(trials / (2 * cfg.parallelism)))
        tasks = []
        for di, c in enumerate(cfg.densities):
            m = int(math.floor(c * cfg.n + 0.5))
            for t0 in range(0, trials, chunk):
                tasks.append((cfg.mix, cfg.n, m, cfg.base_seed, di, t0, min(t0 + chunk, trials)))
        failures = [0] * len(cfg.densities)
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            for task, out in zip(tasks, pool.map(_run_chunk, tasks)):
                failures[task[4]] += sum(out)
    records = [DensityRecord(c, trials, f) for c, f in zip(cfg.densities, failures)]
    return SweepResult(records, cfg, time.perf_counter() - start)


def estimate_threshold(sweep: SweepResult) -> SigmoidFit:
    """Logistic fit of failure rate against density; ``x`` is the threshold estimate.

    Raises ``DegenerateFit`` when every density has the same failure rate.
    """
    cs = sweep.densities
    rates = sweep.rates
    init_x = next((c for c, r in zip(cs, rates) if r >= 0.5), 0.5 * (cs[0] + cs[-1]))
    init_y = (cs[-1] - cs[0]) / 10 if len(cs) > 1 else 1e-3
    return fit_sigmoid(list(zip(cs, rates)), init_x, init_y)


CSV_HEADER = "c,trials,failures,failure_rate"


def emit_csv(sweep: SweepResult, fit: Optional[SigmoidFit] = None) -> str:
    lines = [CSV_HEADER]
    lines += [f"{r.c:.6f},{r.trials},{r.failures},{r.failure_rate:.6f}" for r in sweep.records]
    if fit is not None:
        lines += [f"# x={fit.x:.6f}", f"# y={fit.y:.6f}", f"# ss_res={fit.ss_res:.6f}"]
    lines.append(f"# seed={sweep.config.base_seed}")
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> tuple[list[DensityRecord], dict[str, str]]:
    """Inverse of ``emit_csv``: density records plus the ``# key=value`` comments."""
    records: list[DensityRecord] = []
    comments: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            comments[key.strip()] = value.strip()
            continue
        if line == CSV_HEADER:
            continue
        c, trials, failures, _ = line.split(",")
        records.append(DensityRecord(float(c), int(trials), int(failures)))
    return records, comments
