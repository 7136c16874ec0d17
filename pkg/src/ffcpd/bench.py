"""Benchmark harness: measured search effort next to the cost model."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import cost
from .field import Field
from .instances import random_instance
from .solver import solve


@dataclass
class BenchConfig:
    field: Field
    shape: tuple[int, int, int]
    rank: int
    strategies: tuple[str, ...] = ("fix_one", "fix_two")
    instances: int = 10
    seed: int = 0
    solve_rank: int | None = None  # defaults to the witness rank
    threads: int = 1
    symmetry_breaking: bool = True


@dataclass
class BenchRow:
    strategy: str
    seed: int
    found: bool
    candidates: int
    elapsed: float
    stats: dict = dc_field(default_factory=dict)


@dataclass
class BenchReport:
    config: BenchConfig
    rows: list[BenchRow]
    predicted: dict  # strategy -> exact constant factor (or None)

    def totals(self) -> dict:
        out = {}
        for row in self.rows:
            acc = out.setdefault(row.strategy, {"candidates": 0, "elapsed": 0.0, "found": 0})
            acc["candidates"] += row.candidates
            acc["elapsed"] += row.elapsed
            acc["found"] += row.found
        return out

    def render(self) -> str:
        cfg = self.config
        r = cfg.solve_rank if cfg.solve_rank is not None else cfg.rank
        lines = [
            f"field=GF({cfg.field.name}) shape={cfg.shape} witness_rank={cfg.rank} "
            f"solve_rank={r} instances={cfg.instances}"
        ]
        for strategy, tot in self.totals().items():
            pred = self.predicted.get(strategy)
            pred_s = cost.sig3(pred) if pred is not None else "-"
            lines.append(
                f"{strategy:8s} found={tot['found']}/{cfg.instances} candidates={tot['candidates']} "
                f"time={tot['elapsed']:.3f}s predicted_C={pred_s}"
            )
        return "\n".join(lines)


def bench(config: BenchConfig) -> BenchReport:
    r = config.solve_rank if config.solve_rank is not None else config.rank
    rows = []
    for n in range(config.instances):
        seed = config.seed + n
        t, _ = random_instance(config.field, config.shape, config.rank, seed)
        for strategy in config.strategies:
            rep = solve(
                t,
                r,
                strategy,
                symmetry_breaking=config.symmetry_breaking,
                threads=config.threads,
            )
            rows.append(BenchRow(strategy, seed, rep.found, rep.stats["candidates"], rep.elapsed, dict(rep.stats)))
    predicted = {}
    for strategy in config.strategies:
        try:
            predicted[strategy] = cost.constant(strategy, max(r, 1), config.field.q)
        except ValueError:
            predicted[strategy] = None
    return BenchReport(config, rows, predicted)
