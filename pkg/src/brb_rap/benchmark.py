"""The 33-variant Fyffe benchmark and its regression runner.

Component data and the published optima ship as JSON under
``brb_rap/data/fyffe``.  Variant ``i`` uses cost ceiling 130 and weight
ceiling ``158 + i``; its reliability floor is the published heuristic
value for that variant.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable

import numpy as np

from .errors import RapError
from .model import ComponentOption, RapInstance, SubsystemSpec
from .solver import SolverOptions, reconstruct, solve

IDS = range(1, 34)
RELIABILITY_TOLERANCE = 1e-11


@dataclass(frozen=True)
class FyffeVariant:
    id: int
    weight_ceiling: int
    cost_ceiling: int
    r_lb: float
    expected_reliability: float
    expected_weight: int
    expected_cost: int
    expected_solution: str
    flags: tuple[str, ...] = ()


def _data_text(name: str) -> str:
    return resources.files("brb_rap").joinpath("data", "fyffe", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def base_instance() -> RapInstance:
    """Fyffe component data with the variant-1 ceilings and floor."""
    return RapInstance.from_dict(json.loads(_data_text("instance.json")))


@lru_cache(maxsize=None)
def variants() -> tuple[FyffeVariant, ...]:
    doc = json.loads(_data_text("expected.json"))
    return tuple(
        FyffeVariant(**{**v, "flags": tuple(v.get("flags", ()))}) for v in doc["variants"]
    )


def variant(id: int) -> FyffeVariant:
    if id not in IDS:
        raise ValueError(f"Fyffe variant id must be in 1..33, got {id}")
    return variants()[id - 1]


def fyffe_instance(id: int, *, float32_components: bool = False) -> RapInstance:
    """Instance for variant ``id``.

    ``float32_components`` rounds each component reliability to the
    nearest float32 first; the published optima were evaluated that way.
    """
    v = variant(id)
    inst = base_instance().replace(
        weight_ceiling=v.weight_ceiling, cost_ceiling=v.cost_ceiling, reliability_lb=v.r_lb
    )
    return round_reliabilities_to_float32(inst) if float32_components else inst


def round_reliabilities_to_float32(instance: RapInstance) -> RapInstance:
    subsystems = tuple(
        SubsystemSpec(
            tuple(
                ComponentOption(float(np.float32(o.reliability)), o.cost, o.weight)
                for o in s.options
            ),
            s.min_total,
            s.max_total,
        )
        for s in instance.subsystems
    )
    return instance.replace(subsystems=subsystems)


@dataclass(frozen=True)
class RegressionResult:
    id: int
    passed: bool
    reliability: float | None = None
    weight: int | None = None
    cost: int | None = None
    solution: str | None = None
    wall_time: float = 0.0
    reliability_error: float | None = None
    weight_ok: bool = False
    cost_ok: bool = False
    same_solution: bool = False
    error: str | None = None


def check_variant(
    id: int,
    options: SolverOptions | None = None,
    tolerance: float = RELIABILITY_TOLERANCE,
    float32_components: bool = False,
) -> RegressionResult:
    """Solve one variant and compare with the published optimum."""
    v = variant(id)
    inst = fyffe_instance(id, float32_components=float32_components)
    started = time.perf_counter()
    try:
        report = solve(inst, options or SolverOptions())
    except RapError as exc:
        return RegressionResult(id, False, wall_time=time.perf_counter() - started, error=str(exc))
    elapsed = time.perf_counter() - started
    if report.optimum is None:
        return RegressionResult(id, False, wall_time=elapsed, error=f"no solution ({report.outcome})")
    agg = report.optimal_aggregates
    text = reconstruct(report)
    err = agg.reliability - v.expected_reliability
    weight_ok = agg.weight == v.expected_weight
    cost_ok = agg.cost == v.expected_cost
    return RegressionResult(
        id=id,
        passed=abs(err) <= tolerance and weight_ok and cost_ok,
        reliability=agg.reliability,
        weight=agg.weight,
        cost=agg.cost,
        solution=text,
        wall_time=elapsed,
        reliability_error=err,
        weight_ok=weight_ok,
        cost_ok=cost_ok,
        same_solution=text == v.expected_solution,
    )


def _check_star(args) -> RegressionResult:
    return check_variant(*args)


def run_regression(
    ids: Iterable[int] = IDS,
    options: SolverOptions | None = None,
    tolerance: float = RELIABILITY_TOLERANCE,
    float32_components: bool = False,
    workers: int = 1,
) -> list[RegressionResult]:
    """Check each variant in ``ids``; results come back in the order given.

    A solver failure on one variant is recorded in its result and does not
    stop the run.
    """
    ids = list(ids)
    for i in ids:
        variant(i)
    jobs = [(i, options, tolerance, float32_components) for i in ids]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_check_star, jobs))
    return [check_variant(*job) for job in jobs]
