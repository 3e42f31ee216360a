"""Stage-by-stage exact solver.

The candidate set after stage ``k`` holds partial solutions over
subsystems ``1..k``.  Each stage extends every candidate by every entry of
the next subsystem's table, discards extensions that cannot be completed
within the ceilings (or fall below the reliability floor), and keeps only
the non-dominated survivors.  After the last stage the most reliable
candidate is optimal.

Candidates are held column-wise in numpy arrays: integer weight and cost,
binary64 reliability, and an ``(N, k)`` matrix of table-entry indices from
which the count vectors are recovered.
"""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass
from os import PathLike
from typing import Any

import numpy as np

from .enumeration import ScoredConfig, SubsystemTable, build_subsystem_table
from .errors import CodecError, ResourceLimitError, StructuralError
from .model import (
    Aggregates,
    CountVector,
    RapInstance,
    SolutionVector,
    format_solution_string,
    make_solution,
)
from .pruning import (
    SuffixBounds,
    admit_mask,
    compute_suffix_bounds,
    dominance_filter_table,
    filter_by_rlb,
    pareto_mask,
)

log = logging.getLogger(__name__)

DEFAULT_ITEM_CAP = 50_000_000
# Candidates materialized at once while extending a stage.
_CHUNK = 2_000_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
BELOW_RLB = "below_rlb"

STATS_HEADER = ("stage", "generated", "after_bounds", "after_dominance")


@dataclass(frozen=True)
class SolverOptions:
    use_rlb: bool = True
    use_dominance: bool = True
    use_dynamic_bounds: bool = True
    collect_stats: bool = True
    max_items: int = DEFAULT_ITEM_CAP


@dataclass(frozen=True)
class PartialSolution:
    configs: tuple[CountVector, ...]
    aggregates: Aggregates

    @property
    def stage(self) -> int:
        return len(self.configs)


EMPTY_PARTIAL = PartialSolution((), Aggregates(1.0, 0, 0))


def concat(partial: PartialSolution, entry: ScoredConfig, stage: int | None = None) -> PartialSolution:
    """Append one subsystem configuration to a prefix.

    ``stage`` is the 1-based stage ``entry`` belongs to; when given it must
    directly follow the prefix.
    """
    if stage is not None and stage != partial.stage + 1:
        raise StructuralError(
            f"cannot append a stage-{stage} entry to a prefix of {partial.stage} stages"
        )
    a, b = partial.aggregates, entry.aggregates
    return PartialSolution(
        partial.configs + (entry.config,),
        Aggregates(a.reliability * b.reliability, a.weight + b.weight, a.cost + b.cost),
    )


@dataclass(frozen=True)
class StageStats:
    stage: int
    generated: int
    after_bounds: int
    after_dominance: int


@dataclass(frozen=True)
class SolveReport:
    optimum: SolutionVector | None
    optimal_aggregates: Aggregates | None
    stage_stats: tuple[StageStats, ...] = ()
    wall_time: float = 0.0
    outcome: str = OPTIMAL
    reliability_lb: float | None = None

    @property
    def found(self) -> bool:
        return self.optimum is not None


def _prepare_tables(instance: RapInstance, options: SolverOptions, r_lb: float | None):
    tables = [build_subsystem_table(s, i) for i, s in enumerate(instance.subsystems)]
    if r_lb is not None:
        tables = [filter_by_rlb(t, r_lb) for t in tables]
    if options.use_dominance:
        tables = [dominance_filter_table(t) for t in tables]
    return tables


def _limits(instance: RapInstance, bounds: SuffixBounds, stage: int, dynamic: bool):
    if not dynamic:
        return instance.weight_ceiling, instance.cost_ceiling
    return (
        instance.weight_ceiling - bounds.suffix_weight[stage],
        instance.cost_ceiling - bounds.suffix_cost[stage],
    )


def solve(instance: RapInstance, options: SolverOptions | None = None) -> SolveReport:
    """Find a maximum-reliability allocation within the cost and weight ceilings.

    When ``options.use_dynamic_bounds`` is off, prefixes are still checked
    against the bare ceilings, so the switches change the work done but
    never the answer.

    Raises:
        ResourceLimitError: if a stage would generate more than
            ``options.max_items`` candidates.
    """
    options = options or SolverOptions()
    started = time.perf_counter()
    r_lb = instance.reliability_lb if options.use_rlb else None

    tables = _prepare_tables(instance, options, r_lb)
    stats: list[StageStats] = []

    def record(stage, generated, after_bounds, after_dominance):
        log.debug(
            "stage %d: generated %d, after bounds %d, after dominance %d",
            stage, generated, after_bounds, after_dominance,
        )
        if options.collect_stats:
            stats.append(StageStats(stage, generated, after_bounds, after_dominance))

    def report(optimum: SolutionVector | None) -> SolveReport:
        elapsed = time.perf_counter() - started
        if optimum is None:
            outcome = BELOW_RLB if r_lb is not None else INFEASIBLE
            return SolveReport(None, None, tuple(stats), elapsed, outcome, r_lb)
        return SolveReport(optimum, optimum.aggregates, tuple(stats), elapsed, OPTIMAL, r_lb)

    if any(len(t) == 0 for t in tables):
        return report(None)
    bounds = compute_suffix_bounds(tables)

    first = tables[0]
    w_lim, c_lim = _limits(instance, bounds, 0, options.use_dynamic_bounds)
    keep = admit_mask(first.weights, first.costs, first.reliabilities, w_lim, c_lim, r_lb)
    weights, costs, rels = first.weights[keep], first.costs[keep], first.reliabilities[keep]
    index = np.flatnonzero(keep).astype(np.int32)[:, None]
    generated, after_bounds = len(first), len(rels)
    if options.use_dominance and after_bounds:
        weights, costs, rels, index = _dominance(weights, costs, rels, index)
    record(1, generated, after_bounds, len(rels))

    for stage in range(1, instance.n):
        if len(rels) == 0:
            break
        table = tables[stage]
        generated = len(rels) * len(table)
        if generated > options.max_items:
            raise ResourceLimitError(
                f"stage {stage + 1} would generate {generated} candidates "
                f"(cap {options.max_items}); enable the dominance rule or the dynamic bounds",
                stage=stage + 1,
                size=generated,
                cap=options.max_items,
            )
        w_lim, c_lim = _limits(instance, bounds, stage, options.use_dynamic_bounds)
        weights, costs, rels, index = _extend(
            weights, costs, rels, index, table, w_lim, c_lim, r_lb
        )
        after_bounds = len(rels)
        if options.use_dominance and after_bounds:
            weights, costs, rels, index = _dominance(weights, costs, rels, index)
        record(stage + 1, generated, after_bounds, len(rels))

    if len(rels) == 0:
        return report(None)
    configs = _pick_optimum(costs, weights, rels, index, tables)
    return report(make_solution(configs, instance))


def _dominance(weights, costs, rels, index):
    keep = pareto_mask(weights, costs, rels)
    return weights[keep], costs[keep], rels[keep], index[keep]


def _extend(weights, costs, rels, index, table: SubsystemTable, w_lim, c_lim, r_lb):
    """All admissible extensions of the candidate set by the entries of ``table``.

    Output order: table entry outermost, existing candidate innermost.
    """
    n_set = len(rels)
    step = max(1, _CHUNK // n_set)
    parts_w, parts_c, parts_r, parts_parent, parts_entry = [], [], [], [], []
    for lo in range(0, len(table), step):
        hi = min(lo + step, len(table))
        tw = table.weights[lo:hi, None]
        tc = table.costs[lo:hi, None]
        tr = table.reliabilities[lo:hi, None]
        w = (weights[None, :] + tw).ravel()
        c = (costs[None, :] + tc).ravel()
        r = (rels[None, :] * tr).ravel()
        keep = np.flatnonzero(admit_mask(w, c, r, w_lim, c_lim, r_lb))
        parts_w.append(w[keep])
        parts_c.append(c[keep])
        parts_r.append(r[keep])
        parts_parent.append((keep % n_set).astype(np.int32))
        parts_entry.append((keep // n_set + lo).astype(np.int32))
    parent = np.concatenate(parts_parent)
    entry = np.concatenate(parts_entry)
    new_index = np.empty((len(parent), index.shape[1] + 1), dtype=np.int32)
    new_index[:, :-1] = index[parent]
    new_index[:, -1] = entry
    return (
        np.concatenate(parts_w),
        np.concatenate(parts_c),
        np.concatenate(parts_r),
        new_index,
    )


def _pick_optimum(costs, weights, rels, index, tables) -> list[CountVector]:
    """Most reliable candidate; ties go to lower cost, then lower weight,
    then the lexicographically smallest solution string."""
    best = np.flatnonzero(rels == rels.max())
    best = best[costs[best] == costs[best].min()]
    best = best[weights[best] == weights[best].min()]

    def configs_of(row):
        return [tables[k].entries[e].config for k, e in enumerate(index[row].tolist())]

    return min((configs_of(row) for row in best.tolist()), key=_solution_key)


def _solution_key(configs) -> str:
    try:
        return format_solution_string(configs)
    except CodecError:
        return repr(configs)


def reconstruct(report: SolveReport) -> str:
    """Solution string of the optimum in ``report``."""
    if report.optimum is None:
        raise ValueError(f"no optimum to reconstruct (outcome: {report.outcome})")
    return format_solution_string(report.optimum)


def write_stats_csv(report: SolveReport, path: str | PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(STATS_HEADER)
        for row in report.stage_stats:
            writer.writerow((row.stage, row.generated, row.after_bounds, row.after_dominance))


def report_to_dict(report: SolveReport) -> dict[str, Any]:
    """JSON-ready view of a report (see ``data/report.schema.json``)."""
    doc: dict[str, Any] = {
        "outcome": report.outcome,
        "reliability_lb": report.reliability_lb,
        "wall_time": report.wall_time,
        "stage_stats": [
            {
                "stage": s.stage,
                "generated": s.generated,
                "after_bounds": s.after_bounds,
                "after_dominance": s.after_dominance,
            }
            for s in report.stage_stats
        ],
        "optimum": None,
    }
    if report.optimum is not None:
        agg = report.optimum.aggregates
        try:
            text = format_solution_string(report.optimum)
        except CodecError:
            text = None
        doc["optimum"] = {
            "reliability": agg.reliability,
            "weight": agg.weight,
            "cost": agg.cost,
            "configs": [list(x) for x in report.optimum.configs],
            "solution": text,
        }
    return doc
