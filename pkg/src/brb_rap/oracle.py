"""Exhaustive reference solver and seeded random instances.

The brute-force solver shares nothing with the staged solver except the
model module: it builds its own per-subsystem candidate lists with
``itertools.product`` and evaluates the full cartesian product, with no
pruning of any kind.  Agreement between the two is therefore evidence
rather than a tautology.

Random instances come from a 64-bit linear congruential generator with
Knuth's MMIX constants (see :class:`Lcg`), so the same seed produces the
same instance in any language.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .errors import CodecError, OracleRefusal
from .model import (
    ComponentOption,
    RapInstance,
    SubsystemSpec,
    format_solution_string,
    make_solution,
    space_size_number_based,
    subsystem_aggregates,
)
from .solver import BELOW_RLB, INFEASIBLE, OPTIMAL, SolveReport

ORACLE_LIMIT = 10**7


def _candidates(spec: SubsystemSpec):
    configs = [
        x
        for x in itertools.product(range(spec.max_total + 1), repeat=spec.arity)
        if spec.min_total <= sum(x) <= spec.max_total
    ]
    aggs = [subsystem_aggregates(x, spec) for x in configs]
    return (
        configs,
        np.array([a.weight for a in aggs], dtype=np.int64),
        np.array([a.cost for a in aggs], dtype=np.int64),
        np.array([a.reliability for a in aggs], dtype=np.float64),
    )


def brute_force_solve(
    instance: RapInstance, limit: int = ORACLE_LIMIT, use_rlb: bool = False
) -> SolveReport:
    """Maximize reliability by evaluating every allocation.

    The reliability floor is ignored unless ``use_rlb`` is set, in which
    case allocations below it are treated as infeasible.  Ties are broken
    like :func:`brb_rap.solver.solve`: lower cost, lower weight, then the
    smaller solution string.

    Raises:
        OracleRefusal: if the number-based space exceeds ``limit``.
    """
    size = space_size_number_based(instance)
    if size > limit:
        raise OracleRefusal(size, limit)
    started = time.perf_counter()
    subs = [_candidates(s) for s in instance.subsystems]

    # Left-to-right broadcasting keeps the reliability product in subsystem order.
    weight = np.zeros(1, dtype=np.int64)
    cost = np.zeros(1, dtype=np.int64)
    rel = np.ones(1, dtype=np.float64)
    for _, w, c, r in subs:
        weight = (weight[:, None] + w[None, :]).ravel()
        cost = (cost[:, None] + c[None, :]).ravel()
        rel = (rel[:, None] * r[None, :]).ravel()

    feasible = (weight <= instance.weight_ceiling) & (cost <= instance.cost_ceiling)
    r_lb = instance.reliability_lb if use_rlb else None
    if r_lb is not None:
        feasible &= rel >= r_lb
    elapsed = time.perf_counter() - started
    if not feasible.any():
        outcome = BELOW_RLB if r_lb is not None else INFEASIBLE
        return SolveReport(None, None, (), elapsed, outcome, r_lb)

    idx = np.flatnonzero(feasible)
    idx = idx[rel[idx] == rel[idx].max()]
    idx = idx[cost[idx] == cost[idx].min()]
    idx = idx[weight[idx] == weight[idx].min()]
    shape = [len(s[0]) for s in subs]
    options = []
    for flat in idx.tolist():
        picks = np.unravel_index(flat, shape)
        options.append([subs[k][0][p] for k, p in enumerate(picks)])
    best = min(options, key=_tie_key)
    solution = make_solution(best, instance)
    elapsed = time.perf_counter() - started
    return SolveReport(solution, solution.aggregates, (), elapsed, OPTIMAL, r_lb)


def _tie_key(configs) -> str:
    try:
        return format_solution_string(configs)
    except CodecError:
        return repr(configs)


class Lcg:
    """64-bit LCG ``state = a * state + c (mod 2**64)``, Knuth's MMIX constants.

    Each draw returns the top 31 bits of the new state.
    """

    A = 6364136223846793005
    C = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.A * self.state + self.C) & self.MASK
        return self.state >> 33

    def randint(self, lo: int, hi: int) -> int:
        """Integer in ``[lo, hi]``."""
        return lo + self.next() % (hi - lo + 1)


@dataclass(frozen=True)
class InstanceLimits:
    n: tuple[int, int] = (2, 4)
    arity: tuple[int, int] = (1, 3)
    max_total: tuple[int, int] = (1, 4)
    reliability_pct: tuple[int, int] = (50, 99)
    cost: tuple[int, int] = (1, 9)
    weight: tuple[int, int] = (1, 9)


def random_instance(seed: int, limits: InstanceLimits | None = None) -> RapInstance:
    """Deterministic small instance for oracle comparisons.

    Reliabilities are whole percentages.  Each ceiling is drawn between the
    cheapest possible total and the midpoint of the cheapest and dearest
    totals, shifted down by up to 3 so some instances are infeasible.
    """
    lim = limits or InstanceLimits()
    rng = Lcg(seed)
    subsystems = []
    for _ in range(rng.randint(*lim.n)):
        arity = rng.randint(*lim.arity)
        max_total = rng.randint(*lim.max_total)
        min_total = 1 if rng.randint(0, 3) else rng.randint(1, max_total)
        options = tuple(
            ComponentOption(
                rng.randint(*lim.reliability_pct) / 100,
                rng.randint(*lim.cost),
                rng.randint(*lim.weight),
            )
            for _ in range(arity)
        )
        subsystems.append(SubsystemSpec(options, min_total, max_total))

    def ceiling(values) -> int:
        low = sum(s.min_total * min(values(o) for o in s.options) for s in subsystems)
        high = sum(s.max_total * max(values(o) for o in s.options) for s in subsystems)
        return max(0, low - 3 + rng.randint(0, (high - low) // 2 + 3))

    cost_ceiling = ceiling(lambda o: o.cost)
    weight_ceiling = ceiling(lambda o: o.weight)
    return RapInstance(tuple(subsystems), cost_ceiling, weight_ceiling)
