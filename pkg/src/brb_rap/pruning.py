"""Reduction rules: reliability floor, Pareto dominance, suffix-minimum bounds.

All three are lossless for the optimum:

* a configuration (or prefix) below the reliability floor can only make
  the series product smaller, so it never reaches the floor;
* a prefix that is no lighter, no cheaper and no more reliable than some
  other prefix has no completion that beats the same completion of the
  other prefix;
* a prefix whose weight (cost) plus the lightest (cheapest) possible
  completion exceeds the ceiling has no feasible completion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

import numpy as np

from .enumeration import SubsystemTable
from .errors import InfeasibleInstanceError
from .model import Aggregates, RapInstance

T = TypeVar("T")

# Largest (weight x cost) grid the bucketed dominance path will allocate.
GRID_CELL_LIMIT = 4_000_000


@dataclass(frozen=True)
class SuffixBounds:
    """Per-stage minima and suffix sums, indexed by zero-based stage.

    ``suffix_weight[k]`` is the smallest weight any completion of a prefix
    ending at stage ``k`` can add; the last entry is always 0.
    """

    min_weight: tuple[int, ...]
    min_cost: tuple[int, ...]
    suffix_weight: tuple[int, ...]
    suffix_cost: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.min_weight)


def compute_suffix_bounds(tables: Sequence[SubsystemTable]) -> SuffixBounds:
    min_w, min_c = [], []
    for pos, table in enumerate(tables):
        if len(table) == 0:
            raise InfeasibleInstanceError(
                f"subsystem {table.subsystem_index + 1} has no admissible configuration",
                subsystem=table.subsystem_index,
            )
        min_w.append(min(e.weight for e in table))
        min_c.append(min(e.cost for e in table))
    n = len(tables)
    suf_w, suf_c = [0] * n, [0] * n
    for k in range(n - 2, -1, -1):
        suf_w[k] = suf_w[k + 1] + min_w[k + 1]
        suf_c[k] = suf_c[k + 1] + min_c[k + 1]
    return SuffixBounds(tuple(min_w), tuple(min_c), tuple(suf_w), tuple(suf_c))


def filter_by_rlb(table: SubsystemTable, r_lb: float) -> SubsystemTable:
    """Drop entries strictly below ``r_lb``; entries equal to it stay."""
    return table.restrict([e.reliability >= r_lb for e in table])


def admit_partial(
    aggregates: Aggregates,
    stage: int,
    bounds: SuffixBounds,
    instance: RapInstance,
    r_lb: float | None = None,
) -> bool:
    """Can a prefix ending at ``stage`` (1-based) still be completed?

    ``r_lb`` defaults to the instance's reliability floor.
    """
    if r_lb is None:
        r_lb = instance.reliability_lb
    k = stage - 1
    if aggregates.weight + bounds.suffix_weight[k] > instance.weight_ceiling:
        return False
    if aggregates.cost + bounds.suffix_cost[k] > instance.cost_ceiling:
        return False
    if r_lb is not None and aggregates.reliability < r_lb:
        return False
    return True


def admit_mask(
    weight: np.ndarray,
    cost: np.ndarray,
    reliability: np.ndarray,
    weight_limit: int,
    cost_limit: int,
    r_lb: float | None,
) -> np.ndarray:
    """Vectorized form of :func:`admit_partial` with the suffix folded into the limits."""
    mask = (weight <= weight_limit) & (cost <= cost_limit)
    if r_lb is not None:
        mask &= reliability >= r_lb
    return mask


def pareto_mask(weight, cost, reliability) -> np.ndarray:
    """Boolean mask of the items that survive the dominance rule.

    An item is removed when another item has weight <= and cost <= and
    reliability >= it, not all three equal.  Among exact (W, C, R)
    duplicates the first one in input order is kept.  Reliability is
    compared exactly, without tolerance.
    """
    weight = np.asarray(weight)
    cost = np.asarray(cost)
    reliability = np.asarray(reliability, dtype=np.float64)
    n = len(reliability)
    if n == 0:
        return np.zeros(0, dtype=bool)
    if np.issubdtype(weight.dtype, np.integer) and np.issubdtype(cost.dtype, np.integer):
        w0, c0 = int(weight.min()), int(cost.min())
        nw, nc = int(weight.max()) - w0 + 1, int(cost.max()) - c0 + 1
        if nw * nc <= GRID_CELL_LIMIT:
            return _grid_mask(weight - w0, cost - c0, reliability, nw, nc)
    w_unique, w_rank = np.unique(weight, return_inverse=True)
    c_unique, c_rank = np.unique(cost, return_inverse=True)
    if len(w_unique) * len(c_unique) <= GRID_CELL_LIMIT:
        return _grid_mask(w_rank.ravel(), c_rank.ravel(), reliability, len(w_unique), len(c_unique))
    return _sweep_mask(w_rank.ravel(), c_rank.ravel(), reliability, len(c_unique))


def _grid_mask(w_idx, c_idx, reliability, nw: int, nc: int) -> np.ndarray:
    # Bucket items by (weight, cost) cell; only a cell's best reliability can
    # survive, and only if every strictly-dominating cell's best is lower.
    cell = w_idx.astype(np.int64) * nc + c_idx
    best = np.full(nw * nc, -np.inf)
    np.maximum.at(best, cell, reliability)
    grid = best.reshape(nw, nc)
    prefix = np.maximum.accumulate(np.maximum.accumulate(grid, axis=0), axis=1)
    others = np.full((nw, nc), -np.inf)
    others[1:, :] = prefix[:-1, :]
    others[:, 1:] = np.maximum(others[:, 1:], prefix[:, :-1])
    candidate = (reliability == best[cell]) & (reliability > others.ravel()[cell])
    idx = np.flatnonzero(candidate)
    _, first = np.unique(cell[idx], return_index=True)
    mask = np.zeros(len(reliability), dtype=bool)
    mask[idx[first]] = True
    return mask


def _sweep_mask(w_rank, c_rank, reliability, nc: int) -> np.ndarray:
    # Sort by (weight asc, cost asc, reliability desc, input position) and sweep,
    # keeping a Fenwick tree of the best reliability seen at each cost rank.
    n = len(reliability)
    order = np.lexsort((np.arange(n), -reliability, c_rank, w_rank))
    tree = [-np.inf] * (nc + 1)
    mask = np.zeros(n, dtype=bool)
    cr = c_rank.tolist()
    rr = reliability.tolist()
    for i in order.tolist():
        pos = cr[i] + 1
        r = rr[i]
        best = -np.inf
        p = pos
        while p > 0:
            if tree[p] > best:
                best = tree[p]
            p -= p & -p
        if best < r:
            mask[i] = True
        p = pos
        while p <= nc:
            if tree[p] < r:
                tree[p] = r
            p += p & -p
    return mask


def pareto_mask_reference(weight, cost, reliability) -> np.ndarray:
    """Quadratic pairwise dominance check; the test oracle for :func:`pareto_mask`."""
    w = np.asarray(weight)
    c = np.asarray(cost)
    r = np.asarray(reliability, dtype=np.float64)
    n = len(r)
    mask = np.ones(n, dtype=bool)
    for i in range(n):
        weakly = (w <= w[i]) & (c <= c[i]) & (r >= r[i])
        identical = (w == w[i]) & (c == c[i]) & (r == r[i])
        strictly = weakly & ~identical
        earlier_twin = identical.copy()
        earlier_twin[i:] = False
        if strictly.any() or earlier_twin.any():
            mask[i] = False
    return mask


def _attr(name: str) -> Callable:
    return lambda item: getattr(item, name)


def dominance_filter(
    items: Sequence[T],
    weight: Callable[[T], int] = _attr("weight"),
    cost: Callable[[T], int] = _attr("cost"),
    reliability: Callable[[T], float] = _attr("reliability"),
) -> list[T]:
    """Keep the non-dominated items, preserving input order."""
    if not items:
        return []
    mask = pareto_mask(
        np.array([weight(x) for x in items]),
        np.array([cost(x) for x in items]),
        np.array([reliability(x) for x in items], dtype=np.float64),
    )
    return [x for x, keep in zip(items, mask) if keep]


def dominance_filter_table(table: SubsystemTable) -> SubsystemTable:
    if len(table) == 0:
        return table
    return table.restrict(pareto_mask(table.weights, table.costs, table.reliabilities))
