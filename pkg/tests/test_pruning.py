import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brb_rap.enumeration import build_subsystem_table
from brb_rap.errors import InfeasibleInstanceError
from brb_rap.model import Aggregates, ComponentOption, RapInstance, SubsystemSpec
from brb_rap.oracle import random_instance
from brb_rap.pruning import (
    GRID_CELL_LIMIT,
    SuffixBounds,
    admit_partial,
    compute_suffix_bounds,
    dominance_filter,
    dominance_filter_table,
    filter_by_rlb,
    pareto_mask,
    pareto_mask_reference,
)

from conftest import read_csv

FYFFE_RLB = 0.954565


def _bounds_rows(bounds, tables):
    return [
        {
            "k": str(k + 1),
            "size": str(len(t)),
            "min_weight": str(bounds.min_weight[k]),
            "min_cost": str(bounds.min_cost[k]),
            "suffix_weight": str(bounds.suffix_weight[k]),
            "suffix_cost": str(bounds.suffix_cost[k]),
        }
        for k, t in enumerate(tables)
    ]


def test_suffix_bounds_on_unfiltered_tables(fyffe_tables):
    bounds = compute_suffix_bounds(fyffe_tables)
    assert _bounds_rows(bounds, fyffe_tables) == read_csv("bounds_unfiltered.csv")
    assert (bounds.min_weight[0], bounds.min_cost[0]) == (2, 1)
    assert (bounds.suffix_weight[0], bounds.suffix_cost[0]) == (66, 33)
    assert (bounds.min_weight[12], bounds.min_cost[12]) == (5, 2)
    assert (bounds.suffix_weight[12], bounds.suffix_cost[12]) == (6, 4)


def test_suffix_bounds_after_reliability_floor(fyffe_tables):
    filtered = [filter_by_rlb(t, FYFFE_RLB) for t in fyffe_tables]
    bounds = compute_suffix_bounds(filtered)
    assert _bounds_rows(bounds, filtered) == read_csv("bounds_after_floor.csv")


def test_single_subsystem_has_empty_suffix():
    spec = SubsystemSpec((ComponentOption(0.9, 2, 3),), 1, 2)
    bounds = compute_suffix_bounds([build_subsystem_table(spec)])
    assert bounds == SuffixBounds((3,), (2,), (0,), (0,))


def test_empty_table_names_the_subsystem(fyffe_tables):
    empty = fyffe_tables[2].restrict([False] * len(fyffe_tables[2]))
    with pytest.raises(InfeasibleInstanceError) as info:
        compute_suffix_bounds([fyffe_tables[0], fyffe_tables[1], empty])
    assert info.value.subsystem == 2


def test_reliability_floor_on_first_subsystem(fyffe_tables):
    table = fyffe_tables[0]
    kept = filter_by_rlb(table, FYFFE_RLB)
    assert len(kept) == 490
    assert (1, 0, 0, 0) not in {e.config for e in kept}
    assert filter_by_rlb(table, 0.0) == table


def test_reliability_floor_keeps_equal_entries(fyffe_tables):
    table = fyffe_tables[0]
    r = table.entries[0].reliability
    assert table.entries[0] in filter_by_rlb(table, r).entries


def test_dominance_examples_from_first_table(fyffe_tables):
    by_config = {e.config: e for e in fyffe_tables[0]}
    a, b = by_config[(3, 0, 0, 0)], by_config[(0, 1, 0, 1)]
    assert (a.weight, a.cost, round(a.reliability, 4)) == (9, 3, 0.999)
    assert (b.weight, b.cost, round(b.reliability, 4)) == (9, 3, 0.9965)
    assert dominance_filter([a, b]) == [a]
    survivors = dominance_filter_table(fyffe_tables[0])
    assert a in survivors.entries and b not in survivors.entries


def test_dominance_small_cases():
    items = [(2, 2, 0.95), (3, 2, 0.94)]
    kw = dict(weight=lambda t: t[0], cost=lambda t: t[1], reliability=lambda t: t[2])
    assert dominance_filter(items, **kw) == [(2, 2, 0.95)]
    items = [(6, 2, 0.99), (7, 2, 0.993)]
    assert dominance_filter(items, **kw) == items
    assert dominance_filter([], **kw) == []


def test_dominance_keeps_first_exact_duplicate():
    mask = pareto_mask([1, 1, 1], [1, 1, 1], [0.5, 0.5, 0.5])
    assert mask.tolist() == [True, False, False]


def test_admit_partial_examples(fyffe):
    bounds = compute_suffix_bounds(
        [build_subsystem_table(s, i) for i, s in enumerate(fyffe.subsystems)]
    )
    assert not admit_partial(Aggregates(0.99, 100, 1), 1, bounds, fyffe, r_lb=None)
    assert admit_partial(Aggregates(0.99, 93, 97), 1, bounds, fyffe.replace(reliability_lb=None))
    assert not admit_partial(Aggregates(0.99, 94, 1), 1, bounds, fyffe.replace(reliability_lb=None))
    assert admit_partial(
        Aggregates(0.5, fyffe.weight_ceiling, fyffe.cost_ceiling), 14, bounds,
        fyffe.replace(reliability_lb=None),
    )
    assert not admit_partial(Aggregates(0.95, 10, 10), 3, bounds, fyffe.replace(reliability_lb=FYFFE_RLB))
    assert not admit_partial(Aggregates(0.95, 10, 10), 3, bounds, fyffe)


# Dominance versus the quadratic reference

triples = st.lists(
    st.tuples(st.integers(0, 6), st.integers(0, 6), st.sampled_from([0.1, 0.5, 0.5, 0.7, 0.9, 0.99])),
    max_size=60,
)


def _kw():
    return dict(weight=lambda t: t[0], cost=lambda t: t[1], reliability=lambda t: t[2])


def _dominates(a, b):
    return a[0] <= b[0] and a[1] <= b[1] and a[2] >= b[2]


@given(triples)
def test_dominance_matches_reference(items):
    w, c, r = (np.array([t[k] for t in items]) for k in range(3))
    if items:
        assert pareto_mask(w, c, r).tolist() == pareto_mask_reference(w, c, r).tolist()


@given(triples)
def test_dominance_is_idempotent_and_minimal(items):
    kept = dominance_filter(items, **_kw())
    assert dominance_filter(kept, **_kw()) == kept
    for i, a in enumerate(kept):
        assert not any(_dominates(b, a) for j, b in enumerate(kept) if j != i)
    for item in items:
        assert any(_dominates(s, item) for s in kept)


@pytest.mark.parametrize("n", [1, 10, 1000, 10_000])
@pytest.mark.parametrize("path", ["grid", "sweep"])
def test_dominance_paths_match_reference_up_to_ten_thousand(n, path):
    rng = np.random.default_rng(n)
    if path == "grid":
        w = rng.integers(0, 60, n)
        c = rng.integers(0, 60, n)
    else:
        # Distinct float coordinates make the cell grid too large for the fast path.
        w = rng.random(n).round(4)
        c = rng.random(n).round(4)
        assert len(np.unique(w)) * len(np.unique(c)) > GRID_CELL_LIMIT or n < 3000
    r = rng.choice(np.linspace(0.5, 0.99, 40), n)
    mask = pareto_mask(w, c, r)
    assert mask.tolist() == pareto_mask_reference(w, c, r).tolist()
    again = pareto_mask(w[mask], c[mask], r[mask])
    assert again.all()


# Exhaustive soundness on small random instances

def _full_product(tables):
    """Aggregates of every full allocation, flattened in row-major stage order."""
    weight, cost, rel = np.zeros(1, np.int64), np.zeros(1, np.int64), np.ones(1)
    for t in tables:
        weight = (weight[:, None] + t.weights[None, :]).ravel()
        cost = (cost[:, None] + t.costs[None, :]).ravel()
        rel = (rel[:, None] * t.reliabilities[None, :]).ravel()
    return weight, cost, rel


def _small_instances(limit=20_000):
    for seed in range(100):
        inst = random_instance(seed)
        tables = [build_subsystem_table(s, i) for i, s in enumerate(inst.subsystems)]
        if np.prod([len(t) for t in tables]) <= limit:
            yield seed, inst, tables


def _floor(rel, feasible, seed):
    if not feasible.any():
        return 0.5
    best = rel[feasible].max()
    return [best, best * 0.999, float(np.quantile(rel[feasible], 0.5))][seed % 3]


def test_admit_partial_rejections_have_no_feasible_completion():
    checked = rejected = 0
    for seed, inst, tables in _small_instances():
        weight, cost, rel = _full_product(tables)
        ok = (weight <= inst.weight_ceiling) & (cost <= inst.cost_ceiling)
        r_lb = _floor(rel, ok, seed)
        inst = inst.replace(reliability_lb=r_lb)
        good = ok & (rel >= r_lb)
        bounds = compute_suffix_bounds(tables)
        sizes = [len(t) for t in tables]
        for k in range(1, len(tables) + 1):
            tail = int(np.prod(sizes[k:]))
            completable = good.reshape(-1, tail).any(axis=1)
            pw, pc, pr = _full_product(tables[:k])
            for p in range(len(pw)):
                agg = Aggregates(float(pr[p]), int(pw[p]), int(pc[p]))
                checked += 1
                if not admit_partial(agg, k, bounds, inst):
                    rejected += 1
                    assert not completable[p], (seed, k, p)
    assert rejected > 0 and checked > rejected


def test_reliability_floor_removals_are_in_no_qualifying_solution():
    removed_total = 0
    for seed, inst, tables in _small_instances():
        weight, cost, rel = _full_product(tables)
        ok = (weight <= inst.weight_ceiling) & (cost <= inst.cost_ceiling)
        r_lb = _floor(rel, ok, seed)
        good = ok & (rel >= r_lb)
        sizes = [len(t) for t in tables]
        grid = good.reshape(sizes)
        for i, t in enumerate(tables):
            kept = {e.config for e in filter_by_rlb(t, r_lb)}
            for j, e in enumerate(t):
                if e.config not in kept:
                    removed_total += 1
                    assert not np.take(grid, j, axis=i).any(), (seed, i, e.config)
    assert removed_total > 0
