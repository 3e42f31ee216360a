import pytest

from brb_rap.errors import OracleRefusal
from brb_rap.model import ComponentOption, RapInstance, SubsystemSpec, is_feasible
from brb_rap.oracle import Lcg, brute_force_solve, random_instance
from brb_rap.solver import BELOW_RLB, INFEASIBLE


def test_toy(toy):
    report = brute_force_solve(toy)
    assert report.optimum.configs == ((2,), (2,))
    assert report.optimal_aggregates.reliability == (1 - 0.1 * 0.1) * (1 - 0.2 * 0.2)


def test_single_subsystem_two_options():
    # Candidates (1,0) C=1, (2,0) C=2, (0,1) C=2, (1,1) C=3, (0,2) C=4.
    # Under C=W=2 the feasible ones are (1,0) .9, (2,0) .99 and (0,1) .95.
    inst = RapInstance(
        (SubsystemSpec((ComponentOption(0.9, 1, 1), ComponentOption(0.95, 2, 1)), 1, 2),),
        cost_ceiling=2,
        weight_ceiling=2,
    )
    report = brute_force_solve(inst)
    assert report.optimum.configs == ((2, 0),)
    assert report.optimal_aggregates.reliability == pytest.approx(0.99, abs=1e-15)


def test_zero_cost_ceiling_is_infeasible(toy):
    report = brute_force_solve(toy.replace(cost_ceiling=0))
    assert report.optimum is None and report.outcome == INFEASIBLE
    floor = brute_force_solve(toy.replace(reliability_lb=0.999), use_rlb=True)
    assert floor.outcome == BELOW_RLB


def test_refuses_large_spaces(fyffe):
    with pytest.raises(OracleRefusal) as info:
        brute_force_solve(fyffe)
    assert info.value.size == 164**8 * 494**6


def test_lcg_reference_values():
    rng = Lcg(0)
    # state_1 = c, state_2 = a*c + c (mod 2**64)
    a, c = Lcg.A, Lcg.C
    s1 = c
    s2 = (a * s1 + c) % 2**64
    assert [rng.next(), rng.next()] == [s1 >> 33, s2 >> 33]
    assert all(3 <= Lcg(7).randint(3, 5) <= 5 for _ in range(20))


def test_random_instance_is_deterministic():
    assert random_instance(42) == random_instance(42)
    assert random_instance(1) != random_instance(2)


def test_seed_sweep_has_enough_feasible_instances():
    feasible = 0
    for seed in range(100):
        inst = random_instance(seed)
        assert isinstance(inst, RapInstance)
        report = brute_force_solve(inst)
        if report.found:
            feasible += 1
            assert is_feasible(report.optimum, inst)
    assert feasible >= 30
