"""Domain types for series-parallel redundancy allocation.

A *configuration* of a subsystem is a count vector: how many copies of each
component type are placed in parallel.  Subsystem reliability is
``1 - prod_j (1 - r_j) ** x_j``; weights and costs are plain integer sums.
A system is the series connection of its subsystems, so reliabilities
multiply and weights/costs add.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from decimal import Decimal
from os import PathLike
from typing import Any, Iterable, Sequence

from .errors import CodecError, InstanceError, SolutionParseError, StructuralError

CountVector = tuple[int, ...]

DEFAULT_MIN_TOTAL = 1
DEFAULT_MAX_TOTAL = 8


@dataclass(frozen=True)
class ComponentOption:
    """One purchasable component type."""

    reliability: float
    cost: int
    weight: int

    def __post_init__(self):
        if not 0.0 < self.reliability <= 1.0:
            raise InstanceError(f"reliability must be in (0, 1], got {self.reliability!r}")
        if isinstance(self.cost, bool) or not isinstance(self.cost, int) or self.cost < 0:
            raise InstanceError(f"cost must be a nonnegative integer, got {self.cost!r}")
        if isinstance(self.weight, bool) or not isinstance(self.weight, int) or self.weight < 0:
            raise InstanceError(f"weight must be a nonnegative integer, got {self.weight!r}")


@dataclass(frozen=True)
class SubsystemSpec:
    """Component types available to one subsystem and its redundancy limits.

    Option order matters: it fixes the coordinate order of count vectors.
    """

    options: tuple[ComponentOption, ...]
    min_total: int = DEFAULT_MIN_TOTAL
    max_total: int = DEFAULT_MAX_TOTAL

    def __post_init__(self):
        object.__setattr__(self, "options", tuple(self.options))
        if not self.options:
            raise InstanceError("a subsystem needs at least one component option")
        if not 1 <= self.min_total <= self.max_total:
            raise InstanceError(
                f"need 1 <= min_total <= max_total, got {self.min_total}, {self.max_total}"
            )

    @property
    def arity(self) -> int:
        return len(self.options)


@dataclass(frozen=True)
class RapInstance:
    """A complete redundancy allocation problem."""

    subsystems: tuple[SubsystemSpec, ...]
    cost_ceiling: int
    weight_ceiling: int
    reliability_lb: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        if not self.subsystems:
            raise InstanceError("an instance needs at least one subsystem")
        if self.cost_ceiling < 0 or self.weight_ceiling < 0:
            raise InstanceError("cost and weight ceilings must be nonnegative")
        if self.reliability_lb is not None and not 0.0 <= self.reliability_lb < 1.0:
            raise InstanceError(f"reliability_lb must be in [0, 1), got {self.reliability_lb!r}")

    @property
    def n(self) -> int:
        return len(self.subsystems)

    def replace(self, **changes: Any) -> RapInstance:
        fields = {
            "subsystems": self.subsystems,
            "cost_ceiling": self.cost_ceiling,
            "weight_ceiling": self.weight_ceiling,
            "reliability_lb": self.reliability_lb,
        }
        fields.update(changes)
        return RapInstance(**fields)

    @classmethod
    def from_dict(cls, doc: dict) -> RapInstance:
        """Build an instance from the JSON document layout.

        Raises:
            InstanceError: on missing keys, wrong types or violated invariants.
        """
        try:
            subsystems = []
            for sub in doc["subsystems"]:
                options = [
                    ComponentOption(float(o["r"]), _as_int(o["c"]), _as_int(o["w"]))
                    for o in sub["options"]
                ]
                subsystems.append(
                    SubsystemSpec(
                        tuple(options),
                        _as_int(sub.get("min_total", DEFAULT_MIN_TOTAL)),
                        _as_int(sub.get("max_total", DEFAULT_MAX_TOTAL)),
                    )
                )
            r_lb = doc.get("reliability_lb")
            return cls(
                tuple(subsystems),
                _as_int(doc["cost_ceiling"]),
                _as_int(doc["weight_ceiling"]),
                None if r_lb is None else float(r_lb),
            )
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"malformed instance document: {exc!r}") from exc

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {
            "subsystems": [
                {
                    "options": [
                        {"r": o.reliability, "c": o.cost, "w": o.weight} for o in s.options
                    ],
                    "min_total": s.min_total,
                    "max_total": s.max_total,
                }
                for s in self.subsystems
            ],
            "cost_ceiling": self.cost_ceiling,
            "weight_ceiling": self.weight_ceiling,
        }
        if self.reliability_lb is not None:
            doc["reliability_lb"] = self.reliability_lb
        return doc


def _as_int(value: Any) -> int:
    if isinstance(value, bool):
        raise TypeError(f"expected an integer, got {value!r}")
    if isinstance(value, float):
        if not value.is_integer():
            raise TypeError(f"expected an integer, got {value!r}")
        return int(value)
    if not isinstance(value, int):
        raise TypeError(f"expected an integer, got {value!r}")
    return value


def load_instance(path: str | PathLike) -> RapInstance:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"{path}: not valid JSON ({exc})") from exc
    return RapInstance.from_dict(doc)


@dataclass(frozen=True)
class Aggregates:
    reliability: float
    weight: int
    cost: int


@dataclass(frozen=True)
class SolutionVector:
    """One count vector per subsystem plus the system aggregates."""

    configs: tuple[CountVector, ...]
    aggregates: Aggregates


@dataclass(frozen=True)
class Feasibility:
    """Outcome of a feasibility check; truthy iff no constraint is violated."""

    violations: tuple[str, ...] = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.feasible


def subsystem_aggregates(config: Sequence[int], spec: SubsystemSpec) -> Aggregates:
    """Reliability, weight and cost of one subsystem configuration.

    The failure probability is built by repeated multiplication rather than
    ``**`` so results are bit-stable across platforms.
    """
    if len(config) != spec.arity:
        raise StructuralError(
            f"config has {len(config)} counts but the subsystem has {spec.arity} options"
        )
    failure = 1.0
    weight = cost = 0
    for count, option in zip(config, spec.options):
        if count < 0:
            raise StructuralError(f"negative count {count}")
        q = 1.0 - option.reliability
        for _ in range(count):
            failure *= q
        weight += count * option.weight
        cost += count * option.cost
    return Aggregates(1.0 - failure, weight, cost)


def combine(parts: Iterable[Aggregates]) -> Aggregates:
    """Series composition: multiply reliabilities left to right, add the rest."""
    reliability = 1.0
    weight = cost = 0
    for part in parts:
        reliability *= part.reliability
        weight += part.weight
        cost += part.cost
    return Aggregates(reliability, weight, cost)


def _configs_of(solution: SolutionVector | Sequence[Sequence[int]]) -> Sequence[Sequence[int]]:
    return solution.configs if isinstance(solution, SolutionVector) else solution


def system_aggregates(
    solution: SolutionVector | Sequence[Sequence[int]], instance: RapInstance
) -> Aggregates:
    configs = _configs_of(solution)
    if len(configs) != instance.n:
        raise StructuralError(
            f"solution has {len(configs)} subsystem configs, instance has {instance.n}"
        )
    return combine(subsystem_aggregates(x, s) for x, s in zip(configs, instance.subsystems))


def make_solution(configs: Iterable[Sequence[int]], instance: RapInstance) -> SolutionVector:
    frozen = tuple(tuple(int(v) for v in x) for x in configs)
    return SolutionVector(frozen, system_aggregates(frozen, instance))


def is_feasible(solution: SolutionVector | Sequence[Sequence[int]], instance: RapInstance) -> Feasibility:
    """Check the cost and weight ceilings and every subsystem's count range.

    Violations are reported as ``"cost"``, ``"weight"``, and
    ``"min_total[i]"`` / ``"max_total[i]"`` with a zero-based subsystem index.
    """
    configs = _configs_of(solution)
    agg = solution.aggregates if isinstance(solution, SolutionVector) else system_aggregates(configs, instance)
    violations = []
    if agg.cost > instance.cost_ceiling:
        violations.append("cost")
    if agg.weight > instance.weight_ceiling:
        violations.append("weight")
    for i, (x, spec) in enumerate(zip(configs, instance.subsystems)):
        total = sum(x)
        if total < spec.min_total:
            violations.append(f"min_total[{i}]")
        elif total > spec.max_total:
            violations.append(f"max_total[{i}]")
    return Feasibility(tuple(violations))


_SEPARATOR = re.compile(r"[\s,]+")


def parse_solution_string(text: str, instance: RapInstance) -> SolutionVector:
    """Decode ``"0030 200 ..."`` (comma and/or whitespace separated groups)."""
    stripped = text.strip().strip("()")
    groups = [g for g in _SEPARATOR.split(stripped) if g]
    if len(groups) != instance.n:
        raise SolutionParseError(
            f"expected {instance.n} groups, found {len(groups)}", position=None
        )
    configs = []
    for i, (group, spec) in enumerate(zip(groups, instance.subsystems)):
        if len(group) != spec.arity:
            raise SolutionParseError(
                f"group {i + 1} ({group!r}) has {len(group)} digits, expected {spec.arity}",
                position=i,
            )
        if not all(ch in "0123456789" for ch in group):
            raise SolutionParseError(f"group {i + 1} ({group!r}) has a non-digit", position=i)
        configs.append(tuple(int(ch) for ch in group))
    return make_solution(configs, instance)


def format_solution_string(solution: SolutionVector | Sequence[Sequence[int]]) -> str:
    groups = []
    for x in _configs_of(solution):
        if any(not 0 <= v <= 9 for v in x):
            raise CodecError(f"count vector {tuple(x)} has an entry outside 0..9")
        groups.append("".join(str(v) for v in x))
    return " ".join(groups)


def format_scientific(value: int, digits: int = 6) -> str:
    """Render an integer like ``1.20893E+72`` (``digits`` significant digits)."""
    return f"{Decimal(value):.{digits - 1}E}"


def space_size_component_based(instance: RapInstance) -> int:
    """Size of the position-by-position encoding: each slot holds a type or nothing."""
    return math.prod((s.arity + 1) ** s.max_total for s in instance.subsystems)


def subsystem_space_size(spec: SubsystemSpec) -> int:
    m = spec.arity
    return sum(math.comb(k + m - 1, m - 1) for k in range(spec.min_total, spec.max_total + 1))


def space_size_number_based(instance: RapInstance) -> int:
    return math.prod(subsystem_space_size(s) for s in instance.subsystems)
