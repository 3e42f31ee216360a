"""Binary-addition-tree enumerators and subsystem configuration tables.

Both enumerators work like an odometer that counts from the first
coordinate: the first coordinate is bumped until it saturates, then it is
cleared and the carry moves to the next coordinate.  The forward BAT
saturates at 1 per coordinate; the upper-bound BAT saturates when the
coordinate sum reaches ``u - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .model import Aggregates, CountVector, SubsystemSpec, subsystem_aggregates


@dataclass(frozen=True)
class EnumerationOrder:
    """A materialized enumeration: vectors in emission order."""

    vectors: tuple[CountVector, ...]
    mu: int
    cap: int

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self) -> Iterator[CountVector]:
        return iter(self.vectors)

    def __getitem__(self, k: int) -> CountVector:
        return self.vectors[k]


def iter_forward_bat(mu: int) -> Iterator[CountVector]:
    """Yield all ``2**mu`` binary vectors, zero vector first."""
    if mu < 1:
        raise ValueError(f"mu must be >= 1, got {mu}")
    x = [0] * mu
    yield tuple(x)
    i = 0
    while True:
        if x[i] == 0:
            x[i] = 1
            i = 0
            yield tuple(x)
        elif i == mu - 1:
            return
        else:
            x[i] = 0
            i += 1


def iter_upper_bound_bat(mu: int, u: int) -> Iterator[CountVector]:
    """Yield every nonnegative ``mu``-tuple with coordinate sum below ``u``.

    The zero vector comes first; there are ``comb(mu + u - 1, mu)`` vectors.
    """
    if mu < 1:
        raise ValueError(f"mu must be >= 1, got {mu}")
    if u < 2:
        raise ValueError(f"u must be > 1, got {u}")
    x = [0] * mu
    total = 0
    i = 0
    yield tuple(x)
    while True:
        if total < u - 1:
            x[i] += 1
            total += 1
            i = 0
            yield tuple(x)
        elif i == mu - 1:
            return
        else:
            total -= x[i]
            x[i] = 0
            i += 1


def forward_bat(mu: int) -> EnumerationOrder:
    return EnumerationOrder(tuple(iter_forward_bat(mu)), mu, 2)


def upper_bound_bat(mu: int, u: int) -> EnumerationOrder:
    return EnumerationOrder(tuple(iter_upper_bound_bat(mu, u)), mu, u)


def prefix_restrict(order: EnumerationOrder, j: int) -> EnumerationOrder:
    """Distinct ``j``-coordinate prefixes of ``order`` in first-seen order."""
    if not 1 <= j <= order.mu:
        raise ValueError(f"j must be in 1..{order.mu}, got {j}")
    seen: dict[CountVector, None] = {}
    for v in order.vectors:
        seen.setdefault(v[:j], None)
    return EnumerationOrder(tuple(seen), j, order.cap)


@dataclass(frozen=True)
class ScoredConfig:
    config: CountVector
    aggregates: Aggregates

    @property
    def reliability(self) -> float:
        return self.aggregates.reliability

    @property
    def weight(self) -> int:
        return self.aggregates.weight

    @property
    def cost(self) -> int:
        return self.aggregates.cost


@dataclass(frozen=True)
class SubsystemTable:
    """Admissible configurations of one subsystem, in enumeration order."""

    subsystem_index: int
    entries: tuple[ScoredConfig, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ScoredConfig]:
        return iter(self.entries)

    def restrict(self, keep) -> SubsystemTable:
        """Table with only the entries whose position has ``keep[k]`` true."""
        return SubsystemTable(
            self.subsystem_index, tuple(e for e, k in zip(self.entries, keep) if k)
        )

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([e.weight for e in self.entries], dtype=np.int64)

    @cached_property
    def costs(self) -> np.ndarray:
        return np.array([e.cost for e in self.entries], dtype=np.int64)

    @cached_property
    def reliabilities(self) -> np.ndarray:
        return np.array([e.reliability for e in self.entries], dtype=np.float64)


def build_subsystem_table(spec: SubsystemSpec, subsystem_index: int = 0) -> SubsystemTable:
    """Score every count vector whose total lies in ``[min_total, max_total]``."""
    entries = tuple(
        ScoredConfig(x, subsystem_aggregates(x, spec))
        for x in iter_upper_bound_bat(spec.arity, spec.max_total + 1)
        if sum(x) >= spec.min_total
    )
    return SubsystemTable(subsystem_index, entries)
