"""Countable index sets at finite truncation, and enumerations of them.

An IndexSet stores the evaluated prefix of a countable set as an ordered
tuple of hashable index objects.  For integer index sets the prefix may be
sparse ("every index from 1 to K" is just the common case); sparse prefixes
are how astronomically indexed features, like an interesting index near
ceil(e^27), stay evaluable.

An Enumeration is a stored bijection between a prefix and {1..K}, validated
on construction; it doubles as a scale via ``as_scale``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .grammar import DomainError, EnumNode
from .logvalue import LogValue

__all__ = ["IndexSet", "Enumeration"]


@dataclass(eq=False)
class IndexSet:
    indices: tuple
    name: str = ""
    _positions: dict = field(default_factory=dict, repr=False)
    _log_array: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.indices:
            raise ValueError("index set prefix must be nonempty")
        if not self._positions:
            self._positions = {x: j + 1 for j, x in enumerate(self.indices)}
        if len(self._positions) != len(self.indices):
            raise ValueError("index set prefix contains duplicates")

    @staticmethod
    def integers(K: int, name: str = "") -> "IndexSet":
        """The contiguous prefix 1..K of the positive integers."""
        if K < 1:
            raise ValueError("prefix length must be at least 1")
        return IndexSet(tuple(range(1, K + 1)), name or f"1..{K}")

    @staticmethod
    def from_indices(indices: Iterable, name: str = "") -> "IndexSet":
        return IndexSet(tuple(indices), name)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def position(self, x) -> int:
        """1-based position of x in the prefix."""
        try:
            return self._positions[x]
        except KeyError:
            raise DomainError(f"index {x!r} outside the evaluated prefix")

    def __contains__(self, x) -> bool:
        return x in self._positions

    @property
    def contiguous_ints(self) -> bool:
        """True when the prefix is exactly 1..K, in order."""
        first, last = self.indices[0], self.indices[-1]
        return (
            isinstance(first, int)
            and first == 1
            and isinstance(last, int)
            and last == len(self.indices)
        )

    def log_index_array(self) -> np.ndarray:
        if self._log_array is None:
            logs = []
            for x in self.indices:
                if not isinstance(x, int) or x < 1:
                    raise DomainError(
                        "the variable k needs positive integer indices; "
                        f"got {x!r}"
                    )
                logs.append(math.log(x))
            self._log_array = np.array(logs)
        return self._log_array

    def prefix(self, K: int) -> "IndexSet":
        if K >= len(self.indices):
            return self
        return IndexSet(self.indices[:K], self.name)


class Enumeration:
    """A bijection between an index-set prefix and {1..K}, with inverse."""

    def __init__(self, domain: IndexSet, forward: dict, name: str = ""):
        K = len(domain)
        if len(forward) != K:
            raise ValueError("enumeration must cover the whole prefix")
        inverse: list = [None] * K
        for x, rank in forward.items():
            if x not in domain:
                raise ValueError(f"enumeration defined at {x!r} outside the prefix")
            if not isinstance(rank, int) or not (1 <= rank <= K):
                raise ValueError(f"rank {rank!r} not in 1..{K}")
            if inverse[rank - 1] is not None:
                raise ValueError(f"rank {rank} assigned twice")
            inverse[rank - 1] = x
        self.domain = domain
        self.forward = dict(forward)
        self.inverse = tuple(inverse)
        self.name = name or "gamma"

    @staticmethod
    def identity(domain: IndexSet, name: str = "identity") -> "Enumeration":
        """Rank each index by its position in the prefix order."""
        return Enumeration(
            domain, {x: j + 1 for j, x in enumerate(domain.indices)}, name
        )

    @staticmethod
    def from_order(domain: IndexSet, ordered: Sequence, name: str = "") -> "Enumeration":
        """Build the enumeration ranking indices in the given order."""
        return Enumeration(domain, {x: j + 1 for j, x in enumerate(ordered)}, name)

    def __call__(self, x) -> int:
        try:
            return self.forward[x]
        except KeyError:
            raise DomainError(f"index {x!r} outside the enumerated prefix")

    def inv(self, rank: int):
        if not (1 <= rank <= len(self.inverse)):
            raise DomainError(f"rank {rank} outside 1..{len(self.inverse)}")
        return self.inverse[rank - 1]

    def __len__(self) -> int:
        return len(self.inverse)

    def as_scale(self, name: str = ""):
        from .scales import Scale

        return Scale(self.domain, EnumNode(self, label=self.name), name or self.name)

    def value(self, x) -> LogValue:
        return LogValue.from_int(self(x))
