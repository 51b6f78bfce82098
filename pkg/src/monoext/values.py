"""Value scales and monotone bijections onto them.

Scale entries are held as exact rationals; float inputs are converted to
their exact binary value, so sums and comparisons in the discrete solvers
carry no rounding at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import NotIncreasing, ValidationError
from .poset import Poset

Rational = Union[int, float, Fraction]


def to_fraction(v: Rational) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)  # exact binary expansion of the double
    raise ValidationError(f"cannot interpret {v!r} as a scale value")


class ValueScale:
    """Strictly increasing finite sequence of exact rational values."""

    __slots__ = ("values",)

    def __init__(self, values: Iterable[Rational]):
        vals = tuple(to_fraction(v) for v in values)
        if not vals:
            raise ValidationError("scale must be nonempty")
        for a, b in zip(vals, vals[1:]):
            if a >= b:
                raise NotIncreasing(
                    f"scale values not strictly increasing: {a} >= {b}"
                )
        self.values = vals

    def __len__(self) -> int:
        return len(self.values)

    def value(self, rank: int) -> Fraction:
        """The rank-th smallest value, rank in 1..N."""
        if not 1 <= rank <= len(self.values):
            raise ValidationError(f"rank {rank} outside 1..{len(self.values)}")
        return self.values[rank - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ValueScale):
            return NotImplemented
        return self.values == other.values

    def __repr__(self) -> str:
        return f"ValueScale({[str(v) for v in self.values]})"


class MonotoneBijection:
    """Bijective assignment of scale values to poset elements.

    Stored as element -> rank with ranks a permutation of 1..N; the value
    of an element is the rank-th scale entry.  The constructor enforces
    bijectivity only; order preservation is the checker's concern.
    """

    __slots__ = ("poset", "scale", "ranks")

    def __init__(self, poset: Poset, scale: ValueScale, ranks):
        if len(scale) != poset.n:
            raise ValidationError(
                f"scale has {len(scale)} values for {poset.n} elements"
            )
        if isinstance(ranks, dict):
            seq = [0] * poset.n
            if len(ranks) != poset.n:
                raise ValidationError("rank map does not cover the ground set")
            for lab, r in ranks.items():
                seq[poset.index(lab)] = int(r)
        else:
            seq = [int(r) for r in ranks]
            if len(seq) != poset.n:
                raise ValidationError("rank sequence has wrong length")
        if sorted(seq) != list(range(1, poset.n + 1)):
            raise ValidationError("ranks are not a bijection onto 1..N")
        self.poset = poset
        self.scale = scale
        self.ranks = tuple(seq)

    def rank(self, label) -> int:
        return self.ranks[self.poset.index(label)]

    def value(self, label) -> Fraction:
        return self.scale.value(self.rank(label))

    def items(self) -> Iterator[tuple]:
        for lab, r in zip(self.poset.labels, self.ranks):
            yield lab, self.scale.value(r)

    def as_rank_dict(self) -> dict:
        return dict(zip(self.poset.labels, self.ranks))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonotoneBijection):
            return NotImplemented
        return (
            self.poset == other.poset
            and self.scale == other.scale
            and self.ranks == other.ranks
        )

    def __repr__(self) -> str:
        return f"MonotoneBijection({self.as_rank_dict()!r})"


@dataclass(frozen=True)
class BoundResult:
    """An extremal value together with the ordering and function attaining it.

    ``witness_perm`` holds 0-based positions into the query set, listed in
    increasing order of the witness value; ``per_node_values`` are the
    witness values along that ordering (strictly increasing).
    """

    objective: Fraction
    witness_perm: tuple
    witness_fn: MonotoneBijection
    per_node_values: tuple
