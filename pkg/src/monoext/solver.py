"""Exact extremal values of query sums over monotone bijections.

Given a poset, a strictly increasing value scale of the same size, and a
query set B, the minimum and maximum of ``sum(f(b) for b in B)`` over all
monotone bijections f are computed from a closed-form conditional value
per admissible ordering of B, optimized by branch-and-bound.  All
arithmetic is exact rational.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    CapExceeded,
    EmptyQuery,
    InvalidPermutation,
    NotAChain,
    PreconditionViolated,
    ValidationError,
)
from .func1d import MonotoneMap1D
from .poset import DEFAULT_CAP, Poset, QuerySet
from .values import BoundResult, MonotoneBijection, ValueScale


def _check_scale(poset: Poset, scale: ValueScale) -> None:
    if len(scale) != poset.n:
        raise ValidationError(
            f"scale has {len(scale)} values for a poset of {poset.n} elements"
        )


def _validate_ordering(poset: Poset, query: QuerySet, perm) -> None:
    n = len(query)
    if tuple(sorted(perm)) != tuple(range(n)):
        raise InvalidPermutation(f"{perm!r} is not a permutation of 0..{n - 1}")
    idxs = query.indices
    for later in range(n):
        for earlier in range(later):
            if poset.leq_idx(idxs[perm[later]], idxs[perm[earlier]]):
                raise InvalidPermutation(
                    f"{query.labels[perm[later]]!r} lies below "
                    f"{query.labels[perm[earlier]]!r} but is ordered after it"
                )


def conditional_min(
    poset: Poset, scale: ValueScale, query: QuerySet, perm
) -> Fraction:
    """Minimum of the query sum over bijections realizing ordering ``perm``.

    Equals the sum over positions k of the scale value whose rank is the
    size of the union of down-sets of the first k ordered query elements.
    """
    _check_scale(poset, scale)
    _validate_ordering(poset, query, perm)
    idxs = query.indices
    total = Fraction(0)
    mask = 0
    for p in perm:
        mask |= poset.down[idxs[p]]
        total += scale.value(mask.bit_count())
    return total


def conditional_max(
    poset: Poset, scale: ValueScale, query: QuerySet, perm
) -> Fraction:
    """Maximum of the query sum over bijections realizing ordering ``perm``.

    Dual of :func:`conditional_min`: position k (counting from the top of
    the ordering) contributes the value of rank N - |union of up-sets of
    the last k ordered elements| + 1.
    """
    _check_scale(poset, scale)
    _validate_ordering(poset, query, perm)
    idxs = query.indices
    n_total = poset.n
    total = Fraction(0)
    mask = 0
    for p in reversed(perm):
        mask |= poset.up[idxs[p]]
        total += scale.value(n_total - mask.bit_count() + 1)
    return total


def solve_min(
    poset: Poset, scale: ValueScale, query: QuerySet, cap: int = DEFAULT_CAP
) -> BoundResult:
    """Global minimum of the query sum over all monotone bijections.

    Branch-and-bound over admissible orderings in lexicographic order;
    a branch is cut when its exact partial sum plus an optimistic
    completion (down-set unions grow by at least one element per step)
    cannot beat the incumbent.  Ties keep the first optimum found, so the
    reported ordering is the lexicographically least optimal one.  ``cap``
    bounds the number of complete orderings evaluated.
    """
    _check_scale(poset, scale)
    if len(query) == 0:
        raise EmptyQuery("query set is empty")
    xi = scale.values
    idxs = query.indices
    n = len(idxs)
    strictly_below = []
    for p in range(n):
        m = 0
        for q in range(n):
            if q != p and poset.leq_idx(idxs[q], idxs[p]):
                m |= 1 << q
        strictly_below.append(m)
    order = sorted(range(n), key=lambda p: idxs[p])
    chosen = [0] * n
    best_val = None
    best_perm = None
    leaves = 0

    def explore(depth: int, used: int, mask: int, partial: Fraction) -> None:
        nonlocal best_val, best_perm, leaves
        if depth == n:
            leaves += 1
            if leaves > cap:
                raise CapExceeded(cap)
            if best_val is None or partial < best_val:
                best_val = partial
                best_perm = tuple(chosen)
            return
        if best_val is not None:
            size = mask.bit_count()
            optimistic = partial
            for r in range(1, n - depth + 1):
                optimistic += xi[size + r - 1]
            if optimistic >= best_val:
                return
        for p in order:
            if used >> p & 1 or strictly_below[p] & ~used:
                continue
            chosen[depth] = p
            new_mask = mask | poset.down[idxs[p]]
            explore(
                depth + 1,
                used | 1 << p,
                new_mask,
                partial + xi[new_mask.bit_count() - 1],
            )

    explore(0, 0, 0, Fraction(0))
    witness = build_witness(poset, scale, query, best_perm, "min")
    per_node = tuple(witness.value(query.labels[p]) for p in best_perm)
    return BoundResult(best_val, best_perm, witness, per_node)


def solve_max(
    poset: Poset, scale: ValueScale, query: QuerySet, cap: int = DEFAULT_CAP
) -> BoundResult:
    """Global maximum of the query sum, via the order-reversal reduction.

    Maximizing over the original orders is minimizing over the reversed
    poset with the negated, reversed scale; the witness maps back through
    rank -> N + 1 - rank.
    """
    _check_scale(poset, scale)
    if len(query) == 0:
        raise EmptyQuery("query set is empty")
    rposet, rscale, rquery = reverse_reduce(poset, scale, query)
    res = solve_min(rposet, rscale, rquery, cap=cap)
    n_total = poset.n
    ranks = [n_total + 1 - r for r in res.witness_fn.ranks]
    witness = MonotoneBijection(poset, scale, ranks)
    perm = tuple(reversed(res.witness_perm))
    per_node = tuple(witness.value(query.labels[p]) for p in perm)
    return BoundResult(-res.objective, perm, witness, per_node)


def build_witness(
    poset: Poset, scale: ValueScale, query: QuerySet, perm, mode: str = "min"
) -> MonotoneBijection:
    """A monotone bijection attaining the conditional optimum for ``perm``.

    Min mode assigns scale ranks block by block: the k-th block is the set
    of elements newly covered by the union of down-sets after placing the
    k-th ordered query element, filled along the lexicographically first
    linear extension of the induced subposet.  Max mode runs the same
    construction on the reversed instance and maps ranks back.
    """
    _check_scale(poset, scale)
    _validate_ordering(poset, query, perm)
    if mode == "max":
        rposet, rscale, rquery = reverse_reduce(poset, scale, query)
        g = build_witness(rposet, rscale, rquery, tuple(reversed(perm)), "min")
        n_total = poset.n
        return MonotoneBijection(
            poset, scale, [n_total + 1 - r for r in g.ranks]
        )
    if mode != "min":
        raise ValidationError(f"mode must be 'min' or 'max', got {mode!r}")

    idxs = query.indices
    full = (1 << poset.n) - 1
    block_tops = []
    mask = 0
    for p in perm:
        mask |= poset.down[idxs[p]]
        block_tops.append(mask)
    if mask != full:
        block_tops.append(full)

    ranks = [0] * poset.n
    next_rank = 1
    prev = 0
    for top in block_tops:
        for e in _lex_extension(poset, top & ~prev):
            ranks[e] = next_rank
            next_rank += 1
        prev = top
    return MonotoneBijection(poset, scale, ranks)


def _lex_extension(poset: Poset, mask: int) -> list:
    """Lexicographically first linear extension of the induced subposet."""
    remaining = mask
    out = []
    while remaining:
        m = remaining
        pick = -1
        while m:
            low = m & -m
            i = low.bit_length() - 1
            if poset.down[i] & remaining == low:
                pick = i
                break
            m ^= low
        out.append(pick)
        remaining ^= 1 << pick
    return out


def reverse_reduce(poset: Poset, scale: ValueScale, query: QuerySet):
    """Order-reversed instance whose minimum is the negated maximum.

    Returns the reversed poset, the negated-and-reversed scale, and the
    query re-bound to the reversed poset (same labels).
    """
    rposet = poset.reversed()
    rscale = ValueScale(tuple(-v for v in reversed(scale.values)))
    rquery = QuerySet(rposet, query.labels)
    return rposet, rscale, rquery


def chain_bounds(poset: Poset, scale: ValueScale, query: QuerySet):
    """(min, max) closed forms when the query set is a chain.

    min sums the values ranked by each element's down-set size; max sums
    the values ranked N - |up-set| + 1.  The query may be given in any
    order; elements are sorted along the chain internally.
    """
    _check_scale(poset, scale)
    if len(query) == 0:
        raise EmptyQuery("query set is empty")
    idxs = query.indices
    for a in range(len(idxs)):
        for b in range(a + 1, len(idxs)):
            if not poset.comparable_idx(idxs[a], idxs[b]):
                raise NotAChain(
                    f"{query.labels[a]!r} and {query.labels[b]!r} are incomparable"
                )
    ordered = sorted(idxs, key=lambda i: poset.down[i].bit_count())
    n_total = poset.n
    mn = sum(
        (scale.value(poset.down[i].bit_count()) for i in ordered), Fraction(0)
    )
    mx = sum(
        (
            scale.value(n_total - poset.up[i].bit_count() + 1)
            for i in ordered
        ),
        Fraction(0),
    )
    return mn, mx


def disjoint_bound(
    poset: Poset, scale: ValueScale, query: QuerySet, mode: str = "min"
) -> Fraction:
    """Closed form when the query elements' down-sets (up-sets) are disjoint.

    For ``mode="min"`` the down-sets must be pairwise disjoint; sorting
    their sizes ascending, the k-th term is the value ranked by the k-th
    prefix sum.  ``mode="max"`` is the dual with up-sets and ranks counted
    from the top.
    """
    _check_scale(poset, scale)
    if len(query) == 0:
        raise EmptyQuery("query set is empty")
    if mode not in ("min", "max"):
        raise ValidationError(f"mode must be 'min' or 'max', got {mode!r}")
    sets = poset.down if mode == "min" else poset.up
    idxs = query.indices
    for a in range(len(idxs)):
        for b in range(a + 1, len(idxs)):
            if sets[idxs[a]] & sets[idxs[b]]:
                kind = "down-sets" if mode == "min" else "up-sets"
                raise PreconditionViolated(
                    f"{kind} of {query.labels[a]!r} and "
                    f"{query.labels[b]!r} intersect",
                    pair=(query.labels[a], query.labels[b]),
                )
    sizes = sorted(sets[i].bit_count() for i in idxs)
    n_total = poset.n
    total = Fraction(0)
    prefix = 0
    for s in sizes:
        prefix += s
        rank = prefix if mode == "min" else n_total - prefix + 1
        total += scale.value(rank)
    return total


def scale_from_m(m: MonotoneMap1D, n: int) -> ValueScale:
    """The scale of preimages m^{-1}(i / n^2), i = 1..n^2.

    Identity maps produce exact rationals; other kinds produce floats that
    are then held exactly.  Strict increase is re-checked by the scale.
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    if not m.is_increasing_bijection:
        raise ValidationError("map must be an increasing bijection")
    n2 = n * n
    return ValueScale(m.inverse(Fraction(i, n2)) for i in range(1, n2 + 1))
