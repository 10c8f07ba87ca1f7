"""Seeded random generators used by the property suites: expressions
over small alphabets, and point clouds from random Euclidean embeddings.

Expression generation works toward a requested alphabet size so that
size-matched combinators (union) and size-splitting ones (disjoint
union, product, blocking) always come out valid, and it only emits
nodes that have a textual form.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .alphabet import Alphabet
from .dynamics import FiniteMap, TransitionRelation
from .schedules import PeriodicSubsets
from .seqset import (
    BlockK,
    CylSched,
    DilateK,
    DisjointUnion,
    EvConst,
    EventuallySeq,
    FiniteSet,
    FullShift,
    Image,
    Orbit,
    OrbitSV,
    RestrictK,
    SRSet,
    SetProduct,
    SetUnion,
    SeqSetExpr,
    ShiftK,
    SymbolMap,
)


def random_subset(rng: random.Random, k: int) -> frozenset[int]:
    size = rng.randint(1, k)
    return frozenset(rng.sample(range(k), size))


def random_seq(rng: random.Random, k: int) -> EventuallySeq:
    pre = tuple(rng.randrange(k) for _ in range(rng.randint(0, 2)))
    period = tuple(rng.randrange(k) for _ in range(rng.randint(1, 2)))
    return EventuallySeq(pre, period)


def random_leaf(rng: random.Random, k: int) -> SeqSetExpr:
    alphabet = Alphabet(k)
    roll = rng.randrange(7)
    if roll == 0:
        return FullShift(alphabet)
    if roll == 1:
        return EvConst(alphabet, rng.randrange(k))
    if roll == 2:
        den = rng.randint(1, 6)
        num = rng.randint(1, den)
        # z pinned to 0: counts ignore it and sr(k, r) has no z slot
        return SRSet(alphabet, 0, Fraction(num, den))
    if roll == 3:
        pre = tuple(random_subset(rng, k) for _ in range(rng.randint(0, 2)))
        period = tuple(random_subset(rng, k) for _ in range(rng.randint(1, 3)))
        return CylSched(alphabet, PeriodicSubsets(pre, period))
    if roll == 4:
        seqs = tuple(random_seq(rng, k) for _ in range(rng.randint(1, 3)))
        return FiniteSet(alphabet, seqs)
    if roll == 5:
        table = tuple(rng.randrange(k) for _ in range(k))
        return Orbit(FiniteMap(alphabet, table))
    successors = tuple(random_subset(rng, k) for _ in range(k))
    return OrbitSV(TransitionRelation(alphabet, successors))


def _power_splits(k: int) -> list[tuple[int, int]]:
    # (root, exponent >= 2) with root**exponent == k
    out = []
    for j in range(2, 6):
        root = round(k ** (1.0 / j))
        for r in (root - 1, root, root + 1):
            if r >= 1 and r**j == k:
                out.append((r, j))
    return sorted(set(out))


def _product_splits(k: int) -> list[tuple[int, int]]:
    return [(a, k // a) for a in range(1, k + 1) if k % a == 0]


def random_expr_k(rng: random.Random, k: int, depth: int) -> SeqSetExpr:
    """A valid random expression whose ambient alphabet has size k."""
    if depth <= 0 or rng.random() < 0.3:
        return random_leaf(rng, k)
    options = ["shift", "dilate", "restrict", "union", "image"]
    if k >= 2:
        options.append("djunion")
    if _power_splits(k):
        options.append("block")
    if len(_product_splits(k)) > 1 or k == 1:
        options.append("prod")
    choice = rng.choice(options)
    if choice == "shift":
        return ShiftK(rng.randint(1, 2), random_expr_k(rng, k, depth - 1))
    if choice == "dilate":
        return DilateK(rng.randint(2, 3), random_expr_k(rng, k, depth - 1))
    if choice == "restrict":
        return RestrictK(rng.randint(2, 3), random_expr_k(rng, k, depth - 1))
    if choice == "union":
        return SetUnion(
            random_expr_k(rng, k, depth - 1), random_expr_k(rng, k, depth - 1)
        )
    if choice == "image":
        source = rng.randint(1, max(1, k))
        if rng.random() < 0.5 and source <= k:
            table = tuple(sorted(rng.sample(range(k), source)))
        else:
            table = tuple(rng.randrange(k) for _ in range(source))
        symmap = SymbolMap(Alphabet(source), Alphabet(k), table)
        return Image(symmap, random_expr_k(rng, source, depth - 1))
    if choice == "djunion":
        k1 = rng.randint(1, k - 1)
        return DisjointUnion(
            random_expr_k(rng, k1, depth - 1), random_expr_k(rng, k - k1, depth - 1)
        )
    if choice == "block":
        root, j = rng.choice(_power_splits(k))
        return BlockK(j, random_expr_k(rng, root, depth - 1))
    a, b = rng.choice(_product_splits(k))
    return SetProduct(random_expr_k(rng, a, depth - 1), random_expr_k(rng, b, depth - 1))


def random_expr(
    rng: random.Random, max_k: int = 4, max_depth: int = 4
) -> SeqSetExpr:
    return random_expr_k(rng, rng.randint(1, max_k), rng.randint(0, max_depth))


def random_points(
    rng: random.Random,
    max_points: int = 12,
    dim: int | None = None,
    min_points: int = 2,
) -> list[tuple[float, ...]]:
    """A small cloud embedded in a low-dimensional cube."""
    d = dim if dim is not None else rng.randint(1, 3)
    count = rng.randint(min_points, max_points)
    return [tuple(rng.uniform(0.0, 1.0) for _ in range(d)) for _ in range(count)]


def random_windows(
    rng: random.Random, horizon: int, max_points: int = 10, dim: int = 1
) -> list[tuple[tuple[float, ...], ...]]:
    """Random length-`horizon` coordinate windows (sequence openings)."""
    count = rng.randint(2, max_points)
    return [
        tuple(
            tuple(rng.uniform(0.0, 1.0) for _ in range(dim)) for _ in range(horizon)
        )
        for _ in range(count)
    ]
