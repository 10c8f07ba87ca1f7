"""Coordinate schedules that pin some positions and free others.

Two kinds of schedule drive the cylinder-product sequence sets:

* ``PeriodicSubsets``: an eventually periodic assignment of a nonempty
  symbol subset to every coordinate.
* ``FrozenFreeBlocks``: blocks laid out from integer pairs (p_k, q_k); in
  the block ending at coordinate q_k the first coordinates are frozen to a
  single symbol z and the last p_k - p_{k-1} are fully free.  At n = q_k
  exactly p_k coordinates below n are free, so the count there is k**p_k
  and the growth ratio along block ends is p_k/q_k.

``build_schedule`` produces pairs whose ratios climb to a target rate in
(0, 1]: for a Fraction target the ratio is constant; for a float target
the ratios walk up the lower continued-fraction convergents first.  Each
step solves for the minimal next pair that keeps the frozen run lengths
nonnegative, which is what condition (ii) below encodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator


@dataclass(frozen=True)
class BlockSchedule:
    """Strictly increasing pairs (p_k, q_k) targeting a growth rate."""

    pairs: tuple[tuple[int, int], ...]
    target: Fraction

    def ratios(self) -> list[Fraction]:
        return [Fraction(p, q) for p, q in self.pairs]

    def check(self) -> list[str]:
        """Literal conditions on the pairs; empty list means all hold.

        (i) 1 <= p_k <= q_k with both coordinates strictly increasing;
        (ii) frozen run lengths nonnegative, i.e. q-increments dominate
             p-increments, and the ratios p_k/q_k never decrease;
        (iii) the largest ratio within the horizon equals the target.
        """
        problems: list[str] = []
        if not self.pairs:
            return ["schedule has no pairs"]
        prev_p, prev_q = 0, 0
        prev_ratio: Fraction | None = None
        for i, (p, q) in enumerate(self.pairs):
            if p < 1 or q < 1:
                problems.append(f"pair {i}: entries must be positive, got {(p, q)}")
                continue
            if p > q:
                problems.append(f"pair {i}: p={p} exceeds q={q}")
            if p <= prev_p or q <= prev_q:
                problems.append(f"pair {i}: not strictly increasing after {(prev_p, prev_q)}")
            if (q - prev_q) < (p - prev_p):
                problems.append(
                    f"pair {i}: q-increment {q - prev_q} below p-increment {p - prev_p}"
                )
            ratio = Fraction(p, q)
            if prev_ratio is not None and ratio < prev_ratio:
                problems.append(f"pair {i}: ratio {ratio} decreased below {prev_ratio}")
            prev_ratio = ratio
            prev_p, prev_q = p, q
        if not problems:
            ratios = self.ratios()
            top = max(ratios)
            if top > self.target:
                problems.append(
                    f"largest ratio {top} exceeds the target {self.target}"
                )
            elif top != self.target:
                # sup = target holds on a finite horizon either by touching
                # the target or by a tail still climbing toward it
                climbing = len(ratios) >= 2 and ratios[-1] > ratios[-2]
                if not (climbing and ratios[-1] == top):
                    problems.append(
                        f"largest ratio {top} does not reach the target {self.target}"
                    )
        return problems


def _continued_fraction_terms(x: Fraction) -> list[int]:
    terms = []
    num, den = x.numerator, x.denominator
    while den:
        a, rem = divmod(num, den)
        terms.append(a)
        num, den = den, rem
    return terms


def _lower_convergents(x: Fraction) -> list[Fraction]:
    """Convergents of x that sit at or below x, positive ones only.

    For an exact rational the list ends with x itself, so ratio sequences
    built from it reach the target exactly.
    """
    terms = _continued_fraction_terms(x)
    h_prev, h = 1, terms[0]
    k_prev, k = 0, 1
    convergents = [Fraction(h, k)]
    for a in terms[1:]:
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        convergents.append(Fraction(h, k))
    out = [c for c in convergents if 0 < c <= x]
    if not out:
        out = [x]
    return out


def _ratio_sequence(target: Fraction, rational: bool) -> Iterator[Fraction]:
    """Nondecreasing rationals converging to (and reaching) the target."""
    if rational:
        while True:
            yield target
    climbs = _lower_convergents(target)
    for c in climbs:
        yield c
    while True:
        yield climbs[-1]


def _next_pair(prev: tuple[int, int], ratio: Fraction) -> tuple[int, int]:
    """Minimal (p', q') with p'/q' = ratio extending prev admissibly.

    Solves for the least multiple m of the reduced ratio with
    m*num > p and m*(den - num) >= q - p; the second condition keeps the
    next frozen run length nonnegative.  With den == num (ratio 1) the
    run-length condition degenerates and requires p == q already.
    """
    p, q = prev
    num, den = ratio.numerator, ratio.denominator
    m = p // num + 1
    if den == num:
        if p != q:
            raise ValueError(
                f"cannot extend {prev} at ratio 1: frozen deficit {q - p}"
            )
    elif q - p > 0:
        m = max(m, -((p - q) // (den - num)))
    return (m * num, m * den)


def build_schedule(target: Fraction | float | int, count: int) -> BlockSchedule:
    """Build ``count`` pairs whose block-end ratios climb to ``target``.

    Fraction (or int) targets give a constant ratio sequence; float
    targets are treated as rate proxies and approached through their
    lower continued-fraction convergents.  Target must lie in (0, 1].
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rational = isinstance(target, (Fraction, int))
    frac = Fraction(target) if not isinstance(target, Fraction) else target
    if not 0 < frac <= 1:
        raise ValueError(f"target rate must be in (0, 1], got {target}")
    ratios = _ratio_sequence(frac, rational)
    first = next(ratios)
    pairs = [(first.numerator, first.denominator)]
    while len(pairs) < count:
        pairs.append(_next_pair(pairs[-1], next(ratios)))
    return BlockSchedule(tuple(pairs), frac)


def extend_pairs(
    pairs: tuple[tuple[int, int], ...], target: Fraction, upto_q: int
) -> tuple[tuple[int, int], ...]:
    """Extend a pair list until its last q passes ``upto_q``.

    Continues with the target's ratio sequence, skipping ratios already
    passed, so extension is deterministic for a given (pairs, target).
    """
    out = list(pairs)
    last_ratio = Fraction(out[-1][0], out[-1][1])
    climbs = [c for c in _lower_convergents(target) if c > last_ratio]
    if not climbs or climbs[-1] != target:
        climbs = climbs + [max(target, last_ratio)]

    def ratio_iter() -> Iterator[Fraction]:
        yield from climbs
        while True:
            yield climbs[-1]

    ratios = ratio_iter()
    while out[-1][1] <= upto_q:
        out.append(_next_pair(out[-1], next(ratios)))
    return tuple(out)


@dataclass(frozen=True)
class PeriodicSubsets:
    """Eventually periodic assignment of symbol subsets to coordinates."""

    pre: tuple[frozenset[int], ...]
    period: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("period must be nonempty")

    def subset(self, i: int) -> frozenset[int]:
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def count_upto(self, n: int) -> int:
        out = 1
        for i in range(n):
            out *= len(self.subset(i))
        return out

    def mean_log_size(self) -> float:
        return sum(math.log(len(z)) for z in self.period) / len(self.period)

    def max_symbol(self) -> int:
        top = 0
        for z in self.pre + self.period:
            top = max(top, max(z))
        return top


# Pair extensions are cached per (pairs, target) so frozen rule objects can
# stay value-comparable while lazily growing their horizon.
_PAIR_CACHE: dict[tuple[tuple[tuple[int, int], ...], Fraction], tuple[tuple[int, int], ...]] = {}


@dataclass(frozen=True)
class FrozenFreeBlocks:
    """Frozen-to-z / fully-free coordinate pattern driven by (p, q) pairs."""

    size: int
    z: int
    base_pairs: tuple[tuple[int, int], ...]
    target: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.z < self.size:
            raise ValueError(f"z={self.z} out of range for alphabet size {self.size}")

    def _pairs_through(self, q_needed: int) -> tuple[tuple[int, int], ...]:
        key = (self.base_pairs, self.target)
        cached = _PAIR_CACHE.get(key, self.base_pairs)
        if cached[-1][1] <= q_needed:
            cached = extend_pairs(cached, self.target, q_needed)
            _PAIR_CACHE[key] = cached
        return cached

    def is_free(self, i: int) -> bool:
        pairs = self._pairs_through(i + 1)
        prev_p, prev_q = 0, 0
        for p, q in pairs:
            if i < q:
                free_start = q - (p - prev_p)
                return i >= free_start
            prev_p, prev_q = p, q
        raise AssertionError("pair extension did not cover the coordinate")

    def subset(self, i: int) -> frozenset[int]:
        if self.is_free(i):
            return frozenset(range(self.size))
        return frozenset((self.z,))

    def free_upto(self, n: int) -> int:
        """Number of free coordinates below n."""
        if n <= 0:
            return 0
        pairs = self._pairs_through(n)
        total = 0
        prev_p, prev_q = 0, 0
        for p, q in pairs:
            if prev_q >= n:
                break
            free_start = q - (p - prev_p)
            total += max(0, min(n, q) - free_start)
            prev_p, prev_q = p, q
        return total

    def count_upto(self, n: int) -> int:
        return self.size ** self.free_upto(n)

    def rate(self) -> float:
        return float(self.target) * math.log(self.size)


def schedule_to_rule(
    schedule: BlockSchedule, size: int, z: int = 0
) -> FrozenFreeBlocks:
    """Turn explicit pairs into a total coordinate rule over a k-alphabet."""
    problems = schedule.check()
    if problems:
        raise ValueError("; ".join(problems))
    return FrozenFreeBlocks(size, z, schedule.pairs, schedule.target)


def schedule_to_seqset(schedule: BlockSchedule, size: int, z: int = 0):
    """The scheduled cylinder set itself: frozen at z off-block, free in-block."""
    # local import: seqset already depends on this module
    from .alphabet import Alphabet
    from .seqset import CylSched

    return CylSched(Alphabet(size), schedule_to_rule(schedule, size, z))
