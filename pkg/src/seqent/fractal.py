"""Digit codings of subsets of the unit interval, and affine iterated
function systems realizing sequence spaces geometrically.

Digit convention: every x in (0, 1] gets the base-k expansion that does
not terminate in zeros (so k-adic rationals take the tail of (k-1)s),
and 0 gets the all-zeros expansion.  Under this convention the length-n
words correspond to the half-open cells (v*k^-n, (v+1)*k^-n], with the
all-zeros word additionally owning the point 0.  A word is a coding
prefix of some point of A exactly when its cell meets A (or it is the
zero word and 0 lies in A), so prefix enumeration reduces to interval
queries, which the named subsets answer in exact rational arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator

import numpy as np

from .alphabet import Alphabet, PrefixSet
from .schedules import PeriodicSubsets
from .seqset import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    CylSched,
    EventuallySeq,
    FiniteSet,
    FullShift,
    SeqSetExpr,
)

IntervalTest = Callable[[Fraction, Fraction, bool], bool]


@dataclass(frozen=True)
class FractalSubset:
    """A subset of [0, 1] answering interval queries.

    ``meets(lo, hi, left_closed)`` decides whether the subset intersects
    (lo, hi] (or [lo, hi] when left_closed).  ``exact`` records whether
    those answers are certain; sampled predicates answer approximately
    and their counts must be treated as estimates.
    """

    name: str
    meets: IntervalTest = field(compare=False)
    contains_zero: bool
    exact: bool = True


def whole_interval() -> FractalSubset:
    return FractalSubset("whole", lambda lo, hi, lc: lo < hi or lc, True)


def rationals() -> FractalSubset:
    # dense, so any cell with interior meets it
    return FractalSubset("rationals", lambda lo, hi, lc: lo < hi or lc, True)


def irrationals() -> FractalSubset:
    # dense, but no single point (in particular not 0) belongs
    return FractalSubset("irrationals", lambda lo, hi, lc: lo < hi, False)


def interval_subset(a: Fraction, b: Fraction) -> FractalSubset:
    a, b = Fraction(a), Fraction(b)
    if not (0 <= a <= b <= 1):
        raise ValueError("interval endpoints must satisfy 0 <= a <= b <= 1")

    def meets(lo: Fraction, hi: Fraction, left_closed: bool) -> bool:
        # [a, b] against (lo, hi] or [lo, hi]
        if a > hi or b < lo:
            return False
        if b == lo:
            return left_closed
        return True

    return FractalSubset(f"interval[{a},{b}]", meets, a == 0)


def point_subset(x: Fraction) -> FractalSubset:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("point must lie in [0, 1]")

    def meets(lo: Fraction, hi: Fraction, left_closed: bool) -> bool:
        if x == lo:
            return left_closed
        return lo < x <= hi

    return FractalSubset(f"point[{x}]", meets, x == 0)


def _cantor_meets(lo: Fraction, hi: Fraction, left_closed: bool) -> bool:
    """Exact test whether the middle-thirds set meets (lo, hi] / [lo, hi].

    Recurses into the two thirds after rescaling; each level triples the
    interval length and the endpoint checks catch any interval longer
    than the unit, so the recursion depth is logarithmic in 1/(hi-lo).
    """
    if hi < 0 or lo > 1 or hi < lo:
        return False
    if hi == lo:
        return left_closed and _cantor_contains(lo)
    in_left = lo < 0 or (lo == 0 and left_closed)
    if in_left and hi >= 0:
        return True
    if (lo < 1 or (lo == 1 and left_closed)) and hi >= 1:
        return True
    third, two_thirds = Fraction(1, 3), Fraction(2, 3)
    if lo < third or (lo == third and left_closed):
        if _cantor_meets(3 * lo, 3 * min(hi, third), left_closed):
            return True
    # hi == 2/3 still reaches the set: the interval is right-closed
    if hi >= two_thirds:
        clipped_left = lo < two_thirds
        new_lo = two_thirds if clipped_left else lo
        return _cantor_meets(
            3 * new_lo - 2, 3 * hi - 2, True if clipped_left else left_closed
        )
    return False


def _cantor_contains(x: Fraction) -> bool:
    seen: set[Fraction] = set()
    while x not in seen:
        seen.add(x)
        if x < 0 or x > 1:
            return False
        if x <= Fraction(1, 3):
            x = 3 * x
        elif x >= Fraction(2, 3):
            x = 3 * x - 2
        else:
            return False
    return True


def cantor_set() -> FractalSubset:
    return FractalSubset("cantor", _cantor_meets, True)


def predicate_subset(
    fn: Callable[[float], bool], probes: int = 32, name: str = "predicate"
) -> FractalSubset:
    """Sampled membership: an interval counts as met when any of the
    probe points (interior grid plus the closed endpoints) satisfies the
    predicate.  Answers are approximate by construction."""
    if probes < 1:
        raise ValueError("need at least one probe point")

    def meets(lo: Fraction, hi: Fraction, left_closed: bool) -> bool:
        flo, fhi = float(lo), float(hi)
        if fn(fhi):
            return True
        if left_closed and fn(flo):
            return True
        for j in range(1, probes + 1):
            t = flo + (fhi - flo) * j / (probes + 1)
            if fn(t):
                return True
        return False

    return FractalSubset(name, meets, fn(0.0), exact=False)


NAMED_SUBSETS: dict[str, Callable[[], FractalSubset]] = {
    "whole": whole_interval,
    "rationals": rationals,
    "irrationals": irrationals,
    "cantor": cantor_set,
}


def named_subset(name: str) -> FractalSubset:
    try:
        return NAMED_SUBSETS[name]()
    except KeyError:
        raise ValueError(
            f"unknown subset {name!r}; expected one of {sorted(NAMED_SUBSETS)}"
        ) from None


def digit_prefixes(
    subset: FractalSubset, k: int, n: int, budget: int | None = None
) -> PrefixSet:
    """Length-n digit words whose cells meet the subset.

    Cells nest, so the search prunes whole subtrees as soon as a cell
    misses; the zero cell additionally carries the point 0.
    """
    if k < 2:
        raise ValueError("digit base must be >= 2")
    if n < 0:
        raise ValueError("length must be >= 0")
    cap = DEFAULT_BUDGET if budget is None else budget
    alphabet = Alphabet(k)
    if n == 0:
        return PrefixSet(alphabet, 0, frozenset({()}))
    words: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], value: int) -> None:
        depth = len(prefix)
        if depth == n:
            if len(words) >= cap:
                raise BudgetExceededError(len(words) + 1, cap, "digit words")
            words.append(prefix)
            return
        base = k ** (depth + 1)
        for d in range(k):
            child = value * k + d
            lo = Fraction(child, base)
            hi = Fraction(child + 1, base)
            if subset.meets(lo, hi, False) or (child == 0 and subset.contains_zero):
                rec(prefix + (d,), child)

    rec((), 0)
    return PrefixSet(alphabet, n, frozenset(words))


def digit_expansion(x: Fraction, k: int) -> EventuallySeq:
    """The never-terminating base-k expansion of a rational in [0, 1],
    as preperiod plus period (0 maps to all zeros)."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("point must lie in [0, 1]")
    if k < 2:
        raise ValueError("digit base must be >= 2")
    if x == 0:
        return EventuallySeq((), (0,))
    num, den = x.numerator, x.denominator
    # k-adic denominators force the trailing (k-1)s variant
    d = den
    while (g := math.gcd(d, k)) > 1:
        d //= g
    is_adic = d == 1
    if is_adic:
        m = 0
        scaled = Fraction(x)
        while scaled.denominator != 1:
            scaled *= k
            m += 1
        m = max(m, 1)
        v = x.numerator * k**m // x.denominator
        digits = []
        w = v - 1
        for _ in range(m):
            digits.append(w % k)
            w //= k
        return _normal_seq(tuple(reversed(digits)), (k - 1,))
    digits = []
    seen: dict[int, int] = {}
    r = num
    while r not in seen:
        seen[r] = len(digits)
        r *= k
        digits.append(r // den)
        r %= den
    start = seen[r]
    return _normal_seq(tuple(digits[:start]), tuple(digits[start:]))


def _normal_seq(pre: tuple[int, ...], period: tuple[int, ...]) -> EventuallySeq:
    # fold pre digits the period already supplies, so equal expansions
    # compare equal as values
    while pre and pre[-1] == period[-1]:
        pre = pre[:-1]
        period = (period[-1],) + period[:-1]
    return EventuallySeq(pre, period)


def digit_seqset(subset: FractalSubset, k: int) -> SeqSetExpr | None:
    """An exact symbolic model of the digit codings, when one is known.

    Dense subsets code onto every word; the middle-thirds set in base 3
    codes onto the {0, 2} words (cell counts also pick up the finitely
    many gap-endpoint cells, which changes nothing at the level of
    growth); single rationals code onto one eventually periodic string.
    Other subsets have no registered model and return None.
    """
    if subset.name in ("whole", "rationals", "irrationals"):
        return FullShift(Alphabet(k))
    if subset.name == "cantor" and k == 3:
        rule = PeriodicSubsets((), (frozenset({0, 2}),))
        return CylSched(Alphabet(3), rule)
    if subset.name.startswith("point[") and subset.exact:
        inner = subset.name[len("point[") : -1]
        seq = digit_expansion(Fraction(inner), k)
        return FiniteSet(Alphabet(k), (seq,))
    return None


@dataclass(frozen=True)
class AffineMap:
    """x -> A x + b with operator norm of A strictly below 1.

    A declared ratio, when given, must be a valid Lipschitz bound (at
    least the operator norm, below 1) and is then used for all radius
    arithmetic; this lets exact ratios like 1/3 stand in for their
    floating-point norm estimates.
    """

    matrix: tuple[tuple[float, ...], ...]
    offset: tuple[float, ...]
    declared_ratio: float | None = None

    def __post_init__(self) -> None:
        a = np.asarray(self.matrix, dtype=float)
        b = np.asarray(self.offset, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        if b.shape != (a.shape[0],):
            raise ValueError("offset dimension must match the matrix")
        norm = float(np.linalg.norm(a, 2))
        if norm >= 1.0:
            raise ValueError("affine map must be a strict contraction")
        if self.declared_ratio is not None:
            if not norm - 1e-9 <= self.declared_ratio < 1.0:
                raise ValueError(
                    "declared ratio must be a contraction bound at least the "
                    "operator norm"
                )

    @property
    def dim(self) -> int:
        return len(self.offset)

    @property
    def ratio(self) -> float:
        if self.declared_ratio is not None:
            return self.declared_ratio
        return float(np.linalg.norm(np.asarray(self.matrix, dtype=float), 2))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float) @ x + np.asarray(
            self.offset, dtype=float
        )

    def fixed_point(self) -> np.ndarray:
        a = np.asarray(self.matrix, dtype=float)
        b = np.asarray(self.offset, dtype=float)
        return np.linalg.solve(np.eye(a.shape[0]) - a, b)


def scalar_map(a: float, b: float) -> AffineMap:
    return AffineMap(((a,),), (b,))


@dataclass(frozen=True)
class IFS:
    """A finite family of contractions indexed by an alphabet."""

    maps: tuple[AffineMap, ...]

    def __post_init__(self) -> None:
        if not self.maps:
            raise ValueError("need at least one map")
        d = self.maps[0].dim
        if any(m.dim != d for m in self.maps):
            raise ValueError("all maps must share one dimension")

    @property
    def dim(self) -> int:
        return self.maps[0].dim

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(len(self.maps))

    def max_ratio(self) -> float:
        return max(m.ratio for m in self.maps)

    def diameter_bound(self) -> float:
        """Upper bound for the attractor diameter from the fixed points.

        Every fixed point lies in the attractor, and iterating any point
        of the attractor under the maps moves it at most
        ratio * diameter per step toward each fixed point, which bounds
        the diameter by fix-spread * (1 + r) / (1 - r).
        """
        fixes = [m.fixed_point() for m in self.maps]
        spread = 0.0
        for i in range(len(fixes)):
            for j in range(i + 1, len(fixes)):
                spread = max(spread, float(np.linalg.norm(fixes[i] - fixes[j])))
        r = self.max_ratio()
        if spread == 0.0:
            return 0.0
        return spread * (1 + r) / (1 - r)

    def apply_word(self, word: tuple[int, ...], seed: np.ndarray) -> np.ndarray:
        """First-symbol-outermost composition applied to a seed point."""
        x = seed
        for s in reversed(word):
            x = self.maps[s](x)
        return x

    def word_ratio(self, word: tuple[int, ...]) -> float:
        out = 1.0
        for s in word:
            out *= self.maps[s].ratio
        return out

    def anchor(self) -> tuple[np.ndarray, float]:
        """A point c and radius R with the attractor inside B(c, R).

        The ball around c of radius max_j |f_j(c) - c| / (1 - r) is
        forward invariant, so it contains the attractor; the best of the
        maps' fixed points is used as c.  Cylinder cells then satisfy
        cell(w) inside B(w applied to c, prod-of-ratios * R).
        """
        r = self.max_ratio()
        best_c: np.ndarray | None = None
        best_rad = math.inf
        for m in self.maps:
            c = m.fixed_point()
            move = max(float(np.linalg.norm(f(c) - c)) for f in self.maps)
            rad = move / (1.0 - r)
            if rad < best_rad:
                best_c, best_rad = c, rad
        assert best_c is not None
        return best_c, best_rad


def cantor_ifs() -> IFS:
    return IFS((scalar_map(1 / 3, 0.0), scalar_map(1 / 3, 2 / 3)))


@dataclass(frozen=True)
class CylinderCell:
    word: tuple[int, ...]
    point: tuple[float, ...]
    radius: float


def ifs_cells(
    ifs: IFS, n: int, budget: int | None = None
) -> Iterator[CylinderCell]:
    """All length-n cylinder cells in word order: a representative point
    (the word applied to the first map's fixed point, which lies in the
    attractor) and a radius bounding the cell diameter."""
    if n < 0:
        raise ValueError("length must be >= 0")
    k = len(ifs.maps)
    cap = DEFAULT_BUDGET if budget is None else budget
    if k**n > cap:
        raise BudgetExceededError(k**n, cap, "cylinder cells")
    seed = ifs.maps[0].fixed_point()
    diam = ifs.diameter_bound()
    for word in itertools.product(range(k), repeat=n):
        pt = ifs.apply_word(word, seed)
        yield CylinderCell(word, tuple(float(v) for v in pt), ifs.word_ratio(word) * diam)


def ifs_pi(
    ifs: IFS,
    word: tuple[int, ...],
    seed: tuple[float, ...] | None = None,
    depth: int | None = None,
) -> tuple[tuple[float, ...], float]:
    """The coding map applied to a finite word: the composed maps at the
    seed, plus an error radius max_ratio**depth * diameter bound."""
    if depth is None:
        depth = len(word)
    if depth < len(word):
        raise ValueError("depth must reach the word length")
    if any(not 0 <= s < len(ifs.maps) for s in word):
        raise ValueError("word symbol out of range")
    seed_pt = (
        ifs.anchor()[0] if seed is None else np.asarray(seed, dtype=float)
    )
    if seed_pt.shape != (ifs.dim,):
        raise ValueError("seed dimension must match the system")
    pt = ifs.apply_word(word, seed_pt)
    radius = ifs.max_ratio() ** depth * ifs.diameter_bound()
    return tuple(float(v) for v in pt), float(radius)


def ifs_ball_words(
    ifs: IFS,
    n: int,
    center: tuple[float, ...],
    radius: float,
    budget: int | None = None,
) -> list[tuple[int, ...]]:
    """Length-n words whose cylinder cell can meet the given closed ball.

    Exclusion is certain (cells live inside the anchored word ball),
    inclusion is not, so the result is an upper enumeration of the words
    whose attractor piece meets the ball.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    c = np.asarray(center, dtype=float)
    if c.shape != (ifs.dim,):
        raise ValueError("center dimension must match the system")
    cap = DEFAULT_BUDGET if budget is None else budget
    seed, anchor_rad = ifs.anchor()
    k = len(ifs.maps)
    out: list[tuple[int, ...]] = []

    def rec(word: tuple[int, ...]) -> None:
        pt = ifs.apply_word(word, seed)
        cell_rad = ifs.word_ratio(word) * anchor_rad
        if float(np.linalg.norm(pt - c)) > radius + cell_rad:
            return
        if len(word) == n:
            if len(out) >= cap:
                raise BudgetExceededError(len(out) + 1, cap, "ball words")
            out.append(word)
            return
        for s in range(k):
            rec(word + (s,))

    rec(())
    return out


def ifs_preimage_prefixes(
    ifs: IFS,
    subset: FractalSubset,
    n: int,
    delta: float = 0.0,
    budget: int | None = None,
) -> PrefixSet:
    """Words whose attractor cell can meet the subset, within slack delta.

    One-dimensional systems only: the cell ball becomes a closed
    interval and the subset answers the query.  Cell balls nest along
    prefixes, so pruning is sound and counts are an upper enumeration of
    the true preimage prefixes; they are monotone nonincreasing as delta
    shrinks.
    """
    if ifs.dim != 1:
        raise ValueError("subset queries are one-dimensional")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if n < 0:
        raise ValueError("length must be >= 0")
    cap = DEFAULT_BUDGET if budget is None else budget
    seed, anchor_rad = ifs.anchor()
    k = len(ifs.maps)
    words: list[tuple[int, ...]] = []

    def rec(word: tuple[int, ...]) -> None:
        center = float(ifs.apply_word(word, seed)[0])
        rad = ifs.word_ratio(word) * anchor_rad + delta
        lo = Fraction(center) - Fraction(rad)
        hi = Fraction(center) + Fraction(rad)
        if not subset.meets(lo, hi, True):
            return
        if len(word) == n:
            if len(words) >= cap:
                raise BudgetExceededError(len(words) + 1, cap, "preimage words")
            words.append(word)
            return
        for s in range(k):
            rec(word + (s,))

    rec(())
    return PrefixSet(Alphabet(k), n, frozenset(words))


def digit_counts(
    subset: FractalSubset, k: int, n_max: int, budget: int | None = None
) -> list[tuple[int, int]]:
    """Cell counts of the digit coding for n = 1 .. n_max."""
    return [(n, len(digit_prefixes(subset, k, n, budget))) for n in range(1, n_max + 1)]
