"""Combinator expressions denoting sets of one-sided symbol sequences.

Every expression denotes a nonempty set of sequences over a finite
alphabet.  The two evaluation entry points are ``prefixes`` (materialize
the distinct length-n openings) and ``count_prefixes`` (their number,
taking closed-form shortcuts wherever the combinator admits one: cylinder
schedules multiply coordinate choices, products multiply, disjoint unions
add, dilations reindex, blocks regroup, walk sets go through integer
matrix powers).  Materializing paths honor a word budget and fail loudly
instead of truncating.

Leaf combinators:
  FullShift(alphabet)          all sequences
  EvConst(alphabet, z)         sequences eventually constant at z
  CylSched(alphabet, rule)     coordinate-wise subset products
  SRSet(alphabet, z, ratio)    frozen/free block pattern at a growth rate
  FiniteSet(alphabet, seqs)    finitely many eventually periodic sequences
  Orbit(map)                   forward orbits of a finite map, seed first
  OrbitSV(relation)            admissible walks of a transition relation

Transformers: ShiftK (drop a fixed opening), DilateK (repeat every
coordinate k times), RestrictK (keep every k-th coordinate), BlockK
(regroup k coordinates into one symbol), SetUnion, DisjointUnion (tagged),
SetProduct (coordinatewise pairing), Image (symbol-wise recoding), and
Closure, which is a counting no-op kept as an explicit marker because
closing a set never changes its prefix counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .alphabet import Alphabet, PrefixSet
from .dynamics import FiniteMap, TransitionRelation, count_walks
from .schedules import FrozenFreeBlocks, PeriodicSubsets, build_schedule

DEFAULT_BUDGET = 1 << 24


class BudgetExceededError(RuntimeError):
    """Raised when a materialization would exceed the word budget."""

    def __init__(self, needed: int, budget: int, context: str):
        self.needed = needed
        self.budget = budget
        super().__init__(
            f"budget exceeded: {context} needs about {needed} words, budget {budget}"
        )


@dataclass(frozen=True)
class EventuallySeq:
    """An eventually periodic sequence given by a preperiod and a period."""

    pre: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("period must be nonempty")

    def at(self, i: int) -> int:
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self.at(i) for i in range(n))


@dataclass(frozen=True)
class SymbolMap:
    """A symbol-wise recoding between two alphabets."""

    source: Alphabet
    target: Alphabet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != self.source.size:
            raise ValueError(
                f"table must list {self.source.size} images, got {len(self.table)}"
            )
        for v in self.table:
            if not 0 <= v < self.target.size:
                raise ValueError(f"image {v} out of range for target alphabet")

    def __call__(self, s: int) -> int:
        return self.table[s]

    def injective(self) -> bool:
        return len(set(self.table)) == len(self.table)


@dataclass(frozen=True)
class FullShift:
    alphabet: Alphabet


@dataclass(frozen=True)
class EvConst:
    alphabet: Alphabet
    z: int


@dataclass(frozen=True)
class CylSched:
    alphabet: Alphabet
    rule: PeriodicSubsets | FrozenFreeBlocks


@dataclass(frozen=True)
class SRSet:
    """Frozen/free block set whose count at block ends is k**p_k."""

    alphabet: Alphabet
    z: int
    ratio: Fraction

    def rule(self) -> FrozenFreeBlocks:
        seed = build_schedule(self.ratio, 1)
        return FrozenFreeBlocks(self.alphabet.size, self.z, seed.pairs, self.ratio)


@dataclass(frozen=True)
class FiniteSet:
    alphabet: Alphabet
    seqs: tuple[EventuallySeq, ...]


@dataclass(frozen=True)
class Orbit:
    table: FiniteMap


@dataclass(frozen=True)
class OrbitSV:
    relation: TransitionRelation


@dataclass(frozen=True)
class ShiftK:
    k: int
    child: "SeqSetExpr"


@dataclass(frozen=True)
class DilateK:
    k: int
    child: "SeqSetExpr"


@dataclass(frozen=True)
class RestrictK:
    k: int
    child: "SeqSetExpr"


@dataclass(frozen=True)
class BlockK:
    k: int
    child: "SeqSetExpr"


@dataclass(frozen=True)
class SetUnion:
    left: "SeqSetExpr"
    right: "SeqSetExpr"


@dataclass(frozen=True)
class DisjointUnion:
    left: "SeqSetExpr"
    right: "SeqSetExpr"


@dataclass(frozen=True)
class SetProduct:
    left: "SeqSetExpr"
    right: "SeqSetExpr"


@dataclass(frozen=True)
class Image:
    map: SymbolMap
    child: "SeqSetExpr"


@dataclass(frozen=True)
class Closure:
    child: "SeqSetExpr"


SeqSetExpr = (
    FullShift
    | EvConst
    | CylSched
    | SRSet
    | FiniteSet
    | Orbit
    | OrbitSV
    | ShiftK
    | DilateK
    | RestrictK
    | BlockK
    | SetUnion
    | DisjointUnion
    | SetProduct
    | Image
    | Closure
)

_NODE_NAMES = {
    FullShift: "full",
    EvConst: "evconst",
    CylSched: "cylsched",
    SRSet: "sr",
    FiniteSet: "finite",
    Orbit: "orbit",
    OrbitSV: "sft",
    ShiftK: "shift",
    DilateK: "dilate",
    RestrictK: "restrict",
    BlockK: "block",
    SetUnion: "union",
    DisjointUnion: "djunion",
    SetProduct: "prod",
    Image: "image",
    Closure: "cls",
}


def node_name(expr: SeqSetExpr) -> str:
    return _NODE_NAMES[type(expr)]


def children(expr: SeqSetExpr) -> tuple[SeqSetExpr, ...]:
    if isinstance(expr, (ShiftK, DilateK, RestrictK, BlockK, Closure)):
        return (expr.child,)
    if isinstance(expr, (SetUnion, DisjointUnion, SetProduct)):
        return (expr.left, expr.right)
    if isinstance(expr, Image):
        return (expr.child,)
    return ()


def alphabet_of(expr: SeqSetExpr) -> Alphabet:
    """Output alphabet of the denoted sequences."""
    if isinstance(expr, (FullShift, EvConst, CylSched, SRSet, FiniteSet)):
        return expr.alphabet
    if isinstance(expr, Orbit):
        return expr.table.alphabet
    if isinstance(expr, OrbitSV):
        return expr.relation.alphabet
    if isinstance(expr, (ShiftK, DilateK, RestrictK, Closure)):
        return alphabet_of(expr.child)
    if isinstance(expr, SetUnion):
        return alphabet_of(expr.left)
    if isinstance(expr, DisjointUnion):
        k = alphabet_of(expr.left).size + alphabet_of(expr.right).size
        return Alphabet(k)
    if isinstance(expr, SetProduct):
        k = alphabet_of(expr.left).size * alphabet_of(expr.right).size
        return Alphabet(k)
    if isinstance(expr, Image):
        return expr.map.target
    if isinstance(expr, BlockK):
        return Alphabet(alphabet_of(expr.child).size ** expr.k)
    raise TypeError(f"not a sequence-set expression: {expr!r}")


def node_problems(expr: SeqSetExpr) -> list[str]:
    """Single-node structural checks; children are not descended into."""
    problems: list[str] = []
    if isinstance(expr, EvConst):
        if not 0 <= expr.z < expr.alphabet.size:
            problems.append(f"constant symbol {expr.z} out of range")
    elif isinstance(expr, CylSched):
        k = expr.alphabet.size
        if isinstance(expr.rule, PeriodicSubsets):
            for which, subsets in (("pre", expr.rule.pre), ("period", expr.rule.period)):
                for i, z in enumerate(subsets):
                    if not z:
                        problems.append(f"{which} subset {i} is empty")
                    elif min(z) < 0 or max(z) >= k:
                        problems.append(f"{which} subset {i} has symbols out of range")
        else:
            if expr.rule.size != k:
                problems.append(
                    f"rule alphabet size {expr.rule.size} differs from {k}"
                )
    elif isinstance(expr, SRSet):
        if not 0 <= expr.z < expr.alphabet.size:
            problems.append(f"frozen symbol {expr.z} out of range")
        if not 0 < expr.ratio <= 1:
            problems.append(f"rate {expr.ratio} outside (0, 1]")
    elif isinstance(expr, FiniteSet):
        if not expr.seqs:
            problems.append("finite set needs at least one sequence")
        k = expr.alphabet.size
        for i, seq in enumerate(expr.seqs):
            for s in seq.pre + seq.period:
                if not 0 <= s < k:
                    problems.append(f"sequence {i} has symbol {s} out of range")
                    break
    elif isinstance(expr, (ShiftK, RestrictK)):
        if expr.k < 1:
            problems.append(f"step {expr.k} must be >= 1")
    elif isinstance(expr, (DilateK, BlockK)):
        if expr.k < 2:
            problems.append(f"factor {expr.k} must be >= 2")
    elif isinstance(expr, SetUnion):
        kl = alphabet_of(expr.left).size
        kr = alphabet_of(expr.right).size
        if kl != kr:
            problems.append(f"union of mismatched alphabets ({kl} vs {kr})")
    elif isinstance(expr, Image):
        kc = alphabet_of(expr.child).size
        if expr.map.source.size != kc:
            problems.append(
                f"map expects alphabet {expr.map.source.size}, child has {kc}"
            )
    return problems


def validate(expr: SeqSetExpr) -> list[str]:
    """All structural problems in the expression tree, path-tagged."""

    problems: list[str] = []

    def walk(node: SeqSetExpr, path: str) -> None:
        for msg in node_problems(node):
            problems.append(f"{path}: {msg}" if path else msg)
        name = node_name(node)
        kids = children(node)
        if len(kids) == 1:
            walk(kids[0], f"{path}.{name}" if path else name)
        elif len(kids) == 2:
            base = f"{path}.{name}" if path else name
            walk(kids[0], base + ".left")
            walk(kids[1], base + ".right")

    walk(expr, "")
    return problems


def _require_valid(expr: SeqSetExpr) -> None:
    problems = validate(expr)
    if problems:
        raise ValueError("invalid expression: " + "; ".join(problems))


def _check_budget(needed: int, budget: int, context: str) -> None:
    if needed > budget:
        raise BudgetExceededError(needed, budget, context)


def prefixes(expr: SeqSetExpr, n: int, budget: int | None = None) -> PrefixSet:
    """Materialize the distinct length-n openings of the denoted set."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _require_valid(expr)
    b = DEFAULT_BUDGET if budget is None else budget
    words = _words(expr, n, b)
    return PrefixSet(alphabet_of(expr), n, frozenset(words))


def count_prefixes(expr: SeqSetExpr, n: int, budget: int | None = None) -> int:
    """Number of distinct length-n openings, via shortcuts where possible."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _require_valid(expr)
    b = DEFAULT_BUDGET if budget is None else budget
    return _count(expr, n, b)


def _rule_of(expr: CylSched | SRSet) -> PeriodicSubsets | FrozenFreeBlocks:
    return expr.rule() if isinstance(expr, SRSet) else expr.rule


def _words(expr: SeqSetExpr, n: int, budget: int) -> set[tuple[int, ...]]:
    if n == 0:
        return {()}
    k = alphabet_of(expr).size

    if isinstance(expr, (FullShift, EvConst)):
        _check_budget(k**n, budget, node_name(expr))
        return set(itertools.product(range(k), repeat=n))

    if isinstance(expr, (CylSched, SRSet)):
        rule = _rule_of(expr)
        _check_budget(rule.count_upto(n), budget, node_name(expr))
        choices = [sorted(rule.subset(i)) for i in range(n)]
        return set(itertools.product(*choices))

    if isinstance(expr, FiniteSet):
        return {seq.prefix(n) for seq in expr.seqs}

    if isinstance(expr, Orbit):
        return {expr.table.orbit_prefix(x, n) for x in range(k)}

    if isinstance(expr, OrbitSV):
        words: set[tuple[int, ...]] = {(s,) for s in range(k)}
        succ = expr.relation.successors
        for _ in range(n - 1):
            words = {w + (s,) for w in words for s in succ[w[-1]]}
            _check_budget(len(words), budget, "sft")
        return words

    if isinstance(expr, ShiftK):
        child_words = _words(expr.child, n + expr.k, budget)
        return {w[expr.k :] for w in child_words}

    if isinstance(expr, DilateK):
        m = -(-n // expr.k)
        child_words = _words(expr.child, m, budget)
        return {tuple(w[i // expr.k] for i in range(n)) for w in child_words}

    if isinstance(expr, RestrictK):
        child_words = _words(expr.child, (n - 1) * expr.k + 1, budget)
        return {tuple(w[i * expr.k] for i in range(n)) for w in child_words}

    if isinstance(expr, BlockK):
        base = alphabet_of(expr.child).size
        child_words = _words(expr.child, n * expr.k, budget)
        out = set()
        for w in child_words:
            packed = []
            for j in range(n):
                value = 0
                for t in range(expr.k):
                    value = value * base + w[j * expr.k + t]
                packed.append(value)
            out.add(tuple(packed))
        return out

    if isinstance(expr, SetUnion):
        left = _words(expr.left, n, budget)
        right = _words(expr.right, n, budget)
        merged = left | right
        _check_budget(len(merged), budget, "union")
        return merged

    if isinstance(expr, DisjointUnion):
        kl = alphabet_of(expr.left).size
        left = _words(expr.left, n, budget)
        right = _words(expr.right, n, budget)
        _check_budget(len(left) + len(right), budget, "djunion")
        shifted = {tuple(s + kl for s in w) for w in right}
        return left | shifted

    if isinstance(expr, SetProduct):
        left = _words(expr.left, n, budget)
        right = _words(expr.right, n, budget)
        _check_budget(len(left) * len(right), budget, "prod")
        kr = alphabet_of(expr.right).size
        out = set()
        for a in left:
            for c in right:
                out.add(tuple(a[i] * kr + c[i] for i in range(n)))
        return out

    if isinstance(expr, Image):
        child_words = _words(expr.child, n, budget)
        table = expr.map.table
        return {tuple(table[s] for s in w) for w in child_words}

    if isinstance(expr, Closure):
        return _words(expr.child, n, budget)

    raise TypeError(f"not a sequence-set expression: {expr!r}")


def _count(expr: SeqSetExpr, n: int, budget: int) -> int:
    if n == 0:
        return 1
    k = alphabet_of(expr).size

    if isinstance(expr, (FullShift, EvConst)):
        return k**n
    if isinstance(expr, (CylSched, SRSet)):
        return _rule_of(expr).count_upto(n)
    if isinstance(expr, FiniteSet):
        return len({seq.prefix(n) for seq in expr.seqs})
    if isinstance(expr, Orbit):
        return k
    if isinstance(expr, OrbitSV):
        return count_walks(expr.relation, n)
    if isinstance(expr, DilateK):
        return _count(expr.child, -(-n // expr.k), budget)
    if isinstance(expr, BlockK):
        return _count(expr.child, n * expr.k, budget)
    if isinstance(expr, DisjointUnion):
        return _count(expr.left, n, budget) + _count(expr.right, n, budget)
    if isinstance(expr, SetProduct):
        return _count(expr.left, n, budget) * _count(expr.right, n, budget)
    if isinstance(expr, Image) and expr.map.injective():
        return _count(expr.child, n, budget)
    if isinstance(expr, Closure):
        return _count(expr.child, n, budget)
    return len(_words(expr, n, budget))


def count_upper_bound(expr: SeqSetExpr, n: int) -> int:
    """Cheap upper bound on count_prefixes, never materializing words."""
    if n <= 0:
        return 1
    k = alphabet_of(expr).size
    if isinstance(expr, (FullShift, EvConst)):
        return k**n
    if isinstance(expr, (CylSched, SRSet)):
        return _rule_of(expr).count_upto(n)
    if isinstance(expr, FiniteSet):
        return max(1, len(expr.seqs))
    if isinstance(expr, Orbit):
        return k
    if isinstance(expr, OrbitSV):
        return count_walks(expr.relation, n)
    if isinstance(expr, ShiftK):
        return min(k**n, count_upper_bound(expr.child, n + expr.k))
    if isinstance(expr, DilateK):
        return count_upper_bound(expr.child, -(-n // expr.k))
    if isinstance(expr, RestrictK):
        return min(k**n, count_upper_bound(expr.child, (n - 1) * expr.k + 1))
    if isinstance(expr, BlockK):
        return count_upper_bound(expr.child, n * expr.k)
    if isinstance(expr, (SetUnion, DisjointUnion)):
        return min(
            k**n,
            count_upper_bound(expr.left, n) + count_upper_bound(expr.right, n),
        )
    if isinstance(expr, SetProduct):
        return count_upper_bound(expr.left, n) * count_upper_bound(expr.right, n)
    if isinstance(expr, (Image, Closure)):
        return min(k**n, count_upper_bound(expr.child, n))
    raise TypeError(f"not a sequence-set expression: {expr!r}")


def materialization_bound(expr: SeqSetExpr, n: int) -> int:
    """Upper bound on the largest word set count_prefixes materializes."""
    if n <= 0:
        return 0
    if isinstance(expr, (FullShift, EvConst, CylSched, SRSet, Orbit, OrbitSV)):
        return 0
    if isinstance(expr, FiniteSet):
        return len(expr.seqs)
    if isinstance(expr, DilateK):
        return materialization_bound(expr.child, -(-n // expr.k))
    if isinstance(expr, BlockK):
        return materialization_bound(expr.child, n * expr.k)
    if isinstance(expr, (DisjointUnion, SetProduct)):
        return max(
            materialization_bound(expr.left, n),
            materialization_bound(expr.right, n),
        )
    if isinstance(expr, Closure):
        return materialization_bound(expr.child, n)
    if isinstance(expr, Image) and expr.map.injective():
        return materialization_bound(expr.child, n)
    return _forced_words_bound(expr, n)


def _forced_words_bound(expr: SeqSetExpr, n: int) -> int:
    """Materialization bound once a node is evaluated by word expansion."""
    if n <= 0:
        return 0
    k = alphabet_of(expr).size
    if isinstance(expr, (FullShift, EvConst)):
        return k**n
    if isinstance(expr, (CylSched, SRSet)):
        return _rule_of(expr).count_upto(n)
    if isinstance(expr, FiniteSet):
        return len(expr.seqs)
    if isinstance(expr, Orbit):
        return k
    if isinstance(expr, OrbitSV):
        return count_walks(expr.relation, n)
    if isinstance(expr, ShiftK):
        return _forced_words_bound(expr.child, n + expr.k)
    if isinstance(expr, DilateK):
        return _forced_words_bound(expr.child, -(-n // expr.k))
    if isinstance(expr, RestrictK):
        return _forced_words_bound(expr.child, (n - 1) * expr.k + 1)
    if isinstance(expr, BlockK):
        return _forced_words_bound(expr.child, n * expr.k)
    if isinstance(expr, (SetUnion, DisjointUnion)):
        return _forced_words_bound(expr.left, n) + _forced_words_bound(expr.right, n)
    if isinstance(expr, SetProduct):
        return _forced_words_bound(expr.left, n) * _forced_words_bound(expr.right, n)
    if isinstance(expr, (Image, Closure)):
        return _forced_words_bound(expr.child, n)
    raise TypeError(f"not a sequence-set expression: {expr!r}")


def full_shift(k: int) -> FullShift:
    return FullShift(Alphabet(k))


def ev_const(k: int, z: int = 0) -> EvConst:
    return EvConst(Alphabet(k), z)


def sr_set(k: int, ratio: Fraction | int, z: int = 0) -> SRSet:
    return SRSet(Alphabet(k), z, Fraction(ratio))


def finite_set(k: int, *seqs: tuple[tuple[int, ...], tuple[int, ...]]) -> FiniteSet:
    return FiniteSet(
        Alphabet(k), tuple(EventuallySeq(tuple(p), tuple(q)) for p, q in seqs)
    )
