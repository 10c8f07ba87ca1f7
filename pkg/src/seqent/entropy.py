"""Growth-rate estimation and closed-form evaluation for prefix counts.

The growth rate of a count sequence is read off the per-n values
a_n = log(count_n) / n, in nats.  Two finite-sample estimators are
provided: ``tail-max`` takes the largest a_n over a trailing window (the
finite stand-in for a limsup) and ``regression`` fits a least-squares
slope to log counts over the same window.  ``entropy_exact`` walks an
expression and returns the exact rate whenever the combinator algebra
pins it down, refusing politely otherwise: products, restrictions and
non-injective images only carry one-sided bounds in general, so they only
collapse when a factor has bounded counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .alphabet import Alphabet
from .schedules import FrozenFreeBlocks, PeriodicSubsets
from .seqset import (
    BlockK,
    Closure,
    CylSched,
    DilateK,
    DisjointUnion,
    EvConst,
    FiniteSet,
    FullShift,
    Image,
    Orbit,
    OrbitSV,
    RestrictK,
    SRSet,
    SetProduct,
    SetUnion,
    ShiftK,
    SymbolMap,
    SeqSetExpr,
    alphabet_of,
    count_prefixes,
)


@dataclass(frozen=True)
class CountSeries:
    """Counts at strictly increasing horizons n >= 1."""

    entries: tuple[tuple[int, int], ...]
    source: str = ""
    alphabet_size: int | None = None

    def __post_init__(self) -> None:
        prev = 0
        for n, count in self.entries:
            if n <= prev:
                raise ValueError("horizons must be strictly increasing and >= 1")
            if count < 1:
                raise ValueError(f"count at n={n} must be >= 1, got {count}")
            if self.alphabet_size is not None and count > self.alphabet_size**n:
                raise ValueError(
                    f"count {count} at n={n} exceeds {self.alphabet_size}**{n}"
                )
            prev = n

    def a_values(self) -> tuple[tuple[int, float], ...]:
        return tuple((n, math.log(c) / n) for n, c in self.entries)


def count_series(
    expr: SeqSetExpr, n_max: int, budget: int | None = None, source: str = ""
) -> CountSeries:
    """Counts for n = 1..n_max of a sequence-set expression."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    entries = tuple((n, count_prefixes(expr, n, budget)) for n in range(1, n_max + 1))
    return CountSeries(entries, source=source, alphabet_size=alphabet_of(expr).size)


@dataclass(frozen=True)
class EstimatorConfig:
    mode: str = "tail-max"
    window: int | None = None
    max_n: int | None = None


@dataclass(frozen=True)
class EntropyEstimate:
    """A rate value plus the diagnostics that produced it.

    ``a_n`` holds the per-horizon values, ``window`` the horizons actually
    used, ``flags`` named facts observed on the data, and ``proof`` the
    closed form used when mode is "exact".
    """

    value: float
    mode: str
    a_n: tuple[tuple[int, float], ...] = ()
    window: tuple[int, ...] = ()
    flags: tuple[str, ...] = ()
    proof: str | None = None


def entropy_estimate(series: CountSeries, cfg: EstimatorConfig | None = None) -> EntropyEstimate:
    """Finite-sample growth rate from a count series."""
    cfg = cfg or EstimatorConfig()
    entries = series.entries
    if cfg.max_n is not None:
        entries = tuple(e for e in entries if e[0] <= cfg.max_n)
    if not entries:
        raise ValueError("no entries within max_n")
    if cfg.mode not in ("tail-max", "regression"):
        raise ValueError(f"unknown estimator mode {cfg.mode!r}")

    a_all = tuple((n, math.log(c) / n) for n, c in entries)
    w = cfg.window if cfg.window is not None else -(-len(entries) // 3)
    w = max(1, min(w, len(entries)))
    tail = entries[-w:]
    window_ns = tuple(n for n, _ in tail)

    flags = []
    counts = [c for _, c in entries]
    if all(b >= a for a, b in zip(counts, counts[1:])):
        flags.append("counts-nondecreasing")
    a_vals = [a for _, a in a_all]
    if all(b >= a - 1e-12 for a, b in zip(a_vals, a_vals[1:])):
        flags.append("a_n-nondecreasing")

    if cfg.mode == "tail-max":
        value = max(math.log(c) / n for n, c in tail)
    else:
        value = max(0.0, _slope([(n, math.log(c)) for n, c in tail]))
        flags.append("regression")

    lo, hi = 0.0, math.inf
    if series.alphabet_size is not None:
        hi = math.log(series.alphabet_size) if series.alphabet_size > 1 else 0.0
    clamped = min(max(value, lo), hi)
    if clamped != value:
        flags.append("clamped")
    return EntropyEstimate(
        value=clamped,
        mode=cfg.mode,
        a_n=a_all,
        window=window_ns,
        flags=tuple(flags),
    )


def _slope(points: list[tuple[float, float]]) -> float:
    if len(points) < 2:
        return 0.0
    mx = sum(x for x, _ in points) / len(points)
    my = sum(y for _, y in points) / len(points)
    sxx = sum((x - mx) ** 2 for x, _ in points)
    if sxx == 0:
        return 0.0
    sxy = sum((x - mx) * (y - my) for x, y in points)
    return sxy / sxx


def bounded_counts(expr: SeqSetExpr) -> bool:
    """True when prefix counts of the expression are bounded in n.

    Conservative and purely structural; used to collapse product-like
    nodes where the unbounded factor alone sets the rate.
    """
    if isinstance(expr, (FiniteSet, Orbit)):
        return True
    if isinstance(expr, (ShiftK, DilateK, RestrictK, BlockK, Image, Closure)):
        return bounded_counts(expr.child)
    if isinstance(expr, (SetUnion, DisjointUnion, SetProduct)):
        return bounded_counts(expr.left) and bounded_counts(expr.right)
    return False


def entropy_exact(expr: SeqSetExpr) -> EntropyEstimate | None:
    """Exact growth rate when the algebra determines one, else None.

    None is a first-class answer meaning "no closed form at this node",
    not a failure.
    """
    got = _exact(expr)
    if got is None:
        return None
    value, proof = got
    return EntropyEstimate(value=value, mode="exact", proof=proof)


def _exact(expr: SeqSetExpr) -> tuple[float, str] | None:
    k = alphabet_of(expr).size
    if isinstance(expr, FullShift):
        return math.log(k), "full-shift"
    if isinstance(expr, EvConst):
        return math.log(k), "eventually-constant"
    if isinstance(expr, FiniteSet):
        return 0.0, "finite-set"
    if isinstance(expr, Orbit):
        return 0.0, "orbit-of-map"
    if isinstance(expr, SRSet):
        return float(expr.ratio) * math.log(k), f"scheduled-rate({expr.ratio})"
    if isinstance(expr, CylSched):
        if isinstance(expr.rule, PeriodicSubsets):
            return expr.rule.mean_log_size(), "periodic-schedule"
        if isinstance(expr.rule, FrozenFreeBlocks):
            return expr.rule.rate(), f"scheduled-rate({expr.rule.target})"
        return None
    if isinstance(expr, ShiftK):
        got = _exact(expr.child)
        if got is None:
            return None
        return got[0], f"shift-invariance<-{got[1]}"
    if isinstance(expr, DilateK):
        got = _exact(expr.child)
        if got is None:
            return None
        return got[0] / expr.k, f"dilation/{expr.k}<-{got[1]}"
    if isinstance(expr, BlockK):
        got = _exact(expr.child)
        if got is None:
            return None
        return got[0] * expr.k, f"blocking*{expr.k}<-{got[1]}"
    if isinstance(expr, (SetUnion, DisjointUnion)):
        left = _exact(expr.left)
        right = _exact(expr.right)
        if left is None or right is None:
            return None
        kind = "union-max" if isinstance(expr, SetUnion) else "djunion-max"
        return max(left[0], right[0]), kind
    if isinstance(expr, Closure):
        got = _exact(expr.child)
        if got is None:
            return None
        return got[0], f"closure<-{got[1]}"
    if isinstance(expr, Image):
        if expr.map.injective():
            got = _exact(expr.child)
            if got is None:
                return None
            return got[0], f"injective-image<-{got[1]}"
        if bounded_counts(expr.child):
            return 0.0, "image-of-bounded"
        return None
    if isinstance(expr, SetProduct):
        lb = bounded_counts(expr.left)
        rb = bounded_counts(expr.right)
        if lb and rb:
            return 0.0, "product-of-bounded"
        if rb:
            got = _exact(expr.left)
            if got is not None:
                return got[0], f"product-bounded-factor<-{got[1]}"
        if lb:
            got = _exact(expr.right)
            if got is not None:
                return got[0], f"product-bounded-factor<-{got[1]}"
        return None
    if isinstance(expr, RestrictK):
        if bounded_counts(expr.child):
            return 0.0, "restriction-of-bounded"
        return None
    if isinstance(expr, OrbitSV):
        return None
    return None


@dataclass(frozen=True)
class DivergenceWitness:
    """Exact rates of nested k-symbol subsets inside one big alphabet.

    The rows grow like log k without bound, which is the finite-alphabet
    witness that no uniform rate bound survives on infinite alphabets.
    """

    rows: tuple[tuple[int, float], ...]
    limit: EntropyEstimate


def divergence_witness(k_max: int) -> DivergenceWitness:
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    target = Alphabet(k_max)
    rows = []
    for k in range(1, k_max + 1):
        source = Alphabet(k)
        embed = SymbolMap(source, target, tuple(range(k)))
        embedded = Image(embed, EvConst(source, 0))
        est = entropy_exact(embedded)
        assert est is not None
        rows.append((k, est.value))
    limit = EntropyEstimate(
        value=math.inf, mode="exact", proof="unbounded-subspace-family"
    )
    return DivergenceWitness(tuple(rows), limit)
