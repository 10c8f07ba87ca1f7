"""Maps and transition relations on finite alphabets, plus orbit sets.

A single-valued map yields the set of forward orbits (seed first, so the
count of length-n openings is exactly the number of starting points).  A
transition relation yields the set of admissible walks, counted exactly by
integer matrix powers.  ``ModifiedMap`` redirects an invariant region to a
single target point and checks the invariance hypotheses before use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .alphabet import Alphabet


@dataclass(frozen=True)
class FiniteMap:
    """A total single-valued map on a finite alphabet, given by its table."""

    alphabet: Alphabet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        k = self.alphabet.size
        if len(self.table) != k:
            raise ValueError(f"table must list {k} images, got {len(self.table)}")
        for v in self.table:
            if not 0 <= v < k:
                raise ValueError(f"image {v} out of range for alphabet size {k}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def orbit_prefix(self, x: int, n: int) -> tuple[int, ...]:
        out = []
        cur = x
        for _ in range(n):
            out.append(cur)
            cur = self.table[cur]
        return tuple(out)


@dataclass(frozen=True)
class TransitionRelation:
    """A total multi-valued successor relation on a finite alphabet."""

    alphabet: Alphabet
    successors: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        k = self.alphabet.size
        if len(self.successors) != k:
            raise ValueError(
                f"expected {k} successor sets, got {len(self.successors)}"
            )
        for i, succ in enumerate(self.successors):
            if not succ:
                raise ValueError(f"symbol {i} has no successors")
            for v in succ:
                if not 0 <= v < k:
                    raise ValueError(f"successor {v} out of range")


def count_walks(relation: TransitionRelation, n: int) -> int:
    """Number of admissible walks visiting n vertices, exactly.

    Uses plain integer matrix powering so no count ever overflows.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1
    k = relation.alphabet.size
    mat = [[1 if j in relation.successors[i] else 0 for j in range(k)] for i in range(k)]
    power = _mat_pow(mat, n - 1)
    return sum(sum(row) for row in power)


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    k = len(a)
    out = [[0] * k for _ in range(k)]
    for i in range(k):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            ait = ai[t]
            if ait:
                bt = b[t]
                for j in range(k):
                    oi[j] += ait * bt[j]
    return out


def _mat_pow(mat: list[list[int]], e: int) -> list[list[int]]:
    k = len(mat)
    result = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    base = mat
    while e > 0:
        if e & 1:
            result = _mat_mul(result, base)
        base = _mat_mul(base, base)
        e >>= 1
    return result


def orbit_seqset(table: FiniteMap):
    """Sequence set of all forward orbits of a finite map."""
    from .seqset import Orbit

    return Orbit(table)


def sft_seqset(relation: TransitionRelation):
    """Sequence set of all admissible walks of a transition relation."""
    from .seqset import OrbitSV

    return OrbitSV(relation)


@dataclass(frozen=True)
class ModifiedMap:
    """A map with an invariant region redirected to a single point z.

    ``base`` is either a FiniteMap or a callable on ambient points.  The
    region is a frozenset of symbols in the finite case and a membership
    predicate otherwise.  The modification sends region points to ``z`` and
    leaves the rest of the map alone; it is only meaningful when both the
    region and its complement are forward invariant under ``base``.
    """

    base: Any
    region: Any
    z: Any

    def is_finite(self) -> bool:
        return isinstance(self.base, FiniteMap)


class InvarianceError(ValueError):
    """Raised when the region or its complement fails forward invariance."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        shown = "; ".join(violations[:10])
        more = "" if len(violations) <= 10 else f" (+{len(violations) - 10} more)"
        super().__init__(f"invariance check failed: {shown}{more}")


def check_invariance(
    modified: ModifiedMap, sample: Iterable[Any] | None = None
) -> list[str]:
    """Verify T(region) stays in the region and T(complement) outside it.

    Finite maps are checked exhaustively; metric maps are checked on the
    given sample points.  Returns a list of human-readable violations.
    """
    violations: list[str] = []
    if modified.is_finite():
        base: FiniteMap = modified.base
        region = frozenset(modified.region)
        k = base.alphabet.size
        if not 0 <= modified.z < k:
            violations.append(f"target z={modified.z} out of range")
        for x in range(k):
            inside = x in region
            image_inside = base(x) in region
            if inside and not image_inside:
                violations.append(f"region point {x} maps outside: {base(x)}")
            if not inside and image_inside:
                violations.append(f"outside point {x} maps into region: {base(x)}")
        return violations
    if sample is None:
        raise ValueError("metric maps need sample points for the invariance check")
    member: Callable[[Any], bool] = modified.region
    for i, x in enumerate(sample):
        y = modified.base(x)
        if member(x) and not member(y):
            violations.append(f"sample {i}: region point maps outside")
        if not member(x) and member(y):
            violations.append(f"sample {i}: outside point maps into region")
    return violations


def modify_map(
    modified: ModifiedMap, sample: Sequence[Any] | None = None
) -> FiniteMap | Callable[[Any], Any]:
    """Build the redirected map after the invariance check passes.

    Raises InvarianceError listing offending points otherwise.
    """
    violations = check_invariance(modified, sample)
    if violations:
        raise InvarianceError(violations)
    if modified.is_finite():
        base: FiniteMap = modified.base
        region = frozenset(modified.region)
        table = tuple(
            modified.z if x in region else base(x)
            for x in range(base.alphabet.size)
        )
        return FiniteMap(base.alphabet, table)
    member = modified.region
    base_fn = modified.base
    z = modified.z

    def redirected(x: Any) -> Any:
        return z if member(x) else base_fn(x)

    return redirected
