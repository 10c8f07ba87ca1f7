"""Finite maps, transition relations, walk counting, and region redirects."""

import itertools
import random

import pytest

from seqent import (
    Alphabet,
    FiniteMap,
    InvarianceError,
    ModifiedMap,
    Orbit,
    TransitionRelation,
    check_invariance,
    count_prefixes,
    count_walks,
    modify_map,
    orbit_seqset,
    prefixes,
    sft_seqset,
)
from seqent.seqset import OrbitSV

GOLDEN = TransitionRelation(Alphabet(2), (frozenset({0, 1}), frozenset({0})))


def _enumerate_walks(rel: TransitionRelation, n: int) -> int:
    """Oracle: count admissible walks by brute-force generation."""
    if n == 0:
        return 1
    walks = [(s,) for s in range(rel.alphabet.size)]
    for _ in range(n - 1):
        walks = [w + (s,) for w in walks for s in rel.successors[w[-1]]]
    return len(walks)


def test_finite_map_validation():
    with pytest.raises(ValueError):
        FiniteMap(Alphabet(3), (0, 1))
    with pytest.raises(ValueError):
        FiniteMap(Alphabet(3), (0, 1, 3))
    f = FiniteMap(Alphabet(3), (1, 2, 0))
    assert f(0) == 1
    assert f.orbit_prefix(0, 5) == (0, 1, 2, 0, 1)


def test_relation_validation():
    with pytest.raises(ValueError):
        TransitionRelation(Alphabet(2), (frozenset({0}),))
    with pytest.raises(ValueError):
        TransitionRelation(Alphabet(2), (frozenset({0}), frozenset()))
    with pytest.raises(ValueError):
        TransitionRelation(Alphabet(2), (frozenset({0}), frozenset({2})))


def test_count_walks_golden():
    assert [count_walks(GOLDEN, n) for n in range(1, 7)] == [2, 3, 5, 8, 13, 21]
    assert count_walks(GOLDEN, 0) == 1
    with pytest.raises(ValueError):
        count_walks(GOLDEN, -1)


def test_count_walks_complete_and_loop():
    complete = TransitionRelation(
        Alphabet(3), tuple(frozenset({0, 1, 2}) for _ in range(3))
    )
    for n in range(7):
        assert count_walks(complete, n) == 3**n if n else 1
    loop = TransitionRelation(Alphabet(1), (frozenset({0}),))
    assert count_walks(loop, 9) == 1


def test_count_walks_matches_enumeration():
    rng = random.Random(7)
    for _ in range(30):
        k = rng.randint(1, 4)
        succ = tuple(
            frozenset(rng.sample(range(k), rng.randint(1, k))) for _ in range(k)
        )
        rel = TransitionRelation(Alphabet(k), succ)
        for n in range(0, 8):
            assert count_walks(rel, n) == _enumerate_walks(rel, n)


def test_count_walks_no_overflow():
    complete = TransitionRelation(
        Alphabet(5), tuple(frozenset(range(5)) for _ in range(5))
    )
    assert count_walks(complete, 50) == 5**50  # exact big integer


def test_orbit_counts_are_seed_counts():
    for table in ((0, 1, 2), (1, 2, 0), (1, 1, 1)):
        expr = Orbit(FiniteMap(Alphabet(3), table))
        for n in range(1, 6):
            assert count_prefixes(expr, n) == 3


def test_seqset_bridges():
    f = FiniteMap(Alphabet(2), (1, 0))
    assert isinstance(orbit_seqset(f), Orbit)
    assert isinstance(sft_seqset(GOLDEN), OrbitSV)
    assert count_prefixes(sft_seqset(GOLDEN), 6) == 21


def test_modify_identity_on_region():
    base = FiniteMap(Alphabet(4), (0, 1, 2, 3))
    modified = modify_map(ModifiedMap(base, frozenset({0, 1}), 0))
    assert modified.table == (0, 0, 2, 3)
    expr = Orbit(modified)
    assert [count_prefixes(expr, n) for n in range(1, 5)] == [4, 4, 4, 4]
    assert prefixes(expr, 2).sorted_words() == [(0, 0), (1, 0), (2, 2), (3, 3)]


def test_modified_counts_never_exceed_base():
    # collapsing a region cannot create new orbit openings
    rng = random.Random(11)
    for _ in range(40):
        k = rng.randint(2, 5)
        table = tuple(rng.randrange(k) for _ in range(k))
        base = FiniteMap(Alphabet(k), table)
        # choose a forward-invariant region by closing a seed set under the map
        region = set(rng.sample(range(k), rng.randint(1, k)))
        while True:
            grown = region | {table[x] for x in region}
            if grown == region:
                break
            region = grown
        complement_ok = all(table[x] not in region for x in range(k) if x not in region)
        if not complement_ok:
            continue
        z = rng.choice(sorted(region))
        modified = modify_map(ModifiedMap(base, frozenset(region), z))
        for n in range(1, 6):
            assert count_prefixes(Orbit(modified), n) <= count_prefixes(Orbit(base), n)


def test_modify_region_of_z_only_is_noop():
    base = FiniteMap(Alphabet(3), (0, 2, 1))
    modified = modify_map(ModifiedMap(base, frozenset({0}), 0))
    assert modified.table == base.table


def test_invariance_violations_reported():
    base = FiniteMap(Alphabet(3), (1, 2, 0))  # a 3-cycle: nothing is invariant
    bad = ModifiedMap(base, frozenset({0}), 0)
    msgs = check_invariance(bad)
    assert any("region point 0 maps outside" in m for m in msgs)
    assert any("maps into region" in m for m in msgs)
    with pytest.raises(InvarianceError) as exc:
        modify_map(bad)
    assert exc.value.violations == msgs


def test_invariance_z_out_of_range():
    base = FiniteMap(Alphabet(2), (0, 1))
    msgs = check_invariance(ModifiedMap(base, frozenset({0}), 5))
    assert any("out of range" in m for m in msgs)


def test_metric_map_redirect():
    base = lambda x: x * x
    inside = lambda x: abs(x) <= 1  # [-1, 1] is invariant under squaring
    sample = [-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0]
    modified = ModifiedMap(base, inside, 0.0)
    assert check_invariance(modified, sample) == []
    redirected = modify_map(modified, sample)
    assert redirected(0.5) == 0.0
    assert redirected(2.0) == 4.0


def test_metric_map_violation_and_missing_sample():
    base = lambda x: x + 1.0
    inside = lambda x: x <= 0.0
    modified = ModifiedMap(base, inside, -1.0)
    msgs = check_invariance(modified, [-0.5, 1.0])
    assert any("region point maps outside" in m for m in msgs)
    with pytest.raises(ValueError, match="sample"):
        check_invariance(modified)


def test_modified_map_is_finite_flag():
    fin = ModifiedMap(FiniteMap(Alphabet(2), (0, 1)), frozenset({0}), 0)
    assert fin.is_finite()
    assert not ModifiedMap(lambda x: x, lambda x: True, 0.0).is_finite()


def test_sft_prefixes_match_walk_enumeration():
    # independent cross-check of the seqset view against direct walks
    rng = random.Random(13)
    for _ in range(10):
        k = rng.randint(2, 3)
        succ = tuple(
            frozenset(rng.sample(range(k), rng.randint(1, k))) for _ in range(k)
        )
        rel = TransitionRelation(Alphabet(k), succ)
        for n in range(1, 7):
            got = prefixes(OrbitSV(rel), n).words
            want = {
                w
                for w in itertools.product(range(k), repeat=n)
                if all(b in rel.successors[a] for a, b in zip(w, w[1:]))
            }
            assert got == want
