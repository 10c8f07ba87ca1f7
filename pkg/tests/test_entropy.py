"""Count-series estimators and the exact-rate algebra.

Exact values below are checked bit-for-bit: the closed forms are pure
float expressions of log, so any drift means the algebra changed.
"""

import math
from fractions import Fraction

import pytest

from seqent import (
    Alphabet,
    BlockK,
    Closure,
    CountSeries,
    CylSched,
    DilateK,
    DisjointUnion,
    EstimatorConfig,
    Image,
    Orbit,
    OrbitSV,
    PeriodicSubsets,
    RestrictK,
    SetProduct,
    SetUnion,
    ShiftK,
    SymbolMap,
    TransitionRelation,
    bounded_counts,
    count_series,
    divergence_witness,
    entropy_estimate,
    entropy_exact,
    finite_set,
    full_shift,
    ev_const,
    sr_set,
)
from seqent.dynamics import FiniteMap

GOLDEN_REL = TransitionRelation(Alphabet(2), (frozenset({0, 1}), frozenset({0})))


def _pp(pre, period):
    return PeriodicSubsets(
        tuple(frozenset(s) for s in pre), tuple(frozenset(s) for s in period)
    )


# ---------------------------------------------------------------- exact


def test_exact_leaves():
    cases = [
        (full_shift(3), math.log(3), "full-shift"),
        (ev_const(4, 2), math.log(4), "eventually-constant"),
        (finite_set(2, ((), (0,)), ((1,), (0,))), 0.0, "finite-set"),
        (Orbit(FiniteMap(Alphabet(3), (1, 2, 0))), 0.0, "orbit-of-map"),
        (sr_set(2, Fraction(1, 2)), 0.5 * math.log(2), "scheduled-rate(1/2)"),
        (
            CylSched(Alphabet(3), _pp([], [{0, 2}, {1}])),
            math.log(2) / 2,
            "periodic-schedule",
        ),
    ]
    for expr, value, proof in cases:
        est = entropy_exact(expr)
        assert est is not None
        assert est.value == value
        assert est.proof == proof
        assert est.mode == "exact"


def test_exact_transforms():
    est = entropy_exact(ShiftK(3, full_shift(2)))
    assert est.value == math.log(2)
    assert est.proof == "shift-invariance<-full-shift"

    est = entropy_exact(DilateK(3, full_shift(2)))
    assert est.value == math.log(2) / 3
    assert est.proof == "dilation/3<-full-shift"

    est = entropy_exact(BlockK(2, full_shift(2)))
    assert est.value == 2 * math.log(2)
    assert est.proof == "blocking*2<-full-shift"

    est = entropy_exact(Closure(sr_set(2, Fraction(1, 3))))
    assert est.value == float(Fraction(1, 3)) * math.log(2)
    assert est.proof == "closure<-scheduled-rate(1/3)"


def test_exact_union_takes_max():
    est = entropy_exact(SetUnion(sr_set(2, Fraction(1, 3)), sr_set(2, Fraction(1, 2))))
    assert est.value == 0.34657359027997264  # 0.5 * log 2
    assert est.proof == "union-max"

    est = entropy_exact(DisjointUnion(full_shift(2), full_shift(3)))
    assert est.value == math.log(3)
    assert est.proof == "djunion-max"


def test_exact_injective_image_passthrough():
    embed = SymbolMap(Alphabet(2), Alphabet(3), (0, 2))
    est = entropy_exact(Image(embed, sr_set(2, Fraction(2, 3))))
    assert est.value == float(Fraction(2, 3)) * math.log(2)
    assert est.proof == "injective-image<-scheduled-rate(2/3)"


def test_exact_bounded_collapses():
    orbit = Orbit(FiniteMap(Alphabet(2), (1, 0)))
    collapse = SymbolMap(Alphabet(2), Alphabet(1), (0, 0))
    est = entropy_exact(Image(collapse, orbit))
    assert est.value == 0.0
    assert est.proof == "image-of-bounded"

    est = entropy_exact(SetProduct(orbit, finite_set(2, ((), (1,)))))
    assert est.value == 0.0
    assert est.proof == "product-of-bounded"

    est = entropy_exact(SetProduct(full_shift(2), orbit))
    assert est.value == math.log(2)
    assert est.proof == "product-bounded-factor<-full-shift"
    est = entropy_exact(SetProduct(orbit, full_shift(3)))
    assert est.proof == "product-bounded-factor<-full-shift"

    est = entropy_exact(RestrictK(2, SetProduct(orbit, orbit)))
    assert est.value == 0.0
    assert est.proof == "restriction-of-bounded"


def test_exact_declines():
    # one-sided bounds only: no closed form is claimed
    assert entropy_exact(SetProduct(full_shift(2), full_shift(2))) is None
    assert entropy_exact(RestrictK(2, full_shift(2))) is None
    collapse = SymbolMap(Alphabet(2), Alphabet(1), (0, 0))
    assert entropy_exact(Image(collapse, full_shift(2))) is None
    assert entropy_exact(OrbitSV(GOLDEN_REL)) is None
    # a decline anywhere below propagates up
    assert entropy_exact(DilateK(2, OrbitSV(GOLDEN_REL))) is None
    assert entropy_exact(SetUnion(full_shift(2), OrbitSV(GOLDEN_REL))) is None


def test_bounded_counts_predicate():
    orbit = Orbit(FiniteMap(Alphabet(2), (0, 1)))
    assert bounded_counts(orbit)
    assert bounded_counts(finite_set(2, ((), (0,))))
    assert bounded_counts(BlockK(2, SetProduct(orbit, orbit)))
    assert not bounded_counts(full_shift(2))
    assert not bounded_counts(SetUnion(orbit, full_shift(2)))
    assert not bounded_counts(OrbitSV(GOLDEN_REL))


# ------------------------------------------------------------- series


def test_count_series_collects_counts():
    series = count_series(full_shift(2), 5)
    assert series.entries == ((1, 2), (2, 4), (3, 8), (4, 16), (5, 32))
    assert series.alphabet_size == 2
    assert series.a_values()[2] == (3, math.log(8) / 3)


def test_count_series_validation():
    with pytest.raises(ValueError):
        CountSeries(((1, 2), (1, 3)))
    with pytest.raises(ValueError):
        CountSeries(((0, 1),))
    with pytest.raises(ValueError):
        CountSeries(((1, 0),))
    with pytest.raises(ValueError):
        CountSeries(((2, 5),), alphabet_size=2)
    with pytest.raises(ValueError):
        count_series(full_shift(2), 0)


def test_tail_max_on_exact_geometric():
    # a_n is exactly log 2 at every n, so any window gives log 2
    est = entropy_estimate(count_series(full_shift(2), 10))
    assert est.value == math.log(2)
    assert est.mode == "tail-max"
    assert est.window == (7, 8, 9, 10)  # default window: last ceil(10/3)
    assert "counts-nondecreasing" in est.flags
    assert "a_n-nondecreasing" in est.flags


def test_tail_max_window_override():
    series = CountSeries(((1, 2), (2, 2), (3, 2), (4, 2)))
    est = entropy_estimate(series, EstimatorConfig(window=2))
    assert est.window == (3, 4)
    assert est.value == math.log(2) / 3
    # early horizons excluded, so the estimate drops as the window shrinks
    assert est.value < math.log(2)


def test_max_n_truncates():
    series = count_series(full_shift(3), 8)
    est = entropy_estimate(series, EstimatorConfig(max_n=4, window=4))
    assert est.window == (1, 2, 3, 4)
    with pytest.raises(ValueError):
        entropy_estimate(series, EstimatorConfig(max_n=0))


def test_unknown_mode_rejected():
    series = count_series(full_shift(2), 4)
    with pytest.raises(ValueError):
        entropy_estimate(series, EstimatorConfig(mode="median"))


def test_regression_recovers_rate():
    est = entropy_estimate(
        count_series(full_shift(3), 12), EstimatorConfig(mode="regression", window=8)
    )
    assert est.value == pytest.approx(math.log(3), abs=1e-12)
    assert "regression" in est.flags


def test_regression_clamps_at_zero():
    # counts heading down would fit a negative slope; the rate floor is 0
    series = CountSeries(((1, 8), (2, 4), (3, 2), (4, 1)))
    est = entropy_estimate(series, EstimatorConfig(mode="regression", window=4))
    assert est.value == 0.0


def test_clamp_to_alphabet_ceiling():
    # validated counts keep tail-max below log k automatically, but a
    # regression slope can overshoot; the ceiling clips it
    series = CountSeries(((1, 5),), alphabet_size=None)
    est = entropy_estimate(series)
    assert est.value == math.log(5)
    series = CountSeries(((1, 1), (2, 4)), alphabet_size=2)
    est = entropy_estimate(series, EstimatorConfig(mode="regression", window=2))
    assert est.value == math.log(2)
    assert "clamped" in est.flags


def test_estimate_matches_exact_for_scheduled_sets():
    expr = sr_set(2, Fraction(2, 3))
    exact = entropy_exact(expr).value
    est = entropy_estimate(count_series(expr, 30), EstimatorConfig(window=1))
    # at a block end the finite a_n equals the rate exactly
    assert est.value == pytest.approx(exact, abs=1e-12)


# --------------------------------------------------------- divergence


def test_divergence_witness_rows():
    wit = divergence_witness(6)
    assert [k for k, _ in wit.rows] == [1, 2, 3, 4, 5, 6]
    for k, value in wit.rows:
        assert value == math.log(k)
    assert wit.limit.value == math.inf
    assert wit.limit.proof == "unbounded-subspace-family"
    with pytest.raises(ValueError):
        divergence_witness(1)
