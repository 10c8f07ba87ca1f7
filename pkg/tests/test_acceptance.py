"""End-to-end acceptance gate.

Each test evaluates one headline guarantee of the package, prints a
single ACCEPTANCE verdict line, and then asserts.  Run with -s to see
the verdict lines on passing runs; on failures pytest shows them in the
captured output.
"""

import itertools
import math
import random
import time
from fractions import Fraction

from seqent import (
    Alphabet,
    BowenGridConfig,
    CountSeries,
    DiscreteMetric,
    DnpMetric,
    EuclideanMetric,
    TransitionRelation,
    bowen_entropy,
    cantor_ifs,
    cantor_set,
    count_prefixes,
    count_walks,
    digit_seqset,
    entropy_estimate,
    entropy_exact,
    ifs_preimage_prefixes,
    map_bowen_entropy,
    parse,
    parse_expr,
    run_suite,
    seqset_cloud,
    sr_set,
)
from seqent.cli import main as cli_main
from seqent.checks import CheckReport
from seqent.fractal import rationals, whole_interval

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


def _verdict(num: int, name: str, ok: bool) -> bool:
    print(f"ACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'}")
    return ok


def test_acceptance_1_exact_values():
    t0 = time.monotonic()
    ok = True

    for k in range(2, 7):
        ok &= entropy_exact(parse_expr(f"full({k})")).value == math.log(k)
        ok &= entropy_exact(parse_expr(f"evconst({k}, 0)")).value == math.log(k)
    ok &= entropy_exact(parse_expr("finite(2, [|0], [0|1])")).value == 0.0
    ok &= entropy_exact(parse_expr("finite(3, [2,1|0,2])")).value == 0.0

    rng = random.Random(417)
    for _ in range(100):
        q = rng.randint(1, 24)
        r = Fraction(rng.randint(1, q), q)
        k = rng.choice((2, 3, 4))
        res = entropy_exact(sr_set(k, r))
        ok &= res.mode == "exact"
        ok &= abs(res.value - float(r) * math.log(k)) <= 1e-9

    # combinator algebra: max, divide-by-k, multiply-by-k, bit exact
    ok &= (
        entropy_exact(parse_expr("union(sr(2, 1/2), finite(2, [|0]))")).value
        == math.log(2) / 2
    )
    ok &= entropy_exact(parse_expr("dilate(3, full(2))")).value == math.log(2) / 3
    ok &= entropy_exact(parse_expr("block(2, full(2))")).value == 2 * math.log(2)
    ok &= entropy_exact(parse_expr("shift(5, full(3))")).value == math.log(3)

    ok &= (time.monotonic() - t0) < 5.0
    assert _verdict(1, "exact-values", ok)


def test_acceptance_2_counting_identities():
    t0 = time.monotonic()
    report = run_suite("counting-identities", 500)
    ok = report.passed and len(report.violations) == 0
    ok &= (time.monotonic() - t0) < 60.0
    assert _verdict(2, "counting-identities", ok)


def test_acceptance_3_cantor_coding():
    ok = True
    model = digit_seqset(cantor_set(), 3)
    ok &= model is not None
    for n in range(1, 11):
        ok &= count_prefixes(model, n) == 2**n
        ok &= len(ifs_preimage_prefixes(cantor_ifs(), cantor_set(), n)) == 2**n
    ok &= entropy_exact(model).value == math.log(2)

    for subset in (whole_interval(), rationals()):
        for base in (2, 3):
            dense = digit_seqset(subset, base)
            ok &= dense is not None
            ok &= entropy_exact(dense).value == math.log(base)
    assert _verdict(3, "cantor-coding", ok)


def test_acceptance_4_counter_inequalities():
    report = run_suite("counter-inequalities", 200)
    ok = report.passed and len(report.violations) == 0
    assert _verdict(4, "counter-inequalities", ok)


def test_acceptance_5_bowen_matches_topological():
    sets = [
        (2, Fraction(1, 2)),
        (2, Fraction(1, 3)),
        (2, Fraction(2, 3)),
        (2, Fraction(1, 4)),
        (2, Fraction(3, 4)),
        (2, Fraction(2, 5)),
        (2, Fraction(3, 5)),
        (3, Fraction(1, 2)),
        (3, Fraction(1, 3)),
        (3, Fraction(2, 5)),
    ]
    cfg = BowenGridConfig(eps=(0.5,), n_grid=tuple(range(1, 15)))
    metric = DnpMetric(DiscreteMetric(), math.inf)
    ok = True
    for k, r in sets:
        cloud = seqset_cloud(sr_set(k, r), 14)
        est = bowen_entropy(cloud, metric, cfg)
        exact = entropy_exact(sr_set(k, r)).value
        ok &= abs(est.value - exact) <= 0.05
        ok &= abs(exact - float(r) * math.log(k)) <= 1e-12
    assert _verdict(5, "bowen-vs-topological", ok)


def test_acceptance_6_zero_entropy():
    grid = [i / 1000 for i in range(1001)]
    ok = True

    # p = inf: every horizon sees the same pairwise matrix, so the
    # estimator short-circuits to an exact zero.
    flat = map_bowen_entropy(lambda x: x, grid, EuclideanMetric(), math.inf)
    ok &= flat.value == 0.0
    ok &= "constant-semimetric" in flat.flags
    ok &= all(t == 0.0 for t in flat.tails)

    # p = 1: distances grow like n|x - y|, so counts creep up but the
    # per-horizon rates decay; the grid diagnostics are the proxy for
    # the eps -> 0 limit, which no finite grid can witness.
    est = map_bowen_entropy(
        lambda x: x,
        grid,
        EuclideanMetric(),
        1,
        BowenGridConfig(n_grid=tuple(range(1, 65))),
    )
    rates = {}
    for eps, n, _count, a_n in est.rows():
        rates.setdefault(eps, {})[n] = a_n
    for per_eps in rates.values():
        for n in range(1, 64):
            ok &= per_eps[n + 1] - per_eps[n] <= math.log(2) / (n + 1) + 1e-12
        ok &= per_eps[64] < per_eps[43]
    ok &= max(est.tail_slopes) <= 0.02
    assert _verdict(6, "zero-entropy", ok)


def test_acceptance_7_golden_mean():
    relation = TransitionRelation(Alphabet(2), (frozenset({0, 1}), frozenset({0})))
    ok = True
    for n in range(1, 13):
        brute = sum(
            1
            for w in itertools.product((0, 1), repeat=n)
            if all(b in relation.successors[a] for a, b in zip(w, w[1:]))
        )
        ok &= count_walks(relation, n) == brute

    entries = tuple((n, count_walks(relation, n)) for n in range(1, 25))
    est = entropy_estimate(CountSeries(entries, source="walks", alphabet_size=2))
    ok &= est.window == tuple(range(17, 25))
    ok &= abs(est.value - LOG_PHI) <= 0.02
    assert _verdict(7, "golden-mean", ok)


def test_acceptance_8_parser_contract(capsys, monkeypatch):
    report = run_suite("parser-roundtrip", 500)
    ok = report.passed and len(report.violations) == 0

    # the three diagnostic classes, each with a usable position
    cases = {
        "full(": ("syntax", 5, 1, 6),
        "dilate(2)": ("arity", 8, 1, 9),
        "full(0)": ("validation", 0, 1, 1),
    }
    for source, (kind, pos, line, col) in cases.items():
        prog = parse(source)
        ok &= not prog.ok
        diag = prog.diagnostics[0]
        ok &= diag.kind == kind
        ok &= (diag.position, diag.line, diag.column) == (pos, line, col)

    # exit codes: 1 rejected input, 2 broken invariants, 3 failed suite
    ok &= cli_main(["counts", "full("]) == 1
    ok &= cli_main(["counts", "dilate(1, full(2))"]) == 2

    def failing(suite, cases=None, seed=2026):
        return CheckReport(suite=suite, cases=1, passed=False, violations=())

    monkeypatch.setattr("seqent.service.handlers.run_suite", failing)
    ok &= cli_main(["check", "product-bounds"]) == 3
    capsys.readouterr()
    assert _verdict(8, "parser-and-exit-codes", ok)
