"""Named invariant suites over randomized inputs.

Each suite draws its inputs from a seeded generator and verifies a
family of identities or inequalities with independently computed
(usually exhaustive) oracles.  Reports carry every counterexample in
printable form, so a red run is directly reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .alphabet import Alphabet
from .bowen import (
    DiscreteMetric,
    EuclideanMetric,
    PointCloud,
    SeqPoint,
    count_separated,
    count_spanning,
    dnp,
)
from .dsl import DslError, parse_expr, print_expr
from .gen import random_expr, random_points, random_windows
from .schedules import build_schedule, schedule_to_seqset
from .seqset import (
    BlockK,
    BudgetExceededError,
    DilateK,
    DisjointUnion,
    Image,
    RestrictK,
    SRSet,
    SetProduct,
    SetUnion,
    ShiftK,
    SymbolMap,
    alphabet_of,
    count_prefixes,
    materialization_bound,
)

DEFAULT_SEED = 2026
MATERIALIZE_CAP = 20_000


@dataclass(frozen=True)
class CheckViolation:
    case: str
    message: str


@dataclass(frozen=True)
class CheckReport:
    suite: str
    cases: int
    passed: bool
    violations: tuple[CheckViolation, ...]
    notes: tuple[str, ...] = ()

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        out = f"{self.suite}: {status} ({self.cases} cases"
        if self.violations:
            out += f", {len(self.violations)} violations"
        return out + ")"


class _Recorder:
    def __init__(self) -> None:
        self.violations: list[CheckViolation] = []

    def check(self, cond: bool, case: str, message: str) -> None:
        if not cond:
            self.violations.append(CheckViolation(case, message))


def _guarded_count(expr, n: int) -> int | None:
    if materialization_bound(expr, n) > MATERIALIZE_CAP:
        return None
    try:
        return count_prefixes(expr, n, budget=4 * MATERIALIZE_CAP)
    except BudgetExceededError:
        return None


def _euclid(x, y) -> float:
    return math.dist(x, y)


def _suite_counter_inequalities(rng: random.Random, cases: int):
    rec = _Recorder()
    for ci in range(cases):
        pts = random_points(rng, max_points=12)
        extras = random_points(rng, max_points=6, dim=len(pts[0]), min_points=1)
        small = PointCloud(tuple(pts))
        big = PointCloud(tuple(pts) + tuple(extras))
        diam = max(_euclid(a, b) for a in pts for b in pts)
        if diam == 0.0:
            diam = 1.0
        eps = diam * rng.uniform(0.1, 0.9)
        case = f"cloud {ci}: {len(pts)}+{len(extras)} pts, dim {len(pts[0])}, eps={eps!r}"

        def dbl(x, y):
            return 2.0 * _euclid(x, y)

        ns_e = count_separated(small, _euclid, eps).value
        ns_2e = count_separated(small, _euclid, 2 * eps).value
        nid_e = count_spanning(small, _euclid, eps).value
        nid_2e = count_spanning(small, _euclid, 2 * eps).value
        nd_e = count_spanning(small, _euclid, eps, candidates=big.points).value
        nd_2e = count_spanning(small, _euclid, 2 * eps, candidates=big.points).value

        rec.check(ns_2e <= ns_e, case, f"(i) separated not monotone: {ns_2e} > {ns_e}")
        rec.check(nid_2e <= nid_e, case, f"(i) intrinsic not monotone: {nid_2e} > {nid_e}")
        rec.check(nd_2e <= nd_e, case, f"(i) ambient not monotone: {nd_2e} > {nd_e}")
        rec.check(
            nid_2e <= nd_e <= nid_e,
            case,
            f"(ii) intrinsic/ambient chain: {nid_2e} <= {nd_e} <= {nid_e} fails",
        )
        rec.check(
            ns_2e <= nid_e <= ns_e,
            case,
            f"(ii) separated/intrinsic chain: {ns_2e} <= {nid_e} <= {ns_e} fails",
        )

        rec.check(
            ns_e <= count_separated(big, _euclid, eps).value,
            case,
            "(v) separated count dropped on the larger cloud",
        )
        # intrinsic counts are NOT monotone under cloud growth (extra
        # points double as extra centers); the surviving cross-cloud
        # relation goes through the ambient chain at scales (2eps, eps)
        rec.check(
            nid_2e <= count_spanning(big, _euclid, eps).value,
            case,
            "(v') intrinsic cross-cloud chain at (2eps, eps) fails",
        )
        rec.check(
            nd_e <= count_spanning(big, _euclid, eps, candidates=big.points).value,
            case,
            "(v) ambient count dropped on the larger cloud",
        )
        rec.check(
            ns_e <= count_separated(small, dbl, eps).value,
            case,
            "(v) separated count dropped under the larger semimetric",
        )
        rec.check(
            nid_e <= count_spanning(small, dbl, eps).value,
            case,
            "(v) intrinsic count dropped under the larger semimetric",
        )
        rec.check(
            nd_e <= count_spanning(small, dbl, eps, candidates=big.points).value,
            case,
            "(v) ambient count dropped under the larger semimetric",
        )

        rec.check(
            count_separated(small, dbl, 2 * eps).value == ns_e,
            case,
            "scaling identity fails for separated counts",
        )
        rec.check(
            count_spanning(small, dbl, 2 * eps).value == nid_e,
            case,
            "scaling identity fails for intrinsic counts",
        )

        greedy = count_separated(small, _euclid, eps, mode="greedy").value
        rec.check(
            ns_2e <= greedy <= ns_e,
            case,
            f"greedy sandwich fails: {ns_2e} <= {greedy} <= {ns_e}",
        )
    return cases, rec.violations, []


def _suite_counting_identities(rng: random.Random, cases: int):
    rec = _Recorder()
    evaluated = 0
    skipped = 0
    for ci in range(cases):
        expr = random_expr(rng, max_k=4, max_depth=4)
        n = rng.randint(1, 12)
        k = alphabet_of(expr).size
        case = f"expr {ci}: {print_expr(expr)} at n={n}"
        base = _guarded_count(expr, n)
        if base is None:
            skipped += 1
            continue
        evaluated += 1

        j = rng.randint(2, 3)
        for i in range(j):
            m = n * j - i
            if m < 1:
                continue
            c = _guarded_count(DilateK(j, expr), m)
            if c is not None:
                rec.check(
                    c == base, case, f"dilation by {j}: count at {m} is {c}, want {base}"
                )

        c_long = _guarded_count(expr, n * j)
        if c_long is not None:
            c_block = _guarded_count(BlockK(j, expr), n)
            if c_block is not None:
                rec.check(
                    c_block == c_long,
                    case,
                    f"blocking by {j}: {c_block} != {c_long}",
                )

        js = rng.randint(1, 2)
        c_shift = _guarded_count(ShiftK(js, expr), n)
        c_plus = _guarded_count(expr, n + js)
        if c_shift is not None and c_plus is not None:
            rec.check(
                c_shift <= c_plus <= (k**js) * c_shift,
                case,
                f"shift sandwich by {js}: {c_shift} <= {c_plus} <= {k**js * c_shift} fails",
            )

        jr = rng.randint(2, 3)
        m = max(1, n // jr)
        c_restr = _guarded_count(RestrictK(jr, expr), m)
        c_dense = _guarded_count(expr, jr * m)
        if c_restr is not None and c_dense is not None:
            rec.check(
                c_restr <= c_dense,
                case,
                f"restriction bound by {jr}: {c_restr} > {c_dense}",
            )

        partner = random_expr(rng, max_k=4, max_depth=2)
        c_partner = _guarded_count(partner, n)
        if c_partner is not None:
            c_prod = _guarded_count(SetProduct(expr, partner), n)
            if c_prod is not None:
                rec.check(
                    c_prod == base * c_partner,
                    case,
                    f"product with {print_expr(partner)}: {c_prod} != {base * c_partner}",
                )
            c_dj = _guarded_count(DisjointUnion(expr, partner), n)
            if c_dj is not None:
                rec.check(
                    c_dj == base + c_partner,
                    case,
                    f"disjoint union with {print_expr(partner)}: {c_dj} != {base + c_partner}",
                )
            if alphabet_of(partner).size == k:
                c_un = _guarded_count(SetUnion(expr, partner), n)
                if c_un is not None:
                    rec.check(
                        max(base, c_partner) <= c_un <= base + c_partner,
                        case,
                        f"union bounds with {print_expr(partner)} fail: {c_un}",
                    )

        tgt = rng.randint(1, 4)
        table = tuple(rng.randrange(tgt) for _ in range(k))
        image = Image(SymbolMap(Alphabet(k), Alphabet(tgt), table), expr)
        c_img = _guarded_count(image, n)
        if c_img is not None:
            rec.check(
                c_img <= base, case, f"image contraction: {c_img} > {base}"
            )
        inj_table = tuple(sorted(rng.sample(range(4), k))) if k <= 4 else None
        if inj_table is not None:
            inj = Image(SymbolMap(Alphabet(k), Alphabet(4), inj_table), expr)
            c_inj = _guarded_count(inj, n)
            if c_inj is not None:
                rec.check(
                    c_inj == base,
                    case,
                    f"injective image changed the count: {c_inj} != {base}",
                )
    notes = [f"{evaluated} evaluated, {skipped} skipped by the cost guard"]
    return cases, rec.violations, notes


def _suite_parser_roundtrip(rng: random.Random, cases: int):
    rec = _Recorder()
    for ci in range(cases):
        expr = random_expr(rng, max_k=4, max_depth=4)
        text = print_expr(expr)
        case = f"expr {ci}: {text}"
        try:
            back = parse_expr(text)
        except DslError as exc:
            rec.check(False, case, f"reparse failed: {exc}")
            continue
        rec.check(back == expr, case, "reparse is not structurally equal")
        rec.check(print_expr(back) == text, case, "printing is not idempotent")
    return cases, rec.violations, []


def _suite_schedule_conditions(rng: random.Random, cases: int):
    rec = _Recorder()
    for ci in range(cases):
        den = rng.randint(1, 12)
        num = rng.randint(1, den)
        target = Fraction(num, den)
        use_float = rng.random() < 0.3
        requested = float(target) if use_float else target
        count = rng.randint(2, 7)
        case = f"schedule {ci}: target={requested!r} count={count}"
        sched = build_schedule(requested, count)
        problems = sched.check()
        rec.check(not problems, case, "; ".join(problems) or "ok")

        k = rng.randint(2, 3)
        model = schedule_to_seqset(sched, k)
        for p, q in sched.pairs:
            if q > 12:
                break
            got = count_prefixes(model, q)
            rec.check(
                got == k**p,
                case,
                f"free-block count at n={q}: {got} != {k}**{p}",
            )
        cap = float(target) * math.log(k)
        for n in range(1, 13):
            a_n = math.log(count_prefixes(model, n)) / n
            rec.check(
                a_n <= cap + 1e-12,
                case,
                f"growth value at n={n} exceeds the target rate: {a_n} > {cap}",
            )
        if not use_float:
            # the canonical scheduled set must agree with the built one
            sr = SRSet(Alphabet(k), 0, target)
            for n in range(1, min(13, max(q for _, q in sched.pairs) + 1)):
                a, b = count_prefixes(sr, n), count_prefixes(model, n)
                rec.check(
                    a == b,
                    case,
                    f"canonical set disagrees with the built schedule at n={n}: {a} != {b}",
                )
    return cases, rec.violations, []


def _suite_product_bounds(rng: random.Random, cases: int):
    rec = _Recorder()
    for ci in range(cases):
        pts_a = random_points(rng, max_points=4)
        pts_b = random_points(rng, max_points=5)
        cloud_a = PointCloud(tuple(pts_a))
        cloud_b = PointCloud(tuple(pts_b))
        pairs = PointCloud(
            tuple((i, j) for i in range(len(pts_a)) for j in range(len(pts_b)))
        )

        def gamma(u, v):
            return max(
                _euclid(pts_a[u[0]], pts_a[v[0]]), _euclid(pts_b[u[1]], pts_b[v[1]])
            )

        diam = max(gamma(u, v) for u in pairs.points for v in pairs.points)
        if diam == 0.0:
            diam = 1.0
        eps = diam * rng.uniform(0.1, 0.9)
        case = f"product {ci}: {len(pts_a)}x{len(pts_b)} pts, eps={eps!r}"

        def ga(x, y):
            return _euclid(x, y)

        ns_a = count_separated(cloud_a, ga, eps).value
        ns_b = count_separated(cloud_b, ga, eps).value
        ns_p = count_separated(pairs, gamma, eps).value
        rec.check(
            ns_p >= ns_a * ns_b,
            case,
            f"separated product lower bound fails: {ns_p} < {ns_a}*{ns_b}",
        )
        nid_a = count_spanning(cloud_a, ga, eps).value
        nid_b = count_spanning(cloud_b, ga, eps).value
        nid_p = count_spanning(pairs, gamma, eps).value
        rec.check(
            nid_p <= nid_a * nid_b,
            case,
            f"spanning product upper bound fails: {nid_p} > {nid_a}*{nid_b}",
        )
    return cases, rec.violations, []


def _suite_p_monotonicity(rng: random.Random, cases: int):
    rec = _Recorder()
    horizon = 6
    for ci in range(cases):
        windows = random_windows(rng, horizon, max_points=10, dim=rng.randint(1, 2))
        cloud = PointCloud(tuple(SeqPoint(w) for w in windows))
        n = rng.randint(1, horizon)
        eps = rng.uniform(0.05, 1.0)
        case = f"windows {ci}: {len(windows)} pts, n={n}, eps={eps!r}"
        base = EuclideanMetric()
        counts = {
            p: count_separated(cloud, dnp(base, n, p), eps).value
            for p in (1.0, 2.0, math.inf)
        }
        rec.check(
            counts[1.0] >= counts[2.0] >= counts[math.inf],
            case,
            f"separated counts not nonincreasing in p: {counts}",
        )

        k = rng.randint(2, 4)
        sym_windows = [
            SeqPoint(tuple(rng.randrange(k) for _ in range(horizon)))
            for _ in range(rng.randint(2, 10))
        ]
        sym_cloud = PointCloud(tuple(sym_windows))
        disc = DiscreteMetric()
        eps_small = rng.uniform(0.05, 0.99)
        ref = count_separated(sym_cloud, dnp(disc, n, math.inf), eps_small).value
        for p in (1.0, 2.0):
            got = count_separated(sym_cloud, dnp(disc, n, p), eps_small).value
            rec.check(
                got == ref,
                case,
                f"discrete collapse fails at p={p}: {got} != {ref}",
            )

        x, y = rng.uniform(0, 1), rng.uniform(0, 1)
        wx = SeqPoint(tuple((x,) for _ in range(horizon)))
        wy = SeqPoint(tuple((y,) for _ in range(horizon)))
        got = dnp(base, n, 1.0)(wx, wy)
        want = n * base.dist((x,), (y,))
        rec.check(
            abs(got - want) <= 1e-9 * max(1.0, want),
            case,
            f"identity-orbit sum rule fails: {got} != {want}",
        )
    return cases, rec.violations, []


def _suite_count_bounds(rng: random.Random, cases: int):
    rec = _Recorder()
    for ci in range(cases):
        expr = random_expr(rng, max_k=4, max_depth=3)
        k = alphabet_of(expr).size
        case = f"expr {ci}: {print_expr(expr)}"
        prev = None
        for n in range(1, 9):
            c = _guarded_count(expr, n)
            if c is None:
                break
            rec.check(1 <= c <= k**n, case, f"count at n={n} out of range: {c}")
            if prev is not None:
                rec.check(
                    c >= prev, case, f"count dropped from {prev} to {c} at n={n}"
                )
            prev = c
    return cases, rec.violations, []


_Suite = Callable[[random.Random, int], tuple[int, list[CheckViolation], list[str]]]

SUITES: dict[str, tuple[int, _Suite, str]] = {
    "counter-inequalities": (
        200,
        _suite_counter_inequalities,
        "separated/spanning counter inequalities, scaling, greedy sandwich",
    ),
    "counting-identities": (
        500,
        _suite_counting_identities,
        "prefix-count identities for the set combinators",
    ),
    "parser-roundtrip": (
        500,
        _suite_parser_roundtrip,
        "print/parse round-trip on random expressions",
    ),
    "schedule-conditions": (
        100,
        _suite_schedule_conditions,
        "block schedule conditions and realized growth rates",
    ),
    "product-bounds": (
        150,
        _suite_product_bounds,
        "one-sided product bounds for separated and spanning counts",
    ),
    "p-monotonicity": (
        150,
        _suite_p_monotonicity,
        "coordinate-aggregate monotonicity in p and the discrete collapse",
    ),
    "count-bounds": (
        200,
        _suite_count_bounds,
        "prefix counts stay within [previous, k^n]",
    ),
}


def suite_names() -> list[str]:
    return sorted(SUITES)


def run_suite(name: str, cases: int | None = None, seed: int = DEFAULT_SEED) -> CheckReport:
    if name not in SUITES:
        raise KeyError(
            f"unknown suite {name!r}; available: {', '.join(suite_names())}"
        )
    default_cases, fn, _ = SUITES[name]
    rng = random.Random(seed)
    ran, violations, notes = fn(rng, cases if cases is not None else default_cases)
    return CheckReport(
        suite=name,
        cases=ran,
        passed=not violations,
        violations=tuple(violations),
        notes=tuple(notes),
    )
