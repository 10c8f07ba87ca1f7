"""Command handlers shared by the HTTP service and the in-process CLI.

Each handler takes one request model and returns one response model.
Failures become ServiceError with a kind the callers map onto transport
(HTTP status) or process (exit code) conventions: "parse" and "usage"
for rejected input, "validation" for structurally valid input breaking
an invariant, "budget" for enumeration caps.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..bowen import (
    BowenGridConfig,
    DiscreteMetric,
    DnpMetric,
    bowen_entropy,
    seqset_cloud,
)
from ..checks import run_suite, suite_names
from ..dsl import (
    Diagnostic,
    DslValidationError,
    DslError,
    parse,
    parse_expr,
    print_expr,
)
from ..entropy import (
    CountSeries,
    EstimatorConfig,
    count_series,
    entropy_estimate,
    entropy_exact,
)
from ..fractal import (
    IFS,
    AffineMap,
    FractalSubset,
    digit_prefixes,
    digit_seqset,
    ifs_cells,
    interval_subset,
    named_subset,
    point_subset,
    NAMED_SUBSETS,
)
from ..seqset import BudgetExceededError, alphabet_of
from .models import (
    BowenCell,
    BowenRequest,
    BowenResponse,
    CheckRequest,
    CheckResponse,
    CountRow,
    CountsRequest,
    CountsResponse,
    DiagnosticModel,
    EntropyRequest,
    EntropyResponse,
    FractalDigitsRequest,
    FractalDigitsResponse,
    FractalIfsRequest,
    FractalIfsResponse,
    IfsCellRow,
    ParseRequest,
    ParseResponse,
    ViolationModel,
)


class ServiceError(Exception):
    STATUS = {"parse": 400, "usage": 400, "validation": 422, "budget": 422}

    def __init__(
        self,
        kind: str,
        message: str,
        diagnostics: list[DiagnosticModel] | None = None,
    ):
        self.kind = kind
        self.message = message
        self.diagnostics = diagnostics or []
        self.status = self.STATUS[kind]
        super().__init__(message)


def _diag_model(d: Diagnostic) -> DiagnosticModel:
    return DiagnosticModel(
        kind=d.kind,
        message=d.message,
        position=d.position,
        line=d.line,
        column=d.column,
        expected=list(d.expected),
    )


def _parse_or_error(source: str):
    try:
        return parse_expr(source)
    except DslValidationError as exc:
        raise ServiceError(
            "validation", str(exc), [_diag_model(exc.diagnostic)]
        ) from None
    except DslError as exc:
        raise ServiceError("parse", str(exc), [_diag_model(exc.diagnostic)]) from None


def _require(cond: bool, message: str, kind: str = "usage") -> None:
    if not cond:
        raise ServiceError(kind, message)


def handle_parse(req: ParseRequest) -> ParseResponse:
    prog = parse(req.source)
    if prog.ok:
        return ParseResponse(
            ok=True,
            canonical=print_expr(prog.expr),
            alphabet=alphabet_of(prog.expr).size,
        )
    return ParseResponse(
        ok=False, diagnostics=[_diag_model(d) for d in prog.diagnostics]
    )


def _count_rows(expr, nmax: int, budget: int | None) -> list[CountRow]:
    try:
        series = count_series(expr, nmax, budget=budget)
    except BudgetExceededError as exc:
        raise ServiceError("budget", str(exc)) from None
    return [
        CountRow(n=n, count=c, a_n=math.log(c) / n) for n, c in series.entries
    ]


def handle_counts(req: CountsRequest) -> CountsResponse:
    _require(req.nmax >= 1, "nmax must be >= 1", kind="validation")
    expr = _parse_or_error(req.expr)
    return CountsResponse(
        expr=print_expr(expr), rows=_count_rows(expr, req.nmax, req.budget)
    )


def handle_entropy(req: EntropyRequest) -> EntropyResponse:
    _require(req.nmax >= 1, "nmax must be >= 1", kind="validation")
    expr = _parse_or_error(req.expr)
    canonical = print_expr(expr)
    exact = entropy_exact(expr)
    if exact is not None:
        return EntropyResponse(
            expr=canonical,
            value=exact.value,
            mode=exact.mode,
            proof=exact.proof,
            flags=list(exact.flags),
        )
    try:
        series = count_series(expr, req.nmax, budget=req.budget)
    except BudgetExceededError as exc:
        raise ServiceError("budget", str(exc)) from None
    est = entropy_estimate(series, EstimatorConfig(window=req.window))
    return EntropyResponse(
        expr=canonical,
        value=est.value,
        mode=est.mode,
        a_n=[a for _, a in est.a_n],
        window=list(est.window),
        flags=list(est.flags),
    )


def _parse_p(raw: float | str) -> float:
    if isinstance(raw, str):
        text = raw.strip().lower()
        if text in ("inf", "infinity"):
            return math.inf
        try:
            value = float(text)
        except ValueError:
            raise ServiceError("usage", f"p must be a number >= 1 or 'inf', got {raw!r}") from None
    else:
        value = float(raw)
    if value != math.inf and value < 1:
        raise ServiceError("validation", "p must be >= 1 or 'inf'")
    return value


def _p_text(p: float) -> str:
    return "inf" if p == math.inf else repr(p)


def handle_bowen(req: BowenRequest) -> BowenResponse:
    _require(req.horizon >= 1, "horizon must be >= 1", kind="validation")
    _require(req.counter in ("separated", "spanning"), "counter must be separated or spanning")
    _require(req.mode in ("greedy", "exact"), "mode must be greedy or exact")
    p = _parse_p(req.p)
    eps = None
    if req.eps is not None:
        _require(len(req.eps) > 0, "eps list must be nonempty", kind="validation")
        _require(all(e > 0 for e in req.eps), "eps values must be positive", kind="validation")
        eps = tuple(sorted(set(req.eps), reverse=True))
    expr = _parse_or_error(req.expr)
    try:
        cloud = seqset_cloud(expr, req.horizon, req.budget)
    except BudgetExceededError as exc:
        raise ServiceError("budget", str(exc)) from None
    cfg = BowenGridConfig(
        eps=eps,
        eps_count=req.eps_count,
        n_grid=tuple(range(1, req.horizon + 1)),
        counter=req.counter,
        mode=req.mode,
        window=req.window,
    )
    try:
        est = bowen_entropy(cloud, DnpMetric(DiscreteMetric(), p), cfg)
    except ValueError as exc:
        raise ServiceError("validation", str(exc)) from None
    return BowenResponse(
        expr=print_expr(expr),
        value=est.value,
        counter=est.counter,
        mode=est.mode,
        p=_p_text(p),
        stabilized=est.stabilized,
        eps=list(est.eps),
        ns=list(est.ns),
        tails=list(est.tails),
        tail_slopes=list(est.tail_slopes),
        window=list(est.window),
        flags=list(est.flags),
        rows=[
            BowenCell(eps=e, n=n, count=c, a_n=a) for e, n, c, a in est.rows()
        ],
    )


def _fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ServiceError(
            "usage", f"{what} must be a rational like 2/3 or 0.25, got {text!r}"
        ) from None


def _subset_from_spec(spec: str) -> FractalSubset:
    text = spec.strip()
    if text in NAMED_SUBSETS:
        return named_subset(text)
    if text.startswith("interval:"):
        body = text[len("interval:") :]
        parts = body.split(",")
        _require(len(parts) == 2, "interval takes two endpoints, like interval:1/4,3/4")
        a = _fraction(parts[0], "interval endpoint")
        b = _fraction(parts[1], "interval endpoint")
        try:
            return interval_subset(a, b)
        except ValueError as exc:
            raise ServiceError("validation", str(exc)) from None
    if text.startswith("point:"):
        x = _fraction(text[len("point:") :], "point")
        try:
            return point_subset(x)
        except ValueError as exc:
            raise ServiceError("validation", str(exc)) from None
    raise ServiceError(
        "usage",
        f"unknown subset {spec!r}; use one of {sorted(NAMED_SUBSETS)}, "
        "interval:a,b or point:x",
    )


def handle_fractal_digits(req: FractalDigitsRequest) -> FractalDigitsResponse:
    _require(req.base >= 2, "base must be >= 2", kind="validation")
    _require(req.nmax >= 1, "nmax must be >= 1", kind="validation")
    subset = _subset_from_spec(req.subset)
    model = digit_seqset(subset, req.base)
    if model is not None:
        rows = _count_rows(model, req.nmax, req.budget)
        exact = entropy_exact(model)
        assert exact is not None, "registered models always have exact entropy"
        return FractalDigitsResponse(
            subset=subset.name,
            base=req.base,
            exact=True,
            mode="model",
            rows=rows,
            entropy_value=exact.value,
            entropy_mode=exact.mode,
        )
    entries = []
    try:
        for n in range(1, req.nmax + 1):
            entries.append((n, len(digit_prefixes(subset, req.base, n, req.budget))))
    except BudgetExceededError as exc:
        raise ServiceError("budget", str(exc)) from None
    rows = [CountRow(n=n, count=c, a_n=math.log(c) / n) for n, c in entries]
    series = CountSeries(tuple(entries), source="digit-cells", alphabet_size=req.base)
    est = entropy_estimate(series, EstimatorConfig())
    return FractalDigitsResponse(
        subset=subset.name,
        base=req.base,
        exact=subset.exact,
        mode="cells",
        rows=rows,
        entropy_value=est.value,
        entropy_mode=est.mode,
    )


def _format_word(word: tuple[int, ...], k: int) -> str:
    if k <= 10:
        return "".join(str(s) for s in word)
    return "-".join(str(s) for s in word)


def handle_fractal_ifs(req: FractalIfsRequest) -> FractalIfsResponse:
    _require(len(req.maps) >= 1, "need at least one map")
    _require(req.n >= 0, "n must be >= 0", kind="validation")
    try:
        maps = tuple(
            AffineMap(
                tuple(tuple(float(v) for v in row) for row in m.matrix),
                tuple(float(v) for v in m.offset),
                m.ratio,
            )
            for m in req.maps
        )
        ifs = IFS(maps)
    except ValueError as exc:
        raise ServiceError("validation", str(exc)) from None
    k = len(maps)
    try:
        cells = [
            IfsCellRow(
                word=_format_word(cell.word, k),
                point=list(cell.point),
                radius=cell.radius,
            )
            for cell in ifs_cells(ifs, req.n, req.budget)
        ]
    except BudgetExceededError as exc:
        raise ServiceError("budget", str(exc)) from None
    return FractalIfsResponse(
        n=req.n,
        dim=ifs.dim,
        max_ratio=ifs.max_ratio(),
        diameter_bound=ifs.diameter_bound(),
        cells=cells,
    )


def handle_check(req: CheckRequest) -> CheckResponse:
    try:
        report = run_suite(req.suite, req.cases, req.seed)
    except KeyError:
        raise ServiceError(
            "usage",
            f"unknown suite {req.suite!r}; available: {', '.join(suite_names())}",
        ) from None
    return CheckResponse(
        suite=report.suite,
        cases=report.cases,
        passed=report.passed,
        violations=[
            ViolationModel(case=v.case, message=v.message) for v in report.violations
        ],
        notes=list(report.notes),
    )
