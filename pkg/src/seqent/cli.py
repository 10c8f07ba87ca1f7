"""Command-line client for the sequence-set entropy toolkit.

Commands run the service handlers in process by default; --server URL
posts the same request bodies to a running service instead, so outputs
are identical either way.

Exit codes: 0 success; 1 usage or parse errors; 2 validation, budget,
or counting-cap errors; 3 a check suite that ran and found violations.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any

from .service import handlers
from .service.models import (
    BowenRequest,
    BowenResponse,
    CheckRequest,
    CheckResponse,
    CountsRequest,
    CountsResponse,
    EntropyRequest,
    EntropyResponse,
    FractalDigitsRequest,
    FractalDigitsResponse,
    FractalIfsRequest,
    FractalIfsResponse,
    IfsMapModel,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_CHECK = 3

_LOG2 = math.log(2.0)

_EXIT_BY_KIND = {"usage": EXIT_USAGE, "parse": EXIT_USAGE, "validation": EXIT_INVALID, "budget": EXIT_INVALID}


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 by default; usage errors are exit 1 here
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--bits", action="store_true", help="report rates in bits instead of nats")
    p.add_argument("--budget", type=int, default=None, help="enumeration cap")
    p.add_argument("--server", default=None, help="base URL of a running service")


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="seqent", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_counts = sub.add_parser("counts", help="prefix counts of an expression")
    p_counts.add_argument("expr")
    p_counts.add_argument("--nmax", type=int, default=10)
    _add_common(p_counts, "csv")

    p_entropy = sub.add_parser("entropy", help="exact or estimated growth rate")
    p_entropy.add_argument("expr")
    p_entropy.add_argument("--nmax", type=int, default=12)
    p_entropy.add_argument("--window", type=int, default=None)
    _add_common(p_entropy, "json")

    p_bowen = sub.add_parser("bowen", help="separated/spanning count grid")
    p_bowen.add_argument("expr")
    p_bowen.add_argument("--nmax", type=int, default=14, help="largest horizon")
    p_bowen.add_argument("--p", default="inf", help="coordinate aggregate: a number >= 1 or inf")
    p_bowen.add_argument("--eps-grid", default=None, help="comma-separated scales, largest first")
    p_bowen.add_argument("--eps-count", type=int, default=10)
    p_bowen.add_argument("--counter", choices=("separated", "spanning"), default="separated")
    p_bowen.add_argument("--mode", choices=("greedy", "exact"), default="greedy")
    p_bowen.add_argument("--window", type=int, default=None)
    _add_common(p_bowen, "csv")

    p_fractal = sub.add_parser("fractal", help="digit codings and IFS cells")
    fsub = p_fractal.add_subparsers(dest="fractal_command", required=True)

    p_digits = fsub.add_parser("digits", help="digit-coding counts of a subset of [0,1]")
    p_digits.add_argument("subset", help="whole | rationals | irrationals | cantor | interval:a,b | point:x")
    p_digits.add_argument("--base", type=int, default=3)
    p_digits.add_argument("--nmax", type=int, default=8)
    _add_common(p_digits, "csv")

    p_ifs = fsub.add_parser("ifs", help="cylinder cell table of an IFS")
    p_ifs.add_argument("specfile", help="JSON file: {\"maps\": [{\"matrix\", \"offset\", \"ratio\"?}]}")
    p_ifs.add_argument("--nmax", type=int, default=4, help="word length")
    _add_common(p_ifs, "csv")

    p_check = sub.add_parser("check", help="run a named invariant suite")
    p_check.add_argument("suite")
    p_check.add_argument("--cases", type=int, default=None)
    p_check.add_argument("--seed", type=int, default=2026)
    _add_common(p_check, "json")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)

    return parser


_ROUTES = {
    "/counts": (handlers.handle_counts, CountsResponse),
    "/entropy": (handlers.handle_entropy, EntropyResponse),
    "/bowen": (handlers.handle_bowen, BowenResponse),
    "/fractal/digits": (handlers.handle_fractal_digits, FractalDigitsResponse),
    "/fractal/ifs": (handlers.handle_fractal_ifs, FractalIfsResponse),
    "/check": (handlers.handle_check, CheckResponse),
}


def _call(server: str | None, path: str, request) -> Any:
    handler, response_model = _ROUTES[path]
    if server is None:
        return handler(request)
    import httpx

    resp = httpx.post(
        server.rstrip("/") + path, json=request.model_dump(mode="json"), timeout=300.0
    )
    if resp.status_code >= 400:
        detail = {}
        try:
            detail = resp.json().get("detail", {})
        except ValueError:
            pass
        raise handlers.ServiceError(
            detail.get("kind", "usage"),
            detail.get("message", f"server returned {resp.status_code}"),
        )
    return response_model.model_validate(resp.json())


def _rate(value: float, bits: bool) -> float:
    return value / _LOG2 if bits else value


def _json_out(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _counts_output(resp: CountsResponse, fmt: str, bits: bool) -> str:
    if fmt == "csv":
        lines = ["n,count,a_n"]
        for row in resp.rows:
            lines.append(f"{row.n},{row.count},{_rate(row.a_n, bits)!r}")
        return "\n".join(lines) + "\n"
    return _json_out(
        {
            "expr": resp.expr,
            "units": "bits" if bits else "nats",
            "rows": [
                {"n": r.n, "count": r.count, "a_n": _rate(r.a_n, bits)}
                for r in resp.rows
            ],
        }
    )


def _entropy_output(resp: EntropyResponse, bits: bool) -> str:
    return _json_out(
        {
            "expr": resp.expr,
            "value": _rate(resp.value, bits),
            "mode": resp.mode,
            "proof": resp.proof,
            "units": "bits" if bits else "nats",
            "a_n": [_rate(a, bits) for a in resp.a_n],
            "window": resp.window,
            "flags": resp.flags,
        }
    )


def _bowen_output(resp: BowenResponse, fmt: str, bits: bool) -> str:
    if fmt == "csv":
        lines = ["eps,n,count,a_n"]
        for row in resp.rows:
            lines.append(f"{row.eps!r},{row.n},{row.count},{_rate(row.a_n, bits)!r}")
        return "\n".join(lines) + "\n"
    return _json_out(
        {
            "expr": resp.expr,
            "value": _rate(resp.value, bits),
            "counter": resp.counter,
            "mode": resp.mode,
            "p": resp.p,
            "units": "bits" if bits else "nats",
            "stabilized": resp.stabilized,
            "eps": resp.eps,
            "ns": resp.ns,
            "tails": [_rate(t, bits) for t in resp.tails],
            "tail_slopes": [_rate(t, bits) for t in resp.tail_slopes],
            "window": resp.window,
            "flags": resp.flags,
            "rows": [
                {"eps": r.eps, "n": r.n, "count": r.count, "a_n": _rate(r.a_n, bits)}
                for r in resp.rows
            ],
        }
    )


def _digits_output(resp: FractalDigitsResponse, fmt: str, bits: bool) -> str:
    if fmt == "csv":
        lines = ["n,count,a_n"]
        for row in resp.rows:
            lines.append(f"{row.n},{row.count},{_rate(row.a_n, bits)!r}")
        return "\n".join(lines) + "\n"
    return _json_out(
        {
            "subset": resp.subset,
            "base": resp.base,
            "exact": resp.exact,
            "mode": resp.mode,
            "units": "bits" if bits else "nats",
            "entropy_value": None
            if resp.entropy_value is None
            else _rate(resp.entropy_value, bits),
            "entropy_mode": resp.entropy_mode,
            "rows": [
                {"n": r.n, "count": r.count, "a_n": _rate(r.a_n, bits)}
                for r in resp.rows
            ],
        }
    )


def _ifs_output(resp: FractalIfsResponse, fmt: str) -> str:
    if fmt == "csv":
        coords = [f"x{i}" for i in range(resp.dim)]
        lines = ["word," + ",".join(coords) + ",radius"]
        for cell in resp.cells:
            pt = ",".join(repr(v) for v in cell.point)
            lines.append(f"{cell.word},{pt},{cell.radius!r}")
        return "\n".join(lines) + "\n"
    return _json_out(
        {
            "n": resp.n,
            "dim": resp.dim,
            "max_ratio": resp.max_ratio,
            "diameter_bound": resp.diameter_bound,
            "cells": [
                {"word": c.word, "point": c.point, "radius": c.radius}
                for c in resp.cells
            ],
        }
    )


def _check_output(resp: CheckResponse) -> str:
    return _json_out(
        {
            "suite": resp.suite,
            "cases": resp.cases,
            "passed": resp.passed,
            "violations": [
                {"case": v.case, "message": v.message} for v in resp.violations
            ],
            "notes": resp.notes,
        }
    )


def _require_json_only(args, command: str) -> None:
    if args.format == "csv":
        raise handlers.ServiceError("usage", f"{command} reports are JSON only")


def _run(args) -> int:
    if args.command == "counts":
        req = CountsRequest(expr=args.expr, nmax=args.nmax, budget=args.budget)
        resp = _call(args.server, "/counts", req)
        sys.stdout.write(_counts_output(resp, args.format, args.bits))
        return EXIT_OK

    if args.command == "entropy":
        _require_json_only(args, "entropy")
        req = EntropyRequest(
            expr=args.expr, nmax=args.nmax, window=args.window, budget=args.budget
        )
        resp = _call(args.server, "/entropy", req)
        sys.stdout.write(_entropy_output(resp, args.bits))
        return EXIT_OK

    if args.command == "bowen":
        eps = None
        if args.eps_grid is not None:
            try:
                eps = [float(part) for part in args.eps_grid.split(",") if part.strip()]
            except ValueError:
                raise handlers.ServiceError(
                    "usage", f"--eps-grid must be comma-separated numbers, got {args.eps_grid!r}"
                ) from None
        req = BowenRequest(
            expr=args.expr,
            horizon=args.nmax,
            p=args.p,
            eps=eps,
            eps_count=args.eps_count,
            counter=args.counter,
            mode=args.mode,
            window=args.window,
            budget=args.budget,
        )
        resp = _call(args.server, "/bowen", req)
        sys.stdout.write(_bowen_output(resp, args.format, args.bits))
        return EXIT_OK

    if args.command == "fractal" and args.fractal_command == "digits":
        req = FractalDigitsRequest(
            subset=args.subset, base=args.base, nmax=args.nmax, budget=args.budget
        )
        resp = _call(args.server, "/fractal/digits", req)
        sys.stdout.write(_digits_output(resp, args.format, args.bits))
        return EXIT_OK

    if args.command == "fractal" and args.fractal_command == "ifs":
        try:
            with open(args.specfile, encoding="utf-8") as fh:
                spec = json.load(fh)
        except OSError as exc:
            raise handlers.ServiceError("usage", f"cannot read spec file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise handlers.ServiceError("usage", f"spec file is not valid JSON: {exc}") from None
        if not isinstance(spec, dict) or "maps" not in spec:
            raise handlers.ServiceError("usage", 'spec file must be an object with a "maps" list')
        try:
            maps = [IfsMapModel.model_validate(m) for m in spec["maps"]]
        except Exception as exc:
            raise handlers.ServiceError("usage", f"bad map entry: {exc}") from None
        req = FractalIfsRequest(maps=maps, n=args.nmax, budget=args.budget)
        resp = _call(args.server, "/fractal/ifs", req)
        sys.stdout.write(_ifs_output(resp, args.format))
        return EXIT_OK

    if args.command == "check":
        _require_json_only(args, "check")
        req = CheckRequest(suite=args.suite, cases=args.cases, seed=args.seed)
        resp = _call(args.server, "/check", req)
        sys.stdout.write(_check_output(resp))
        return EXIT_OK if resp.passed else EXIT_CHECK

    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except handlers.ServiceError as exc:
        sys.stderr.write(f"error ({exc.kind}): {exc.message}\n")
        for diag in exc.diagnostics:
            sys.stderr.write(
                f"  line {diag.line}, column {diag.column}: {diag.message}\n"
            )
        return _EXIT_BY_KIND[exc.kind]


if __name__ == "__main__":
    sys.exit(main())
