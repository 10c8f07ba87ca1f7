"""FastAPI application over the shared handlers.

Error contract: rejected input (bad syntax, unknown names, bad flags)
is 400 with detail.kind "parse" or "usage"; well-formed input breaking
node invariants is 422 with kind "validation"; enumeration caps are 422
with kind "budget".  A failing check suite is a successful computation
and returns 200 with passed=false.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from . import handlers
from .models import (
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
    ParseRequest,
    ParseResponse,
)


def _http(exc: handlers.ServiceError) -> HTTPException:
    return HTTPException(
        status_code=exc.status,
        detail={
            "kind": exc.kind,
            "message": exc.message,
            "diagnostics": [d.model_dump() for d in exc.diagnostics],
        },
    )


def create_app() -> FastAPI:
    app = FastAPI(title="seqent", version=__version__)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/parse", response_model=ParseResponse)
    def parse(req: ParseRequest) -> ParseResponse:
        return handlers.handle_parse(req)

    @app.post("/counts", response_model=CountsResponse)
    def counts(req: CountsRequest) -> CountsResponse:
        try:
            return handlers.handle_counts(req)
        except handlers.ServiceError as exc:
            raise _http(exc) from None

    @app.post("/entropy", response_model=EntropyResponse)
    def entropy(req: EntropyRequest) -> EntropyResponse:
        try:
            return handlers.handle_entropy(req)
        except handlers.ServiceError as exc:
            raise _http(exc) from None

    @app.post("/bowen", response_model=BowenResponse)
    def bowen(req: BowenRequest) -> BowenResponse:
        try:
            return handlers.handle_bowen(req)
        except handlers.ServiceError as exc:
            raise _http(exc) from None

    @app.post("/fractal/digits", response_model=FractalDigitsResponse)
    def fractal_digits(req: FractalDigitsRequest) -> FractalDigitsResponse:
        try:
            return handlers.handle_fractal_digits(req)
        except handlers.ServiceError as exc:
            raise _http(exc) from None

    @app.post("/fractal/ifs", response_model=FractalIfsResponse)
    def fractal_ifs(req: FractalIfsRequest) -> FractalIfsResponse:
        try:
            return handlers.handle_fractal_ifs(req)
        except handlers.ServiceError as exc:
            raise _http(exc) from None

    @app.post("/check", response_model=CheckResponse)
    def check(req: CheckRequest) -> CheckResponse:
        try:
            return handlers.handle_check(req)
        except handlers.ServiceError as exc:
            raise _http(exc) from None

    return app
