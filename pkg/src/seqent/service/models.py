"""Request and response bodies for the computation endpoints.

The CLI speaks exactly these models, whether it runs the handlers in
process or posts them to a running service, so the two paths cannot
drift apart.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class DiagnosticModel(BaseModel):
    kind: str
    message: str
    position: int
    line: int
    column: int
    expected: list[str] = Field(default_factory=list)


class ParseRequest(BaseModel):
    source: str


class ParseResponse(BaseModel):
    ok: bool
    canonical: str | None = None
    alphabet: int | None = None
    diagnostics: list[DiagnosticModel] = Field(default_factory=list)


class CountsRequest(BaseModel):
    expr: str
    nmax: int = 10
    budget: int | None = None


class CountRow(BaseModel):
    n: int
    count: int
    a_n: float


class CountsResponse(BaseModel):
    expr: str
    rows: list[CountRow]


class EntropyRequest(BaseModel):
    expr: str
    nmax: int = 12
    window: int | None = None
    budget: int | None = None


class EntropyResponse(BaseModel):
    expr: str
    value: float
    mode: str
    proof: str | None = None
    a_n: list[float] = Field(default_factory=list)
    window: list[int] = Field(default_factory=list)
    flags: list[str] = Field(default_factory=list)


class BowenRequest(BaseModel):
    expr: str
    horizon: int = 14
    p: float | str = "inf"
    eps: list[float] | None = None
    eps_count: int = 10
    counter: str = "separated"
    mode: str = "greedy"
    window: int | None = None
    budget: int | None = None


class BowenCell(BaseModel):
    eps: float
    n: int
    count: int
    a_n: float


class BowenResponse(BaseModel):
    expr: str
    value: float
    counter: str
    mode: str
    p: str
    stabilized: bool
    eps: list[float]
    ns: list[int]
    tails: list[float]
    tail_slopes: list[float]
    window: list[int]
    flags: list[str]
    rows: list[BowenCell]


class FractalDigitsRequest(BaseModel):
    subset: str
    base: int = 3
    nmax: int = 8
    budget: int | None = None


class FractalDigitsResponse(BaseModel):
    subset: str
    base: int
    exact: bool
    mode: str
    rows: list[CountRow]
    entropy_value: float | None = None
    entropy_mode: str | None = None


class IfsMapModel(BaseModel):
    matrix: list[list[float]]
    offset: list[float]
    ratio: float | None = None


class FractalIfsRequest(BaseModel):
    maps: list[IfsMapModel]
    n: int = 4
    budget: int | None = None


class IfsCellRow(BaseModel):
    word: str
    point: list[float]
    radius: float


class FractalIfsResponse(BaseModel):
    n: int
    dim: int
    max_ratio: float
    diameter_bound: float
    cells: list[IfsCellRow]


class CheckRequest(BaseModel):
    suite: str
    cases: int | None = None
    seed: int = 2026


class ViolationModel(BaseModel):
    case: str
    message: str


class CheckResponse(BaseModel):
    suite: str
    cases: int
    passed: bool
    violations: list[ViolationModel]
    notes: list[str] = Field(default_factory=list)
