"""Textual expression language for sequence sets.

Grammar (whitespace-insensitive):

    expr  := "full(" INT ")" | "evconst(" INT "," INT ")"
           | "sr(" INT "," INT "/" INT ")"
           | "cylsched(" INT "," blocks ")"
           | "finite(" INT "," seqspec ("," seqspec)* ")"
           | "orbit(" intlist ")" | "sft(" setlist ")"
           | "shift(" INT "," expr ")" | "dilate(" INT "," expr ")"
           | "restrict(" INT "," expr ")" | "block(" INT "," expr ")"
           | "union(" expr "," expr ")" | "djunion(" expr "," expr ")"
           | "prod(" expr "," expr ")" | "image(" intlist ":" INT "," expr ")"
    blocks  := setlist | setlist ";" setlist      (preperiod ";" period)
    seqspec := "[" ints? "|" ints "]"             (preperiod "|" period)
    intlist := "[" ints "]"
    setlist := "[" set ("," set)* "]"
    set     := "{" ints "}"
    ints    := INT ("," INT)*

Errors fall into three classes, each carrying the source position:
syntax (unexpected token, with the expected alternatives), arity (an
argument list that does not fit the constructor's signature), and
validation (structurally well-formed input whose values break a node
invariant, reported at the constructor's name).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .alphabet import Alphabet
from .dynamics import FiniteMap, TransitionRelation
from .schedules import PeriodicSubsets
from .seqset import (
    BlockK,
    CylSched,
    Closure,
    DilateK,
    DisjointUnion,
    EvConst,
    EventuallySeq,
    FiniteSet,
    FullShift,
    Image,
    Orbit,
    OrbitSV,
    RestrictK,
    SRSet,
    SetProduct,
    SetUnion,
    SeqSetExpr,
    ShiftK,
    SymbolMap,
    node_problems,
)

_CONSTRUCTORS = (
    "block",
    "cylsched",
    "dilate",
    "djunion",
    "evconst",
    "finite",
    "full",
    "image",
    "orbit",
    "prod",
    "restrict",
    "sft",
    "shift",
    "sr",
    "union",
)

_PUNCT = "()[]{},;:|/"


def line_column(source: str, pos: int) -> tuple[int, int]:
    pos = max(0, min(pos, len(source)))
    line = source.count("\n", 0, pos) + 1
    last_nl = source.rfind("\n", 0, pos)
    return line, pos - last_nl


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # "syntax" | "arity" | "validation"
    message: str
    position: int
    line: int
    column: int
    expected: tuple[str, ...] = ()

    def render(self) -> str:
        out = f"{self.kind} error at line {self.line}, column {self.column}: {self.message}"
        if self.expected:
            out += " (expected " + " or ".join(self.expected) + ")"
        return out


class DslError(ValueError):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(diagnostic.render())


class DslSyntaxError(DslError):
    pass


class DslArityError(DslError):
    pass


class DslValidationError(DslError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "int", a punctuation character, or "end"
    text: str
    pos: int

    def describe(self) -> str:
        if self.kind == "end":
            return "end of input"
        if self.kind in ("name", "int"):
            return f"{self.kind} {self.text!r}"
        return f"'{self.text}'"


def _lex(source: str) -> list[Token]:
    out: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c.isalpha():
            j = i
            while j < n and source[j].isalpha():
                j += 1
            out.append(Token("name", source[i:j], i))
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            out.append(Token("int", source[i:j], i))
            i = j
            continue
        if c in _PUNCT:
            out.append(Token(c, c, i))
            i += 1
            continue
        line, col = line_column(source, i)
        raise DslSyntaxError(
            Diagnostic("syntax", f"unexpected character {c!r}", i, line, col)
        )
    out.append(Token("end", "", n))
    return out


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _lex(source)
        self.idx = 0

    # -- token plumbing ------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.idx]

    def advance(self) -> Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def _diag(self, kind: str, message: str, pos: int, expected: tuple[str, ...] = ()):
        line, col = line_column(self.source, pos)
        return Diagnostic(kind, message, pos, line, col, expected)

    def syntax(self, message: str, pos: int, expected: tuple[str, ...] = ()):
        raise DslSyntaxError(self._diag("syntax", message, pos, expected))

    def arity(self, message: str, pos: int):
        raise DslArityError(self._diag("arity", message, pos))

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.syntax(f"found {tok.describe()}", tok.pos, (what,))
        return self.advance()

    def expect_int(self, what: str = "an integer") -> int:
        return int(self.expect("int", what).text)

    # -- entry ---------------------------------------------------------

    def parse(self) -> SeqSetExpr:
        expr = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            self.syntax(f"trailing input {tok.describe()}", tok.pos, ("end of input",))
        return expr

    def expr(self) -> SeqSetExpr:
        tok = self.peek()
        if tok.kind != "name":
            self.syntax(f"found {tok.describe()}", tok.pos, ("a constructor name",))
        if tok.text not in _CONSTRUCTORS:
            self.syntax(
                f"unknown constructor {tok.text!r}",
                tok.pos,
                ("one of " + ", ".join(_CONSTRUCTORS),),
            )
        self.advance()
        self.expect("(", "'('")
        method = getattr(self, "node_" + tok.text)
        node = method(tok)
        self.expect(")", "')'")
        return self.validated(node, tok)

    def validated(self, node: SeqSetExpr, tok: Token):
        problems = node_problems(node)
        if problems:
            raise DslValidationError(
                self._diag("validation", "; ".join(problems), tok.pos)
            )
        return node

    def build(self, ctor, tok: Token, *args):
        try:
            return ctor(*args)
        except ValueError as exc:
            raise DslValidationError(
                self._diag("validation", str(exc), tok.pos)
            ) from None

    # -- argument plumbing ----------------------------------------------

    def comma(self, name: str, total: str):
        tok = self.peek()
        if tok.kind == ")":
            self.arity(f"{name} takes {total}", tok.pos)
        self.expect(",", "','")

    def finish_args(self, name: str, total: str):
        tok = self.peek()
        if tok.kind == ",":
            self.arity(f"{name} takes {total}", tok.pos)

    def int_arg(self, name: str, role: str) -> int:
        tok = self.peek()
        if tok.kind != "int":
            if tok.kind == ")" or tok.kind == ",":
                self.arity(f"{name} is missing its {role}", tok.pos)
            if tok.kind in ("name", "[", "{"):
                self.arity(f"{name} needs an integer {role} here", tok.pos)
            self.syntax(f"found {tok.describe()}", tok.pos, ("an integer",))
        return int(self.advance().text)

    def expr_arg(self, name: str) -> SeqSetExpr:
        tok = self.peek()
        if tok.kind in (")", ","):
            self.arity(f"{name} is missing its expression argument", tok.pos)
        if tok.kind in ("int", "[", "{"):
            self.arity(f"{name} needs an expression here", tok.pos)
        return self.expr()

    # -- data literals ---------------------------------------------------

    def ints(self, end_kinds: tuple[str, ...]) -> list[int]:
        out = [self.expect_int()]
        while self.peek().kind == ",":
            self.advance()
            out.append(self.expect_int())
        tok = self.peek()
        if tok.kind not in end_kinds:
            self.syntax(
                f"found {tok.describe()}",
                tok.pos,
                tuple(f"','" if k == "," else f"'{k}'" for k in end_kinds),
            )
        return out

    def intlist(self) -> list[int]:
        self.expect("[", "'['")
        out = self.ints(("]",))
        self.expect("]", "']'")
        return out

    def symbol_set(self) -> frozenset[int]:
        self.expect("{", "'{'")
        out = self.ints(("}",))
        self.expect("}", "'}'")
        return frozenset(out)

    def setlist(self) -> list[frozenset[int]]:
        self.expect("[", "'['")
        out = [self.symbol_set()]
        while self.peek().kind == ",":
            self.advance()
            out.append(self.symbol_set())
        self.expect("]", "']'")
        return out

    def seqspec(self, tok_ctx: Token) -> EventuallySeq:
        self.expect("[", "'['")
        pre: list[int] = []
        if self.peek().kind == "int":
            pre = self.ints(("|",))
        self.expect("|", "'|'")
        period = self.ints(("]",))
        self.expect("]", "']'")
        return self.build(EventuallySeq, tok_ctx, tuple(pre), tuple(period))

    # -- constructors ------------------------------------------------------

    def node_full(self, tok: Token):
        k = self.int_arg("full", "alphabet size")
        self.finish_args("full", "1 argument")
        return self.build(FullShift, tok, self.build(Alphabet, tok, k))

    def node_evconst(self, tok: Token):
        k = self.int_arg("evconst", "alphabet size")
        self.comma("evconst", "2 arguments")
        z = self.int_arg("evconst", "limit symbol")
        self.finish_args("evconst", "2 arguments")
        return self.build(EvConst, tok, self.build(Alphabet, tok, k), z)

    def node_sr(self, tok: Token):
        k = self.int_arg("sr", "alphabet size")
        self.comma("sr", "2 arguments")
        num = self.int_arg("sr", "ratio numerator")
        self.expect("/", "'/'")
        den = self.int_arg("sr", "ratio denominator")
        self.finish_args("sr", "2 arguments")
        if den == 0:
            raise DslValidationError(
                self._diag("validation", "ratio denominator must be nonzero", tok.pos)
            )
        return self.build(
            SRSet, tok, self.build(Alphabet, tok, k), 0, Fraction(num, den)
        )

    def node_cylsched(self, tok: Token):
        k = self.int_arg("cylsched", "alphabet size")
        self.comma("cylsched", "2 arguments")
        first = self.setlist()
        pre: list[frozenset[int]] = []
        period = first
        if self.peek().kind == ";":
            self.advance()
            pre, period = first, self.setlist()
        self.finish_args("cylsched", "2 arguments")
        rule = self.build(PeriodicSubsets, tok, tuple(pre), tuple(period))
        return self.build(CylSched, tok, self.build(Alphabet, tok, k), rule)

    def node_finite(self, tok: Token):
        k = self.int_arg("finite", "alphabet size")
        self.comma("finite", "an alphabet size then sequences")
        seqs = [self.seqspec(tok)]
        while self.peek().kind == ",":
            self.advance()
            seqs.append(self.seqspec(tok))
        return self.build(
            FiniteSet, tok, self.build(Alphabet, tok, k), tuple(seqs)
        )

    def node_orbit(self, tok: Token):
        table = self.intlist()
        self.finish_args("orbit", "1 argument")
        alphabet = self.build(Alphabet, tok, len(table))
        return Orbit(self.build(FiniteMap, tok, alphabet, tuple(table)))

    def node_sft(self, tok: Token):
        edges = self.setlist()
        self.finish_args("sft", "1 argument")
        alphabet = self.build(Alphabet, tok, len(edges))
        return OrbitSV(self.build(TransitionRelation, tok, alphabet, tuple(edges)))

    def _wrapped(self, name: str, ctor, tok: Token):
        k = self.int_arg(name, "count")
        self.comma(name, "2 arguments")
        child = self.expr_arg(name)
        self.finish_args(name, "2 arguments")
        return ctor(k, child)

    def node_shift(self, tok: Token):
        return self._wrapped("shift", ShiftK, tok)

    def node_dilate(self, tok: Token):
        return self._wrapped("dilate", DilateK, tok)

    def node_restrict(self, tok: Token):
        return self._wrapped("restrict", RestrictK, tok)

    def node_block(self, tok: Token):
        return self._wrapped("block", BlockK, tok)

    def _pair(self, name: str, ctor, tok: Token):
        left = self.expr_arg(name)
        self.comma(name, "2 arguments")
        right = self.expr_arg(name)
        self.finish_args(name, "2 arguments")
        return ctor(left, right)

    def node_union(self, tok: Token):
        return self._pair("union", SetUnion, tok)

    def node_djunion(self, tok: Token):
        return self._pair("djunion", DisjointUnion, tok)

    def node_prod(self, tok: Token):
        return self._pair("prod", SetProduct, tok)

    def node_image(self, tok: Token):
        table = self.intlist()
        self.expect(":", "':'")
        target = self.int_arg("image", "target alphabet size")
        self.comma("image", "2 arguments")
        child = self.expr_arg("image")
        self.finish_args("image", "2 arguments")
        symmap = self.build(
            SymbolMap,
            tok,
            self.build(Alphabet, tok, len(table)),
            self.build(Alphabet, tok, target),
            tuple(table),
        )
        return Image(symmap, child)


@dataclass(frozen=True)
class DslProgram:
    """Parse result: the expression on success, diagnostics otherwise."""

    source: str
    expr: SeqSetExpr | None
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.expr is not None


def parse_expr(source: str) -> SeqSetExpr:
    """Parse a single expression, raising a DslError on any problem."""
    return _Parser(source).parse()


def parse(source: str) -> DslProgram:
    """Parse into a program object that carries diagnostics instead of
    raising."""
    try:
        return DslProgram(source, parse_expr(source), ())
    except DslError as exc:
        return DslProgram(source, None, (exc.diagnostic,))


def _ints(values) -> str:
    return ",".join(str(v) for v in values)


def _symbol_set(s: frozenset[int]) -> str:
    return "{" + _ints(sorted(s)) + "}"


def _setlist(sets) -> str:
    return "[" + ",".join(_symbol_set(s) for s in sets) + "]"


def _seqspec(seq: EventuallySeq) -> str:
    return "[" + _ints(seq.pre) + "|" + _ints(seq.period) + "]"


def print_expr(expr: SeqSetExpr) -> str:
    """Canonical textual form; reparsing it reproduces the expression."""
    if isinstance(expr, FullShift):
        return f"full({expr.alphabet.size})"
    if isinstance(expr, EvConst):
        return f"evconst({expr.alphabet.size}, {expr.z})"
    if isinstance(expr, SRSet):
        if expr.z != 0:
            raise ValueError(
                "sr(k, r) fixes the frozen symbol at 0; this set freezes "
                f"at {expr.z} and has no textual form"
            )
        r = expr.ratio
        return f"sr({expr.alphabet.size}, {r.numerator}/{r.denominator})"
    if isinstance(expr, CylSched):
        rule = expr.rule
        if not isinstance(rule, PeriodicSubsets):
            raise ValueError("only periodic schedules have a textual form")
        body = _setlist(rule.period)
        if rule.pre:
            body = _setlist(rule.pre) + ";" + body
        return f"cylsched({expr.alphabet.size}, {body})"
    if isinstance(expr, FiniteSet):
        seqs = ", ".join(_seqspec(s) for s in expr.seqs)
        return f"finite({expr.alphabet.size}, {seqs})"
    if isinstance(expr, Orbit):
        return f"orbit([{_ints(expr.table.table)}])"
    if isinstance(expr, OrbitSV):
        return f"sft({_setlist(expr.relation.successors)})"
    if isinstance(expr, ShiftK):
        return f"shift({expr.k}, {print_expr(expr.child)})"
    if isinstance(expr, DilateK):
        return f"dilate({expr.k}, {print_expr(expr.child)})"
    if isinstance(expr, RestrictK):
        return f"restrict({expr.k}, {print_expr(expr.child)})"
    if isinstance(expr, BlockK):
        return f"block({expr.k}, {print_expr(expr.child)})"
    if isinstance(expr, SetUnion):
        return f"union({print_expr(expr.left)}, {print_expr(expr.right)})"
    if isinstance(expr, DisjointUnion):
        return f"djunion({print_expr(expr.left)}, {print_expr(expr.right)})"
    if isinstance(expr, SetProduct):
        return f"prod({print_expr(expr.left)}, {print_expr(expr.right)})"
    if isinstance(expr, Image):
        m = expr.map
        return f"image([{_ints(m.table)}]:{m.target.size}, {print_expr(expr.child)})"
    if isinstance(expr, Closure):
        raise ValueError("closure nodes have no textual form")
    raise TypeError(f"not a sequence-set expression: {expr!r}")
