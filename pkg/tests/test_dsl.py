"""Expression language: parsing, the three diagnostic classes, and the
canonical printer round-trip."""

from fractions import Fraction

import pytest

from seqent import (
    Alphabet,
    CylSched,
    DilateK,
    DslArityError,
    DslError,
    DslSyntaxError,
    DslValidationError,
    FullShift,
    Image,
    PeriodicSubsets,
    SRSet,
    count_prefixes,
    parse,
    parse_expr,
    print_expr,
    sr_set,
)
from seqent.dsl import Diagnostic, line_column
from seqent.seqset import Closure, SymbolMap, full_shift


def _pp(pre, period):
    return PeriodicSubsets(
        tuple(frozenset(s) for s in pre), tuple(frozenset(s) for s in period)
    )


# --------------------------------------------------------------- parsing


def test_parse_wrapped_full_shift():
    expr = parse_expr("dilate(2, full(2))")
    assert isinstance(expr, DilateK)
    assert expr.k == 2
    assert isinstance(expr.child, FullShift)
    assert expr.child.alphabet.size == 2


def test_parse_scheduled_set():
    expr = parse_expr("sr(3, 2/5)")
    assert isinstance(expr, SRSet)
    assert expr.alphabet.size == 3
    assert expr.z == 0
    assert expr.ratio == Fraction(2, 5)


def test_parse_every_constructor():
    sources = [
        "full(2)",
        "evconst(3, 1)",
        "sr(2, 1/2)",
        "cylsched(3, [{0,2},{1}])",
        "cylsched(2, [{0}];[{0,1}])",
        "finite(2, [|0], [0|1])",
        "orbit([1,2,0])",
        "sft([{0,1},{0}])",
        "shift(1, full(2))",
        "dilate(3, full(2))",
        "restrict(2, full(2))",
        "block(2, full(2))",
        "union(full(2), sr(2, 1/2))",
        "djunion(full(2), full(3))",
        "prod(full(2), full(3))",
        "image([1,0]:2, full(2))",
    ]
    for src in sources:
        expr = parse_expr(src)
        assert count_prefixes(expr, 3) >= 1


def test_whitespace_insensitive():
    a = parse_expr("union(full(2),sr(2,1/2))")
    b = parse_expr("  union ( full( 2 ) ,\n    sr( 2 , 1 / 2 ) )  ")
    assert a == b


def test_nested_depth():
    expr = parse_expr("block(2, dilate(2, union(full(2), evconst(2, 0))))")
    assert count_prefixes(expr, 2) == count_prefixes(full_shift(2), 2)


def test_parse_program_object():
    good = parse("full(4)")
    assert good.ok
    assert good.diagnostics == ()
    assert isinstance(good.expr, FullShift)

    bad = parse("full(")
    assert not bad.ok
    assert bad.expr is None
    assert len(bad.diagnostics) == 1
    assert bad.diagnostics[0].kind in ("syntax", "arity")


# ------------------------------------------------------------ syntax


def test_syntax_unclosed_paren():
    with pytest.raises(DslSyntaxError) as exc:
        parse_expr("full(2")
    diag = exc.value.diagnostic
    assert diag.kind == "syntax"
    assert diag.expected == ("')'",)
    assert diag.position == 6
    assert (diag.line, diag.column) == (1, 7)


def test_syntax_unknown_constructor():
    with pytest.raises(DslSyntaxError) as exc:
        parse_expr("fullshift(2)")
    diag = exc.value.diagnostic
    assert "unknown constructor 'fullshift'" in diag.message
    assert diag.position == 0
    assert any("full" in e for e in diag.expected)


def test_syntax_trailing_input():
    with pytest.raises(DslSyntaxError) as exc:
        parse_expr("full(2) full(3)")
    diag = exc.value.diagnostic
    assert "trailing input" in diag.message
    assert diag.position == 8
    assert diag.expected == ("end of input",)


def test_syntax_unexpected_character():
    with pytest.raises(DslSyntaxError) as exc:
        parse_expr("full(2) @")
    assert "unexpected character '@'" in exc.value.diagnostic.message
    assert exc.value.diagnostic.position == 8


def test_syntax_position_on_second_line():
    with pytest.raises(DslSyntaxError) as exc:
        parse_expr("union(full(2),\n  %full(2))")
    diag = exc.value.diagnostic
    assert (diag.line, diag.column) == (2, 3)


def test_line_column_helper():
    src = "ab\ncd"
    assert line_column(src, 0) == (1, 1)
    assert line_column(src, 3) == (2, 1)
    assert line_column(src, 5) == (2, 3)


# ------------------------------------------------------------- arity


def test_arity_extra_argument():
    with pytest.raises(DslArityError) as exc:
        parse_expr("full(2, 3)")
    diag = exc.value.diagnostic
    assert diag.kind == "arity"
    assert "full takes 1 argument" in diag.message
    assert diag.position == 6  # at the comma


def test_arity_missing_argument():
    with pytest.raises(DslArityError) as exc:
        parse_expr("evconst(2)")
    assert "evconst takes 2 arguments" in exc.value.diagnostic.message
    with pytest.raises(DslArityError) as exc:
        parse_expr("shift(2, )")
    assert "shift is missing its expression argument" in exc.value.diagnostic.message


def test_arity_wrong_argument_class():
    with pytest.raises(DslArityError) as exc:
        parse_expr("dilate(full(2), 2)")
    assert "dilate needs an integer count here" in exc.value.diagnostic.message
    with pytest.raises(DslArityError) as exc:
        parse_expr("union(full(2))")
    assert "union takes 2 arguments" in exc.value.diagnostic.message
    with pytest.raises(DslArityError) as exc:
        parse_expr("prod(full(2), 3)")
    assert "prod needs an expression here" in exc.value.diagnostic.message


# -------------------------------------------------------- validation


def test_validation_dilate_factor():
    with pytest.raises(DslValidationError) as exc:
        parse_expr("dilate(1, full(2))")
    diag = exc.value.diagnostic
    assert diag.kind == "validation"
    assert "factor 1" in diag.message
    assert diag.position == 0  # reported at the constructor name


def test_validation_symbol_range():
    with pytest.raises(DslValidationError) as exc:
        parse_expr("evconst(2, 7)")
    assert "out of range" in exc.value.diagnostic.message
    with pytest.raises(DslValidationError):
        parse_expr("cylsched(2, [{0,4}])")
    with pytest.raises(DslValidationError):
        parse_expr("full(0)")


def test_validation_ratio_range():
    with pytest.raises(DslValidationError) as exc:
        parse_expr("sr(2, 3/2)")
    assert "outside (0, 1]" in exc.value.diagnostic.message
    with pytest.raises(DslValidationError) as exc:
        parse_expr("sr(2, 1/0)")
    assert "denominator must be nonzero" in exc.value.diagnostic.message


def test_validation_union_alphabets():
    with pytest.raises(DslValidationError) as exc:
        parse_expr("union(full(2), full(3))")
    assert "mismatched alphabets" in exc.value.diagnostic.message


def test_validation_orbit_image_range():
    with pytest.raises(DslValidationError) as exc:
        parse_expr("orbit([0,3])")
    assert "out of range" in exc.value.diagnostic.message


def test_validation_nested_reports_inner_position():
    src = "union(full(2), dilate(1, full(2)))"
    with pytest.raises(DslValidationError) as exc:
        parse_expr(src)
    assert exc.value.diagnostic.position == src.index("dilate")


def test_diagnostic_render():
    diag = Diagnostic("syntax", "found ')'", 4, 1, 5, ("an integer",))
    assert diag.render() == "syntax error at line 1, column 5: found ')' (expected an integer)"
    assert str(DslError(diag)) == diag.render()


# ------------------------------------------------------------- printer


ROUND_TRIP = [
    "full(2)",
    "evconst(3, 1)",
    "sr(2, 1/2)",
    "cylsched(3, [{0,2},{1}])",
    "cylsched(2, [{0}];[{0,1}])",
    "finite(2, [|0], [0|1])",
    "orbit([1,2,0])",
    "sft([{0,1},{0}])",
    "shift(1, full(2))",
    "dilate(3, sr(2, 1/3))",
    "restrict(2, full(2))",
    "block(2, orbit([1,0]))",
    "union(sr(2, 1/3), sr(2, 1/2))",
    "djunion(full(2), full(3))",
    "prod(full(2), evconst(3, 0))",
    "image([1,0]:2, full(2))",
    "image([0,2]:3, union(full(2), full(2)))",
]


def test_print_round_trip():
    for src in ROUND_TRIP:
        expr = parse_expr(src)
        text = print_expr(expr)
        again = parse_expr(text)
        assert again == expr, src
        # canonical form is a fixed point of print(parse(.))
        assert print_expr(again) == text


def test_print_is_canonical_across_spacing():
    assert print_expr(parse_expr("full( 2 )")) == "full(2)"
    assert (
        print_expr(parse_expr("union(full(2),full(2))"))
        == "union(full(2), full(2))"
    )


def test_print_refuses_unprintable_nodes():
    with pytest.raises(ValueError, match="closure"):
        print_expr(Closure(full_shift(2)))
    with pytest.raises(ValueError, match="frozen symbol at 0"):
        print_expr(sr_set(3, Fraction(1, 2), z=1))
    # block-pair rules only exist programmatically
    with pytest.raises(ValueError, match="periodic"):
        print_expr(CylSched(Alphabet(2), sr_set(2, Fraction(1, 2)).rule()))


def test_print_rejects_non_expressions():
    with pytest.raises(TypeError):
        print_expr(SymbolMap(Alphabet(2), Alphabet(2), (0, 1)))


def test_printed_image_keeps_semantics():
    expr = Image(SymbolMap(Alphabet(2), Alphabet(3), (2, 0)), full_shift(2))
    again = parse_expr(print_expr(expr))
    assert again == expr
    assert count_prefixes(again, 4) == count_prefixes(expr, 4)
