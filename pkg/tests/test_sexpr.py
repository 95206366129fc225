"""Surface syntax: parse/print round trips and error reporting."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from structlaws.examples import build
from structlaws.kernel import (
    Aux,
    Con,
    EnvArg,
    ShiftEnvArg,
    ShiftRenArg,
    SortExpr,
    TermArg,
    Var,
    VarRefArg,
)
from structlaws.sexpr import ParseError, parse_term, print_term
from structlaws.testkit import EnumSpec, enum_terms


def test_var_round_trip():
    assert parse_term("(var 0 3)") == Var(0, 3)
    assert print_term(Var(1, 2)) == "(var 1 2)"


def test_con_with_nat_args():
    t = parse_term("(op ext 2 (op hole 2) (var 0 0))")
    assert t == Con("ext", (2,), (Con("hole", (2,)), Var(0, 0)))
    assert parse_term(print_term(t)) == t


def test_aux_with_every_argument_form():
    text = ("(aux subst (var 0 0) (env (var 0 1)) (senv ((var 0 0)) 2) "
            "(sren (1 0) 2) (ref 1 0))")
    t = parse_term(text)
    assert t.params == (
        EnvArg(0, (Var(0, 1),)),
        ShiftEnvArg((Var(0, 0),), 2),
        ShiftRenArg((1, 0), 2),
        VarRefArg(1, 0),
    )
    assert print_term(t) == text


def test_term_parameters_parse_bare_and_wrapped():
    bare = parse_term("(aux add (op zero) (op zero))")
    wrapped = parse_term("(aux add () (op zero) ((op zero)))")
    assert bare == wrapped
    assert bare.params == (TermArg(Con("zero")),)


def test_whitespace_and_comments_are_insignificant():
    t = parse_term("(op s ; a numeral\n  (op zero)\n)")
    assert t == Con("s", (), (Con("zero"),))


@pytest.mark.parametrize("bad", [
    "", "(", ")", "(var 0)", "(op)", "(aux add)", "(var x y)",
    "(op s (op zero)) (op zero)", "(frob 1 2)",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_term(bad)


@pytest.mark.parametrize("bundle_name,sort,ctx", [
    ("peano", "nat", (0,)),
    ("lambda-presheaf", "p", (2,)),
    ("difflambda", "m", (1,)),
])
def test_enumerated_terms_round_trip(bundle_name, sort, ctx):
    b = build(bundle_name)
    spec = EnumSpec(b.sig, SortExpr(sort), ctx, 4, stack=b.stack, allow_aux=True)
    for t in enum_terms(spec):
        assert parse_term(print_term(t)) == t


@given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=9))
@settings(max_examples=50)
def test_var_print_parse_inverse(kind, index):
    v = Var(kind, index)
    assert parse_term(print_term(v)) == v


@given(st.lists(st.integers(min_value=0, max_value=5), max_size=4),
       st.integers(min_value=0, max_value=4))
@settings(max_examples=50)
def test_shift_renaming_round_trip(prefix, shift):
    t = Aux("ren", (), Var(0, 0), (ShiftRenArg(tuple(prefix), shift),))
    assert parse_term(print_term(t)) == t
