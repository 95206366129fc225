"""Core term representation: sizes, ordering, scope checking, renaming."""

import pytest

from structlaws.kernel import (
    Con,
    EnvArg,
    NatExpr,
    OpSchema,
    ScopedRen,
    Signature,
    SortExpr,
    SubSpec,
    TermArg,
    UnscopedRen,
    Var,
    VarKind,
    check_scope,
    extend_context,
    rename,
    term_key,
    term_size,
    validate_signature,
)
from structlaws.examples import build
from structlaws.oracles import peano_term


@pytest.fixture(scope="module")
def peano():
    return build("peano")


@pytest.fixture(scope="module")
def presheaf():
    return build("lambda-presheaf")


def test_natexpr_eval_and_str():
    assert NatExpr(None, 3).eval(()) == 3
    assert NatExpr(0, 2).eval((5,)) == 7
    assert str(NatExpr(None, 3)) == "3"
    assert str(NatExpr(1, 0)) == "#1"
    assert str(NatExpr(0, 2)) == "#0+2"


def test_term_size_counts_nodes_not_nat_args():
    t = Con("ext", (4,), (Con("hole", (4,)), Var(0, 0)))
    assert term_size(t) == 3
    assert term_size(peano_term(5)) == 6


def test_term_key_orders_by_size_first():
    small = peano_term(1)
    big = peano_term(3)
    assert term_key(small) < term_key(big)
    assert sorted([big, small], key=term_key) == [small, big]


def test_validate_signature_accepts_all_bundles():
    for name in ("peano", "lambda-presheaf", "sharing", "lammu", "difflambda"):
        assert validate_signature(build(name).sig) == []


def test_validate_signature_rejects_unknown_sort():
    sig = Signature(
        kinds=(VarKind(0, "x"),),
        sorts=(("nat", False),),
        var_sort={0: SortExpr("nat")},
        ops=(OpSchema("bad", SortExpr("ghost")),),
    )
    assert validate_signature(sig)


def test_check_scope_bounds_indices(presheaf):
    sig = presheaf.sig
    p = SortExpr("p")
    assert check_scope(sig, (1,), p, Var(0, 0))
    assert not check_scope(sig, (1,), p, Var(0, 1))
    assert check_scope(sig, (0,), p, Con("lam", (), (Var(0, 0),)))
    assert not check_scope(sig, (0,), p, Con("lam", (), (Var(0, 1),)))


def test_check_scope_rejects_wrong_arity(peano):
    assert not check_scope(peano.sig, (0,), SortExpr("nat"), Con("s", (), ()))


def test_extend_context_pads_missing_kinds(presheaf):
    assert extend_context(presheaf.sig, (2,), ()) == (2,)
    assert extend_context(presheaf.sig, (2,), (1,)) == (3,)


def test_scoped_rename_lifts_under_binders(presheaf):
    sig = presheaf.sig
    swap = ScopedRen((1, 0), 2)
    # free occurrences move, both at the top level and under the binder
    t = Con("app", (), (Var(0, 0), Con("lam", (), (Var(0, 0),))))
    out = rename(sig, t, (swap,))
    assert out == Con("app", (), (Var(0, 1), Con("lam", (), (Var(0, 1),))))
    # the bound occurrence (top index under the binder) stays put
    bound = Con("lam", (), (Var(0, 2),))
    assert rename(sig, bound, (swap,)) == bound


def test_unscoped_rename_shifts_free_indices():
    bundle = build("lambda-debruijn")
    t = Con("lam", (), (Con("app", (), (Var(0, 0), Var(0, 1))),))
    shift = UnscopedRen((), 1)
    out = rename(bundle.sig, t, (shift,))
    assert out == Con("lam", (), (Con("app", (), (Var(0, 0), Var(0, 2))),))


def test_rename_passes_through_env_arguments(presheaf):
    from structlaws.kernel import Aux

    sig = presheaf.sig
    t = Aux("subst", (), Var(0, 0), (EnvArg(0, (Var(0, 1),)),))
    swap = ScopedRen((1, 0), 2)
    out = rename(sig, t, (swap,), stack=presheaf.stack)
    assert out.params[0].entries == (Var(0, 0),)
