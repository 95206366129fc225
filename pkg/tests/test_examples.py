"""The built-in calculi: known values, oracle cross-checks, suite health."""

import pytest

from structlaws.checks import check_admissible, check_monad_laws
from structlaws.examples import BUNDLE_NAMES, build, crosscheck, oracle_eval
from structlaws.kernel import Aux, Con, EnvArg, TermArg, Var, VarRefArg
from structlaws.laws import apply_aux
from structlaws.oracles import peano_term, peano_value


@pytest.fixture(scope="module", params=BUNDLE_NAMES)
def bundle(request):
    return build(request.param)


def test_every_bundle_builds_and_validates(bundle):
    assert bundle.stack.layers


def test_crosscheck_small(bundle):
    report = crosscheck(bundle, 4)
    assert report.passed, report.counterexamples[:3]
    assert report.instances > 0


def test_admissible_small(bundle):
    ctx = (0, 2) if bundle.name == "lammu" else None
    report = check_admissible(bundle.stack, 4, context=ctx)
    assert report.passed, report.counterexamples[:3]


def test_monad_laws_small(bundle):
    report = check_monad_laws(bundle.stack, 4)
    assert report.passed, report.counterexamples[:3]


def test_peano_known_product():
    b = build("peano")
    got = oracle_eval(b, "mul", (), peano_term(2), (TermArg(peano_term(3)),))
    assert peano_value(got) == 6
    engine = apply_aux(b.stack, "mul", (), peano_term(2), (TermArg(peano_term(3)),))
    assert engine == got


def test_evalctx_plugging_composes():
    b = build("eval-ctx")
    # ((hole e1) e2) plugged with f gives app(app(f, e1), e2)
    e1 = Con("lam", (), (Var(0, 0),))
    ctx_term = Con("appc", (), (Con("appc", (), (Con("hole"), e1)), e1))
    f = Con("lam", (), (Var(0, 0),))
    got = apply_aux(b.stack, "plug", (), ctx_term, (TermArg(f),), (0,))
    assert got == Con("app", (), (Con("app", (), (f, e1)), e1))


def test_sharing_plug_is_capture_permitting():
    b = build("sharing")
    f = Con("lam", (), (Var(0, 0),))
    hole_ctx = Con("ext", (0,), (Con("hole", (0,)), f))
    got = apply_aux(b.stack, "plug", (1,), hole_ctx, (TermArg(Var(0, 0)),), (0,))
    assert got == Con("esub", (), (Var(0, 0), f))


def test_lammu_appends_to_matching_names_only():
    b = build("lammu")
    g = Con("lam", (), (Var(0, 0),))
    body = Con("named", (), (Var(1, 0), Con("lam", (), (Var(0, 0),))))
    term = Con("mu", (), (body,))
    got = apply_aux(b.stack, "nsubst", (), term, (VarRefArg(1, 0), TermArg(g)), (0, 1))
    inner = got.children[0]
    assert inner.op == "named"
    assert inner.children[1] == Con("app", (), (Con("lam", (), (Var(0, 0),)), g))


def test_difflambda_derivative_of_other_variable_is_zero():
    b = build("difflambda")
    m = Con("plus", (), (Var(0, 0), Con("zero")))
    got = apply_aux(b.stack, "pdiff", (), Var(0, 1),
                    (VarRefArg(0, 0), TermArg(m)), (2,))
    assert got == Con("zero")


def test_difflambda_derivative_of_same_variable_is_the_direction():
    b = build("difflambda")
    m = Con("plus", (), (Var(0, 0), Con("zero")))
    got = apply_aux(b.stack, "pdiff", (), Var(0, 0),
                    (VarRefArg(0, 0), TermArg(m)), (2,))
    assert got == m


def test_debruijn_substitution_shifts_under_binders():
    b = build("lambda-debruijn")
    from structlaws.kernel import ShiftEnvArg

    # (lam. app(x0, x1))[x0 := x0] with identity tail: unchanged
    t = Con("lam", (), (Con("app", (), (Var(0, 0), Var(0, 1))),))
    got = apply_aux(b.stack, "subst", (), t, (ShiftEnvArg((Var(0, 0),), 1),), (2,))
    assert got == t
    # substituting x0 := x1 moves the free occurrence under the binder
    got = apply_aux(b.stack, "subst", (), t, (ShiftEnvArg((Var(0, 1),), 2),), (2,))
    assert got == Con("lam", (), (Con("app", (), (Var(0, 0), Var(0, 2))),))


def test_unknown_bundle_name_raises():
    with pytest.raises(ValueError):
        build("nonesuch")
