"""Seven prebuilt calculi, each as a signature, a validated law stack,
its equation systems, and independently coded reference oracles.

- ``peano``: naturals with derived addition and multiplication.
- ``eval-ctx``: applicative evaluation contexts with hole plugging.
- ``lambda-presheaf``: scoped lambda calculus with environment
  substitution, plus the associativity and right-unit equations.
- ``sharing``: lambda calculus with explicit substitutions and capturing
  contexts indexed by their number of capturing variables.
- ``lammu``: lambda-mu with named streams and named substitution.
- ``difflambda``: differential lambda calculus with formal sums, a
  four-law summand layer, extended differential application, environment
  substitution, and the partial derivative.
- ``lambda-debruijn``: unscoped de Bruijn lambda calculus with a renaming
  layer under a substitution layer, plus the same two equations over
  shift-environments.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import oracles
from .equations import EquationSystem, Interpretation
from .kernel import (
    Aux,
    Con,
    EnvArg,
    NatExpr,
    OpSchema,
    ShiftEnvArg,
    ShiftRenArg,
    Signature,
    SortExpr,
    SubSpec,
    Term,
    TermArg,
    Var,
    VarKind,
    VarRefArg,
    VarRefSpec,
    validate_signature,
)
from .laws import (
    ArgVar,
    AuxSchema,
    BAux,
    BCon,
    BNat,
    Clause,
    EnvLookup,
    EnvLen,
    EnvParam,
    FreshVar,
    Guard,
    IdEnv,
    LawStack,
    LiftEnv,
    MainOption,
    MainRef,
    MapEnvWithAux,
    ParamRef,
    PassParam,
    RC,
    RenVar,
    ShiftEnvParam,
    ShiftRenParam,
    Stuck,
    StructuralLaw,
    SubTerm,
    TermParam,
    TheVar,
    VarRefParam,
    Weaken,
    normalize,
)
from .sexpr import print_term
from .testkit import EnumSpec, Report, aux_instances


@dataclass(frozen=True)
class ExampleBundle:
    name: str
    sig: Signature
    stack: LawStack
    systems: tuple = ()
    oracles: tuple = ()  # of (law name, function(bundle, nat_args, main, params) -> Term)
    # ambient context for cross-checks; None means two free variables per kind
    check_context: tuple = None

    def oracle_for(self, law_name: str):
        for name, fn in self.oracles:
            if name == law_name:
                return fn
        return None


BUNDLE_NAMES = (
    "peano",
    "eval-ctx",
    "lambda-presheaf",
    "sharing",
    "lammu",
    "difflambda",
    "lambda-debruijn",
)


def build(name: str) -> ExampleBundle:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown bundle {name!r}; choose from {', '.join(BUNDLE_NAMES)}")
    bundle = builder()
    diags = validate_signature(bundle.sig)
    if diags:
        raise ValueError(f"bundle {name}: " + "; ".join(diags))
    return bundle


# ---------------------------------------------------------------------------
# peano


def _build_peano() -> ExampleBundle:
    nat = SortExpr("nat")
    sig = Signature(
        kinds=(VarKind(0, "x"),),
        sorts=(("nat", False),),
        var_sort={0: nat},
        ops=(
            OpSchema("zero", nat),
            OpSchema("s", nat, (SubSpec(nat, (NatExpr(None, 0),)),)),
        ),
    )
    add = StructuralLaw(
        AuxSchema("add", 0, (MainOption(nat, (NatExpr(None, 0),), nat),), (TermParam(nat),)),
        (
            Clause("zero", ParamRef(0)),
            Clause("s", BCon("s", (), (RC(0, (PassParam(0),)),))),
            Clause(("var", 0), Stuck()),
        ),
    )
    mul = StructuralLaw(
        AuxSchema("mul", 1, (MainOption(nat, (NatExpr(None, 0),), nat),), (TermParam(nat),)),
        (
            Clause("zero", BCon("zero")),
            Clause("s", BAux("add", RC(0, (PassParam(0),)), (ParamRef(0),))),
            Clause(("var", 0), Stuck()),
        ),
    )
    stack = LawStack(sig).push_layer([add]).push_layer([mul])

    assoc_schema = AuxSchema(
        "add-assoc", 2,
        (MainOption(nat, (NatExpr(None, 0),), nat),),
        (TermParam(nat), TermParam(nat)),
    )
    add_assoc = EquationSystem(
        "add-assoc",
        assoc_schema,
        (
            Clause("zero", BAux("add", ParamRef(0), (ParamRef(1),))),
            Clause("s", BCon("s", (), (RC(0, (PassParam(0), PassParam(1))),))),
            Clause(("var", 0), Stuck()),
        ),
        left=Interpretation(
            BAux("add", BAux("add", MainRef(), (ParamRef(0),)), (ParamRef(1),))
        ),
        right=Interpretation(
            BAux("add", MainRef(), (BAux("add", ParamRef(0), (ParamRef(1),)),))
        ),
    )
    mul_assoc = EquationSystem(
        "mul-assoc",
        AuxSchema(
            "mul-assoc", 2,
            (MainOption(nat, (NatExpr(None, 0),), nat),),
            (TermParam(nat), TermParam(nat)),
        ),
        (
            Clause("zero", BCon("zero")),
            Clause(
                "s",
                BAux(
                    "add",
                    RC(0, (PassParam(0), PassParam(1))),
                    (BAux("mul", ParamRef(0), (ParamRef(1),)),),
                ),
            ),
            Clause(("var", 0), Stuck()),
        ),
        left=Interpretation(
            BAux("mul", BAux("mul", MainRef(), (ParamRef(0),)), (ParamRef(1),))
        ),
        right=Interpretation(
            BAux("mul", MainRef(), (BAux("mul", ParamRef(0), (ParamRef(1),)),))
        ),
    )

    def add_oracle(bundle, nat_args, main, params, ctx):
        return oracles.peano_add(main, params[0].term)

    def mul_oracle(bundle, nat_args, main, params, ctx):
        return oracles.peano_mul(main, params[0].term)

    return ExampleBundle(
        "peano", sig, stack,
        systems=(add_assoc, mul_assoc),
        oracles=(("add", add_oracle), ("mul", mul_oracle)),
        check_context=(0,),
    )


def peano_wrong_assoc() -> EquationSystem:
    """The associativity system with a deliberately wrong right side
    x + (y + s(z)); used as a negative control for the checkers."""
    good = _build_peano().systems[0]
    return EquationSystem(
        "add-assoc-wrong",
        good.schema,
        good.clauses,
        left=good.left,
        right=Interpretation(
            BAux(
                "add",
                MainRef(),
                (BAux("add", ParamRef(0), (BCon("s", (), (ParamRef(1),)),)),),
            )
        ),
    )


def peano_machine_algebra():
    """Machine-integer augmented algebra for the peano stack."""
    from .laws import AugmentedAlgebra

    return AugmentedAlgebra(
        ops={"zero": lambda nats, cs: 0, "s": lambda nats, cs: cs[0] + 1},
        aux={
            "add": lambda nats, m, ps: m + ps[0],
            "mul": lambda nats, m, ps: m * ps[0],
        },
    )


def peano_max_algebra():
    """Deliberately incompatible algebra (addition read as maximum); a
    negative control showing check_algebra can fail."""
    from .laws import AugmentedAlgebra

    return AugmentedAlgebra(
        ops={"zero": lambda nats, cs: 0, "s": lambda nats, cs: cs[0] + 1},
        aux={
            "add": lambda nats, m, ps: max(m, ps[0]),
            "mul": lambda nats, m, ps: m * ps[0],
        },
    )


# ---------------------------------------------------------------------------
# eval-ctx


def _build_evalctx() -> ExampleBundle:
    p = SortExpr("p")
    c = SortExpr("c")
    sig = Signature(
        kinds=(VarKind(0, "x"),),
        sorts=(("p", False), ("c", False)),
        var_sort={0: p},
        ops=(
            OpSchema("app", p, (SubSpec(p, (NatExpr(None, 0),)), SubSpec(p, (NatExpr(None, 0),)))),
            OpSchema("lam", p, (SubSpec(p, (NatExpr(None, 1),)),)),
            OpSchema("hole", c),
            OpSchema("appc", c, (SubSpec(c, (NatExpr(None, 0),)), SubSpec(p, (NatExpr(None, 0),)))),
        ),
    )
    plug = StructuralLaw(
        AuxSchema("plug", 0, (MainOption(c, (NatExpr(None, 0),), p),), (TermParam(p),)),
        (
            Clause("hole", ParamRef(0)),
            Clause("appc", BCon("app", (), (RC(0, (PassParam(0),)), SubTerm(1)))),
        ),
    )
    stack = LawStack(sig).push_layer([plug])

    def plug_oracle(bundle, nat_args, main, params, ctx):
        return oracles.evalctx_plug(main, params[0].term)

    return ExampleBundle("eval-ctx", sig, stack, oracles=(("plug", plug_oracle),))


# ---------------------------------------------------------------------------
# lambda-presheaf


def _build_presheaf() -> ExampleBundle:
    p = SortExpr("p")
    sig = Signature(
        kinds=(VarKind(0, "x"),),
        sorts=(("p", False),),
        var_sort={0: p},
        ops=(
            OpSchema("app", p, (SubSpec(p, (NatExpr(None, 0),)), SubSpec(p, (NatExpr(None, 0),)))),
            OpSchema("lam", p, (SubSpec(p, (NatExpr(None, 1),)),)),
        ),
    )
    subst = StructuralLaw(
        AuxSchema("subst", 0, (MainOption(p, (EnvLen(0),), p),), (EnvParam(0, p),)),
        (
            Clause(("var", 0), EnvLookup(0)),
            Clause("app", BCon("app", (), (RC(0, (PassParam(0),)), RC(1, (PassParam(0),))))),
            Clause("lam", BCon("lam", (), (RC(0, (LiftEnv(0),)),))),
        ),
    )
    stack = LawStack(sig).push_layer([subst])

    assoc = EquationSystem(
        "subst-assoc",
        AuxSchema(
            "subst-assoc", 1,
            (MainOption(p, (EnvLen(0),), p),),
            (EnvParam(0, p, target=1), EnvParam(0, p)),
        ),
        (
            Clause(("var", 0), BAux("subst", EnvLookup(0), (PassParam(1),))),
            Clause(
                "app",
                BCon(
                    "app", (),
                    (
                        RC(0, (PassParam(0), PassParam(1))),
                        RC(1, (PassParam(0), PassParam(1))),
                    ),
                ),
            ),
            Clause("lam", BCon("lam", (), (RC(0, (LiftEnv(0), LiftEnv(1))),))),
        ),
        left=Interpretation(
            BAux("subst", BAux("subst", MainRef(), (PassParam(0),)), (PassParam(1),))
        ),
        right=Interpretation(
            BAux("subst", MainRef(), (MapEnvWithAux(0, "subst", (PassParam(1),)),))
        ),
        context=(2,),
    )
    unit = EquationSystem(
        "subst-unit",
        AuxSchema("subst-unit", 1, (MainOption(p, (NatExpr(None, 0),), p),), ()),
        (
            Clause(("var", 0), TheVar()),
            Clause("app", BCon("app", (), (RC(0, ()), RC(1, ())))),
            Clause("lam", BCon("lam", (), (RC(0, ()),))),
        ),
        left=Interpretation(BAux("subst", MainRef(), (IdEnv(0),))),
        right=Interpretation(MainRef()),
        context=(2,),
    )

    def subst_oracle(bundle, nat_args, main, params, ctx):
        return oracles.presheaf_subst(main, params[0].entries, ctx[0])

    return ExampleBundle(
        "lambda-presheaf", sig, stack,
        systems=(assoc, unit),
        oracles=(("subst", subst_oracle),),
    )


# ---------------------------------------------------------------------------
# sharing


def _build_sharing() -> ExampleBundle:
    p = SortExpr("p")
    cm = SortExpr("c", NatExpr(0))
    sig = Signature(
        kinds=(VarKind(0, "x"),),
        sorts=(("p", False), ("c", True)),
        var_sort={0: p},
        ops=(
            OpSchema("app", p, (SubSpec(p, (NatExpr(None, 0),)), SubSpec(p, (NatExpr(None, 0),)))),
            OpSchema("lam", p, (SubSpec(p, (NatExpr(None, 1),)),)),
            OpSchema("esub", p, (SubSpec(p, (NatExpr(None, 1),)), SubSpec(p, (NatExpr(None, 0),)))),
            OpSchema("hole", SortExpr("c", NatExpr(None, 0))),
            OpSchema(
                "ext",
                SortExpr("c", NatExpr(0, 1)),
                (SubSpec(cm, (NatExpr(None, 1),)), SubSpec(p, (NatExpr(None, 0),))),
                nat_params=1,
            ),
        ),
    )
    plug = StructuralLaw(
        AuxSchema(
            "plug", 0,
            (MainOption(cm, (NatExpr(None, 0),), p),),
            (TermParam(p, (NatExpr(0),)),),
            nat_params=1,
        ),
        (
            Clause("hole", ParamRef(0)),
            Clause(
                "ext",
                BCon(
                    "esub", (),
                    (RC(0, (PassParam(0),), (BNat("con", 0),)), SubTerm(1)),
                ),
            ),
        ),
    )
    stack = LawStack(sig).push_layer([plug])

    def plug_oracle(bundle, nat_args, main, params, ctx):
        return oracles.sharing_plug(main, params[0].term)

    return ExampleBundle("sharing", sig, stack, oracles=(("plug", plug_oracle),))


# ---------------------------------------------------------------------------
# lammu


def _build_lammu() -> ExampleBundle:
    p = SortExpr("p")
    c = SortExpr("c")
    sig = Signature(
        kinds=(VarKind(0, "x"), VarKind(1, "a")),
        sorts=(("p", False), ("c", False)),
        var_sort={0: p, 1: c},
        ops=(
            OpSchema("app", p, (SubSpec(p, (NatExpr(None, 0), NatExpr(None, 0))),
                                SubSpec(p, (NatExpr(None, 0), NatExpr(None, 0))))),
            OpSchema("lam", p, (SubSpec(p, (NatExpr(None, 1), NatExpr(None, 0))),)),
            OpSchema("mu", p, (SubSpec(c, (NatExpr(None, 0), NatExpr(None, 1))),)),
            OpSchema("named", c, (VarRefSpec(1), SubSpec(p, (NatExpr(None, 0), NatExpr(None, 0))))),
        ),
    )
    both = (NatExpr(None, 0), NatExpr(None, 0))
    nsubst = StructuralLaw(
        AuxSchema(
            "nsubst", 0,
            (MainOption(p, both, p), MainOption(c, both, c)),
            (VarRefParam(1), TermParam(p)),
        ),
        (
            Clause(("var", 0), TheVar()),
            Clause(("var", 1), TheVar()),
            Clause(
                "app",
                BCon(
                    "app", (),
                    (
                        RC(0, (PassParam(0), PassParam(1))),
                        RC(1, (PassParam(0), PassParam(1))),
                    ),
                ),
            ),
            Clause("lam", BCon("lam", (), (RC(0, (PassParam(0), Weaken(1, 0))),))),
            Clause("mu", BCon("mu", (), (RC(0, (PassParam(0), Weaken(1, 1))),))),
            Clause(
                "named",
                BCon(
                    "named", (),
                    (
                        ArgVar(0),
                        BCon(
                            "app", (),
                            (RC(1, (PassParam(0), PassParam(1))), ParamRef(1)),
                        ),
                    ),
                ),
                guard=Guard(("arg", 0), 0, True),
            ),
            Clause(
                "named",
                BCon("named", (), (ArgVar(0), RC(1, (PassParam(0), PassParam(1))))),
                guard=Guard(("arg", 0), 0, False),
            ),
        ),
    )
    stack = LawStack(sig).push_layer([nsubst])

    def nsubst_oracle(bundle, nat_args, main, params, ctx):
        return oracles.lammu_nsubst(main, params[0].index, params[1].term)

    return ExampleBundle("lammu", sig, stack, oracles=(("nsubst", nsubst_oracle),))


# ---------------------------------------------------------------------------
# difflambda


def _build_difflambda() -> ExampleBundle:
    s = SortExpr("s")
    m = SortExpr("m")
    one = (NatExpr(None, 1),)
    none_ = (NatExpr(None, 0),)
    sig = Signature(
        kinds=(VarKind(0, "x"),),
        sorts=(("s", False), ("m", False)),
        var_sort={0: s},
        ops=(
            OpSchema("appsm", s, (SubSpec(s, none_), SubSpec(m, none_))),
            OpSchema("abs", s, (SubSpec(s, one),)),
            OpSchema("dapp", s, (SubSpec(s, none_), SubSpec(s, none_))),
            OpSchema("zero", m),
            OpSchema("plus", m, (SubSpec(s, none_), SubSpec(m, none_))),
        ),
    )
    delta0 = (NatExpr(None, 0),)
    pp = (PassParam(0),)

    law_sum = StructuralLaw(
        AuxSchema("sum", 0, (MainOption(m, delta0, m),), (TermParam(m),)),
        (
            Clause("zero", ParamRef(0)),
            Clause("plus", BCon("plus", (), (SubTerm(0), RC(1, pp)))),
        ),
    )
    law_appm = StructuralLaw(
        AuxSchema("appm", 0, (MainOption(m, delta0, m),), (TermParam(m),)),
        (
            Clause("zero", BCon("zero")),
            Clause(
                "plus",
                BCon("plus", (), (BCon("appsm", (), (SubTerm(0), ParamRef(0))), RC(1, pp))),
            ),
        ),
    )
    law_absm = StructuralLaw(
        AuxSchema("absm", 0, (MainOption(m, (NatExpr(None, 1),), m),), ()),
        (
            Clause("zero", BCon("zero")),
            Clause("plus", BCon("plus", (), (BCon("abs", (), (SubTerm(0),)), RC(1, ())))),
        ),
    )
    # The inductive argument is the sum of directions; the simple term it is
    # differentially applied to rides along as a parameter.
    law_lapp0 = StructuralLaw(
        AuxSchema("lapp0", 0, (MainOption(m, delta0, m),), (TermParam(s),)),
        (
            Clause("zero", BCon("zero")),
            Clause(
                "plus",
                BCon("plus", (), (BCon("dapp", (), (ParamRef(0), SubTerm(0))), RC(1, pp))),
            ),
        ),
    )
    law_lapp = StructuralLaw(
        AuxSchema("lapp", 1, (MainOption(m, delta0, m),), (TermParam(m),)),
        (
            Clause("zero", BCon("zero")),
            Clause(
                "plus",
                BAux("sum", BAux("lapp0", ParamRef(0), (SubTerm(0),)), (RC(1, pp),)),
            ),
        ),
    )
    law_subst = StructuralLaw(
        AuxSchema(
            "subst", 2,
            (MainOption(s, (EnvLen(0),), m), MainOption(m, (EnvLen(0),), m)),
            (EnvParam(0, m),),
        ),
        (
            Clause(("var", 0), EnvLookup(0)),
            Clause("appsm", BAux("appm", RC(0, pp), (RC(1, pp),))),
            Clause(
                "abs",
                BAux(
                    "absm",
                    RC(0, (LiftEnv(0, fresh=BCon("plus", (), (FreshVar(), BCon("zero")))),)),
                ),
            ),
            Clause("dapp", BAux("lapp", RC(0, pp), (RC(1, pp),))),
            Clause("zero", BCon("zero")),
            Clause("plus", BAux("sum", RC(0, pp), (RC(1, pp),))),
        ),
    )
    ppx = (PassParam(0), PassParam(1))
    law_pdiff = StructuralLaw(
        AuxSchema(
            "pdiff", 3,
            (MainOption(s, delta0, m), MainOption(m, delta0, m)),
            (VarRefParam(0), TermParam(m)),
        ),
        (
            Clause(("var", 0), ParamRef(1), guard=Guard(("var",), 0, True)),
            Clause(("var", 0), BCon("zero"), guard=Guard(("var",), 0, False)),
            Clause(
                "appsm",
                BAux(
                    "sum",
                    BAux("appm", RC(0, ppx), (SubTerm(1),)),
                    (
                        BAux(
                            "appm",
                            BAux("lapp0", RC(1, ppx), (SubTerm(0),)),
                            (SubTerm(1),),
                        ),
                    ),
                ),
            ),
            Clause("abs", BAux("absm", RC(0, (PassParam(0), Weaken(1, 0))))),
            Clause(
                "dapp",
                BAux(
                    "sum",
                    BAux(
                        "lapp",
                        RC(0, ppx),
                        (BCon("plus", (), (SubTerm(1), BCon("zero"))),),
                    ),
                    (BAux("lapp0", RC(1, ppx), (SubTerm(0),)),),
                ),
            ),
            Clause("zero", BCon("zero")),
            Clause("plus", BAux("sum", RC(0, ppx), (RC(1, ppx),))),
        ),
    )
    stack = (
        LawStack(sig)
        .push_layer([law_sum, law_appm, law_absm, law_lapp0])
        .push_layer([law_lapp])
        .push_layer([law_subst])
        .push_layer([law_pdiff])
    )

    def sum_oracle(bundle, nat_args, main, params, ctx):
        return oracles.dl_sum(main, params[0].term)

    def appm_oracle(bundle, nat_args, main, params, ctx):
        return oracles.dl_appm(main, params[0].term)

    def absm_oracle(bundle, nat_args, main, params, ctx):
        return oracles.dl_absm(main)

    def lapp0_oracle(bundle, nat_args, main, params, ctx):
        return oracles.dl_lapp0(main, params[0].term)

    def lapp_oracle(bundle, nat_args, main, params, ctx):
        return oracles.dl_lapp(main, params[0].term)

    def subst_oracle(bundle, nat_args, main, params, ctx):
        env = params[0].entries
        if _dl_is_simple(bundle.sig, main):
            return oracles.dl_subst_s(main, env, ctx[0])
        return oracles.dl_subst_m(main, env, ctx[0])

    def pdiff_oracle(bundle, nat_args, main, params, ctx):
        x, direction = params[0].index, params[1].term
        if _dl_is_simple(bundle.sig, main):
            return oracles.dl_pdiff_s(main, x, direction)
        return oracles.dl_pdiff_m(main, x, direction)

    return ExampleBundle(
        "difflambda", sig, stack,
        oracles=(
            ("sum", sum_oracle),
            ("appm", appm_oracle),
            ("absm", absm_oracle),
            ("lapp0", lapp0_oracle),
            ("lapp", lapp_oracle),
            ("subst", subst_oracle),
            ("pdiff", pdiff_oracle),
        ),
    )


def _dl_is_simple(sig, t: Term) -> bool:
    if isinstance(t, Var):
        return True
    return sig.op(t.op).result_sort.head == "s"


# ---------------------------------------------------------------------------
# lambda-debruijn


def _build_debruijn() -> ExampleBundle:
    p = SortExpr("p")
    sig = Signature(
        kinds=(VarKind(0, "x"),),
        sorts=(("p", False),),
        var_sort={0: p},
        ops=(
            OpSchema("app", p, (SubSpec(p, (NatExpr(None, 0),)), SubSpec(p, (NatExpr(None, 0),)))),
            OpSchema("lam", p, (SubSpec(p, (NatExpr(None, 1),)),)),
        ),
        ambient_mode="unscoped",
    )
    ren = StructuralLaw(
        AuxSchema("ren", 0, (MainOption(p, (NatExpr(None, 0),), p),), (ShiftRenParam(),)),
        (
            Clause(("var", 0), RenVar(0)),
            Clause("app", BCon("app", (), (RC(0, (PassParam(0),)), RC(1, (PassParam(0),))))),
            Clause("lam", BCon("lam", (), (RC(0, (LiftEnv(0),)),))),
        ),
    )
    subst = StructuralLaw(
        AuxSchema("subst", 1, (MainOption(p, (NatExpr(None, 0),), p),), (ShiftEnvParam(p),)),
        (
            Clause(("var", 0), EnvLookup(0)),
            Clause("app", BCon("app", (), (RC(0, (PassParam(0),)), RC(1, (PassParam(0),))))),
            Clause("lam", BCon("lam", (), (RC(0, (LiftEnv(0, via="ren"),)),))),
        ),
    )
    stack = LawStack(sig).push_layer([ren]).push_layer([subst])

    assoc = EquationSystem(
        "subst-assoc",
        AuxSchema(
            "subst-assoc", 2,
            (MainOption(p, (NatExpr(None, 0),), p),),
            (ShiftEnvParam(p), ShiftEnvParam(p)),
        ),
        (
            Clause(("var", 0), BAux("subst", EnvLookup(0), (PassParam(1),))),
            Clause(
                "app",
                BCon(
                    "app", (),
                    (
                        RC(0, (PassParam(0), PassParam(1))),
                        RC(1, (PassParam(0), PassParam(1))),
                    ),
                ),
            ),
            Clause(
                "lam",
                BCon("lam", (), (RC(0, (LiftEnv(0, via="ren"), LiftEnv(1, via="ren"))),)),
            ),
        ),
        left=Interpretation(
            BAux("subst", BAux("subst", MainRef(), (PassParam(0),)), (PassParam(1),))
        ),
        right=Interpretation(
            BAux("subst", MainRef(), (MapEnvWithAux(0, "subst", (PassParam(1),)),))
        ),
    )
    unit = EquationSystem(
        "subst-unit",
        AuxSchema("subst-unit", 2, (MainOption(p, (NatExpr(None, 0),), p),), ()),
        (
            Clause(("var", 0), TheVar()),
            Clause("app", BCon("app", (), (RC(0, ()), RC(1, ())))),
            Clause("lam", BCon("lam", (), (RC(0, ()),))),
        ),
        left=Interpretation(BAux("subst", MainRef(), (IdEnv(0),))),
        right=Interpretation(MainRef()),
    )

    def ren_oracle(bundle, nat_args, main, params, ctx):
        arg = params[0]
        return oracles.db_rename_prefix_shift(main, arg.prefix, arg.shift)

    def subst_oracle(bundle, nat_args, main, params, ctx):
        arg = params[0]
        return oracles.db_subst_prefix_shift(main, arg.prefix, arg.shift)

    return ExampleBundle(
        "lambda-debruijn", sig, stack,
        systems=(assoc, unit),
        oracles=(("ren", ren_oracle), ("subst", subst_oracle)),
    )


_BUILDERS = {
    "peano": _build_peano,
    "eval-ctx": _build_evalctx,
    "lambda-presheaf": _build_presheaf,
    "sharing": _build_sharing,
    "lammu": _build_lammu,
    "difflambda": _build_difflambda,
    "lambda-debruijn": _build_debruijn,
}


# ---------------------------------------------------------------------------
# Oracle evaluation and cross-checking


def oracle_eval(bundle: ExampleBundle, law_name: str, nat_args, main: Term, params,
                context: tuple = None) -> Term:
    fn = bundle.oracle_for(law_name)
    if fn is None:
        raise ValueError(f"bundle {bundle.name} has no oracle for {law_name}")
    ctx = context if context is not None else bundle.sig.zero_context()
    return fn(bundle, tuple(nat_args), main, tuple(params), ctx)


def crosscheck(bundle: ExampleBundle, size_bound: int, shift_bound: int = 2,
               context: tuple = None) -> Report:
    """Derived operators against their oracles on every enumerated
    scope-correct input tuple up to the size bound."""
    start = time.monotonic()
    report = Report("oracle")
    stack = bundle.stack
    ctx = context
    if ctx is None:
        ctx = bundle.check_context
    if ctx is None:
        ctx = (2,) * stack.sig.kind_count
    for law_name, _ in bundle.oracles:
        law = stack.law(law_name)
        spec = EnumSpec(stack.sig, law.schema.mains[0].sort, ctx, size_bound,
                        stack=stack, shift_bound=shift_bound)
        for nat_args, main, params in aux_instances(spec, ctx, law, size_bound):
            report.instances += 1
            got = normalize(stack, Aux(law_name, nat_args, main, params), ctx)
            want = oracle_eval(bundle, law_name, nat_args, main, params, ctx)
            if got != want:
                report.record(
                    print_term(Aux(law_name, nat_args, main, params)),
                    print_term(got),
                    print_term(want),
                )
    report.elapsed_ms = int((time.monotonic() - start) * 1000)
    return report
