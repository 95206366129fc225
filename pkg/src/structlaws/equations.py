"""Equational systems over a law stack: a schema with its own clause set
and two interpretations (left and right).  An equation is *benign* when
both interpretations agree on the syntax; the coherence check verifies,
clause by clause on concrete instances, that an interpretation is
compatible with the clause set, which is the structural reason for
benignness."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .kernel import (
    Aux,
    Con,
    EnvArg,
    ShiftEnvArg,
    SubSpec,
    Term,
    TermArg,
    Var,
    extend_context,
)
from .laws import (
    AuxSchema,
    Body,
    LawStack,
    Stuck,
    StructuralLaw,
    _Binding,
    _eval_body,
    _select_clause,
    normalize,
    validate_law,
)
from .sexpr import print_term
from .testkit import EnumSpec, Report, aux_instances


@dataclass(frozen=True)
class Interpretation:
    """A closed template over the schema's main and parameters (no
    recursive calls)."""

    template: Body


@dataclass(frozen=True)
class EquationSystem:
    name: str
    schema: AuxSchema
    clauses: tuple
    left: Interpretation
    right: Interpretation
    # ambient context for the checks; None picks closed (scoped) or a small
    # open context (unscoped, where indices are unbounded anyway)
    context: Optional[tuple] = None

    def law(self) -> StructuralLaw:
        return StructuralLaw(self.schema, self.clauses)


def validate_system(stack: LawStack, eq: EquationSystem) -> list:
    pseudo = LawStack(stack.sig, stack.layers + ((eq.law(),),))
    return validate_law(pseudo, eq.law())


def interp_eval(stack: LawStack, eq: EquationSystem, interp: Interpretation,
                main: Term, params, ctx=None) -> Term:
    """Instantiate the template at concrete arguments and normalize."""
    if ctx is None:
        ctx = stack.sig.zero_context()
    node = Aux(eq.schema.name, (), main, tuple(params))
    binding = _Binding(stack, eq.law(), node, main)
    return normalize(stack, _eval_body(interp.template, binding, ctx), ctx)


def _default_ctx(stack, eq):
    if eq.context is not None:
        return eq.context
    if stack.sig.unscoped:
        return (2,)
    return stack.sig.zero_context()


def _instances(stack, eq, size_bound, shift_bound, ctx):
    spec = EnumSpec(stack.sig, eq.schema.mains[0].sort, ctx, size_bound,
                    stack=stack, shift_bound=shift_bound)
    pseudo = StructuralLaw(eq.schema, eq.clauses)
    yield from aux_instances(spec, ctx, pseudo, size_bound)


def _describe(eq, main, params) -> str:
    return print_term(Aux(eq.schema.name, (), main, params))


def check_coherence(stack: LawStack, eq: EquationSystem, side: str,
                    size_bound: int, shift_bound: int = 2) -> Report:
    """For each clause instance, interpreting the matched constructor
    directly agrees with interpreting the clause body (recursive-call
    positions interpreted recursively), after normalization."""
    start = time.monotonic()
    report = Report(f"coherence-{side}")
    interp = eq.left if side == "left" else eq.right
    ctx = _default_ctx(stack, eq)
    law = eq.law()
    pseudo = LawStack(stack.sig, stack.layers + ((law,),))
    for nat_args, main, params in _instances(stack, eq, size_bound, shift_bound, ctx):
        if isinstance(main, Aux):
            continue
        clause = _select_clause(law, main, params)
        if isinstance(clause.body, Stuck):
            continue
        report.instances += 1
        lhs = interp_eval(stack, eq, interp, main, params, ctx)
        node = Aux(eq.schema.name, nat_args, main, params)
        binding = _Binding(pseudo, law, node, main)
        body_term = _eval_body(clause.body, binding, ctx)
        rhs = normalize(stack, _expand(stack, pseudo, eq, interp, body_term, ctx), ctx)
        if lhs != rhs:
            report.record(_describe(eq, main, params), print_term(lhs), print_term(rhs))
    report.elapsed_ms = int((time.monotonic() - start) * 1000)
    return report


def _expand(stack, pseudo, eq, interp, t: Term, ctx) -> Term:
    """Replace formal applications of the equation schema by the
    interpretation, bottom-up, tracking the scoping context so templates
    that mention the ambient context instantiate correctly."""
    match t:
        case Var():
            return t
        case Con(op_name, nat_args, children):
            op = stack.sig.op(op_name)
            out = []
            for spec, child in zip(op.args, children):
                if isinstance(spec, SubSpec):
                    sub_ctx = extend_context(stack.sig, ctx, spec.binder_counts(nat_args))
                    out.append(_expand(stack, pseudo, eq, interp, child, sub_ctx))
                else:
                    out.append(child)
            return Con(op_name, nat_args, tuple(out))
        case Aux(law_name, nat_args, main, params):
            schema = pseudo.law(law_name).schema
            option = pseudo.main_option(schema, main)
            mctx = pseudo.main_context(schema, option, nat_args, params, ctx)
            main2 = _expand(stack, pseudo, eq, interp, main, mctx)
            params2 = tuple(
                _expand_arg(stack, pseudo, eq, interp, schema, i, params, ctx)
                for i in range(len(params))
            )
            if law_name == eq.schema.name:
                return interp_eval(stack, eq, interp, main2, params2, ctx)
            return Aux(law_name, nat_args, main2, params2)
    raise TypeError(f"not a term: {t!r}")


def _expand_arg(stack, pseudo, eq, interp, schema, i, params, ctx):
    p = params[i]
    match p:
        case TermArg(term):
            return TermArg(_expand(stack, pseudo, eq, interp, term, ctx))
        case EnvArg(kind, entries):
            ectx = pseudo.env_target_context(schema, i, params, ctx)
            return EnvArg(
                kind, tuple(_expand(stack, pseudo, eq, interp, e, ectx) for e in entries)
            )
        case ShiftEnvArg(prefix, shift):
            return ShiftEnvArg(
                tuple(_expand(stack, pseudo, eq, interp, e, ctx) for e in prefix), shift
            )
        case _:
            return p


def check_benign(stack: LawStack, eq: EquationSystem, size_bound: int,
                 shift_bound: int = 2, with_coherence: bool = True) -> Report:
    """Both interpretations agree on all enumerated argument tuples.

    The report name records whether coherence passed for both sides
    (``benign``, certified structurally) or only the direct comparison
    did (``benign-empirically``).
    """
    start = time.monotonic()
    name = "benign"
    if with_coherence:
        co_l = check_coherence(stack, eq, "left", size_bound, shift_bound)
        co_r = check_coherence(stack, eq, "right", size_bound, shift_bound)
        if not (co_l.passed and co_r.passed):
            name = "benign-empirically"
    report = Report(name)
    ctx = _default_ctx(stack, eq)
    for nat_args, main, params in _instances(stack, eq, size_bound, shift_bound, ctx):
        report.instances += 1
        lhs = interp_eval(stack, eq, eq.left, main, params, ctx)
        rhs = interp_eval(stack, eq, eq.right, main, params, ctx)
        if lhs != rhs:
            report.record(_describe(eq, main, params), print_term(lhs), print_term(rhs))
    report.elapsed_ms = int((time.monotonic() - start) * 1000)
    return report


@dataclass(frozen=True)
class SystemBundle:
    systems: tuple


def combine(systems) -> SystemBundle:
    return SystemBundle(tuple(systems))


def check_bundle(stack: LawStack, bundle: SystemBundle, size_bound: int,
                 shift_bound: int = 2) -> list:
    """Per-component benignness reports; the bundle passes iff each does."""
    return [check_benign(stack, eq, size_bound, shift_bound) for eq in bundle.systems]
