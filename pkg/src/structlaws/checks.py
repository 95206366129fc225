"""Operational checks on law stacks: admissibility (closed normal forms
are operator-free), monad laws (idempotence and strategy independence of
the normalizer), and compatibility of user algebras with the clause sets."""

from __future__ import annotations

import time

from .kernel import (
    Aux,
    Con,
    EnvArg,
    NatExpr,
    ShiftEnvArg,
    SortExpr,
    Term,
    TermArg,
    Var,
    extend_context,
)
from .laws import (
    AugmentedAlgebra,
    LawStack,
    Stuck,
    _Binding,
    _eval_body,
    _guard_holds,
    _select_clause,
    fold,
    normalize,
    normalize_outermost,
)
from .sexpr import print_arg, print_term
from .testkit import EnumSpec, Report, aux_instances, enum_terms


def count_aux_nodes(t: Term) -> int:
    match t:
        case Var():
            return 0
        case Con(_, _, children):
            return sum(count_aux_nodes(c) for c in children)
        case Aux(_, _, main, params):
            n = 1 + count_aux_nodes(main)
            for p in params:
                match p:
                    case TermArg(term):
                        n += count_aux_nodes(term)
                    case EnvArg(_, entries):
                        n += sum(count_aux_nodes(e) for e in entries)
                    case ShiftEnvArg(prefix, _):
                        n += sum(count_aux_nodes(e) for e in prefix)
                    case _:
                        pass
            return n
    raise TypeError(f"not a term: {t!r}")


def _describe_instance(law_name, nat_args, main, params) -> str:
    return print_term(Aux(law_name, nat_args, main, params))


def check_admissible(stack: LawStack, size_bound: int, shift_bound: int = 2,
                     context=None) -> Report:
    """Every closed operator application normalizes to an operator-free term.

    A non-zero ``context`` may be supplied for calculi whose operators have
    no closed instances at all (for example when an operator requires an
    in-scope name); this only makes sense when every variable clause of the
    stack is defined, so normal forms are still operator-free.
    """
    start = time.monotonic()
    report = Report("admissible")
    ctx = context if context is not None else stack.sig.zero_context()
    for law in stack.laws():
        spec = EnumSpec(stack.sig, law.schema.mains[0].sort, ctx, size_bound,
                        stack=stack, shift_bound=shift_bound)
        for nat_args, main, params in aux_instances(spec, ctx, law, size_bound):
            report.instances += 1
            result = normalize(stack, Aux(law.schema.name, nat_args, main, params), ctx)
            if count_aux_nodes(result):
                report.record(
                    _describe_instance(law.schema.name, nat_args, main, params),
                    print_term(result),
                    "an operator-free term",
                )
    report.elapsed_ms = int((time.monotonic() - start) * 1000)
    return report


def _enum_sorts(sig, depth: int = 2):
    for name, parameterized in sig.sorts:
        if parameterized:
            for m in range(depth + 1):
                yield SortExpr(name, NatExpr(None, m))
        else:
            yield SortExpr(name)


def check_monad_laws(stack: LawStack, size_bound: int, shift_bound: int = 2) -> Report:
    """Idempotence and strategy independence of the normalizer, plus the
    unit laws, on enumerated terms with nested operator applications."""
    start = time.monotonic()
    report = Report("monad")
    sig = stack.sig
    ctx = sig.zero_context()
    for sort in _enum_sorts(sig):
        spec = EnumSpec(sig, sort, ctx, size_bound, stack=stack, allow_aux=True,
                        shift_bound=shift_bound)
        for t in enum_terms(spec):
            report.instances += 1
            n1 = normalize(stack, t, ctx)
            n2 = normalize(stack, n1, ctx)
            if n1 != n2:
                report.record(print_term(t), print_term(n1), print_term(n2))
                continue
            out = normalize_outermost(stack, t, ctx)
            if out != n1:
                report.record(print_term(t), print_term(n1), print_term(out))
                continue
            # unit law over the basic layer: normalizing the children first
            # must not change the result.
            if isinstance(t, Con):
                op = sig.op(t.op)
                pre_children = []
                for arg, child in zip(op.args, t.children):
                    if hasattr(arg, "binders"):
                        sub_ctx = extend_context(sig, ctx, arg.binder_counts(t.nat_args))
                        pre_children.append(normalize(stack, child, sub_ctx))
                    else:
                        pre_children.append(child)
                again = normalize(stack, Con(t.op, t.nat_args, tuple(pre_children)), ctx)
                if again != n1:
                    report.record(print_term(t), print_term(n1), print_term(again))

    # unit law over the auxiliary layer: an operator applied to a bare
    # variable reduces exactly by its variable clause.
    open_ctx = (2,) * sig.kind_count
    for law in stack.laws():
        spec = EnumSpec(sig, law.schema.mains[0].sort, open_ctx, min(size_bound, 4),
                        stack=stack, shift_bound=shift_bound)
        for nat_args, main, params in aux_instances(spec, open_ctx, law, min(size_bound, 4)):
            if not isinstance(main, Var):
                continue
            report.instances += 1
            node = Aux(law.schema.name, nat_args, main, params)
            got = normalize(stack, node, open_ctx)
            clause = _select_clause(law, main, params)
            if isinstance(clause.body, Stuck):
                want = normalize(stack, node, open_ctx)  # stays a spine
                ok = got == want and isinstance(got, Aux)
            else:
                binding = _Binding(stack, law, node, main)
                want = normalize(stack, _eval_body(clause.body, binding, open_ctx), open_ctx)
                ok = got == want
            if not ok:
                report.record(print_term(node), print_term(got), print_term(want))
    report.elapsed_ms = int((time.monotonic() - start) * 1000)
    return report


def check_algebra(stack: LawStack, alg: AugmentedAlgebra, size_bound: int) -> Report:
    """For each clause and closed instance of its pattern, the operator's
    evaluation of the matched constructor equals the evaluation of the
    clause body."""
    start = time.monotonic()
    report = Report("algebra")
    ctx = stack.sig.zero_context()
    for law in stack.laws():
        spec = EnumSpec(stack.sig, law.schema.mains[0].sort, ctx, size_bound, stack=stack)
        for nat_args, main, params in aux_instances(spec, ctx, law, size_bound):
            if not isinstance(main, Con):
                continue
            clause = _select_clause(law, main, params)
            if isinstance(clause.body, Stuck):
                continue
            report.instances += 1
            lhs = alg.aux[law.schema.name](
                nat_args,
                fold(stack, alg, main),
                tuple(_fold_param(stack, alg, p) for p in params),
            )
            node = Aux(law.schema.name, nat_args, main, params)
            binding = _Binding(stack, law, node, main)
            rhs = fold(stack, alg, _eval_body(clause.body, binding, ctx))
            if not alg.equal(lhs, rhs):
                report.record(_describe_instance(law.schema.name, nat_args, main, params),
                              repr(lhs), repr(rhs))
    report.elapsed_ms = int((time.monotonic() - start) * 1000)
    return report


def _fold_param(stack, alg, p):
    match p:
        case TermArg(term):
            return fold(stack, alg, term)
        case EnvArg(_, entries):
            return tuple(fold(stack, alg, e) for e in entries)
        case _:
            return p
