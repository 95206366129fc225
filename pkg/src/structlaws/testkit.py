"""Deterministic size-ordered enumeration of terms, environments, and
operator instances, plus seeded random sampling and report aggregation."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .kernel import (
    Aux,
    Con,
    EnvArg,
    ShiftEnvArg,
    ShiftRenArg,
    SortExpr,
    SubSpec,
    Term,
    TermArg,
    Var,
    VarRefArg,
    VarRefSpec,
    extend_context,
    term_key,
    term_size,
)
from .laws import (
    EnvLen,
    EnvParam,
    LawStack,
    ShiftEnvParam,
    ShiftRenParam,
    TermParam,
    VarRefParam,
)


@dataclass(frozen=True)
class EnumSpec:
    sig: object
    sort: SortExpr
    context: tuple
    size: int
    stack: Optional[LawStack] = None
    allow_aux: bool = False
    shift_bound: int = 2
    env_len_bound: Optional[int] = None


@dataclass
class Report:
    name: str
    instances: int = 0
    counterexamples: list = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def record(self, inputs: str, lhs: str, rhs: str):
        self.counterexamples.append((inputs, lhs, rhs))


class EmptyClass(Exception):
    pass


def compositions(total: int, parts: int, minimum: int = 1):
    """All tuples of ``parts`` naturals >= minimum summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def enum_terms(spec: EnumSpec) -> list:
    """All scope-correct terms of size <= bound, in canonical order."""
    memo = {}
    out = []
    for s in range(1, spec.size + 1):
        out.extend(
            sorted(
                _exact(spec, spec.context, spec.sort.resolve(), s, memo),
                key=term_key,
            )
        )
    return out


def _exact(spec: EnumSpec, ctx, want, s, memo):
    key = (ctx, want, s)
    if key in memo:
        return memo[key]
    sig = spec.sig
    out = []
    if s == 1:
        for k in range(sig.kind_count):
            if sig.var_sort[k].resolve() == want and ctx[k] != float("inf"):
                out.extend(Var(k, i) for i in range(ctx[k]))
    for op in sig.ops:
        if op.result_sort.head != want[0]:
            continue
        nat_args = _solve_nats(op, want)
        if nat_args is None:
            continue
        out.extend(_exact_con(spec, ctx, op, nat_args, s, memo))
    if spec.allow_aux and spec.stack is not None:
        for law in spec.stack.laws():
            out.extend(_exact_aux(spec, ctx, law, want, s, memo))
    memo[key] = out
    return out


def _solve_nats(op, want):
    """Choose nat arguments making the result sort equal ``want``."""
    expr = op.result_sort.nat
    target = want[1]
    if op.nat_params == 0:
        return () if op.result_sort.resolve(()) == want else None
    # one parameter (sort families carry at most one natural argument)
    if expr is not None and expr.param is not None:
        if target is None:
            return None
        v = target - expr.offset
        return (v,) if v >= 0 else None
    return None


def _exact_con(spec, ctx, op, nat_args, s, memo):
    sig = spec.sig
    sub_idx = [i for i, a in enumerate(op.args) if isinstance(a, SubSpec)]
    ref_idx = [i for i, a in enumerate(op.args) if isinstance(a, VarRefSpec)]
    budget = s - 1 - len(ref_idx)
    out = []
    for sizes in compositions(budget, len(sub_idx)):
        lists = []
        ok = True
        for i, a in enumerate(op.args):
            if isinstance(a, SubSpec):
                sub_ctx = extend_context(sig, ctx, a.binder_counts(nat_args))
                cands = _exact(spec, sub_ctx, a.sort.resolve(nat_args), sizes[sub_idx.index(i)], memo)
            else:
                if ctx[a.kind] == float("inf"):
                    ok = False
                    break
                cands = [Var(a.kind, j) for j in range(ctx[a.kind])]
            if not cands:
                ok = False
                break
            lists.append(cands)
        if not ok:
            continue
        for combo in itertools.product(*lists):
            out.append(Con(op.name, nat_args, combo))
    return out


def _exact_aux(spec, ctx, law, want, s, memo):
    out = []
    for nat_args, main, params in aux_instances(spec, ctx, law, s, exact=s, memo=memo):
        option = spec.stack.main_option(law.schema, main)
        if option.result_sort.resolve(nat_args) == want:
            out.append(Aux(law.schema.name, nat_args, main, params))
    return out


def aux_instances(spec: EnumSpec, ctx, law, budget: int, exact: Optional[int] = None, memo=None):
    """Yield (nat_args, main, params) with total node size <= budget
    (or exactly ``exact`` when given)."""
    schema = law.schema
    if memo is None:
        memo = {}
    shift_bound = spec.shift_bound
    env_len_bound = spec.env_len_bound if spec.env_len_bound is not None else budget

    sizes = [exact] if exact is not None else list(range(2, budget + 1))
    nat_choices = list(itertools.product(range(budget), repeat=schema.nat_params))
    for total in sizes:
        for nat_args in nat_choices:
            for option in schema.mains:
                yield from _aux_option(
                    spec, ctx, law, option, nat_args, total, memo, shift_bound, env_len_bound
                )


def _aux_option(spec, ctx, law, option, nat_args, total, memo, shift_bound, env_len_bound):
    schema = law.schema
    stack = spec.stack
    # environment lengths
    env_free = [
        i
        for i, p in enumerate(schema.params)
        if isinstance(p, EnvParam)
    ]
    length_ranges = []
    for i in env_free:
        k = schema.params[i].kind
        c = option.ctx[k]
        if isinstance(c, EnvLen):
            length_ranges.append(range(0, min(env_len_bound, total - 1) + 1))
        else:
            # length fixed by the main context coordinate
            fixed = ctx[k] + c.eval(nat_args)
            length_ranges.append(range(fixed, fixed + 1))
    for lengths in itertools.product(*length_ranges):
        env_len = dict(zip(env_free, lengths))
        mctx = []
        for k, c in enumerate(option.ctx):
            if isinstance(c, EnvLen):
                mctx.append(env_len[c.param])
            else:
                mctx.append(ctx[k] + c.eval(nat_args))
        mctx = tuple(mctx)
        yield from _aux_fill(
            spec, ctx, law, option, nat_args, mctx, env_len, total, memo, shift_bound
        )


def _aux_fill(spec, ctx, law, option, nat_args, mctx, env_len, total, memo, shift_bound):
    schema = law.schema
    sig = spec.sig
    sub = EnumSpec(
        sig,
        option.sort,
        mctx,
        0,
        stack=spec.stack,
        allow_aux=spec.allow_aux,
        shift_bound=spec.shift_bound,
        env_len_bound=spec.env_len_bound,
    )
    # budget over: main (>=1), term params (>=1), env entries (>= length), shift prefixes (>=0)
    slots = [("main", None, 1)]
    for i, p in enumerate(schema.params):
        match p:
            case TermParam():
                slots.append(("term", i, 1))
            case EnvParam():
                slots.append(("env", i, env_len.get(i, 0)))
            case ShiftEnvParam():
                slots.append(("senv", i, 0))
            case ShiftRenParam() | VarRefParam():
                slots.append(("fixed", i, 1 if isinstance(p, VarRefParam) else 0))
    fixed_cost = 1 + sum(m for kind, _, m in slots if kind == "fixed")
    var_slots = [(kind, i, m) for kind, i, m in slots if kind != "fixed"]
    remaining = total - fixed_cost
    mins = [max(m, 1) if kind in ("main", "term") else m for kind, _, m in var_slots]
    if remaining < sum(mins):
        return
    for alloc in compositions(remaining, len(var_slots), 0):
        if any(a < m for a, m in zip(alloc, mins)):
            continue
        lists = []
        ok = True
        for (kind, i, _), a in zip(var_slots, alloc):
            if kind == "main":
                cands = _exact(sub, mctx, option.sort.resolve(nat_args), a, memo)
            elif kind == "term":
                p = schema.params[i]
                counts = tuple(b.eval(nat_args) for b in p.binders)
                pctx = extend_context(sig, ctx, counts)
                cands = [
                    TermArg(t)
                    for t in _exact(sub, pctx, p.sort.resolve(nat_args), a, memo)
                ]
            elif kind == "env":
                p = schema.params[i]
                ectx = _env_ctx(spec.stack, schema, i, env_len, ctx)
                cands = [
                    EnvArg(p.kind, entries)
                    for entries in _env_tuples(sub, ectx, p.entry_sort.resolve(nat_args), env_len.get(i, 0), a, memo)
                ]
            else:  # senv
                p = schema.params[i]
                cands = []
                for plen in range(0, a + 1):
                    for entry_sizes in compositions(a, plen):
                        entry_lists = [
                            _exact(sub, ctx, p.entry_sort.resolve(nat_args), es, memo)
                            for es in entry_sizes
                        ]
                        for combo in itertools.product(*entry_lists):
                            for shift in range(shift_bound + 1):
                                cands.append(ShiftEnvArg(combo, shift))
            if not cands:
                ok = False
                break
            lists.append(cands)
        if not ok:
            continue
        fixed_lists = []
        for kind, i, _ in slots:
            if kind != "fixed":
                continue
            p = schema.params[i]
            if isinstance(p, VarRefParam):
                if ctx[p.kind] == float("inf"):
                    fixed_lists.append((i, []))
                else:
                    fixed_lists.append((i, [VarRefArg(p.kind, j) for j in range(ctx[p.kind])]))
            else:
                limit = ctx[0] if ctx[0] != float("inf") else shift_bound + 1
                srens = []
                for plen in range(0, min(3, limit) + 1):
                    for prefix in itertools.product(range(limit), repeat=plen):
                        for shift in range(shift_bound + 1):
                            srens.append(ShiftRenArg(prefix, shift))
                fixed_lists.append((i, srens))
        if any(not c for _, c in fixed_lists):
            continue
        for combo in itertools.product(*lists):
            main = combo[0]
            var_args = dict(zip([i for k, i, _ in var_slots if k != "main"], combo[1:]))
            for fixed_combo in itertools.product(*[c for _, c in fixed_lists]):
                fixed_args = dict(zip([i for i, _ in fixed_lists], fixed_combo))
                params = tuple(
                    var_args.get(i, fixed_args.get(i)) for i in range(len(schema.params))
                )
                yield nat_args, main, params


def _env_ctx(stack, schema, i, env_len, ctx):
    p = schema.params[i]
    if p.target is None:
        return ctx
    out = list(ctx)
    out[p.kind] = env_len.get(p.target, 0)
    return tuple(out)


def _env_tuples(sub, ectx, entry_want, length, budget, memo):
    if length == 0:
        if budget == 0:
            yield ()
        return
    for sizes in compositions(budget, length):
        lists = [_exact(sub, ectx, entry_want, s, memo) for s in sizes]
        yield from itertools.product(*lists)


def enum_envs(spec: EnumSpec, kind: int, length: int, entry_size: int) -> list:
    """All scoped environments of the given length with entries of size
    <= entry_size, at the spec's context; deterministic order."""
    entries = enum_terms(
        EnumSpec(
            spec.sig,
            spec.sort,
            spec.context,
            entry_size,
            stack=spec.stack,
            allow_aux=spec.allow_aux,
        )
    )
    return [EnvArg(kind, combo) for combo in itertools.product(entries, repeat=length)]


def enum_shift_envs(spec: EnumSpec, prefix_bound: int, shift_bound: int, entry_size: int) -> list:
    """All shift-environments with prefix length <= prefix_bound, entries of
    size <= entry_size, and shift <= shift_bound."""
    entries = enum_terms(
        EnumSpec(spec.sig, spec.sort, spec.context, entry_size, stack=spec.stack)
    )
    out = []
    for plen in range(prefix_bound + 1):
        for combo in itertools.product(entries, repeat=plen):
            for shift in range(shift_bound + 1):
                out.append(ShiftEnvArg(combo, shift))
    return out


def enum_shift_rens(prefix_bound: int, index_bound: int, shift_bound: int) -> list:
    out = []
    for plen in range(prefix_bound + 1):
        for prefix in itertools.product(range(index_bound), repeat=plen):
            for shift in range(shift_bound + 1):
                out.append(ShiftRenArg(prefix, shift))
    return out


def rand_term(spec: EnumSpec, seed: int) -> Term:
    """A uniform sample from the enumerated size class; deterministic per seed."""
    terms = enum_terms(spec)
    if not terms:
        raise EmptyClass(f"no terms of size <= {spec.size}")
    return random.Random(seed).choice(terms)


def count_terms(sig, ctx, sort: SortExpr, size: int) -> int:
    """Independent recursive count of basic terms of size <= ``size``.

    Coded separately from :func:`enum_terms` as a cross-check on the
    enumerator (no shared recursion or memo structure).
    """

    def count_exact(ctx, want, s):
        if s < 1:
            return 0
        total = 0
        if s == 1:
            for k in range(sig.kind_count):
                if sig.var_sort[k].resolve() == want and ctx[k] != float("inf"):
                    total += ctx[k]
        for op in sig.ops:
            if op.result_sort.head != want[0]:
                continue
            nat_args = _solve_nats(op, want)
            if nat_args is None:
                continue
            refs = [a for a in op.args if isinstance(a, VarRefSpec)]
            subs = [a for a in op.args if isinstance(a, SubSpec)]
            budget = s - 1 - len(refs)
            ref_ways = 1
            for a in refs:
                ref_ways *= ctx[a.kind]
            if ref_ways == 0:
                continue
            if not subs:
                if budget == 0:
                    total += ref_ways
                continue
            for sizes in compositions(budget, len(subs)):
                ways = ref_ways
                for a, sz in zip(subs, sizes):
                    sub_ctx = extend_context(sig, ctx, a.binder_counts(nat_args))
                    ways *= count_exact(sub_ctx, a.sort.resolve(nat_args), sz)
                    if ways == 0:
                        break
                total += ways
        return total

    return sum(count_exact(ctx, sort.resolve(), s) for s in range(1, size + 1))
