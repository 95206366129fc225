"""Structural laws: clause sets defining auxiliary operators, and the
normalizer that pushes formal operator applications through constructors.

A law has a layer index.  Layer-0 laws recurse only into themselves;
higher layers may also apply operators from strictly earlier layers.
Laws are grouped into a :class:`LawStack`, and :func:`normalize` rewrites
a term until basic constructors are on top and formal operator
applications remain only as spines over variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .kernel import (
    Aux,
    Con,
    Context,
    EnvArg,
    NatExpr,
    OMEGA,
    ScopedRen,
    ScopeError,
    ShiftEnvArg,
    ShiftRenArg,
    Signature,
    SortExpr,
    SubSpec,
    Term,
    TermArg,
    UnknownLaw,
    UnscopedRen,
    Var,
    VarRefArg,
    VarRefSpec,
    check_scope_resolved,
    extend_context,
    rename,
    term_size,
)

# ---------------------------------------------------------------------------
# Schemas


@dataclass(frozen=True)
class TermParam:
    """A plain term parameter, living at the ambient context plus ``binders``."""

    sort: SortExpr
    binders: tuple = ()  # per-kind NatExpr over the schema's nat parameters


@dataclass(frozen=True)
class EnvParam:
    """A scoped environment parameter: one entry per in-scope variable of
    ``kind`` in the main argument's context.

    Entries live at the ambient context, or, when ``target`` names another
    environment parameter, at the context whose ``kind`` coordinate is that
    environment's length (used for chained substitutions).
    """

    kind: int
    entry_sort: SortExpr
    target: Optional[int] = None


@dataclass(frozen=True)
class ShiftEnvParam:
    entry_sort: SortExpr


@dataclass(frozen=True)
class ShiftRenParam:
    pass


@dataclass(frozen=True)
class VarRefParam:
    kind: int


ParamSpec = Union[TermParam, EnvParam, ShiftEnvParam, ShiftRenParam, VarRefParam]


@dataclass(frozen=True)
class EnvLen:
    """Main-context coordinate given by an environment parameter's length."""

    param: int


@dataclass(frozen=True)
class MainOption:
    """One admissible shape for the main (decreasing) argument."""

    sort: SortExpr
    ctx: tuple  # per-kind NatExpr (delta over ambient) or EnvLen
    result_sort: SortExpr


@dataclass(frozen=True)
class AuxSchema:
    name: str
    layer: int
    mains: tuple
    params: tuple = ()
    nat_params: int = 0

    def result_heads(self) -> set:
        return {m.result_sort.head for m in self.mains}


# ---------------------------------------------------------------------------
# Clause bodies


@dataclass(frozen=True)
class BNat:
    """A natural argument in a body: literal, or a matched/schema nat plus
    an offset.  ``src`` is one of ``lit``, ``con``, ``aux``."""

    src: str = "lit"
    idx: int = 0
    offset: int = 0


@dataclass(frozen=True)
class BCon:
    op: str
    nat_args: tuple = ()
    children: tuple = ()


@dataclass(frozen=True)
class BAux:
    """Formal application of a strictly earlier layer's operator."""

    law: str
    main: "Body"
    params: tuple = ()
    nat_args: tuple = ()


@dataclass(frozen=True)
class RC:
    """Recursive call on an immediate child of the matched constructor."""

    child: int
    params: tuple = ()
    nat_args: tuple = ()


@dataclass(frozen=True)
class SubTerm:
    child: int


@dataclass(frozen=True)
class ParamRef:
    param: int


@dataclass(frozen=True)
class EnvLookup:
    """The environment parameter applied at the matched variable's index."""

    param: int


@dataclass(frozen=True)
class RenVar:
    """The renaming parameter applied to the matched variable's index."""

    param: int


@dataclass(frozen=True)
class TheVar:
    pass


@dataclass(frozen=True)
class ArgVar:
    """Copy of a variable-reference argument of the matched constructor."""

    arg: int


@dataclass(frozen=True)
class FreshVar:
    """Inside a LiftEnv fresh-entry template: the newly bound variable."""

    pass


@dataclass(frozen=True)
class MainRef:
    """Interpretation templates only: the schema's main argument."""

    pass


@dataclass(frozen=True)
class Stuck:
    """Variable clauses only: the operator does not act on variables."""

    pass


# Parameter transformers (values passed to recursive calls).


@dataclass(frozen=True)
class PassParam:
    param: int


@dataclass(frozen=True)
class LiftEnv:
    """Push an environment or renaming under one fresh binder of ``kind``.

    Scoped: weaken every entry and append the fresh variable (or the
    ``fresh`` template evaluated at it).  Unscoped: prepend index 0 and
    shift old entries, renaming term entries with the earlier-layer law
    named by ``via``.
    """

    param: int
    kind: int = 0
    via: Optional[str] = None
    fresh: Optional["Body"] = None


@dataclass(frozen=True)
class Weaken:
    """Weakening by one fresh binder of ``kind``.

    With top-of-range binding this is the identity on representations; it is
    kept explicit so clause sets read like their defining equations.
    """

    param: int
    kind: int = 0


@dataclass(frozen=True)
class ConsEnv:
    """Append entries at the top of an environment parameter."""

    param: int
    items: tuple = ()


@dataclass(frozen=True)
class ComposeRen:
    """Compose two shift-renaming parameters: ``second after first``."""

    first: int
    second: int


@dataclass(frozen=True)
class MapEnvWithAux:
    """Apply an earlier operator to every entry of an environment parameter."""

    param: int
    law: str
    inner: tuple = ()
    nat_args: tuple = ()


@dataclass(frozen=True)
class IdEnv:
    """The identity environment at the ambient context."""

    kind: int = 0


Body = Union[
    BCon, BAux, RC, SubTerm, ParamRef, EnvLookup, RenVar, TheVar, ArgVar,
    FreshVar, MainRef, Stuck,
]
PBody = Union[Body, PassParam, LiftEnv, Weaken, ConsEnv, ComposeRen, MapEnvWithAux, IdEnv]


@dataclass(frozen=True)
class Guard:
    """Compare a variable index against a variable-reference parameter.

    ``lhs`` is ``("var",)`` (the matched variable) or ``("arg", i)`` (a
    variable-reference argument of the matched constructor).
    """

    lhs: tuple
    param: int
    equal: bool


@dataclass(frozen=True)
class Clause:
    on: Union[str, tuple]  # op name, or ("var", kind)
    body: Body
    guard: Optional[Guard] = None


@dataclass(frozen=True)
class StructuralLaw:
    schema: AuxSchema
    clauses: tuple


class StuckError(Exception):
    pass


class AlgebraIncomplete(Exception):
    pass


# ---------------------------------------------------------------------------
# Law stacks


class LawStack:
    """A signature together with layered, mutually validated laws."""

    def __init__(self, sig: Signature, layers: tuple = ()):
        self.sig = sig
        self.layers = tuple(tuple(layer) for layer in layers)
        self._index = {}
        for depth, layer in enumerate(self.layers):
            for law in layer:
                self._index[law.schema.name] = (law, depth)

    def law(self, name: str) -> StructuralLaw:
        try:
            return self._index[name][0]
        except KeyError:
            raise UnknownLaw(name) from None

    def layer_of(self, name: str) -> int:
        try:
            return self._index[name][1]
        except KeyError:
            raise UnknownLaw(name) from None

    def laws(self):
        for layer in self.layers:
            yield from layer

    def push_layer(self, laws) -> "LawStack":
        new = LawStack(self.sig, self.layers + (tuple(laws),))
        diags = []
        for law in laws:
            diags.extend(validate_law(new, law))
        if diags:
            raise ValueError("; ".join(diags))
        return new

    # -- schema-driven context bookkeeping ---------------------------------

    def main_option(self, schema: AuxSchema, main: Term) -> MainOption:
        head = self._term_sort_heads(main)
        options = [m for m in schema.mains if m.sort.head in head]
        if len(options) != 1:
            raise ScopeError(
                f"cannot determine the main-argument shape of {schema.name} "
                f"for sort heads {sorted(head)}"
            )
        return options[0]

    def _term_sort_heads(self, t: Term) -> set:
        match t:
            case Var(kind, _):
                return {self.sig.var_sort[kind].head}
            case Con(op, _, _):
                return {self.sig.op(op).result_sort.head}
            case Aux(law, _, _, _):
                return self.law(law).schema.result_heads()
        raise TypeError(f"not a term: {t!r}")

    def main_context(self, schema: AuxSchema, option: MainOption, nat_args, params, ctx) -> Context:
        out = []
        for k, spec in enumerate(option.ctx):
            if isinstance(spec, EnvLen):
                out.append(len(params[spec.param].entries))
            else:
                out.append(ctx[k] + spec.eval(nat_args))
        return tuple(out)

    def env_target_context(self, schema: AuxSchema, idx: int, params, ctx) -> Context:
        spec = schema.params[idx]
        if spec.target is None:
            return ctx
        out = list(ctx)
        out[spec.kind] = len(params[spec.target].entries)
        return tuple(out)

    # -- scope checking for Aux nodes (hook used by kernel.check_scope) ----

    def check_aux_scope(self, ctx, want, t: Aux) -> bool:
        law = self.law(t.law)
        schema = law.schema
        if len(t.nat_args) != schema.nat_params or len(t.params) != len(schema.params):
            return False
        try:
            option = self.main_option(schema, t.main)
        except ScopeError:
            return False
        if option.result_sort.resolve(t.nat_args) != want:
            return False
        mctx = self.main_context(schema, option, t.nat_args, t.params, ctx)
        if not check_scope_resolved(
            self.sig, mctx, option.sort.resolve(t.nat_args), t.main, self
        ):
            return False
        for i, (spec, arg) in enumerate(zip(schema.params, t.params)):
            match spec:
                case TermParam(sort, binders):
                    counts = tuple(b.eval(t.nat_args) for b in binders)
                    pctx = extend_context(self.sig, ctx, counts)
                    if not (
                        isinstance(arg, TermArg)
                        and check_scope_resolved(self.sig, pctx, sort.resolve(t.nat_args), arg.term, self)
                    ):
                        return False
                case EnvParam(kind, entry_sort, _):
                    if not isinstance(arg, EnvArg) or arg.kind != kind:
                        return False
                    ectx = self.env_target_context(schema, i, t.params, ctx)
                    for e in arg.entries:
                        if not check_scope_resolved(self.sig, ectx, entry_sort.resolve(t.nat_args), e, self):
                            return False
                case ShiftEnvParam(entry_sort):
                    if not (self.sig.unscoped and isinstance(arg, ShiftEnvArg)):
                        return False
                    for e in arg.prefix:
                        if not check_scope_resolved(self.sig, ctx, entry_sort.resolve(t.nat_args), e, self):
                            return False
                case ShiftRenParam():
                    if not (self.sig.unscoped and isinstance(arg, ShiftRenArg)):
                        return False
                    if ctx[0] is not OMEGA and any(p >= ctx[0] for p in arg.prefix):
                        return False
                case VarRefParam(kind):
                    if not (isinstance(arg, VarRefArg) and arg.kind == kind):
                        return False
                    if not 0 <= arg.index < ctx[kind]:
                        return False
        return True

    # -- renaming through Aux nodes -----------------------------------------

    def rename_aux(self, t: Aux, maps) -> Aux:
        law = self.law(t.law)
        schema = law.schema
        option = self.main_option(schema, t.main)
        main_maps = []
        for k, spec in enumerate(option.ctx):
            if isinstance(spec, EnvLen):
                n = len(t.params[spec.param].entries)
                ident = UnscopedRen.identity() if self.sig.unscoped else ScopedRen.identity(n)
                main_maps.append(ident)
            else:
                main_maps.append(maps[k].lift(spec.eval(t.nat_args)))
        new_main = rename(self.sig, t.main, tuple(main_maps), self)
        new_params = []
        for i, (spec, arg) in enumerate(zip(schema.params, t.params)):
            match spec:
                case TermParam(_, binders):
                    counts = tuple(b.eval(t.nat_args) for b in binders)
                    counts += (0,) * (len(maps) - len(counts))
                    lifted = tuple(m.lift(b) for m, b in zip(maps, counts))
                    new_params.append(TermArg(rename(self.sig, arg.term, lifted, self)))
                case EnvParam(_, _, target):
                    if target is None:
                        new_params.append(
                            EnvArg(arg.kind, tuple(rename(self.sig, e, maps, self) for e in arg.entries))
                        )
                    else:
                        new_params.append(arg)
                case ShiftEnvParam(_):
                    new_params.append(_rename_shift_env(self.sig, self, arg, maps[0]))
                case ShiftRenParam():
                    new_params.append(_compose_sren(arg, maps[0]))
                case VarRefParam(kind):
                    new_params.append(VarRefArg(kind, maps[kind].apply(arg.index)))
        return Aux(t.law, t.nat_args, new_main, tuple(new_params))


def _rename_shift_env(sig, stack, arg: ShiftEnvArg, m: UnscopedRen) -> ShiftEnvArg:
    # A renamed shift-env stays finitely representable only when the tail
    # composition m(i - k + s) is again prefix-plus-shift, which it is since
    # m itself is.  Expose the composed tail explicitly.
    k, s = len(arg.prefix), arg.shift
    extra = max(0, len(m.prefix) - s)
    prefix = [rename(sig, e, (m,), stack) for e in arg.prefix]
    prefix += [Var(0, m.apply(s + j)) for j in range(extra)]
    shift = max(s - len(m.prefix), 0) + m.shift
    return ShiftEnvArg(tuple(prefix), shift)


def _compose_sren(first: ShiftRenArg, then) -> ShiftRenArg:
    """``then`` after ``first`` on de Bruijn indices, as a shift-renaming."""
    k, s = len(first.prefix), first.shift
    then_prefix = getattr(then, "prefix", ())
    extra = max(0, len(then_prefix) - s)
    prefix = tuple(then.apply(first.lookup(i)) for i in range(k + extra))
    shift = max(s - len(then_prefix), 0) + then.shift
    return ShiftRenArg(prefix, shift)


# ---------------------------------------------------------------------------
# Normalization


def default_context(sig: Signature) -> Context:
    return sig.zero_context()


def normalize(stack: LawStack, t: Term, ctx: Optional[Context] = None) -> Term:
    """Rewrite ``t`` to normal form: constructors above, operator spines
    only directly over variables.  Innermost applications are reduced first.
    """
    if ctx is None:
        ctx = default_context(stack.sig)
    match t:
        case Var():
            return t
        case Con(op_name, nat_args, children):
            op = stack.sig.op(op_name)
            new_children = []
            for arg, child in zip(op.args, children):
                if isinstance(arg, SubSpec):
                    sub_ctx = extend_context(stack.sig, ctx, arg.binder_counts(nat_args))
                    new_children.append(normalize(stack, child, sub_ctx))
                else:
                    new_children.append(child)
            return Con(op_name, nat_args, tuple(new_children))
        case Aux():
            law = stack.law(t.law)
            schema = law.schema
            params = tuple(_normalize_arg(stack, schema, i, t, ctx) for i in range(len(t.params)))
            option = stack.main_option(schema, t.main)
            mctx = stack.main_context(schema, option, t.nat_args, params, ctx)
            main = normalize(stack, t.main, mctx)
            return _step(stack, law, Aux(t.law, t.nat_args, main, params), ctx)
    raise TypeError(f"not a term: {t!r}")


def _normalize_arg(stack, schema, i, t: Aux, ctx):
    spec, arg = schema.params[i], t.params[i]
    match spec:
        case TermParam(_, binders):
            counts = tuple(b.eval(t.nat_args) for b in binders)
            pctx = extend_context(stack.sig, ctx, counts)
            return TermArg(normalize(stack, arg.term, pctx))
        case EnvParam():
            ectx = stack.env_target_context(schema, i, t.params, ctx)
            return EnvArg(arg.kind, tuple(normalize(stack, e, ectx) for e in arg.entries))
        case ShiftEnvParam():
            return ShiftEnvArg(tuple(normalize(stack, e, ctx) for e in arg.prefix), arg.shift)
        case _:
            return arg


def _select_clause(law: StructuralLaw, main: Term, params) -> Clause:
    if isinstance(main, Var):
        key = ("var", main.kind)
    else:
        key = main.op
    candidates = [c for c in law.clauses if c.on == key]
    if not candidates:
        raise StuckError(f"{law.schema.name}: no clause for {key}")
    for c in candidates:
        if c.guard is None or _guard_holds(c.guard, main, params):
            return c
    raise StuckError(f"{law.schema.name}: no clause guard matched for {key}")


def _guard_holds(g: Guard, main: Term, params) -> bool:
    if g.lhs == ("var",):
        lhs = main.index
    else:
        child = main.children[g.lhs[1]]
        if not isinstance(child, Var):
            raise StuckError("guard on a non-variable argument")
        lhs = child.index
    return (lhs == params[g.param].index) == g.equal


def _step(stack: LawStack, law: StructuralLaw, node: Aux, ctx) -> Term:
    main = node.main
    if isinstance(main, Aux):
        # A spine over a variable: already normal.
        return node
    clause = _select_clause(law, main, node.params)
    if isinstance(clause.body, Stuck):
        return node
    binding = _Binding(stack, law, node, main)
    result = _eval_body(clause.body, binding, ctx)
    return normalize(stack, result, ctx)


class _Binding:
    def __init__(self, stack, law, node, main):
        self.stack = stack
        self.sig = stack.sig
        self.law = law
        self.schema = law.schema
        self.node = node
        self.main = main
        if isinstance(main, Con):
            self.op = stack.sig.op(main.op)
            self.children = main.children
            self.con_nats = main.nat_args
        else:
            self.op = None
            self.children = ()
            self.con_nats = ()
        self.params = node.params
        self.var_index = main.index if isinstance(main, Var) else None

    def nat(self, b: BNat) -> int:
        if b.src == "lit":
            return b.offset
        if b.src == "con":
            return self.con_nats[b.idx] + b.offset
        if b.src == "aux":
            return self.node.nat_args[b.idx] + b.offset
        raise ValueError(f"unknown nat source {b.src!r}")

    def nats(self, bs) -> tuple:
        return tuple(self.nat(b) for b in bs)


def _eval_body(body: Body, b: _Binding, ctx, fresh=None) -> Term:
    sig = b.sig
    match body:
        case BCon(op_name, nat_args, children):
            op = sig.op(op_name)
            nats = b.nats(nat_args)
            out = []
            for spec, child in zip(op.args, children):
                if isinstance(spec, SubSpec):
                    sub_ctx = extend_context(sig, ctx, spec.binder_counts(nats))
                    out.append(_eval_body(child, b, sub_ctx, fresh))
                else:
                    out.append(_eval_body(child, b, ctx, fresh))
            return Con(op_name, nats, tuple(out))
        case BAux(law_name, main, params, nat_args):
            law2 = b.stack.law(law_name)
            nats = b.nats(nat_args)
            args = tuple(_eval_param(p, b, ctx, fresh) for p in params)
            option = _static_option(b, law2.schema, main)
            mctx = _static_main_context(b.stack, law2.schema, option, nats, args, ctx)
            main_t = _eval_body(main, b, mctx, fresh)
            return Aux(law_name, nats, main_t, args)
        case RC(child, params, nat_args):
            nats = b.nats(nat_args)
            args = tuple(_eval_param(p, b, ctx, fresh) for p in params)
            return Aux(b.schema.name, nats, b.children[child], args)
        case SubTerm(child):
            return b.children[child]
        case ParamRef(param):
            return b.params[param].term
        case EnvLookup(param):
            arg = b.params[param]
            if isinstance(arg, ShiftEnvArg):
                return arg.lookup(b.var_index)
            return arg.entries[b.var_index]
        case RenVar(param):
            return Var(b.main.kind, b.params[param].lookup(b.var_index))
        case TheVar():
            return b.main
        case ArgVar(arg):
            return b.children[arg]
        case FreshVar():
            if fresh is None:
                raise ValueError("FreshVar outside a LiftEnv template")
            return fresh
        case MainRef():
            return b.main
    raise TypeError(f"not a body node: {body!r}")


def _static_option(b: _Binding, schema: AuxSchema, main_body: Body) -> MainOption:
    head = _body_sort_head(b, main_body)
    options = [m for m in schema.mains if head is None or m.sort.head == head]
    if len(options) != 1:
        raise ScopeError(f"ambiguous main shape for {schema.name}")
    return options[0]


def _body_sort_head(b: _Binding, body: Body):
    sig = b.sig
    match body:
        case BCon(op_name, _, _):
            return sig.op(op_name).result_sort.head
        case BAux(law_name, main, _, _):
            law2 = b.stack.law(law_name)
            heads = law2.schema.result_heads()
            if len(heads) == 1:
                return next(iter(heads))
            return _static_option(b, law2.schema, main).result_sort.head
        case RC(child, _, _) | SubTerm(child):
            spec = b.op.args[child]
            if isinstance(spec, SubSpec):
                sort_head = spec.sort.head
            else:
                sort_head = sig.var_sort[spec.kind].head
            if isinstance(body, RC):
                option = [m for m in b.schema.mains if m.sort.head == sort_head]
                return option[0].result_sort.head if option else sort_head
            return sort_head
        case ParamRef(param):
            return b.schema.params[param].sort.head
        case EnvLookup(param):
            return b.schema.params[param].entry_sort.head
        case TheVar() | RenVar(_) | FreshVar():
            return None
        case ArgVar(arg):
            return sig.var_sort[b.op.args[arg].kind].head
        case MainRef():
            return None
    return None


def _static_main_context(stack, schema, option, nats, args, ctx):
    out = []
    for k, spec in enumerate(option.ctx):
        if isinstance(spec, EnvLen):
            out.append(len(args[spec.param].entries))
        else:
            out.append(ctx[k] + spec.eval(nats))
    return tuple(out)


def _eval_param(p: PBody, b: _Binding, ctx, fresh=None):
    sig = b.sig
    match p:
        case PassParam(param):
            return b.params[param]
        case LiftEnv(param, kind, via, fresh_tpl):
            arg = b.params[param]
            if isinstance(arg, EnvArg):
                # Entries of a chained environment live at the target
                # environment's length, not at the ambient context.
                spec = b.schema.params[param]
                target = getattr(spec, "target", None)
                if target is not None:
                    top = len(b.params[target].entries)
                else:
                    top = ctx[kind] - 1
                new_var = Var(kind, top)
                entry = new_var if fresh_tpl is None else _eval_body(fresh_tpl, b, ctx, new_var)
                return EnvArg(kind, arg.entries + (entry,))
            if isinstance(arg, ShiftEnvArg):
                if via is None:
                    raise ValueError("unscoped LiftEnv requires a renaming law (via)")
                up = ShiftRenArg((), 1)
                zero = Var(0, 0)
                entry = zero if fresh_tpl is None else _eval_body(fresh_tpl, b, ctx, zero)
                shifted = tuple(Aux(via, (), e, (up,)) for e in arg.prefix)
                return ShiftEnvArg((entry,) + shifted, arg.shift + 1)
            if isinstance(arg, ShiftRenArg):
                prefix = (0,) + tuple(arg.lookup(i) + 1 for i in range(len(arg.prefix)))
                return ShiftRenArg(prefix, arg.shift + 1)
            raise TypeError(f"LiftEnv on {arg!r}")
        case Weaken(param, kind):
            # New variables are bound at the top of the range, so the
            # inclusion into the extended context is the identity on indices.
            if sig.unscoped:
                raise ValueError("Weaken is only available in scoped mode")
            return b.params[param]
        case ConsEnv(param, items):
            arg = b.params[param]
            new = tuple(_eval_body(it, b, ctx, fresh) for it in items)
            return EnvArg(arg.kind, arg.entries + new)
        case ComposeRen(first, second):
            return _compose_sren(b.params[first], b.params[second])
        case MapEnvWithAux(param, law_name, inner, nat_args):
            arg = b.params[param]
            nats = b.nats(nat_args)
            inner_args = tuple(_eval_param(q, b, ctx, fresh) for q in inner)
            if isinstance(arg, EnvArg):
                return EnvArg(
                    arg.kind, tuple(Aux(law_name, nats, e, inner_args) for e in arg.entries)
                )
            if isinstance(arg, ShiftEnvArg):
                if not inner_args or not isinstance(inner_args[0], ShiftEnvArg):
                    raise TypeError("mapping over a shift-env requires a shift-env argument")
                theta = inner_args[0]
                k, s = len(arg.prefix), arg.shift
                extra = max(0, len(theta.prefix) - s)
                prefix = tuple(
                    Aux(law_name, nats, arg.lookup(i), inner_args) for i in range(k + extra)
                )
                shift = max(s - len(theta.prefix), 0) + theta.shift
                return ShiftEnvArg(prefix, shift)
            raise TypeError(f"MapEnvWithAux on {arg!r}")
        case IdEnv(kind):
            if sig.unscoped:
                return ShiftEnvArg((), 0)
            return EnvArg(kind, tuple(Var(kind, i) for i in range(ctx[kind])))
        case _:
            return TermArg(_eval_body(p, b, ctx, fresh))


def apply_aux(stack: LawStack, law_name: str, nat_args, main: Term, params, ctx=None) -> Term:
    """Apply a derived operator: build the formal node and normalize it."""
    stack.law(law_name)
    return normalize(stack, Aux(law_name, tuple(nat_args), main, tuple(params)), ctx)


# ---------------------------------------------------------------------------
# An alternative, outermost-first strategy (used to check order independence)


def normalize_outermost(stack: LawStack, t: Term, ctx=None) -> Term:
    if ctx is None:
        ctx = default_context(stack.sig)
    match t:
        case Var():
            return t
        case Con(op_name, nat_args, children):
            op = stack.sig.op(op_name)
            out = []
            for arg, child in zip(op.args, children):
                if isinstance(arg, SubSpec):
                    sub_ctx = extend_context(stack.sig, ctx, arg.binder_counts(nat_args))
                    out.append(normalize_outermost(stack, child, sub_ctx))
                else:
                    out.append(child)
            return Con(op_name, nat_args, tuple(out))
        case Aux():
            law = stack.law(t.law)
            schema = law.schema
            main = t.main
            if isinstance(main, Aux):
                option = stack.main_option(schema, main)
                mctx = stack.main_context(schema, option, t.nat_args, t.params, ctx)
                reduced = normalize_outermost(stack, main, mctx)
                if isinstance(reduced, Aux):
                    params = tuple(
                        _normalize_arg_out(stack, schema, i, t, ctx) for i in range(len(t.params))
                    )
                    return Aux(t.law, t.nat_args, reduced, params)
                return normalize_outermost(stack, Aux(t.law, t.nat_args, reduced, t.params), ctx)
            clause = _select_clause(law, main, t.params)
            if isinstance(clause.body, Stuck):
                params = tuple(
                    _normalize_arg_out(stack, schema, i, t, ctx) for i in range(len(t.params))
                )
                return Aux(t.law, t.nat_args, main, params)
            binding = _Binding(stack, law, t, main)
            return normalize_outermost(stack, _eval_body(clause.body, binding, ctx), ctx)
    raise TypeError(f"not a term: {t!r}")


def _normalize_arg_out(stack, schema, i, t: Aux, ctx):
    spec, arg = schema.params[i], t.params[i]
    match spec:
        case TermParam(_, binders):
            counts = tuple(b.eval(t.nat_args) for b in binders)
            pctx = extend_context(stack.sig, ctx, counts)
            return TermArg(normalize_outermost(stack, arg.term, pctx))
        case EnvParam():
            ectx = stack.env_target_context(schema, i, t.params, ctx)
            return EnvArg(arg.kind, tuple(normalize_outermost(stack, e, ectx) for e in arg.entries))
        case ShiftEnvParam():
            return ShiftEnvArg(tuple(normalize_outermost(stack, e, ctx) for e in arg.prefix), arg.shift)
        case _:
            return arg


# ---------------------------------------------------------------------------
# Law validation


def validate_law(stack: LawStack, law: StructuralLaw) -> list:
    """Static checks: exhaustiveness, guardedness, layer discipline, and a
    symbolic sort check on every clause body."""
    sig = stack.sig
    schema = law.schema
    out = []
    prefix = f"law {schema.name}"

    if schema.name in stack._index and schema.layer != stack.layer_of(schema.name):
        out.append(f"{prefix}: layer index disagrees with its position in the stack")

    main_heads = {m.sort.head for m in schema.mains}
    wanted = set()
    for op in sig.ops:
        if op.result_sort.head in main_heads:
            wanted.add(op.name)
    for kind in range(sig.kind_count):
        if sig.var_sort[kind].head in main_heads:
            wanted.add(("var", kind))

    groups = {}
    for c in law.clauses:
        groups.setdefault(c.on, []).append(c)
    for key in wanted:
        if key not in groups:
            name = key if isinstance(key, str) else f"variables of kind {key[1]}"
            out.append(f"NonExhaustive({schema.name}, on={name})")
    for key, group in groups.items():
        if key not in wanted:
            out.append(f"{prefix}: clause for {key!r} does not match any main sort")
            continue
        if len(group) == 1 and group[0].guard is None:
            continue
        if (
            len(group) == 2
            and all(g.guard is not None for g in group)
            and group[0].guard.lhs == group[1].guard.lhs
            and group[0].guard.param == group[1].guard.param
            and {group[0].guard.equal, group[1].guard.equal} == {True, False}
        ):
            continue
        out.append(f"{prefix}: guards for {key!r} are not exhaustive and disjoint")

    for c in law.clauses:
        out.extend(_check_clause(stack, law, c))
    return out


def _check_clause(stack: LawStack, law: StructuralLaw, clause: Clause) -> list:
    sig = stack.sig
    schema = law.schema
    out = []
    where = f"law {schema.name}, clause on {clause.on!r}"

    if isinstance(clause.on, tuple):
        op = None
        n_children = 0
    else:
        if not sig.has_op(clause.on):
            return [f"{where}: unknown constructor"]
        op = sig.op(clause.on)
        n_children = len(op.args)

    if clause.guard is not None:
        g = clause.guard
        if not 0 <= g.param < len(schema.params) or not isinstance(
            schema.params[g.param], VarRefParam
        ):
            out.append(f"{where}: guard parameter is not a variable reference")
        if g.lhs == ("var",):
            if op is not None:
                out.append(f"{where}: variable guard on a constructor clause")
        else:
            if op is None or not (
                0 <= g.lhs[1] < n_children and isinstance(op.args[g.lhs[1]], VarRefSpec)
            ):
                out.append(f"{where}: guard argument is not a variable reference")

    if isinstance(clause.body, Stuck):
        if op is not None:
            out.append(f"{where}: Stuck is only allowed on variable clauses")
        return out

    def walk(body, in_var_clause, in_fresh=False):
        match body:
            case BCon(op_name, nat_args, children):
                if not sig.has_op(op_name):
                    out.append(f"{where}: unknown constructor {op_name!r} in body")
                    return
                op2 = sig.op(op_name)
                if len(children) != len(op2.args) or len(nat_args) != op2.nat_params:
                    out.append(f"{where}: arity mismatch for {op_name!r} in body")
                for ch in children:
                    walk(ch, in_var_clause, in_fresh)
            case BAux(law_name, main, params, _):
                try:
                    used = stack.layer_of(law_name)
                except UnknownLaw:
                    out.append(f"{where}: unknown law {law_name!r} in body")
                    return
                if used >= schema.layer:
                    out.append(
                        f"LayerViolation({schema.name}: uses {law_name} of layer {used})"
                    )
                walk(main, in_var_clause, in_fresh)
                for p in params:
                    walk_param(p, in_var_clause)
            case RC(child, params, _):
                if op is None:
                    out.append(f"{where}: recursive call in a variable clause")
                elif not (0 <= child < n_children and isinstance(op.args[child], SubSpec)):
                    out.append(f"{where}: recursive call on a non-subterm argument")
                else:
                    head = op.args[child].sort.head
                    if head not in {m.sort.head for m in schema.mains}:
                        out.append(f"{where}: recursive call on a child outside the main sorts")
                if len(params) != len(schema.params):
                    out.append(f"{where}: recursive call passes {len(params)} of "
                               f"{len(schema.params)} parameters")
                for p in params:
                    walk_param(p, in_var_clause)
            case SubTerm(child) | ArgVar(child):
                if op is None or not 0 <= child < n_children:
                    out.append(f"{where}: child index {child} out of range")
                elif isinstance(body, ArgVar) and not isinstance(op.args[child], VarRefSpec):
                    out.append(f"{where}: ArgVar on a subterm argument")
            case ParamRef(param):
                if not 0 <= param < len(schema.params) or not isinstance(
                    schema.params[param], TermParam
                ):
                    out.append(f"{where}: ParamRef must name a term parameter")
            case EnvLookup(param):
                if not in_var_clause:
                    out.append(f"{where}: EnvLookup outside a variable clause")
                if not 0 <= param < len(schema.params) or not isinstance(
                    schema.params[param], (EnvParam, ShiftEnvParam)
                ):
                    out.append(f"{where}: EnvLookup must name an environment parameter")
            case RenVar(param):
                if not in_var_clause:
                    out.append(f"{where}: RenVar outside a variable clause")
                if not 0 <= param < len(schema.params) or not isinstance(
                    schema.params[param], ShiftRenParam
                ):
                    out.append(f"{where}: RenVar must name a renaming parameter")
            case TheVar():
                if not in_var_clause:
                    out.append(f"{where}: TheVar outside a variable clause")
            case FreshVar():
                if not in_fresh:
                    out.append(f"{where}: FreshVar outside a LiftEnv template")
            case Stuck() | MainRef():
                out.append(f"{where}: {type(body).__name__} not allowed here")

    def walk_param(p, in_var_clause):
        match p:
            case PassParam(param):
                if not 0 <= param < len(schema.params):
                    out.append(f"{where}: parameter index {param} out of range")
            case LiftEnv(param, _, via, fresh_tpl):
                if not 0 <= param < len(schema.params) or not isinstance(
                    schema.params[param], (EnvParam, ShiftEnvParam, ShiftRenParam)
                ):
                    out.append(f"{where}: LiftEnv must name an environment or renaming")
                if via is not None:
                    try:
                        used = stack.layer_of(via)
                        if used >= schema.layer:
                            out.append(f"LayerViolation({schema.name}: lifts via {via})")
                    except UnknownLaw:
                        out.append(f"{where}: unknown law {via!r} in LiftEnv")
                elif sig.unscoped and isinstance(schema.params[param], ShiftEnvParam):
                    out.append(f"{where}: unscoped LiftEnv needs a renaming law (via)")
                if fresh_tpl is not None:
                    walk(fresh_tpl, in_var_clause, True)
            case Weaken(param, _) | ConsEnv(param, _):
                if not 0 <= param < len(schema.params):
                    out.append(f"{where}: parameter index {param} out of range")
                if isinstance(p, ConsEnv):
                    for it in p.items:
                        walk(it, in_var_clause)
            case ComposeRen(first, second):
                for idx in (first, second):
                    if not 0 <= idx < len(schema.params) or not isinstance(
                        schema.params[idx], ShiftRenParam
                    ):
                        out.append(f"{where}: ComposeRen must name renaming parameters")
            case MapEnvWithAux(param, law_name, inner, _):
                if not 0 <= param < len(schema.params) or not isinstance(
                    schema.params[param], (EnvParam, ShiftEnvParam)
                ):
                    out.append(f"{where}: MapEnvWithAux must name an environment")
                try:
                    used = stack.layer_of(law_name)
                    if used >= schema.layer:
                        out.append(f"LayerViolation({schema.name}: maps via {law_name})")
                except UnknownLaw:
                    out.append(f"{where}: unknown law {law_name!r} in MapEnvWithAux")
                for q in inner:
                    walk_param(q, in_var_clause)
            case IdEnv(_):
                pass
            case _:
                walk(p, in_var_clause)

    walk(clause.body, op is None)
    return out


# ---------------------------------------------------------------------------
# Folds into augmented algebras


@dataclass
class AugmentedAlgebra:
    """A carrier with evaluators for constructors and auxiliary operators.

    Constructor evaluators receive ``(nat_args, children)`` where a child
    under ``b > 0`` binders is a function taking ``b`` carrier values per
    bound kind; operator evaluators receive ``(nat_args, main, params)``.
    """

    ops: dict
    aux: dict = field(default_factory=dict)
    eq: callable = None

    def equal(self, a, b) -> bool:
        return a == b if self.eq is None else self.eq(a, b)


def fold(stack: LawStack, alg: AugmentedAlgebra, t: Term, env=None):
    """Structural evaluation of a closed term into the algebra's carrier."""
    sig = stack.sig
    if env is None:
        env = tuple(() for _ in range(sig.kind_count))
    match t:
        case Var(kind, index):
            return env[kind][index]
        case Con(op_name, nat_args, children):
            if op_name not in alg.ops:
                raise AlgebraIncomplete(op_name)
            op = sig.op(op_name)
            vals = []
            for spec, child in zip(op.args, children):
                if isinstance(spec, VarRefSpec):
                    vals.append(child.index)
                    continue
                counts = spec.binder_counts(nat_args)
                if all(c == 0 for c in counts):
                    vals.append(fold(stack, alg, child, env))
                else:
                    def binder(*new, _child=child, _counts=counts, _env=env):
                        env2 = list(_env)
                        it = iter(new)
                        for k, c in enumerate(_counts):
                            env2[k] = env2[k] + tuple(next(it) for _ in range(c))
                        return fold(stack, alg, _child, tuple(env2))
                    vals.append(binder)
            return alg.ops[op_name](nat_args, tuple(vals))
        case Aux(law_name, nat_args, main, params):
            if law_name not in alg.aux:
                raise AlgebraIncomplete(law_name)
            main_v = fold(stack, alg, main, env)
            param_vs = []
            for p in params:
                match p:
                    case TermArg(term):
                        param_vs.append(fold(stack, alg, term, env))
                    case EnvArg(_, entries):
                        param_vs.append(tuple(fold(stack, alg, e, env) for e in entries))
                    case VarRefArg(_, index):
                        param_vs.append(index)
                    case _:
                        raise AlgebraIncomplete(f"cannot fold argument {p!r}")
            return alg.aux[law_name](nat_args, main_v, tuple(param_vs))
    raise TypeError(f"not a term: {t!r}")
