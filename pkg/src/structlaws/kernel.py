"""Signatures, scoping contexts, well-scoped terms, and the renaming action.

Terms are plain immutable trees.  A signature declares variable kinds,
sort families (optionally indexed by one natural number), and constructors.
Two ambient modes are supported:

- ``scoped``: contexts are finite per-kind counts and binders introduce new
  variables at the *top* of the index range,
- ``unscoped``: a single kind, de Bruijn style, binders introduce index 0
  and variable indices are unbounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

OMEGA = math.inf  # unbounded context coordinate (unscoped mode)

Nat = Union[int, float]  # int, or OMEGA
Context = tuple  # per-kind variable counts


@dataclass(frozen=True)
class NatExpr:
    """A natural-number expression: ``offset`` or ``param + offset``."""

    param: Optional[int] = None
    offset: int = 0

    def eval(self, nats: tuple) -> int:
        base = 0 if self.param is None else nats[self.param]
        return base + self.offset

    def __str__(self) -> str:
        if self.param is None:
            return str(self.offset)
        if self.offset == 0:
            return f"#{self.param}"
        return f"#{self.param}+{self.offset}"


LIT0 = NatExpr(None, 0)
LIT1 = NatExpr(None, 1)


@dataclass(frozen=True)
class SortExpr:
    """A sort, possibly applied to one natural-number expression."""

    head: str
    nat: Optional[NatExpr] = None

    def resolve(self, nats: tuple = ()) -> tuple:
        return (self.head, None if self.nat is None else self.nat.eval(nats))


@dataclass(frozen=True)
class VarKind:
    id: int
    name: str


@dataclass(frozen=True)
class SubSpec:
    """Constructor argument: a subterm, possibly under fresh binders."""

    sort: SortExpr
    binders: tuple = ()  # per-kind NatExpr

    def binder_counts(self, nats: tuple) -> tuple:
        return tuple(b.eval(nats) for b in self.binders)


@dataclass(frozen=True)
class VarRefSpec:
    """Constructor argument: a reference to an in-scope variable."""

    kind: int


ArgSpec = Union[SubSpec, VarRefSpec]


@dataclass(frozen=True)
class OpSchema:
    name: str
    result_sort: SortExpr
    args: tuple = ()
    nat_params: int = 0


@dataclass(frozen=True)
class Signature:
    kinds: tuple
    sorts: tuple  # of (name, parameterized: bool)
    var_sort: dict  # kind id -> SortExpr
    ops: tuple
    ambient_mode: str = "scoped"

    def __post_init__(self):
        object.__setattr__(self, "_op_index", {o.name: o for o in self.ops})

    def op(self, name: str) -> OpSchema:
        try:
            return self._op_index[name]
        except KeyError:
            raise UnknownOp(name) from None

    def has_op(self, name: str) -> bool:
        return name in self._op_index

    @property
    def kind_count(self) -> int:
        return len(self.kinds)

    @property
    def unscoped(self) -> bool:
        return self.ambient_mode == "unscoped"

    def zero_context(self) -> Context:
        return (0,) * self.kind_count

    def sort_parameterized(self, head: str) -> bool:
        for name, parameterized in self.sorts:
            if name == head:
                return parameterized
        raise KeyError(head)


class ScopeError(Exception):
    pass


class UnknownOp(Exception):
    pass


class UnknownLaw(Exception):
    pass


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    kind: int
    index: int


@dataclass(frozen=True)
class Con:
    op: str
    nat_args: tuple = ()
    children: tuple = ()


@dataclass(frozen=True)
class Aux:
    """A formal (unevaluated) application of an auxiliary operator."""

    law: str
    nat_args: tuple = ()
    main: "Term" = None
    params: tuple = ()


Term = Union[Var, Con, Aux]


# Auxiliary-operator arguments.


@dataclass(frozen=True)
class TermArg:
    term: Term


@dataclass(frozen=True)
class EnvArg:
    """Scoped environment: one entry per in-scope variable of ``kind``."""

    kind: int
    entries: tuple


@dataclass(frozen=True)
class ShiftEnvArg:
    """Unscoped environment: explicit prefix, then ``i -> Var(i - k + shift)``."""

    prefix: tuple
    shift: int

    def lookup(self, index: int) -> Term:
        if index < len(self.prefix):
            return self.prefix[index]
        return Var(0, index - len(self.prefix) + self.shift)


@dataclass(frozen=True)
class ShiftRenArg:
    """Unscoped renaming: explicit prefix, then ``i -> i - k + shift``."""

    prefix: tuple
    shift: int

    def lookup(self, index: int) -> int:
        if index < len(self.prefix):
            return self.prefix[index]
        return index - len(self.prefix) + self.shift


@dataclass(frozen=True)
class VarRefArg:
    kind: int
    index: int


AuxArg = Union[TermArg, EnvArg, ShiftEnvArg, ShiftRenArg, VarRefArg]


# ---------------------------------------------------------------------------
# Size and canonical order


def term_size(t: Term) -> int:
    """Node count, including Var and Aux nodes; nat arguments cost 0."""
    match t:
        case Var():
            return 1
        case Con(_, _, children):
            return 1 + sum(term_size(c) for c in children)
        case Aux(_, _, main, params):
            return 1 + term_size(main) + sum(arg_size(p) for p in params)
    raise TypeError(f"not a term: {t!r}")


def arg_size(a: AuxArg) -> int:
    match a:
        case TermArg(t):
            return term_size(t)
        case EnvArg(_, entries):
            return sum(term_size(e) for e in entries)
        case ShiftEnvArg(prefix, _):
            return sum(term_size(e) for e in prefix)
        case ShiftRenArg():
            return 0
        case VarRefArg():
            return 1
    raise TypeError(f"not an aux argument: {a!r}")


def term_key(t: Term) -> tuple:
    """Canonical total order key: size, then node tag, then lexicographic."""
    return (term_size(t), _node_key(t))


def _node_key(t: Term) -> tuple:
    match t:
        case Var(kind, index):
            return (0, "", (kind, index), ())
        case Con(op, nat_args, children):
            return (1, op, tuple(nat_args), tuple(_node_key(c) for c in children))
        case Aux(law, nat_args, main, params):
            return (
                2,
                law,
                tuple(nat_args),
                (_node_key(main),) + tuple(_arg_key(p) for p in params),
            )
    raise TypeError(f"not a term: {t!r}")


def _arg_key(a: AuxArg) -> tuple:
    match a:
        case TermArg(t):
            return (0, (), (_node_key(t),))
        case EnvArg(kind, entries):
            return (1, (kind,), tuple(_node_key(e) for e in entries))
        case ShiftEnvArg(prefix, shift):
            return (2, (shift,), tuple(_node_key(e) for e in prefix))
        case ShiftRenArg(prefix, shift):
            return (3, tuple(prefix) + (shift,), ())
        case VarRefArg(kind, index):
            return (4, (kind, index), ())
    raise TypeError(f"not an aux argument: {a!r}")


def term_eq(a: Term, b: Term) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# Signature validation


def validate_signature(sig: Signature) -> list:
    """Return a list of diagnostics; empty iff the signature is well formed."""
    out = []
    for i, k in enumerate(sig.kinds):
        if k.id != i:
            out.append(f"kind ids must be dense 0..{len(sig.kinds) - 1}: {k}")
    names = [n for n, _ in sig.sorts]
    if len(set(names)) != len(names):
        out.append("duplicate sort name")
    seen = set()
    for op in sig.ops:
        if op.name in seen:
            out.append(f"DuplicateOp({op.name!r})")
        seen.add(op.name)
    if sig.ambient_mode not in ("scoped", "unscoped"):
        out.append(f"unknown ambient mode {sig.ambient_mode!r}")
    if sig.unscoped and sig.kind_count != 1:
        out.append("unscoped mode requires exactly one variable kind")
    for k in sig.kinds:
        if k.id not in sig.var_sort:
            out.append(f"var_sort missing for kind {k.name}")
            continue
        out.extend(_check_sort(sig, sig.var_sort[k.id], 0, f"var_sort[{k.name}]"))
    for op in sig.ops:
        where = f"op {op.name}"
        out.extend(_check_sort(sig, op.result_sort, op.nat_params, where))
        for j, arg in enumerate(op.args):
            match arg:
                case SubSpec(sort, binders):
                    out.extend(_check_sort(sig, sort, op.nat_params, f"{where} arg {j}"))
                    if len(binders) != sig.kind_count:
                        out.append(f"{where} arg {j}: binder vector length mismatch")
                    for b in binders:
                        if b.param is not None and b.param >= op.nat_params:
                            out.append(f"{where} arg {j}: binder references undeclared parameter")
                case VarRefSpec(kind):
                    if not 0 <= kind < sig.kind_count:
                        out.append(f"{where} arg {j}: unknown kind {kind}")
    return out


def _check_sort(sig: Signature, sort: SortExpr, nat_params: int, where: str) -> list:
    out = []
    if sort.head not in {n for n, _ in sig.sorts}:
        out.append(f"{where}: unknown sort {sort.head!r}")
        return out
    parameterized = sig.sort_parameterized(sort.head)
    if parameterized and sort.nat is None:
        out.append(f"{where}: sort {sort.head} requires a natural argument")
    if not parameterized and sort.nat is not None:
        out.append(f"{where}: sort {sort.head} takes no natural argument")
    if sort.nat is not None and sort.nat.param is not None and sort.nat.param >= nat_params:
        out.append(f"{where}: sort argument references undeclared parameter")
    return out


# ---------------------------------------------------------------------------
# Scope checking


def extend_context(sig: Signature, ctx: Context, binders: tuple) -> Context:
    padded = tuple(binders) + (0,) * (len(ctx) - len(binders))
    return tuple(c + b for c, b in zip(ctx, padded))


def check_scope(sig: Signature, ctx: Context, sort: SortExpr, t: Term, stack=None) -> bool:
    return check_scope_resolved(sig, ctx, sort.resolve(), t, stack)


def check_scope_resolved(sig, ctx, want: tuple, t: Term, stack=None) -> bool:
    match t:
        case Var(kind, index):
            if not 0 <= kind < sig.kind_count:
                return False
            return sig.var_sort[kind].resolve() == want and 0 <= index < ctx[kind]
        case Con(op_name, nat_args, children):
            op = sig.op(op_name)
            if len(nat_args) != op.nat_params or len(children) != len(op.args):
                return False
            if any(n < 0 for n in nat_args):
                return False
            if op.result_sort.resolve(nat_args) != want:
                return False
            for arg, child in zip(op.args, children):
                match arg:
                    case SubSpec():
                        sub_ctx = extend_context(sig, ctx, arg.binder_counts(nat_args))
                        if not check_scope_resolved(
                            sig, sub_ctx, arg.sort.resolve(nat_args), child, stack
                        ):
                            return False
                    case VarRefSpec(kind):
                        if not (isinstance(child, Var) and child.kind == kind):
                            return False
                        if not 0 <= child.index < ctx[kind]:
                            return False
            return True
        case Aux():
            if stack is None:
                raise UnknownLaw(t.law)
            return stack.check_aux_scope(ctx, want, t)
    return False


# ---------------------------------------------------------------------------
# Renaming


@dataclass(frozen=True)
class ScopedRen:
    """A total map between finite contexts of one kind; source = len(table)."""

    table: tuple
    dst: int

    def apply(self, i: int) -> int:
        try:
            return self.table[i]
        except IndexError:
            raise ScopeError(f"renaming not defined at index {i}") from None

    def lift(self, b: int) -> "ScopedRen":
        if b == 0:
            return self
        return ScopedRen(self.table + tuple(range(self.dst, self.dst + b)), self.dst + b)

    @staticmethod
    def identity(n: int) -> "ScopedRen":
        return ScopedRen(tuple(range(n)), n)


@dataclass(frozen=True)
class UnscopedRen:
    """A map on de Bruijn indices: explicit prefix then a uniform shift."""

    prefix: tuple
    shift: int

    def apply(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return i - len(self.prefix) + self.shift

    def lift(self, b: int) -> "UnscopedRen":
        if b == 0:
            return self
        return UnscopedRen(
            tuple(range(b)) + tuple(self.apply(i) + b for i in range(len(self.prefix))),
            self.shift + b,
        )

    @staticmethod
    def identity(_n=None) -> "UnscopedRen":
        return UnscopedRen((), 0)


def rename(sig: Signature, t: Term, maps: tuple, stack=None) -> Term:
    """Apply per-kind index maps to every free variable of ``t``.

    Binders extend the maps by identity on the newly bound indices (at the
    top of the range in scoped mode, at index 0 in unscoped mode).
    """
    match t:
        case Var(kind, index):
            return Var(kind, maps[kind].apply(index))
        case Con(op_name, nat_args, children):
            op = sig.op(op_name)
            new_children = []
            for arg, child in zip(op.args, children):
                match arg:
                    case SubSpec():
                        counts = arg.binder_counts(nat_args)
                        counts += (0,) * (len(maps) - len(counts))
                        lifted = tuple(m.lift(b) for m, b in zip(maps, counts))
                        new_children.append(rename(sig, child, lifted, stack))
                    case VarRefSpec():
                        new_children.append(rename(sig, child, maps, stack))
            return Con(op_name, nat_args, tuple(new_children))
        case Aux():
            if stack is None:
                raise UnknownLaw(t.law)
            return stack.rename_aux(t, maps)
    raise TypeError(f"not a term: {t!r}")
