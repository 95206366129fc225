"""S-expression surface syntax for terms and auxiliary arguments.

Grammar:

- ``(var KIND INDEX)`` — a variable node,
- ``(op NAME NAT* CHILD*)`` — a basic constructor,
- ``(aux LAW NAT* MAIN PARAM*)`` — a formal auxiliary-operator node,
- ``(env ENTRY*)`` / ``(env KIND ENTRY*)`` — a scoped environment,
- ``(senv (ENTRY*) SHIFT)`` — an unscoped shift-environment,
- ``(sren (NAT*) SHIFT)`` — an unscoped shift-renaming,
- ``(ref KIND INDEX)`` — a variable-reference argument.

Parsing is whitespace-insensitive; printing is canonical (single spaces).
"""

from __future__ import annotations

from .kernel import (
    Aux,
    AuxArg,
    Con,
    EnvArg,
    ShiftEnvArg,
    ShiftRenArg,
    Term,
    TermArg,
    Var,
    VarRefArg,
)


class ParseError(Exception):
    pass


def tokenize(text: str) -> list:
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            out.append(c)
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            out.append(text[i:j])
            i = j
    return out


def parse_sexprs(text: str) -> list:
    """Parse all s-expressions in ``text`` into nested lists of atoms."""
    tokens = tokenize(text)
    pos = 0
    out = []

    def node():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(node())
            if pos >= len(tokens):
                raise ParseError("unbalanced parenthesis")
            pos += 1
            return items
        if tok == ")":
            raise ParseError("unexpected ')'")
        return tok

    while pos < len(tokens):
        out.append(node())
    return out


def parse_sexpr(text: str):
    nodes = parse_sexprs(text)
    if len(nodes) != 1:
        raise ParseError(f"expected exactly one expression, got {len(nodes)}")
    return nodes[0]


def _nat(atom) -> int:
    if isinstance(atom, str):
        try:
            v = int(atom)
        except ValueError:
            raise ParseError(f"expected a natural number, got {atom!r}") from None
        if v >= 0:
            return v
    raise ParseError(f"expected a natural number, got {atom!r}")


def term_from_node(node) -> Term:
    if not isinstance(node, list) or not node:
        raise ParseError(f"expected a term, got {node!r}")
    head = node[0]
    if head == "var":
        if len(node) != 3:
            raise ParseError("(var KIND INDEX)")
        return Var(_nat(node[1]), _nat(node[2]))
    if head == "op":
        if len(node) < 2 or isinstance(node[1], list):
            raise ParseError("(op NAME NAT* CHILD*)")
        rest = node[2:]
        nats, i = [], 0
        while i < len(rest) and isinstance(rest[i], str):
            nats.append(_nat(rest[i]))
            i += 1
        children = [term_from_node(c) for c in rest[i:]]
        return Con(node[1], tuple(nats), tuple(children))
    if head == "aux":
        if len(node) < 3 or isinstance(node[1], list):
            raise ParseError("(aux LAW NAT* MAIN PARAM*)")
        rest = node[2:]
        nats, i = [], 0
        # nat arguments may be written bare or grouped in one list
        if rest and isinstance(rest[0], list) and all(isinstance(a, str) for a in rest[0]) \
                and (not rest[0] or rest[0][0].isdigit()):
            nats = [_nat(a) for a in rest[0]]
            i = 1
        else:
            while i < len(rest) and isinstance(rest[i], str):
                nats.append(_nat(rest[i]))
                i += 1
        if i >= len(rest):
            raise ParseError("aux node missing its main argument")
        main = term_from_node(rest[i])
        params = [arg_from_node(p) for p in rest[i + 1 :]]
        return Aux(node[1], tuple(nats), main, tuple(params))
    raise ParseError(f"unknown term head {head!r}")


def arg_from_node(node) -> AuxArg:
    if not isinstance(node, list) or not node:
        raise ParseError(f"expected an aux argument, got {node!r}")
    head = node[0]
    if head == "env":
        rest = node[1:]
        kind = 0
        if rest and isinstance(rest[0], str):
            kind = _nat(rest[0])
            rest = rest[1:]
        return EnvArg(kind, tuple(term_from_node(e) for e in rest))
    if head == "senv":
        if len(node) != 3 or not isinstance(node[1], list):
            raise ParseError("(senv (ENTRY*) SHIFT)")
        return ShiftEnvArg(tuple(term_from_node(e) for e in node[1]), _nat(node[2]))
    if head == "sren":
        if len(node) != 3 or not isinstance(node[1], list):
            raise ParseError("(sren (NAT*) SHIFT)")
        return ShiftRenArg(tuple(_nat(a) for a in node[1]), _nat(node[2]))
    if head == "ref":
        if len(node) != 3:
            raise ParseError("(ref KIND INDEX)")
        return VarRefArg(_nat(node[1]), _nat(node[2]))
    if isinstance(head, list) and len(node) == 1:
        # tolerated spelling: a term parameter wrapped in one extra level
        return TermArg(term_from_node(head))
    return TermArg(term_from_node(node))


def parse_term(text: str) -> Term:
    return term_from_node(parse_sexpr(text))


def print_term(t: Term) -> str:
    match t:
        case Var(kind, index):
            return f"(var {kind} {index})"
        case Con(op, nat_args, children):
            parts = [f"(op {op}"]
            parts.extend(str(n) for n in nat_args)
            parts.extend(print_term(c) for c in children)
            return " ".join(parts) + ")"
        case Aux(law, nat_args, main, params):
            parts = [f"(aux {law}"]
            parts.extend(str(n) for n in nat_args)
            parts.append(print_term(main))
            parts.extend(print_arg(p) for p in params)
            return " ".join(parts) + ")"
    raise TypeError(f"not a term: {t!r}")


def print_arg(a: AuxArg) -> str:
    match a:
        case TermArg(t):
            return print_term(t)
        case EnvArg(kind, entries):
            parts = ["(env"]
            if kind != 0:
                parts.append(str(kind))
            parts.extend(print_term(e) for e in entries)
            return " ".join(parts) + ")"
        case ShiftEnvArg(prefix, shift):
            inner = " ".join(print_term(e) for e in prefix)
            return f"(senv ({inner}) {shift})"
        case ShiftRenArg(prefix, shift):
            inner = " ".join(str(n) for n in prefix)
            return f"(sren ({inner}) {shift})"
        case VarRefArg(kind, index):
            return f"(ref {kind} {index})"
    raise TypeError(f"not an aux argument: {a!r}")


def print_node(node) -> str:
    """Canonical printing of a raw s-expression node."""
    if isinstance(node, str):
        return node
    return "(" + " ".join(print_node(x) for x in node) + ")"
