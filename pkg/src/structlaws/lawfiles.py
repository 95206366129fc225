"""File formats for signatures, structural laws, and equational systems.

Every form is an s-expression; parsing is whitespace-insensitive and the
printers are canonical, so ``print(parse(text)) == print(structure)`` and
shipped files round-trip byte for byte.

Top-level forms:

- ``(signature (mode M) (kind NAME)* (sort NAME [param])* (var-sort K SORT)* OP*)``
  with ``OP = (op NAME [(nat-params N)] (result SORT) ARG*)``,
  ``ARG = (sub SORT [(binds NAT*)]) | (refarg KIND)``;
- ``(law NAME (layer K) (schema ...) CLAUSE*)`` with
  ``CLAUSE = (clause (on OP GUARD*) BODY)``;
- ``(eqsys NAME (layer K) (schema ...) (clauses CLAUSE*) (left BODY)
  (right BODY) [(context N*)])``.

Sorts print as ``NAME`` or ``(NAME NAT)``; nat expressions print as ``3``,
``#0``, or ``#0+2``.
"""

from __future__ import annotations

from .kernel import (
    NatExpr,
    OpSchema,
    Signature,
    SortExpr,
    SubSpec,
    VarKind,
    VarRefSpec,
)
from .laws import (
    ArgVar,
    AuxSchema,
    BAux,
    BCon,
    BNat,
    Clause,
    ComposeRen,
    ConsEnv,
    EnvLen,
    EnvLookup,
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
)
from .sexpr import ParseError, parse_sexprs


def _expect(cond: bool, what: str, node):
    if not cond:
        raise ParseError(f"malformed {what}: {node!r}")


def _int(atom, what="number") -> int:
    try:
        return int(atom)
    except (TypeError, ValueError):
        raise ParseError(f"expected {what}, got {atom!r}") from None


# ---------------------------------------------------------------------------
# Nat expressions and sorts


def print_natexpr(n: NatExpr) -> str:
    return str(n)


def parse_natexpr(atom) -> NatExpr:
    _expect(isinstance(atom, str), "nat expression", atom)
    if atom.startswith("#"):
        body = atom[1:]
        if "+" in body:
            p, o = body.split("+", 1)
            return NatExpr(_int(p), _int(o))
        return NatExpr(_int(body), 0)
    return NatExpr(None, _int(atom))


def print_sort(s: SortExpr) -> str:
    if s.nat is None:
        return s.head
    return f"({s.head} {print_natexpr(s.nat)})"


def parse_sort(node) -> SortExpr:
    if isinstance(node, str):
        return SortExpr(node)
    _expect(isinstance(node, list) and len(node) == 2 and isinstance(node[0], str),
            "sort", node)
    return SortExpr(node[0], parse_natexpr(node[1]))


# ---------------------------------------------------------------------------
# Signatures


def print_signature(sig: Signature) -> str:
    lines = ["(signature", f"  (mode {sig.ambient_mode})"]
    for k in sig.kinds:
        lines.append(f"  (kind {k.name})")
    for name, parameterized in sig.sorts:
        lines.append(f"  (sort {name} param)" if parameterized else f"  (sort {name})")
    for kind in sorted(sig.var_sort):
        lines.append(f"  (var-sort {kind} {print_sort(sig.var_sort[kind])})")
    for op in sig.ops:
        parts = [f"  (op {op.name}"]
        if op.nat_params:
            parts.append(f"(nat-params {op.nat_params})")
        parts.append(f"(result {print_sort(op.result_sort)})")
        for arg in op.args:
            parts.append(_print_argspec(arg))
        lines.append(" ".join(parts) + ")")
    return "\n".join(lines) + ")\n"


def _print_argspec(arg) -> str:
    if isinstance(arg, VarRefSpec):
        return f"(refarg {arg.kind})"
    s = f"(sub {print_sort(arg.sort)}"
    if arg.binders:
        s += " (binds " + " ".join(print_natexpr(b) for b in arg.binders) + ")"
    return s + ")"


def parse_signature(text: str) -> Signature:
    nodes = parse_sexprs(text)
    _expect(len(nodes) == 1 and isinstance(nodes[0], list) and nodes[0]
            and nodes[0][0] == "signature", "signature file", nodes)
    mode = "scoped"
    kinds, sorts, var_sort, ops = [], [], {}, []
    for item in nodes[0][1:]:
        _expect(isinstance(item, list) and item, "signature item", item)
        head = item[0]
        if head == "mode":
            _expect(len(item) == 2 and item[1] in ("scoped", "unscoped"), "mode", item)
            mode = item[1]
        elif head == "kind":
            _expect(len(item) == 2, "kind", item)
            kinds.append(VarKind(len(kinds), item[1]))
        elif head == "sort":
            _expect(len(item) in (2, 3), "sort declaration", item)
            parameterized = len(item) == 3 and item[2] == "param"
            sorts.append((item[1], parameterized))
        elif head == "var-sort":
            _expect(len(item) == 3, "var-sort", item)
            var_sort[_int(item[1])] = parse_sort(item[2])
        elif head == "op":
            ops.append(_parse_op(item))
        else:
            raise ParseError(f"unknown signature item {head!r}")
    return Signature(tuple(kinds), tuple(sorts), var_sort, tuple(ops), mode)


def _parse_op(item) -> OpSchema:
    _expect(len(item) >= 3 and isinstance(item[1], str), "op", item)
    name = item[1]
    nat_params = 0
    result = None
    args = []
    for part in item[2:]:
        _expect(isinstance(part, list) and part, "op part", part)
        if part[0] == "nat-params":
            nat_params = _int(part[1])
        elif part[0] == "result":
            result = parse_sort(part[1])
        elif part[0] == "refarg":
            args.append(VarRefSpec(_int(part[1])))
        elif part[0] == "sub":
            binders = ()
            if len(part) == 3:
                _expect(isinstance(part[2], list) and part[2] and part[2][0] == "binds",
                        "binds", part)
                binders = tuple(parse_natexpr(b) for b in part[2][1:])
            else:
                _expect(len(part) == 2, "sub", part)
            args.append(SubSpec(parse_sort(part[1]), binders))
        else:
            raise ParseError(f"unknown op part {part[0]!r}")
    _expect(result is not None, "op without result sort", item)
    return OpSchema(name, result, tuple(args), nat_params)


# ---------------------------------------------------------------------------
# Schemas


def _print_ctx_coord(c) -> str:
    if isinstance(c, EnvLen):
        return f"(envlen {c.param})"
    return print_natexpr(c)


def _parse_ctx_coord(node):
    if isinstance(node, list):
        _expect(len(node) == 2 and node[0] == "envlen", "context coordinate", node)
        return EnvLen(_int(node[1]))
    return parse_natexpr(node)


def _print_paramspec(p) -> str:
    match p:
        case TermParam(sort, binders):
            s = f"(term {print_sort(sort)}"
            if binders:
                s += " (binds " + " ".join(print_natexpr(b) for b in binders) + ")"
            return s + ")"
        case EnvParam(kind, entry_sort, target):
            s = f"(envp {kind} {print_sort(entry_sort)}"
            if target is not None:
                s += f" (target {target})"
            return s + ")"
        case ShiftEnvParam(entry_sort):
            return f"(senvp {print_sort(entry_sort)})"
        case ShiftRenParam():
            return "(srenp)"
        case VarRefParam(kind):
            return f"(refp {kind})"
    raise TypeError(f"not a parameter spec: {p!r}")


def _parse_paramspec(node):
    _expect(isinstance(node, list) and node, "parameter spec", node)
    head = node[0]
    if head == "term":
        binders = ()
        if len(node) == 3:
            _expect(isinstance(node[2], list) and node[2] and node[2][0] == "binds",
                    "binds", node)
            binders = tuple(parse_natexpr(b) for b in node[2][1:])
        else:
            _expect(len(node) == 2, "term parameter", node)
        return TermParam(parse_sort(node[1]), binders)
    if head == "envp":
        _expect(len(node) in (3, 4), "envp", node)
        target = None
        if len(node) == 4:
            _expect(isinstance(node[3], list) and node[3][0] == "target", "target", node)
            target = _int(node[3][1])
        return EnvParam(_int(node[1]), parse_sort(node[2]), target)
    if head == "senvp":
        _expect(len(node) == 2, "senvp", node)
        return ShiftEnvParam(parse_sort(node[1]))
    if head == "srenp":
        return ShiftRenParam()
    if head == "refp":
        return VarRefParam(_int(node[1]))
    raise ParseError(f"unknown parameter spec {head!r}")


def print_schema(schema: AuxSchema) -> str:
    parts = ["(schema"]
    if schema.nat_params:
        parts.append(f"(nat-params {schema.nat_params})")
    for m in schema.mains:
        ctx = " ".join(_print_ctx_coord(c) for c in m.ctx)
        parts.append(f"(main {print_sort(m.sort)} (ctx {ctx}) {print_sort(m.result_sort)})")
    for p in schema.params:
        parts.append(f"(param {_print_paramspec(p)})")
    return " ".join(parts) + ")"


def parse_schema(node, name: str, layer: int) -> AuxSchema:
    _expect(isinstance(node, list) and node and node[0] == "schema", "schema", node)
    nat_params = 0
    mains, params = [], []
    for part in node[1:]:
        _expect(isinstance(part, list) and part, "schema part", part)
        if part[0] == "nat-params":
            nat_params = _int(part[1])
        elif part[0] == "main":
            _expect(len(part) == 4 and isinstance(part[2], list)
                    and part[2] and part[2][0] == "ctx", "main option", part)
            ctx = tuple(_parse_ctx_coord(c) for c in part[2][1:])
            mains.append(MainOption(parse_sort(part[1]), ctx, parse_sort(part[3])))
        elif part[0] == "param":
            _expect(len(part) == 2, "param", part)
            params.append(_parse_paramspec(part[1]))
        else:
            raise ParseError(f"unknown schema part {part[0]!r}")
    return AuxSchema(name, layer, tuple(mains), tuple(params), nat_params)


# ---------------------------------------------------------------------------
# Clause bodies and parameter transformers


def _print_nats(nats) -> str:
    return "(nats " + " ".join(print_body(n) for n in nats) + ")"


def print_body(b) -> str:
    match b:
        case BNat(src, idx, offset):
            return f"(nat {src} {idx} {offset})"
        case BCon(op, nat_args, children):
            parts = [f"(con {op}", _print_nats(nat_args)]
            parts.extend(print_body(c) for c in children)
            return " ".join(parts) + ")"
        case BAux(law, main, params, nat_args):
            parts = [f"(auxcall {law}", _print_nats(nat_args), print_body(main)]
            parts.extend(print_body(p) for p in params)
            return " ".join(parts) + ")"
        case RC(child, params, nat_args):
            parts = [f"(rc {child}", _print_nats(nat_args)]
            parts.extend(print_body(p) for p in params)
            return " ".join(parts) + ")"
        case SubTerm(child):
            return f"(subterm {child})"
        case ParamRef(param):
            return f"(paramref {param})"
        case EnvLookup(param):
            return f"(envlookup {param})"
        case RenVar(param):
            return f"(renvar {param})"
        case TheVar():
            return "(thevar)"
        case ArgVar(arg):
            return f"(argvar {arg})"
        case FreshVar():
            return "(freshvar)"
        case MainRef():
            return "(mainref)"
        case Stuck():
            return "(stuck)"
        case PassParam(param):
            return f"(pass {param})"
        case LiftEnv(param, kind, via, fresh):
            s = f"(lift {param} {kind}"
            if via is not None:
                s += f" (via {via})"
            if fresh is not None:
                s += f" (fresh {print_body(fresh)})"
            return s + ")"
        case Weaken(param, kind):
            return f"(weaken {param} {kind})"
        case ConsEnv(param, items):
            parts = [f"(consenv {param}"]
            parts.extend(print_body(i) for i in items)
            return " ".join(parts) + ")"
        case ComposeRen(first, second):
            return f"(composeren {first} {second})"
        case MapEnvWithAux(param, law, inner, nat_args):
            parts = [f"(mapenv {param} {law}", _print_nats(nat_args)]
            parts.extend(print_body(i) for i in inner)
            return " ".join(parts) + ")"
        case IdEnv(kind):
            return f"(idenv {kind})"
    raise TypeError(f"not a body node: {b!r}")


def _parse_nats(node) -> tuple:
    _expect(isinstance(node, list) and node and node[0] == "nats", "nats", node)
    return tuple(parse_body(n) for n in node[1:])


def parse_body(node):
    _expect(isinstance(node, list) and node and isinstance(node[0], str), "body", node)
    head = node[0]
    if head == "nat":
        _expect(len(node) == 4 and node[1] in ("lit", "con", "aux"), "nat", node)
        return BNat(node[1], _int(node[2]), _int(node[3]))
    if head == "con":
        _expect(len(node) >= 3, "con", node)
        return BCon(node[1], _parse_nats(node[2]),
                    tuple(parse_body(c) for c in node[3:]))
    if head == "auxcall":
        _expect(len(node) >= 4, "auxcall", node)
        return BAux(node[1], parse_body(node[3]),
                    tuple(parse_body(p) for p in node[4:]), _parse_nats(node[2]))
    if head == "rc":
        _expect(len(node) >= 3, "rc", node)
        return RC(_int(node[1]), tuple(parse_body(p) for p in node[3:]),
                  _parse_nats(node[2]))
    if head == "subterm":
        return SubTerm(_int(node[1]))
    if head == "paramref":
        return ParamRef(_int(node[1]))
    if head == "envlookup":
        return EnvLookup(_int(node[1]))
    if head == "renvar":
        return RenVar(_int(node[1]))
    if head == "thevar":
        return TheVar()
    if head == "argvar":
        return ArgVar(_int(node[1]))
    if head == "freshvar":
        return FreshVar()
    if head == "mainref":
        return MainRef()
    if head == "stuck":
        return Stuck()
    if head == "pass":
        return PassParam(_int(node[1]))
    if head == "lift":
        _expect(len(node) >= 3, "lift", node)
        via, fresh = None, None
        for extra in node[3:]:
            _expect(isinstance(extra, list) and extra, "lift option", extra)
            if extra[0] == "via":
                via = extra[1]
            elif extra[0] == "fresh":
                fresh = parse_body(extra[1])
            else:
                raise ParseError(f"unknown lift option {extra[0]!r}")
        return LiftEnv(_int(node[1]), _int(node[2]), via, fresh)
    if head == "weaken":
        return Weaken(_int(node[1]), _int(node[2]))
    if head == "consenv":
        return ConsEnv(_int(node[1]), tuple(parse_body(i) for i in node[2:]))
    if head == "composeren":
        return ComposeRen(_int(node[1]), _int(node[2]))
    if head == "mapenv":
        _expect(len(node) >= 4, "mapenv", node)
        return MapEnvWithAux(_int(node[1]), node[2],
                             tuple(parse_body(i) for i in node[4:]),
                             _parse_nats(node[3]))
    if head == "idenv":
        return IdEnv(_int(node[1]))
    raise ParseError(f"unknown body head {head!r}")


# ---------------------------------------------------------------------------
# Clauses


def print_clause(c: Clause) -> str:
    if isinstance(c.on, tuple):
        on = f"(on var {c.on[1]}"
    else:
        on = f"(on {c.on}"
    if c.guard is not None:
        g = c.guard
        lhs = "var" if g.lhs == ("var",) else f"(arg {g.lhs[1]})"
        on += f" (guard {lhs} {g.param} {'eq' if g.equal else 'ne'})"
    on += ")"
    return f"  (clause {on} {print_body(c.body)})"


def parse_clause(node) -> Clause:
    _expect(isinstance(node, list) and len(node) == 3 and node[0] == "clause",
            "clause", node)
    on_node = node[1]
    _expect(isinstance(on_node, list) and len(on_node) >= 2 and on_node[0] == "on",
            "clause head", node)
    if on_node[1] == "var":
        on = ("var", _int(on_node[2]))
        rest = on_node[3:]
    else:
        on = on_node[1]
        rest = on_node[2:]
    guard = None
    for g in rest:
        _expect(isinstance(g, list) and len(g) == 4 and g[0] == "guard"
                and guard is None, "guard", g)
        lhs = ("var",) if g[1] == "var" else ("arg", _int(g[1][1]))
        _expect(g[3] in ("eq", "ne"), "guard polarity", g)
        guard = Guard(lhs, _int(g[2]), g[3] == "eq")
    return Clause(on, parse_body(node[2]), guard)


# ---------------------------------------------------------------------------
# Laws and equational systems


def print_law(law: StructuralLaw) -> str:
    lines = [
        f"(law {law.schema.name} (layer {law.schema.layer})",
        "  " + print_schema(law.schema),
    ]
    lines.extend(print_clause(c) for c in law.clauses)
    return "\n".join(lines) + ")\n"


def parse_law(node) -> StructuralLaw:
    _expect(isinstance(node, list) and len(node) >= 4 and node[0] == "law"
            and isinstance(node[1], str), "law", node)
    layer_node = node[2]
    _expect(isinstance(layer_node, list) and len(layer_node) == 2
            and layer_node[0] == "layer", "layer", node)
    schema = parse_schema(node[3], node[1], _int(layer_node[1]))
    clauses = tuple(parse_clause(c) for c in node[4:])
    return StructuralLaw(schema, clauses)


def print_laws(laws) -> str:
    return "\n".join(print_law(law) for law in laws)


def parse_laws(text: str) -> list:
    return [parse_law(node) for node in parse_sexprs(text)]


def stack_from_laws(sig: Signature, laws) -> LawStack:
    """Group laws by their declared layer index and build a stack."""
    by_layer = {}
    for law in laws:
        by_layer.setdefault(law.schema.layer, []).append(law)
    stack = LawStack(sig)
    for layer in sorted(by_layer):
        if layer != len(stack.layers):
            raise ParseError(f"layer {layer} declared but layer "
                             f"{len(stack.layers)} is missing")
        stack = stack.push_layer(tuple(by_layer[layer]))
    return stack


def print_eqsys(eq) -> str:
    lines = [
        f"(eqsys {eq.name} (layer {eq.schema.layer})",
        "  " + print_schema(eq.schema),
        "  (clauses",
    ]
    lines.extend("  " + print_clause(c) for c in eq.clauses)
    lines.append("  )")
    lines.append(f"  (left {print_body(eq.left.template)})")
    lines.append(f"  (right {print_body(eq.right.template)})")
    if eq.context is not None:
        lines.append("  (context " + " ".join(str(n) for n in eq.context) + ")")
    return "\n".join(lines) + ")\n"


def parse_eqsys(node):
    from .equations import EquationSystem, Interpretation

    _expect(isinstance(node, list) and len(node) >= 6 and node[0] == "eqsys"
            and isinstance(node[1], str), "eqsys", node)
    layer_node = node[2]
    _expect(isinstance(layer_node, list) and len(layer_node) == 2
            and layer_node[0] == "layer", "layer", node)
    schema = parse_schema(node[3], node[1], _int(layer_node[1]))
    clauses_node = node[4]
    _expect(isinstance(clauses_node, list) and clauses_node
            and clauses_node[0] == "clauses", "clauses", node)
    clauses = tuple(parse_clause(c) for c in clauses_node[1:])
    left = right = None
    context = None
    for part in node[5:]:
        _expect(isinstance(part, list) and part, "eqsys part", part)
        if part[0] == "left":
            left = Interpretation(parse_body(part[1]))
        elif part[0] == "right":
            right = Interpretation(parse_body(part[1]))
        elif part[0] == "context":
            context = tuple(_int(n) for n in part[1:])
        else:
            raise ParseError(f"unknown eqsys part {part[0]!r}")
    _expect(left is not None and right is not None, "eqsys sides", node)
    return EquationSystem(node[1], schema, clauses, left, right, context)


def print_systems(systems) -> str:
    return "\n".join(print_eqsys(eq) for eq in systems)


def parse_systems(text: str) -> list:
    return [parse_eqsys(node) for node in parse_sexprs(text)]
