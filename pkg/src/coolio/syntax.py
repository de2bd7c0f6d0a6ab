"""Abstract syntax tree for COOL, with a pretty-printer and a tree dumper.

Nodes compare structurally: spans and inferred types are excluded from
equality so that a program and its re-parsed pretty-print can be compared
directly. Explicit parentheses are kept as Paren nodes; strip_parens removes
them for comparisons that should treat them as transparent.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .lexer import SourceSpan


@dataclass
class Node:
    span: SourceSpan | None = field(default=None, compare=False, kw_only=True)

    @property
    def line(self) -> int:
        return self.span.line if self.span is not None else 0


@dataclass
class Expr(Node):
    # Filled by the typechecker; Object is used as the recovery type.
    inferred_type: str | None = field(default=None, compare=False, kw_only=True)


@dataclass
class Program(Node):
    classes: list[ClassDecl]


@dataclass
class ClassDecl(Node):
    name: str
    parent: str | None  # None means Object
    features: list[Feature]


@dataclass
class Feature(Node):
    name: str


@dataclass
class Formal(Node):
    name: str
    declared_type: str


@dataclass
class Method(Feature):
    formals: list[Formal]
    return_type: str
    body: Expr


@dataclass
class Attribute(Feature):
    declared_type: str
    init: Expr | None


@dataclass
class LetBinding(Node):
    name: str
    declared_type: str
    init: Expr | None


@dataclass
class CaseBranch(Node):
    name: str
    declared_type: str
    body: Expr


@dataclass
class Assign(Expr):
    name: str
    value: Expr


@dataclass
class Dispatch(Expr):
    receiver: Expr | None  # None means implicit self
    static_type: str | None  # set for receiver@Type.method(...)
    method: str
    args: list[Expr]


@dataclass
class If(Expr):
    condition: Expr
    then_branch: Expr
    else_branch: Expr


@dataclass
class While(Expr):
    condition: Expr
    body: Expr


@dataclass
class Block(Expr):
    body: list[Expr]  # non-empty


@dataclass
class Let(Expr):
    bindings: list[LetBinding]  # non-empty
    body: Expr


@dataclass
class Case(Expr):
    scrutinee: Expr
    branches: list[CaseBranch]  # non-empty


@dataclass
class New(Expr):
    type_name: str


@dataclass
class IsVoid(Expr):
    operand: Expr


@dataclass
class Neg(Expr):
    operand: Expr


@dataclass
class Not(Expr):
    operand: Expr


@dataclass
class Paren(Expr):
    inner: Expr


@dataclass
class BinOp(Expr):
    op: str  # one of + - * / < <= =
    left: Expr
    right: Expr


@dataclass
class Identifier(Expr):
    name: str


@dataclass
class IntConst(Expr):
    value: int


@dataclass
class StringConst(Expr):
    value: str


@dataclass
class BoolConst(Expr):
    value: bool


def child_nodes(node: Node) -> list[Node]:
    """Direct AST children of ``node``, in source order."""
    out: list[Node] = []
    for f in dataclasses.fields(node):
        v = getattr(node, f.name)
        if isinstance(v, Node):
            out.append(v)
        elif isinstance(v, list):
            out.extend(x for x in v if isinstance(x, Node))
    return out


def strip_parens(node: Node) -> Node:
    """Copy of ``node`` with every Paren wrapper removed."""
    if isinstance(node, Paren):
        return strip_parens(node.inner)
    changes: dict[str, object] = {}
    for f in dataclasses.fields(node):
        v = getattr(node, f.name)
        if isinstance(v, Node):
            changes[f.name] = strip_parens(v)
        elif isinstance(v, list) and any(isinstance(x, Node) for x in v):
            changes[f.name] = [strip_parens(x) if isinstance(x, Node) else x for x in v]
    return dataclasses.replace(node, **changes) if changes else node


# Binding strength, loosest first. A child is parenthesized when its own
# level is below the minimum its position requires.
_LET = 0
_ASSIGN = 1
_NOT = 2
_COMPARE = 3
_ADD = 4
_MUL = 5
_ISVOID = 6
_NEG = 7
_DISPATCH = 8
_ATOM = 9

_BINOP_LEVEL = {"+": _ADD, "-": _ADD, "*": _MUL, "/": _MUL, "<": _COMPARE, "<=": _COMPARE, "=": _COMPARE}

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\b": "\\b", "\f": "\\f"}


def escape_string(text: str) -> str:
    return "".join(_STRING_ESCAPES.get(ch, ch) for ch in text)


def _level(e: Expr) -> int:
    if isinstance(e, Let):
        return _LET
    if isinstance(e, Assign):
        return _ASSIGN
    if isinstance(e, Not):
        return _NOT
    if isinstance(e, BinOp):
        return _BINOP_LEVEL[e.op]
    if isinstance(e, IsVoid):
        return _ISVOID
    if isinstance(e, Neg):
        return _NEG
    if isinstance(e, Dispatch) and e.receiver is not None:
        return _DISPATCH
    return _ATOM


def expr_text(e: Expr, min_level: int = 0) -> str:
    """Single-line rendering of ``e``, parenthesized as precedence demands."""
    text = _render(e)
    if _level(e) < min_level:
        return f"({text})"
    return text


def _render(e: Expr) -> str:
    if isinstance(e, Paren):
        return f"({expr_text(e.inner, 0)})"
    if isinstance(e, Assign):
        return f"{e.name} <- {expr_text(e.value, _ASSIGN)}"
    if isinstance(e, Dispatch):
        args = ", ".join(expr_text(a, 0) for a in e.args)
        if e.receiver is None:
            return f"{e.method}({args})"
        recv = expr_text(e.receiver, _DISPATCH)
        at = f"@{e.static_type}" if e.static_type is not None else ""
        return f"{recv}{at}.{e.method}({args})"
    if isinstance(e, If):
        return (
            f"if {expr_text(e.condition, 0)} then {expr_text(e.then_branch, 0)}"
            f" else {expr_text(e.else_branch, 0)} fi"
        )
    if isinstance(e, While):
        return f"while {expr_text(e.condition, 0)} loop {expr_text(e.body, 0)} pool"
    if isinstance(e, Block):
        inner = " ".join(f"{expr_text(x, 0)};" for x in e.body)
        return f"{{ {inner} }}"
    if isinstance(e, Let):
        parts = []
        for b in e.bindings:
            head = f"{b.name} : {b.declared_type}"
            parts.append(head if b.init is None else f"{head} <- {expr_text(b.init, _ASSIGN)}")
        return f"let {', '.join(parts)} in {expr_text(e.body, 0)}"
    if isinstance(e, Case):
        branches = " ".join(
            f"{b.name} : {b.declared_type} => {expr_text(b.body, 0)};" for b in e.branches
        )
        return f"case {expr_text(e.scrutinee, 0)} of {branches} esac"
    if isinstance(e, New):
        return f"new {e.type_name}"
    if isinstance(e, IsVoid):
        return f"isvoid {expr_text(e.operand, _ISVOID)}"
    if isinstance(e, Neg):
        return f"~{expr_text(e.operand, _NEG)}"
    if isinstance(e, Not):
        return f"not {expr_text(e.operand, _NOT)}"
    if isinstance(e, BinOp):
        lvl = _BINOP_LEVEL[e.op]
        # Comparisons do not associate, so both sides must bind tighter;
        # arithmetic is left-associative.
        left_min = lvl if lvl != _COMPARE else lvl + 1
        return f"{expr_text(e.left, left_min)} {e.op} {expr_text(e.right, lvl + 1)}"
    if isinstance(e, Identifier):
        return e.name
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, StringConst):
        return f'"{escape_string(e.value)}"'
    if isinstance(e, BoolConst):
        return "true" if e.value else "false"
    raise TypeError(f"unknown expression node {type(e).__name__}")


def pretty_print(program: Program) -> str:
    """Deterministic source text that re-parses to a structurally equal AST."""
    lines: list[str] = []
    for cls in program.classes:
        inherits = f" inherits {cls.parent}" if cls.parent is not None else ""
        lines.append(f"class {cls.name}{inherits} {{")
        for feat in cls.features:
            if isinstance(feat, Method):
                formals = ", ".join(f"{f.name} : {f.declared_type}" for f in feat.formals)
                body = expr_text(feat.body, 0)
                lines.append(f"  {feat.name}({formals}) : {feat.return_type} {{ {body} }};")
            else:
                assert isinstance(feat, Attribute)
                init = "" if feat.init is None else f" <- {expr_text(feat.init, 0)}"
                lines.append(f"  {feat.name} : {feat.declared_type}{init};")
        lines.append("};")
    return "\n".join(lines) + "\n"


def _describe(node: Node) -> str:
    if isinstance(node, Program):
        return "Program"
    if isinstance(node, ClassDecl):
        base = f"ClassDecl {node.name}"
        return base if node.parent is None else f"{base} inherits {node.parent}"
    if isinstance(node, Method):
        return f"Method {node.name} : {node.return_type}"
    if isinstance(node, Attribute):
        return f"Attribute {node.name} : {node.declared_type}"
    if isinstance(node, Formal):
        return f"Formal {node.name} : {node.declared_type}"
    if isinstance(node, LetBinding):
        return f"LetBinding {node.name} : {node.declared_type}"
    if isinstance(node, CaseBranch):
        return f"CaseBranch {node.name} : {node.declared_type}"
    if isinstance(node, Assign):
        return f"Assign {node.name}"
    if isinstance(node, Dispatch):
        target = node.method if node.static_type is None else f"@{node.static_type}.{node.method}"
        return f"Dispatch {target}"
    if isinstance(node, BinOp):
        return f"BinOp {node.op}"
    if isinstance(node, New):
        return f"New {node.type_name}"
    if isinstance(node, Identifier):
        return f"Identifier {node.name}"
    if isinstance(node, IntConst):
        return f"IntConst {node.value}"
    if isinstance(node, StringConst):
        return f'StringConst "{escape_string(node.value)}"'
    if isinstance(node, BoolConst):
        return f"BoolConst {'true' if node.value else 'false'}"
    return type(node).__name__


def dump_ast(node: Node, depth: int = 0) -> str:
    """Indented tree dump, two spaces per depth, one ``kind [line]`` per node."""
    head = "  " * depth + _describe(node)
    if node.span is not None:
        head += f" [{node.span.line}]"
    parts = [head]
    parts.extend(dump_ast(child, depth + 1) for child in child_nodes(node))
    return "\n".join(parts)
