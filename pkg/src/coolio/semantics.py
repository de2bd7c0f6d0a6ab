"""Class table construction and type checking for COOL.

build_class_table validates the inheritance graph (tree rooted at Object,
built-ins protected, cycles diagnosed and excluded from further checking);
typecheck fills every expression's inferred_type, using Object as the
recovery type after an error so later checks still run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Diagnostic, Phase
from .syntax import (
    Assign,
    Attribute,
    BinOp,
    Block,
    BoolConst,
    Case,
    ClassDecl,
    Dispatch,
    Expr,
    Identifier,
    If,
    IntConst,
    IsVoid,
    Let,
    Method,
    Neg,
    New,
    Not,
    Paren,
    Program,
    StringConst,
    While,
)

SELF_TYPE = "SELF_TYPE"
OBJECT = "Object"

# Classes that may be neither redefined nor inherited from.
UNINHERITABLE = ("Int", "String", "Bool")
BUILTIN_CLASSES = ("Object", "IO", "Int", "String", "Bool")


class UndefinedTypeError(ValueError):
    """Raised when conforms/join is asked about a type not in the table."""


@dataclass
class MethodSig:
    name: str
    formal_names: tuple[str, ...]
    formal_types: tuple[str, ...]
    return_type: str
    defined_in: str
    body: Expr | None = None  # None for built-in methods
    line: int = 0

    @property
    def arity(self) -> int:
        return len(self.formal_types)


@dataclass
class AttrInfo:
    name: str
    declared_type: str
    init: Expr | None
    defined_in: str
    line: int = 0


@dataclass
class ClassInfo:
    name: str
    parent: str | None  # None only for Object
    attributes: dict[str, AttrInfo] = field(default_factory=dict)
    methods: dict[str, MethodSig] = field(default_factory=dict)
    line: int = 0


class ClassTable:
    """Immutable-after-build map of class name to ClassInfo."""

    def __init__(self) -> None:
        self.classes: dict[str, ClassInfo] = {}
        # Classes excluded from type checking because their inheritance
        # chain contained a cycle.
        self.cycle_members: set[str] = set()

    def __contains__(self, name: str) -> bool:
        return name in self.classes

    def info(self, name: str) -> ClassInfo:
        return self.classes[name]

    def ancestry(self, name: str) -> list[str]:
        """``name`` followed by its ancestors up to and including Object."""
        chain = []
        cur: str | None = name
        while cur is not None:
            chain.append(cur)
            cur = self.classes[cur].parent
        return chain

    def find_method(self, class_name: str, method: str) -> MethodSig | None:
        for cls in self.ancestry(class_name):
            sig = self.classes[cls].methods.get(method)
            if sig is not None:
                return sig
        return None

    def find_attribute(self, class_name: str, attr: str) -> AttrInfo | None:
        for cls in self.ancestry(class_name):
            info = self.classes[cls].attributes.get(attr)
            if info is not None:
                return info
        return None

    def all_attributes(self, class_name: str) -> list[AttrInfo]:
        """Every attribute of the class, ancestors first, declaration order."""
        out: list[AttrInfo] = []
        for cls in reversed(self.ancestry(class_name)):
            out.extend(self.classes[cls].attributes.values())
        return out

    def user_classes(self) -> list[str]:
        return [name for name in self.classes if name not in BUILTIN_CLASSES]


def _builtin_table() -> ClassTable:
    table = ClassTable()

    def cls(name: str, parent: str | None, *methods: MethodSig) -> None:
        table.classes[name] = ClassInfo(name, parent, {}, {m.name: m for m in methods})

    def sig(name: str, owner: str, formals: tuple[tuple[str, str], ...], ret: str) -> MethodSig:
        fnames = tuple(f[0] for f in formals)
        ftypes = tuple(f[1] for f in formals)
        return MethodSig(name, fnames, ftypes, ret, owner)

    cls(
        "Object",
        None,
        sig("abort", "Object", (), "Object"),
        sig("type_name", "Object", (), "String"),
        sig("copy", "Object", (), SELF_TYPE),
    )
    cls(
        "IO",
        "Object",
        sig("out_string", "IO", (("x", "String"),), SELF_TYPE),
        sig("out_int", "IO", (("x", "Int"),), SELF_TYPE),
        sig("in_string", "IO", (), "String"),
        sig("in_int", "IO", (), "Int"),
    )
    cls("Int", "Object")
    cls(
        "String",
        "Object",
        sig("length", "String", (), "Int"),
        sig("concat", "String", (("s", "String"),), "String"),
        sig("substr", "String", (("i", "Int"), ("l", "Int")), "String"),
    )
    cls("Bool", "Object")
    return table


def build_class_table(program: Program) -> tuple[ClassTable, list[Diagnostic]]:
    """Register user classes over the built-ins and validate the graph."""
    table = _builtin_table()
    diags: list[Diagnostic] = []

    def err(line: int, message: str) -> None:
        diags.append(Diagnostic(Phase.TYPECHECKING, max(line, 1), message))

    declared: list[ClassDecl] = []
    for decl in program.classes:
        if decl.name == SELF_TYPE:
            continue  # already a parsing diagnostic
        if decl.name in BUILTIN_CLASSES:
            err(decl.line, f"redefinition of built-in class {decl.name}")
            continue
        if decl.name in table:
            err(decl.line, f"redefinition of class {decl.name}")
            continue
        table.classes[decl.name] = ClassInfo(decl.name, decl.parent or OBJECT, line=decl.line)
        declared.append(decl)

    # Parent validation; broken parents are rewired to Object so that the
    # rest of the program can still be checked.
    for decl in declared:
        info = table.classes[decl.name]
        parent = info.parent
        if parent == SELF_TYPE:
            err(decl.line, f"class {decl.name} may not inherit from SELF_TYPE")
            info.parent = OBJECT
        elif parent in UNINHERITABLE:
            err(decl.line, f"class {decl.name} may not inherit from {parent}")
            info.parent = OBJECT
        elif parent not in table:
            err(decl.line, f"parent class {parent} of class {decl.name} is undefined")
            info.parent = OBJECT

    _detect_cycles(table, diags)
    for decl in declared:
        _register_features(table, decl, diags)
    _check_overrides(table, declared, diags)

    if program.classes:
        main = table.classes.get("Main")
        if main is None:
            err(1, "class Main not found")
        else:
            sig = table.find_method("Main", "main")
            if sig is None or sig.arity != 0:
                err(main.line, "class Main has no zero-argument method main")
    return table, diags


def _detect_cycles(table: ClassTable, diags: list[Diagnostic]) -> None:
    state: dict[str, str] = {name: "done" for name in BUILTIN_CLASSES}
    for start in table.user_classes():
        if state.get(start) == "done":
            continue
        chain: list[str] = []
        cur: str | None = start
        while cur is not None and state.get(cur) is None:
            state[cur] = "visiting"
            chain.append(cur)
            cur = table.classes[cur].parent
        if cur is not None and state.get(cur) == "visiting":
            # Everything from the first revisited node onward is on the cycle.
            for member in chain[chain.index(cur) :]:
                table.cycle_members.add(member)
                diags.append(
                    Diagnostic(
                        Phase.TYPECHECKING,
                        max(table.classes[member].line, 1),
                        f"inheritance cycle involving class {member}",
                    )
                )
                # Break the cycle so ancestry() terminates for everyone.
                table.classes[member].parent = OBJECT
        for member in chain:
            state[member] = "done"


def _register_features(table: ClassTable, decl: ClassDecl, diags: list[Diagnostic]) -> None:
    info = table.classes[decl.name]

    def err(line: int, message: str) -> None:
        diags.append(Diagnostic(Phase.TYPECHECKING, max(line, 1), message))

    for feat in decl.features:
        if isinstance(feat, Method):
            if feat.name in info.methods:
                err(feat.line, f"method {feat.name} redefined in class {decl.name}")
                continue
            seen: set[str] = set()
            for formal in feat.formals:
                if formal.name == "self":
                    err(formal.line, "a formal parameter may not be named self")
                elif formal.name in seen:
                    err(formal.line, f"formal parameter {formal.name} redefined in method {feat.name}")
                seen.add(formal.name)
            info.methods[feat.name] = MethodSig(
                feat.name,
                tuple(f.name for f in feat.formals),
                tuple(f.declared_type for f in feat.formals),
                feat.return_type,
                decl.name,
                body=feat.body,
                line=feat.line,
            )
        else:
            assert isinstance(feat, Attribute)
            if feat.name == "self":
                err(feat.line, "an attribute may not be named self")
                continue
            if feat.name in info.attributes:
                err(feat.line, f"attribute {feat.name} redefined in class {decl.name}")
                continue
            info.attributes[feat.name] = AttrInfo(
                feat.name, feat.declared_type, feat.init, decl.name, line=feat.line
            )


def _check_overrides(table: ClassTable, declared: list[ClassDecl], diags: list[Diagnostic]) -> None:
    for decl in declared:
        if decl.name in table.cycle_members:
            continue
        info = table.classes[decl.name]
        parent = info.parent
        for sig in info.methods.values():
            inherited = table.find_method(parent, sig.name) if parent else None
            if inherited is not None and (
                inherited.formal_types != sig.formal_types
                or inherited.return_type != sig.return_type
            ):
                diags.append(
                    Diagnostic(
                        Phase.TYPECHECKING,
                        max(sig.line, 1),
                        f"method {sig.name} of class {decl.name} overrides an inherited"
                        " method with a different signature",
                    )
                )
        for attr in info.attributes.values():
            if parent and table.find_attribute(parent, attr.name) is not None:
                diags.append(
                    Diagnostic(
                        Phase.TYPECHECKING,
                        max(attr.line, 1),
                        f"attribute {attr.name} of class {decl.name} is already defined"
                        " in an ancestor",
                    )
                )


def conforms(table: ClassTable, t1: str, t2: str, current_class: str) -> bool:
    """True iff t1 is t2 or a descendant, with SELF_TYPE resolved against
    current_class on the left only."""
    if t2 == SELF_TYPE:
        return t1 == SELF_TYPE
    if t1 == SELF_TYPE:
        t1 = current_class
    for name in (t1, t2, current_class):
        if name != SELF_TYPE and name not in table:
            raise UndefinedTypeError(name)
    return t2 in table.ancestry(t1)


def join(table: ClassTable, t1: str, t2: str, current_class: str) -> str:
    """Least common ancestor of t1 and t2 in the inheritance tree."""
    if t1 == SELF_TYPE and t2 == SELF_TYPE:
        return SELF_TYPE
    if t1 == SELF_TYPE:
        t1 = current_class
    if t2 == SELF_TYPE:
        t2 = current_class
    for name in (t1, t2):
        if name not in table:
            raise UndefinedTypeError(name)
    above_t1 = set(table.ancestry(t1))
    for name in table.ancestry(t2):
        if name in above_t1:
            return name
    return OBJECT


class _Scopes:
    """Lexical stack of id -> static type."""

    def __init__(self) -> None:
        self.frames: list[dict[str, str]] = []

    def push(self) -> None:
        self.frames.append({})

    def pop(self) -> None:
        self.frames.pop()

    def bind(self, name: str, type_name: str) -> None:
        self.frames[-1][name] = type_name

    def lookup(self, name: str) -> str | None:
        for frame in reversed(self.frames):
            if name in frame:
                return frame[name]
        return None


def typecheck(table: ClassTable, program: Program) -> tuple[Program, list[Diagnostic]]:
    """Fill every expression's inferred_type; return the diagnostics found."""
    checker = _Checker(table)
    checked: set[str] = set()
    for decl in program.classes:
        if decl.name in BUILTIN_CLASSES or decl.name == SELF_TYPE:
            continue
        if decl.name not in table or decl.name in table.cycle_members:
            continue
        if decl.name in checked:
            continue  # duplicate declaration; only the registered one is checked
        checked.add(decl.name)
        checker.check_class(decl)
    return program, checker.diags


class _Checker:
    def __init__(self, table: ClassTable) -> None:
        self.table = table
        self.diags: list[Diagnostic] = []
        self.current_class = OBJECT
        self.scopes = _Scopes()

    def _err(self, node, message: str) -> None:
        self.diags.append(Diagnostic(Phase.TYPECHECKING, max(node.line, 1), message))

    def _defined(self, type_name: str) -> bool:
        return type_name == SELF_TYPE or type_name in self.table

    def _conforms(self, t1: str, t2: str) -> bool:
        return conforms(self.table, t1, t2, self.current_class)

    def _join(self, t1: str, t2: str) -> str:
        return join(self.table, t1, t2, self.current_class)

    def _resolve(self, type_name: str) -> str:
        return self.current_class if type_name == SELF_TYPE else type_name

    # -- declarations ------------------------------------------------------

    def check_class(self, decl: ClassDecl) -> None:
        self.current_class = decl.name
        self.scopes = _Scopes()
        self.scopes.push()
        for attr in self.table.all_attributes(decl.name):
            declared = attr.declared_type if self._defined(attr.declared_type) else OBJECT
            self.scopes.bind(attr.name, declared)
        for feat in decl.features:
            if isinstance(feat, Method):
                self._check_method(feat)
            elif isinstance(feat, Attribute):
                self._check_attribute(feat)
        self.scopes.pop()

    def _check_attribute(self, attr: Attribute) -> None:
        declared = attr.declared_type
        if not self._defined(declared):
            self._err(attr, f"undefined type {declared}")
            declared = OBJECT
        if attr.init is not None:
            got = self.infer(attr.init)
            if not self._conforms(got, declared):
                self._err(attr.init, f"{got} does not conform to {declared}")

    def _check_method(self, method: Method) -> None:
        self.scopes.push()
        for formal in method.formals:
            ftype = formal.declared_type
            if ftype == SELF_TYPE:
                self._err(formal, "a formal parameter may not have type SELF_TYPE")
                ftype = OBJECT
            elif not self._defined(ftype):
                self._err(formal, f"undefined type {ftype}")
                ftype = OBJECT
            if formal.name != "self":
                self.scopes.bind(formal.name, ftype)
        declared = method.return_type
        if not self._defined(declared):
            self._err(method, f"undefined type {declared}")
            declared = OBJECT
        got = self.infer(method.body)
        if not self._conforms(got, declared):
            self._err(
                method,
                f"body type {got} of method {method.name} does not conform to"
                f" declared return type {declared}",
            )
        self.scopes.pop()

    # -- expressions ---------------------------------------------------------

    def infer(self, e: Expr) -> str:
        t = self._infer(e)
        if not self._defined(t):
            t = OBJECT
        e.inferred_type = t
        return t

    def _infer(self, e: Expr) -> str:
        if isinstance(e, IntConst):
            return "Int"
        if isinstance(e, StringConst):
            return "String"
        if isinstance(e, BoolConst):
            return "Bool"
        if isinstance(e, Identifier):
            if e.name == "self":
                return SELF_TYPE
            bound = self.scopes.lookup(e.name)
            if bound is None:
                self._err(e, f"undefined identifier {e.name}")
                return OBJECT
            return bound
        if isinstance(e, Paren):
            return self.infer(e.inner)
        if isinstance(e, Assign):
            value_type = self.infer(e.value)
            if e.name == "self":
                self._err(e, "cannot assign to self")
                return value_type
            declared = self.scopes.lookup(e.name)
            if declared is None:
                self._err(e, f"undefined identifier {e.name}")
                return value_type
            if not self._conforms(value_type, declared):
                self._err(e, f"{value_type} does not conform to {declared}")
            return value_type
        if isinstance(e, BinOp):
            left = self.infer(e.left)
            right = self.infer(e.right)
            if e.op == "=":
                basics = ("Int", "String", "Bool")
                if (left in basics or right in basics) and left != right:
                    self._err(e, "illegal comparison with a basic type")
                return "Bool"
            if left != "Int":
                self._err(e.left, f"left operand of {e.op} is not Int")
            if right != "Int":
                self._err(e.right, f"right operand of {e.op} is not Int")
            return "Bool" if e.op in ("<", "<=") else "Int"
        if isinstance(e, Neg):
            if self.infer(e.operand) != "Int":
                self._err(e, "operand of ~ is not Int")
            return "Int"
        if isinstance(e, Not):
            if self.infer(e.operand) != "Bool":
                self._err(e, "operand of not is not Bool")
            return "Bool"
        if isinstance(e, IsVoid):
            self.infer(e.operand)
            return "Bool"
        if isinstance(e, If):
            if self.infer(e.condition) != "Bool":
                self._err(e.condition, "if condition is not Bool")
            then_type = self.infer(e.then_branch)
            else_type = self.infer(e.else_branch)
            return self._join(then_type, else_type)
        if isinstance(e, While):
            if self.infer(e.condition) != "Bool":
                self._err(e.condition, "while condition is not Bool")
            self.infer(e.body)
            return OBJECT
        if isinstance(e, Block):
            result = OBJECT
            for sub in e.body:
                result = self.infer(sub)
            return result
        if isinstance(e, Let):
            pushed = 0
            for binding in e.bindings:
                declared = binding.declared_type
                if not self._defined(declared):
                    self._err(binding, f"undefined type {declared}")
                    declared = OBJECT
                if binding.init is not None:
                    got = self.infer(binding.init)
                    if not self._conforms(got, declared):
                        self._err(binding, f"{got} does not conform to {declared}")
                if binding.name == "self":
                    self._err(binding, "a let variable may not be named self")
                else:
                    self.scopes.push()
                    pushed += 1
                    self.scopes.bind(binding.name, declared)
            result = self.infer(e.body)
            for _ in range(pushed):
                self.scopes.pop()
            return result
        if isinstance(e, Case):
            self.infer(e.scrutinee)
            result: str | None = None
            seen_types: set[str] = set()
            for branch in e.branches:
                declared = branch.declared_type
                if declared == SELF_TYPE:
                    self._err(branch, "a case branch may not have type SELF_TYPE")
                    declared = OBJECT
                elif not self._defined(declared):
                    self._err(branch, f"undefined type {declared}")
                    declared = OBJECT
                if declared in seen_types:
                    self._err(branch, f"duplicate branch type {declared} in case")
                seen_types.add(declared)
                if branch.name == "self":
                    self._err(branch, "a case branch variable may not be named self")
                    branch_type = self.infer(branch.body)
                else:
                    self.scopes.push()
                    self.scopes.bind(branch.name, declared)
                    branch_type = self.infer(branch.body)
                    self.scopes.pop()
                result = branch_type if result is None else self._join(result, branch_type)
            return result if result is not None else OBJECT
        if isinstance(e, New):
            if not self._defined(e.type_name):
                self._err(e, f"undefined type {e.type_name}")
                return OBJECT
            return e.type_name
        if isinstance(e, Dispatch):
            return self._infer_dispatch(e)
        raise TypeError(f"unknown expression node {type(e).__name__}")

    def _infer_dispatch(self, e: Dispatch) -> str:
        if e.receiver is None:
            receiver_type = SELF_TYPE
        else:
            receiver_type = self.infer(e.receiver)
        arg_types = [self.infer(a) for a in e.args]

        lookup_class = self._resolve(receiver_type)
        if e.static_type is not None:
            if e.static_type == SELF_TYPE:
                self._err(e, "static dispatch type may not be SELF_TYPE")
                return OBJECT
            if not self._defined(e.static_type):
                self._err(e, f"undefined type {e.static_type}")
                return OBJECT
            if not self._conforms(receiver_type, e.static_type):
                self._err(
                    e,
                    f"expression of type {receiver_type} does not conform to"
                    f" static dispatch type {e.static_type}",
                )
            lookup_class = e.static_type

        sig = self.table.find_method(lookup_class, e.method)
        if sig is None:
            self._err(e, f"undefined method {e.method} in class {lookup_class}")
            return OBJECT
        if len(arg_types) != sig.arity:
            self._err(
                e,
                f"method {e.method} called with {len(arg_types)} arguments"
                f" but declared with {sig.arity}",
            )
        else:
            for i, (got, want) in enumerate(zip(arg_types, sig.formal_types), start=1):
                if not self._conforms(got, want):
                    self._err(
                        e.args[i - 1],
                        f"{got} does not conform to {want} in argument {i}"
                        f" of method {e.method}",
                    )
        if sig.return_type == SELF_TYPE:
            return receiver_type
        return sig.return_type
