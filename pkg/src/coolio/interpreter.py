"""Tree-walking evaluator for type-checked COOL programs.

Big-step semantics: strict left-to-right evaluation, receiver before
arguments, 32-bit two's-complement integer arithmetic with truncating
division. Runtime failures (dispatch on void, case on void, no matching
case branch, division by zero, substr out of range) become evaluation-phase
diagnostics carrying the line of the failing expression.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

from .diagnostics import Diagnostic, Phase
from .semantics import SELF_TYPE, ClassTable, MethodSig
from .syntax import (
    Assign,
    BinOp,
    Block,
    BoolConst,
    Case,
    Dispatch,
    Expr,
    Identifier,
    If,
    IntConst,
    IsVoid,
    Let,
    Neg,
    New,
    Not,
    Paren,
    Program,
    StringConst,
    While,
)

INT_BITS = 32
_INT_MOD = 1 << INT_BITS
_INT_MIN = -(1 << (INT_BITS - 1))

BASIC_DYNAMIC = {"Int", "String", "Bool"}


def wrap32(value: int) -> int:
    """Reduce to the signed 32-bit range with two's-complement wraparound."""
    return (value - _INT_MIN) % _INT_MOD + _INT_MIN


class Value:
    pass


@dataclass(frozen=True)
class IntV(Value):
    i: int  # always within the signed 32-bit range


@dataclass(frozen=True)
class StringV(Value):
    text: str


@dataclass(frozen=True)
class BoolV(Value):
    b: bool


@dataclass(frozen=True)
class VoidV(Value):
    pass


VOID = VoidV()
TRUE = BoolV(True)
FALSE = BoolV(False)


@dataclass(eq=False)
class ObjectV(Value):
    class_name: str
    attrs: dict[str, int]  # attribute name -> store location


class Store:
    """Location -> Value heap. Locations are opaque integers."""

    def __init__(self) -> None:
        self.cells: dict[int, Value] = {}
        self._next = 0

    def alloc(self, value: Value) -> int:
        loc = self._next
        self._next += 1
        self.cells[loc] = value
        return loc

    def read(self, loc: int) -> Value:
        return self.cells[loc]

    def write(self, loc: int, value: Value) -> None:
        if loc not in self.cells:
            raise KeyError(loc)
        self.cells[loc] = value


class _Frames:
    """Lexical environment: stack of id -> location maps."""

    def __init__(self) -> None:
        self.frames: list[dict[str, int]] = []

    def push(self, bindings: dict[str, int] | None = None) -> None:
        self.frames.append(bindings or {})

    def pop(self) -> None:
        self.frames.pop()

    def lookup(self, name: str) -> int | None:
        for frame in reversed(self.frames):
            if name in frame:
                return frame[name]
        return None


class CoolRuntimeError(Exception):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(message)
        self.diagnostic = Diagnostic(Phase.EVALUATION, max(line, 1), message)


class _Abort(Exception):
    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


@dataclass
class RunResult:
    output: str
    error: Diagnostic | None = None
    abort_message: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.abort_message is None


def dynamic_class(value: Value) -> str:
    if isinstance(value, IntV):
        return "Int"
    if isinstance(value, StringV):
        return "String"
    if isinstance(value, BoolV):
        return "Bool"
    if isinstance(value, ObjectV):
        return value.class_name
    raise TypeError("void has no dynamic class")


def default_value(declared_type: str) -> Value:
    if declared_type == "Int":
        return IntV(0)
    if declared_type == "String":
        return StringV("")
    if declared_type == "Bool":
        return FALSE
    return VOID


def values_equal(a: Value, b: Value) -> bool:
    if isinstance(a, ObjectV) or isinstance(b, ObjectV):
        return a is b
    # Int/String/Bool compare by value; void equals only void. Mismatched
    # kinds are simply unequal.
    return a == b


class Interpreter:
    def __init__(
        self,
        table: ClassTable,
        stdin: io.TextIOBase | None = None,
        stdout: io.TextIOBase | None = None,
        fuel: int | None = None,
    ) -> None:
        self.table = table
        self.stdin = stdin if stdin is not None else io.StringIO("")
        self.stdout = stdout if stdout is not None else io.StringIO()
        self.store = Store()
        self.fuel = fuel

    # -- object construction -------------------------------------------------

    def instantiate(self, class_name: str) -> Value:
        if class_name in BASIC_DYNAMIC:
            return default_value(class_name)
        obj = ObjectV(class_name, {})
        attrs = self.table.all_attributes(class_name)
        for attr in attrs:
            obj.attrs[attr.name] = self.store.alloc(default_value(attr.declared_type))
        env = _Frames()
        for attr in attrs:
            if attr.init is not None:
                value = self.eval_expr(attr.init, obj, env)
                self.store.write(obj.attrs[attr.name], value)
        return obj

    # -- evaluation -----------------------------------------------------------

    def eval_expr(self, e: Expr, self_val: Value, env: _Frames) -> Value:
        if self.fuel is not None:
            if self.fuel <= 0:
                raise CoolRuntimeError(e.line, "fuel exhausted")
            self.fuel -= 1

        if isinstance(e, IntConst):
            return IntV(wrap32(e.value))
        if isinstance(e, StringConst):
            return StringV(e.value)
        if isinstance(e, BoolConst):
            return TRUE if e.value else FALSE
        if isinstance(e, Identifier):
            return self._read_var(e, self_val, env)
        if isinstance(e, Paren):
            return self.eval_expr(e.inner, self_val, env)
        if isinstance(e, Assign):
            value = self.eval_expr(e.value, self_val, env)
            self._write_var(e, self_val, env, value)
            return value
        if isinstance(e, BinOp):
            return self._eval_binop(e, self_val, env)
        if isinstance(e, Neg):
            operand = self.eval_expr(e.operand, self_val, env)
            assert isinstance(operand, IntV), "arithmetic on a non-Int value"
            return IntV(wrap32(-operand.i))
        if isinstance(e, Not):
            operand = self.eval_expr(e.operand, self_val, env)
            assert isinstance(operand, BoolV), "'not' on a non-Bool value"
            return BoolV(not operand.b)
        if isinstance(e, IsVoid):
            return BoolV(isinstance(self.eval_expr(e.operand, self_val, env), VoidV))
        if isinstance(e, If):
            cond = self.eval_expr(e.condition, self_val, env)
            assert isinstance(cond, BoolV), "if condition is not a Bool value"
            branch = e.then_branch if cond.b else e.else_branch
            return self.eval_expr(branch, self_val, env)
        if isinstance(e, While):
            while True:
                cond = self.eval_expr(e.condition, self_val, env)
                assert isinstance(cond, BoolV), "while condition is not a Bool value"
                if not cond.b:
                    return VOID
                self.eval_expr(e.body, self_val, env)
        if isinstance(e, Block):
            result: Value = VOID
            for sub in e.body:
                result = self.eval_expr(sub, self_val, env)
            return result
        if isinstance(e, Let):
            pushed = 0
            for binding in e.bindings:
                if binding.init is not None:
                    value = self.eval_expr(binding.init, self_val, env)
                else:
                    value = default_value(binding.declared_type)
                env.push({binding.name: self.store.alloc(value)})
                pushed += 1
            result = self.eval_expr(e.body, self_val, env)
            for _ in range(pushed):
                env.pop()
            return result
        if isinstance(e, Case):
            return self._eval_case(e, self_val, env)
        if isinstance(e, New):
            name = e.type_name
            if name == SELF_TYPE:
                name = dynamic_class(self_val)
            return self.instantiate(name)
        if isinstance(e, Dispatch):
            return self._eval_dispatch(e, self_val, env)
        raise TypeError(f"unknown expression node {type(e).__name__}")

    def _read_var(self, e: Identifier, self_val: Value, env: _Frames) -> Value:
        if e.name == "self":
            return self_val
        loc = env.lookup(e.name)
        if loc is None and isinstance(self_val, ObjectV):
            loc = self_val.attrs.get(e.name)
        assert loc is not None, f"unbound identifier {e.name} at runtime"
        return self.store.read(loc)

    def _write_var(self, e: Assign, self_val: Value, env: _Frames, value: Value) -> None:
        loc = env.lookup(e.name)
        if loc is None and isinstance(self_val, ObjectV):
            loc = self_val.attrs.get(e.name)
        assert loc is not None, f"unbound identifier {e.name} at runtime"
        self.store.write(loc, value)

    def _eval_binop(self, e: BinOp, self_val: Value, env: _Frames) -> Value:
        left = self.eval_expr(e.left, self_val, env)
        right = self.eval_expr(e.right, self_val, env)
        if e.op == "=":
            return BoolV(values_equal(left, right))
        assert isinstance(left, IntV), "arithmetic on a non-Int value"
        assert isinstance(right, IntV), "arithmetic on a non-Int value"
        a, b = left.i, right.i
        if e.op == "+":
            return IntV(wrap32(a + b))
        if e.op == "-":
            return IntV(wrap32(a - b))
        if e.op == "*":
            return IntV(wrap32(a * b))
        if e.op == "/":
            if b == 0:
                raise CoolRuntimeError(e.line, "division by zero")
            # Truncating division, like the reference compilers.
            q = abs(a) // abs(b)
            if (a < 0) != (b < 0):
                q = -q
            return IntV(wrap32(q))
        if e.op == "<":
            return BoolV(a < b)
        if e.op == "<=":
            return BoolV(a <= b)
        raise TypeError(f"unknown operator {e.op}")

    def _eval_case(self, e: Case, self_val: Value, env: _Frames) -> Value:
        scrutinee = self.eval_expr(e.scrutinee, self_val, env)
        if isinstance(scrutinee, VoidV):
            raise CoolRuntimeError(e.line, "case on void")
        # Closest declared ancestor of the dynamic class wins.
        for cls in self.table.ancestry(dynamic_class(scrutinee)):
            for branch in e.branches:
                if branch.declared_type == cls:
                    env.push({branch.name: self.store.alloc(scrutinee)})
                    result = self.eval_expr(branch.body, self_val, env)
                    env.pop()
                    return result
        raise CoolRuntimeError(e.line, "no matching case branch")

    def _eval_dispatch(self, e: Dispatch, self_val: Value, env: _Frames) -> Value:
        receiver = self_val if e.receiver is None else self.eval_expr(e.receiver, self_val, env)
        args = [self.eval_expr(a, self_val, env) for a in e.args]
        if isinstance(receiver, VoidV):
            raise CoolRuntimeError(e.line, "dispatch on void")
        lookup_class = e.static_type if e.static_type is not None else dynamic_class(receiver)
        sig = self.table.find_method(lookup_class, e.method)
        assert sig is not None, f"method {e.method} missing at runtime"
        return self.call(sig, receiver, args, e.line)

    def call(self, sig: MethodSig, receiver: Value, args: list[Value], line: int) -> Value:
        if sig.body is None:
            return self._builtin(sig, receiver, args, line)
        frame = {
            name: self.store.alloc(value) for name, value in zip(sig.formal_names, args)
        }
        env = _Frames()
        env.push(frame)
        return self.eval_expr(sig.body, receiver, env)

    # -- built-in methods -------------------------------------------------

    def _builtin(self, sig: MethodSig, receiver: Value, args: list[Value], line: int) -> Value:
        key = (sig.defined_in, sig.name)
        if key == ("Object", "abort"):
            raise _Abort(f"abort called from class {dynamic_class(receiver)}")
        if key == ("Object", "type_name"):
            return StringV(dynamic_class(receiver))
        if key == ("Object", "copy"):
            if isinstance(receiver, ObjectV):
                attrs = {
                    name: self.store.alloc(self.store.read(loc))
                    for name, loc in receiver.attrs.items()
                }
                return ObjectV(receiver.class_name, attrs)
            return receiver
        if key == ("IO", "out_string"):
            assert isinstance(args[0], StringV)
            self.stdout.write(args[0].text)
            return receiver
        if key == ("IO", "out_int"):
            assert isinstance(args[0], IntV)
            self.stdout.write(str(args[0].i))
            return receiver
        if key == ("IO", "in_string"):
            text = self.stdin.readline()
            return StringV(text[:-1] if text.endswith("\n") else text)
        if key == ("IO", "in_int"):
            text = self.stdin.readline().strip()
            try:
                return IntV(wrap32(int(text)))
            except ValueError:
                return IntV(0)
        if key == ("String", "length"):
            assert isinstance(receiver, StringV)
            return IntV(len(receiver.text))
        if key == ("String", "concat"):
            assert isinstance(receiver, StringV) and isinstance(args[0], StringV)
            return StringV(receiver.text + args[0].text)
        if key == ("String", "substr"):
            assert isinstance(receiver, StringV)
            assert isinstance(args[0], IntV) and isinstance(args[1], IntV)
            start, length = args[0].i, args[1].i
            if start < 0 or length < 0 or start + length > len(receiver.text):
                raise CoolRuntimeError(line, "substr out of range")
            return StringV(receiver.text[start : start + length])
        raise TypeError(f"unknown built-in method {sig.defined_in}.{sig.name}")


def eval_expr(expr: Expr, table: ClassTable, fuel: int | None = None) -> Value:
    """Evaluate a closed expression with a fresh Object-typed self."""
    interp = Interpreter(table, fuel=fuel)
    return interp.eval_expr(expr, interp.instantiate("Object"), _Frames())


def run_program(
    program: Program,
    table: ClassTable,
    stdin: io.TextIOBase | None = None,
    stdout: io.TextIOBase | None = None,
    fuel: int | None = None,
) -> RunResult:
    """Instantiate Main and invoke main(); capture output unless a sink is given."""
    sink = stdout if stdout is not None else io.StringIO()
    interp = Interpreter(table, stdin=stdin, stdout=sink, fuel=fuel)

    def captured() -> str:
        return sink.getvalue() if stdout is None else ""

    try:
        main_obj = interp.instantiate("Main")
        sig = table.find_method("Main", "main")
        assert sig is not None, "Main.main missing at runtime"
        line = program.classes[0].line if program.classes else 1
        interp.call(sig, main_obj, [], line)
    except _Abort as abort:
        return RunResult(captured(), abort_message=abort.message)
    except CoolRuntimeError as err:
        return RunResult(captured(), error=err.diagnostic)
    except RecursionError:
        diag = Diagnostic(Phase.EVALUATION, 1, "recursion limit exceeded")
        return RunResult(captured(), error=diag)
    return RunResult(captured())
