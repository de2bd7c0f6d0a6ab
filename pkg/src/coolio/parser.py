"""Recursive-descent parser for COOL.

Builds the AST from a token stream. Parsing is total: syntax errors become
diagnostics and the parser recovers at class boundaries (and at `;` inside a
class body) so that later classes still parse.

Precedence, tightest first: `.`/`@` dispatch, `~`, `isvoid`, `*` `/`,
`+` `-`, `<` `<=` `=` (non-associative), `not`, `<-` (right-associative).
A `let` extends as far right as possible.
"""

from __future__ import annotations

from .diagnostics import Diagnostic, Phase
from .lexer import SourceSpan, Token, TokenKind
from .syntax import (
    Assign,
    Attribute,
    BinOp,
    Block,
    BoolConst,
    Case,
    CaseBranch,
    ClassDecl,
    Dispatch,
    Expr,
    Feature,
    Formal,
    Identifier,
    If,
    IntConst,
    IsVoid,
    Let,
    LetBinding,
    Method,
    Neg,
    New,
    Not,
    Paren,
    Program,
    StringConst,
    While,
)

_COMPARE_OPS = {TokenKind.LT: "<", TokenKind.LE: "<=", TokenKind.EQ: "="}
_ADD_OPS = {TokenKind.PLUS: "+", TokenKind.MINUS: "-"}
_MUL_OPS = {TokenKind.STAR: "*", TokenKind.SLASH: "/"}
_INFIX_OPS = {**_COMPARE_OPS, **_ADD_OPS, **_MUL_OPS}

# Binding powers, loosest to tightest; dispatch postfixes outrank them all.
_ASSIGN_BP = 10
_NOT_BP = 20
_INFIX_BP = {"<": 30, "<=": 30, "=": 30, "+": 40, "-": 40, "*": 50, "/": 50}
_ISVOID_BP = 60
_NEG_BP = 70


class _ParseError(Exception):
    """Internal signal for panic-mode recovery; never escapes parse()."""


def parse(tokens: list[Token]) -> tuple[Program, list[Diagnostic]]:
    """Parse a whole program. Returns the best-effort AST plus diagnostics."""
    p = _Parser(tokens)
    return p.program(), p.diags


def parse_expression(tokens: list[Token]) -> tuple[Expr | None, list[Diagnostic]]:
    """Parse a single expression covering the entire token stream."""
    p = _Parser(tokens)
    try:
        expr = p.expression()
    except _ParseError:
        return None, p.diags
    if p.current.kind is not TokenKind.EOF:
        p.error(p.current, f"unexpected token {p.describe(p.current)} after expression")
        return None, p.diags
    return expr, p.diags


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.toks = tokens
        self.pos = 0
        self.diags: list[Diagnostic] = []

    # -- token plumbing ----------------------------------------------------

    @property
    def current(self) -> Token:
        return self.toks[self.pos]

    @property
    def _next(self) -> Token:
        if self.pos + 1 < len(self.toks):
            return self.toks[self.pos + 1]
        return self.toks[-1]

    def _advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def _check(self, kind: TokenKind) -> bool:
        return self.current.kind is kind

    def _check_kw(self, name: str) -> bool:
        return self.current.is_keyword(name)

    def _match(self, kind: TokenKind) -> Token | None:
        if self._check(kind):
            return self._advance()
        return None

    def _match_kw(self, name: str) -> Token | None:
        if self._check_kw(name):
            return self._advance()
        return None

    @staticmethod
    def describe(tok: Token) -> str:
        if tok.kind is TokenKind.EOF:
            return "end of input"
        return f"'{tok.lexeme}'"

    def error(self, tok: Token, message: str) -> None:
        self.diags.append(Diagnostic(Phase.PARSING, tok.span.line, message))

    def _fail(self, message: str) -> _ParseError:
        self.error(self.current, message)
        return _ParseError()

    def _expect(self, kind: TokenKind, what: str) -> Token:
        tok = self._match(kind)
        if tok is None:
            raise self._fail(f"expected {what}, found {self.describe(self.current)}")
        return tok

    def _expect_kw(self, name: str) -> Token:
        tok = self._match_kw(name)
        if tok is None:
            raise self._fail(f"expected '{name}', found {self.describe(self.current)}")
        return tok

    def _span_from(self, start: SourceSpan) -> SourceSpan:
        end = self.toks[self.pos - 1].span if self.pos > 0 else start
        return SourceSpan(start.start, max(start.end, end.end), start.line, start.column)

    # -- program and classes -----------------------------------------------

    def program(self) -> Program:
        if self._check(TokenKind.EOF):
            self.error(self.current, "program requires at least one class")
            return Program([])
        start = self.current.span
        classes: list[ClassDecl] = []
        while not self._check(TokenKind.EOF):
            if self._check_kw("class"):
                try:
                    classes.append(self._class_decl())
                except _ParseError:
                    self._sync_to_class()
            else:
                self.error(
                    self.current,
                    f"unexpected token {self.describe(self.current)}, expected 'class'",
                )
                self._advance()
                self._sync_to_class()
        return Program(classes, span=self._span_from(start))

    def _sync_to_class(self) -> None:
        while not self._check(TokenKind.EOF) and not self._check_kw("class"):
            self._advance()

    def _class_decl(self) -> ClassDecl:
        start = self.current.span
        self._expect_kw("class")
        name = self._expect(TokenKind.TYPEID, "class name").lexeme
        if name == "SELF_TYPE":
            self.error(self.toks[self.pos - 1], "a class may not be named SELF_TYPE")
        parent = None
        if self._match_kw("inherits"):
            parent = self._expect(TokenKind.TYPEID, "parent class name").lexeme
        self._expect(TokenKind.LBRACE, "'{' to open class body")
        features: list[Feature] = []
        while not self._check(TokenKind.RBRACE) and not self._check(TokenKind.EOF):
            try:
                features.append(self._feature())
            except _ParseError:
                if not self._sync_feature():
                    raise
        self._expect(TokenKind.RBRACE, "'}' to close class body")
        if self._match(TokenKind.SEMI) is None:
            raise self._fail("missing ';' after class")
        return ClassDecl(name, parent, features, span=self._span_from(start))

    def _sync_feature(self) -> bool:
        """Skip to the next feature boundary. False means give up on the class."""
        while not self._check(TokenKind.EOF):
            if self._match(TokenKind.SEMI):
                return True
            if self._check(TokenKind.RBRACE):
                return True
            if self._check_kw("class"):
                return False
            self._advance()
        return False

    def _feature(self) -> Feature:
        start = self.current.span
        name = self._expect(TokenKind.OBJECTID, "feature name").lexeme
        if self._match(TokenKind.LPAREN):
            formals: list[Formal] = []
            if not self._check(TokenKind.RPAREN):
                formals.append(self._formal())
                while self._match(TokenKind.COMMA):
                    formals.append(self._formal())
            self._expect(TokenKind.RPAREN, "')' after formal parameters")
            self._expect(TokenKind.COLON, "':' before return type")
            return_type = self._expect(TokenKind.TYPEID, "return type").lexeme
            self._expect(TokenKind.LBRACE, "'{' to open method body")
            body = self.expression()
            self._expect(TokenKind.RBRACE, "'}' to close method body")
            if self._match(TokenKind.SEMI) is None:
                raise self._fail("missing ';' after feature")
            return Method(name, formals, return_type, body, span=self._span_from(start))
        self._expect(TokenKind.COLON, "':' after attribute name")
        declared = self._expect(TokenKind.TYPEID, "attribute type").lexeme
        init = self.expression() if self._match(TokenKind.ASSIGN) else None
        if self._match(TokenKind.SEMI) is None:
            raise self._fail("missing ';' after feature")
        return Attribute(name, declared, init, span=self._span_from(start))

    def _formal(self) -> Formal:
        start = self.current.span
        name = self._expect(TokenKind.OBJECTID, "formal parameter name").lexeme
        self._expect(TokenKind.COLON, "':' after formal parameter name")
        declared = self._expect(TokenKind.TYPEID, "formal parameter type").lexeme
        return Formal(name, declared, span=self._span_from(start))

    # -- expressions ---------------------------------------------------------
    #
    # Binding-power climbing. A prefix operator may start any operand; its
    # own power bounds how much infix tail it swallows, so `1 + not x = y`
    # is 1 + not (x = y) while `isvoid x * y` is (isvoid x) * y.

    def expression(self) -> Expr:
        return self._expr_bp(0)

    def _expr_bp(self, min_bp: int) -> Expr:
        start = self.current.span
        lhs = self._head()
        while True:
            kind = self.current.kind
            if kind is TokenKind.ASSIGN:
                if _ASSIGN_BP < min_bp:
                    return lhs
                if not isinstance(lhs, Identifier):
                    raise self._fail("left side of <- must be an identifier")
                self._advance()
                # Same power on the right makes assignment right-associative.
                value = self._expr_bp(_ASSIGN_BP)
                lhs = Assign(lhs.name, value, span=self._span_from(start))
                continue
            op = _INFIX_OPS.get(kind)
            if op is None or _INFIX_BP[op] < min_bp:
                return lhs
            self._advance()
            rhs = self._expr_bp(_INFIX_BP[op] + 1)
            lhs = BinOp(op, lhs, rhs, span=self._span_from(start))
            if op in ("<", "<=", "=") and self.current.kind in _COMPARE_OPS:
                raise self._fail("comparison operators do not associate")

    def _head(self) -> Expr:
        tok = self.current
        start = tok.span
        if tok.kind is TokenKind.TILDE:
            self._advance()
            return Neg(self._expr_bp(_NEG_BP), span=self._span_from(start))
        if tok.is_keyword("isvoid"):
            self._advance()
            return IsVoid(self._expr_bp(_ISVOID_BP), span=self._span_from(start))
        if tok.is_keyword("not"):
            self._advance()
            return Not(self._expr_bp(_NOT_BP), span=self._span_from(start))
        return self._postfix_level()

    def _postfix_level(self) -> Expr:
        start = self.current.span
        expr = self._primary()
        while True:
            if self._match(TokenKind.AT):
                static_type = self._expect(TokenKind.TYPEID, "type after '@'").lexeme
                self._expect(TokenKind.DOT, "'.' after static dispatch type")
                method = self._expect(TokenKind.OBJECTID, "method name").lexeme
                args = self._arguments()
                expr = Dispatch(expr, static_type, method, args, span=self._span_from(start))
            elif self._match(TokenKind.DOT):
                method = self._expect(TokenKind.OBJECTID, "method name").lexeme
                args = self._arguments()
                expr = Dispatch(expr, None, method, args, span=self._span_from(start))
            else:
                return expr

    def _arguments(self) -> list[Expr]:
        self._expect(TokenKind.LPAREN, "'(' to open argument list")
        args: list[Expr] = []
        if not self._check(TokenKind.RPAREN):
            args.append(self.expression())
            while self._match(TokenKind.COMMA):
                args.append(self.expression())
        self._expect(TokenKind.RPAREN, "')' to close argument list")
        return args

    def _primary(self) -> Expr:
        tok = self.current
        start = tok.span
        if tok.kind is TokenKind.INT:
            self._advance()
            return IntConst(tok.value, span=start)
        if tok.kind is TokenKind.STRING:
            self._advance()
            return StringConst(tok.value, span=start)
        if tok.is_keyword("true") or tok.is_keyword("false"):
            self._advance()
            return BoolConst(tok.value == "true", span=start)
        if tok.kind is TokenKind.OBJECTID:
            self._advance()
            if self._check(TokenKind.LPAREN):
                args = self._arguments()
                return Dispatch(None, None, tok.lexeme, args, span=self._span_from(start))
            return Identifier(tok.lexeme, span=start)
        if self._match(TokenKind.LPAREN):
            inner = self.expression()
            self._expect(TokenKind.RPAREN, "')' to close parenthesized expression")
            return Paren(inner, span=self._span_from(start))
        if self._match(TokenKind.LBRACE):
            body: list[Expr] = []
            while not self._check(TokenKind.RBRACE):
                if self._check(TokenKind.EOF):
                    raise self._fail("'}' to close block, found end of input")
                body.append(self.expression())
                self._expect(TokenKind.SEMI, "';' after block expression")
            self._advance()  # }
            if not body:
                self.error(tok, "block requires at least one expression")
                raise _ParseError()
            return Block(body, span=self._span_from(start))
        if self._match_kw("if"):
            condition = self.expression()
            self._expect_kw("then")
            then_branch = self.expression()
            self._expect_kw("else")
            else_branch = self.expression()
            self._expect_kw("fi")
            return If(condition, then_branch, else_branch, span=self._span_from(start))
        if self._match_kw("while"):
            condition = self.expression()
            self._expect_kw("loop")
            body_expr = self.expression()
            self._expect_kw("pool")
            return While(condition, body_expr, span=self._span_from(start))
        if self._match_kw("let"):
            bindings = [self._let_binding()]
            while self._match(TokenKind.COMMA):
                bindings.append(self._let_binding())
            self._expect_kw("in")
            return Let(bindings, self.expression(), span=self._span_from(start))
        if self._match_kw("case"):
            scrutinee = self.expression()
            self._expect_kw("of")
            branches: list[CaseBranch] = []
            while not self._check_kw("esac"):
                if self._check(TokenKind.EOF):
                    raise self._fail("'esac' to close case, found end of input")
                branches.append(self._case_branch())
            self._advance()  # esac
            if not branches:
                self.error(tok, "case requires at least one branch")
                raise _ParseError()
            return Case(scrutinee, branches, span=self._span_from(start))
        if self._match_kw("new"):
            type_name = self._expect(TokenKind.TYPEID, "type after 'new'").lexeme
            return New(type_name, span=self._span_from(start))
        raise self._fail(f"unexpected token {self.describe(tok)} in expression")

    def _let_binding(self) -> LetBinding:
        start = self.current.span
        name = self._expect(TokenKind.OBJECTID, "variable name in let binding").lexeme
        self._expect(TokenKind.COLON, "':' in let binding")
        declared = self._expect(TokenKind.TYPEID, "type in let binding").lexeme
        init = self.expression() if self._match(TokenKind.ASSIGN) else None
        return LetBinding(name, declared, init, span=self._span_from(start))

    def _case_branch(self) -> CaseBranch:
        start = self.current.span
        name = self._expect(TokenKind.OBJECTID, "variable name in case branch").lexeme
        self._expect(TokenKind.COLON, "':' in case branch")
        declared = self._expect(TokenKind.TYPEID, "type in case branch").lexeme
        self._expect(TokenKind.DARROW, "'=>' in case branch")
        body = self.expression()
        self._expect(TokenKind.SEMI, "';' after case branch")
        return CaseBranch(name, declared, body, span=self._span_from(start))
