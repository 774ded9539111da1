"""Recursive-descent parser for NoteScript.

Precedence, low to high:
    or < and < not < comparisons < +,- < *,/,% < unary - < call/field/index
"""

from __future__ import annotations

from noteg.errors import ParseError
from noteg.script import nodes as N
from noteg.script.lexer import Token, tokenize

_COMPARISONS = ("==", "!=", "<", "<=", ">", ">=")


class _Parser:
    def __init__(self, tokens: list[Token], cell_id: str):
        self.tokens = tokens
        self.pos = 0
        self.cell_id = cell_id

    # ------------------------------------------------------------------
    # token plumbing
    # ------------------------------------------------------------------
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def check(self, kind: str, text: str | None = None) -> bool:
        token = self.peek()
        return token.kind == kind and (text is None or token.text == text)

    def match(self, kind: str, text: str | None = None) -> Token | None:
        if self.check(kind, text):
            return self.advance()
        return None

    def expect(self, kind: str, text: str, what: str) -> Token:
        token = self.peek()
        if token.kind == kind and token.text == text:
            return self.advance()
        raise ParseError(f"expected {what}", token.line, token.col, token.text)

    def skip_separators(self) -> None:
        while self.check("newline") or self.check("punct", ";"):
            self.advance()

    def fail(self, message: str) -> ParseError:
        token = self.peek()
        return ParseError(message, token.line, token.col, token.text)

    # ------------------------------------------------------------------
    # grammar
    # ------------------------------------------------------------------
    def program(self) -> N.Program:
        body = self.statements(until_brace=False)
        token = self.peek()
        if token.kind != "eof":
            raise self.fail("unexpected token")
        return N.Program(1, 1, self.cell_id, body)

    def statements(self, until_brace: bool) -> list:
        stmts = []
        self.skip_separators()
        while True:
            token = self.peek()
            if token.kind == "eof":
                break
            if until_brace and token.kind == "punct" and token.text == "}":
                break
            stmts.append(self.statement())
            token = self.peek()
            if token.kind in ("newline",) or (token.kind == "punct" and token.text == ";"):
                self.skip_separators()
            elif token.kind == "eof" or (token.kind == "punct" and token.text == "}"):
                continue
            else:
                raise self.fail("expected end of statement")
        return stmts

    def block(self) -> N.Block:
        opener = self.expect("punct", "{", "'{'")
        stmts = self.statements(until_brace=True)
        self.expect("punct", "}", "'}'")
        return N.Block(opener.line, opener.col, stmts)

    def statement(self):
        token = self.peek()
        if token.kind == "keyword":
            if token.text == "return":
                return self.return_stmt()
            if token.text == "if":
                return self.if_stmt()
            if token.text == "while":
                return self.while_stmt()
            if token.text == "for":
                return self.for_stmt()
        expr = self.expression()
        eq = self.peek()
        if eq.kind == "op" and eq.text == "=":
            if not isinstance(expr, (N.Ident, N.FieldAccess, N.IndexAccess)):
                raise ParseError("invalid assignment target", eq.line, eq.col, "=")
            self.advance()
            value = self.expression()
            return N.Assign(expr.line, expr.col, expr, value)
        return N.ExprStmt(expr.line, expr.col, expr)

    def return_stmt(self) -> N.Return:
        kw = self.advance()
        token = self.peek()
        ends = (token.kind in ("newline", "eof")
                or (token.kind == "punct" and token.text in (";", "}")))
        value = None if ends else self.expression()
        return N.Return(kw.line, kw.col, value)

    def if_stmt(self) -> N.If:
        kw = self.advance()
        cond = self.expression()
        then = self.block()
        orelse = None
        if self.match("keyword", "else"):
            if self.check("keyword", "if"):
                orelse = self.if_stmt()
            else:
                orelse = self.block()
        return N.If(kw.line, kw.col, cond, then, orelse)

    def while_stmt(self) -> N.While:
        kw = self.advance()
        cond = self.expression()
        body = self.block()
        return N.While(kw.line, kw.col, cond, body)

    def for_stmt(self) -> N.ForRange:
        kw = self.advance()
        var = self.peek()
        if var.kind != "ident":
            raise self.fail("expected loop variable")
        self.advance()
        self.expect("keyword", "in", "'in'")
        self.expect("keyword", "range", "'range'")
        self.expect("punct", "(", "'('")
        count = self.expression()
        self.expect("punct", ")", "')'")
        body = self.block()
        return N.ForRange(kw.line, kw.col, var.text, count, body)

    # ------------------------------------------------------------------
    # expressions
    # ------------------------------------------------------------------
    def expression(self):
        return self.or_expr()

    def or_expr(self):
        left = self.and_expr()
        while self.check("keyword", "or"):
            op = self.advance()
            right = self.and_expr()
            left = N.Binary(op.line, op.col, "or", left, right)
        return left

    def and_expr(self):
        left = self.not_expr()
        while self.check("keyword", "and"):
            op = self.advance()
            right = self.not_expr()
            left = N.Binary(op.line, op.col, "and", left, right)
        return left

    def not_expr(self):
        if self.check("keyword", "not"):
            op = self.advance()
            operand = self.not_expr()
            return N.Unary(op.line, op.col, "not", operand)
        return self.comparison()

    def comparison(self):
        left = self.additive()
        while self.peek().kind == "op" and self.peek().text in _COMPARISONS:
            op = self.advance()
            right = self.additive()
            left = N.Binary(op.line, op.col, op.text, left, right)
        return left

    def additive(self):
        left = self.multiplicative()
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.advance()
            right = self.multiplicative()
            left = N.Binary(op.line, op.col, op.text, left, right)
        return left

    def multiplicative(self):
        left = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/", "%"):
            op = self.advance()
            right = self.unary()
            left = N.Binary(op.line, op.col, op.text, left, right)
        return left

    def unary(self):
        if self.check("op", "-"):
            op = self.advance()
            operand = self.unary()
            return N.Unary(op.line, op.col, "-", operand)
        return self.postfix()

    def postfix(self):
        expr = self.atom()
        while True:
            token = self.peek()
            if token.kind == "punct" and token.text == "(":
                self.advance()
                args = []
                if not self.check("punct", ")"):
                    args.append(self.expression())
                    while self.match("punct", ","):
                        args.append(self.expression())
                self.expect("punct", ")", "')'")
                expr = N.Call(token.line, token.col, expr, args)
            elif token.kind == "punct" and token.text == ".":
                self.advance()
                name = self.peek()
                if name.kind != "ident":
                    raise self.fail("expected field name")
                self.advance()
                expr = N.FieldAccess(name.line, name.col, expr, name.text)
            elif token.kind == "punct" and token.text == "[":
                self.advance()
                index = self.expression()
                self.expect("punct", "]", "']'")
                expr = N.IndexAccess(token.line, token.col, expr, index)
            else:
                return expr

    def atom(self):
        token = self.peek()
        if token.kind == "number":
            self.advance()
            return N.Num(token.line, token.col, float(token.text))
        if token.kind == "string":
            self.advance()
            return N.Str(token.line, token.col, token.text)
        if token.kind == "ident":
            self.advance()
            return N.Ident(token.line, token.col, token.text)
        if token.kind == "keyword":
            if token.text == "true":
                self.advance()
                return N.Bool(token.line, token.col, True)
            if token.text == "false":
                self.advance()
                return N.Bool(token.line, token.col, False)
            if token.text == "nil":
                self.advance()
                return N.Nil(token.line, token.col)
            if token.text == "fn":
                return self.fn_literal()
        if token.kind == "punct" and token.text == "(":
            self.advance()
            expr = self.expression()
            self.expect("punct", ")", "')'")
            return expr
        if token.kind == "punct" and token.text == "[":
            self.advance()
            items = []
            # inside [ ] newlines are whitespace, so multi-line lists work
            if not self.check("punct", "]"):
                items.append(self.expression())
                while self.match("punct", ","):
                    items.append(self.expression())
            self.expect("punct", "]", "']'")
            return N.ListLit(token.line, token.col, items)
        raise self.fail("expected expression")

    def fn_literal(self) -> N.FnLit:
        kw = self.advance()
        self.expect("punct", "(", "'('")
        params: list[str] = []
        if not self.check("punct", ")"):
            while True:
                name = self.peek()
                if name.kind != "ident":
                    raise self.fail("expected parameter name")
                if name.text in params:
                    raise ParseError(f"duplicate parameter '{name.text}'",
                                     name.line, name.col, name.text)
                params.append(name.text)
                self.advance()
                if not self.match("punct", ","):
                    break
        self.expect("punct", ")", "')'")
        body = self.block()
        return N.FnLit(kw.line, kw.col, tuple(params), body, self.cell_id)


def parse(source: str, cell_id: str = "<cell>") -> N.Program:
    """Parse one cell; raises ParseError (never anything else) on bad input."""
    return _Parser(tokenize(source), cell_id).program()
