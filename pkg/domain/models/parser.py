"""
Recursive-descent parser for theta expressions.

    expr     := term (('+' | '-') term)*
    term     := ['-'] INT '*' product | product
    product  := factor (('*' | '/') factor)*
    factor   := INT | ['-'] monomial | call | '(' expr ')'
    monomial := 'q' ['^' ['-'] INT]
    call     := NAME '(' arg (',' arg)? ')'
    arg      := ['-'] ('q' ['^' INT] | '1')

A leading integer multiplier applies to the whole product that follows it.
"""
import re
from dataclasses import dataclass
from typing import List, Optional

from domain.exceptions import ArityError, ExpressionSyntaxError
from domain.models.expr import (
    Add, Chi, Div, Euler, G, H, Monomial, Mul, Phi, Psi, Scale, Sub, Theta, ThetaExpr,
)
from domain.models.theta import MonomialArg

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")

_ONE_ARG = {"phi": Phi, "psi": Psi, "chi": Chi, "G": G, "H": H}


@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, Q, OP, END
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            break
        number, name, op = match.groups()
        start = match.start(match.lastindex) if match.lastindex else pos
        if number is not None:
            tokens.append(Token("INT", number, start))
        elif name is not None:
            if name == "q":
                tokens.append(Token("Q", name, start))
            elif name == "f" or name in _ONE_ARG:
                tokens.append(Token("NAME", name, start))
            else:
                raise ExpressionSyntaxError(f"unknown name '{name}'", start)
        elif op is not None:
            if op not in "+-*/^(),":
                raise ExpressionSyntaxError(f"unexpected character '{op}'", start)
            tokens.append(Token("OP", op, start))
        pos = match.end()
    tokens.append(Token("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        token = self.current
        return token.kind == kind and (text is None or token.text == text)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        if not self.at(kind, text):
            wanted = text or kind
            found = self.current.text or "end of input"
            raise ExpressionSyntaxError(f"expected '{wanted}', found '{found}'", self.current.position)
        return self.advance()

    def parse(self) -> ThetaExpr:
        node = self.expr()
        if not self.at("END"):
            raise ExpressionSyntaxError(f"unexpected '{self.current.text}'", self.current.position)
        return node

    def expr(self) -> ThetaExpr:
        node = self.term()
        while self.at("OP", "+") or self.at("OP", "-"):
            op = self.advance().text
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self) -> ThetaExpr:
        negative = self.at("OP", "-")
        offset = 1 if negative else 0
        if self.peek(offset).kind == "INT" and self.peek(offset + 1).kind == "OP" and self.peek(offset + 1).text == "*":
            if negative:
                self.advance()
            c = int(self.advance().text)
            self.advance()
            return _fold_scale(self.product(), -c if negative else c)
        if negative and self.peek().kind not in ("INT", "Q"):
            self.advance()
            return _fold_scale(self.product(), -1)
        return self.product()

    def product(self) -> ThetaExpr:
        node = self.factor()
        while self.at("OP", "*") or self.at("OP", "/"):
            op = self.advance().text
            right = self.factor()
            node = Mul(node, right) if op == "*" else Div(node, right)
        return node

    def factor(self) -> ThetaExpr:
        token = self.current
        if token.kind == "OP" and token.text == "-":
            self.advance()
            if self.at("INT"):
                return Monomial(-int(self.advance().text), 0)
            if self.at("Q"):
                return Monomial(-1, self.power())
            raise ExpressionSyntaxError("'-' must precede an integer or q here", token.position)
        if token.kind == "INT":
            self.advance()
            return Monomial(int(token.text), 0)
        if token.kind == "Q":
            return Monomial(1, self.power())
        if token.kind == "NAME":
            return self.call()
        if token.kind == "OP" and token.text == "(":
            self.advance()
            node = self.expr()
            self.expect("OP", ")")
            return node
        found = token.text or "end of input"
        raise ExpressionSyntaxError(f"unexpected '{found}'", token.position)

    def power(self) -> int:
        self.expect("Q")
        if not self.at("OP", "^"):
            return 1
        self.advance()
        negative = False
        if self.at("OP", "-"):
            self.advance()
            negative = True
        value = int(self.expect("INT").text)
        return -value if negative else value

    def call(self) -> ThetaExpr:
        name_token = self.advance()
        self.expect("OP", "(")
        args = [self.argument()]
        while self.at("OP", ","):
            self.advance()
            args.append(self.argument())
        self.expect("OP", ")")
        name = name_token.text
        if name == "f":
            if len(args) == 1:
                return Euler(args[0])
            if len(args) == 2:
                return Theta(args[0], args[1])
            raise ArityError(f"f takes 1 or 2 arguments, got {len(args)}", name_token.position)
        if len(args) != 1:
            raise ArityError(f"{name} takes 1 argument, got {len(args)}", name_token.position)
        return _ONE_ARG[name](args[0])

    def argument(self) -> MonomialArg:
        sign = 1
        if self.at("OP", "-"):
            self.advance()
            sign = -1
        token = self.current
        if token.kind == "INT":
            if token.text != "1":
                raise ExpressionSyntaxError("integer argument must be 1 or -1", token.position)
            self.advance()
            return MonomialArg(sign, 0)
        if token.kind == "Q":
            self.advance()
            if self.at("OP", "^"):
                self.advance()
                return MonomialArg(sign, int(self.expect("INT").text))
            return MonomialArg(sign, 1)
        raise ExpressionSyntaxError("expected a monomial argument", token.position)


def _fold_scale(node: ThetaExpr, c: int) -> ThetaExpr:
    if isinstance(node, Monomial) and node.c == 1:
        return Monomial(c, node.e)
    return Scale(node, c)


def parse(text: str) -> ThetaExpr:
    """
    Parse expression text into a tree.

    Raises:
        ExpressionSyntaxError: on lexical or grammatical errors, with position
        ArityError: when a known function gets the wrong number of arguments
    """
    return _Parser(text).parse()
