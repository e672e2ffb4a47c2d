"""Theta-expression trees and their canonical text form."""
from dataclasses import dataclass
from typing import List, Optional, Tuple

from domain.exceptions import DivergentThetaError
from domain.models.theta import MonomialArg


class ThetaExpr:
    """Base node. Arithmetic operators build trees."""

    def __add__(self, other: "ThetaExpr") -> "ThetaExpr":
        return Add(self, other)

    def __sub__(self, other: "ThetaExpr") -> "ThetaExpr":
        return Sub(self, other)

    def __mul__(self, other: "ThetaExpr") -> "ThetaExpr":
        return Mul(self, other)

    def __truediv__(self, other: "ThetaExpr") -> "ThetaExpr":
        return Div(self, other)

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Theta(ThetaExpr):
    a: MonomialArg
    b: MonomialArg

    def __post_init__(self):
        if self.a.exponent + self.b.exponent < 1:
            raise DivergentThetaError(f"f({self.a}, {self.b}) has exponent sum below 1")


@dataclass(frozen=True, eq=True)
class Euler(ThetaExpr):
    """One-argument convention f(m) := f(m, -m^2), so f(-q^k) = (q^k; q^k)_inf."""
    m: MonomialArg


@dataclass(frozen=True, eq=True)
class Phi(ThetaExpr):
    m: MonomialArg


@dataclass(frozen=True, eq=True)
class Psi(ThetaExpr):
    m: MonomialArg


@dataclass(frozen=True, eq=True)
class Chi(ThetaExpr):
    m: MonomialArg


@dataclass(frozen=True, eq=True)
class G(ThetaExpr):
    m: MonomialArg


@dataclass(frozen=True, eq=True)
class H(ThetaExpr):
    m: MonomialArg


@dataclass(frozen=True, eq=True)
class Monomial(ThetaExpr):
    c: int
    e: int


@dataclass(frozen=True, eq=True)
class Add(ThetaExpr):
    left: ThetaExpr
    right: ThetaExpr


@dataclass(frozen=True, eq=True)
class Sub(ThetaExpr):
    left: ThetaExpr
    right: ThetaExpr


@dataclass(frozen=True, eq=True)
class Mul(ThetaExpr):
    left: ThetaExpr
    right: ThetaExpr


@dataclass(frozen=True, eq=True)
class Div(ThetaExpr):
    left: ThetaExpr
    right: ThetaExpr


@dataclass(frozen=True, eq=True)
class Scale(ThetaExpr):
    expr: ThetaExpr
    c: int


CALL_NAMES = {Euler: "f", Phi: "phi", Psi: "psi", Chi: "chi", G: "G", H: "H"}


def _monomial_text(c: int, e: int) -> str:
    if e == 0:
        return str(c)
    power = "q" if e == 1 else f"q^{e}"
    if c == 1:
        return power
    if c == -1:
        return f"-{power}"
    return f"{c}*{power}"


def _first_factor_needs_parens(node: ThetaExpr) -> bool:
    # a leading integer followed by '*' reads back as a Scale node
    if isinstance(node, Monomial):
        return node.e == 0 or abs(node.c) != 1
    return isinstance(node, (Add, Sub, Scale))


def _inner_factor_needs_parens(node: ThetaExpr) -> bool:
    if isinstance(node, Monomial):
        return node.e != 0 and abs(node.c) != 1
    return isinstance(node, (Add, Sub, Scale, Mul, Div))


def _product_text(node: ThetaExpr, first: bool) -> str:
    if isinstance(node, (Mul, Div)):
        op = "*" if isinstance(node, Mul) else "/"
        left = _product_text(node.left, first)
        right = to_text(node.right)
        if _inner_factor_needs_parens(node.right):
            right = f"({right})"
        return f"{left}{op}{right}"
    text = to_text(node)
    needs = _first_factor_needs_parens(node) if first else _inner_factor_needs_parens(node)
    return f"({text})" if needs else text


def to_text(node: ThetaExpr) -> str:
    """Render a tree in the expression grammar; parsing the text gives the tree back."""
    if isinstance(node, Theta):
        return f"f({node.a},{node.b})"
    if type(node) in CALL_NAMES:
        return f"{CALL_NAMES[type(node)]}({node.m})"
    if isinstance(node, Monomial):
        return _monomial_text(node.c, node.e)
    if isinstance(node, (Add, Sub)):
        op = "+" if isinstance(node, Add) else "-"
        right = to_text(node.right)
        if isinstance(node.right, (Add, Sub)):
            right = f"({right})"
        return f"{to_text(node.left)} {op} {right}"
    if isinstance(node, (Mul, Div)):
        return _product_text(node, first=True)
    if isinstance(node, Scale):
        body = to_text(node.expr)
        if isinstance(node.expr, (Add, Sub, Scale)):
            body = f"({body})"
        return f"{node.c}*{body}"
    raise TypeError(f"unknown expression node {node!r}")


def q(exponent: int = 1, sign: int = 1) -> MonomialArg:
    return MonomialArg(sign, exponent)


def product(*factors: ThetaExpr) -> ThetaExpr:
    out = factors[0]
    for factor in factors[1:]:
        out = Mul(out, factor)
    return out


def quintuple_product(x: MonomialArg, lam: MonomialArg) -> Tuple[ThetaExpr, ThetaExpr]:
    """
    Both sides of the quotient form of the quintuple product identity:

        f(-x^2, -lam*x) f(-lam*x^3) / f(-x, -lam*x^2)
            = f(-lam^2*x^3, -lam*x^6) + x f(-lam, -lam^2*x^9)
    """
    lhs = Div(
        Mul(Theta(-(x ** 2), -(lam * x)), Euler(-(lam * x ** 3))),
        Theta(-x, -(lam * x ** 2)),
    )
    rhs = Add(
        Theta(-(lam ** 2 * x ** 3), -(lam * x ** 6)),
        Mul(Monomial(x.sign, x.exponent), Theta(-lam, -(lam ** 2 * x ** 9))),
    )
    return lhs, rhs


def theta_arguments(node: ThetaExpr) -> Optional[Tuple[MonomialArg, MonomialArg]]:
    """The pair (a, b) with node = f(a, b), for two-argument theta nodes and their specializations."""
    match node:
        case Theta(a=a, b=b):
            return a, b
        case Euler(m=m):
            return m, -(m * m)
        case Phi(m=m):
            return m, m
        case Psi(m=m):
            return m, m ** 3
    return None


def product_factors(node: ThetaExpr) -> Optional[List[Tuple[MonomialArg, MonomialArg]]]:
    """Flatten a product of theta-like factors; None when some factor is not one."""
    if isinstance(node, Mul):
        left, right = product_factors(node.left), product_factors(node.right)
        if left is None or right is None:
            return None
        return left + right
    pair = theta_arguments(node)
    return None if pair is None else [pair]
