"""
Ramanujan's general theta function on monomial arguments.

f(a, b) = sum over all integers n of a^{n(n+1)/2} b^{n(n-1)/2}, evaluated for
a = +-q^alpha, b = +-q^beta with alpha + beta >= 1, together with the
calculus the expansions rely on: the shift law, dissections and truncated
q-Pochhammer products.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from domain.exceptions import DivergentThetaError
from domain.models.series import QSeries


@dataclass(frozen=True, order=True)
class MonomialArg:
    """A signed monomial sign * q^exponent."""
    sign: int
    exponent: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"monomial sign must be +1 or -1, got {self.sign}")

    @classmethod
    def q(cls, exponent: int = 1, sign: int = 1) -> "MonomialArg":
        return cls(sign, exponent)

    @property
    def is_unit(self) -> bool:
        return self.exponent == 0

    @property
    def is_minus_one(self) -> bool:
        return self.exponent == 0 and self.sign == -1

    def __mul__(self, other: "MonomialArg") -> "MonomialArg":
        return MonomialArg(self.sign * other.sign, self.exponent + other.exponent)

    def __pow__(self, n: int) -> "MonomialArg":
        return MonomialArg(self.sign if n % 2 else 1, self.exponent * n)

    def __neg__(self) -> "MonomialArg":
        return MonomialArg(-self.sign, self.exponent)

    def __str__(self) -> str:
        if self.exponent == 0:
            body = "1"
        elif self.exponent == 1:
            body = "q"
        else:
            body = f"q^{self.exponent}"
        return f"-{body}" if self.sign < 0 else body


@dataclass(frozen=True)
class NormalizedTheta:
    """f(a, b) = coeff * q^shift * f(a', b') with 0 <= e(a') <= e(b')."""
    coeff: int
    shift: int
    a: MonomialArg
    b: MonomialArg

    @property
    def vanishing(self) -> bool:
        return self.a.is_minus_one


@dataclass(frozen=True)
class DissectionTerm:
    factor: MonomialArg
    a: MonomialArg
    b: MonomialArg


def _exponent_sum(a: MonomialArg, b: MonomialArg) -> int:
    m = a.exponent + b.exponent
    if m < 1:
        raise DivergentThetaError(
            f"f({a}, {b}) diverges: exponent sum {m} is below 1"
        )
    return m


def _term(a: MonomialArg, b: MonomialArg, n: int) -> Tuple[int, int]:
    up, down = n * (n + 1) // 2, n * (n - 1) // 2
    sign = (a.sign if up % 2 else 1) * (b.sign if down % 2 else 1)
    return sign, a.exponent * up + b.exponent * down


@lru_cache(maxsize=4096)
def _theta_coeffs(a: MonomialArg, b: MonomialArg, order: int) -> Tuple[Tuple[int, int], ...]:
    m = _exponent_sum(a, b)
    out: Dict[int, int] = {}
    center = (b.exponent - a.exponent) // (2 * m)

    # exponent(n+1) - exponent(n) = m*n + alpha, so the walk stops once the
    # window is left on the increasing side of the parabola
    n = center
    while True:
        sign, e = _term(a, b, n)
        if e >= order and m * n + a.exponent >= 0:
            break
        if e < order:
            out[e] = out.get(e, 0) + sign
        n += 1
    n = center - 1
    while True:
        sign, e = _term(a, b, n)
        if e >= order and m * (n - 1) + a.exponent <= 0:
            break
        if e < order:
            out[e] = out.get(e, 0) + sign
        n -= 1
    return tuple(sorted((e, c) for e, c in out.items() if c))


def theta_series(a: MonomialArg, b: MonomialArg, order: int) -> QSeries:
    """
    Truncated f(a, b).

    Raises:
        DivergentThetaError: if e(a) + e(b) < 1
    """
    return QSeries(dict(_theta_coeffs(a, b, order)), order)


def normalize_theta(a: MonomialArg, b: MonomialArg) -> NormalizedTheta:
    """
    Apply the shift law f(a, b) = a^{n(n+1)/2} b^{n(n-1)/2} f(a(ab)^n, b(ab)^{-n})
    with the unique n putting e(a') in [0, e(a)+e(b)), then order the pair
    by exponent using f(a, b) = f(b, a).
    """
    m = _exponent_sum(a, b)
    n = -(a.exponent // m)
    ab = a * b
    factor = (a ** (n * (n + 1) // 2)) * (b ** (n * (n - 1) // 2))
    a2, b2 = a * ab ** n, b * ab ** (-n)
    if (a2.exponent, -a2.sign) > (b2.exponent, -b2.sign):
        a2, b2 = b2, a2
    return NormalizedTheta(factor.sign, factor.exponent, a2, b2)


def dissect_theta(a: MonomialArg, b: MonomialArg, k: int) -> List[DissectionTerm]:
    """Split f(a, b) by the residue of the summation index modulo k."""
    if k < 1:
        raise ValueError("dissection index must be positive")
    _exponent_sum(a, b)
    terms = []
    for r in range(k):
        factor = (a ** (r * (r + 1) // 2)) * (b ** (r * (r - 1) // 2))
        new_a = (a ** (k * (k + 1) // 2 + k * r)) * (b ** (k * (k - 1) // 2 + k * r))
        new_b = (a ** (k * (k - 1) // 2 - k * r)) * (b ** (k * (k + 1) // 2 - k * r))
        terms.append(DissectionTerm(factor, new_a, new_b))
    return terms


def theta_unit_split(a: MonomialArg) -> Tuple[int, MonomialArg, MonomialArg]:
    """f(1, a) = 2 f(a, a^3)."""
    return 2, a, a ** 3


def pochhammer(a: MonomialArg, base: MonomialArg, order: int) -> QSeries:
    """(a; base)_inf = prod_{n >= 0} (1 - a * base^n), truncated below ``order``."""
    if base.exponent < 1:
        raise DivergentThetaError(f"product base {base} must have positive exponent")
    if a.exponent < 0:
        raise DivergentThetaError(f"product start {a} must not have negative exponent")
    dense = [0] * max(order, 0)
    if order > 0:
        dense[0] = 1
    factor = a
    while factor.exponent < order:
        e, s = factor.exponent, factor.sign
        if e == 0:
            dense = [(1 - s) * c for c in dense]
        else:
            for k in range(order - 1, e - 1, -1):
                dense[k] -= s * dense[k - e]
        factor = factor * base
    return QSeries(dict(enumerate(dense)), order)


def jacobi_triple_product(a: MonomialArg, b: MonomialArg, order: int) -> QSeries:
    """(-a; ab)_inf (-b; ab)_inf (ab; ab)_inf."""
    ab = a * b
    _exponent_sum(a, b)
    return pochhammer(-a, ab, order) * pochhammer(-b, ab, order) * pochhammer(ab, ab, order)


def rogers_ramanujan_sum(shift: int, order: int) -> QSeries:
    """
    sum_{n >= 0} q^{n^2 + shift*n} / (q; q)_n.

    shift 0 gives the sum side of G, shift 1 the sum side of H.
    """
    total = [0] * order
    term = [0] * order
    if order > 0:
        term[0] = 1
    n = 0
    while n * n + shift * n < order:
        if n > 0:
            for k in range(n, order):
                term[k] += term[k - n]
        lead = n * n + shift * n
        for k in range(order - lead):
            total[k + lead] += term[k]
        n += 1
    return QSeries(dict(enumerate(total)), order)
