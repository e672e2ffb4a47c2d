"""Truncated Laurent series in q with exact integer coefficients."""
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from domain.exceptions import (
    InsufficientPrecisionError,
    MisalignedSeriesError,
    NotInvertibleError,
    TruncationWindowError,
)


class QSeries:
    """
    A power series in q known exactly below ``order``.

    Coefficients live in a sparse map from exponent to integer. Exponents
    at or above ``order`` are unknown; nothing is stored there and no zero
    coefficient is ever stored.
    """

    __slots__ = ("_coeffs", "_order", "_min_exp")

    def __init__(self, coeffs: Mapping[int, int], order: int):
        self._order = order
        self._coeffs: Dict[int, int] = {
            e: c for e, c in coeffs.items() if c and e < order
        }
        self._min_exp = min(self._coeffs) if self._coeffs else min(0, order - 1)

    @property
    def order(self) -> int:
        return self._order

    @property
    def min_exp(self) -> int:
        return self._min_exp

    @property
    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient, or ``order`` for zero."""
        return min(self._coeffs) if self._coeffs else self._order

    def coeff(self, e: int) -> int:
        if e >= self._order:
            raise InsufficientPrecisionError(
                f"coefficient of q^{e} is beyond order {self._order}"
            )
        return self._coeffs.get(e, 0)

    def coefficients(self, n: Optional[int] = None) -> List[int]:
        """Dense coefficient list for exponents 0..n-1 (default: up to order)."""
        n = self._order if n is None else n
        if n > self._order:
            raise InsufficientPrecisionError(f"requested {n} terms, order is {self._order}")
        return [self._coeffs.get(e, 0) for e in range(n)]

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self._coeffs.items()))

    def is_zero(self) -> bool:
        return not self._coeffs

    def truncate(self, n: int) -> "QSeries":
        return QSeries(self._coeffs, min(n, self._order))

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k; the known window moves with it."""
        return QSeries({e + k: c for e, c in self._coeffs.items()}, self._order + k)

    def scale(self, c: int) -> "QSeries":
        return QSeries({e: c * v for e, v in self._coeffs.items()}, self._order)

    def __add__(self, other: "QSeries") -> "QSeries":
        return add(self, other)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return add(self, neg(other))

    def __mul__(self, other: "QSeries") -> "QSeries":
        return mul(self, other)

    def __neg__(self) -> "QSeries":
        return neg(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._order == other._order and self._coeffs == other._coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"QSeries({self})"

    def __str__(self) -> str:
        parts = []
        for e, c in self.items():
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {body}")
        parts.append(f"+ O(q^{self._order})")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def zero(order: int) -> QSeries:
    return QSeries({}, order)


def one(order: int) -> QSeries:
    return from_monomial(1, 0, order)


def from_monomial(c: int, e: int, order: int) -> QSeries:
    """The single term c*q^e, known below ``order``."""
    if order <= e:
        raise TruncationWindowError(f"q^{e} does not fit below order {order}")
    return QSeries({e: c}, order)


def add(f: QSeries, g: QSeries) -> QSeries:
    order = min(f.order, g.order)
    out: Dict[int, int] = dict(f._coeffs)
    for e, c in g._coeffs.items():
        out[e] = out.get(e, 0) + c
    return QSeries(out, order)


def neg(f: QSeries) -> QSeries:
    return f.scale(-1)


def mul(f: QSeries, g: QSeries) -> QSeries:
    """
    Exact product.

    The result is known below min(f.order + val(g), g.order + val(f)).
    """
    order = min(f.order + g.valuation, g.order + f.valuation)
    small, large = (f, g) if len(f._coeffs) <= len(g._coeffs) else (g, f)
    large_items = sorted(large._coeffs.items())
    out: Dict[int, int] = {}
    for e1, c1 in small._coeffs.items():
        bound = order - e1
        for e2, c2 in large_items:
            if e2 >= bound:
                break
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return QSeries(out, order)


def invert_unit(f: QSeries) -> QSeries:
    """
    Multiplicative inverse of a series with constant term +1 or -1.

    Raises:
        NotInvertibleError: if the lowest term is not a unit constant
    """
    c0 = f._coeffs.get(0, 0) if f.valuation == 0 else 0
    if c0 not in (1, -1):
        raise NotInvertibleError(f"series {f} has no unit constant term")
    n = f.order
    dense = [f._coeffs.get(e, 0) for e in range(n)]
    support = [e for e in range(1, n) if dense[e]]
    inv = [0] * n
    inv[0] = c0
    for m in range(1, n):
        acc = 0
        for e in support:
            if e > m:
                break
            acc += dense[e] * inv[m - e]
        inv[m] = -c0 * acc
    return QSeries(dict(enumerate(inv)), n)


def substitute_power(f: QSeries, k: int) -> QSeries:
    """Replace q by q^k."""
    if k < 1:
        raise ValueError("substitution power must be positive")
    return QSeries({k * e: c for e, c in f._coeffs.items()}, k * (f.order - 1) + 1)


def extract_power(f: QSeries, k: int) -> QSeries:
    """
    Replace q^k by q, the inverse of ``substitute_power``.

    Raises:
        MisalignedSeriesError: if a nonzero coefficient sits off the k-grid
    """
    if k < 1:
        raise ValueError("extraction power must be positive")
    stray = [e for e in f._coeffs if e % k]
    if stray:
        raise MisalignedSeriesError(
            f"exponent {min(stray)} is not divisible by {k}"
        )
    return QSeries({e // k: c for e, c in f._coeffs.items()}, (f.order - 1) // k + 1)


def first_mismatch(f: QSeries, g: QSeries, n: int) -> Optional[int]:
    """Smallest exponent below n where f and g differ, or None."""
    if n > f.order or n > g.order:
        raise InsufficientPrecisionError(
            f"cannot compare to order {n}: orders are {f.order} and {g.order}"
        )
    exponents = sorted(e for e in set(f._coeffs) | set(g._coeffs) if e < n)
    for e in exponents:
        if f._coeffs.get(e, 0) != g._coeffs.get(e, 0):
            return e
    return None


def eq_to_order(f: QSeries, g: QSeries, n: int) -> bool:
    return first_mismatch(f, g, n) is None
