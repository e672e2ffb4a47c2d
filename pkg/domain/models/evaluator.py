from domain.exceptions import InsufficientPrecisionError, NotInvertibleError
from domain.models.expr import (
    Add, Chi, Div, Euler, G, H, Monomial, Mul, Phi, Psi, Scale, Sub, Theta, ThetaExpr,
)
from domain.models.series import QSeries, from_monomial, invert_unit, zero
from domain.models.theta import MonomialArg, pochhammer, theta_series


def euler_series(m: MonomialArg, order: int) -> QSeries:
    return theta_series(m, -(m * m), order)


def divide(numerator: QSeries, denominator: QSeries) -> QSeries:
    """numerator / denominator for a denominator of the form +-q^v * (unit series)."""
    if denominator.is_zero():
        raise NotInvertibleError("division by a series that vanishes to its order")
    v = denominator.valuation
    inverse = invert_unit(denominator.shift(-v))
    return (numerator * inverse).shift(-v)


def evaluate(node: ThetaExpr, order: int) -> QSeries:
    """
    Exact truncated series of an expression.

    Theta, Euler, phi and psi nodes are theta sums; chi is the product
    (-m; m^2)_inf; G and H are the theta quotients f(-m^2,-m^3)/f(-m) and
    f(-m,-m^4)/f(-m).

    Raises:
        NotInvertibleError: if a denominator has no unit leading coefficient
        DivergentThetaError: if a theta sum does not converge
    """
    if order < 1:
        raise ValueError("evaluation order must be at least 1")
    result = _eval(node, order)
    return result.truncate(order)


def evaluate_to(node: ThetaExpr, order: int, attempts: int = 4) -> QSeries:
    """
    Like ``evaluate`` but widens the working order until the result is
    known through q^(order-1).

    Dividing by a series of positive valuation v loses v terms at the top,
    so each retry adds the shortfall of the previous attempt.

    Raises:
        InsufficientPrecisionError: if the window is still short after ``attempts`` tries
    """
    working = order
    for _ in range(attempts):
        result = evaluate(node, working)
        if result.order >= order:
            return result.truncate(order)
        working += order - result.order
    raise InsufficientPrecisionError(
        f"could not reach order {order}: last window ended at {result.order}"
    )


def _eval(node: ThetaExpr, order: int) -> QSeries:
    match node:
        case Theta(a=a, b=b):
            return theta_series(a, b, order)
        case Euler(m=m):
            return euler_series(m, order)
        case Phi(m=m):
            return theta_series(m, m, order)
        case Psi(m=m):
            return theta_series(m, m ** 3, order)
        case Chi(m=m):
            return pochhammer(-m, m * m, order)
        case G(m=m):
            return divide(theta_series(-(m ** 2), -(m ** 3), order), euler_series(-m, order))
        case H(m=m):
            return divide(theta_series(-m, -(m ** 4), order), euler_series(-m, order))
        case Monomial(c=c, e=e):
            return from_monomial(c, e, order) if e < order else zero(order)
        case Add(left=left, right=right):
            return _eval(left, order) + _eval(right, order)
        case Sub(left=left, right=right):
            return _eval(left, order) - _eval(right, order)
        case Mul(left=left, right=right):
            return _eval(left, order) * _eval(right, order)
        case Div(left=left, right=right):
            return divide(_eval(left, order), _eval(right, order))
        case Scale(expr=inner, c=c):
            return _eval(inner, order).scale(c)
    raise TypeError(f"cannot evaluate {node!r}")
