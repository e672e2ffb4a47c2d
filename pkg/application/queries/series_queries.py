from dataclasses import dataclass
from typing import List

from core.logging import get_logger
from domain.models.evaluator import evaluate_to
from domain.models.expr import ThetaExpr
from domain.models.parser import parse
from domain.models.series import QSeries

logger = get_logger(__name__)


@dataclass
class SeriesResult:
    expr: ThetaExpr
    series: QSeries

    @property
    def start(self) -> int:
        """Lowest exponent shown: the valuation when it is negative, else 0."""
        return min(self.series.min_exp, 0)

    @property
    def coefficients(self) -> List[int]:
        """Coefficients of q^start .. q^(order-1)."""
        return [self.series.coeff(e) for e in range(self.start, self.series.order)]


class SeriesQuery:
    """Query evaluating expression text to a truncated series."""

    def execute(self, text: str, order: int) -> SeriesResult:
        """
        Execute the series query.

        Args:
            text: Expression in the theta grammar
            order: Series is known through q^(order-1)

        Returns:
            The parsed expression and its series

        Raises:
            ExpressionSyntaxError: If the text does not parse
            ThetaForgeError: If evaluation fails
        """
        expr = parse(text)
        series = evaluate_to(expr, order)
        logger.info("series_evaluated", expr=str(expr), order=order, valuation=series.valuation)
        return SeriesResult(expr=expr, series=series)
