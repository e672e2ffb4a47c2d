import asyncio
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from core.config import get_settings
from core.logging import get_logger
from domain.exceptions import (
    CorpusVerificationError,
    ExpansionMismatchError,
    MisalignedSeriesError,
    NotDiagonalizedError,
    NotExactCoverError,
    PreconditionError,
    ThetaForgeError,
)
from domain.models.ecs import verify_ecs
from domain.models.evaluator import evaluate_to
from domain.models.expansion import ThetaCombination, expand, expand_product
from domain.models.expr import product_factors
from domain.models.identity import IdentityRecord
from domain.models.quadform import direct_series
from domain.models.series import QSeries, extract_power, first_mismatch

logger = get_logger(__name__)

MIN_ORDER = 10


@dataclass
class VerifyReport:
    """Outcome of comparing both sides of one record."""
    id: str
    ok: bool
    first_mismatch: Optional[int]
    elapsed_ms: float
    order: int
    compared_to: int = 0
    stage: Optional[str] = None
    error: Optional[str] = None


@dataclass
class DerivationReport:
    """Outcome of re-deriving one record from its lattice data."""
    id: str
    ok: bool
    elapsed_ms: float
    order: int
    failed_stage: Optional[str] = None
    detail: Optional[str] = None
    first_mismatch: Optional[int] = None
    expansions: List[str] = field(default_factory=list)


@dataclass
class CorpusRun:
    reports: List[VerifyReport]
    derivations: List[DerivationReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports) and all(d.ok for d in self.derivations)


def _elapsed_ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000, 3)


def _lattice_side(record: IdentityRecord, order: int) -> QSeries:
    scale = record.variable_scale
    direct = direct_series(record.derivation.form, scale * (order - 1) + 1)
    return extract_power(direct, scale)


class VerifyIdentityCommand:
    """
    Command comparing the two sides of a corpus record as series.

    A record without a right-hand side is compared with the lattice sum of
    its derivation form, read in q^scale.
    """
    def execute(self, record: IdentityRecord, order: int) -> VerifyReport:
        """
        Execute the verify command.

        Args:
            record: The corpus record
            order: Number of coefficients to compare

        Returns:
            A report with the smallest disagreeing exponent, if any

        Raises:
            ValueError: If order is below the harness minimum
            CorpusVerificationError: If either side cannot be evaluated
        """
        if order < MIN_ORDER:
            raise ValueError(f"verification order must be at least {MIN_ORDER}")
        start = time.perf_counter()
        try:
            lhs = evaluate_to(record.lhs, order)
        except ThetaForgeError as e:
            raise CorpusVerificationError(record.id, "lhs", e) from e
        try:
            rhs = evaluate_to(record.rhs, order) if record.rhs is not None else _lattice_side(record, order)
        except ThetaForgeError as e:
            raise CorpusVerificationError(record.id, "rhs", e) from e

        mismatch = first_mismatch(lhs, rhs, order)
        report = VerifyReport(
            id=record.id,
            ok=mismatch is None,
            first_mismatch=mismatch,
            elapsed_ms=_elapsed_ms(start),
            order=order,
            compared_to=order,
        )
        logger.info(
            "record_verified",
            record_id=record.id,
            ok=report.ok,
            first_mismatch=mismatch,
            compared_to=order,
            elapsed_ms=report.elapsed_ms,
        )
        return report


class VerifyDerivationCommand:
    """
    Command re-deriving a record from its coset systems or its product matrix.

    Derivation stages run in order and the first failing one is named:
    ``ecs`` (every system is an exact cover), ``expansion`` (each expansion
    passes its own numeric check), ``lattice`` (each expansion equals the
    lattice sum), ``expected`` (each expansion matches the stated side after
    the variable scale). Product records run the single stage ``product``.
    """
    def execute(
        self,
        record: IdentityRecord,
        order: int,
        recheck_min_order: Optional[int] = None,
    ) -> DerivationReport:
        """
        Execute the derivation check.

        Args:
            record: A record carrying a derivation or a product matrix
            order: Comparison order in the variable of the lattice sum
            recheck_min_order: Floor of the internal expansion re-check order

        Returns:
            A report naming the failed stage, if any

        Raises:
            ValueError: If the record has nothing to derive or order is too small
            CorpusVerificationError: If a stated side cannot be evaluated
        """
        if record.derivation is None and record.product_matrix is None:
            raise ValueError(f"record {record.id} has neither a derivation nor a product matrix")
        if order < MIN_ORDER:
            raise ValueError(f"derivation order must be at least {MIN_ORDER}")
        if recheck_min_order is None:
            recheck_min_order = get_settings().RECHECK_MIN_ORDER
        start = time.perf_counter()
        report = DerivationReport(id=record.id, ok=True, elapsed_ms=0.0, order=order)
        if record.derivation is not None:
            self._derive(record, order, recheck_min_order, report)
        if report.ok and record.product_matrix is not None:
            self._product(record, order, recheck_min_order, report)
        report.elapsed_ms = _elapsed_ms(start)
        logger.info(
            "derivation_checked",
            record_id=record.id,
            ok=report.ok,
            failed_stage=report.failed_stage,
            elapsed_ms=report.elapsed_ms,
        )
        return report

    @staticmethod
    def _fail(report: DerivationReport, stage: str, detail: str, mismatch: Optional[int] = None) -> None:
        report.ok = False
        report.failed_stage = stage
        report.detail = detail
        report.first_mismatch = mismatch

    def _derive(self, record: IdentityRecord, order: int, recheck: int, report: DerivationReport) -> None:
        derivation = record.derivation
        for index, cs in enumerate(derivation.systems, start=1):
            if not verify_ecs(cs):
                self._fail(report, "ecs", f"B{index} = {cs.b} with {cs.k} representatives is not an exact cover")
                return

        expansions: List[ThetaCombination] = []
        for index, cs in enumerate(derivation.systems, start=1):
            try:
                expansions.append(expand(derivation.form, cs, recheck))
            except (ExpansionMismatchError, NotDiagonalizedError, NotExactCoverError) as e:
                self._fail(report, "expansion", f"B{index}: {e}")
                return
        report.expansions = [str(e.collected()) for e in expansions]

        direct = direct_series(derivation.form, order)
        for index, combination in enumerate(expansions, start=1):
            mismatch = first_mismatch(combination.series(order), direct, order)
            if mismatch is not None:
                self._fail(report, "lattice", f"expansion B{index} differs from the lattice sum", mismatch)
                return

        if derivation.multiplier is None:
            return
        scale = record.variable_scale
        try:
            target = extract_power(direct, scale)
        except MisalignedSeriesError as e:
            self._fail(report, "expected", f"lattice sum is not a series in q^{scale}: {e}")
            return
        n = target.order
        for index, expected in enumerate(derivation.expansions, start=1):
            if expected is None:
                continue
            try:
                side = evaluate_to(expected, n).scale(derivation.multiplier)
            except ThetaForgeError as e:
                raise CorpusVerificationError(record.id, f"expected E{index}", e) from e
            mismatch = first_mismatch(target, side, n)
            if mismatch is not None:
                self._fail(
                    report, "expected",
                    f"E{index} times {derivation.multiplier} differs from the lattice sum in q^{scale}",
                    mismatch,
                )
                return

    def _product(self, record: IdentityRecord, order: int, recheck: int, report: DerivationReport) -> None:
        factors = product_factors(record.rhs) if record.rhs is not None else None
        if factors is None or len(factors) != 2:
            self._fail(report, "product", "right-hand side is not a product of two theta functions")
            return
        (a1, b1), (a2, b2) = factors
        try:
            closed = expand_product(a1, b1, a2, b2, record.product_matrix, recheck)
        except (PreconditionError, ExpansionMismatchError) as e:
            self._fail(report, "product", str(e))
            return
        report.expansions.append(str(closed.collected()))
        try:
            lhs = evaluate_to(record.lhs, order)
        except ThetaForgeError as e:
            raise CorpusVerificationError(record.id, "lhs", e) from e
        mismatch = first_mismatch(closed.series(order), lhs, order)
        if mismatch is not None:
            self._fail(report, "product", "product expansion differs from the left-hand side", mismatch)


class VerifyCorpusCommand:
    """
    Command verifying many records concurrently.

    Records are checked in worker threads, at most ``max_workers`` at a
    time; reports come back sorted by record id whatever the completion
    order. Evaluation errors become failed reports.
    """
    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or get_settings().MAX_WORKERS

    async def execute(
        self,
        records: Sequence[IdentityRecord],
        order: int,
        derivations: bool = False,
        derivation_order: Optional[int] = None,
    ) -> CorpusRun:
        """
        Execute the corpus run.

        Args:
            records: Records to verify
            order: Statement verification order
            derivations: Also re-derive records carrying derivation data
            derivation_order: Order of the derivation checks

        Returns:
            The aggregated run with reports in id order
        """
        if order < MIN_ORDER:
            raise ValueError(f"verification order must be at least {MIN_ORDER}")
        derivation_order = derivation_order or get_settings().DERIVATION_ORDER
        semaphore = asyncio.Semaphore(self.max_workers)

        async def verify(record: IdentityRecord) -> VerifyReport:
            async with semaphore:
                start = time.perf_counter()
                try:
                    return await asyncio.to_thread(VerifyIdentityCommand().execute, record, order)
                except CorpusVerificationError as e:
                    logger.error("record_failed", record_id=record.id, stage=e.stage, error=str(e.cause))
                    return VerifyReport(
                        id=record.id, ok=False, first_mismatch=None, elapsed_ms=_elapsed_ms(start),
                        order=order, stage=e.stage, error=str(e),
                    )

        async def derive(record: IdentityRecord) -> DerivationReport:
            async with semaphore:
                start = time.perf_counter()
                try:
                    return await asyncio.to_thread(
                        VerifyDerivationCommand().execute, record, derivation_order
                    )
                except ThetaForgeError as e:
                    logger.error("derivation_failed", record_id=record.id, error=str(e))
                    stage = e.stage if isinstance(e, CorpusVerificationError) else "error"
                    return DerivationReport(
                        id=record.id, ok=False, elapsed_ms=_elapsed_ms(start), order=derivation_order,
                        failed_stage=stage, detail=str(e),
                    )

        reports = await asyncio.gather(*(verify(r) for r in records))
        derived: List[DerivationReport] = []
        if derivations:
            bearing = [r for r in records if r.derivation is not None or r.product_matrix is not None]
            derived = list(await asyncio.gather(*(derive(r) for r in bearing)))

        run = CorpusRun(
            reports=sorted(reports, key=lambda r: r.id),
            derivations=sorted(derived, key=lambda r: r.id),
        )
        logger.info(
            "corpus_verified",
            records=len(run.reports),
            failed=sum(1 for r in run.reports if not r.ok),
            derivations=len(run.derivations),
            ok=run.ok,
        )
        return run
