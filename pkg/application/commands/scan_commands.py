import asyncio
from dataclasses import dataclass, field
from itertools import product
from math import isqrt
from typing import Dict, List, Optional, Tuple

from core.config import get_settings
from core.logging import get_logger
from domain.exceptions import ExpansionMismatchError, NotExactCoverError
from domain.models.ecs import CosetSystem, IntMatrix, canonical_cosets, coset_key, det
from domain.models.expansion import ExpansionIdentity, engine_identities
from domain.models.identity import Derivation, IdentityRecord
from domain.models.quadform import (
    BinaryForm,
    ExtendedQuadForm,
    canonical_column,
    enumerate_reduced_primitive,
    find_congruence_matrices,
    represent,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class Diagonalizer:
    matrix: IntMatrix
    target: Tuple[int, int]

    @property
    def index(self) -> int:
        return abs(det(self.matrix))


@dataclass
class ScanResult:
    """One reduced form with its diagonalizers and the verified identities they give."""
    determinant: int
    form: BinaryForm
    diagonalizers: List[Diagonalizer]
    candidates: List[ExpansionIdentity] = field(default_factory=list)
    verified: bool = False


@dataclass
class ScanParams:
    max_det: int
    order: int
    max_index: int = 5
    lin_box: Optional[int] = None


def linear_class_key(form: ExtendedQuadForm) -> Tuple:
    """
    Key of the linear part up to integer translation and sign.

    X -> X + v turns d into d + 2A v and X -> -X turns d into -d; both only
    multiply the lattice sum by a signed power of q.
    """
    g2 = IntMatrix.of(form.doubled_gram())
    key = min(coset_key(g2, form.lin), coset_key(g2, tuple(-x for x in form.lin)))
    return key, form.delta


def coset_system(b: IntMatrix) -> CosetSystem:
    try:
        return CosetSystem.simple(b)
    except NotExactCoverError:
        return canonical_cosets(b)


def _targets(f: BinaryForm, max_index: int) -> List[Tuple[int, int]]:
    d = f.determinant
    targets = []
    for k in range(1, max_index + 1):
        total = int(k * k * d)
        for t1 in range(1, isqrt(total) + 1):
            if total % t1 == 0 and represent(f, t1):
                targets.append((t1, total // t1))
    return targets


def diagonalizers(f: BinaryForm, max_index: int) -> List[Diagonalizer]:
    """Every B with |det B| <= max_index taking f to a diagonal form, one per lattice."""
    seen: Dict[Tuple, Diagonalizer] = {}
    for target in _targets(f, max_index):
        for b in find_congruence_matrices(f.gram(), target):
            key = tuple(sorted(canonical_column(c) for c in b.columns()))
            seen.setdefault(key, Diagonalizer(b, target))
    return sorted(seen.values(), key=lambda d: (d.index, d.target, d.matrix.rows))


def _sweep(f: BinaryForm, box: int) -> List[ExtendedQuadForm]:
    forms = []
    seen = set()
    points = sorted(
        product(range(-box, box + 1), repeat=2),
        key=lambda d: (abs(d[0]) + abs(d[1]), d),
    )
    for delta in product((0, 1), repeat=2):
        for lin in points:
            form = f.to_extended(lin=lin, delta=delta)
            key = linear_class_key(form)
            if key not in seen:
                seen.add(key)
                forms.append(form)
    return forms


def scan_form(f: BinaryForm, params: ScanParams) -> ScanResult:
    """Diagonalizers of f and the identities from each pair of them over the linear sweep."""
    found = diagonalizers(f, params.max_index)
    result = ScanResult(determinant=int(f.determinant), form=f, diagonalizers=found)
    if len(found) < 2:
        return result
    systems = [coset_system(d.matrix) for d in found]
    box = params.lin_box if params.lin_box is not None else 2 * max(f.a, f.c)
    for form in _sweep(f, box):
        try:
            result.candidates.extend(engine_identities(form, systems, params.order, recheck_min_order=0))
        except ExpansionMismatchError as e:
            logger.error("scan_candidate_rejected", form=str(form), error=str(e))
    result.verified = bool(result.candidates)
    logger.info(
        "form_scanned",
        form=str(f),
        diagonalizers=len(found),
        candidates=len(result.candidates),
    )
    return result


class ScanCommand:
    """
    Command sweeping determinants for forms with several diagonalizers.

    Forms are scanned concurrently, at most ``max_workers`` at a time; the
    results come back ordered by determinant and form.
    """
    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or get_settings().MAX_WORKERS

    async def execute(self, params: ScanParams) -> List[ScanResult]:
        """
        Execute the scan.

        Args:
            params: Determinant bound, comparison order, matrix index bound
                and optional linear-part box

        Returns:
            Results for every reduced form with at least one diagonalizer

        Raises:
            ValueError: If max_det is below 1
        """
        if params.max_det < 1:
            raise ValueError("max_det must be at least 1")
        semaphore = asyncio.Semaphore(self.max_workers)

        async def scan(f: BinaryForm) -> ScanResult:
            async with semaphore:
                return await asyncio.to_thread(scan_form, f, params)

        forms = [f for d in range(1, params.max_det + 1) for f in enumerate_reduced_primitive(d)]
        results = await asyncio.gather(*(scan(f) for f in forms))
        kept = sorted(
            (r for r in results if r.diagonalizers),
            key=lambda r: (r.determinant, r.form),
        )
        logger.info(
            "scan_finished",
            max_det=params.max_det,
            forms=len(forms),
            identities=sum(len(r.candidates) for r in kept),
        )
        return kept


def to_records(results: List[ScanResult]) -> List[IdentityRecord]:
    """Scan identities as corpus records: each side is the lattice sum at scale 1."""
    records = []
    for result in results:
        for number, found in enumerate(result.candidates, start=1):
            f = result.form
            records.append(IdentityRecord(
                id=f"SCAN-{result.determinant}-{f.a}.{f.two_b}.{f.c}-{number}",
                lhs=found.lhs.to_expr(),
                rhs=found.rhs.to_expr(),
                derivation=Derivation(
                    form=found.form,
                    systems=(found.first, found.second),
                    multiplier=1,
                    expansions=(found.lhs.to_expr(), found.rhs.to_expr()),
                ),
                tags=("scan",),
            ))
    return records
