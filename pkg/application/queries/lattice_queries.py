from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from core.config import get_settings
from core.logging import get_logger
from domain.exceptions import NotPositiveDefiniteError
from domain.models.ecs import (
    CosetSystem,
    IntMatrix,
    SimpleCovering,
    canonical_cosets,
    centered_range,
    det,
    is_simple_covering,
    verify_ecs,
)
from domain.models.expansion import ThetaCombination, expand
from domain.models.quadform import (
    BinaryForm,
    ExtendedQuadForm,
    congruent_form,
    default_entry_bound,
    enumerate_reduced_primitive,
    find_congruence_matrices,
    is_positive_definite,
    reduce_binary,
)

logger = get_logger(__name__)


@dataclass
class ExpansionResult:
    form: ExtendedQuadForm
    system: CosetSystem
    combination: ThetaCombination
    image: Tuple[Tuple[int, ...], ...]

    @property
    def vanishing(self) -> int:
        return sum(1 for t in self.combination.terms if t.vanishing)


@dataclass
class MatrixSearchResult:
    gram: List[List[Fraction]]
    target: Tuple[int, ...]
    bound: int
    matrices: List[IntMatrix]


@dataclass
class ReductionResult:
    form: BinaryForm
    reduced: BinaryForm
    witness: IntMatrix


@dataclass
class EcsCheckResult:
    matrix: IntMatrix
    determinant: int
    simple: Optional[SimpleCovering]
    system: Optional[CosetSystem]
    exact: bool
    canonical: Optional[CosetSystem] = None
    shift_range: Optional[Tuple[int, int]] = None


class ExpandQuery:
    """Query expanding one extended form along one coset system."""

    def execute(
        self,
        form: ExtendedQuadForm,
        system: CosetSystem,
        recheck_min_order: Optional[int] = None,
        split_units: bool = False,
    ) -> ExpansionResult:
        """
        Execute the expansion.

        Args:
            form: The extended form
            system: Matrix and coset representatives
            recheck_min_order: Floor of the numeric re-check order (0 skips it)
            split_units: Print f(1, a) as 2 f(a, a^3)

        Returns:
            The expansion with the congruent form B^T (2A) B

        Raises:
            NotExactCoverError: If the representatives are not an exact cover
            NotDiagonalizedError: If B does not diagonalize the form
            ExpansionMismatchError: If the numeric re-check fails
        """
        if recheck_min_order is None:
            recheck_min_order = get_settings().RECHECK_MIN_ORDER
        combination = expand(form, system, recheck_min_order)
        if split_units:
            combination = combination.split_units()
        return ExpansionResult(
            form=form,
            system=system,
            combination=combination,
            image=congruent_form(form, system.b),
        )


class FindMatrixQuery:
    """Query for integer B with B^T G B = diag(target)."""

    def execute(
        self, gram: Sequence[Sequence], target: Sequence[int], bound: Optional[int] = None
    ) -> MatrixSearchResult:
        """
        Execute the congruence search.

        Raises:
            NotPositiveDefiniteError: If the Gram matrix is not positive definite
            ValueError: If the target does not fit the Gram matrix
        """
        gram = [[Fraction(x) for x in row] for row in gram]
        if not is_positive_definite(gram):
            raise NotPositiveDefiniteError(f"Gram matrix {gram} is not positive definite")
        if len(target) != len(gram) or any(t < 1 for t in target):
            raise ValueError(f"target {tuple(target)} needs {len(gram)} positive entries")
        used = bound if bound is not None else default_entry_bound(gram, target)
        matrices = find_congruence_matrices(gram, target, used)
        logger.info("matrix_search_done", target=list(target), bound=used, found=len(matrices))
        return MatrixSearchResult(gram=gram, target=tuple(target), bound=used, matrices=matrices)


class ReduceFormsQuery:
    """Query over reduced primitive binary forms."""

    def execute(self, determinant: int) -> List[BinaryForm]:
        """
        Execute the enumeration.

        Raises:
            ValueError: If the determinant is not positive
        """
        forms = enumerate_reduced_primitive(determinant)
        logger.info("forms_enumerated", determinant=determinant, count=len(forms))
        return forms

    def reduce(self, form: BinaryForm) -> ReductionResult:
        reduced, witness = reduce_binary(form)
        return ReductionResult(form=form, reduced=reduced, witness=witness)


class CheckEcsQuery:
    """Query checking whether representatives cover Z^n exactly under B."""

    def execute(self, matrix: IntMatrix, system: Optional[CosetSystem] = None) -> EcsCheckResult:
        """
        Execute the check.

        Without a system the simple-covering criterion picks the representatives
        when it applies, and the Hermite box of B is reported alongside.

        Raises:
            SingularMatrixError: If B is singular
        """
        d = det(matrix)
        simple = is_simple_covering(matrix)
        result = EcsCheckResult(matrix=matrix, determinant=d, simple=simple, system=system, exact=False)
        if system is None:
            result.canonical = canonical_cosets(matrix)
            if simple is not None:
                result.system = CosetSystem.simple(matrix)
                shifts = centered_range(simple.k)
                result.shift_range = (shifts.start, shifts.stop - 1)
            else:
                result.system = result.canonical
        result.exact = verify_ecs(result.system)
        logger.info(
            "ecs_checked",
            matrix=str(matrix),
            determinant=d,
            simple_column=simple.j if simple else None,
            exact=result.exact,
        )
        return result
