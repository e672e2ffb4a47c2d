from dataclasses import dataclass, field
from typing import Optional, Tuple

from domain.models.ecs import CosetSystem, IntMatrix
from domain.models.expr import ThetaExpr
from domain.models.quadform import ExtendedQuadForm


@dataclass(frozen=True)
class Derivation:
    """
    Coset systems expanding one extended form.

    With q replaced by q^scale, expansion i equals ``multiplier`` times
    ``expansions[i]``. A derivation without a multiplier only claims that
    its expansions agree with each other and with the lattice sum.
    """
    form: ExtendedQuadForm
    systems: Tuple[CosetSystem, ...]
    multiplier: Optional[int] = None
    expansions: Tuple[Optional[ThetaExpr], ...] = field(default=())

    def __post_init__(self):
        if not self.systems:
            raise ValueError("a derivation needs at least one coset system")
        if not self.expansions:
            object.__setattr__(self, "expansions", (None,) * len(self.systems))
        if len(self.expansions) != len(self.systems):
            raise ValueError("one expected expansion per coset system")


@dataclass(frozen=True)
class IdentityRecord:
    """
    lhs = rhs as q-series. A record without ``rhs`` claims that lhs equals
    the lattice sum of its derivation form.
    """
    id: str
    lhs: ThetaExpr
    rhs: Optional[ThetaExpr] = None
    variable_scale: int = 1
    derivation: Optional[Derivation] = None
    product_matrix: Optional[IntMatrix] = None
    notes: str = ""
    tags: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.rhs is None and self.derivation is None:
            raise ValueError(f"record {self.id} needs a right-hand side or a derivation form")

    @property
    def kind(self) -> str:
        if self.product_matrix is not None:
            return "product"
        if self.derivation is not None:
            return "derivation"
        return "statement"
