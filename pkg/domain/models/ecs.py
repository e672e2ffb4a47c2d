"""
Integer lattices B*Z^n and their exact covering systems.

A coset system pairs a nonsingular integer matrix B with representatives
R_1..R_k; it is an exact cover of Z^n when the translates B*Z^n + R_i
partition Z^n.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd
from typing import List, NamedTuple, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from domain.exceptions import NotExactCoverError, SingularMatrixError

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if n == 0 or any(len(row) != n for row in self.rows):
            raise ValueError("matrix must be square and non-empty")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_sympy(cls, m: Matrix) -> "IntMatrix":
        return cls.of(m.tolist())

    @property
    def n(self) -> int:
        return len(self.rows)

    def to_sympy(self) -> Matrix:
        return Matrix(self.rows)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.n)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.of(list(zip(*self.rows)))

    def apply(self, v: Sequence[int]) -> Vector:
        return tuple(sum(r * x for r, x in zip(row, v)) for row in self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix.from_sympy(self.to_sympy() * other.to_sympy())

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(str(x) for x in row) + "]" for row in self.rows) + "]"


class SimpleCovering(NamedTuple):
    """Column j (1-based) of the adjugate is coprime; k = |det B|."""
    j: int
    k: int


@lru_cache(maxsize=8192)
def det(b: IntMatrix) -> int:
    return int(b.to_sympy().det(method="bareiss"))


@lru_cache(maxsize=8192)
def adjugate(b: IntMatrix) -> IntMatrix:
    """The matrix B* with B * B* = det(B) * I."""
    return IntMatrix.from_sympy(b.to_sympy().adjugate())


def _require_nonsingular(b: IntMatrix) -> int:
    d = det(b)
    if d == 0:
        raise SingularMatrixError(f"matrix {b} is singular")
    return d


def coset_key(b: IntMatrix, v: Sequence[int]) -> Vector:
    """adj(B)*v mod det(B); two vectors share a coset iff their keys agree."""
    d = abs(_require_nonsingular(b))
    return tuple(x % d for x in adjugate(b).apply(v))


def lattice_member(b: IntMatrix, v: Sequence[int]) -> bool:
    """True iff B*y = v has an integer solution, i.e. adj(B)*v = 0 mod det(B)."""
    return not any(coset_key(b, v))


def is_simple_covering(b: IntMatrix) -> Optional[SimpleCovering]:
    """
    Find the first adjugate column with coprime entries.

    When column j qualifies, the multiples i*e_j for i over any k consecutive
    integers represent every coset of B*Z^n.
    """
    d = _require_nonsingular(b)
    adj = adjugate(b)
    for j, column in enumerate(adj.columns(), start=1):
        g = 0
        for x in column:
            g = gcd(g, x)
        if g == 1:
            return SimpleCovering(j, abs(d))
    return None


def centered_range(k: int) -> range:
    """i from -ceil(k/2)+1 to floor(k/2)."""
    return range(-((k - 1) // 2), k // 2 + 1)


@dataclass(frozen=True)
class CosetSystem:
    b: IntMatrix
    reps: Tuple[Vector, ...]

    @classmethod
    def along_axis(cls, b: IntMatrix, j: int, shifts: Sequence[int]) -> "CosetSystem":
        """Representatives i*e_j for the given i (j is 1-based)."""
        n = b.n
        if not 1 <= j <= n:
            raise ValueError(f"axis {j} out of range for dimension {n}")
        reps = tuple(tuple(i if axis == j - 1 else 0 for axis in range(n)) for i in shifts)
        return cls(b, reps)

    @classmethod
    def simple(cls, b: IntMatrix, centered: bool = True) -> "CosetSystem":
        """
        Representatives along the first coprime adjugate column.

        Raises:
            NotExactCoverError: if B is not a simple covering matrix
        """
        covering = is_simple_covering(b)
        if covering is None:
            raise NotExactCoverError(f"matrix {b} has no coprime adjugate column")
        shifts = centered_range(covering.k) if centered else range(covering.k)
        return cls.along_axis(b, covering.j, shifts)

    @property
    def k(self) -> int:
        return len(self.reps)


def verify_ecs(cs: CosetSystem) -> bool:
    d = det(cs.b)
    if d == 0 or len(cs.reps) != abs(d):
        return False
    for index, r in enumerate(cs.reps):
        for s in cs.reps[index + 1:]:
            if lattice_member(cs.b, tuple(x - y for x, y in zip(r, s))):
                return False
    return True


def canonical_cosets(b: IntMatrix) -> CosetSystem:
    """
    One representative per coset: the points of the box prod [0, h_ii)
    cut out by the Hermite normal form H of B, in lexicographic order.
    """
    d = _require_nonsingular(b)
    hnf = hermite_normal_form(b.to_sympy())
    if hnf.shape != (b.n, b.n) or not (hnf.is_upper or hnf.is_lower):
        raise SingularMatrixError(f"unexpected Hermite form {hnf.tolist()} for {b}")
    diagonal = [abs(int(hnf[i, i])) for i in range(b.n)]
    size = 1
    for h in diagonal:
        size *= h
    if size != abs(d):
        raise SingularMatrixError(f"Hermite form of {b} has index {size}, expected {abs(d)}")
    reps = tuple(product(*(range(h) for h in diagonal)))
    return CosetSystem(b, reps)


def covering_multiplicity(cs: CosetSystem, point: Sequence[int]) -> int:
    """Number of translates B*Z^n + R_i containing ``point``."""
    return sum(
        1 for r in cs.reps
        if lattice_member(cs.b, tuple(p - x for p, x in zip(point, r)))
    )
