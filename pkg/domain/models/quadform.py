"""
Extended quadratic forms and binary-form arithmetic.

An extended form is Q(X) + d.X + c with sign character (-1)^{delta.X}; the
quadratic part is stored as its coefficient triangle (coefficient of x_i x_j
for i <= j), so odd cross coefficients are allowed. Internally the doubled
Gram matrix 2A is an integer matrix and Q(X) = X^T (2A) X / 2.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from core.logging import get_logger
from domain.exceptions import NotPositiveDefiniteError
from domain.models.ecs import IntMatrix, det
from domain.models.series import QSeries

logger = get_logger(__name__)

RationalMatrix = Tuple[Tuple[Fraction, ...], ...]


def triangle_size(n: int) -> int:
    return n * (n + 1) // 2


@dataclass(frozen=True)
class ExtendedQuadForm:
    quad: Tuple[Tuple[int, ...], ...]
    lin: Tuple[int, ...]
    const: int = 0
    delta: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = len(self.quad)
        if any(len(row) != n for row in self.quad):
            raise ValueError("quadratic coefficients must form an n x n triangle")
        if any(self.quad[i][j] for i in range(n) for j in range(i)):
            raise ValueError("coefficients below the diagonal must be zero")
        if len(self.lin) != n:
            raise ValueError(f"linear part has {len(self.lin)} entries, expected {n}")
        if not self.delta:
            object.__setattr__(self, "delta", (0,) * n)
        if len(self.delta) != n or any(x not in (0, 1) for x in self.delta):
            raise ValueError("delta must be a 0/1 vector of the form's dimension")

    @classmethod
    def from_triangle(
        cls,
        coeffs: Sequence[int],
        lin: Optional[Sequence[int]] = None,
        const: int = 0,
        delta: Optional[Sequence[int]] = None,
    ) -> "ExtendedQuadForm":
        """Build from a11, a12, ..., a1n, a22, ..., ann."""
        n = 0
        while triangle_size(n) < len(coeffs):
            n += 1
        if triangle_size(n) != len(coeffs):
            raise ValueError(f"{len(coeffs)} coefficients do not form a triangle")
        it = iter(coeffs)
        quad = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                quad[i][j] = int(next(it))
        return cls(
            tuple(tuple(row) for row in quad),
            tuple(lin) if lin is not None else (0,) * n,
            const,
            tuple(delta) if delta is not None else (0,) * n,
        )

    @classmethod
    def from_doubled_gram(
        cls,
        doubled: Sequence[Sequence[int]],
        lin: Sequence[int],
        const: int = 0,
        delta: Optional[Sequence[int]] = None,
    ) -> "ExtendedQuadForm":
        n = len(doubled)
        quad = [[0] * n for _ in range(n)]
        for i in range(n):
            if doubled[i][i] % 2:
                raise ValueError("doubled Gram matrix must have an even diagonal")
            quad[i][i] = doubled[i][i] // 2
            for j in range(i + 1, n):
                if doubled[i][j] != doubled[j][i]:
                    raise ValueError("doubled Gram matrix must be symmetric")
                quad[i][j] = doubled[i][j]
        return cls(tuple(tuple(row) for row in quad), tuple(lin), const, tuple(delta) if delta else (0,) * n)

    @property
    def n(self) -> int:
        return len(self.quad)

    def triangle(self) -> List[int]:
        return [self.quad[i][j] for i in range(self.n) for j in range(i, self.n)]

    def doubled_gram(self) -> Tuple[Tuple[int, ...], ...]:
        n = self.n
        return tuple(
            tuple(2 * self.quad[i][i] if i == j else self.quad[min(i, j)][max(i, j)] for j in range(n))
            for i in range(n)
        )

    def gram(self) -> RationalMatrix:
        return tuple(tuple(Fraction(x, 2) for x in row) for row in self.doubled_gram())

    def is_diagonal(self) -> bool:
        return not any(self.quad[i][j] for i in range(self.n) for j in range(i + 1, self.n))

    def quadratic_value(self, x: Sequence[int]) -> int:
        n = self.n
        return sum(self.quad[i][j] * x[i] * x[j] for i in range(n) for j in range(i, n))

    def __str__(self) -> str:
        n = self.n
        parts = []
        for i in range(n):
            for j in range(i, n):
                c = self.quad[i][j]
                if c:
                    var = f"x{i + 1}^2" if i == j else f"x{i + 1}x{j + 1}"
                    parts.append((c, var))
        for i, c in enumerate(self.lin):
            if c:
                parts.append((c, f"x{i + 1}"))
        if self.const:
            parts.append((self.const, ""))
        text = ""
        for c, var in parts:
            sign = "-" if c < 0 else "+"
            mag = str(abs(c)) if abs(c) != 1 or not var else ""
            text += f" {sign} {mag}{var}"
        text = text.strip()
        if text.startswith("+ "):
            text = text[2:]
        if any(self.delta):
            text = f"(-1)^({','.join(str(x) for x in self.delta)}) q^({text})"
        return text


@dataclass(frozen=True, order=True)
class BinaryForm:
    """a x^2 + 2b xy + c y^2, stored with the middle coefficient two_b = 2b."""
    a: int
    two_b: int
    c: int

    @property
    def determinant(self) -> Fraction:
        return Fraction(4 * self.a * self.c - self.two_b ** 2, 4)

    @property
    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.determinant > 0

    @property
    def is_reduced(self) -> bool:
        return abs(self.two_b) <= self.a <= self.c

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.two_b), self.c) == 1

    def value(self, x: int, y: int) -> int:
        return self.a * x * x + self.two_b * x * y + self.c * y * y

    def gram(self) -> RationalMatrix:
        half = Fraction(self.two_b, 2)
        return ((Fraction(self.a), half), (half, Fraction(self.c)))

    def to_extended(
        self, lin: Sequence[int] = (0, 0), const: int = 0, delta: Sequence[int] = (0, 0)
    ) -> ExtendedQuadForm:
        return ExtendedQuadForm.from_triangle([self.a, self.two_b, self.c], lin, const, delta)

    def __str__(self) -> str:
        return f"({self.a},{self.two_b},{self.c})"


def _to_fractions(gram: Sequence[Sequence]) -> List[List[Fraction]]:
    return [[Fraction(x) for x in row] for row in gram]


def leading_minors(gram: Sequence[Sequence]) -> List[Fraction]:
    m = Matrix([[Rational(x.numerator, x.denominator) for x in row] for row in _to_fractions(gram)])
    minors = []
    for k in range(1, m.rows + 1):
        value = m[:k, :k].det()
        minors.append(Fraction(int(value.p), int(value.q)))
    return minors


def is_positive_definite(gram: Sequence[Sequence]) -> bool:
    return all(minor > 0 for minor in leading_minors(gram))


def cholesky_pivots(gram: Sequence[Sequence]) -> Tuple[List[Fraction], List[List[Fraction]]]:
    """
    Rational decomposition Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2.

    Raises:
        NotPositiveDefiniteError: if some pivot d_i is not positive
    """
    q = _to_fractions(gram)
    n = len(q)
    for i in range(n):
        if q[i][i] <= 0:
            raise NotPositiveDefiniteError(f"Gram matrix {gram} is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    pivots = [q[i][i] for i in range(n)]
    mu = [[q[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    return pivots, mu


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def lattice_points(
    gram: Sequence[Sequence],
    bound: Fraction,
    center: Optional[Sequence[Fraction]] = None,
) -> Iterator[Tuple[int, ...]]:
    """All integer x with (x + center)^T G (x + center) <= bound, by exact pivot-wise search."""
    pivots, mu = cholesky_pivots(gram)
    n = len(pivots)
    shift = [Fraction(0)] * n if center is None else [Fraction(x) for x in center]
    bound = Fraction(bound)
    if bound < 0:
        return
    x: List[int] = [0] * n
    y: List[Fraction] = [Fraction(0)] * n

    def search(i: int, remaining: Fraction) -> Iterator[Tuple[int, ...]]:
        if i < 0:
            yield tuple(x)
            return
        t = sum((mu[i][j] * y[j] for j in range(i + 1, n)), Fraction(0))
        radius = isqrt(_floor(remaining / pivots[i])) + 1
        middle = -t - shift[i]
        for xi in range(_floor(middle) - radius, _ceil(middle) + radius + 1):
            yi = xi + shift[i]
            used = pivots[i] * (yi + t) ** 2
            if used <= remaining:
                x[i] = xi
                y[i] = yi
                yield from search(i - 1, remaining - used)

    yield from search(n - 1, bound)


def eval_form(form: ExtendedQuadForm, x: Sequence[int]) -> Tuple[int, int]:
    """(sign, exponent) of the summand at X."""
    if len(x) != form.n:
        raise ValueError(f"point {tuple(x)} does not match dimension {form.n}")
    parity = sum(d * xi for d, xi in zip(form.delta, x)) % 2
    exponent = form.quadratic_value(x) + sum(d * xi for d, xi in zip(form.lin, x)) + form.const
    return (-1 if parity else 1), exponent


def _center(form: ExtendedQuadForm) -> Tuple[List[Fraction], Fraction]:
    """h with Q(x) + d.x = (x+h)^T A (x+h) - h^T A h, and the offset h^T A h."""
    a = Matrix([[Rational(x, 2) for x in row] for row in form.doubled_gram()])
    d = Matrix([Rational(x, 2) for x in form.lin])
    h = a.inv() * d
    center = [Fraction(int(v.p), int(v.q)) for v in h]
    offset = (h.T * a * h)[0, 0]
    return center, Fraction(int(offset.p), int(offset.q))


def direct_series(form: ExtendedQuadForm, order: int) -> QSeries:
    """
    The lattice sum of (-1)^{delta.X} q^{Q(X) + d.X + c} below ``order``.

    Raises:
        NotPositiveDefiniteError: if the quadratic part is not positive definite
    """
    gram = form.gram()
    if not is_positive_definite(gram):
        raise NotPositiveDefiniteError(f"form {form} is not positive definite")
    center, offset = _center(form)
    coeffs: Dict[int, int] = {}
    points = 0
    for x in lattice_points(gram, order - form.const + offset, center):
        sign, e = eval_form(form, x)
        if e < order:
            coeffs[e] = coeffs.get(e, 0) + sign
            points += 1
    logger.debug("direct_series_enumerated", form=str(form), order=order, points=points)
    return QSeries(coeffs, order)


def represent_gram(gram: Sequence[Sequence], m: int) -> List[Tuple[int, ...]]:
    """All integer x with x^T G x = m."""
    if m < 0:
        return []
    return sorted(
        x for x in lattice_points(gram, Fraction(m))
        if _quadratic(gram, x) == m
    )


def _quadratic(gram: Sequence[Sequence], x: Sequence[int]) -> Fraction:
    n = len(x)
    return sum((Fraction(gram[i][j]) * x[i] * x[j] for i in range(n) for j in range(n)), Fraction(0))


def represent(f: BinaryForm, m: int) -> List[Tuple[int, int]]:
    if not f.is_positive_definite:
        raise NotPositiveDefiniteError(f"binary form {f} is not positive definite")
    return represent_gram(f.gram(), m)


def reduce_binary(f: BinaryForm) -> Tuple[BinaryForm, IntMatrix]:
    """
    Gauss reduction to |2b| <= a <= c, with the unimodular witness U
    satisfying U^T Gram(f) U = Gram(reduced).
    """
    if not f.is_positive_definite:
        raise NotPositiveDefiniteError(f"binary form {f} is not positive definite")
    a, b, c = f.a, f.two_b, f.c
    u = ((1, 0), (0, 1))
    while True:
        r = (a - b) // (2 * a)
        b, c = b + 2 * r * a, a * r * r + b * r + c
        u = ((u[0][0], u[0][0] * r + u[0][1]), (u[1][0], u[1][0] * r + u[1][1]))
        if a > c:
            a, b, c = c, -b, a
            u = ((u[0][1], -u[0][0]), (u[1][1], -u[1][0]))
            continue
        break
    return BinaryForm(a, b, c), IntMatrix(u)


def enumerate_reduced_primitive(d: int) -> List[BinaryForm]:
    """All reduced primitive positive forms a x^2 + 2b xy + c y^2 with ac - b^2 = d."""
    if d < 1:
        raise ValueError("determinant must be positive")
    forms = []
    a = 1
    while 3 * a * a <= 4 * d:
        for b in range(-(a // 2), a // 2 + 1):
            if (d + b * b) % a:
                continue
            c = (d + b * b) // a
            form = BinaryForm(a, 2 * b, c)
            if form.is_reduced and form.is_primitive:
                forms.append(form)
        a += 1
    return sorted(forms)


def canonical_column(v: Sequence[int]) -> Tuple[int, ...]:
    """v or -v, whichever has a positive first nonzero entry."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def default_entry_bound(gram: Sequence[Sequence], target: Sequence[int]) -> int:
    """1 + ceil(sqrt(max target / min pivot)); every wanted column lies within it."""
    pivots, _ = cholesky_pivots(gram)
    r = _ceil(Fraction(max(target)) / min(pivots))
    root = isqrt(r)
    return 1 + root + (root * root != r)


def canonical_matrix(columns: Sequence[Sequence[int]]) -> IntMatrix:
    """Columns sign-normalized to a positive first nonzero entry; last column flipped if det < 0."""
    cols = [list(canonical_column(c)) for c in columns]
    matrix = IntMatrix.of([[cols[j][i] for j in range(len(cols))] for i in range(len(cols))])
    if det(matrix) < 0:
        cols[-1] = [-x for x in cols[-1]]
        matrix = IntMatrix.of([[cols[j][i] for j in range(len(cols))] for i in range(len(cols))])
    return matrix


def find_congruence_matrices(
    gram: Sequence[Sequence],
    target: Sequence[int],
    entry_bound: Optional[int] = None,
) -> List[IntMatrix]:
    """
    All integer B with B^T G B = diag(target) and entries within the bound,
    one per class of column sign flips.

    Each column is a representation of its target value; columns are
    assembled with pairwise orthogonality under G.
    """
    gram = _to_fractions(gram)
    n = len(gram)
    if len(target) != n:
        raise ValueError(f"target has {len(target)} entries, expected {n}")
    if not is_positive_definite(gram):
        raise NotPositiveDefiniteError(f"Gram matrix {gram} is not positive definite")
    bound = entry_bound if entry_bound is not None else default_entry_bound(gram, target)
    if bound < 1:
        raise ValueError("entry bound must be at least 1")
    if any(t < 1 for t in target):
        raise ValueError("target entries must be positive")

    candidates = []
    for t in target:
        vectors = {
            canonical_column(v) for v in represent_gram(gram, t)
            if max(abs(x) for x in v) <= bound
        }
        candidates.append(sorted(vectors))

    def inner(v: Sequence[int], w: Sequence[int]) -> Fraction:
        return sum((gram[i][j] * v[i] * w[j] for i in range(n) for j in range(n)), Fraction(0))

    found = set()

    def assemble(chosen: List[Tuple[int, ...]]) -> None:
        index = len(chosen)
        if index == n:
            found.add(canonical_matrix(chosen))
            return
        for v in candidates[index]:
            if v in chosen:
                continue
            if all(inner(v, w) == 0 for w in chosen):
                assemble(chosen + [v])

    assemble([])
    results = sorted(found, key=lambda m: m.rows)
    logger.debug("congruence_matrices_found", target=list(target), bound=bound, count=len(results))
    return results


def congruent_form(form: ExtendedQuadForm, b: IntMatrix) -> Tuple[Tuple[int, ...], ...]:
    """B^T (2A) B as an integer matrix."""
    g = Matrix(form.doubled_gram())
    m = b.to_sympy()
    return tuple(tuple(int(x) for x in row) for row in (m.T * g * m).tolist())
