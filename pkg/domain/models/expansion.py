"""
Expansion of lattice sums along exact covering systems.

Substituting X = B*Y + R_i into an extended form splits the lattice sum
into one sum per coset. When B^T A B is diagonal every coset sum factors
into theta functions, which are then normalized by the shift law.
"""
from dataclasses import dataclass, replace
from math import gcd
from typing import Dict, List, Sequence, Tuple

from sympy import Matrix

from core.logging import get_logger
from domain.exceptions import (
    DivergentThetaError,
    ExpansionMismatchError,
    MisalignedSeriesError,
    NotDiagonalizedError,
    NotExactCoverError,
    PreconditionError,
)
from domain.models.ecs import CosetSystem, IntMatrix, det, verify_ecs
from domain.models.expr import Add, Monomial, Scale, Sub, Theta, ThetaExpr, product
from domain.models.quadform import ExtendedQuadForm, congruent_form, direct_series
from domain.models.series import QSeries, first_mismatch, one, zero
from domain.models.theta import MonomialArg, normalize_theta, theta_series, theta_unit_split

logger = get_logger(__name__)


@dataclass(frozen=True)
class ThetaTerm:
    coeff: int
    q_shift: int
    factors: Tuple[Theta, ...]
    vanishing: bool = False

    def series(self, order: int) -> QSeries:
        inner = order - self.q_shift
        if self.vanishing or self.coeff == 0 or inner <= 0:
            return zero(order)
        out = one(inner)
        for factor in self.factors:
            out = out * theta_series(factor.a, factor.b, inner)
        return out.scale(self.coeff).shift(self.q_shift).truncate(order)

    def key(self) -> Tuple:
        return (self.q_shift, tuple(sorted((f.a, f.b) for f in self.factors)))

    def max_exponent(self) -> int:
        return max((max(f.a.exponent, f.b.exponent) for f in self.factors), default=0)

    def to_expr(self, magnitude_only: bool = False) -> ThetaExpr:
        c = abs(self.coeff) if magnitude_only else self.coeff
        parts: List[ThetaExpr] = list(self.factors)
        if self.q_shift:
            parts.insert(0, Monomial(1, self.q_shift))
        if not parts:
            return Monomial(c, 0)
        body = product(*parts)
        if c == 1:
            return body
        if isinstance(body, Monomial):
            return Monomial(c * body.c, body.e)
        return Scale(body, c)

    def __str__(self) -> str:
        return str(self.to_expr())


def _scale_arg(m: MonomialArg, k: int) -> MonomialArg:
    if m.exponent % k:
        raise MisalignedSeriesError(f"exponent {m.exponent} of {m} is not divisible by {k}")
    return MonomialArg(m.sign, m.exponent // k)


@dataclass(frozen=True)
class ThetaCombination:
    terms: Tuple[ThetaTerm, ...]

    def series(self, order: int) -> QSeries:
        out = zero(order)
        for term in self.terms:
            out = out + term.series(order)
        return out

    def nonvanishing(self) -> "ThetaCombination":
        return ThetaCombination(tuple(t for t in self.terms if not t.vanishing))

    def split_units(self) -> "ThetaCombination":
        """Rewrite every f(1, a) as 2 f(a, a^3)."""
        out = []
        for t in self.terms:
            coeff, factors = t.coeff, []
            for f in t.factors:
                unit, other = (f.a, f.b) if f.a.is_unit else (f.b, f.a)
                if unit == MonomialArg(1, 0) and other.exponent > 0:
                    two, x, y = theta_unit_split(other)
                    coeff *= two
                    factors.append(Theta(x, y))
                else:
                    factors.append(f)
            out.append(replace(t, coeff=coeff, factors=tuple(factors)))
        return ThetaCombination(tuple(out))

    def collected(self) -> "ThetaCombination":
        """Merge terms with equal monomial and factor multiset; drop vanishing and zero terms."""
        merged: Dict[Tuple, ThetaTerm] = {}
        for term in self.terms:
            if term.vanishing or term.coeff == 0:
                continue
            key = term.key()
            if key in merged:
                merged[key] = replace(merged[key], coeff=merged[key].coeff + term.coeff)
            else:
                merged[key] = term
        return ThetaCombination(tuple(t for t in merged.values() if t.coeff))

    def multiset(self) -> Dict[Tuple, int]:
        return {t.key(): t.coeff for t in self.collected().terms}

    def substitute_power(self, k: int) -> "ThetaCombination":
        """Replace q by q^k in every term."""
        return ThetaCombination(tuple(
            replace(
                t,
                q_shift=t.q_shift * k,
                factors=tuple(
                    Theta(MonomialArg(f.a.sign, f.a.exponent * k), MonomialArg(f.b.sign, f.b.exponent * k))
                    for f in t.factors
                ),
            )
            for t in self.terms
        ))

    def extract_power(self, k: int) -> "ThetaCombination":
        """
        Replace q^k by q in every term.

        Raises:
            MisalignedSeriesError: if some exponent is not divisible by k
        """
        if k < 1:
            raise ValueError("extraction power must be positive")
        out = []
        for t in self.terms:
            if t.q_shift % k:
                raise MisalignedSeriesError(f"prefactor q^{t.q_shift} is not divisible by {k}")
            factors = tuple(Theta(_scale_arg(f.a, k), _scale_arg(f.b, k)) for f in t.factors)
            out.append(replace(t, q_shift=t.q_shift // k, factors=factors))
        return ThetaCombination(tuple(out))

    def max_exponent(self) -> int:
        return max((t.max_exponent() for t in self.terms), default=0)

    def to_expr(self) -> ThetaExpr:
        terms = [t for t in self.terms if not t.vanishing]
        if not terms:
            return Monomial(0, 0)
        node = terms[0].to_expr()
        for term in terms[1:]:
            if term.coeff < 0:
                node = Sub(node, term.to_expr(magnitude_only=True))
            else:
                node = Add(node, term.to_expr())
        return node

    def __str__(self) -> str:
        return str(self.to_expr())


def transform(
    form: ExtendedQuadForm, b: IntMatrix, r: Sequence[int]
) -> Tuple[ExtendedQuadForm, int]:
    """
    Substitute X = B*Y + R.

    Returns the form in Y together with the constant sign (-1)^{delta.R};
    the remaining sign character is B^T delta mod 2.
    """
    n = form.n
    if b.n != n or len(r) != n:
        raise ValueError(f"matrix {b} and shift {tuple(r)} do not match dimension {n}")
    g2 = Matrix(form.doubled_gram())
    bm = b.to_sympy()
    rv = Matrix(list(r))
    quad2 = bm.T * g2 * bm
    lin = bm.T * (g2 * rv + Matrix(list(form.lin)))
    const = form.quadratic_value(r) + sum(d * x for d, x in zip(form.lin, r)) + form.const
    delta = bm.T * Matrix(list(form.delta))
    sign = -1 if sum(d * x for d, x in zip(form.delta, r)) % 2 else 1
    new_form = ExtendedQuadForm.from_doubled_gram(
        [[int(x) for x in row] for row in quad2.tolist()],
        [int(x) for x in lin],
        const,
        [int(x) % 2 for x in delta],
    )
    return new_form, sign


def normalized_product(
    prefactor: MonomialArg, coeff: int, pairs: Sequence[Tuple[MonomialArg, MonomialArg]]
) -> ThetaTerm:
    """coeff * prefactor * prod f(a, b), with every factor brought to canonical range."""
    sign = coeff * prefactor.sign
    shift = prefactor.exponent
    factors = []
    vanishing = False
    for a, b in pairs:
        norm = normalize_theta(a, b)
        sign *= norm.coeff
        shift += norm.shift
        vanishing = vanishing or norm.vanishing
        factors.append(Theta(norm.a, norm.b))
    return ThetaTerm(sign, shift, tuple(factors), vanishing)


def factor_diagonal(form: ExtendedQuadForm, sign: int = 1) -> ThetaTerm:
    """
    Write a diagonal lattice sum as a product of theta functions.

    Each coordinate with diagonal m, linear coefficient l and parity e
    contributes sum_y (-1)^{e y} q^{m y^2 + l y} = f(u q^{m+l}, u q^{m-l}).

    Raises:
        NotDiagonalizedError: if the form has cross terms
        DivergentThetaError: if a diagonal coefficient is not positive
    """
    if not form.is_diagonal():
        raise NotDiagonalizedError(f"form {form} has cross terms")
    pairs = []
    for i in range(form.n):
        m, l = form.quad[i][i], form.lin[i]
        if m <= 0:
            raise DivergentThetaError(f"diagonal coefficient {m} of x{i + 1} is not positive")
        u = -1 if form.delta[i] else 1
        pairs.append((MonomialArg(u, m + l), MonomialArg(u, m - l)))
    return normalized_product(MonomialArg(1, form.const), sign, pairs)


def recheck_order(combination: ThetaCombination, minimum: int) -> int:
    return max(2 * combination.max_exponent(), minimum)


def expand(
    form: ExtendedQuadForm, cs: CosetSystem, recheck_min_order: int = 100
) -> ThetaCombination:
    """
    One theta product per coset representative, in representative order.

    The combination is compared with the direct lattice sum before it is
    returned; ``recheck_min_order`` <= 0 skips the comparison.

    Raises:
        NotExactCoverError: if the coset system is not an exact cover
        NotDiagonalizedError: if B^T A B has cross terms
        ExpansionMismatchError: if the expansion disagrees with the lattice sum
    """
    if not verify_ecs(cs):
        raise NotExactCoverError(f"representatives {list(cs.reps)} do not cover Z^n exactly under {cs.b}")
    image = congruent_form(form, cs.b)
    if any(image[i][j] for i in range(form.n) for j in range(form.n) if i != j):
        raise NotDiagonalizedError(f"{cs.b} does not diagonalize {form}: B^T(2A)B = {image}")
    terms = []
    for r in cs.reps:
        new_form, sign = transform(form, cs.b, r)
        terms.append(factor_diagonal(new_form, sign))
    combination = ThetaCombination(tuple(terms))
    if recheck_min_order > 0:
        order = recheck_order(combination, recheck_min_order)
        mismatch = first_mismatch(combination.series(order), direct_series(form, order), order)
        if mismatch is not None:
            raise ExpansionMismatchError(
                f"expansion of {form} under {cs.b} differs from the lattice sum at q^{mismatch}"
            )
    logger.info(
        "expansion_built",
        form=str(form),
        matrix=str(cs.b),
        terms=len(terms),
        vanishing=sum(1 for t in terms if t.vanishing),
    )
    return combination


def _theta_sum(arg: MonomialArg, other: MonomialArg) -> int:
    return arg.exponent + other.exponent


def check_product_preconditions(
    a1: MonomialArg, b1: MonomialArg, a2: MonomialArg, b2: MonomialArg, b: IntMatrix
) -> int:
    """
    Validate a product expansion and return k = |det B|.

    Raises:
        PreconditionError: naming the first violated condition
    """
    if b.n != 2:
        raise PreconditionError(f"matrix {b} must be 2x2")
    m1, m2 = _theta_sum(a1, b1), _theta_sum(a2, b2)
    if m1 < 1 or m2 < 1:
        raise PreconditionError(f"exponent sums {m1}, {m2} must be positive")
    (b11, b12), (b21, b22) = b.rows
    k = abs(det(b))
    if k == 0:
        raise PreconditionError(f"matrix {b} is singular")
    if m1 * b11 * b12 + m2 * b21 * b22 != 0:
        raise PreconditionError(
            f"m1*b11*b12 + m2*b21*b22 = {m1 * b11 * b12 + m2 * b21 * b22}, expected 0"
        )
    if gcd(b21, b22) != 1:
        raise PreconditionError(f"gcd(b21, b22) = {gcd(b21, b22)}, expected 1")
    return k


def _column_args(
    a: MonomialArg, b: MonomialArg, c: MonomialArg, d: MonomialArg, top: int, bottom: int, i: int
) -> Tuple[MonomialArg, MonomialArg]:
    first = (
        a ** ((top * top + top) // 2 + top * i)
        * b ** ((top * top - top) // 2 + top * i)
        * c ** ((bottom * bottom + bottom) // 2)
        * d ** ((bottom * bottom - bottom) // 2)
    )
    second = (
        a ** ((top * top - top) // 2 - top * i)
        * b ** ((top * top + top) // 2 - top * i)
        * c ** ((bottom * bottom - bottom) // 2)
        * d ** ((bottom * bottom + bottom) // 2)
    )
    return first, second


def theorem_expansion(
    a: MonomialArg, b: MonomialArg, c: MonomialArg, d: MonomialArg, matrix: IntMatrix
) -> ThetaCombination:
    """
    f(a,b) f(c,d) = sum_{i=0}^{k-1} a^{(i^2+i)/2} b^{(i^2-i)/2} f(A_1(i), B_1(i)) f(A_2(i), B_2(i)),
    the columns of B giving the exponents of the two factors.
    """
    k = check_product_preconditions(a, b, c, d, matrix)
    (b11, b12), (b21, b22) = matrix.rows
    terms = []
    for i in range(k):
        prefactor = a ** ((i * i + i) // 2) * b ** ((i * i - i) // 2)
        pairs = [
            _column_args(a, b, c, d, b11, b21, i),
            _column_args(a, b, c, d, b12, b22, i),
        ]
        terms.append(normalized_product(prefactor, 1, pairs))
    return ThetaCombination(tuple(terms))


def product_form(
    a1: MonomialArg, b1: MonomialArg, a2: MonomialArg, b2: MonomialArg
) -> Tuple[ExtendedQuadForm, int]:
    """
    The lattice sum of f(a1,b1) f(a2,b2) as an extended form in q^s, s in {1, 2}.

    Raises:
        PreconditionError: if a factor has arguments of different signs
    """
    if a1.sign != b1.sign or a2.sign != b2.sign:
        raise PreconditionError("each theta factor needs arguments of equal sign")
    m1, m2 = _theta_sum(a1, b1), _theta_sum(a2, b2)
    s = 1 if m1 % 2 == 0 and m2 % 2 == 0 else 2
    quad = [s * m1 // 2, 0, s * m2 // 2]
    lin = [s * (a1.exponent - b1.exponent) // 2, s * (a2.exponent - b2.exponent) // 2]
    delta = [int(a1.sign < 0), int(a2.sign < 0)]
    return ExtendedQuadForm.from_triangle(quad, lin, 0, delta), s


def expand_product(
    a1: MonomialArg,
    b1: MonomialArg,
    a2: MonomialArg,
    b2: MonomialArg,
    matrix: IntMatrix,
    recheck_min_order: int = 100,
) -> ThetaCombination:
    """
    Expand f(a1,b1) f(a2,b2) over the cosets B*Z^2 + i*e_1, i = 0..k-1.

    When both factors have equal-sign arguments the product is also run
    through the general engine and the two expansions must agree term for
    term; mixed-sign factors use the closed form alone.

    Raises:
        PreconditionError: if B violates a product-expansion condition
        ExpansionMismatchError: if the closed form and the engine disagree
    """
    k = check_product_preconditions(a1, b1, a2, b2, matrix)
    closed = theorem_expansion(a1, b1, a2, b2, matrix)
    if a1.sign == b1.sign and a2.sign == b2.sign:
        form, s = product_form(a1, b1, a2, b2)
        cs = CosetSystem.along_axis(matrix, 1, range(k))
        engine = expand(form, cs, recheck_min_order)
        try:
            engine = engine.extract_power(s)
        except MisalignedSeriesError as exc:
            raise ExpansionMismatchError(f"engine expansion is not a series in q^{s}: {exc}") from exc
        if engine.multiset() != closed.multiset():
            raise ExpansionMismatchError(
                f"closed form {closed} and engine expansion {engine} disagree"
            )
    if recheck_min_order > 0:
        order = recheck_order(closed, recheck_min_order)
        target = theta_series(a1, b1, order) * theta_series(a2, b2, order)
        mismatch = first_mismatch(closed.series(order), target, order)
        if mismatch is not None:
            raise ExpansionMismatchError(f"product expansion differs from the product at q^{mismatch}")
    logger.info("product_expanded", matrix=str(matrix), terms=len(closed.terms))
    return closed


def entry29(a: MonomialArg, b: MonomialArg, c: MonomialArg, d: MonomialArg) -> ThetaCombination:
    """
    f(a,b) f(c,d) = f(ad, bc) f(ac, bd) + a f(c/a, a^2 bd) f(d/a, a^2 bc) for ab = cd.

    Raises:
        PreconditionError: if ab != cd
    """
    if a * b != c * d:
        raise PreconditionError(f"ab = {a * b} differs from cd = {c * d}")
    inv_a = a ** -1
    first = normalized_product(MonomialArg(1, 0), 1, [(a * d, b * c), (a * c, b * d)])
    second = normalized_product(
        a, 1, [(c * inv_a, a * a * b * d), (d * inv_a, a * a * b * c)]
    )
    return ThetaCombination((first, second))


def combination_from_product(pairs: Sequence[Tuple[MonomialArg, MonomialArg]]) -> ThetaCombination:
    """A single-term combination holding prod f(a, b), normalized."""
    return ThetaCombination((normalized_product(MonomialArg(1, 0), 1, pairs),))


@dataclass(frozen=True)
class ExpansionIdentity:
    """Two expansions of one lattice sum, read as an identity lhs = rhs."""
    form: ExtendedQuadForm
    first: CosetSystem
    second: CosetSystem
    lhs: ThetaCombination
    rhs: ThetaCombination


def engine_identities(
    form: ExtendedQuadForm,
    systems: Sequence[CosetSystem],
    order: int,
    recheck_min_order: int = 100,
) -> List[ExpansionIdentity]:
    """
    Expand ``form`` along every system and pair up the expansions that differ.

    Pairs whose collected terms coincide are dropped, as is everything when
    the lattice sum vanishes below ``order``. Each kept pair is compared as
    series below ``order``.

    Raises:
        ExpansionMismatchError: if two expansions disagree below ``order``
    """
    expansions = [expand(form, cs, recheck_min_order).collected() for cs in systems]
    series = [e.series(order) for e in expansions]
    if all(s.is_zero() for s in series):
        return []
    found = []
    for i, first in enumerate(expansions):
        for j in range(i + 1, len(expansions)):
            second = expansions[j]
            if first.multiset() == second.multiset():
                continue
            mismatch = first_mismatch(series[i], series[j], order)
            if mismatch is not None:
                raise ExpansionMismatchError(
                    f"expansions of {form} under {systems[i].b} and {systems[j].b} differ at q^{mismatch}"
                )
            found.append(ExpansionIdentity(form, systems[i], systems[j], first, second))
    return found
