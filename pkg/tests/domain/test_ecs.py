from fractions import Fraction
from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from domain.exceptions import NotExactCoverError, SingularMatrixError
from domain.models.ecs import (
    CosetSystem,
    IntMatrix,
    adjugate,
    canonical_cosets,
    centered_range,
    coset_key,
    covering_multiplicity,
    det,
    is_simple_covering,
    lattice_member,
    verify_ecs,
)

entries = st.integers(-5, 5)
square_2 = st.lists(st.lists(entries, min_size=2, max_size=2), min_size=2, max_size=2)
square_3 = st.lists(st.lists(entries, min_size=3, max_size=3), min_size=3, max_size=3)

BOX = list(product(range(-3, 4), repeat=2))


class TestDeterminant:
    @given(st.one_of(square_2, square_3))
    def test_adjugate_inverts_up_to_det(self, rows):
        # Arrange
        b = IntMatrix.of(rows)
        d = det(b)

        # Act
        product_matrix = b @ adjugate(b)

        # Assert
        assert product_matrix == IntMatrix.of([[d * int(i == j) for j in range(b.n)] for i in range(b.n)])

    def test_known_values(self):
        assert det(IntMatrix.of([[1, -1], [0, 3]])) == 3
        assert det(IntMatrix.of([[1, 3], [-1, 2]])) == 5
        assert adjugate(IntMatrix.of([[1, -1], [0, 3]])) == IntMatrix.of([[3, 1], [0, 1]])

    def test_rejects_ragged_rows(self):
        with pytest.raises(ValueError):
            IntMatrix.of([[1, 2], [3]])

    def test_text_form(self):
        assert str(IntMatrix.of([[1, -1], [0, 3]])) == "[[1,-1],[0,3]]"


class TestLatticeMembership:
    @given(square_2, st.lists(st.integers(-20, 20), min_size=2, max_size=2))
    def test_image_points_are_members(self, rows, y):
        b = IntMatrix.of(rows)
        if det(b) == 0:
            return

        assert lattice_member(b, b.apply(y))

    def test_non_member(self):
        b = IntMatrix.of([[1, 1], [-1, 1]])

        assert lattice_member(b, (1, 1))
        assert not lattice_member(b, (1, 0))

    def test_singular_matrix(self):
        with pytest.raises(SingularMatrixError):
            coset_key(IntMatrix.of([[1, 2], [2, 4]]), (0, 0))


class TestSimpleCovering:
    def test_first_coprime_column(self):
        # adj = [[3, 1], [0, 1]]: column 1 has gcd 3
        covering = is_simple_covering(IntMatrix.of([[1, -1], [0, 3]]))

        assert covering == (2, 3)

    def test_no_coprime_column(self):
        assert is_simple_covering(IntMatrix.of([[2, 0], [0, 2]])) is None

    def test_criterion_matches_covering_sweep(self):
        """A coprime adjugate column j exactly when i*e_j, 0 <= i < k, tile the plane."""
        checked = 0
        for a, b, c, d in product(range(-3, 4), repeat=4):
            m = IntMatrix.of([[a, b], [c, d]])
            k = abs(a * d - b * c)
            if not 1 <= k <= 6:
                continue
            adj = adjugate(m)
            for j in (1, 2):
                coprime = _gcd(adj.column(j - 1)) == 1
                system = CosetSystem.along_axis(m, j, range(k))

                tiles = all(covering_multiplicity(system, p) == 1 for p in BOX)

                assert coprime == tiles, (m, j)
            checked += 1
        assert checked == 1560

    def test_centered_range(self):
        assert list(centered_range(3)) == [-1, 0, 1]
        assert list(centered_range(4)) == [-1, 0, 1, 2]
        assert list(centered_range(5)) == [-2, -1, 0, 1, 2]

    def test_simple_system(self):
        system = CosetSystem.simple(IntMatrix.of([[1, 3], [-1, 2]]))

        assert system.reps == ((-2, 0), (-1, 0), (0, 0), (1, 0), (2, 0))
        assert verify_ecs(system)

    def test_simple_system_requires_coprime_column(self):
        with pytest.raises(NotExactCoverError):
            CosetSystem.simple(IntMatrix.of([[2, 0], [0, 2]]))


class TestVerifyEcs:
    def test_duplicate_coset(self):
        b = IntMatrix.of([[1, 1], [-1, 1]])

        assert verify_ecs(CosetSystem(b, ((0, 0), (1, 0))))
        assert not verify_ecs(CosetSystem(b, ((0, 0), (1, 1))))

    def test_wrong_count(self):
        b = IntMatrix.of([[1, 1], [-1, 1]])

        assert not verify_ecs(CosetSystem(b, ((0, 0),)))

    @settings(max_examples=60)
    @given(st.one_of(square_2, square_3))
    def test_canonical_cosets_always_cover(self, rows):
        b = IntMatrix.of(rows)
        if det(b) == 0 or abs(det(b)) > 40:
            return

        system = canonical_cosets(b)

        assert system.k == abs(det(b))
        assert verify_ecs(system)

    def test_ternary_non_simple_matrix(self):
        b = IntMatrix.of([[1, 1, 1], [1, -1, 1], [0, 0, -2]])

        assert is_simple_covering(b) is None
        assert verify_ecs(canonical_cosets(b))

    def test_covering_multiplicity_counts_translates(self):
        b = IntMatrix.of([[2, 0], [0, 1]])
        doubled = CosetSystem(b, ((0, 0), (2, 0)))

        assert covering_multiplicity(doubled, (4, 3)) == 2
        assert covering_multiplicity(doubled, (1, 0)) == 0


def _gcd(values) -> int:
    g = 0
    for x in values:
        g = gcd(g, x)
    return g


def solves_integrally(inverse, v) -> bool:
    return all(sum(x * y for x, y in zip(row, v)).denominator == 1 for row in inverse)


class TestCorpusSystemsCover:
    def test_every_point_of_the_box_is_covered_once(self, corpus):
        # Arrange
        systems = [
            (record.id, cs)
            for record in corpus.get_all() if record.derivation is not None
            for cs in record.derivation.systems
        ]
        assert systems

        for record_id, cs in systems:
            inverse = [[Fraction(int(x.p), int(x.q)) for x in row] for row in cs.b.to_sympy().inv().tolist()]
            box = product(range(-8, 9), repeat=cs.b.n)

            # Act
            counts = {
                point: sum(
                    1 for r in cs.reps
                    if solves_integrally(inverse, [p - x for p, x in zip(point, r)])
                )
                for point in box
            }

            # Assert
            assert set(counts.values()) == {1}, (record_id, str(cs.b))
