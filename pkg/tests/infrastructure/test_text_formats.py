from fractions import Fraction

import pytest

from domain.exceptions import FormatError
from domain.models.ecs import IntMatrix
from domain.models.expr import Euler, q
from infrastructure.text_formats import (
    format_form,
    format_matrix,
    format_record,
    format_shifts,
    parse_form,
    parse_gram,
    parse_matrix,
    parse_record,
    parse_shifts,
)

I4_TEXT = """\
id: I4
lhs: H(q)*G(q^11) - q^2*G(q)*H(q^11)
rhs: 1
scale: 2
derivation.form: quad: 3,2,4 | lin: 1,4 | const: 0 | delta: 1,0
derivation.B1: 1,-1;0,3   shifts: e2, -1..1
derivation.B2: 1,3;-1,2   shifts: e1, -2..2
derivation.multiplier: 2
derivation.E1: f(-q)*f(-q^11)
tags: type-2, derivation
notes: first line
notes: second line
"""


class TestMatrixText:
    def test_parse_matrix(self):
        assert parse_matrix("1,-1;0,3") == IntMatrix.of([[1, -1], [0, 3]])

    def test_format_matrix(self):
        assert format_matrix(IntMatrix.of([[1, 3], [-1, 2]])) == "1,3;-1,2"

    @pytest.mark.parametrize("text", ["1,a;0,3", "1,2;3", "1,2,3;4,5,6"])
    def test_malformed_matrix(self, text):
        with pytest.raises(FormatError):
            parse_matrix(text)

    def test_gram_with_fractions(self):
        assert parse_gram("1,1/2;1/2,1") == [[1, Fraction(1, 2)], [Fraction(1, 2), 1]]

    def test_gram_must_be_symmetric(self):
        with pytest.raises(FormatError):
            parse_gram("1,1;0,1")


class TestFormText:
    def test_defaults(self):
        form = parse_form("quad: 1,1,1")

        assert form.lin == (0, 0)
        assert form.delta == (0, 0)
        assert form.const == 0

    def test_reads_back(self):
        form = parse_form("quad: 3,2,4 | lin: 1,4 | delta: 1,0")

        assert parse_form(format_form(form)) == form
        assert format_form(form) == "quad: 3,2,4 | lin: 1,4 | const: 0 | delta: 1,0"

    @pytest.mark.parametrize("text", [
        "lin: 1,2",
        "quad: 1,0,1 | cubic: 1",
        "quad: 1,0,1 | lin 1,2",
        "quad: 1,0",
        "quad: 1,0,1 | delta: 1,2",
    ])
    def test_malformed_form(self, text):
        with pytest.raises(FormatError):
            parse_form(text)


class TestShiftText:
    B = IntMatrix.of([[1, 3], [-1, 2]])

    def test_axis_run(self):
        system = parse_shifts("e1, -2..2", self.B)

        assert system.reps == ((-2, 0), (-1, 0), (0, 0), (1, 0), (2, 0))
        assert format_shifts(system) == "e1, -2..2"

    def test_auto(self):
        assert parse_shifts("auto", self.B) == parse_shifts("e1, -2..2", self.B)

    def test_explicit_vectors(self):
        b = IntMatrix.of([[1, 1], [-1, 1]])

        system = parse_shifts("0,0;1,0", b)

        assert system.reps == ((0, 0), (1, 0))
        assert format_shifts(system) == "e1, 0..1"

    @pytest.mark.parametrize("text", ["e3, 0..4", "e1, 2..1", "0,0,0"])
    def test_malformed_shifts(self, text):
        with pytest.raises(FormatError):
            parse_shifts(text, self.B)


class TestRecordText:
    def test_parse(self):
        record = parse_record(I4_TEXT, "I4.txt")

        assert record.id == "I4"
        assert record.variable_scale == 2
        assert record.kind == "derivation"
        assert record.tags == ("type-2", "derivation")
        assert record.notes == "first line second line"
        assert record.derivation.multiplier == 2
        assert len(record.derivation.systems) == 2
        assert record.derivation.expansions[1] is None

    def test_reads_back(self):
        record = parse_record(I4_TEXT, "I4.txt")

        assert parse_record(format_record(record)) == record

    def test_comments_are_ignored(self):
        record = parse_record("# heading\nid: X\nlhs: f(-q)  # Euler\nrhs: f(-q,-q^2)\n")

        assert record.lhs == Euler(q(1, -1))

    def test_notes_keep_hash_signs(self):
        # Arrange
        text = "id: X\nlhs: f(-q)\nrhs: f(-q,-q^2)\nnotes: Entry 29 #ii, cf. item #4\n"

        # Act
        record = parse_record(text)

        # Assert
        assert record.notes == "Entry 29 #ii, cf. item #4"
        assert parse_record(format_record(record)).notes == record.notes

    def test_lattice_record_without_rhs(self):
        record = parse_record(
            "id: L\nlhs: phi(q)*phi(q)\nderivation.form: quad: 1,0,1\nderivation.B1: 1,0;0,1   shifts: 0,0\n"
        )

        assert record.rhs is None
        assert record.derivation.multiplier is None

    @pytest.mark.parametrize("text,message", [
        ("lhs: 1\nrhs: 1\n", "missing 'id'"),
        ("id: X\nrhs: 1\n", "missing 'lhs'"),
        ("id: X\nlhs: 1\n", "needs 'derivation.form'"),
        ("id: X\nlhs: 1\nrhs: 1\ncolour: red\n", "unknown keys"),
        ("id: X\nid: Y\nlhs: 1\nrhs: 1\n", "duplicate key"),
        ("id: X\nlhs: phi(q\nrhs: 1\n", "record X"),
        ("id: X\nlhs: 1\nrhs: 1\nscale: 0\n", "scale"),
        ("id: X\nlhs: 1\nrhs: 1\nno colon here\n", "key: value"),
        ("id: X\nlhs: 1\nderivation.form: quad: 1,0,1\nderivation.B2: 1,0;0,1 shifts: 0,0\n", "without gaps"),
        ("id: X\nlhs: 1\nderivation.form: quad: 1,0,1\nderivation.B1: 2,0;0,2 shifts: auto\n", "B1"),
        ("id: X\nlhs: 1\nderivation.form: quad: 1,0,1\nderivation.B1: 1,0;0,1\n", "shifts:"),
        ("id: X\nlhs: 1\nderivation.form: quad: 1,0,1\nderivation.B1: 1,0;0,1 shifts: 0,0\n"
         "derivation.multiplier: 0\n", "nonzero"),
    ])
    def test_malformed_records(self, text, message):
        with pytest.raises(FormatError, match=message):
            parse_record(text, "bad.txt")
