"""
Text formats for matrices, forms, coset shifts and corpus records.

    matrix   1,-1;0,3          rows separated by ';' (fractions allowed for Gram input)
    vector   3,33
    form     quad: 3,2,4 | lin: 1,4 | const: 0 | delta: 1,0
    shifts   e1, -2..2   |   auto   |   0,0;1,0
"""
import re
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from domain.exceptions import ExpressionSyntaxError, FormatError, NotExactCoverError
from domain.models.ecs import CosetSystem, IntMatrix
from domain.models.identity import Derivation, IdentityRecord
from domain.models.parser import parse
from domain.models.quadform import ExtendedQuadForm

_AXIS_RE = re.compile(r"^\s*e(\d+)\s*,\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")
_INDEXED_KEY_RE = re.compile(r"^derivation\.([BE])(\d+)$")
_RECORD_KEYS = frozenset({
    "id", "scale", "lhs", "rhs", "notes", "tags", "product", "derivation.form", "derivation.multiplier",
})


def _int(token: str, context: str) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise FormatError(f"'{token.strip()}' is not an integer in {context}") from None


def parse_vector(text: str) -> Tuple[int, ...]:
    if not text.strip():
        raise FormatError("empty vector")
    return tuple(_int(t, f"vector '{text}'") for t in text.split(","))


def parse_rational_rows(text: str) -> List[List[Fraction]]:
    rows = []
    for row in text.split(";"):
        try:
            rows.append([Fraction(t.strip()) for t in row.split(",")])
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"row '{row.strip()}' is not a list of rationals") from None
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise FormatError(f"matrix '{text}' is not square")
    return rows


def parse_matrix(text: str) -> IntMatrix:
    rows = [[_int(t, f"matrix '{text}'") for t in row.split(",")] for row in text.split(";")]
    try:
        return IntMatrix.of(rows)
    except ValueError as exc:
        raise FormatError(f"matrix '{text}': {exc}") from None


def parse_gram(text: str) -> List[List[Fraction]]:
    rows = parse_rational_rows(text)
    n = len(rows)
    if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
        raise FormatError(f"Gram matrix '{text}' is not symmetric")
    return rows


def format_matrix(m: IntMatrix) -> str:
    return ";".join(",".join(str(x) for x in row) for row in m.rows)


def parse_form(text: str) -> ExtendedQuadForm:
    fields: Dict[str, str] = {}
    for part in text.split("|"):
        if ":" not in part:
            raise FormatError(f"form field '{part.strip()}' has no ':'")
        key, value = part.split(":", 1)
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"quad", "lin", "const", "delta"}
    if unknown:
        raise FormatError(f"unknown form fields {sorted(unknown)}")
    if "quad" not in fields:
        raise FormatError("form needs a 'quad' field")
    try:
        return ExtendedQuadForm.from_triangle(
            parse_vector(fields["quad"]),
            parse_vector(fields["lin"]) if "lin" in fields else None,
            _int(fields.get("const", "0"), "const"),
            parse_vector(fields["delta"]) if "delta" in fields else None,
        )
    except ValueError as exc:
        raise FormatError(f"form '{text}': {exc}") from None


def format_form(form: ExtendedQuadForm) -> str:
    def join(xs: Sequence[int]) -> str:
        return ",".join(str(x) for x in xs)

    return (
        f"quad: {join(form.triangle())} | lin: {join(form.lin)} | "
        f"const: {form.const} | delta: {join(form.delta)}"
    )


def parse_shifts(text: str, b: IntMatrix) -> CosetSystem:
    """
    Representatives for B: 'auto', an axis run 'e<j>, lo..hi', or explicit vectors.

    Raises:
        FormatError: on malformed text
        NotExactCoverError: for 'auto' when B has no coprime adjugate column
    """
    text = text.strip()
    if text == "auto":
        return CosetSystem.simple(b)
    match = _AXIS_RE.match(text)
    if match:
        j, lo, hi = (int(g) for g in match.groups())
        if not 1 <= j <= b.n:
            raise FormatError(f"axis e{j} out of range for dimension {b.n}")
        if hi < lo:
            raise FormatError(f"empty shift range {lo}..{hi}")
        return CosetSystem.along_axis(b, j, range(lo, hi + 1))
    reps = tuple(parse_vector(row) for row in text.split(";"))
    if any(len(r) != b.n for r in reps):
        raise FormatError(f"representatives '{text}' do not match dimension {b.n}")
    return CosetSystem(b, reps)


def format_shifts(cs: CosetSystem) -> str:
    reps = list(cs.reps)
    n = cs.b.n
    for j in range(n):
        if all(all(r[a] == 0 for a in range(n) if a != j) for r in reps):
            values = [r[j] for r in reps]
            if values == list(range(values[0], values[0] + len(values))):
                return f"e{j + 1}, {values[0]}..{values[-1]}"
    return ";".join(",".join(str(x) for x in r) for r in reps)


def _strip_comment(value: str) -> str:
    index = value.find(" #")
    return value[:index] if index >= 0 else value


def _split_systems(value: str, key: str) -> Tuple[str, str]:
    if "shifts:" not in value:
        raise FormatError(f"{key} needs 'shifts:' after the matrix")
    matrix, shifts = value.split("shifts:", 1)
    return matrix.strip(), shifts.strip()


def _read_fields(text: str, source: str) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise FormatError(f"{source}:{number}: expected 'key: value'")
        key, value = line.split(":", 1)
        key = key.strip()
        # notes are free text and keep any ' #'
        if key != "notes":
            value = _strip_comment(value)
        if key in fields and key != "notes":
            raise FormatError(f"{source}:{number}: duplicate key '{key}'")
        fields[key] = f"{fields[key]} {value.strip()}" if key in fields else value.strip()
    return fields


def parse_record(text: str, source: str = "<record>") -> IdentityRecord:
    """
    Read one corpus record of 'key: value' lines.

    A record may omit ``rhs`` when it carries a derivation form; the lattice
    sum of that form is then the right-hand side.

    Raises:
        FormatError: on unknown keys, missing fields or malformed values
    """
    fields = _read_fields(text, source)
    unknown = {k for k in fields if k not in _RECORD_KEYS and not _INDEXED_KEY_RE.match(k)}
    if unknown:
        raise FormatError(f"{source}: unknown keys {sorted(unknown)}")
    for required in ("id", "lhs"):
        if required not in fields:
            raise FormatError(f"{source}: missing '{required}'")
    if "rhs" not in fields and "derivation.form" not in fields:
        raise FormatError(f"{source}: record without 'rhs' needs 'derivation.form'")

    record_id = fields["id"]
    try:
        lhs = parse(fields["lhs"])
        rhs = parse(fields["rhs"]) if "rhs" in fields else None
        derivation = _parse_derivation(fields, source) if "derivation.form" in fields else None
    except ExpressionSyntaxError as exc:
        raise FormatError(f"{source}: record {record_id}: {exc}") from exc

    scale = _int(fields.get("scale", "1"), f"{source} scale")
    if scale < 1:
        raise FormatError(f"{source}: scale must be positive")
    tags = tuple(t.strip() for t in fields.get("tags", "").split(",") if t.strip())
    return IdentityRecord(
        id=record_id,
        lhs=lhs,
        rhs=rhs,
        variable_scale=scale,
        derivation=derivation,
        product_matrix=parse_matrix(fields["product"]) if "product" in fields else None,
        notes=fields.get("notes", ""),
        tags=tags,
    )


def _indexed(fields: Dict[str, str], prefix: str) -> Dict[int, str]:
    found = {}
    for key, value in fields.items():
        match = _INDEXED_KEY_RE.match(key)
        if match and match.group(1) == prefix:
            found[int(match.group(2))] = value
    return found


def _parse_derivation(fields: Dict[str, str], source: str) -> Derivation:
    form = parse_form(fields["derivation.form"])
    matrices = _indexed(fields, "B")
    if sorted(matrices) != list(range(1, len(matrices) + 1)) or not matrices:
        raise FormatError(f"{source}: derivation needs matrices B1..Bn without gaps")
    systems = []
    for index in sorted(matrices):
        key = f"derivation.B{index}"
        matrix_text, shifts_text = _split_systems(matrices[index], key)
        matrix = parse_matrix(matrix_text)
        if matrix.n != form.n:
            raise FormatError(f"{source}: {key} has dimension {matrix.n}, form has {form.n}")
        try:
            systems.append(parse_shifts(shifts_text, matrix))
        except NotExactCoverError as exc:
            raise FormatError(f"{source}: {key}: {exc}") from exc

    expected = _indexed(fields, "E")
    if any(i > len(systems) for i in expected):
        raise FormatError(f"{source}: expansion index beyond the last matrix")
    expansions = tuple(parse(expected[i]) if i in expected else None for i in range(1, len(systems) + 1))

    multiplier: Optional[int] = None
    if "derivation.multiplier" in fields:
        multiplier = _int(fields["derivation.multiplier"], f"{source} multiplier")
        if multiplier == 0:
            raise FormatError(f"{source}: multiplier must be nonzero")
    return Derivation(form=form, systems=tuple(systems), multiplier=multiplier, expansions=expansions)


def format_record(record: IdentityRecord) -> str:
    lines = [f"id: {record.id}", f"scale: {record.variable_scale}", f"lhs: {record.lhs}"]
    if record.rhs is not None:
        lines.append(f"rhs: {record.rhs}")
    if record.product_matrix is not None:
        lines.append(f"product: {format_matrix(record.product_matrix)}")
    d = record.derivation
    if d is not None:
        lines.append(f"derivation.form: {format_form(d.form)}")
        for index, cs in enumerate(d.systems, start=1):
            lines.append(f"derivation.B{index}: {format_matrix(cs.b)}   shifts: {format_shifts(cs)}")
        if d.multiplier is not None:
            lines.append(f"derivation.multiplier: {d.multiplier}")
        for index, side in enumerate(d.expansions, start=1):
            if side is not None:
                lines.append(f"derivation.E{index}: {side}")
    if record.tags:
        lines.append(f"tags: {', '.join(record.tags)}")
    if record.notes:
        lines.append(f"notes: {record.notes}")
    return "\n".join(lines) + "\n"
