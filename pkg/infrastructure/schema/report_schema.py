#schemas
from typing import Any, List, Optional

import orjson
from pydantic import BaseModel, ConfigDict, Field

from application.commands.scan_commands import ScanResult
from application.commands.verify_commands import CorpusRun, DerivationReport, VerifyReport
from application.queries.lattice_queries import ExpansionResult
from infrastructure.text_formats import format_form, format_shifts


def dumps(model: BaseModel) -> str:
    """Compact JSON through orjson; keys keep declaration order."""
    return orjson.dumps(model.model_dump(mode="json")).decode()


def dumps_list(models: List[BaseModel]) -> str:
    return orjson.dumps([m.model_dump(mode="json") for m in models]).decode()


class VerifyReportSchema(BaseModel):
    """Statement check of one record."""
    id: str
    ok: bool
    first_mismatch: Optional[int] = None
    elapsed_ms: float = Field(..., ge=0)
    order: int
    compared_to: int = 0
    stage: Optional[str] = None
    error: Optional[str] = None

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "id": "I4",
                "ok": True,
                "first_mismatch": None,
                "elapsed_ms": 41.7,
                "order": 300,
                "compared_to": 300,
            }
        }
    )

    @classmethod
    def from_report(cls, report: VerifyReport) -> "VerifyReportSchema":
        return cls(**report.__dict__)


class DerivationReportSchema(BaseModel):
    """Derivation check of one record; ``failed_stage`` names the first failing stage."""
    id: str
    ok: bool
    elapsed_ms: float = Field(..., ge=0)
    order: int
    failed_stage: Optional[str] = None
    detail: Optional[str] = None
    first_mismatch: Optional[int] = None
    expansions: List[str] = Field(default_factory=list)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "id": "I4",
                "ok": True,
                "elapsed_ms": 120.5,
                "order": 200,
                "expansions": [
                    "2*f(-q^2,-q^4)*f(-q^22,-q^44)",
                    "2*f(-q^2,-q^8)*f(-q^44,-q^66) - 2*q^4*f(-q^4,-q^6)*f(-q^22,-q^88)",
                ],
            }
        }
    )

    @classmethod
    def from_report(cls, report: DerivationReport) -> "DerivationReportSchema":
        return cls(**report.__dict__)


class CorpusRunReport(BaseModel):
    ok: bool
    total: int
    failed: int
    reports: List[VerifyReportSchema]
    derivations: List[DerivationReportSchema] = Field(default_factory=list)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "ok": True,
                "total": 1,
                "failed": 0,
                "reports": [
                    {"id": "I7", "ok": True, "first_mismatch": None, "elapsed_ms": 12.0, "order": 300}
                ],
                "derivations": [],
            }
        }
    )

    @classmethod
    def from_run(cls, run: CorpusRun) -> "CorpusRunReport":
        return cls(
            ok=run.ok,
            total=len(run.reports),
            failed=sum(1 for r in run.reports if not r.ok),
            reports=[VerifyReportSchema.from_report(r) for r in run.reports],
            derivations=[DerivationReportSchema.from_report(d) for d in run.derivations],
        )


class ExpansionSchema(BaseModel):
    form: str
    matrix: List[List[int]]
    shifts: str
    image: List[List[int]]
    terms: List[str]
    vanishing: int = Field(..., ge=0)
    expression: str

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "form": "quad: 3,2,4 | lin: 1,4 | const: 0 | delta: 1,0",
                "matrix": [[1, -1], [0, 3]],
                "shifts": "e2, -1..1",
                "image": [[6, 0], [0, 66]],
                "terms": ["f(-q^2,-q^4)*f(-q^22,-q^44)", "f(-q^2,-q^4)*f(-q^22,-q^44)", "0"],
                "vanishing": 1,
                "expression": "2*f(-q^2,-q^4)*f(-q^22,-q^44)",
            }
        }
    )

    @classmethod
    def from_result(cls, result: ExpansionResult) -> "ExpansionSchema":
        return cls(
            form=format_form(result.form),
            matrix=[list(r) for r in result.system.b.rows],
            shifts=format_shifts(result.system),
            image=[list(r) for r in result.image],
            terms=["0" if t.vanishing else str(t) for t in result.combination.terms],
            vanishing=result.vanishing,
            expression=str(result.combination.collected()),
        )


class DiagonalizerSchema(BaseModel):
    matrix: List[List[int]]
    target: List[int]


class CandidateSchema(BaseModel):
    form: str
    first: List[List[int]]
    second: List[List[int]]
    lhs: str
    rhs: str


class ScanResultSchema(BaseModel):
    determinant: int = Field(..., ge=1)
    form: List[int] = Field(..., min_length=3, max_length=3)
    diagonalizers: List[DiagonalizerSchema]
    candidate_identities: List[CandidateSchema]
    verified: bool

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "determinant": 1,
                "form": [1, 0, 1],
                "diagonalizers": [
                    {"matrix": [[1, 0], [0, 1]], "target": [1, 1]},
                    {"matrix": [[1, 1], [-1, 1]], "target": [2, 2]},
                ],
                "candidate_identities": [],
                "verified": False,
            }
        }
    )

    @classmethod
    def from_result(cls, result: ScanResult) -> "ScanResultSchema":
        def rows(m: Any) -> List[List[int]]:
            return [list(r) for r in m.rows]

        return cls(
            determinant=result.determinant,
            form=[result.form.a, result.form.two_b, result.form.c],
            diagonalizers=[
                DiagonalizerSchema(matrix=rows(d.matrix), target=list(d.target))
                for d in result.diagonalizers
            ],
            candidate_identities=[
                CandidateSchema(
                    form=format_form(c.form),
                    first=rows(c.first.b),
                    second=rows(c.second.b),
                    lhs=str(c.lhs),
                    rhs=str(c.rhs),
                )
                for c in result.candidates
            ],
            verified=result.verified,
        )
