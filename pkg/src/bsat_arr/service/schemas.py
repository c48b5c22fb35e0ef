"""Request and response models for the HTTP service.

Numeric data crosses the wire as exact rational strings ("p" or "p/q");
plain integers are accepted on input.  Responses carry the same run-report
shape the CLI prints.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class ArrangementModel(BaseModel):
    """A central arrangement: one coefficient row per hyperplane."""

    n: int = Field(description="ambient dimension")
    hyperplanes: list[list[int | str]] = Field(
        description="coefficient rows; entries are ints or rational strings"
    )

    def as_payload(self) -> dict:
        return {"n": self.n, "hyperplanes": self.hyperplanes}


class BFunctionRequest(BaseModel):
    mode: Literal["generic", "isolated"]
    n: int | None = None
    k: int | None = None
    arrangement: ArrangementModel | None = None


class MilnorRequest(BaseModel):
    arrangement: ArrangementModel
    max_degree: int | None = None


class LengthRequest(BaseModel):
    arrangement: ArrangementModel


class RewriteRequest(BaseModel):
    arrangement: ArrangementModel
    product: str = Field(description="comma list of 1-based hyperplane indices")
    degree: int | None = None


class VerifyRequest(BaseModel):
    grid: str | None = None
    arrangement: ArrangementModel | None = None


class CheckModel(BaseModel):
    name: str
    statement: str
    instance: str
    status: str


class RunReport(BaseModel):
    command: str
    input_digest: str
    results: dict
    checks: list[CheckModel]
    wall_time_ms: int


class HealthResponse(BaseModel):
    status: str
    version: str
