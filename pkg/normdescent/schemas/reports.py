from typing import List, Optional

from pydantic import BaseModel, Field


class InvariantResult(BaseModel):
    suite: str
    name: str
    passed: bool
    error: float = Field(..., description="measured worst-case error or violation")
    tolerance: float
    detail: str = ""


class VerificationReport(BaseModel):
    suite: str
    passed: bool
    total: int
    failed: int
    results: List[InvariantResult]


class ReferenceRow(BaseModel):
    domain: str
    norm: str
    solution: str
    optimizer: str


class ReferenceCheck(ReferenceRow):
    max_error: float
    passed: bool


class NormTableEntry(BaseModel):
    norm: str
    value: Optional[float] = None
    dual: Optional[float] = None
    note: str = ""


class NormTable(BaseModel):
    rows: int
    cols: int
    entries: List[NormTableEntry]
    reference: List[ReferenceRow]


class TraceRow(BaseModel):
    iteration: int
    error: float
    sigma_min: float
    sigma_max: float
