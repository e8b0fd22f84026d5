from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from .norms import NormSpec
from .polynomial import PolynomialSpec
from .reports import TraceRow

Rows = List[List[float]]


class MatrixRequest(BaseModel):
    matrix: Rows = Field(..., min_length=1, description="matrix as a list of rows")


class SteepestRequest(BaseModel):
    layers: List[Rows] = Field(..., min_length=1, description="one gradient matrix per layer")
    norms: List[NormSpec]
    scales: Optional[List[float]] = None
    sharpness: float = Field(..., description="lambda, must be > 0")

    @model_validator(mode="after")
    def check_lengths(self) -> "SteepestRequest":
        if len(self.norms) != len(self.layers):
            raise ValueError(f"got {len(self.norms)} norms for {len(self.layers)} layers")
        if self.scales is not None and len(self.scales) != len(self.layers):
            raise ValueError(f"got {len(self.scales)} scales for {len(self.layers)} layers")
        return self


class SteepestResponse(BaseModel):
    updates: List[Rows]
    step_size: float
    dual_values: List[float]
    objective_value: float


class TraceRequest(BaseModel):
    matrix: Rows = Field(..., min_length=1)
    polynomial: PolynomialSpec = Field(default_factory=PolynomialSpec)


class TraceResponse(BaseModel):
    rows: List[TraceRow]
    final_error: float
