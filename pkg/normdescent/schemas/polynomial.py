import math
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Normalization(str, Enum):
    SPECTRAL = "spectral"
    FROBENIUS = "frobenius"


# Both normalizations leave every singular value in (0, 1].
NORMALIZED_SIGMA_MAX = 1.0
GRID_POINTS = 10_000
SQRT3 = math.sqrt(3.0)

POLYNOMIAL_PRESETS: Dict[str, Tuple[float, ...]] = {
    "cubic": (1.5, -0.5),
    "quintic": (3.4445, -4.7750, 2.0315),
}


class PolynomialSpec(BaseModel):
    """Odd polynomial g(x) = c0*x + c1*x^3 + c2*x^5 + ... iterated on the
    singular values of the normalized input."""

    model_config = ConfigDict(frozen=True)

    coefficients: Tuple[float, ...] = Field(POLYNOMIAL_PRESETS["cubic"], min_length=1)
    iterations: int = Field(30, ge=1)
    normalization: Normalization = Normalization.SPECTRAL

    def scalar_map(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        x2 = x * x
        acc = np.zeros_like(x)
        for c in reversed(self.coefficients):
            acc = acc * x2 + c
        return acc * x

    @model_validator(mode="after")
    def check_singular_value_range(self) -> "PolynomialSpec":
        x = np.linspace(NORMALIZED_SIGMA_MAX / GRID_POINTS, NORMALIZED_SIGMA_MAX, GRID_POINTS)
        for t in range(self.iterations):
            x = self.scalar_map(x)
            if not np.all(np.isfinite(x)) or np.any(x <= 0.0) or np.any(x >= SQRT3):
                raise ValueError(
                    f"coefficients {list(self.coefficients)} push singular values out of "
                    f"(0, sqrt(3)) at iteration {t + 1}"
                )
        return self

    @classmethod
    def preset(
        cls,
        name: str,
        iterations: Optional[int] = None,
        normalization: Normalization = Normalization.SPECTRAL,
    ) -> "PolynomialSpec":
        if name not in POLYNOMIAL_PRESETS:
            raise ValueError(f"unknown polynomial preset {name!r}; valid: {sorted(POLYNOMIAL_PRESETS)}")
        kwargs = {"coefficients": POLYNOMIAL_PRESETS[name], "normalization": normalization}
        if iterations is not None:
            kwargs["iterations"] = iterations
        return cls(**kwargs)

    @classmethod
    def cubic(cls, iterations: int = 30, normalization: Normalization = Normalization.SPECTRAL):
        return cls.preset("cubic", iterations, normalization)

    @classmethod
    def quintic(cls, iterations: int = 5, normalization: Normalization = Normalization.SPECTRAL):
        return cls.preset("quintic", iterations, normalization)
