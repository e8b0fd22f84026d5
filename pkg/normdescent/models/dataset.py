import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from normdescent.core.exceptions import InvalidArgumentError
from normdescent.core.rng import SeedStream
from normdescent.linalg.matrix import MatrixField

NORM_TOL = 1e-10


class Dataset(BaseModel):
    """Samples as rows: ``inputs`` is n x d_in, ``targets`` is n x d_out.

    Every input has l2 norm sqrt(d_in).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    inputs: MatrixField
    targets: MatrixField
    hidden_map: Optional[MatrixField] = None

    @model_validator(mode="after")
    def check_samples(self) -> "Dataset":
        n, d_in = self.inputs.shape
        if self.targets.shape[0] != n:
            raise ValueError(f"{n} inputs but {self.targets.shape[0]} targets")
        norms = np.linalg.norm(self.inputs, axis=1)
        worst = float(np.max(np.abs(norms - math.sqrt(d_in))))
        if worst > NORM_TOL * max(1.0, math.sqrt(d_in)):
            raise ValueError(f"inputs must have l2 norm sqrt(d_in); worst deviation {worst:.3e}")
        if self.hidden_map is not None and self.hidden_map.shape != (self.d_out, d_in):
            raise ValueError(f"hidden_map must be {self.d_out}x{d_in}, got {self.hidden_map.shape}")
        return self

    @property
    def n(self) -> int:
        return int(self.inputs.shape[0])

    @property
    def d_in(self) -> int:
        return int(self.inputs.shape[1])

    @property
    def d_out(self) -> int:
        return int(self.targets.shape[1])


def normalize_rows(x: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise InvalidArgumentError("normalize_rows: cannot rescale a zero input")
    return x * (math.sqrt(x.shape[1]) / norms)


def make_dataset(d_in: int, d_out: int, n: int, seed: int, noise: float = 0.0) -> Dataset:
    """Gaussian inputs on the sqrt(d_in) sphere, targets from a hidden linear map."""
    if n < 1:
        raise InvalidArgumentError(f"make_dataset: n must be >= 1, got {n}")
    if d_in < 1 or d_out < 1:
        raise InvalidArgumentError(f"make_dataset: dimensions must be positive, got {d_in}, {d_out}")
    if noise < 0:
        raise InvalidArgumentError(f"make_dataset: noise must be >= 0, got {noise}")

    stream = SeedStream(seed).child("dataset")
    inputs = normalize_rows(stream.generator("inputs").standard_normal((n, d_in)))
    hidden = stream.generator("hidden_map").standard_normal((d_out, d_in)) / math.sqrt(d_in)
    targets = inputs @ hidden.T
    if noise > 0:
        targets = targets + noise * stream.generator("noise").standard_normal((n, d_out))
    return Dataset(inputs=inputs, targets=targets, hidden_map=hidden)
