"""Dense matrix values shared by every numerical module.

A ``Matrix`` is a 2-D ``float64`` numpy array with finite entries. Vectors
are carried as single-column matrices so that every operation sees one
shape convention.
"""
from typing import Annotated, Any, List, Sequence

import numpy as np
import numpy.typing as npt
from pydantic import PlainSerializer, PlainValidator

from normdescent.core.exceptions import InvalidArgumentError, ShapeError

Matrix = npt.NDArray[np.float64]
LayerList = List[Matrix]


def as_matrix(value: Any, name: str = "matrix") -> Matrix:
    """Coerce ``value`` into a finite 2-D float64 array (1-D becomes a column)."""
    try:
        array = np.array(value, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"{name}: cannot convert to a float matrix ({exc})") from exc
    if array.ndim == 0:
        array = array.reshape(1, 1)
    elif array.ndim == 1:
        array = array.reshape(-1, 1)
    elif array.ndim != 2:
        raise ShapeError(f"{name}: expected a 2-D array, got {array.ndim} dimensions")
    if array.size == 0:
        raise ShapeError(f"{name}: rows and cols must be positive, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InvalidArgumentError(f"{name}: entries must be finite")
    return array


def as_layers(values: Sequence[Any], name: str = "layers") -> LayerList:
    if len(values) == 0:
        raise InvalidArgumentError(f"{name}: layer list must be nonempty")
    return [as_matrix(v, f"{name}[{i}]") for i, v in enumerate(values)]


def check_same_shapes(a: Sequence[Matrix], b: Sequence[Matrix], what: str = "layers") -> None:
    if len(a) != len(b):
        raise ShapeError(f"{what}: expected {len(a)} layers, got {len(b)}")
    for i, (x, y) in enumerate(zip(a, b)):
        if x.shape != y.shape:
            raise ShapeError(f"{what}[{i}]: shape {y.shape} does not match {x.shape}")


def is_zero(m: Matrix) -> bool:
    return not np.any(m)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: a is {a.shape[0]}x{a.shape[1]} but b is {b.shape[0]}x{b.shape[1]}")
    return a @ b


def frobenius_inner(a: Matrix, b: Matrix) -> float:
    """Trace of ``a.T @ b``; also the dot product for vectors."""
    return float(np.sum(a * b))


def flatten_layers(layers: Sequence[Matrix]) -> np.ndarray:
    return np.concatenate([np.ravel(layer) for layer in layers])


def _validate_matrix_field(value: Any) -> Matrix:
    return as_matrix(value, "field")


def _serialize_matrix_field(value: Matrix) -> list:
    return np.asarray(value, dtype=np.float64).tolist()


# Pydantic field type: accepts nested row arrays, dumps back to them.
MatrixField = Annotated[
    np.ndarray,
    PlainValidator(_validate_matrix_field),
    PlainSerializer(_serialize_matrix_field, return_type=list),
]
