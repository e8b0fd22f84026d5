"""Linear predictor under the square loss

    L(W) = 1/(2n) * sum_i 1/d_out * ||y_i - W x_i||^2

and the spectral majorization
    L(W + dW) <= L(W) + <grad L, dW> + (d_in / (2 d_out)) * ||dW||_spec^2.
"""
import numpy as np
from pydantic import BaseModel, ConfigDict

from normdescent.core.exceptions import ShapeError
from normdescent.linalg.matrix import Matrix, MatrixField, as_matrix
from normdescent.models.dataset import Dataset
from normdescent.norms.primal import matrix_norm
from normdescent.schemas.norms import NormSpec


class LinearModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    w: MatrixField  # d_out x d_in


def _check_shapes(w: Matrix, data: Dataset) -> None:
    if w.shape != (data.d_out, data.d_in):
        raise ShapeError(f"weights are {w.shape} but data needs ({data.d_out}, {data.d_in})")


def _residuals(w: Matrix, data: Dataset) -> np.ndarray:
    return data.inputs @ w.T - data.targets


def square_loss(model: LinearModel, data: Dataset) -> float:
    _check_shapes(model.w, data)
    r = _residuals(model.w, data)
    return float(np.sum(r * r)) / (2.0 * data.n * data.d_out)


def square_loss_grad(model: LinearModel, data: Dataset) -> Matrix:
    _check_shapes(model.w, data)
    r = _residuals(model.w, data)
    return (r.T @ data.inputs) / (data.n * data.d_out)


def spectral_sharpness(data: Dataset) -> float:
    """The lambda that makes the spectral bound a majorizer: d_in / d_out."""
    return data.d_in / data.d_out


def majorization_gap(model: LinearModel, delta: Matrix, data: Dataset) -> float:
    """Upper bound minus true loss at W + delta; never below roundoff."""
    delta = as_matrix(delta, "delta")
    _check_shapes(delta, data)
    base = square_loss(model, data)
    grad = square_loss_grad(model, data)
    bound = (
        base
        + float(np.sum(grad * delta))
        + 0.5 * spectral_sharpness(data) * matrix_norm(delta, NormSpec.spectral()) ** 2
    )
    moved = square_loss(LinearModel(w=model.w + delta), data)
    return bound - moved
