from .dataset import Dataset, make_dataset, normalize_rows
from .linear import (
    LinearModel,
    majorization_gap,
    spectral_sharpness,
    square_loss,
    square_loss_grad,
)
from .two_layer import TwoLayerNet, two_layer_forward_backward
from .gradcheck import central_difference, relative_error

__all__ = [
    "Dataset", "make_dataset", "normalize_rows",
    "LinearModel", "majorization_gap", "spectral_sharpness", "square_loss", "square_loss_grad",
    "TwoLayerNet", "two_layer_forward_backward",
    "central_difference", "relative_error",
]
