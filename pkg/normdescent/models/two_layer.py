from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from normdescent.core.exceptions import ShapeError
from normdescent.linalg.matrix import LayerList, MatrixField
from normdescent.models.dataset import Dataset


class TwoLayerNet(BaseModel):
    """x -> w2 @ max(0, w1 @ x)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    w1: MatrixField  # h x d_in
    w2: MatrixField  # d_out x h

    @property
    def layers(self) -> LayerList:
        return [self.w1, self.w2]


def two_layer_forward_backward(net: TwoLayerNet, data: Dataset) -> Tuple[float, LayerList]:
    """Square loss through the ramp network and the exact gradients of w1, w2."""
    h = net.w1.shape[0]
    if net.w1.shape[1] != data.d_in or net.w2.shape != (data.d_out, h):
        raise ShapeError(
            f"net shapes {net.w1.shape}, {net.w2.shape} do not chain from d_in={data.d_in} to d_out={data.d_out}"
        )

    pre = data.inputs @ net.w1.T  # n x h
    hidden = np.maximum(pre, 0.0)
    residual = hidden @ net.w2.T - data.targets  # n x d_out
    scale = 1.0 / (data.n * data.d_out)
    loss = 0.5 * scale * float(np.sum(residual * residual))

    d_out = scale * residual
    grad_w2 = d_out.T @ hidden
    d_pre = (d_out @ net.w2) * (pre > 0.0)  # subgradient 0 at the kink
    grad_w1 = d_pre.T @ data.inputs
    return loss, [grad_w1, grad_w2]
