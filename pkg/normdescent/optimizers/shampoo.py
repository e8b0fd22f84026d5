from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from normdescent.core.exceptions import ShapeError
from normdescent.linalg.matrix import LayerList, Matrix, MatrixField, as_layers, check_same_shapes
from normdescent.linalg.roots import RootBackend, spd_inverse_root
from normdescent.schemas.optimizers import ShampooMode

ROOT_POWER = 4


class ShampooState(BaseModel):
    """Left (m x m) and right (n x n) preconditioner accumulators per layer."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    l_acc: List[MatrixField]
    r_acc: List[MatrixField]
    mode: ShampooMode = ShampooMode.SUM
    beta: float = Field(0.9, ge=0, lt=1)  # EMA decay, used only in ema mode
    lr: float = Field(1e-3, gt=0)
    epsilon: float = Field(1e-12, ge=0)
    root_backend: RootBackend = RootBackend.EIGEN
    step_count: int = Field(0, ge=0)

    @classmethod
    def zeros(cls, params: Sequence[Matrix], **hyper) -> "ShampooState":
        params = as_layers(params, "params")
        return cls(
            l_acc=[np.zeros((p.shape[0], p.shape[0])) for p in params],
            r_acc=[np.zeros((p.shape[1], p.shape[1])) for p in params],
            **hyper,
        )


def _accumulate(acc: Matrix, term: Matrix, state: ShampooState) -> Matrix:
    term = 0.5 * (term + term.T)
    if state.mode is ShampooMode.EMA:
        return state.beta * acc + (1.0 - state.beta) * term
    return acc + term


def _check_accumulators(state: ShampooState, w: LayerList) -> None:
    if len(state.l_acc) != len(w) or len(state.r_acc) != len(w):
        raise ShapeError(f"shampoo: state holds {len(state.l_acc)} layers, got {len(w)}")
    for i, wi in enumerate(w):
        rows, cols = wi.shape
        if state.l_acc[i].shape != (rows, rows) or state.r_acc[i].shape != (cols, cols):
            raise ShapeError(f"shampoo: accumulators of layer {i} do not match shape {wi.shape}")


def preconditioned_direction(state: ShampooState, i: int, g: Matrix) -> Matrix:
    left = spd_inverse_root(state.l_acc[i], ROOT_POWER, state.epsilon, state.root_backend)
    right = spd_inverse_root(state.r_acc[i], ROOT_POWER, state.epsilon, state.root_backend)
    return left @ g @ right


def shampoo_step(state: ShampooState, w: Sequence[Matrix], g: Sequence[Matrix]) -> LayerList:
    w = as_layers(w, "w")
    g = as_layers(g, "g")
    check_same_shapes(w, g, "g")
    _check_accumulators(state, w)

    state.step_count += 1
    new_w = []
    for i, (wi, gi) in enumerate(zip(w, g)):
        state.l_acc[i] = _accumulate(state.l_acc[i], gi @ gi.T, state)
        state.r_acc[i] = _accumulate(state.r_acc[i], gi.T @ gi, state)
        new_w.append(wi - state.lr * preconditioned_direction(state, i, gi))
    return new_w
