from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from normdescent.linalg.matrix import LayerList, Matrix, MatrixField, as_layers, check_same_shapes


def safe_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """num / den with 0 wherever den == 0 (the eps -> 0 limit of num / (den + eps))."""
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den > 0)
    return out


class AdamState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, validate_assignment=False)

    m: List[MatrixField]
    v: List[MatrixField]
    beta1: float = Field(0.9, ge=0, lt=1)
    beta2: float = Field(0.999, ge=0, lt=1)
    lr: float = Field(1e-3, gt=0)
    epsilon: float = Field(1e-8, ge=0)
    bias_correction: bool = False
    step_count: int = Field(0, ge=0)

    @classmethod
    def zeros(cls, params: Sequence[Matrix], **hyper) -> "AdamState":
        params = as_layers(params, "params")
        return cls(
            m=[np.zeros_like(p) for p in params],
            v=[np.zeros_like(p) for p in params],
            **hyper,
        )


def adam_step(state: AdamState, w: Sequence[Matrix], g: Sequence[Matrix]) -> LayerList:
    w = as_layers(w, "w")
    g = as_layers(g, "g")
    check_same_shapes(w, g, "g")
    check_same_shapes(w, state.m, "state.m")

    state.step_count += 1
    t = state.step_count
    b1, b2 = state.beta1, state.beta2

    new_w = []
    for i, (wi, gi) in enumerate(zip(w, g)):
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * gi
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * gi * gi
        m_hat, v_hat = state.m[i], state.v[i]
        if state.bias_correction:
            m_hat = m_hat / (1.0 - b1**t)
            v_hat = v_hat / (1.0 - b2**t)
        # sqrt(v_hat) == |g| when beta2 == 0; g * g underflows for tiny g
        root_v = np.abs(gi) if b2 == 0.0 else np.sqrt(v_hat)
        direction = safe_ratio(m_hat, root_v + state.epsilon)
        new_w.append(wi - state.lr * direction)
    return new_w
