"""Prodigy without learning-rate schedule.

With ``beta1 == beta2 == 0`` the step collapses to sign descent whose step
size follows ``eta_{t+1} = max(eta_t, g_t . (w0 - w_t) / ||g_t||_1)``.

The denominator is ``sqrt(v) + epsilon`` by default. Both ``m`` and ``sqrt(v)``
scale with ``eta``, so at ``eta0 = 1e-6`` and ``epsilon = 1e-8`` gradient entries
below about ``1e-2`` are damped until ``eta`` grows. ``scale_epsilon`` uses
``sqrt(v) + eta * epsilon`` instead, which removes that dependence on ``eta``.
"""
import math
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from normdescent.linalg.matrix import (
    LayerList,
    Matrix,
    MatrixField,
    as_layers,
    check_same_shapes,
    frobenius_inner,
)
from normdescent.optimizers.adam import safe_ratio
from normdescent.schemas.optimizers import UpdateOrder


class ProdigyState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: List[MatrixField]
    v: List[MatrixField]
    r: float = 0.0
    s: List[MatrixField]
    eta: float = Field(1e-6, gt=0)
    beta1: float = Field(0.9, ge=0, lt=1)
    beta2: float = Field(0.999, ge=0, lt=1)
    epsilon: float = Field(1e-8, ge=0)
    w0: List[MatrixField]
    update_order: UpdateOrder = UpdateOrder.CURRENT
    scale_epsilon: bool = False
    step_count: int = Field(0, ge=0)

    @classmethod
    def start(cls, params: Sequence[Matrix], **hyper) -> "ProdigyState":
        params = as_layers(params, "params")
        return cls(
            m=[np.zeros_like(p) for p in params],
            v=[np.zeros_like(p) for p in params],
            s=[np.zeros_like(p) for p in params],
            w0=[p.copy() for p in params],
            **hyper,
        )


def prodigy_step(state: ProdigyState, w: Sequence[Matrix], g: Sequence[Matrix]) -> LayerList:
    w = as_layers(w, "w")
    g = as_layers(g, "g")
    check_same_shapes(w, g, "g")
    check_same_shapes(w, state.w0, "state.w0")

    eta = state.eta
    b1, b2 = state.beta1, state.beta2
    root_b2 = math.sqrt(b2)

    progress = 0.0
    for wi, gi, w0i in zip(w, g, state.w0):
        progress += frobenius_inner(gi, w0i - wi)
    state.r = root_b2 * state.r + (1.0 - root_b2) * eta**2 * progress

    s_l1 = 0.0
    for i, gi in enumerate(g):
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * eta * gi
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * eta**2 * gi * gi
        state.s[i] = root_b2 * state.s[i] + (1.0 - root_b2) * eta**2 * gi
        s_l1 += float(np.sum(np.abs(state.s[i])))

    # 0/0 on a zero accumulator leaves eta alone
    next_eta = max(eta, state.r / s_l1) if s_l1 > 0.0 else eta
    step_eta = next_eta if state.update_order is UpdateOrder.LOOKAHEAD else eta

    epsilon = eta * state.epsilon if state.scale_epsilon else state.epsilon
    new_w = [
        wi - step_eta * safe_ratio(mi, np.sqrt(vi) + epsilon)
        for wi, mi, vi in zip(w, state.m, state.v)
    ]
    state.eta = next_eta
    state.step_count += 1
    return new_w


def sign_prodigy_eta(eta: float, w0: Sequence[Matrix], w: Sequence[Matrix], g: Sequence[Matrix]) -> float:
    """The EMA-free step-size rule, evaluated directly."""
    g1 = sum(float(np.sum(np.abs(gi))) for gi in g)
    if g1 == 0.0:
        return eta
    progress = sum(frobenius_inner(gi, w0i - wi) for gi, w0i, wi in zip(g, w0, w))
    return max(eta, progress / g1)
