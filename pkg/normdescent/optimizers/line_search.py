"""Step-size warmup rules that decide when the weights have left the
linearization around the initial point."""
import math
from typing import List, NamedTuple, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from normdescent.core.exceptions import InvalidArgumentError
from normdescent.linalg.matrix import Matrix, MatrixField, as_layers, check_same_shapes, flatten_layers
from normdescent.schemas.optimizers import LineSearchAnchor, LineSearchPolicy

COSINE_MIN_FACTOR = 1e-3


class LineSearchState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    eta: float = Field(..., gt=0)
    policy: LineSearchPolicy = Field(LineSearchPolicy.PRODIGY_MAX, frozen=True)
    anchor: LineSearchAnchor = LineSearchAnchor.INITIAL
    w0: List[MatrixField]
    prev_w: List[MatrixField]
    frozen: bool = False  # doubling stopped
    min_factor: float = Field(COSINE_MIN_FACTOR, gt=0, le=1)

    @classmethod
    def start(cls, params: Sequence[Matrix], eta: float, **options) -> "LineSearchState":
        params = as_layers(params, "params")
        return cls(
            eta=eta,
            w0=[p.copy() for p in params],
            prev_w=[p.copy() for p in params],
            **options,
        )


class EscapeDiagnostics(NamedTuple):
    cos_theta: float
    norm_ratio: float  # ||g||_2 / ||g||_1
    displacement_rms: float  # ||w - w0||_RMS


def escape_diagnostics(w0: Sequence[Matrix], w: Sequence[Matrix], g: Sequence[Matrix]) -> EscapeDiagnostics:
    """Angle between g and w0 - w, plus the quantities that turn the
    l2 displacement into an RMS one. Undefined values report 0."""
    d = flatten_layers(w0) - flatten_layers(w)
    gv = flatten_layers(g)
    d_norm = float(np.linalg.norm(d))
    g2 = float(np.linalg.norm(gv))
    g1 = float(np.sum(np.abs(gv)))
    cos_theta = float(gv @ d) / (g2 * d_norm) if g2 > 0 and d_norm > 0 else 0.0
    return EscapeDiagnostics(
        cos_theta=cos_theta,
        norm_ratio=g2 / g1 if g1 > 0 else 0.0,
        displacement_rms=d_norm / math.sqrt(d.size),
    )


def line_search_update(state: LineSearchState, w: Sequence[Matrix], g: Sequence[Matrix]) -> float:
    w = as_layers(w, "w")
    g = as_layers(g, "g")
    check_same_shapes(state.w0, w, "w")
    check_same_shapes(w, g, "g")

    anchor = state.w0 if state.anchor is LineSearchAnchor.INITIAL else state.prev_w
    d = flatten_layers(anchor) - flatten_layers(w)
    gv = flatten_layers(g)
    state.prev_w = [wi.copy() for wi in w]

    if state.policy is LineSearchPolicy.PRODIGY_MAX:
        g1 = float(np.sum(np.abs(gv)))
        if g1 > 0.0:
            state.eta = max(state.eta, float(gv @ d) / g1)
        return state.eta

    if not np.any(gv):
        raise InvalidArgumentError(f"line search {state.policy.value}: gradient is zero")

    if state.policy is LineSearchPolicy.DOUBLING:
        if state.frozen or not np.any(d):
            return state.eta
        if float(gv @ d) > 0.0:
            state.eta *= 2.0
        else:
            state.frozen = True
        return state.eta

    if not np.any(d):
        return state.eta
    cos_theta = float(gv @ d) / (float(np.linalg.norm(gv)) * float(np.linalg.norm(d)))
    state.eta *= max(1.0 + cos_theta, state.min_factor)
    return state.eta
