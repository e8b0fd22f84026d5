"""Closed-form steepest descent.

The problem is ``min_dW <G, dW> + (lam/2) * ||dW||^2``. For one norm the
solution is ``-(||G||_dual / lam) * lmo(G)``; under the modular norm
``max_l s_l ||W_l||_l`` every layer moves by ``eta / s_l`` along its own
LMO, with the global step ``eta = (1/lam) * sum_l ||G_l||_dual,l / s_l``.
"""
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from normdescent.core.exceptions import InvalidArgumentError
from normdescent.linalg.matrix import Matrix, MatrixField, as_layers, as_matrix, check_same_shapes, is_zero
from normdescent.norms.duality import dual_norm, lmo_direction
from normdescent.norms.primal import modular_norm, norm
from normdescent.schemas.norms import ModularNormSpec, NormSpec


class SteepestSolution(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    updates: List[MatrixField]
    step_size: float = Field(..., ge=0)
    dual_values: List[float]
    objective_value: float


def _check_sharpness(lam: float) -> float:
    if not lam > 0:
        raise InvalidArgumentError(f"sharpness lambda must be > 0, got {lam}")
    return float(lam)


def steepest_objective(
    gs: Sequence[Matrix], deltas: Sequence[Matrix], spec: ModularNormSpec, lam: float
) -> float:
    """<G, dW> + (lam/2) * modular_norm(dW)^2 summed over layers."""
    gs = as_layers(gs, "gs")
    deltas = as_layers(deltas, "deltas")
    check_same_shapes(gs, deltas, "deltas")
    linear = sum(float(np.sum(g * d)) for g, d in zip(gs, deltas))
    return linear + 0.5 * lam * modular_norm(deltas, spec) ** 2


def solve_single(g: Matrix, spec: NormSpec, lam: float) -> SteepestSolution:
    lam = _check_sharpness(lam)
    g = as_matrix(g, "g")
    if is_zero(g):
        return SteepestSolution(
            updates=[np.zeros_like(g)], step_size=0.0, dual_values=[0.0], objective_value=0.0
        )
    dual = dual_norm(g, spec)
    eta = dual / lam
    update = -eta * lmo_direction(g, spec)
    objective = float(np.sum(g * update)) + 0.5 * lam * norm(update, spec) ** 2
    return SteepestSolution(
        updates=[update], step_size=eta, dual_values=[dual], objective_value=objective
    )


def solve_modular(gs: Sequence[Matrix], spec: ModularNormSpec, lam: float) -> SteepestSolution:
    lam = _check_sharpness(lam)
    gs = as_layers(gs, "gs")
    if len(gs) != len(spec):
        raise InvalidArgumentError(
            f"solve_modular: spec has {len(spec)} entries but there are {len(gs)} layers"
        )

    duals: List[float] = []
    directions: List[Matrix] = []
    for g, entry in zip(gs, spec.entries):
        if is_zero(g):
            duals.append(0.0)
            directions.append(np.zeros_like(g))
            continue
        duals.append(dual_norm(g, entry.norm))
        directions.append(lmo_direction(g, entry.norm))

    # accumulated in layer order
    total = 0.0
    for dual, entry in zip(duals, spec.entries):
        total += dual / entry.scale
    eta = total / lam

    updates = [-(eta / entry.scale) * t for t, entry in zip(directions, spec.entries)]
    return SteepestSolution(
        updates=updates,
        step_size=eta,
        dual_values=duals,
        objective_value=steepest_objective(gs, updates, spec, lam),
    )


def solve_max_of_max(gs: Sequence[Matrix], lam: float) -> SteepestSolution:
    """Per-layer sign descent with one shared step size."""
    gs = as_layers(gs, "gs")
    return solve_modular(gs, ModularNormSpec.uniform(NormSpec.l1_to_linf(), len(gs)), lam)


def solve_spectral_layers(gs: Sequence[Matrix], lam: float) -> SteepestSolution:
    gs = as_layers(gs, "gs")
    return solve_modular(gs, ModularNormSpec.uniform(NormSpec.spectral(), len(gs)), lam)
