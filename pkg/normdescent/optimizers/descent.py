from typing import Optional, Sequence, Tuple

import numpy as np

from normdescent.linalg.matrix import LayerList, Matrix, as_layers, check_same_shapes, is_zero
from normdescent.linalg.orthogonalize import orthogonalize_newton_schulz, orthogonalize_via_svd
from normdescent.schemas.norms import ModularNormSpec
from normdescent.schemas.optimizers import OrthoBackend
from normdescent.schemas.polynomial import PolynomialSpec
from normdescent.steepest.solvers import SteepestSolution, solve_modular


def sign_descent_step(w: Sequence[Matrix], g: Sequence[Matrix], lr: float) -> LayerList:
    w = as_layers(w, "w")
    g = as_layers(g, "g")
    check_same_shapes(w, g, "g")
    return [wi - lr * np.sign(gi) for wi, gi in zip(w, g)]


def orthogonalize(g: Matrix, backend: OrthoBackend, polynomial: Optional[PolynomialSpec] = None) -> Matrix:
    if is_zero(g):
        return np.zeros_like(g)
    if OrthoBackend(backend) is OrthoBackend.NEWTON_SCHULZ:
        return orthogonalize_newton_schulz(g, polynomial)
    return orthogonalize_via_svd(g)


def spectral_descent_step(
    w: Sequence[Matrix],
    g: Sequence[Matrix],
    lr: float,
    backend: OrthoBackend = OrthoBackend.SVD,
    polynomial: Optional[PolynomialSpec] = None,
) -> LayerList:
    w = as_layers(w, "w")
    g = as_layers(g, "g")
    check_same_shapes(w, g, "g")
    return [wi - lr * orthogonalize(gi, backend, polynomial) for wi, gi in zip(w, g)]


def steepest_step(
    w: Sequence[Matrix], g: Sequence[Matrix], spec: ModularNormSpec, lam: float
) -> Tuple[LayerList, SteepestSolution]:
    """Apply the modular-norm steepest-descent update."""
    w = as_layers(w, "w")
    solution = solve_modular(g, spec, lam)
    check_same_shapes(w, solution.updates, "g")
    return [wi + dw for wi, dw in zip(w, solution.updates)], solution
