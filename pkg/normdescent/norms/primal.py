"""Primal norms of vectors, matrices and layer lists."""
import math
from typing import List, Sequence

import numpy as np

from normdescent.core.exceptions import InvalidArgumentError, ShapeError
from normdescent.linalg.decompositions import reduced_svd
from normdescent.linalg.matrix import Matrix, as_layers, as_matrix, flatten_layers, is_zero
from normdescent.schemas.norms import INF, ModularNormSpec, NormKind, NormSpec


def conjugate_exponent(p: float) -> float:
    """Hoelder conjugate q with 1/p + 1/q = 1 (1 and inf pair up)."""
    if p == 1.0:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def lp(x: np.ndarray, p: float) -> float:
    return float(np.linalg.norm(np.ravel(x), ord=p))


def singular_values(m: Matrix) -> np.ndarray:
    if is_zero(m):
        return np.zeros(1)
    return reduced_svd(m).sigma


def _entrywise_norm(m: Matrix, spec: NormSpec) -> float:
    if spec.kind is NormKind.VECTOR_RMS:
        return lp(m, 2.0) / math.sqrt(m.size)
    return lp(m, spec.p)


def vector_norm(v: Matrix, spec: NormSpec) -> float:
    v = as_matrix(v, "v")
    if v.shape[1] != 1:
        raise ShapeError(f"vector_norm: expected a single column, got shape {v.shape}")
    if not spec.is_vector:
        raise InvalidArgumentError(f"vector_norm: {spec.label} is not a vector norm")
    return _entrywise_norm(v, spec)


def matrix_norm(m: Matrix, spec: NormSpec) -> float:
    m = as_matrix(m, "m")
    if spec.is_vector:
        raise InvalidArgumentError(
            f"matrix_norm: {spec.label} is a vector norm; use vector_norm or norm"
        )
    rows, cols = m.shape
    kind = spec.kind

    if kind is NormKind.FROBENIUS:
        return float(np.linalg.norm(m, "fro"))
    if kind is NormKind.INDUCED_L1_TO_LP:
        return float(np.max(np.linalg.norm(m, ord=spec.p, axis=0)))
    if kind is NormKind.INDUCED_LP_TO_LINF:
        q = conjugate_exponent(spec.p)
        return float(np.max(np.linalg.norm(m, ord=q, axis=1)))
    if kind is NormKind.L1_TO_RMS:
        return float(np.max(np.linalg.norm(m, ord=2, axis=0))) / math.sqrt(rows)

    sigma = singular_values(m)
    if kind is NormKind.SPECTRAL:
        return float(sigma[0])
    if kind is NormKind.SCHATTEN:
        return lp(sigma, spec.p)
    if kind is NormKind.RMS_TO_RMS:
        return math.sqrt(cols / rows) * float(sigma[0])
    raise InvalidArgumentError(f"matrix_norm: unknown norm kind {kind}")


def norm(m: Matrix, spec: NormSpec) -> float:
    """Any implemented norm; vector norms act on the flattened entries."""
    m = as_matrix(m, "m")
    if spec.is_vector:
        return _entrywise_norm(m, spec)
    return matrix_norm(m, spec)


def batched_norm(stack: np.ndarray, spec: NormSpec) -> np.ndarray:
    """Norms of a (k, rows, cols) stack, computed with numpy.linalg. Used by
    the sampling oracles, so it shares no code path with ``norm``."""
    stack = np.asarray(stack, dtype=np.float64)
    if stack.ndim != 3:
        raise ShapeError(f"batched_norm: expected a (k, rows, cols) stack, got {stack.shape}")
    k, rows, cols = stack.shape
    flat = stack.reshape(k, -1)
    kind = spec.kind

    if kind is NormKind.VECTOR_LP:
        return np.linalg.norm(flat, ord=spec.p, axis=1)
    if kind is NormKind.VECTOR_RMS:
        return np.linalg.norm(flat, ord=2, axis=1) / math.sqrt(rows * cols)
    if kind is NormKind.FROBENIUS:
        return np.linalg.norm(flat, ord=2, axis=1)
    if kind is NormKind.INDUCED_L1_TO_LP:
        return np.max(np.linalg.norm(stack, ord=spec.p, axis=1), axis=1)
    if kind is NormKind.INDUCED_LP_TO_LINF:
        q = conjugate_exponent(spec.p)
        return np.max(np.linalg.norm(stack, ord=q, axis=2), axis=1)
    if kind is NormKind.L1_TO_RMS:
        return np.max(np.linalg.norm(stack, ord=2, axis=1), axis=1) / math.sqrt(rows)

    sigma = np.linalg.svd(stack, compute_uv=False)
    if kind is NormKind.SPECTRAL:
        return sigma[:, 0]
    if kind is NormKind.SCHATTEN:
        return np.linalg.norm(sigma, ord=spec.p, axis=1)
    if kind is NormKind.RMS_TO_RMS:
        return math.sqrt(cols / rows) * sigma[:, 0]
    raise InvalidArgumentError(f"batched_norm: unknown norm kind {kind}")


def layer_norms(ws: Sequence[Matrix], specs: Sequence[NormSpec]) -> List[float]:
    if len(ws) != len(specs):
        raise InvalidArgumentError(f"got {len(specs)} norms for {len(ws)} layers")
    return [norm(w, spec) for w, spec in zip(ws, specs)]


def max_of_max_norm(ws: Sequence[Matrix]) -> float:
    """Largest max-abs entry over all layers."""
    layers = as_layers(ws, "ws")
    return max(matrix_norm(w, NormSpec.l1_to_linf()) for w in layers)


def flattened_linf(ws: Sequence[Matrix]) -> float:
    return float(np.max(np.abs(flatten_layers(as_layers(ws, "ws")))))


def modular_norm(ws: Sequence[Matrix], spec: ModularNormSpec) -> float:
    layers = as_layers(ws, "ws")
    if len(layers) != len(spec):
        raise InvalidArgumentError(
            f"modular_norm: spec has {len(spec)} entries but there are {len(layers)} layers"
        )
    return max(s * v for s, v in zip(spec.scales, layer_norms(layers, spec.norms)))
