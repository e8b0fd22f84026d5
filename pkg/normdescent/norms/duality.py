"""Dual norms and linear-maximization directions.

For every implemented norm, ``lmo_direction(g, spec)`` returns a unit-norm
``t`` with ``<g, t> == dual_norm(g, spec)``. Zero entries of ``g`` get zero
weight, so ``sign(0) == 0`` throughout. Where the maximizer is not unique, as
for ``p = 1`` with several entries of largest magnitude, all the mass goes to
the first of them in row-major order.
"""
import math

import numpy as np

from normdescent.core.exceptions import InvalidArgumentError, UnsupportedNormError
from normdescent.linalg.decompositions import reduced_svd
from normdescent.linalg.matrix import Matrix, as_matrix, is_zero
from normdescent.norms.primal import conjugate_exponent, lp
from normdescent.schemas.norms import INF, NormKind, NormSpec


def lp_direction(x: np.ndarray, p: float) -> np.ndarray:
    """argmax of <x, t> over ||t||_p <= 1, same shape as ``x``.

    Returns zeros for zero ``x``.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    if not np.any(x):
        return out
    if p == INF:
        return np.sign(x)
    if p == 1.0:
        flat_index = int(np.argmax(np.abs(x)))
        idx = np.unravel_index(flat_index, x.shape)
        out[idx] = np.sign(x[idx])
        return out
    if p == 2.0:
        return x / np.linalg.norm(x)
    q = conjugate_exponent(p)
    scaled = np.abs(x) / lp(x, q)
    return np.sign(x) * scaled ** (q - 1.0)


def _columnwise(g: Matrix, p: float) -> Matrix:
    out = np.zeros_like(g)
    for j in range(g.shape[1]):
        out[:, j] = lp_direction(g[:, j], p)
    return out


def _rowwise(g: Matrix, p: float) -> Matrix:
    out = np.zeros_like(g)
    for i in range(g.shape[0]):
        out[i, :] = lp_direction(g[i, :], p)
    return out


def dual_norm(g: Matrix, spec: NormSpec) -> float:
    g = as_matrix(g, "g")
    rows, cols = g.shape
    kind = spec.kind

    if kind is NormKind.VECTOR_LP:
        return lp(g, conjugate_exponent(spec.p))
    if kind is NormKind.VECTOR_RMS:
        return math.sqrt(g.size) * lp(g, 2.0)
    if kind is NormKind.FROBENIUS:
        return float(np.linalg.norm(g, "fro"))
    if kind is NormKind.INDUCED_L1_TO_LP:
        q = conjugate_exponent(spec.p)
        return float(np.sum(np.linalg.norm(g, ord=q, axis=0)))
    if kind is NormKind.INDUCED_LP_TO_LINF:
        # rows are measured in the conjugate exponent, so their duals are l_p
        return float(np.sum(np.linalg.norm(g, ord=spec.p, axis=1)))
    if kind is NormKind.L1_TO_RMS:
        return math.sqrt(rows) * float(np.sum(np.linalg.norm(g, ord=2, axis=0)))

    if is_zero(g):
        return 0.0
    sigma = reduced_svd(g).sigma
    if kind is NormKind.SPECTRAL:
        return float(np.sum(sigma))
    if kind is NormKind.SCHATTEN:
        return lp(sigma, conjugate_exponent(spec.p))
    if kind is NormKind.RMS_TO_RMS:
        return math.sqrt(rows / cols) * float(np.sum(sigma))
    raise UnsupportedNormError(f"dual_norm: no closed form for {spec.label}")


def lmo_direction(g: Matrix, spec: NormSpec) -> Matrix:
    g = as_matrix(g, "g")
    if is_zero(g):
        raise InvalidArgumentError("lmo_direction: the zero gradient has no maximizing direction")
    rows, cols = g.shape
    kind = spec.kind

    if kind is NormKind.VECTOR_LP:
        return lp_direction(g, spec.p)
    if kind is NormKind.VECTOR_RMS:
        return math.sqrt(g.size) * g / np.linalg.norm(g)
    if kind is NormKind.FROBENIUS:
        return g / np.linalg.norm(g, "fro")
    if kind is NormKind.INDUCED_L1_TO_LP:
        return _columnwise(g, spec.p)
    if kind is NormKind.INDUCED_LP_TO_LINF:
        return _rowwise(g, conjugate_exponent(spec.p))
    if kind is NormKind.L1_TO_RMS:
        return math.sqrt(rows) * _columnwise(g, 2.0)

    factors = reduced_svd(g)
    if kind is NormKind.SPECTRAL:
        return factors.u @ factors.v.T
    if kind is NormKind.SCHATTEN:
        weights = lp_direction(factors.sigma, spec.p)
        return (factors.u * weights) @ factors.v.T
    if kind is NormKind.RMS_TO_RMS:
        return math.sqrt(rows / cols) * (factors.u @ factors.v.T)
    raise UnsupportedNormError(f"lmo_direction: no closed form for {spec.label}")
