"""Semi-orthogonal projection: exact (SVD) and iterative (odd polynomials)."""
from typing import Iterator, Optional

import numpy as np

from normdescent.core.exceptions import ConvergenceError, InvalidArgumentError
from normdescent.linalg.decompositions import reduced_svd, spectral_norm
from normdescent.linalg.matrix import Matrix, as_matrix, is_zero
from normdescent.schemas.polynomial import Normalization, PolynomialSpec

DEFAULT_POLYNOMIAL = PolynomialSpec()


def normalize_for_iteration(g: Matrix, normalization: Normalization) -> Matrix:
    """Scale ``g`` so every singular value lies in (0, 1]."""
    g = as_matrix(g, "g")
    if is_zero(g):
        raise InvalidArgumentError("orthogonalize: cannot normalize the zero matrix")
    if Normalization(normalization) is Normalization.FROBENIUS:
        scale = float(np.linalg.norm(g, "fro"))
    else:
        try:
            scale = spectral_norm(g)
        except ConvergenceError as exc:
            # a near-degenerate top pair still gives a usable bound
            scale = float(exc.estimate or np.linalg.norm(g, "fro"))
    x0 = g / scale
    if not np.all(np.isfinite(x0)):
        raise InvalidArgumentError("orthogonalize: normalization produced non-finite entries")
    return x0


def _polynomial_step(x: Matrix, coefficients) -> Matrix:
    # x is wide (rows <= cols), so the Gram matrix is the small one
    gram = x @ x.T
    identity = np.eye(gram.shape[0])
    poly = coefficients[-1] * identity
    for c in reversed(coefficients[:-1]):
        poly = gram @ poly + c * identity
    return poly @ x


def newton_schulz_iterates(g: Matrix, spec: Optional[PolynomialSpec] = None) -> Iterator[Matrix]:
    """Yield X_0 (the normalized input) through X_T."""
    spec = spec or DEFAULT_POLYNOMIAL
    x = normalize_for_iteration(g, spec.normalization)
    transposed = x.shape[0] > x.shape[1]
    if transposed:
        x = x.T
    yield x.T if transposed else x
    for _ in range(spec.iterations):
        x = _polynomial_step(x, spec.coefficients)
        yield x.T if transposed else x


def orthogonalize_newton_schulz(g: Matrix, spec: Optional[PolynomialSpec] = None) -> Matrix:
    x = None
    for x in newton_schulz_iterates(g, spec):
        pass
    return x


def orthogonalize_via_svd(g: Matrix) -> Matrix:
    """U @ V.T of the rank-r reduced SVD; null directions map to zero."""
    g = as_matrix(g, "g")
    if is_zero(g):
        raise InvalidArgumentError("orthogonalize_via_svd: the zero matrix has no polar factor")
    factors = reduced_svd(g)
    return factors.u @ factors.v.T
