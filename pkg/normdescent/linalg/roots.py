"""Inverse p-th roots of symmetric positive semidefinite matrices."""
from enum import Enum

import numpy as np

from normdescent.core.exceptions import (
    ConvergenceError,
    InvalidArgumentError,
    NotPositiveSemidefiniteError,
    SingularMatrixError,
)
from normdescent.linalg.decompositions import sym_eig
from normdescent.linalg.matrix import Matrix

NEGATIVE_EIGENVALUE_TOL = 1e-8
SINGULAR_FLOOR = 1e-300
NEWTON_TOL = 1e-13
NEWTON_STALL = 1e-8
NEWTON_MAX_ITER = 200


class RootBackend(str, Enum):
    EIGEN = "eigen"
    NEWTON = "newton"


def spd_inverse_root(
    s: Matrix,
    p: int,
    epsilon: float = 0.0,
    backend: RootBackend = RootBackend.EIGEN,
) -> Matrix:
    """Return ``(s + epsilon*I)^(-1/p)`` for symmetric PSD ``s``.

    Shifted eigenvalues within rounding of zero (``n * eps * max``, the same
    cutoff ``numpy.linalg.matrix_rank`` uses) are null directions and map to
    zero, so ``spd_inverse_root(G @ G.T, 2) @ G`` is the semi-orthogonal factor
    of a tall full-column-rank ``G``. Every other eigenvalue, however small,
    gets its exact root.
    """
    if int(p) != p or p < 1:
        raise InvalidArgumentError(f"spd_inverse_root: p must be a positive integer, got {p}")
    if epsilon < 0:
        raise InvalidArgumentError(f"spd_inverse_root: epsilon must be >= 0, got {epsilon}")
    p = int(p)

    q, eigenvalues = sym_eig(s)
    if eigenvalues[0] < -NEGATIVE_EIGENVALUE_TOL:
        raise NotPositiveSemidefiniteError(
            f"spd_inverse_root: eigenvalue {eigenvalues[0]:.3e} is below -{NEGATIVE_EIGENVALUE_TOL:g}"
        )
    if epsilon == 0.0 and eigenvalues[-1] < SINGULAR_FLOOR:
        raise SingularMatrixError("spd_inverse_root: all eigenvalues vanish and epsilon is 0")

    shifted = np.clip(eigenvalues, 0.0, None) + epsilon
    live = shifted > null_cutoff(shifted)

    if RootBackend(backend) is RootBackend.NEWTON:
        if not np.all(live):
            raise SingularMatrixError(
                "spd_inverse_root: the newton backend needs a nonsingular shifted matrix"
            )
        n = q.shape[0]
        return _coupled_newton_inverse_root(s + epsilon * np.eye(n), p)

    roots = np.zeros_like(shifted)
    roots[live] = shifted[live] ** (-1.0 / p)
    return (q * roots) @ q.T


def null_cutoff(shifted: np.ndarray) -> float:
    """Largest value that is indistinguishable from zero next to ``max(shifted)``."""
    return float(shifted.size * np.finfo(np.float64).eps * shifted[-1])


def _coupled_newton_inverse_root(a: Matrix, p: int) -> Matrix:
    """Coupled Newton iteration X_{k+1} = X_k T_k, M_{k+1} = T_k^p M_k with
    T_k = ((p+1) I - M_k) / p, started from X_0 = I/c, M_0 = A/c^p.

    Scaling by the Frobenius norm puts the spectrum of M_0 in (0, 1], inside
    the convergence region (0, p+1).
    """
    n = a.shape[0]
    identity = np.eye(n)
    a = 0.5 * (a + a.T)
    c = np.linalg.norm(a, "fro") ** (1.0 / p)
    x = identity / c
    m = a / c**p

    previous = np.inf
    for _ in range(NEWTON_MAX_ITER):
        t = ((p + 1) * identity - m) / p
        x = x @ t
        m = np.linalg.matrix_power(t, p) @ m
        residual = np.linalg.norm(m - identity, "fro")
        # converged, or stalled at roundoff level
        if residual <= NEWTON_TOL * np.sqrt(n) or (residual < NEWTON_STALL and residual >= previous):
            return 0.5 * (x + x.T)
        previous = residual

    raise ConvergenceError(
        f"coupled Newton inverse root did not converge in {NEWTON_MAX_ITER} iterations",
        iterations=NEWTON_MAX_ITER,
    )
