"""Reduced SVD, symmetric eigendecomposition and power iteration."""
from typing import NamedTuple, Tuple

import numpy as np

from normdescent.core.exceptions import (
    ConvergenceError,
    EmptyFactorsError,
    InvalidArgumentError,
    ShapeError,
)
from normdescent.linalg.matrix import Matrix, as_matrix, is_zero

# Singular values at or below RANK_TOL * sigma_max are dropped.
RANK_TOL = 1e-12
SYMMETRY_TOL = 1e-10
JACOBI_TOL = 1e-15
JACOBI_MAX_SWEEPS = 80


class SvdFactors(NamedTuple):
    u: Matrix  # m x r
    sigma: np.ndarray  # r, descending, positive
    v: Matrix  # n x r

    @property
    def rank(self) -> int:
        return int(self.sigma.shape[0])

    def reconstruct(self) -> Matrix:
        return (self.u * self.sigma) @ self.v.T


def _jacobi_sweeps(a: Matrix) -> Tuple[Matrix, Matrix]:
    """One-sided (Hestenes) Jacobi: rotate column pairs of ``a`` until they are
    mutually orthogonal. Returns the rotated columns and the accumulated
    right rotation ``v`` with ``a_in @ v == a_out``.
    """
    n = a.shape[1]
    v = np.eye(n)
    tol = max(JACOBI_TOL, a.shape[0] * np.finfo(np.float64).eps)
    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                ai = a[:, i]
                aj = a[:, j]
                alpha = float(ai @ ai)
                beta = float(aj @ aj)
                gamma = float(ai @ aj)
                if abs(gamma) <= tol * np.sqrt(alpha * beta) or gamma == 0.0:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                sign = 1.0 if zeta >= 0 else -1.0
                t = sign / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                new_i = c * ai - s * aj
                new_j = s * ai + c * aj
                a[:, i] = new_i
                a[:, j] = new_j
                vi = v[:, i].copy()
                vj = v[:, j]
                v[:, i] = c * vi - s * vj
                v[:, j] = s * vi + c * vj
        if not rotated:
            return a, v
    raise ConvergenceError(
        f"one-sided Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps",
        iterations=JACOBI_MAX_SWEEPS,
    )


def reduced_svd(g: Matrix) -> SvdFactors:
    """Reduced SVD ``g = u @ diag(sigma) @ v.T`` keeping only the positive
    singular values (``sigma > RANK_TOL * sigma_max``)."""
    g = as_matrix(g, "g")
    if is_zero(g):
        raise EmptyFactorsError("reduced_svd: the zero matrix has no positive singular values")

    transposed = g.shape[0] < g.shape[1]
    work = (g.T if transposed else g).copy()

    columns, v = _jacobi_sweeps(work)
    sigma = np.linalg.norm(columns, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    columns = columns[:, order]
    v = v[:, order]

    keep = sigma > RANK_TOL * sigma[0]
    sigma = sigma[keep]
    u = columns[:, keep] / sigma
    v = v[:, keep]

    if transposed:
        u, v = v, u
    return SvdFactors(u=u, sigma=sigma, v=v)


def check_symmetric(s: Matrix, name: str = "s") -> Matrix:
    s = as_matrix(s, name)
    if s.shape[0] != s.shape[1]:
        raise ShapeError(f"{name}: expected a square matrix, got {s.shape}")
    scale = max(1.0, float(np.max(np.abs(s))))
    if np.max(np.abs(s - s.T)) > SYMMETRY_TOL * scale:
        raise InvalidArgumentError(f"{name}: matrix is not symmetric within {SYMMETRY_TOL:g}")
    return s


def sym_eig(s: Matrix) -> Tuple[Matrix, np.ndarray]:
    """Orthonormal eigenvectors ``q`` and ascending eigenvalues of symmetric ``s``."""
    s = check_symmetric(s)
    eigenvalues, q = np.linalg.eigh(0.5 * (s + s.T))
    return q, eigenvalues


def spectral_norm(m: Matrix, tol: float = 1e-12, max_iter: int = 10_000, seed: int = 0) -> float:
    """Largest singular value by power iteration on the smaller Gram matrix."""
    m = as_matrix(m, "m")
    if tol <= 0:
        raise InvalidArgumentError(f"spectral_norm: tol must be positive, got {tol}")
    if is_zero(m):
        raise InvalidArgumentError("spectral_norm: the zero matrix has no dominant direction")

    gram = m.T @ m if m.shape[1] <= m.shape[0] else m @ m.T
    x = np.random.default_rng(seed).standard_normal(gram.shape[0])
    x /= np.linalg.norm(x)

    estimate = 0.0
    for _ in range(max_iter):
        y = gram @ x
        y_norm = float(np.linalg.norm(y))
        if y_norm == 0.0:
            # start vector fell in the null space
            x = np.roll(x, 1) + 1.0 / np.sqrt(x.size)
            x /= np.linalg.norm(x)
            continue
        rayleigh = float(x @ y)
        new_estimate = np.sqrt(max(rayleigh, 0.0))
        x = y / y_norm
        if abs(new_estimate - estimate) <= tol * new_estimate:
            return float(new_estimate)
        estimate = float(new_estimate)

    raise ConvergenceError(
        f"spectral_norm: power iteration did not reach tol={tol:g} in {max_iter} iterations",
        estimate=estimate,
        iterations=max_iter,
    )
