"""Sampling oracles for dual norms and induced operator norms.

They are lower bounds computed independently of the closed forms, which
makes them suitable for checking those closed forms.
"""
import math
from typing import Iterable, Optional

import numpy as np

from normdescent.core.exceptions import InvalidArgumentError, UnsupportedNormError
from normdescent.core.rng import SeedStream
from normdescent.linalg.decompositions import reduced_svd
from normdescent.linalg.matrix import Matrix, as_matrix, is_zero
from normdescent.norms.duality import lp_direction
from normdescent.norms.primal import batched_norm, conjugate_exponent
from normdescent.schemas.norms import NormKind, NormSpec

CHUNK = 10_000


def brute_force_dual(
    g: Matrix,
    spec: NormSpec,
    samples: int,
    seed: int,
    candidates: Optional[Iterable[Matrix]] = None,
) -> float:
    """max <g, t/||t||> over ``samples`` Gaussian ``t`` (plus any ``candidates``)."""
    g = as_matrix(g, "g")
    if samples < 1:
        raise InvalidArgumentError(f"brute_force_dual: samples must be >= 1, got {samples}")
    rng = SeedStream(seed).generator("brute_force_dual")

    best = -math.inf
    remaining = samples
    while remaining > 0:
        k = min(CHUNK, remaining)
        t = rng.standard_normal((k,) + g.shape)
        values = np.einsum("ij,kij->k", g, t) / batched_norm(t, spec)
        best = max(best, float(np.max(values)))
        remaining -= k

    for candidate in candidates or ():
        c = as_matrix(candidate, "candidate")
        size = float(batched_norm(c[np.newaxis], spec)[0])
        if size > 0.0:
            best = max(best, float(np.sum(g * c)) / size)
    return best


def operator_ratios(m: Matrix, xs: np.ndarray, spec: NormSpec) -> np.ndarray:
    """||m x||_out / ||x||_in for each row ``x`` of ``xs`` under an induced norm."""
    m = as_matrix(m, "m")
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    rows, cols = m.shape
    if xs.shape[1] != cols:
        raise InvalidArgumentError(f"operator_ratios: inputs need {cols} entries, got {xs.shape[1]}")
    ys = xs @ m.T
    kind = spec.kind

    if kind is NormKind.INDUCED_L1_TO_LP:
        return np.linalg.norm(ys, ord=spec.p, axis=1) / np.linalg.norm(xs, ord=1, axis=1)
    if kind is NormKind.INDUCED_LP_TO_LINF:
        return np.max(np.abs(ys), axis=1) / np.linalg.norm(xs, ord=spec.p, axis=1)
    if kind is NormKind.SPECTRAL:
        return np.linalg.norm(ys, axis=1) / np.linalg.norm(xs, axis=1)
    if kind is NormKind.RMS_TO_RMS:
        return (np.linalg.norm(ys, axis=1) / math.sqrt(rows)) / (np.linalg.norm(xs, axis=1) / math.sqrt(cols))
    if kind is NormKind.L1_TO_RMS:
        return (np.linalg.norm(ys, axis=1) / math.sqrt(rows)) / np.linalg.norm(xs, ord=1, axis=1)
    raise UnsupportedNormError(f"{spec.label} is not an induced operator norm")


def sampled_operator_norm(m: Matrix, spec: NormSpec, samples: int, seed: int) -> float:
    """Largest sampled ratio ||m x|| / ||x||: a lower bound on the operator norm."""
    m = as_matrix(m, "m")
    if samples < 1:
        raise InvalidArgumentError(f"sampled_operator_norm: samples must be >= 1, got {samples}")
    rng = SeedStream(seed).generator("sampled_operator_norm")
    best = -math.inf
    remaining = samples
    while remaining > 0:
        k = min(CHUNK, remaining)
        xs = rng.standard_normal((k, m.shape[1]))
        best = max(best, float(np.max(operator_ratios(m, xs, spec))))
        remaining -= k
    return best


def operator_norm_maximizer(m: Matrix, spec: NormSpec) -> np.ndarray:
    """An input vector at which the induced norm of ``m`` is attained."""
    m = as_matrix(m, "m")
    cols = m.shape[1]
    kind = spec.kind
    x = np.zeros(cols)

    if kind in (NormKind.INDUCED_L1_TO_LP, NormKind.L1_TO_RMS):
        p = spec.p if kind is NormKind.INDUCED_L1_TO_LP else 2.0
        x[int(np.argmax(np.linalg.norm(m, ord=p, axis=0)))] = 1.0
        return x
    if kind is NormKind.INDUCED_LP_TO_LINF:
        q = conjugate_exponent(spec.p)
        row = m[int(np.argmax(np.linalg.norm(m, ord=q, axis=1)))]
        if not np.any(row):
            x[0] = 1.0
            return x
        return lp_direction(row, spec.p)
    if kind in (NormKind.SPECTRAL, NormKind.RMS_TO_RMS):
        if is_zero(m):
            x[0] = 1.0
            return x
        return reduced_svd(m).v[:, 0].copy()
    raise UnsupportedNormError(f"{spec.label} is not an induced operator norm")
