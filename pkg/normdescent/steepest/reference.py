"""Norm / optimizer correspondence, checked against ``solve_single``."""
from typing import Callable, List, NamedTuple

import numpy as np

from normdescent.core.rng import SeedStream
from normdescent.linalg.decompositions import reduced_svd
from normdescent.linalg.matrix import Matrix
from normdescent.schemas.norms import NormSpec
from normdescent.schemas.reports import ReferenceCheck, ReferenceRow
from normdescent.steepest.solvers import solve_single

REFERENCE_TOL = 1e-10


class _Case(NamedTuple):
    row: ReferenceRow
    spec: NormSpec
    shape: tuple
    closed_form: Callable[[Matrix, float], Matrix]


def _spectral_closed_form(g: Matrix, lam: float) -> Matrix:
    factors = reduced_svd(g)
    return -(np.sum(factors.sigma) / lam) * (factors.u @ factors.v.T)


_CASES = [
    _Case(
        ReferenceRow(domain="R^n", norm="l2", solution="-(||g||_2 / lam) * g / ||g||_2", optimizer="vanilla gradient descent"),
        NormSpec.lp(2.0),
        (5, 1),
        lambda g, lam: -g / lam,
    ),
    _Case(
        ReferenceRow(domain="R^n", norm="linf", solution="-(||g||_1 / lam) * sign(g)", optimizer="sign descent"),
        NormSpec.lp("inf"),
        (5, 1),
        lambda g, lam: -(np.sum(np.abs(g)) / lam) * np.sign(g),
    ),
    _Case(
        ReferenceRow(domain="R^{m x n}", norm="frobenius", solution="-(||G||_F / lam) * G / ||G||_F", optimizer="vanilla gradient descent"),
        NormSpec.frobenius(),
        (4, 3),
        lambda g, lam: -g / lam,
    ),
    _Case(
        ReferenceRow(domain="R^{m x n}", norm="spectral", solution="-(tr(Sigma) / lam) * U V^T", optimizer="spectral descent"),
        NormSpec.spectral(),
        (4, 3),
        _spectral_closed_form,
    ),
]


def reference_table() -> List[ReferenceRow]:
    return [case.row for case in _CASES]


def check_reference_table(seed: int = 0, lam: float = 1.0, trials: int = 5) -> List[ReferenceCheck]:
    """Solve each row's problem on random gradients and compare with its closed form."""
    stream = SeedStream(seed).child("reference_table")
    checks = []
    for case in _CASES:
        rng = stream.generator(case.row.norm)
        worst = 0.0
        for _ in range(trials):
            g = rng.standard_normal(case.shape)
            update = solve_single(g, case.spec, lam).updates[0]
            expected = case.closed_form(g, lam)
            error = float(np.linalg.norm(update - expected) / np.linalg.norm(expected))
            worst = max(worst, error)
        checks.append(ReferenceCheck(**case.row.model_dump(), max_error=worst, passed=worst <= REFERENCE_TOL))
    return checks
