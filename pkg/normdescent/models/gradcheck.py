from typing import Callable

import numpy as np

from normdescent.linalg.matrix import Matrix

FD_STEP = 1e-5


def central_difference(f: Callable[[Matrix], float], w: Matrix, h: float = FD_STEP) -> Matrix:
    """Entrywise (f(w + h e_ij) - f(w - h e_ij)) / 2h."""
    grad = np.zeros_like(w)
    for idx in np.ndindex(w.shape):
        up = w.copy()
        down = w.copy()
        up[idx] += h
        down[idx] -= h
        grad[idx] = (f(up) - f(down)) / (2.0 * h)
    return grad


def relative_error(analytic: Matrix, numeric: Matrix) -> float:
    scale = max(float(np.linalg.norm(analytic)), float(np.linalg.norm(numeric)), 1e-12)
    return float(np.linalg.norm(analytic - numeric)) / scale
