from typing import List, Optional

import numpy as np
import pandas as pd

from normdescent.linalg.decompositions import reduced_svd
from normdescent.linalg.matrix import Matrix, as_matrix
from normdescent.linalg.orthogonalize import newton_schulz_iterates, orthogonalize_via_svd
from normdescent.schemas.polynomial import PolynomialSpec
from normdescent.schemas.reports import TraceRow


def orthogonalize_trace(g: Matrix, spec: Optional[PolynomialSpec] = None) -> List[TraceRow]:
    """Distance of every Newton-Schulz iterate from the SVD polar factor,
    with the iterate's extreme singular values."""
    g = as_matrix(g, "g")
    target = orthogonalize_via_svd(g)
    rows = []
    for t, x in enumerate(newton_schulz_iterates(g, spec)):
        sigma = reduced_svd(x).sigma
        rows.append(
            TraceRow(
                iteration=t,
                error=float(np.linalg.norm(x - target, "fro")),
                sigma_min=float(sigma[-1]),
                sigma_max=float(sigma[0]),
            )
        )
    return rows


def trace_frame(rows: List[TraceRow]) -> pd.DataFrame:
    return pd.DataFrame([r.model_dump() for r in rows], columns=["iteration", "error", "sigma_min", "sigma_max"])
