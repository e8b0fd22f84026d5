from typing import List, Tuple

import pandas as pd

from normdescent.core.exceptions import UnsupportedNormError
from normdescent.linalg.matrix import Matrix, as_matrix
from normdescent.norms.duality import dual_norm
from normdescent.norms.primal import norm
from normdescent.schemas.norms import NormSpec
from normdescent.schemas.reports import NormTable, NormTableEntry
from normdescent.steepest.reference import reference_table

TABLE_NORMS: List[Tuple[NormSpec, str]] = [
    (NormSpec.spectral(), "largest singular value"),
    (NormSpec.frobenius(), "entrywise l2"),
    (NormSpec.nuclear(), "nuclear: sum of singular values"),
    (NormSpec.l1_to_linf(), "max |entry|"),
    (NormSpec.l1_to_lp(1.0), "max column l1"),
    (NormSpec.l1_to_lp(2.0), "max column l2"),
    (NormSpec.lp_to_linf(2.0), "max row l2"),
    (NormSpec.lp_to_linf("inf"), "max row l1"),
    (NormSpec.rms_to_rms(), "sqrt(cols/rows) * spectral"),
    (NormSpec.l1_to_rms(), "max column l2 / sqrt(rows)"),
    (NormSpec.lp(2.0), "entrywise vector l2"),
    (NormSpec.lp("inf"), "entrywise vector linf"),
    (NormSpec.rms(), "entrywise rms"),
]


def norm_table(m: Matrix) -> NormTable:
    m = as_matrix(m, "matrix")
    entries = []
    for spec, note in TABLE_NORMS:
        try:
            dual = dual_norm(m, spec)
        except UnsupportedNormError:
            dual = None
        entries.append(NormTableEntry(norm=spec.label, value=norm(m, spec), dual=dual, note=note))
    return NormTable(rows=m.shape[0], cols=m.shape[1], entries=entries, reference=reference_table())


def norm_table_frame(table: NormTable) -> pd.DataFrame:
    return pd.DataFrame([e.model_dump() for e in table.entries], columns=["norm", "value", "dual", "note"])


def reference_frame(table: NormTable) -> pd.DataFrame:
    return pd.DataFrame([r.model_dump() for r in table.reference])
