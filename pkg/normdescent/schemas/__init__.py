from .norms import NormKind, NormSpec, ModularEntry, ModularNormSpec, INF
from .polynomial import Normalization, PolynomialSpec, POLYNOMIAL_PRESETS
from .optimizers import (
    OptimizerName,
    OrthoBackend,
    ShampooMode,
    UpdateOrder,
    LineSearchPolicy,
    LineSearchAnchor,
)
from .experiment import (
    TaskName,
    RunStatus,
    DatasetConfig,
    OptimizerConfig,
    ExperimentConfig,
    RunRow,
    RunRecord,
)
from .reports import (
    InvariantResult,
    VerificationReport,
    ReferenceRow,
    ReferenceCheck,
    NormTableEntry,
    NormTable,
    TraceRow,
)
from .api import MatrixRequest, SteepestRequest, SteepestResponse, TraceRequest, TraceResponse

__all__ = [
    "NormKind", "NormSpec", "ModularEntry", "ModularNormSpec", "INF",
    "Normalization", "PolynomialSpec", "POLYNOMIAL_PRESETS",
    "OptimizerName", "OrthoBackend", "ShampooMode", "UpdateOrder",
    "LineSearchPolicy", "LineSearchAnchor",
    "TaskName", "RunStatus", "DatasetConfig", "OptimizerConfig", "ExperimentConfig",
    "RunRow", "RunRecord",
    "InvariantResult", "VerificationReport", "ReferenceRow", "ReferenceCheck",
    "NormTableEntry", "NormTable", "TraceRow",
    "MatrixRequest", "SteepestRequest", "SteepestResponse", "TraceRequest", "TraceResponse",
]
