from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from normdescent.core.config import get_settings

from .norms import NormSpec
from .optimizers import (
    LineSearchAnchor,
    LineSearchPolicy,
    OptimizerName,
    OrthoBackend,
    ShampooMode,
    UpdateOrder,
)
from .polynomial import PolynomialSpec


class TaskName(str, Enum):
    LINEAR = "linear"
    TWO_LAYER = "two_layer"


class RunStatus(str, Enum):
    COMPLETED = "completed"
    ABORTED = "aborted"


class DatasetConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d_in: int = Field(..., ge=1)
    d_out: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    noise: float = Field(0.0, ge=0)
    seed: Optional[int] = Field(None, ge=0)  # falls back to the experiment seed


class OptimizerConfig(BaseModel):
    """Hyperparameters for every registered optimizer; each one reads the
    fields it understands."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    name: OptimizerName
    lr: float = Field(0.01, gt=0)
    beta1: float = Field(0.9, ge=0, lt=1)
    beta2: float = Field(0.999, ge=0, lt=1)
    epsilon: Optional[float] = Field(None, ge=0)
    bias_correction: bool = False

    # shampoo
    shampoo_mode: ShampooMode = ShampooMode.SUM
    shampoo_beta: float = Field(0.9, ge=0, lt=1)

    # prodigy and line search
    eta0: float = Field(1e-6, gt=0)
    update_order: UpdateOrder = UpdateOrder.CURRENT
    scale_epsilon: bool = False  # prodigy: denominator sqrt(v) + eta * epsilon
    policy: LineSearchPolicy = LineSearchPolicy.PRODIGY_MAX
    anchor: LineSearchAnchor = LineSearchAnchor.INITIAL

    # spectral descent
    backend: OrthoBackend = OrthoBackend.SVD
    polynomial: Optional[PolynomialSpec] = None

    # steepest descent under a modular norm
    sharpness: Optional[float] = Field(None, gt=0, alias="lambda")
    norms: Optional[List[NormSpec]] = None
    scales: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_modular_lists(self) -> "OptimizerConfig":
        if self.scales is not None and any(s <= 0 for s in self.scales):
            raise ValueError("scales must all be > 0")
        if self.norms is not None and self.scales is not None and len(self.norms) != len(self.scales):
            raise ValueError(f"got {len(self.scales)} scales for {len(self.norms)} norms")
        return self


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    task: TaskName = TaskName.LINEAR
    hidden: int = Field(16, ge=1)  # two_layer width
    optimizer: OptimizerConfig
    dataset: DatasetConfig
    steps: int = Field(..., ge=1)
    seed: int = Field(0, ge=0)
    init_scale: float = Field(1.0, ge=0)
    output_path: Optional[str] = None  # defaults to <OUTPUT_DIR>/<name>.csv
    checkpoint_every: Optional[int] = Field(None, ge=1)

    @property
    def layer_count(self) -> int:
        return 1 if self.task is TaskName.LINEAR else 2

    @property
    def dataset_seed(self) -> int:
        return self.seed if self.dataset.seed is None else self.dataset.seed

    @model_validator(mode="after")
    def check_layer_lists(self) -> "ExperimentConfig":
        for field in ("norms", "scales"):
            values = getattr(self.optimizer, field)
            if values is not None and len(values) != self.layer_count:
                raise ValueError(
                    f"optimizer.{field} has {len(values)} entries but task "
                    f"{self.task.value} has {self.layer_count} layers"
                )
        return self

    @model_validator(mode="after")
    def default_output_path(self) -> "ExperimentConfig":
        if self.output_path is None:
            self.output_path = str(Path(get_settings().OUTPUT_DIR) / f"{self.name}.csv")
        return self


class RunRow(BaseModel):
    step: int
    loss: float
    step_size: float
    dual_norms: List[float]
    cos_theta: float
    norm_ratio: float
    displacement_rms: float


class RunRecord(BaseModel):
    name: str
    status: RunStatus
    abort_reason: Optional[str] = None
    steps_completed: int
    final_loss: Optional[float] = None
    csv_path: str
    config: ExperimentConfig
    rows: List[RunRow]
