"""Seeded training runs with checkpoint/resume and atomic outputs."""
import json
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
import structlog
from pydantic import BaseModel, ConfigDict, ValidationError

from normdescent.core.config import get_settings
from normdescent.core.exceptions import ConfigError, NormDescentError, NumericalAbort
from normdescent.core.rng import SeedStream
from normdescent.linalg.matrix import LayerList, MatrixField
from normdescent.models.dataset import Dataset, make_dataset
from normdescent.models.linear import LinearModel, square_loss, square_loss_grad
from normdescent.models.two_layer import TwoLayerNet, two_layer_forward_backward
from normdescent.optimizers.line_search import escape_diagnostics
from normdescent.optimizers.registry import build_optimizer
from normdescent.schemas.experiment import ExperimentConfig, RunRecord, RunRow, RunStatus, TaskName
from normdescent.services.io import remove_quietly, write_csv, write_json

logger = structlog.get_logger(__name__)

LossAndGrad = Callable[[LayerList], Tuple[float, LayerList]]


class Checkpoint(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    step: int
    config: ExperimentConfig
    weights: List[MatrixField]
    optimizer: str
    state: dict
    rows: List[RunRow]


def format_validation_error(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        where = ".".join(str(loc) for loc in err["loc"]) or "config"
        parts.append(f"{where}: {err['msg']}")
    return "; ".join(parts)


def parse_experiment_configs(payload: Union[dict, list]) -> List[ExperimentConfig]:
    items = payload if isinstance(payload, list) else [payload]
    if not items:
        raise ConfigError("config list is empty")
    configs = []
    for i, item in enumerate(items):
        try:
            configs.append(ExperimentConfig.model_validate(item))
        except ValidationError as exc:
            prefix = f"config[{i}] " if isinstance(payload, list) else ""
            raise ConfigError(f"{prefix}invalid: {format_validation_error(exc)}", errors=exc.errors()) from exc
    return configs


def load_experiment_configs(path: Union[str, Path]) -> List[ExperimentConfig]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse_experiment_configs(payload)


def with_seed(config: ExperimentConfig, seed: int) -> ExperimentConfig:
    dataset = config.dataset.model_copy(update={"seed": seed})
    return config.model_copy(update={"seed": seed, "dataset": dataset})


def build_dataset(config: ExperimentConfig) -> Dataset:
    d = config.dataset
    return make_dataset(d.d_in, d.d_out, d.n, config.dataset_seed, d.noise)


def initial_weights(config: ExperimentConfig, data: Dataset) -> LayerList:
    rng = SeedStream(config.seed).child("train").generator("init")
    scale = config.init_scale
    if config.task is TaskName.LINEAR:
        return [scale * rng.standard_normal((data.d_out, data.d_in)) / math.sqrt(data.d_in)]
    w1 = scale * rng.standard_normal((config.hidden, data.d_in)) / math.sqrt(data.d_in)
    w2 = scale * rng.standard_normal((data.d_out, config.hidden)) / math.sqrt(config.hidden)
    return [w1, w2]


def loss_and_grad(config: ExperimentConfig, data: Dataset) -> LossAndGrad:
    if config.task is TaskName.LINEAR:

        def linear(weights: LayerList) -> Tuple[float, LayerList]:
            model = LinearModel.model_construct(w=weights[0])
            return square_loss(model, data), [square_loss_grad(model, data)]

        return linear

    def two_layer(weights: LayerList) -> Tuple[float, LayerList]:
        net = TwoLayerNet.model_construct(w1=weights[0], w2=weights[1])
        return two_layer_forward_backward(net, data)

    return two_layer


def checkpoint_path(csv_path: Path) -> Path:
    return Path(f"{csv_path}.checkpoint.json")


def rows_frame(rows: List[RunRow], layers: int) -> pd.DataFrame:
    columns = ["step", "loss", "step_size"] + [f"dual_{i}" for i in range(layers)]
    columns += ["cos_theta", "norm_ratio", "displacement_rms"]
    records = [
        [r.step, r.loss, r.step_size, *r.dual_norms, r.cos_theta, r.norm_ratio, r.displacement_rms]
        for r in rows
    ]
    return pd.DataFrame(records, columns=columns)


def _finite(loss: float, grads: LayerList) -> bool:
    return math.isfinite(loss) and all(np.all(np.isfinite(g)) for g in grads)


def _resume(path: Path, config: ExperimentConfig) -> Optional[Checkpoint]:
    if not path.exists():
        return None
    try:
        checkpoint = Checkpoint.model_validate_json(path.read_text(encoding="utf-8"))
    except (ValidationError, ValueError) as exc:
        logger.warning("checkpoint_unreadable", path=str(path), error=str(exc))
        return None
    if checkpoint.config != config:
        logger.warning("checkpoint_config_mismatch", path=str(path))
        return None
    return checkpoint


def run_experiment(config: ExperimentConfig, output_path: Optional[str] = None) -> RunRecord:
    """Run ``config`` to completion, writing ``<output>`` (CSV) and ``<output>.json``.

    Raises NumericalAbort after writing the partial record when the loss
    stops being finite.
    """
    settings = get_settings()
    csv_path = Path(output_path or config.output_path)
    json_path = csv_path.with_suffix(".json")
    ckpt_path = checkpoint_path(csv_path)
    every = config.checkpoint_every or settings.CHECKPOINT_EVERY
    log = logger.bind(run=config.name, optimizer=config.optimizer.name.value)

    data = build_dataset(config)
    weights = initial_weights(config, data)
    w0 = [w.copy() for w in weights]
    objective = loss_and_grad(config, data)
    optimizer = build_optimizer(config.optimizer, weights)
    rows: List[RunRow] = []
    start = 0

    checkpoint = _resume(ckpt_path, config)
    if checkpoint is not None:
        start = checkpoint.step
        weights = [np.array(w) for w in checkpoint.weights]
        optimizer.load_state(checkpoint.state)
        rows = list(checkpoint.rows)
        log.info("run_resumed", step=start, path=str(ckpt_path))
    else:
        log.info("run_started", steps=config.steps, task=config.task.value)

    def finish(status: RunStatus, reason: Optional[str], final_loss: Optional[float]) -> RunRecord:
        record = RunRecord(
            name=config.name,
            status=status,
            abort_reason=reason,
            steps_completed=len(rows),
            final_loss=final_loss,
            csv_path=str(csv_path),
            config=config,
            rows=rows,
        )
        write_csv(csv_path, rows_frame(rows, len(weights)))
        write_json(json_path, record)
        remove_quietly([ckpt_path])
        return record

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for step in range(start, config.steps):
            loss, grads = objective(weights)
            if not _finite(loss, grads):
                reason = f"non-finite loss or gradient at step {step} (loss={loss})"
                record = finish(RunStatus.ABORTED, reason, None)
                log.error("run_aborted", step=step, reason=reason)
                raise NumericalAbort(reason, step=step, record=record)

            diagnostics = escape_diagnostics(w0, weights, grads)
            outcome = optimizer.step(weights, grads)
            rows.append(
                RunRow(
                    step=step,
                    loss=loss,
                    step_size=outcome.step_size,
                    dual_norms=outcome.dual_values,
                    cos_theta=diagnostics.cos_theta,
                    norm_ratio=diagnostics.norm_ratio,
                    displacement_rms=diagnostics.displacement_rms,
                )
            )
            weights = outcome.weights

            done = step + 1
            if done % every == 0 and done < config.steps:
                write_json(
                    ckpt_path,
                    Checkpoint(
                        step=done,
                        config=config,
                        weights=weights,
                        optimizer=config.optimizer.name.value,
                        state=optimizer.dump_state(),
                        rows=rows,
                    ),
                )
                log.debug("checkpoint_written", step=done, path=str(ckpt_path))

        final_loss, final_grads = objective(weights)
        if not _finite(final_loss, final_grads):
            reason = f"non-finite loss after the final step (loss={final_loss})"
            record = finish(RunStatus.ABORTED, reason, None)
            log.error("run_aborted", step=config.steps, reason=reason)
            raise NumericalAbort(reason, step=config.steps, record=record)

    record = finish(RunStatus.COMPLETED, None, final_loss)
    log.info("run_finished", steps=len(rows), final_loss=final_loss, path=str(csv_path))
    return record


RunResult = Union[RunRecord, NormDescentError]


def run_many(configs: List[ExperimentConfig], threads: Optional[int] = None) -> List[RunResult]:
    """Run independent experiments on a thread pool; results keep config order."""
    workers = max(1, min(threads or get_settings().THREADS, len(configs)))

    def attempt(config: ExperimentConfig) -> RunResult:
        try:
            return run_experiment(config)
        except NormDescentError as exc:
            return exc

    if workers == 1:
        return [attempt(c) for c in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(attempt, configs))
