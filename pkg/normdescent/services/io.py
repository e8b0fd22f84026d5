"""File IO for run outputs, matrices and datasets. Every write is atomic."""
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, List, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from normdescent.core.config import get_settings
from normdescent.core.exceptions import InvalidArgumentError
from normdescent.linalg.matrix import Matrix, as_matrix
from normdescent.models.dataset import Dataset

PathLike = Union[str, Path]


def atomic_write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def frame_to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(
        index=False,
        float_format=get_settings().CSV_FLOAT_FORMAT,
        lineterminator="\n",
    )


def write_csv(path: PathLike, df: pd.DataFrame) -> Path:
    return atomic_write_text(path, frame_to_csv(df))


def to_json_text(payload: Any) -> str:
    if isinstance(payload, BaseModel):
        return payload.model_dump_json(indent=2, by_alias=True) + "\n"
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_json(path: PathLike, payload: Any) -> Path:
    return atomic_write_text(path, to_json_text(payload))


def read_matrix_csv(path: PathLike) -> Matrix:
    """Comma-separated rows of numbers, no header."""
    try:
        df = pd.read_csv(path, header=None, dtype=np.float64, skipinitialspace=True)
    except FileNotFoundError as exc:
        raise InvalidArgumentError(f"matrix file not found: {path}") from exc
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as exc:
        raise InvalidArgumentError(f"cannot parse matrix file {path}: {exc}") from exc
    return as_matrix(df.to_numpy(), str(path))


def _dataset_columns(d_in: int, d_out: int) -> List[str]:
    return [f"x{i}" for i in range(d_in)] + [f"y{j}" for j in range(d_out)]


def dataset_to_frame(data: Dataset) -> pd.DataFrame:
    values = np.hstack([data.inputs, data.targets])
    return pd.DataFrame(values, columns=_dataset_columns(data.d_in, data.d_out))


def write_dataset_csv(path: PathLike, data: Dataset) -> Path:
    return write_csv(path, dataset_to_frame(data))


def read_dataset_csv(path: PathLike) -> Dataset:
    df = pd.read_csv(path)
    x_cols = [c for c in df.columns if c.startswith("x")]
    y_cols = [c for c in df.columns if c.startswith("y")]
    if not x_cols or not y_cols or len(x_cols) + len(y_cols) != len(df.columns):
        raise InvalidArgumentError(f"{path}: expected x0..x{{d_in-1}}, y0..y{{d_out-1}} columns")
    return Dataset(inputs=df[x_cols].to_numpy(), targets=df[y_cols].to_numpy())


def write_dataset_json(path: PathLike, data: Dataset) -> Path:
    return write_json(path, data)


def read_dataset_json(path: PathLike) -> Dataset:
    return Dataset.model_validate_json(Path(path).read_text(encoding="utf-8"))


def remove_quietly(paths: Iterable[PathLike]) -> None:
    for p in paths:
        try:
            os.unlink(p)
        except FileNotFoundError:
            pass
