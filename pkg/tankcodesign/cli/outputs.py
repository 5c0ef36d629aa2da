from __future__ import annotations

import hashlib
import json
import shutil
import time
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import pandas as pd

from tankcodesign import __version__
from tankcodesign.constants import CSV_SIGNIFICANT_DIGITS

MANIFEST = "manifest.json"
ERROR = "error.json"


def _default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()

    if isinstance(value, np.ndarray):
        return value.tolist()

    if isinstance(value, Path):
        return str(value)

    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dump_json(data: Any) -> str:
    """Indented JSON with sorted keys and full double precision."""
    return json.dumps(data, indent=2, sort_keys=True, default=_default) + "\n"


def write_json(path: Path, data: Any) -> None:
    """Write `dump_json(data)` to path."""
    path.write_text(dump_json(data))


def write_csv(path: Path, frame: pd.DataFrame) -> None:
    """Write a frame without index, floats at CSV_SIGNIFICANT_DIGITS significant digits."""
    frame.to_csv(path, index=False, float_format=f"%.{CSV_SIGNIFICANT_DIGITS}g")


def file_sha256(path: Union[str, Path]) -> str:
    """Hex SHA-256 of a file."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class Artifacts:
    """
    Output files of one command, staged in a directory and published together.

    Attributes:
        directory: Staging directory.
        names: Names of the files written so far.
    """

    def __init__(self, directory: Path) -> None:
        self.directory = directory
        self.names: List[str] = []

    def json(self, name: str, data: Any) -> None:
        """Stage a JSON artifact."""
        write_json(self.directory / name, data)
        self.names.append(name)

    def csv(self, name: str, frame: pd.DataFrame) -> None:
        """Stage a CSV artifact."""
        write_csv(self.directory / name, frame)
        self.names.append(name)

    def publish(self, out: Path) -> None:
        """Move every staged artifact into out."""
        for name in self.names:
            shutil.move(str(self.directory / name), str(out / name))


def manifest(
    command: str, config_path: Path, seeds: Dict[str, Any], threads: int, started: float, artifacts: List[str]
) -> Dict[str, Any]:
    """Provenance record of a run."""
    return {
        "tool": "tankcodesign",
        "version": __version__,
        "command": command,
        "config": str(config_path),
        "config_sha256": file_sha256(config_path),
        "seeds": seeds,
        "threads": threads,
        "wall_time_s": time.perf_counter() - started,
        "artifacts": artifacts,
    }


def error_document(error: BaseException) -> Dict[str, Any]:
    """Machine-readable description of a failure."""
    return {
        "error": type(error).__name__,
        "message": str(error),
        "failures": list(getattr(error, "failures", [])),
        "causes": list(getattr(error, "causes", [])),
    }
