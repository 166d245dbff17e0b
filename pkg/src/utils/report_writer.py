"""
Writers for the machine-readable outputs: CSV for bulk numbers, JSON for
summaries. Every file carries the resolved configuration and seed.
"""

import json
import math
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import polars as pl

SCHEMA_VERSION = "1.0"


def _to_jsonable(value):
    """Convert numpy scalars/arrays and non-finite floats for json.dump"""
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def paths_to_frame(times: np.ndarray, values: np.ndarray) -> pl.DataFrame:
    """
    Long-format table of replicated paths.

    Args:
        times: Grid times, shape (G,)
        values: Path values, shape (N, G)

    Returns:
        DataFrame with columns replication, t, value (N·G rows)
    """
    n_paths, n_times = values.shape
    return pl.DataFrame({
        "replication": np.repeat(np.arange(n_paths), n_times),
        "t": np.tile(times, n_paths),
        "value": values.ravel(),
    })


def write_csv(frame: pl.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.write_csv(path)
    return path


def write_json_report(payload: Dict, config: Dict, path: Union[str, Path]) -> Path:
    """Write payload with schema_version and the config echo"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report = {"schema_version": SCHEMA_VERSION, "config": config, **payload}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(_to_jsonable(report), f, ensure_ascii=False, indent=2)
    return path


def sidecar_path(path: Union[str, Path]) -> Path:
    return Path(path).with_suffix(".json")


def summarize_checks(checks: List[Dict]) -> Dict:
    passed = sum(1 for c in checks if c.get("passed"))
    return {"total": len(checks), "passed": passed, "failed": len(checks) - passed}
