"""
Report Emitters

JSON-lines certificate streams, the run metadata file, and CSV grids with
a mandatory header and 17 significant digits.
"""

import json
from pathlib import Path
from typing import Dict, Iterable, Union

import numpy as np

from app.exceptions import DomainError, ReportIOError
from app.logger import logger
from app.schema import DilatationField, SchwarzianNormReport, jsonable

REPORT_NAME = "report.jsonl"
METADATA_NAME = "metadata.json"


def dumps_record(record: dict) -> str:
    """Canonical one-line JSON: sorted keys, no whitespace padding."""
    return json.dumps(jsonable(record), sort_keys=True, separators=(",", ":"), allow_nan=False)


def write_jsonl(records: Iterable[dict], path: Union[str, Path], seed: int) -> Path:
    """One record per line, each stamped with the run seed."""
    path = Path(path)
    lines = [dumps_record({**record, "seed": seed}) for record in records]
    try:
        with path.open("w", encoding="utf-8", newline="\n") as f:
            for line in lines:
                f.write(line + "\n")
    except OSError as e:
        raise ReportIOError(path, str(e)) from e
    logger.info(f"Wrote {len(lines)} record(s) to {path}")
    return path


def write_metadata(metadata: dict, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8") as f:
            json.dump(jsonable(metadata), f, indent=2, sort_keys=True, ensure_ascii=False)
    except OSError as e:
        raise ReportIOError(path, str(e)) from e
    return path


def write_csv(columns: Dict[str, np.ndarray], path: Union[str, Path]) -> Path:
    """Columns in insertion order; every column must have the same non-zero length."""
    path = Path(path)
    arrays = [np.ravel(np.asarray(values, dtype=np.float64)) for values in columns.values()]
    if not arrays or arrays[0].size == 0:
        raise DomainError(f"refusing to write an empty grid to {path}")
    if any(a.size != arrays[0].size for a in arrays):
        raise DomainError(f"grid columns for {path} differ in length")
    try:
        np.savetxt(
            path,
            np.column_stack(arrays),
            delimiter=",",
            header=",".join(columns),
            comments="",
            fmt="%.17g",
        )
    except OSError as e:
        raise ReportIOError(path, str(e)) from e
    logger.debug(f"Wrote {arrays[0].size} row(s) to {path}")
    return path


def emit_grid(field: Union[DilatationField, SchwarzianNormReport], path: Union[str, Path]) -> Path:
    """
    CSV of a sampled field.

    Dilatation: re, im, mu_re, mu_im, abs_mu.
    Schwarzian: re, im, weighted_abs_schwarzian.
    """
    if isinstance(field, DilatationField):
        z, mu = np.ravel(field.points), np.ravel(field.mu)
        return write_csv(
            {"re": z.real, "im": z.imag, "mu_re": mu.real, "mu_im": mu.imag, "abs_mu": np.abs(mu)},
            path,
        )
    if field.points is None or field.weighted is None:
        raise DomainError(f"Schwarzian report carries no sampled field for {path}")
    z = np.ravel(field.points)
    return write_csv(
        {"re": z.real, "im": z.imag, "weighted_abs_schwarzian": np.ravel(field.weighted)}, path
    )


def emit_curve(theta: np.ndarray, values: np.ndarray, path: Union[str, Path]) -> Path:
    """Sampled image curve: theta, re, im."""
    values = np.asarray(values)
    return write_csv({"theta": theta, "re": values.real, "im": values.imag}, path)
