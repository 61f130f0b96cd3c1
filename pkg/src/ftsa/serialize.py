"""File formats: curve CSVs and JSON payloads for operators, filters and spectra.

Floats in CSV files are written with 17 significant digits; JSON uses
Python's shortest round-trip float repr. Writes go through a temporary file
and an atomic rename.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .basis import Grid
from .moments import LagCovSequence
from .regression import LinearFilter, RegressionFit
from .spectral import FrequencyGrid, FrequencyResponse, SpectralDensity

FLOAT_FMT = "%.17g"


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, payload) -> None:
    atomic_write_text(path, json.dumps(payload, indent=1, sort_keys=True) + "\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


# --- CSV ---------------------------------------------------------------------


def _table(header: list[str], rows: NDArray) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    if rows.size:
        np.savetxt(buf, rows, fmt=FLOAT_FMT, delimiter=",")
    return buf.getvalue()


def write_curves_csv(path, values: ArrayLike, grid: Grid) -> None:
    """One discretized curve per row; the header holds the grid points."""
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if values.shape[1] != grid.n:
        raise ValueError(f"curves have {values.shape[1]} values, grid has {grid.n}")
    atomic_write_text(path, _table([FLOAT_FMT % t for t in grid.points], values))


def read_curves_csv(path) -> tuple[NDArray, NDArray]:
    """Return ``(values, grid_points)`` from a curve CSV."""
    with open(path, newline="") as fh:
        header = next(csv.reader(fh))
        points = np.array([float(h) for h in header])
        values = np.loadtxt(fh, delimiter=",", ndmin=2)
    if values.size == 0:
        values = np.empty((0, points.size))
    if values.shape[1] != points.size:
        raise ValueError(f"{path}: rows have {values.shape[1]} values, header has {points.size}")
    return values, points


def write_coeffs_csv(path, coeffs: ArrayLike) -> None:
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
    atomic_write_text(path, _table([f"e{i + 1}" for i in range(coeffs.shape[1])], coeffs))


def write_table_csv(path, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([FLOAT_FMT % v if isinstance(v, float) else v for v in row])
    atomic_write_text(path, buf.getvalue())


# --- operators ---------------------------------------------------------------


def operator_to_json(F: ArrayLike) -> dict:
    F = np.asarray(F)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise ValueError(f"expected a square operator, got shape {F.shape}")
    if np.iscomplexobj(F):
        return {"d": F.shape[0], "re": F.real.ravel().tolist(), "im": F.imag.ravel().tolist()}
    return {"d": F.shape[0], "entries": F.ravel().tolist()}


def operator_from_json(obj: dict) -> NDArray:
    d = int(obj["d"])
    if "entries" in obj:
        return np.asarray(obj["entries"], dtype=float).reshape(d, d)
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    return (re + 1j * im).reshape(d, d)


def lagcov_to_json(C: LagCovSequence) -> list:
    return [[h, operator_to_json(C.ops[h])] for h in C.lags]


def lagcov_from_json(obj: list) -> LagCovSequence:
    return LagCovSequence({int(h): operator_from_json(op) for h, op in obj})


def _vec(v):
    return None if v is None else np.asarray(v, dtype=float).tolist()


def filter_to_json(F: LinearFilter) -> dict:
    shape = F.shape
    return {
        "type": "linear_filter",
        "d": None if shape is None else shape[0],
        "support": list(F.support),
        "ops": [{"lag": k, "operator": operator_to_json(F.ops[k])} for k in sorted(F.ops)],
        "mean_x": _vec(F.mean_x),
        "mean_y": _vec(F.mean_y),
        "info": F.info,
    }


def filter_from_json(obj: dict) -> LinearFilter:
    if obj.get("type") != "linear_filter":
        raise ValueError("payload is not a linear_filter")
    ops = {int(e["lag"]): operator_from_json(e["operator"]) for e in obj["ops"]}
    mx = None if obj.get("mean_x") is None else np.asarray(obj["mean_x"])
    my = None if obj.get("mean_y") is None else np.asarray(obj["mean_y"])
    return LinearFilter(ops, tuple(obj["support"]), mx, my, dict(obj.get("info") or {}))


def fit_to_json(fit: RegressionFit) -> dict:
    return {
        "type": "regression_fit",
        "A_hat": operator_to_json(fit.A_hat),
        "K_used": fit.K_used,
        "residual_variance": fit.residual_variance,
        "mean_x": _vec(fit.mean_x),
        "mean_y": _vec(fit.mean_y),
    }


def fit_from_json(obj: dict) -> RegressionFit:
    if obj.get("type") != "regression_fit":
        raise ValueError("payload is not a regression_fit")
    return RegressionFit(
        operator_from_json(obj["A_hat"]),
        int(obj["K_used"]),
        float(obj["residual_variance"]),
        np.asarray(obj["mean_x"], dtype=float),
        np.asarray(obj["mean_y"], dtype=float),
    )


def spectral_to_json(S: SpectralDensity | FrequencyResponse) -> dict:
    out = {
        "type": "frequency_response" if isinstance(S, FrequencyResponse) else "spectral_density",
        "T": S.grid.T,
        "values": {str(j): operator_to_json(S.values[j]) for j in range(S.grid.T)},
    }
    if isinstance(S, FrequencyResponse):
        out["K_used"] = np.asarray(S.K_used).tolist()
        out["flagged"] = list(S.flagged)
    return out


def spectral_from_json(obj: dict) -> SpectralDensity | FrequencyResponse:
    grid = FrequencyGrid(int(obj["T"]))
    values = np.stack([operator_from_json(obj["values"][str(j)]) for j in range(grid.T)])
    values = values.astype(complex)
    if obj.get("type") == "frequency_response":
        return FrequencyResponse(grid, values, np.asarray(obj["K_used"]), list(obj["flagged"]))
    return SpectralDensity(grid, values)


# --- JSON schemas ------------------------------------------------------------

_NUM_ARRAY = {"type": "array", "items": {"type": "number"}}
_NULLABLE_VEC = {"anyOf": [_NUM_ARRAY, {"type": "null"}]}

OPERATOR_SCHEMA = {
    "type": "object",
    "required": ["d"],
    "properties": {"d": {"type": "integer", "minimum": 1}, "entries": _NUM_ARRAY, "re": _NUM_ARRAY, "im": _NUM_ARRAY},
    "oneOf": [{"required": ["entries"]}, {"required": ["re", "im"]}],
}

FILTER_SCHEMA = {
    "type": "object",
    "required": ["type", "d", "support", "ops", "mean_x", "mean_y", "info"],
    "properties": {
        "type": {"const": "linear_filter"},
        "d": {"type": ["integer", "null"]},
        "support": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "ops": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lag", "operator"],
                "properties": {"lag": {"type": "integer"}, "operator": OPERATOR_SCHEMA},
            },
        },
        "mean_x": _NULLABLE_VEC,
        "mean_y": _NULLABLE_VEC,
        "info": {"type": "object"},
    },
}

FIT_SCHEMA = {
    "type": "object",
    "required": ["type", "A_hat", "K_used", "residual_variance", "mean_x", "mean_y"],
    "properties": {
        "type": {"const": "regression_fit"},
        "A_hat": OPERATOR_SCHEMA,
        "K_used": {"type": "integer", "minimum": 1},
        "residual_variance": {"type": "number", "minimum": 0},
        "mean_x": _NUM_ARRAY,
        "mean_y": _NUM_ARRAY,
    },
}

METADATA_SCHEMA = {
    "type": "object",
    "required": ["seed", "spec_hash", "rng", "kind", "rows", "d", "n"],
    "properties": {
        "seed": {"type": "integer"},
        "spec_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "rng": {"type": "string"},
        "kind": {"enum": ["white", "far1", "filtered"]},
        "rows": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "d": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 2},
    },
}

EVAL_SCHEMA = {
    "type": "object",
    "required": ["per_lag_hs_error", "total_hs_error", "prediction_mse", "holdout"],
    "properties": {
        "per_lag_hs_error": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}},
        "total_hs_error": {"type": "number", "minimum": 0},
        "prediction_mse": {"type": ["number", "null"]},
        "holdout": {"type": "object"},
    },
}
