"""CSV/JSON serialization with fixed 12-significant-digit number formatting."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import ConfigError

SIG = 12


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{SIG}g}"


def jsonable(obj):
    """Convert numpy types and round floats to 12 significant digits; infinities become strings."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x) or math.isnan(x):
            return fmt(x)
        return float(f"{x:.{SIG}g}")
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def load_json(path) -> dict:
    """Read a JSON config; syntax errors become ``ConfigError`` with line/column."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return loads(text, str(path))


def loads(text: str, source: str = "<config>") -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def table_to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) if not isinstance(row.get(c), str) else row.get(c) for c in columns])
    return buf.getvalue()


def write_table(path, rows, columns=None) -> None:
    Path(path).write_text(table_to_csv(rows, columns))


def path_rows(path) -> tuple[list[str], list[dict]]:
    """Columnar view of a walk: one line per step, increments/weights empty at step 0."""
    D = path.manifold.ambient_dim
    cols = ["step"] + [f"point_{j}" for j in range(D)] + [f"incr_{j}" for j in range(D)] + ["weight"]
    rows = []
    for k in range(path.n + 1):
        rec = {"step": k}
        for j in range(D):
            rec[f"point_{j}"] = path.points[k, j]
            rec[f"incr_{j}"] = path.increments[k - 1, j] if k > 0 else None
        rec["weight"] = path.row.theta[k - 1] if k > 0 else None
        rows.append(rec)
    return cols, rows


def write_path(path, csv_file, manifest_file, extra: dict | None = None) -> None:
    cols, rows = path_rows(path)
    write_table(csv_file, rows, cols)
    manifest = {
        "manifold": path.manifold.spec(),
        "law": path.law.spec() if path.law is not None else None,
        "n": path.n,
        "seed": path.seed,
        "x0": path.x0,
        "support_radius": path.support_radius,
    }
    if extra:
        manifest.update(extra)
    write_json(manifest_file, manifest)


def read_path_csv(csv_file) -> dict:
    """Parse a walk CSV back into arrays (points, increments, weights)."""
    with Path(csv_file).open(newline="") as fh:
        reader = csv.DictReader(fh)
        recs = list(reader)
    pcols = sorted((c for c in reader.fieldnames if c.startswith("point_")), key=lambda c: int(c[6:]))
    icols = sorted((c for c in reader.fieldnames if c.startswith("incr_")), key=lambda c: int(c[5:]))
    points = np.array([[float(r[c]) for c in pcols] for r in recs])
    incs = np.array([[float(r[c]) for c in icols] for r in recs[1:]])
    weights = np.array([float(r["weight"]) for r in recs[1:]])
    return {"points": points, "increments": incs, "weights": weights}
