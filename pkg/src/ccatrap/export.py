"""File formats: annotated CSV, 16-bit PGM heatmaps and JSON manifests."""
from __future__ import annotations

import json
import platform
from pathlib import Path

import numpy as np

from . import __version__

__all__ = ["write_csv", "read_csv", "export_heatmap", "write_manifest", "format_float"]


def format_float(v) -> str:
    """Round-trippable text for a float (17 significant digits)."""
    return f"{float(v):.17g}"


def write_csv(path, columns: dict, meta: dict | None = None) -> Path:
    """Write equal-length ``columns`` preceded by ``# key=value`` comment lines.

    Values that are not numbers are written verbatim.
    """
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    lengths = {a.shape[0] for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"columns have unequal lengths {sorted(lengths)}")
    lines = [f"# {k}={v}" for k, v in (meta or {}).items()]
    lines.append(",".join(names))
    n = lengths.pop() if lengths else 0
    for i in range(n):
        row = []
        for a in arrays:
            v = a[i]
            row.append(format_float(v) if np.issubdtype(a.dtype, np.number) else str(v))
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path):
    """Inverse of :func:`write_csv`: returns ``(meta, {name: float array})``."""
    meta = {}
    header = None
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    data = np.array(rows).reshape(len(rows), len(header or []))
    return meta, {name: data[:, i] for i, name in enumerate(header or [])}


def export_heatmap(frames, path) -> tuple[Path, Path]:
    """Render ``p_x`` of ``frames`` as a 16-bit binary PGM plus a JSON sidecar.

    Rows are frames in time order (earliest on top), columns are sites from
    left to right. Intensity scales linearly from 0 to the largest ``p_x``.
    """
    if not frames:
        raise ValueError("no frames to render")
    x = np.asarray(frames[0].x)
    if any(not np.array_equal(fr.x, x) for fr in frames):
        raise ValueError("frames must share one site window")
    frames = sorted(frames, key=lambda fr: fr.t)
    img = np.array([fr.p_x for fr in frames], dtype=float)
    peak = float(img.max())
    scaled = np.zeros(img.shape, dtype=">u2")
    if peak > 0:
        scaled[...] = np.rint(img / peak * 65535.0)
    path = Path(path)
    rows, cols = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n65535\n".encode("ascii"))
        fh.write(scaled.tobytes())
    sidecar = path.with_suffix(".json")
    sidecar.write_text(json.dumps({
        "rows": rows,
        "cols": cols,
        "x_min": int(x[0]),
        "x_max": int(x[-1]),
        "t_min": float(frames[0].t),
        "t_max": float(frames[-1].t),
        "times": [float(fr.t) for fr in frames],
        "max_value": peak,
        "row_axis": "time, ascending downward",
        "col_axis": "site x, ascending rightward",
    }, indent=2) + "\n")
    return path, sidecar


def read_pgm(path) -> np.ndarray:
    """Load a binary 16-bit PGM written by :func:`export_heatmap`."""
    raw = Path(path).read_bytes()
    magic, dims, maxval, body = raw.split(b"\n", 3)
    if magic != b"P5" or int(maxval) != 65535:
        raise ValueError("not a 16-bit binary PGM")
    cols, rows = (int(v) for v in dims.split())
    return np.frombuffer(body, dtype=">u2").reshape(rows, cols)


def write_manifest(config, summary: dict, path, wall_time: float | None = None,
                   exit_code: int = 0, error: str | None = None) -> Path:
    """JSON manifest with the full run configuration and integration diagnostics."""
    doc = {
        "tool": "ccatrap",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "config": config.to_dict(),
        "status": "ok" if exit_code == 0 else "failed",
        "exit_code": exit_code,
        "error": error,
        "wall_time_s": wall_time,
        "results": summary,
    }
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=False, default=_jsonable) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
