"""File formats: versioned CSV tables, Lambda and path files, signals,
multiplier dumps and run manifests.

Every CSV written here starts with a ``# schema: NAME vVERSION`` line.
Readers skip ``#`` lines and raise :class:`FormatError` naming the file,
line and field on bad input.
"""
from __future__ import annotations

import csv
import hashlib
import io as _io
import json
from pathlib import Path

import numpy as np

from .lambdaset import LambdaSet
from .maximal import SignalZ
from .multiplier import FreqGrid, SampledMultiplier
from .variation import VectorPath

__all__ = [
    "FormatError",
    "SCHEMA_VERSION",
    "format_value",
    "csv_text",
    "write_csv",
    "read_csv",
    "read_lambda_file",
    "write_lambda_file",
    "read_path_csv",
    "write_path_csv",
    "read_signal_csv",
    "write_signal_csv",
    "write_multiplier",
    "read_multiplier",
    "sha256_file",
    "write_manifest",
    "read_manifest",
]

SCHEMA_VERSION = 1


class FormatError(ValueError):
    pass


def format_value(v) -> str:
    """Deterministic text for a CSV cell (shortest round-trip repr for floats)."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def csv_text(schema: str, columns, rows) -> str:
    buf = _io.StringIO()
    buf.write(f"# schema: {schema} v{SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path, schema: str, columns, rows) -> Path:
    path = Path(path)
    path.write_text(csv_text(schema, columns, rows))
    return path


def _data_lines(path):
    """(lineno, text) of non-comment, non-blank lines."""
    path = Path(path)
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        s = line.strip()
        if s and not s.startswith("#"):
            yield lineno, s


def read_csv(path):
    """Header and rows (as strings) of a CSV written by :func:`write_csv`."""
    lines = list(_data_lines(path))
    if not lines:
        raise FormatError(f"{path}: no header")
    rows = list(csv.reader([t for _, t in lines]))
    return rows[0], [(lines[k][0], r) for k, r in enumerate(rows[1:], start=1)]


def _parse(path, lineno, fieldname, text, conv):
    try:
        return conv(text)
    except (ValueError, TypeError):
        raise FormatError(f"{path}:{lineno}: field {fieldname!r}: cannot parse {text!r}") from None


def read_lambda_file(path) -> LambdaSet:
    """One value per line; blank lines and ``#`` comments are skipped."""
    vals = []
    for lineno, text in _data_lines(path):
        v = _parse(path, lineno, "lambda", text, float)
        if not 0 <= v <= 1:
            raise FormatError(f"{path}:{lineno}: field 'lambda': {v} not in [0, 1]")
        vals.append(v)
    if not vals:
        raise FormatError(f"{path}: no values")
    return LambdaSet(np.array(vals))


def write_lambda_file(path, lam) -> Path:
    pts = np.asarray(getattr(lam, "points", lam), dtype=float)
    Path(path).write_text("".join(format_value(v) + "\n" for v in pts))
    return Path(path)


def read_path_csv(path) -> VectorPath:
    """Columns ``lambda, component_1, ..., component_K``."""
    header, rows = read_csv(path)
    if not header or header[0] != "lambda" or len(header) < 2:
        raise FormatError(f"{path}: header must be 'lambda,component_1,...'")
    lam, pts = [], []
    for lineno, row in rows:
        if len(row) != len(header):
            raise FormatError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        lam.append(_parse(path, lineno, "lambda", row[0], float))
        pts.append([_parse(path, lineno, header[i], row[i], complex) for i in range(1, len(row))])
    pts = np.array(pts)
    if np.all(pts.imag == 0):
        pts = pts.real
    try:
        return VectorPath(np.array(lam), pts)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_path_csv(path, vp: VectorPath) -> Path:
    cols = ["lambda"] + [f"component_{k + 1}" for k in range(vp.K)]
    rows = [[l, *p] for l, p in zip(vp.lambdas, vp.points)]
    return write_csv(path, "path", cols, rows)


def read_signal_csv(path) -> SignalZ:
    """Columns ``n, re, im`` with integer n; missing sites are zero."""
    header, rows = read_csv(path)
    if header != ["n", "re", "im"]:
        raise FormatError(f"{path}: header must be 'n,re,im'")
    ns, vals = [], []
    for lineno, row in rows:
        if len(row) != 3:
            raise FormatError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
        ns.append(_parse(path, lineno, "n", row[0], int))
        vals.append(_parse(path, lineno, "re", row[1], float) + 1j * _parse(path, lineno, "im", row[2], float))
    if not ns:
        raise FormatError(f"{path}: no samples")
    ns = np.array(ns)
    lo = int(ns.min())
    dense = np.zeros(int(ns.max()) - lo + 1, dtype=complex)
    np.add.at(dense, ns - lo, vals)
    return SignalZ(lo, dense)


def write_signal_csv(path, f: SignalZ) -> Path:
    vals = np.asarray(f.samples, dtype=complex)
    rows = [[n, v.real, v.imag] for n, v in zip(f.sites, vals)]
    return write_csv(path, "signal", ["n", "re", "im"], rows)


def write_multiplier(stem, m: SampledMultiplier):
    """Write ``stem.csv`` (grid metadata) and ``stem.bin`` (little-endian complex128)."""
    stem = Path(stem)
    g = m.grid
    write_csv(stem.with_suffix(".csv"), "multiplier", ["domain", "start", "stop", "size", "dtype"],
              [[g.domain, g.start, g.stop, g.size, "<c16"]])
    stem.with_suffix(".bin").write_bytes(np.asarray(m.values, dtype="<c16").tobytes())
    return stem.with_suffix(".csv"), stem.with_suffix(".bin")


def read_multiplier(stem) -> SampledMultiplier:
    stem = Path(stem)
    meta = stem.with_suffix(".csv")
    header, rows = read_csv(meta)
    if len(rows) != 1:
        raise FormatError(f"{meta}: expected one metadata row")
    lineno, row = rows[0]
    rec = dict(zip(header, row))
    try:
        grid = FreqGrid(rec["domain"], float(rec["start"]), float(rec["stop"]), int(rec["size"]))
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{meta}:{lineno}: bad grid metadata ({exc})") from None
    vals = np.frombuffer(stem.with_suffix(".bin").read_bytes(), dtype=rec.get("dtype", "<c16"))
    if vals.size != grid.size:
        raise FormatError(f"{stem.with_suffix('.bin')}: {vals.size} values for grid size {grid.size}")
    return SampledMultiplier(grid, vals.astype(complex))


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path, manifest: dict) -> Path:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return Path(path)


def read_manifest(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}: {exc.msg}") from None
