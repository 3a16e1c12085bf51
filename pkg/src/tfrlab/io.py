"""File formats.

Binary files start with a one-line JSON header followed by little-endian
float64 ``(re, im)`` pairs:

* signal: ``{"length", "dt", "t0", "dtype": "c128"}``
* TF matrix: ``{"n_x", "n_omega", "x0", "dx", "omega0", "domega", "repr"}``, row-major
* Zak matrix: ``{"N", "M", "dt", "repr": "zak"}``, row-major

Text formats are CSV: signals ``t,re,im``; sample sets ``k,re,im`` with a
JSON sidecar ``{"T", "band"}``; Fock samples ``re_z,im_z,re_B,im_B``; scan
tables ``a,b,density,A,B,condition``.  Floats are written as shortest
round-trip decimals.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .signals import FiniteSignal, TimeGrid
from .tfr import TFMatrix
from .zak import ZakMatrix

__all__ = [
    "fmt_float",
    "write_signal",
    "read_signal",
    "write_tfmatrix",
    "read_tfmatrix",
    "write_zak",
    "read_zak",
    "write_samples",
    "read_samples",
    "write_fock_csv",
    "write_scan_csv",
    "write_rows_csv",
    "json_safe",
]


def fmt_float(x: float) -> str:
    """Shortest round-trip decimal (``inf``/``nan`` spelled out)."""
    x = float(x)
    if math.isfinite(x):
        return repr(x)
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def json_safe(obj):
    """Recursively replace non-finite floats and numpy scalars by JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else fmt_float(x)
    if isinstance(obj, (complex, np.complexfloating)):
        return [json_safe(obj.real), json_safe(obj.imag)]
    return obj


def _schema(msg: str) -> ValidationError:
    return ValidationError(f"schema: {msg}", code="io.schema")


def _write_binary(path, header: dict, values: np.ndarray):
    data = np.empty(values.size * 2, dtype="<f8")
    flat = np.asarray(values, dtype=complex).ravel()
    data[0::2] = flat.real
    data[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(data.tobytes())


def _read_binary(path, required: dict):
    raw = Path(path).read_bytes()
    if not raw:
        raise _schema(f"{path} is empty")
    nl = raw.find(b"\n")
    if nl < 0:
        raise _schema(f"{path} has no header line")
    try:
        header = json.loads(raw[:nl])
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise _schema(f"{path} header is not JSON ({exc})") from None
    if not isinstance(header, dict):
        raise _schema("header must be a JSON object")
    for key, typ in required.items():
        if key not in header:
            raise _schema(f"header missing {key!r}")
        if not isinstance(header[key], typ) or isinstance(header[key], bool):
            raise _schema(f"header field {key!r} has the wrong type")
    body = raw[nl + 1:]
    if len(body) % 16:
        raise _schema("payload is not a whole number of complex128 values")
    data = np.frombuffer(body, dtype="<f8")
    return header, data[0::2] + 1j * data[1::2]


def write_signal(path, f: FiniteSignal, fmt: str | None = None):
    fmt = fmt or ("csv" if str(path).endswith(".csv") else "bin")
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "re", "im"])
            for t, v in zip(f.grid.times(), f.values):
                w.writerow([fmt_float(t), fmt_float(v.real), fmt_float(v.imag)])
        return
    header = {"length": f.length, "dt": f.dt, "t0": f.grid.origin, "dtype": "c128"}
    _write_binary(path, header, f.values)


def read_signal(path) -> FiniteSignal:
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"no such file: {path}", code="io.missing")
    raw = p.read_bytes()
    if not raw.strip():
        raise _schema(f"{path} is empty")
    if raw.lstrip().startswith(b"{"):
        header, vals = _read_binary(path, {"length": int, "dt": (int, float), "t0": (int, float),
                                           "dtype": str})
        if header["dtype"] != "c128":
            raise _schema(f"unsupported dtype {header['dtype']!r}")
        if vals.size != header["length"]:
            raise _schema(f"header length {header['length']} but {vals.size} values")
        return FiniteSignal(vals, TimeGrid(header["length"], header["dt"], header["t0"]))
    rows = list(csv.reader(raw.decode().splitlines()))
    if not rows or [c.strip() for c in rows[0]] != ["t", "re", "im"]:
        raise _schema("CSV signal needs the header t,re,im")
    try:
        arr = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise _schema(f"bad CSV number ({exc})") from None
    if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] != 3:
        raise _schema("CSV signal needs at least two rows of t,re,im")
    steps = np.diff(arr[:, 0])
    dt = float(steps.mean())
    if not np.allclose(steps, dt, rtol=1e-9, atol=0):
        raise _schema("CSV times must be equally spaced")
    return FiniteSignal(arr[:, 1] + 1j * arr[:, 2], TimeGrid(arr.shape[0], dt, float(arr[0, 0])))


def write_tfmatrix(path, F: TFMatrix):
    header = {"n_x": F.n_x, "n_omega": F.n_omega, "x0": F.x0, "dx": F.dx,
              "omega0": F.omega0, "domega": F.domega, "repr": F.repr}
    _write_binary(path, header, F.values)


def read_tfmatrix(path) -> TFMatrix:
    num = (int, float)
    header, vals = _read_binary(path, {"n_x": int, "n_omega": int, "x0": num, "dx": num,
                                       "omega0": num, "domega": num, "repr": str})
    if vals.size != header["n_x"] * header["n_omega"]:
        raise _schema("payload size does not match n_x * n_omega")
    return TFMatrix(vals.reshape(header["n_x"], header["n_omega"]), header["x0"], header["dx"],
                    header["omega0"], header["domega"], header["repr"])


def write_zak(path, Z: ZakMatrix):
    _write_binary(path, {"N": Z.N, "M": Z.M, "dt": Z.dt, "repr": "zak"}, Z.values)


def read_zak(path) -> ZakMatrix:
    header, vals = _read_binary(path, {"N": int, "M": int, "dt": (int, float)})
    if vals.size != header["N"] * header["M"]:
        raise _schema("payload size does not match N * M")
    return ZakMatrix(vals.reshape(header["N"], header["M"]), header["dt"])


def _sidecar(path) -> Path:
    return Path(path).with_suffix(".json")


def write_samples(path, s):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "re", "im"])
        for k, v in zip(s.indices, s.values):
            w.writerow([int(k), fmt_float(v.real), fmt_float(v.imag)])
    side = {"T": s.T, "band": list(s.band) if s.band is not None else None}
    _sidecar(path).write_text(json.dumps(side) + "\n")


def read_samples(path):
    from .sampling import SampleSet

    p = Path(path)
    if not p.exists():
        raise ValidationError(f"no such file: {path}", code="io.missing")
    rows = list(csv.reader(p.read_text().splitlines()))
    if not rows or [c.strip() for c in rows[0]] != ["k", "re", "im"]:
        raise _schema("sample CSV needs the header k,re,im")
    try:
        ks = [int(r[0]) for r in rows[1:] if r]
        vals = [float(r[1]) + 1j * float(r[2]) for r in rows[1:] if r]
    except (ValueError, IndexError) as exc:
        raise _schema(f"bad sample row ({exc})") from None
    if not ks:
        raise _schema("sample CSV has no rows")
    if ks != list(range(ks[0], ks[0] + len(ks))):
        raise _schema("sample indices must be consecutive")
    side = _sidecar(path)
    if not side.exists():
        raise _schema(f"missing sidecar {side}")
    meta = json.loads(side.read_text())
    unknown = set(meta) - {"T", "band"}
    if unknown or "T" not in meta:
        raise _schema("sidecar must be {T, band}")
    band = meta.get("band")
    return SampleSet(vals, float(meta["T"]), ks[0], tuple(band) if band is not None else None)


def write_fock_csv(path, z, values):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re_z", "im_z", "re_B", "im_B"])
        for zz, v in zip(np.ravel(z), np.ravel(values)):
            w.writerow([fmt_float(zz.real), fmt_float(zz.imag), fmt_float(v.real), fmt_float(v.imag)])


def write_rows_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([fmt_float(v) if isinstance(v, float) else v for v in r])


def write_scan_csv(path, rows):
    write_rows_csv(path, ["a", "b", "density", "A", "B", "condition"],
                   [(r.a, r.b, float(r.density), float(r.A), float(r.B), float(r.condition)) for r in rows])
