"""Reading and writing matrices as JSON or CSV.

JSON: {"dim": n, "entries": [[re, im], ...]} in row-major order.
CSV: one line per row, entries like "1.5", "2-0.5i", "-i".
Floats are written with 17 significant digits so a round trip is exact.
"""
import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .matcore import as_cmat


def fmt_float(x):
    return format(float(x), ".17g")


def fmt_complex(z):
    z = complex(z)
    re_, im = fmt_float(z.real), fmt_float(abs(z.imag))
    if z.imag == 0 and not np.signbit(z.imag):
        return re_
    sign = "-" if np.signbit(z.imag) else "+"
    return f"{re_}{sign}{im}i"


def parse_complex(text):
    t = text.strip().replace(" ", "")
    if not t:
        raise ParseError("empty matrix entry")
    if t[-1] in "ij":
        body = t[:-1]
        # split at the last sign that is not part of an exponent
        k = max((i for i, ch in enumerate(body) if ch in "+-" and (i == 0 or body[i - 1] not in "eE")),
                default=-1)
        real_part, imag_part = (body[:k], body[k:]) if k > 0 else ("", body)
        if imag_part in ("", "+", "-"):
            imag_part += "1"
        try:
            return complex(float(real_part) if real_part else 0.0, float(imag_part))
        except ValueError as exc:
            raise ParseError(f"cannot parse complex entry {text!r}") from exc
    try:
        return complex(float(t), 0.0)
    except ValueError as exc:
        raise ParseError(f"cannot parse complex entry {text!r}") from exc


def _finish(rows):
    try:
        return as_cmat(np.array(rows, dtype=complex))
    except Exception as exc:
        raise ParseError(f"not a finite square matrix: {exc}") from exc


def loads_json(text):
    try:
        doc = json.loads(text)
        n = int(doc["dim"])
        entries = doc["entries"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad matrix JSON: {exc}") from exc
    if n < 1 or len(entries) != n * n:
        raise ParseError(f"expected {n * n} entries for dim {n}, got {len(entries)}")
    try:
        vals = [complex(float(re_), float(im)) for re_, im in entries]
    except (ValueError, TypeError) as exc:
        raise ParseError(f"entries must be [re, im] pairs: {exc}") from exc
    return _finish(np.array(vals).reshape(n, n))


def dumps_json(M):
    M = as_cmat(M)
    n = M.shape[0]
    entries = ", ".join(f"[{fmt_float(z.real)}, {fmt_float(z.imag)}]" for z in M.ravel())
    return f'{{"dim": {n}, "entries": [{entries}]}}\n'


def loads_csv(text):
    rows = [[parse_complex(cell) for cell in row] for row in csv.reader(io.StringIO(text)) if row]
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ParseError("CSV matrix must be square")
    return _finish(rows)


def dumps_csv(M):
    M = as_cmat(M)
    return "".join(",".join(fmt_complex(z) for z in row) + "\n" for row in M)


def read_matrix(path, fmt=None):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    return loads_json(text) if fmt == "json" else loads_csv(text)


def write_matrix(M, path, fmt=None):
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    path.write_text(dumps_json(M) if fmt == "json" else dumps_csv(M))
