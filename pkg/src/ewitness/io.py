"""JSON state files.

Layout::

    {
      "d_a": 2,
      "d_b": 2,
      "matrix": [[[re, im], ...], ...],
      "normalized": true
    }

``matrix`` has ``d_a*d_b`` rows of ``d_a*d_b`` entries. Basis files use the
same layout with basis vectors in the columns of ``matrix``.
"""
import hashlib
import json
import math
import re

import numpy as np

from .errors import StateFileError, WitnessError
from .states import DensityMatrix


def _reject_constant(name):
    raise ValueError(f"non-finite value {name} is not allowed")


def _matrix_line_map(text):
    """1-based line numbers of each row and entry inside the ``matrix`` array."""
    m = re.search(r'"matrix"\s*:', text)
    if m is None:
        return [], []
    rows, entries = [], []
    depth = 0
    line = text.count("\n", 0, m.end()) + 1
    for ch in text[m.end():]:
        if ch == "\n":
            line += 1
        elif ch == "[":
            depth += 1
            if depth == 2:
                rows.append(line)
                entries.append([])
            elif depth == 3:
                entries[-1].append(line)
        elif ch == "]":
            depth -= 1
            if depth == 0:
                break
    return rows, entries


def _key_line(text, key):
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return None if m is None else text.count("\n", 0, m.start()) + 1


def _parse_matrix(text, doc, n):
    rows = doc.get("matrix")
    row_lines, entry_lines = _matrix_line_map(text)
    anchor = _key_line(text, "matrix")
    if not isinstance(rows, list):
        raise StateFileError("'matrix' must be a list of rows", anchor)
    if len(rows) != n:
        raise StateFileError(f"'matrix' has {len(rows)} rows, expected {n}", anchor)
    out = np.empty((n, n), dtype=np.complex128)
    for r, row in enumerate(rows):
        rline = row_lines[r] if r < len(row_lines) else anchor
        if not isinstance(row, list) or len(row) != n:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise StateFileError(f"matrix row {r} has {got} entries, expected {n}", rline)
        for c, entry in enumerate(row):
            eline = rline
            if r < len(entry_lines) and c < len(entry_lines[r]):
                eline = entry_lines[r][c]
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                               for x in entry)):
                raise StateFileError(
                    f"matrix entry ({r}, {c}) must be a [re, im] pair of numbers", eline)
            re_, im_ = float(entry[0]), float(entry[1])
            if not (math.isfinite(re_) and math.isfinite(im_)):
                raise StateFileError(f"matrix entry ({r}, {c}) is not finite", eline)
            out[r, c] = complex(re_, im_)
    return out


def _load_document(text):
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise StateFileError(exc.msg, exc.lineno) from None
    except ValueError as exc:
        raise StateFileError(str(exc)) from None
    if not isinstance(doc, dict):
        raise StateFileError("top level must be an object", 1)
    dims = []
    for key in ("d_a", "d_b"):
        v = doc.get(key)
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise StateFileError(f"'{key}' must be a positive integer", _key_line(text, key))
        dims.append(v)
    return doc, tuple(dims)


def parse_state(text):
    doc, dims = _load_document(text)
    normalized = doc.get("normalized", True)
    if not isinstance(normalized, bool):
        raise StateFileError("'normalized' must be true or false", _key_line(text, "normalized"))
    mat = _parse_matrix(text, doc, dims[0] * dims[1])
    try:
        return DensityMatrix(mat, dims, normalized=normalized)
    except WitnessError as exc:
        raise StateFileError(f"invalid state: {exc}", _key_line(text, "matrix")) from None


def parse_basis(text):
    doc, dims = _load_document(text)
    return _parse_matrix(text, doc, dims[0] * dims[1]), dims


def read_text(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc.strerror}") from None


def load_state(path):
    return parse_state(read_text(path))


def load_basis(path):
    return parse_basis(read_text(path))


def dump_matrix(mat, dims, normalized=None):
    """Serialize with one matrix row per line."""
    rows = []
    for row in np.asarray(mat, dtype=np.complex128):
        cells = ", ".join(f"[{float(z.real)!r}, {float(z.imag)!r}]" for z in row)
        rows.append(f"    [{cells}]")
    head = f'{{\n  "d_a": {int(dims[0])},\n  "d_b": {int(dims[1])},\n'
    if normalized is not None:
        head += f'  "normalized": {"true" if normalized else "false"},\n'
    return head + '  "matrix": [\n' + ",\n".join(rows) + "\n  ]\n}\n"


def dump_state(rho):
    return dump_matrix(rho.mat, rho.dims, rho.normalized)


def write_state(path, rho):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_state(rho))


def digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
