"""Chain persistence, numeric CSV input, and deterministic JSON output.

The binary chain container is self-describing: magic bytes "MBSP", a
u32 format version, dims (p, q, draw count) as little-endian u64, then
each draw as row-major little-endian f64. A CSV representation exists
for interoperability; files are told apart by the magic bytes.
"""

from __future__ import annotations

import csv
import json
import math
import struct

import numpy as np

from .errors import ChainFormatError, InputError

MAGIC = b"MBSP"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIQQQ")


# ======================================================================
# binary chain container
# ======================================================================

def write_chain_binary(path, draws):
    draws = _check_draws(draws)
    m, p, q = draws.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, p, q, m))
        fh.write(np.ascontiguousarray(draws, dtype="<f8").tobytes())


def read_chain_binary(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise ChainFormatError(
                f"{path}: header truncated at {len(head)} bytes, need {_HEADER.size}"
            )
        magic, version, p, q, m = _HEADER.unpack(head)
        if magic != MAGIC:
            raise ChainFormatError(f"{path}: bad magic {magic!r}, not a chain file")
        if version != FORMAT_VERSION:
            raise ChainFormatError(f"{path}: unsupported format version {version}")
        if p < 1 or q < 1 or m < 1:
            raise ChainFormatError(f"{path}: invalid dims p={p} q={q} draws={m}")
        payload = fh.read()
    per_draw = p * q * 8
    if len(payload) != m * per_draw:
        have = len(payload) // per_draw
        raise ChainFormatError(
            f"{path}: payload ends inside draw {have + 1} of {m} "
            f"({len(payload)} bytes, expected {m * per_draw})"
        )
    return np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(m, p, q)


# ======================================================================
# CSV chain representation
# ======================================================================

def write_chain_csv(path, draws):
    draws = _check_draws(draws)
    m, p, q = draws.shape
    header = [f"b{i}_{j}" for i in range(p) for j in range(q)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in draws.reshape(m, p * q):
            writer.writerow([repr(float(v)) for v in row])


def read_chain_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ChainFormatError(f"{path}: empty chain CSV") from None
        p, q = _parse_chain_header(path, header)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != p * q:
                raise ChainFormatError(
                    f"{path}: line {lineno} has {len(row)} values, expected {p * q}"
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                bad = next(v for v in row if not _is_float(v))
                raise ChainFormatError(
                    f"{path}: line {lineno} has non-numeric value {bad!r}"
                ) from None
    if not rows:
        raise ChainFormatError(f"{path}: chain CSV has a header but no draws")
    return np.asarray(rows, dtype=np.float64).reshape(len(rows), p, q)


def _parse_chain_header(path, header):
    try:
        pairs = []
        for label in header:
            if not label.startswith("b"):
                raise ValueError(label)
            i, j = label[1:].split("_")
            pairs.append((int(i), int(j)))
    except ValueError:
        raise ChainFormatError(
            f"{path}: line 1 is not a chain header (labels like b0_0 expected)"
        ) from None
    p = max(i for i, _ in pairs) + 1
    q = max(j for _, j in pairs) + 1
    expected = [(i, j) for i in range(p) for j in range(q)]
    if pairs != expected:
        raise ChainFormatError(f"{path}: line 1 chain header is not in row-major order")
    return p, q


def _is_float(v):
    try:
        float(v)
        return True
    except ValueError:
        return False


def _check_draws(draws):
    draws = np.asarray(draws, dtype=np.float64)
    if draws.ndim != 3 or draws.shape[0] < 1:
        raise InputError(f"draws must have shape (m, p, q), got {draws.shape}")
    return draws


def write_chain(path, draws, fmt="binary"):
    if fmt == "binary":
        write_chain_binary(path, draws)
    elif fmt == "csv":
        write_chain_csv(path, draws)
    else:
        raise InputError(f"unknown chain format {fmt!r}")


def read_chain(path):
    """Read a chain in either format, sniffed by the magic bytes."""
    try:
        with open(path, "rb") as fh:
            head = fh.read(4)
    except OSError as err:
        raise InputError(f"cannot read chain file {path}: {err}") from err
    if head == MAGIC:
        return read_chain_binary(path)
    return read_chain_csv(path)


# ======================================================================
# numeric input CSVs
# ======================================================================

def read_numeric_csv(path):
    """Read a numeric matrix CSV; a non-numeric first row is a header.

    Ragged rows, non-numeric cells, and empty cells raise InputError
    naming the 1-based line (and column) at fault.
    """
    try:
        fh = open(path, newline="")
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from err
    with fh:
        reader = csv.reader(fh)
        rows = []
        width = None
        saw_header = False
        for lineno, row in enumerate(reader, start=1):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            if width is None and not saw_header and not all(_is_float(c) for c in row):
                # only the first non-empty row can be a header
                saw_header = True
                continue
            if width is None:
                width = len(row)
            if len(row) != width:
                raise InputError(
                    f"{path}: line {lineno} has {len(row)} columns, expected {width}"
                )
            parsed = []
            for col, cell in enumerate(row, start=1):
                cell = cell.strip()
                if cell == "":
                    raise InputError(f"{path}: missing value at line {lineno}, column {col}")
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise InputError(
                        f"{path}: non-numeric value {cell!r} at line {lineno}, column {col}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise InputError(f"{path}: no numeric rows found")
    return np.asarray(rows, dtype=np.float64)


# ======================================================================
# deterministic JSON with 17-significant-digit floats
# ======================================================================

def dumps_json(obj, indent=2):
    """JSON text with floats at 17 significant digits (%.17g), which
    round-trips float64 exactly and is stable across runs."""
    out = []
    _write_json(obj, out, indent, 0)
    return "".join(out) + "\n"


def _write_json(obj, out, indent, depth):
    pad = " " * (indent * (depth + 1))
    close_pad = " " * (indent * depth)
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v) or math.isinf(v):
            raise InputError(f"cannot serialize non-finite float {v!r} to JSON")
        out.append("%.17g" % v)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise InputError(f"JSON object keys must be strings, got {key!r}")
            out.append(pad + json.dumps(key) + ": ")
            _write_json(val, out, indent, depth + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(close_pad + "}")
    elif isinstance(obj, (list, tuple)) or (isinstance(obj, np.ndarray) and obj.ndim >= 1):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for i, val in enumerate(items):
            out.append(pad)
            _write_json(val, out, indent, depth + 1)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(close_pad + "]")
    elif isinstance(obj, np.ndarray):
        _write_json(obj.item(), out, indent, depth)
    else:
        raise InputError(f"cannot serialize {type(obj).__name__} to JSON")
