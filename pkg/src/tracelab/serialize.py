"""Interchange formats: matrices, channels, witnesses, and key-value config files.

Matrices travel as JSON documents with fields ``dim`` (``[rows, cols]``) and
``entries`` (row-major sequence of ``[re, im]`` pairs).  Floats are rendered
with 17 significant decimal digits, which round-trips IEEE doubles exactly.
Channels add ``d_in``/``d_out`` and a ``kraus`` list of matrix documents;
witnesses embed their parameter record, matrices, the stored gap, and the
seed lineage.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import KrausChannel
from .probe import Witness

__all__ = [
    "format_float",
    "matrix_to_json",
    "matrix_from_json",
    "write_matrix",
    "read_matrix",
    "channel_to_json",
    "channel_from_json",
    "write_channel",
    "read_channel",
    "witness_to_json",
    "witness_from_json",
    "write_witness",
    "read_witness",
    "load_config",
]


def format_float(x: float) -> str:
    """17 significant digits; exact decimal round-trip for doubles."""
    return f"{float(x):.16e}"


def matrix_to_json(a) -> str:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim {arr.ndim}")
    rows, cols = arr.shape
    entries = ",".join(
        f"[{format_float(z.real)},{format_float(z.imag)}]" for z in arr.ravel(order="C")
    )
    return f'{{"dim":[{rows},{cols}],"entries":[{entries}]}}'


def matrix_from_json(text_or_doc) -> np.ndarray:
    doc = json.loads(text_or_doc) if isinstance(text_or_doc, str) else text_or_doc
    rows, cols = (int(v) for v in doc["dim"])
    entries = doc["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(rows, cols)


def write_matrix(path, a) -> None:
    Path(path).write_text(matrix_to_json(a) + "\n")


def read_matrix(path) -> np.ndarray:
    return matrix_from_json(Path(path).read_text())


def channel_to_json(ch: KrausChannel) -> str:
    kraus = ",".join(matrix_to_json(k) for k in ch.kraus)
    return f'{{"d_in":{ch.d_in},"d_out":{ch.d_out},"kraus":[{kraus}]}}'


def channel_from_json(text_or_doc) -> KrausChannel:
    doc = json.loads(text_or_doc) if isinstance(text_or_doc, str) else text_or_doc
    ops = tuple(matrix_from_json(k) for k in doc["kraus"])
    ch = KrausChannel(ops)
    if ch.d_in != int(doc["d_in"]) or ch.d_out != int(doc["d_out"]):
        raise ValueError("channel dimensions disagree with the Kraus operators")
    return ch


def write_channel(path, ch: KrausChannel) -> None:
    Path(path).write_text(channel_to_json(ch) + "\n")


def read_channel(path) -> KrausChannel:
    return channel_from_json(Path(path).read_text())


def witness_to_json(w: Witness) -> str:
    params = ",".join(f'"{k}":{format_float(v)}' for k, v in sorted(w.params.items()))
    left = ",".join(matrix_to_json(m) for m in w.left)
    right = ",".join(matrix_to_json(m) for m in w.right)
    fixed = ",".join(f'"{k}":{matrix_to_json(v)}' for k, v in sorted(w.fixed.items()))
    lineage = ",".join(str(int(v)) for v in w.seed_lineage)
    return (
        f'{{"functional":"{w.functional}","params":{{{params}}},'
        f'"left":[{left}],"right":[{right}],"fixed":{{{fixed}}},'
        f'"gap":{format_float(w.gap)},"seed_lineage":[{lineage}]}}'
    )


def witness_from_json(text_or_doc) -> Witness:
    doc = json.loads(text_or_doc) if isinstance(text_or_doc, str) else text_or_doc
    return Witness(
        functional=doc["functional"],
        params={k: float(v) for k, v in doc["params"].items()},
        left=tuple(matrix_from_json(m) for m in doc["left"]),
        right=tuple(matrix_from_json(m) for m in doc["right"]),
        fixed={k: matrix_from_json(v) for k, v in doc["fixed"].items()},
        gap=float(doc["gap"]),
        seed_lineage=tuple(int(v) for v in doc.get("seed_lineage", ())),
    )


def write_witness(path, w: Witness) -> None:
    Path(path).write_text(witness_to_json(w) + "\n")


def read_witness(path) -> Witness:
    return witness_from_json(Path(path).read_text())


def load_config(path) -> dict:
    """Parse a ``key = value`` config file; '#' starts a comment.

    Values are coerced to int, then float, else kept as strings.
    """
    out: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"{path}:{lineno}: empty key")
        for cast in (int, float):
            try:
                out[key] = cast(value)
                break
            except ValueError:
                continue
        else:
            out[key] = value
    return out
