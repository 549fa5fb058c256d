"""Reducer persistence as JSON.

Floats are written with the ``%.17g`` format, which is enough digits for an
exact float64 round trip, so a loaded reducer transforms bit-identically to
the one that was saved. The writer emits keys in a fixed order so repeated
saves of the same reducer produce identical bytes.
"""

from __future__ import annotations

import json
from typing import Union

import numpy as np

from .adapters import ChannelReducer, REDUCER_KINDS
from .errors import FormatError, InvalidArgument
from .lcomb import LcombAdapter

Reducer = Union[ChannelReducer, LcombAdapter]


def _fnum(v: float) -> str:
    return "%.17g" % float(v)


def _vec(arr) -> str:
    return "[" + ", ".join(_fnum(v) for v in np.asarray(arr, dtype=np.float64)) + "]"


def _mat(arr) -> str:
    rows = np.asarray(arr, dtype=np.float64)
    return "[" + ", ".join(_vec(row) for row in rows) + "]"


def dumps_reducer(reducer: Reducer) -> str:
    """Serialize a fitted reducer or combiner to a JSON string."""
    lines = ["{"]
    if isinstance(reducer, LcombAdapter):
        lines.append('  "kind": "lcomb",')
        lines.append(f'  "d_in": {reducer.d_in},')
        lines.append(f'  "d_out": {reducer.d_out},')
        lines.append(f'  "k": {"null" if reducer.k is None else reducer.k},')
        lines.append(f'  "logits": {_mat(reducer.logits)}')
    elif isinstance(reducer, ChannelReducer):
        seed = "null" if reducer.seed is None else str(int(reducer.seed))
        evr = reducer.explained_variance_ratio
        lines.append(f'  "kind": {json.dumps(reducer.kind)},')
        lines.append(f'  "d_in": {reducer.d_in},')
        lines.append(f'  "d_out": {reducer.d_out},')
        lines.append(f'  "pws": {reducer.pws},')
        lines.append(f'  "seed": {seed},')
        lines.append(f'  "truncated_steps": {reducer.truncated_steps},')
        lines.append(f'  "center": {_vec(reducer.center)},')
        lines.append(f'  "scale": {_vec(reducer.scale)},')
        lines.append(f'  "w": {_mat(reducer.w)},')
        lines.append(
            '  "explained_variance_ratio": '
            + ("null" if evr is None else _vec(evr))
        )
    else:
        raise InvalidArgument(f"cannot serialize object of type {type(reducer).__name__}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _need(obj: dict, key: str):
    if key not in obj:
        raise FormatError(f"reducer json is missing key {key!r}")
    return obj[key]


def _as_int(obj: dict, key: str) -> int:
    v = _need(obj, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"reducer json key {key!r} must be an integer, got {v!r}")
    return v


def loads_reducer(text: str) -> Reducer:
    """Parse a reducer JSON string back into its record type."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"reducer json is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise FormatError("reducer json must be an object")
    kind = _need(obj, "kind")
    try:
        if kind == "lcomb":
            k = obj.get("k")
            logits = np.asarray(_need(obj, "logits"), dtype=np.float64)
            adapter = LcombAdapter(logits=logits, k=k)
            if adapter.d_in != _as_int(obj, "d_in") or adapter.d_out != _as_int(obj, "d_out"):
                raise FormatError("reducer json d_in/d_out do not match the logits shape")
            return adapter
        if kind in REDUCER_KINDS:
            seed = obj.get("seed")
            if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
                raise FormatError(f"reducer json key 'seed' must be an integer or null, got {seed!r}")
            evr = obj.get("explained_variance_ratio")
            return ChannelReducer(
                kind=kind,
                w=np.asarray(_need(obj, "w"), dtype=np.float64),
                center=np.asarray(_need(obj, "center"), dtype=np.float64),
                scale=np.asarray(_need(obj, "scale"), dtype=np.float64),
                pws=_as_int(obj, "pws"),
                d_in=_as_int(obj, "d_in"),
                d_out=_as_int(obj, "d_out"),
                truncated_steps=_as_int(obj, "truncated_steps"),
                seed=seed,
                explained_variance_ratio=None if evr is None else np.asarray(evr, dtype=np.float64),
            )
    except InvalidArgument as exc:
        raise FormatError(f"reducer json is inconsistent: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise FormatError(f"reducer json holds malformed arrays: {exc}") from None
    raise FormatError(f"reducer json has unknown kind {kind!r}")


def save_reducer(reducer: Reducer, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_reducer(reducer))


def load_reducer(path) -> Reducer:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_reducer(fh.read())
