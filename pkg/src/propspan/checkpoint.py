"""Binary checkpoint container for :class:`~propspan.mgn.ModelParams`.

Layout: magic line, one JSON header line (format version, dims, array
names and shapes), then each array as raw little-endian float64 in header
order.  Loading reproduces the arrays bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import CheckpointError
from .mgn import PARAM_NAMES, Dims, ModelParams

MAGIC = b"PROPSPAN-MGN\n"
FORMAT_VERSION = 1


def dumps_params(params: ModelParams) -> bytes:
    d = params.dims
    header = {
        "version": FORMAT_VERSION,
        "dims": {"vocab": d.vocab, "embed": d.embed, "hidden": d.hidden, "window": d.window},
        "dtype": "<f8",
        "arrays": [[name, list(arr.shape)] for name, arr in params.arrays()],
    }
    parts = [MAGIC, json.dumps(header, sort_keys=True).encode("utf-8") + b"\n"]
    parts.extend(np.ascontiguousarray(arr, dtype="<f8").tobytes() for _, arr in params.arrays())
    return b"".join(parts)


def loads_params(blob: bytes) -> ModelParams:
    if not blob.startswith(MAGIC):
        raise CheckpointError("not a propspan checkpoint")
    rest = blob[len(MAGIC):]
    nl = rest.find(b"\n")
    if nl < 0:
        raise CheckpointError("truncated header")
    try:
        header = json.loads(rest[:nl].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError("corrupt header: %s" % exc) from None
    if header.get("version") != FORMAT_VERSION:
        raise CheckpointError("unsupported checkpoint version %r" % header.get("version"))
    dims = Dims(**header["dims"])
    expected = dims.shapes()
    names = [n for n, _ in header["arrays"]]
    if names != list(PARAM_NAMES):
        raise CheckpointError("unexpected array list %r" % names)
    body = rest[nl + 1:]
    offset = 0
    arrays = {}
    for name, shape in header["arrays"]:
        shape = tuple(shape)
        if shape != expected[name]:
            raise CheckpointError("array %s has shape %s, dims imply %s" % (name, shape, expected[name]))
        nbytes = 8 * int(np.prod(shape, dtype=np.int64))
        chunk = body[offset:offset + nbytes]
        if len(chunk) != nbytes:
            raise CheckpointError("truncated array %s" % name)
        arrays[name] = np.frombuffer(chunk, dtype="<f8").reshape(shape).astype(np.float64)
        offset += nbytes
    if offset != len(body):
        raise CheckpointError("%d trailing bytes" % (len(body) - offset))
    return ModelParams(dims, **arrays)


def save_params(params: ModelParams, path) -> None:
    with open(path, "wb") as fh:
        fh.write(dumps_params(params))


def load_params(path) -> ModelParams:
    with open(path, "rb") as fh:
        return loads_params(fh.read())
