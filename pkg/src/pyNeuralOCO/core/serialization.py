"""
Self-describing binary container for parameters, teachers and episodes.

Layout (all integers little-endian)::

    offset 0   4 bytes   magic b"PNOC"
    offset 4   uint16    format version (1)
    offset 6   uint32    header length N in bytes
    offset 10  N bytes   UTF-8 JSON header, keys sorted:
                         {"tag": str, "meta": {...},
                          "tensors": [{"name": str, "shape": [int, ...]}, ...]}
    offset 10+N          each tensor in header order as flat little-endian float64 (C order)

Files are written to a temporary sibling and renamed into place.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from pathlib import Path
from typing import Any, Dict, NamedTuple, Sequence, Tuple, Union

import numpy as np

MAGIC = b"PNOC"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<4sHI")

PathLike = Union[str, os.PathLike]


class Container(NamedTuple):
    tag: str
    meta: Dict[str, Any]
    tensors: Dict[str, np.ndarray]


def atomic_write_bytes(path: PathLike, data: bytes) -> Path:
    """Write to a temporary file in the target directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(handle, "wb") as stream:
            stream.write(data)
            stream.flush()
            os.fsync(stream.fileno())
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise
    return path


def encode_container(tag: str, meta: Dict[str, Any], tensors: Sequence[Tuple[str, np.ndarray]]) -> bytes:
    arrays = [(name, np.ascontiguousarray(value, dtype="<f8")) for name, value in tensors]
    header = {
        "tag": tag,
        "meta": meta,
        "tensors": [{"name": name, "shape": list(array.shape)} for name, array in arrays],
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    body = b"".join(array.tobytes(order="C") for _, array in arrays)
    return _PREFIX.pack(MAGIC, FORMAT_VERSION, len(header_bytes)) + header_bytes + body


def decode_container(data: bytes) -> Container:
    if len(data) < _PREFIX.size:
        raise ValueError("Container truncated before header")
    magic, version, header_length = _PREFIX.unpack_from(data, 0)
    if magic != MAGIC:
        raise ValueError(f"Not a container file (magic {magic!r})")
    if version != FORMAT_VERSION:
        raise ValueError(f"Unsupported container version {version}")
    start = _PREFIX.size
    header = json.loads(data[start : start + header_length].decode("utf-8"))
    offset = start + header_length
    tensors: Dict[str, np.ndarray] = {}
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape, dtype=np.int64))
        end = offset + 8 * count
        if end > len(data):
            raise ValueError(f"Container truncated inside tensor '{entry['name']}'")
        tensors[entry["name"]] = np.frombuffer(data, dtype="<f8", count=count, offset=offset).reshape(shape).copy()
        offset = end
    if offset != len(data):
        raise ValueError("Trailing bytes after the last tensor")
    return Container(header["tag"], header["meta"], tensors)


def save_container(path: PathLike, tag: str, meta: Dict[str, Any],
                   tensors: Sequence[Tuple[str, np.ndarray]]) -> Path:
    return atomic_write_bytes(path, encode_container(tag, meta, tensors))


def load_container(path: PathLike) -> Container:
    return decode_container(Path(path).read_bytes())


def read_header(path: PathLike) -> Dict[str, Any]:
    """Tag, metadata and tensor table without materializing tensors."""
    with open(path, "rb") as stream:
        prefix = stream.read(_PREFIX.size)
        magic, version, header_length = _PREFIX.unpack(prefix)
        if magic != MAGIC:
            raise ValueError(f"Not a container file (magic {magic!r})")
        header = json.loads(stream.read(header_length).decode("utf-8"))
    header["version"] = version
    return header
