"""Binary checkpoints for the two-pathway model and the ridge baseline.

IMGN: magic, u32 LE version, u32 LE vocab_size, embedding_dim, hidden_dim, K,
then the 15 tensors in ``TENSOR_NAMES`` order as row-major f64 LE.

IMGL: magic, u32 LE version, u32 LE vocab_size, K, then A (K x vocab_size)
and b (K) as row-major f64 LE.
"""

import logging as log
import os
import struct
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np

from app.errors import FormatError
from app.imaginet.numcore import Matrix
from app.models.imaginet_params import TENSOR_NAMES, ImaginetParams
from app.models.linreg_params import LinRegParams

MODEL_MAGIC = b"IMGN"
LINREG_MAGIC = b"IMGL"
FORMAT_VERSION = 1
FLOAT_DTYPE = np.dtype("<f8")

MODEL_HEADER = struct.Struct("<4sIIIII")
LINREG_HEADER = struct.Struct("<4sIII")

Checkpoint = Union[ImaginetParams, LinRegParams]


def _tensor_shapes(vocab_size: int, embedding_dim: int, hidden_dim: int, K: int) -> Dict[str, Tuple[int, int]]:  # pylint: disable=invalid-name
    shapes = {"We": (embedding_dim, vocab_size)}
    for pathway in ("gru_visual", "gru_textual"):
        for name in ("Wz", "Wr", "W"):
            shapes[f"{pathway}.{name}"] = (hidden_dim, embedding_dim)
        for name in ("Uz", "Ur", "U"):
            shapes[f"{pathway}.{name}"] = (hidden_dim, hidden_dim)
    shapes["V"] = (K, hidden_dim)
    shapes["L"] = (vocab_size, hidden_dim)
    return shapes


def _write(file_path: Union[str, Path], header: bytes, arrays) -> None:
    os.makedirs(Path(file_path).parent, exist_ok=True)
    with open(file_path, "wb") as f:
        f.write(header)
        for array in arrays:
            f.write(np.ascontiguousarray(array, dtype=FLOAT_DTYPE).tobytes())


class _Reader:
    """Sequential reader over a checkpoint buffer with truncation checks."""

    def __init__(self, file_path: Union[str, Path], buffer: bytes):
        self.file_path = file_path
        self.buffer = buffer
        self.offset = 0

    def unpack(self, layout: struct.Struct) -> tuple:
        return layout.unpack(self.take(layout.size))

    def take(self, size: int) -> bytes:
        if self.offset + size > len(self.buffer):
            raise FormatError(f"{self.file_path}: truncated checkpoint at byte {self.offset}")
        chunk = self.buffer[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def matrix(self, shape: Tuple[int, ...]) -> Matrix:
        count = int(np.prod(shape))
        raw = self.take(count * FLOAT_DTYPE.itemsize)
        return np.frombuffer(raw, dtype=FLOAT_DTYPE).astype(np.float64).reshape(shape)

    def finish(self) -> None:
        if self.offset != len(self.buffer):
            raise FormatError(
                f"{self.file_path}: {len(self.buffer) - self.offset} trailing bytes in checkpoint"
            )


def _check_version(file_path, version: int) -> None:
    if version != FORMAT_VERSION:
        raise FormatError(f"{file_path}: unsupported checkpoint version {version}")


def save_params(file_path: Union[str, Path], p: ImaginetParams) -> None:
    header = MODEL_HEADER.pack(
        MODEL_MAGIC, FORMAT_VERSION, p.vocab_size, p.embedding_dim, p.hidden_dim, p.image_dim
    )
    _write(file_path, header, p.tensors().values())


def load_params(file_path: Union[str, Path]) -> ImaginetParams:
    with open(file_path, "rb") as f:
        reader = _Reader(file_path, f.read())
    magic, version, vocab_size, embedding_dim, hidden_dim, K = reader.unpack(MODEL_HEADER)  # pylint: disable=invalid-name
    if magic != MODEL_MAGIC:
        raise FormatError(f"{file_path}: bad magic {magic!r}, expected {MODEL_MAGIC!r}")
    _check_version(file_path, version)
    shapes = _tensor_shapes(vocab_size, embedding_dim, hidden_dim, K)
    tensors = {name: reader.matrix(shapes[name]) for name in TENSOR_NAMES}
    reader.finish()
    log.info(
        "Loaded IMGN checkpoint %s (vocab %d, embed %d, hidden %d, K %d)",
        file_path, vocab_size, embedding_dim, hidden_dim, K,
    )
    return ImaginetParams.from_tensors(tensors)


def save_linreg(file_path: Union[str, Path], p: LinRegParams) -> None:
    header = LINREG_HEADER.pack(LINREG_MAGIC, FORMAT_VERSION, p.vocab_size, p.image_dim)
    _write(file_path, header, (p.A, p.b))


def load_linreg(file_path: Union[str, Path]) -> LinRegParams:
    with open(file_path, "rb") as f:
        reader = _Reader(file_path, f.read())
    magic, version, vocab_size, K = reader.unpack(LINREG_HEADER)  # pylint: disable=invalid-name
    if magic != LINREG_MAGIC:
        raise FormatError(f"{file_path}: bad magic {magic!r}, expected {LINREG_MAGIC!r}")
    _check_version(file_path, version)
    A = reader.matrix((K, vocab_size))  # pylint: disable=invalid-name
    b = reader.matrix((K,))
    reader.finish()
    return LinRegParams(A=A, b=b)


def load_model(file_path: Union[str, Path]) -> Checkpoint:
    """Load either checkpoint kind, dispatching on the magic bytes."""
    with open(file_path, "rb") as f:
        magic = f.read(4)
    if magic == MODEL_MAGIC:
        return load_params(file_path)
    if magic == LINREG_MAGIC:
        return load_linreg(file_path)
    raise FormatError(f"{file_path}: unknown checkpoint magic {magic!r}")


def save_model(file_path: Union[str, Path], p: Checkpoint) -> None:
    if isinstance(p, LinRegParams):
        save_linreg(file_path, p)
    else:
        save_params(file_path, p)
