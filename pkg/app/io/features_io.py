"""Binary image feature files.

Layout: magic ``IMGF``, u32 LE record count N, u32 LE dimension K, then N
records of [u32 LE id byte length, UTF-8 id, K x f32 LE]. Values are stored
as f32 and widened to float64 on load.
"""

import logging as log
import os
import struct
from pathlib import Path
from typing import Dict, Union

import numpy as np

from app.errors import FormatError, ShapeError
from app.imaginet.numcore import Vector

MAGIC = b"IMGF"
HEADER = struct.Struct("<4sII")
ID_LENGTH = struct.Struct("<I")
VALUE_DTYPE = np.dtype("<f4")


def _take(buffer: bytes, offset: int, size: int, path) -> bytes:
    if offset + size > len(buffer):
        raise FormatError(f"{path}: truncated at byte {offset}, expected {size} more bytes")
    return buffer[offset : offset + size]


def load_features(file_path: Union[str, Path]) -> Dict[str, Vector]:
    """Read an IMGF file into an id-to-vector map, preserving file order."""
    with open(file_path, "rb") as f:
        buffer = f.read()
    magic, n_records, dim = HEADER.unpack(_take(buffer, 0, HEADER.size, file_path))
    if magic != MAGIC:
        raise FormatError(f"{file_path}: bad magic {magic!r}, expected {MAGIC!r}")
    offset = HEADER.size
    features: Dict[str, Vector] = {}
    for _ in range(n_records):
        (id_length,) = ID_LENGTH.unpack(_take(buffer, offset, ID_LENGTH.size, file_path))
        offset += ID_LENGTH.size
        try:
            image_id = _take(buffer, offset, id_length, file_path).decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError(f"{file_path}: image id at byte {offset} is not UTF-8") from e
        offset += id_length
        raw = _take(buffer, offset, dim * VALUE_DTYPE.itemsize, file_path)
        offset += dim * VALUE_DTYPE.itemsize
        if image_id in features:
            raise FormatError(f"{file_path}: duplicate image id '{image_id}'")
        features[image_id] = np.frombuffer(raw, dtype=VALUE_DTYPE).astype(np.float64)
    if offset != len(buffer):
        raise FormatError(f"{file_path}: {len(buffer) - offset} trailing bytes after {n_records} records")
    log.info("Loaded %d feature vectors of dimension %d from %s", n_records, dim, file_path)
    return features


def write_features(file_path: Union[str, Path], features: Dict[str, Vector]) -> None:
    """Write ``features`` in insertion order; all vectors must share one dimension."""
    dims = {np.shape(v) for v in features.values()}
    if len(dims) > 1:
        raise ShapeError("feature vectors disagree in dimension", *sorted(dims))
    dim = next(iter(dims))[0] if dims else 0
    os.makedirs(Path(file_path).parent, exist_ok=True)
    with open(file_path, "wb") as f:
        f.write(HEADER.pack(MAGIC, len(features), dim))
        for image_id, vector in features.items():
            encoded = image_id.encode("utf-8")
            f.write(ID_LENGTH.pack(len(encoded)))
            f.write(encoded)
            f.write(np.asarray(vector, dtype=VALUE_DTYPE).tobytes())
