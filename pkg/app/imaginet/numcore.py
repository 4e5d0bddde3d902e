"""Dense linear algebra and seeded randomness shared by every other module.

Matrices and vectors are numpy float64 arrays in C (row-major) order.
Randomness comes from numpy's PCG64 bit generator, which yields the same
stream for a given seed on every platform. A generator is owned by one
caller; independent streams are derived with ``split_rng``.
"""

from typing import Iterable, Union

import numpy as np
import numpy.typing as npt

from app.errors import ConfigError, NumericalError, ShapeError, UndefinedSimilarityError

Matrix = npt.NDArray[np.float64]
Vector = npt.NDArray[np.float64]
Rng = np.random.Generator

ArrayLike = Union[npt.ArrayLike, Iterable[float]]


def make_rng(seed: int) -> Rng:
    """Create a PCG64-backed generator from a 64-bit unsigned seed."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def split_rng(rng: Rng) -> Rng:
    """Derive an independent generator by reseeding from ``rng``."""
    return make_rng(int(rng.integers(0, 2**63 - 1)))


def as_matrix(data: ArrayLike) -> Matrix:
    """Coerce ``data`` to a 2-D float64 row-major array."""
    array = np.ascontiguousarray(data, dtype=np.float64)
    if array.ndim != 2:
        raise ShapeError("expected a matrix", array.shape)
    return array


def as_vector(data: ArrayLike) -> Vector:
    """Coerce ``data`` to a 1-D float64 array."""
    array = np.ascontiguousarray(data, dtype=np.float64)
    if array.ndim != 1:
        raise ShapeError("expected a vector", array.shape)
    return array


def check_finite(name: str, array: npt.ArrayLike) -> None:
    """Raise NumericalError when ``array`` holds NaN or Inf."""
    if not np.all(np.isfinite(array)):
        raise NumericalError(f"{name} contains non-finite values")


def matmul(a: ArrayLike, b: ArrayLike) -> Matrix:
    """Standard matrix product with an explicit shape check."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError("matmul dimension mismatch", a.shape, b.shape)
    product = a @ b
    check_finite("matmul result", product)
    return product


def cosine(u: ArrayLike, v: ArrayLike) -> float:
    """Cosine similarity of two vectors, clamped to [-1, 1].

    Raises UndefinedSimilarityError if either vector has zero norm; callers
    are expected to filter such vectors beforehand.
    """
    u, v = as_vector(u), as_vector(v)
    if u.shape != v.shape:
        raise ShapeError("cosine dimension mismatch", u.shape, v.shape)
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u == 0.0 or norm_v == 0.0:
        raise UndefinedSimilarityError("cosine similarity of a zero-norm vector")
    value = float(np.dot(u, v)) / (norm_u * norm_v)
    return min(1.0, max(-1.0, value))


def init_matrix(rows: int, cols: int, scale: float, rng: Rng) -> Matrix:
    """Matrix with entries drawn i.i.d. uniform in [-scale, scale]."""
    if scale <= 0:
        raise ConfigError(f"initialisation scale must be positive, got {scale}")
    return np.ascontiguousarray(rng.uniform(-scale, scale, size=(rows, cols)))
