"""Bag-of-words ridge regression from word counts to image features.

The prediction A x + b depends only on the multiset of tokens, so it is
identical for a sentence and any permutation of it.
"""

import logging
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from app.errors import ConfigError, RankDeficiencyError, ShapeError, VocabularyError
from app.imaginet.numcore import Matrix, Vector, as_matrix, as_vector
from app.models.linreg_params import LinRegParams


def bow(sentence: Sequence[int], vocab_size: int, end_index: Optional[int] = None) -> Vector:
    """Word-count vector of ``sentence``; the END sentinel is not counted."""
    tokens = np.asarray([int(t) for t in sentence if t != end_index], dtype=np.int64)
    if tokens.size and (tokens.min() < 0 or tokens.max() >= vocab_size):
        raise VocabularyError(f"token outside vocabulary of size {vocab_size}")
    return np.bincount(tokens, minlength=vocab_size).astype(np.float64)


def design_matrix(
    sentences: Iterable[Sequence[int]], vocab_size: int, end_index: Optional[int] = None
) -> Matrix:
    """Stack bag-of-words rows for ``sentences``."""
    rows = [bow(sentence, vocab_size, end_index) for sentence in sentences]
    if not rows:
        return np.zeros((0, vocab_size))
    return np.vstack(rows)


def fit_ridge(X: Matrix, Y: Matrix, lam: float) -> LinRegParams:  # pylint: disable=invalid-name
    """Minimise sum ||A x + b - y||^2 + lam ||A||_F^2 with b unpenalised.

    Solved through the normal equations of the intercept-augmented design,
    with ``lam`` added to every diagonal entry except the intercept's.
    """
    X, Y = as_matrix(X), as_matrix(Y)  # pylint: disable=invalid-name
    if X.shape[0] != Y.shape[0]:
        raise ShapeError("design and target row counts differ", X.shape, Y.shape)
    if lam < 0:
        raise ConfigError(f"ridge penalty must be non-negative, got {lam}")
    n, vocab_size = X.shape
    augmented = np.hstack([X, np.ones((n, 1))])
    gram = augmented.T @ augmented
    penalty = np.full(vocab_size + 1, float(lam))
    penalty[-1] = 0.0
    gram[np.diag_indices_from(gram)] += penalty
    if lam == 0 and np.linalg.matrix_rank(gram) < gram.shape[0]:
        raise RankDeficiencyError(
            "normal equations are singular with lambda=0; use a positive lambda"
        )
    solution = scipy.linalg.solve(gram, augmented.T @ Y, assume_a="sym")
    return LinRegParams(A=np.ascontiguousarray(solution[:-1].T), b=np.array(solution[-1]))


def predict(p: LinRegParams, x: Vector) -> Vector:
    """A x + b, without output clipping."""
    x = as_vector(x)
    if x.shape != (p.vocab_size,):
        raise ShapeError("bag-of-words dimension", x.shape, (p.vocab_size,))
    return p.A @ x + p.b


def ridge_objective(p: LinRegParams, X: Matrix, Y: Matrix, lam: float) -> float:  # pylint: disable=invalid-name
    """Penalised sum of squared errors minimised by ``fit_ridge``."""
    residual = X @ p.A.T + p.b - Y
    return float(np.sum(residual**2) + lam * np.sum(p.A**2))


def select_lambda(
    train: Tuple[Matrix, Matrix],
    validation: Tuple[Matrix, Matrix],
    grid: Sequence[float],
) -> float:
    """Pick the penalty with the lowest held-out mean squared error."""
    best_lambda, best_mse = None, np.inf
    for lam in grid:
        params = fit_ridge(train[0], train[1], lam)
        predictions = validation[0] @ params.A.T + params.b
        mse = float(np.mean((predictions - validation[1]) ** 2))
        logging.info("Ridge lambda=%g validation MSE=%.6f", lam, mse)
        if mse < best_mse:
            best_lambda, best_mse = lam, mse
    return best_lambda
