"""Rank correlation, cosine ranking and top-k scoring."""

import logging
from typing import Collection, List, Sequence

import numpy as np
from scipy.stats import rankdata

from app.errors import InputError, ShapeError, UndefinedCorrelationError, UndefinedSimilarityError
from app.imaginet.numcore import Matrix, Vector, as_matrix, as_vector


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of tie-averaged ranks."""
    xs, ys = as_vector(xs), as_vector(ys)
    if xs.shape != ys.shape:
        raise ShapeError("series lengths differ", xs.shape, ys.shape)
    if xs.size < 3:
        raise InputError(f"need at least 3 paired values, got {xs.size}")
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        raise UndefinedCorrelationError("rank correlation of a constant series")
    rx = rankdata(xs, method="average")
    ry = rankdata(ys, method="average")
    rx -= rx.mean()
    ry -= ry.mean()
    rho = float(np.dot(rx, ry) / np.sqrt(np.dot(rx, rx) * np.dot(ry, ry)))
    return min(1.0, max(-1.0, rho))


def cosine_scores(query: Vector, candidates: Matrix) -> Vector:
    """Cosine of ``query`` with every candidate row; NaN marks zero-norm rows."""
    query, candidates = as_vector(query), as_matrix(candidates)
    if candidates.shape[1] != query.shape[0]:
        raise ShapeError("candidate dimension", candidates.shape, query.shape)
    query_norm = float(np.linalg.norm(query))
    if query_norm == 0.0:
        raise UndefinedSimilarityError("ranking query has zero norm")
    norms = np.linalg.norm(candidates, axis=1)
    scores = np.full(candidates.shape[0], np.nan)
    valid = norms > 0.0
    scores[valid] = (candidates[valid] * query).sum(axis=1) / (norms[valid] * query_norm)
    return np.clip(scores, -1.0, 1.0)


def rank_candidates(query: Vector, candidates: Matrix) -> List[int]:
    """Candidate indices by descending cosine, ties by ascending index.

    Zero-norm candidates are left out of the ranking.
    """
    scores = cosine_scores(query, candidates)
    valid = np.flatnonzero(~np.isnan(scores))
    if valid.size < scores.size:
        logging.warning("Excluded %d zero-norm candidates from ranking", scores.size - valid.size)
    order = np.lexsort((valid, -scores[valid]))
    return [int(i) for i in valid[order]]


def hit_at_k(ranking: Sequence[int], relevant: Collection[int], k: int) -> float:
    """1.0 when any relevant index appears in the first ``k`` positions."""
    return float(any(index in relevant for index in ranking[:k]))


def recall_at_k(ranking: Sequence[int], relevant: Collection[int], k: int) -> float:
    """Share of ``relevant`` found in the first ``k`` positions."""
    if not relevant:
        raise InputError("recall is undefined without relevant items")
    found = sum(1 for index in ranking[:k] if index in relevant)
    return found / len(relevant)
