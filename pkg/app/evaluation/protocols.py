"""Evaluation protocols: word similarity, image retrieval from sentences and
single words, paraphrase retrieval, perplexity, caption neighbours and
per-pair similarity listings.

Scrambled queries are drawn serially from one generator seeded with the
evaluation seed, one permutation per caption in record order. Queries are
then scored independently, on a thread pool when ``workers`` > 1, and
reduced in query order.
"""

import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from scipy.stats import rankdata

from app.config import MIN_COVERED_PAIRS, PARAPHRASE_K, PROB_FLOOR, RETRIEVAL_K, GROUP_SIZE
from app.data.scramble import scramble
from app.errors import (
    ConfigError,
    DataError,
    InsufficientCoverageError,
    UndefinedSimilarityError,
)
from app.evaluation.metrics import hit_at_k, rank_candidates, recall_at_k, spearman_rho
from app.evaluation.predictors import ImaginetPredictor, Predictor
from app.imaginet.network import forward
from app.imaginet.numcore import Vector, cosine, make_rng
from app.imaginet.utils import log_elapsed_time
from app.io.tsv_io import BenchmarkPair
from app.models.caption_record import CaptionRecord
from app.models.eval_report import EvalReport
from app.models.vocabulary import Vocabulary

T = TypeVar("T")
R = TypeVar("R")


def map_queries(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """Apply ``fn`` to every item, keeping item order in the result."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def query_tokens(
    records: Sequence[CaptionRecord],
    condition: str,
    seed: Optional[int],
    held_token: Optional[int] = None,
) -> List[Tuple[int, ...]]:
    """Token sequences to query with, scrambled when ``condition`` asks for it."""
    if condition == "original":
        return [r.tokens for r in records]
    if condition != "scrambled":
        raise ConfigError(f"unknown condition '{condition}', expected original or scrambled")
    if seed is None:
        raise ConfigError("the scrambled condition needs an evaluation seed")
    rng = make_rng(seed)
    return [tuple(scramble(r.tokens, rng, held_token)) for r in records]


def _check_k(k: int, n_candidates: int) -> None:
    if k < 1:
        raise ConfigError(f"k must be at least 1, got {k}")
    if k > n_candidates:
        raise ConfigError(f"k={k} exceeds the {n_candidates} available candidates")


def _ranked(query: Vector, candidates: np.ndarray) -> Optional[List[int]]:
    """Ranking for ``query``, or None when the query vector has zero norm."""
    try:
        return rank_candidates(query, candidates)
    except UndefinedSimilarityError:
        return None


def _mean_scores(metric: str, scores: List[Optional[float]]) -> float:
    """Mean of per-query scores; zero-norm queries (None) count as misses."""
    misses = sum(1 for s in scores if s is None)
    if misses:
        logging.warning("%s: %d queries had a zero-norm vector and score 0", metric, misses)
    return float(np.mean([0.0 if s is None else s for s in scores]))


@log_elapsed_time
def word_similarity_eval(
    predictor: Predictor,
    vocab: Vocabulary,
    pairs: Sequence[BenchmarkPair],
    min_pairs: int = MIN_COVERED_PAIRS,
) -> EvalReport:
    """Spearman correlation between word-vector cosines and human scores."""
    model_scores, human_scores = [], []
    skipped = 0
    for word1, word2, score in pairs:
        if word1 not in vocab or word2 not in vocab:
            skipped += 1
            continue
        try:
            similarity = cosine(
                predictor.word_vector(vocab.lookup(word1)),
                predictor.word_vector(vocab.lookup(word2)),
            )
        except UndefinedSimilarityError:
            skipped += 1
            continue
        model_scores.append(similarity)
        human_scores.append(score)
    if skipped:
        logging.warning("Skipped %d of %d benchmark pairs not covered by the model", skipped, len(pairs))
    if len(model_scores) < max(min_pairs, 3):
        raise InsufficientCoverageError(
            f"only {len(model_scores)} benchmark pairs covered, need at least {max(min_pairs, 3)}"
        )
    return EvalReport(
        metric="word_similarity_rho",
        condition="n/a",
        value=spearman_rho(model_scores, human_scores),
        n_queries=len(model_scores),
        n_candidates=len(pairs),
        n_skipped=skipped,
    )


def image_pool(records: Sequence[CaptionRecord]) -> Tuple[List[str], np.ndarray]:
    """Unique image ids in first-seen order and their stacked vectors."""
    pool: Dict[str, Vector] = OrderedDict()
    for record in records:
        pool.setdefault(record.image_id, record.target)
    return list(pool), np.vstack(list(pool.values()))


@log_elapsed_time
def image_retrieval_eval(
    predictor: Predictor,
    records: Sequence[CaptionRecord],
    k: int = RETRIEVAL_K,
    condition: str = "original",
    seed: Optional[int] = None,
    workers: int = 1,
    held_token: Optional[int] = None,
) -> EvalReport:
    """Accuracy@k of finding each caption's own image from its predicted vector."""
    if not records:
        raise DataError("no evaluation records")
    image_ids, candidates = image_pool(records)
    _check_k(k, len(image_ids))
    position = {image_id: i for i, image_id in enumerate(image_ids)}
    queries = query_tokens(records, condition, seed, held_token)

    def score(i: int) -> Optional[float]:
        ranking = _ranked(predictor.predict_image(queries[i]), candidates)
        if ranking is None:
            return None
        return hit_at_k(ranking, {position[records[i].image_id]}, k)

    metric = f"image_retrieval_acc@{k}"
    scores = map_queries(score, range(len(records)), workers)
    return EvalReport(
        metric=metric,
        condition=condition,
        value=_mean_scores(metric, scores),
        n_queries=len(records),
        n_candidates=len(image_ids),
        seed=seed,
    )


@log_elapsed_time
def single_word_retrieval_eval(
    predictor: Predictor,
    vocab: Vocabulary,
    labels: Dict[str, str],
    features: Dict[str, Vector],
    k: int = RETRIEVAL_K,
    workers: int = 1,
) -> EvalReport:
    """Accuracy@k of retrieving an image labelled with a word from that word alone."""
    image_ids = [image_id for image_id in features if image_id in labels]
    if not image_ids:
        raise DataError("no labelled image vectors")
    _check_k(k, len(image_ids))
    candidates = np.vstack([features[image_id] for image_id in image_ids])
    image_labels = [labels[image_id] for image_id in image_ids]
    words = sorted(set(image_labels))
    covered = [word for word in words if word in vocab]
    skipped = len(words) - len(covered)
    if skipped:
        logging.warning("Skipped %d labels outside the vocabulary", skipped)
    if not covered:
        raise InsufficientCoverageError("no image label is in the vocabulary")

    def score(word: str) -> Optional[float]:
        ranking = _ranked(predictor.project_word(vocab.lookup(word)), candidates)
        if ranking is None:
            return None
        bearing = {i for i, label in enumerate(image_labels) if label == word}
        return hit_at_k(ranking, bearing, k)

    metric = f"single_word_retrieval_acc@{k}"
    scores = map_queries(score, covered, workers)
    return EvalReport(
        metric=metric,
        condition="n/a",
        value=_mean_scores(metric, scores),
        n_queries=len(covered),
        n_candidates=len(image_ids),
        n_skipped=skipped,
    )


def paraphrase_groups(
    records: Sequence[CaptionRecord], group_size: int
) -> List[CaptionRecord]:
    """Records of images with exactly ``group_size`` captions, in record order."""
    counts: Dict[str, int] = {}
    for record in records:
        counts[record.image_id] = counts.get(record.image_id, 0) + 1
    incomplete = sorted(image_id for image_id, n in counts.items() if n != group_size)
    if incomplete:
        logging.warning(
            "Dropped %d images whose caption count is not %d", len(incomplete), group_size
        )
    kept = [r for r in records if counts[r.image_id] == group_size]
    if not kept:
        raise DataError(f"no image has exactly {group_size} captions")
    return kept


@log_elapsed_time
def paraphrase_retrieval_eval(
    predictor: Predictor,
    records: Sequence[CaptionRecord],
    group_size: int = GROUP_SIZE,
    k: int = PARAPHRASE_K,
    condition: str = "original",
    seed: Optional[int] = None,
    workers: int = 1,
    held_token: Optional[int] = None,
) -> EvalReport:
    """Recall@k of a caption's paraphrases among all other original captions.

    The query's own original caption is never a candidate, so every query
    has ``group_size - 1`` relevant captions in both conditions.
    """
    if group_size < 2:
        raise ConfigError(f"group_size must be at least 2, got {group_size}")
    grouped = paraphrase_groups(records, group_size)
    _check_k(k, len(grouped) - 1)
    candidates = np.vstack(map_queries(lambda r: predictor.encode(r.tokens), grouped, workers))
    queries = query_tokens(grouped, condition, seed, held_token)
    members: Dict[str, List[int]] = {}
    for i, record in enumerate(grouped):
        members.setdefault(record.image_id, []).append(i)

    def score(i: int) -> Optional[float]:
        ranking = _ranked(predictor.encode(queries[i]), candidates)
        if ranking is None:
            return None
        ranking = [j for j in ranking if j != i]
        relevant = {j for j in members[grouped[i].image_id] if j != i}
        return recall_at_k(ranking, relevant, k)

    metric = f"paraphrase_recall@{k}"
    scores = map_queries(score, range(len(grouped)), workers)
    return EvalReport(
        metric=metric,
        condition=condition,
        value=_mean_scores(metric, scores),
        n_queries=len(grouped),
        n_candidates=len(grouped) - 1,
        seed=seed,
        n_skipped=len(records) - len(grouped),
    )


@log_elapsed_time
def perplexity_eval(
    predictor: Predictor,
    records: Sequence[CaptionRecord],
    condition: str = "original",
    seed: Optional[int] = None,
    held_token: Optional[int] = None,
) -> EvalReport:
    """exp of the mean next-word negative log-likelihood of the textual pathway."""
    if not isinstance(predictor, ImaginetPredictor):
        raise ConfigError("perplexity needs a model with a textual pathway")
    if not records:
        raise DataError("no evaluation records")
    total_nll = 0.0
    n_targets = 0
    for tokens in query_tokens(records, condition, seed, held_token):
        trace = forward(predictor.params, tokens, predictor.act)
        for t in range(len(tokens) - 1):
            prob = max(float(trace.next_word_dists[t][tokens[t + 1]]), PROB_FLOOR)
            total_nll -= np.log(prob)
            n_targets += 1
    if n_targets == 0:
        raise DataError("captions have no next-word targets")
    return EvalReport(
        metric="perplexity",
        condition=condition,
        value=float(np.exp(total_nll / n_targets)),
        n_queries=n_targets,
        n_candidates=predictor.vocab_size,
        seed=seed,
    )


def nearest_captions(
    predictor: Predictor,
    records: Sequence[CaptionRecord],
    query: Sequence[int],
    n: int,
    exclude: Optional[int] = None,
) -> List[Tuple[int, float]]:
    """The ``n`` records whose sentence encodings are closest to ``query``.

    Returns (record index, cosine) pairs; ``exclude`` removes one record,
    typically the query's own caption.
    """
    candidates = np.vstack([predictor.encode(r.tokens) for r in records])
    query_vector = predictor.encode(query)
    ranking = _ranked(query_vector, candidates)
    if ranking is None:
        return []
    nearest = [i for i in ranking if i != exclude][:n]
    return [(i, cosine(query_vector, candidates[i])) for i in nearest]


def pair_similarities(
    predictor: Predictor,
    vocab: Vocabulary,
    pairs: Sequence[BenchmarkPair],
    reference: Optional[Tuple[Predictor, Vocabulary]] = None,
) -> List[Tuple[str, str, float, float, Optional[float], Optional[float]]]:
    """Per-pair word-vector cosines, for inspecting where two models disagree.

    Returns (word1, word2, human score, cosine, reference cosine, gain) rows
    for the pairs both models cover. ``gain`` is how much closer the model's
    normalized rank of the pair lies to the human rank than the reference's
    does; rows are sorted by descending gain, or by human score without a
    reference.
    """
    models = [(predictor, vocab)] + ([reference] if reference is not None else [])
    rows = []
    for word1, word2, score in pairs:
        cosines = []
        for model, words in models:
            if word1 not in words or word2 not in words:
                break
            try:
                cosines.append(
                    cosine(model.word_vector(words.lookup(word1)), model.word_vector(words.lookup(word2)))
                )
            except UndefinedSimilarityError:
                break
        if len(cosines) == len(models):
            rows.append((word1, word2, score, cosines))
    if len(rows) < 2:
        raise InsufficientCoverageError(f"only {len(rows)} benchmark pairs covered, need at least 2")
    if reference is None:
        rows.sort(key=lambda row: -row[2])
        return [(w1, w2, score, c[0], None, None) for w1, w2, score, c in rows]

    def normalized_ranks(values):
        return (rankdata(values, method="average") - 1.0) / (len(values) - 1)

    human = normalized_ranks([row[2] for row in rows])
    model = normalized_ranks([row[3][0] for row in rows])
    other = normalized_ranks([row[3][1] for row in rows])
    gains = np.abs(other - human) - np.abs(model - human)
    order = sorted(range(len(rows)), key=lambda i: (-gains[i], i))
    return [
        (rows[i][0], rows[i][1], rows[i][2], rows[i][3][0], rows[i][3][1], float(gains[i]))
        for i in order
    ]
