"""Subcommand handlers: synthetic data, training, gradient checking and evaluation.

Each handler takes a resolved RunConfig, reads and writes the interchange
files it names, prints a short tab-separated summary to stdout and raises an
ImaginetError subclass on failure.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from app.config import (
    GRADCHECK_MAX_DIM,
    GROUP_SIZE,
    INIT_SCALE,
    KINK_MARGIN,
    NEIGHBORS,
    NEIGHBOR_QUERIES,
    PARAPHRASE_K,
    RETRIEVAL_K,
)
from app.data.records import build_records
from app.data.scramble import scramble
from app.data.synthetic import gen_synthetic
from app.data.tokenization import tokenize
from app.data.vocabulary import build_vocab, decode
from app.errors import ArtifactMismatchError, ConfigError, DataError, GradCheckFailure, NumericalError
from app.evaluation.predictors import Predictor, make_predictor
from app.evaluation.protocols import (
    image_retrieval_eval,
    nearest_captions,
    pair_similarities,
    paraphrase_retrieval_eval,
    perplexity_eval,
    single_word_retrieval_eval,
    word_similarity_eval,
)
from app.imaginet.network import backward, forward, init_params, kink_margin, loss
from app.imaginet.numcore import Rng, Vector, make_rng, split_rng
from app.imaginet.optim import grad_check
from app.imaginet.trainer import train, train_linreg
from app.io.captions_io import load_captions, write_captions
from app.io.checkpoint_io import load_model, save_linreg, save_params
from app.io.features_io import load_features, write_features
from app.io.tsv_io import (
    append_reports,
    load_benchmark,
    load_labels,
    load_vocab,
    save_vocab,
    write_benchmark,
    write_labels,
    write_loss_log,
)
from app.models.caption_record import CaptionRecord
from app.models.eval_report import EvalReport
from app.models.grad_check_report import GradCheckReport
from app.models.grad_check_settings import GradCheckSettings
from app.models.imaginet_params import ImaginetParams
from app.models.linreg_params import LinRegParams
from app.models.loss_config import LossConfig
from app.models.run_config import RunConfig
from app.models.synthetic_corpus import SyntheticCorpus
from app.models.vocabulary import Vocabulary

EVALUATIONS = (
    "retrieval", "word-retrieval", "similarity", "paraphrase", "perplexity", "neighbors", "pairs"
)
MAX_INSTANCE_DRAWS = 100


def epoch_checkpoint_path(path: Path, epoch: int) -> Path:
    """``model.ckpt`` -> ``model.epoch3.ckpt``."""
    return path.with_name(f"{path.stem}.epoch{epoch}{path.suffix}")


def _emit(*columns) -> None:
    print("\t".join(str(c) for c in columns))


def cmd_synth(cfg: RunConfig) -> SyntheticCorpus:
    """Generate a synthetic corpus and write captions, features, labels and benchmark."""
    corpus = gen_synthetic(cfg.synth_config())
    write_captions(cfg.captions, corpus.train_captions)
    write_captions(cfg.val_captions, corpus.validation_captions)
    write_features(cfg.features, corpus.features)
    write_labels(cfg.labels, corpus.labels)
    write_benchmark(cfg.benchmark, corpus.benchmark)
    _emit("scenes", len(corpus.features))
    _emit("train_captions", len(corpus.train_captions))
    _emit("validation_captions", len(corpus.validation_captions))
    _emit("vocabulary", len(corpus.vocabulary))
    _emit("feature_dim", cfg.K)
    _emit("benchmark_pairs", len(corpus.benchmark))
    return corpus


def _load_features_checked(path: Path, K: int) -> Dict[str, Vector]:  # pylint: disable=invalid-name
    features = load_features(path)
    if not features:
        raise DataError(f"{path} holds no feature vectors")
    dim = len(next(iter(features.values())))
    if dim != K:
        raise ArtifactMismatchError(f"features in {path} have dimension {dim} but K={K} is configured")
    return features


def _load_records(
    path: Path, features: Dict[str, Vector], vocab: Vocabulary
) -> List[CaptionRecord]:
    records, _ = build_records(load_captions(path), features, vocab)
    return records


def cmd_train(cfg: RunConfig) -> Union[ImaginetParams, LinRegParams]:
    """Train the configured variant and write checkpoints, vocabulary and loss curve."""
    features = _load_features_checked(cfg.features, cfg.K)
    captions = load_captions(cfg.captions)
    if not captions:
        raise DataError(f"{cfg.captions} holds no captions")
    vocab = build_vocab((tokenize(c.caption) for c in captions), cfg.min_count)
    records, _ = build_records(captions, features, vocab)
    if not records:
        raise DataError("no caption has a matching feature vector")
    save_vocab(cfg.vocab, vocab)
    logging.info("Training %s on %d captions, vocabulary %d", cfg.variant, len(records), len(vocab))

    if cfg.is_linreg:
        validation = _load_records(cfg.val_captions, features, vocab) if cfg.val_captions.exists() else []
        params = train_linreg(records, vocab, cfg, validation)
        save_linreg(cfg.checkpoint, params)
        _emit("checkpoint", cfg.checkpoint)
        return params

    rng = make_rng(cfg.seed)
    params = init_params(len(vocab), cfg.embedding_dim, cfg.hidden_dim, cfg.K, INIT_SCALE, split_rng(rng))

    def on_epoch(epoch: int, current: ImaginetParams) -> None:
        save_params(epoch_checkpoint_path(cfg.checkpoint, epoch), current)

    params, history = train(params, records, cfg, rng, on_epoch)
    save_params(cfg.checkpoint, params)
    write_loss_log(cfg.loss_log, history)
    _emit("epoch", "lt", "lv", "total")
    for row in history:
        _emit(row.epoch, f"{row.lt:.6f}", f"{row.lv:.6f}", f"{row.total:.6f}")
    return params


def _gradcheck_instance(
    cfg: RunConfig, settings: GradCheckSettings, rng: Rng
) -> Tuple[ImaginetParams, List[int], Vector]:
    """Random model, END-terminated sentence and target kept away from clip kinks."""
    for _ in range(MAX_INSTANCE_DRAWS):
        params = init_params(
            settings.vocab_size, cfg.embedding_dim, cfg.hidden_dim, cfg.K, settings.init_scale, rng
        )
        content = rng.integers(1, settings.vocab_size, size=settings.sentence_len - 1)
        sentence = [int(t) for t in content] + [Vocabulary.END_INDEX]
        target = rng.uniform(0.0, 1.0, size=cfg.K)
        if kink_margin(params, sentence) >= KINK_MARGIN:
            return params, sentence, target
    raise NumericalError(f"no instance away from activation kinks in {MAX_INSTANCE_DRAWS} draws")


def cmd_gradcheck(cfg: RunConfig, settings: GradCheckSettings) -> GradCheckReport:
    """Compare analytic gradients with central differences on random small models."""
    for name in ("embedding_dim", "hidden_dim", "K"):
        if getattr(cfg, name) > GRADCHECK_MAX_DIM:
            raise ConfigError(
                f"gradcheck {name}={getattr(cfg, name)} exceeds the limit of {GRADCHECK_MAX_DIM}"
            )
    loss_cfg = LossConfig(alpha=cfg.effective_alpha, K=cfg.K)
    rng = make_rng(cfg.seed)
    report = GradCheckReport(epsilon=settings.epsilon)
    for _ in range(settings.instances):
        params, sentence, target = _gradcheck_instance(cfg, settings, rng)
        trace = forward(params, sentence)
        grads = backward(params, trace, sentence, target, loss_cfg).tensors()
        if settings.corrupt is not None:
            grads[settings.corrupt] = grads[settings.corrupt] * 2.0

        def loss_fn(tensors, sentence=sentence, target=target) -> float:
            candidate = ImaginetParams.from_tensors(tensors)
            return loss(forward(candidate, sentence), sentence, target, loss_cfg).total

        instance_report = grad_check(
            loss_fn,
            params.tensors(),
            settings.epsilon,
            grads,
            settings.coords_per_tensor,
            seed=int(rng.integers(0, 2**31 - 1)),
        )
        report = report.merge(instance_report)

    _emit("tensor", "max_rel_error")
    for name, error in report.per_tensor.items():
        _emit(name, f"{error:.3e}")
    _emit("max", f"{report.max_error:.3e}")
    _emit("coordinates", report.n_coordinates)
    if not report.passed(settings.tolerance):
        raise GradCheckFailure(
            f"max relative error {report.max_error:.3e} is not below {settings.tolerance:g}"
        )
    return report


def check_artifacts(
    params: Union[ImaginetParams, LinRegParams], cfg: RunConfig, vocab: Vocabulary
) -> None:
    """Raise ArtifactMismatchError when checkpoint, vocabulary and config disagree."""
    if params.vocab_size != len(vocab):
        raise ArtifactMismatchError(
            f"checkpoint {cfg.checkpoint} has vocab_size={params.vocab_size} "
            f"but vocabulary {cfg.vocab} has {len(vocab)} words"
        )
    expected = {"K": cfg.K}
    if isinstance(params, ImaginetParams):
        expected.update(embedding_dim=cfg.embedding_dim, hidden_dim=cfg.hidden_dim)
    actual = {
        "K": params.image_dim,
        "embedding_dim": getattr(params, "embedding_dim", None),
        "hidden_dim": getattr(params, "hidden_dim", None),
    }
    for name, value in expected.items():
        if actual[name] != value:
            raise ArtifactMismatchError(
                f"checkpoint {cfg.checkpoint} has {name}={actual[name]} but the configuration has {name}={value}"
            )


def _print_neighbors(predictor: Predictor, records: List[CaptionRecord], vocab: Vocabulary, cfg: RunConfig) -> None:
    rng = make_rng(cfg.eval_seed)
    held = _held_token(cfg, vocab)
    for index in range(min(NEIGHBOR_QUERIES, len(records))):
        original = records[index].tokens
        for condition, query in (("original", original), ("scrambled", scramble(original, rng, held))):
            _emit(condition, " ".join(decode(vocab, query)))
            for neighbor, similarity in nearest_captions(predictor, records, query, NEIGHBORS, exclude=index):
                _emit("", f"{similarity:.4f}", records[neighbor].text)


def _held_token(cfg: RunConfig, vocab: Vocabulary) -> Optional[int]:
    if cfg.hold_period and "." in vocab:
        return vocab.lookup(".")
    return None


def _print_pairs(
    predictor: Predictor,
    vocab: Vocabulary,
    cfg: RunConfig,
    compare_checkpoint: Optional[Path],
    compare_vocab: Optional[Path],
) -> None:
    reference = None
    if compare_checkpoint is not None:
        if compare_vocab is None:
            raise ConfigError("--compare-checkpoint needs --compare-vocab")
        other_params = load_model(compare_checkpoint)
        other_vocab = load_vocab(compare_vocab)
        if other_params.vocab_size != len(other_vocab):
            raise ArtifactMismatchError(
                f"checkpoint {compare_checkpoint} has vocab_size={other_params.vocab_size} "
                f"but vocabulary {compare_vocab} has {len(other_vocab)} words"
            )
        reference = (
            make_predictor(other_params, other_vocab.end_index, cfg.end_in_word_projection),
            other_vocab,
        )
    rows = pair_similarities(predictor, vocab, load_benchmark(cfg.benchmark), reference)
    if reference is None:
        _emit("word1", "word2", "human", "cosine")
    else:
        _emit("word1", "word2", "human", "cosine", "reference_cosine", "rank_gain")
    for word1, word2, score, similarity, other, gain in rows:
        columns = [word1, word2, f"{score:g}", f"{similarity:.4f}"]
        if reference is not None:
            columns += [f"{other:.4f}", f"{gain:+.4f}"]
        _emit(*columns)


def cmd_eval(
    cfg: RunConfig,
    which: str,
    condition: str = "original",
    compare_checkpoint: Optional[Union[str, Path]] = None,
    compare_vocab: Optional[Union[str, Path]] = None,
) -> List[EvalReport]:
    """Run one evaluation protocol and append its report row.

    ``neighbors`` and ``pairs`` only print listings; ``pairs`` compares
    against a second model when ``compare_checkpoint`` is given.
    """
    if which not in EVALUATIONS:
        raise ConfigError(f"unknown evaluation '{which}', expected one of {EVALUATIONS}")
    params = load_model(cfg.checkpoint)
    vocab = load_vocab(cfg.vocab)
    check_artifacts(params, cfg, vocab)
    predictor = make_predictor(params, vocab.end_index, cfg.end_in_word_projection)
    held = _held_token(cfg, vocab)

    if which == "pairs":
        _print_pairs(
            predictor,
            vocab,
            cfg,
            Path(compare_checkpoint) if compare_checkpoint is not None else None,
            Path(compare_vocab) if compare_vocab is not None else None,
        )
        return []
    if which == "similarity":
        report = word_similarity_eval(predictor, vocab, load_benchmark(cfg.benchmark))
    elif which == "word-retrieval":
        features = _load_features_checked(cfg.features, cfg.K)
        report = single_word_retrieval_eval(
            predictor, vocab, load_labels(cfg.labels), features, RETRIEVAL_K, cfg.workers
        )
    else:
        records = _load_records(cfg.val_captions, _load_features_checked(cfg.features, cfg.K), vocab)
        if not records:
            raise DataError(f"no caption in {cfg.val_captions} has a matching feature vector")
        if which == "neighbors":
            _print_neighbors(predictor, records, vocab, cfg)
            return []
        if which == "retrieval":
            report = image_retrieval_eval(
                predictor, records, RETRIEVAL_K, condition, cfg.eval_seed, cfg.workers, held
            )
        elif which == "paraphrase":
            report = paraphrase_retrieval_eval(
                predictor, records, GROUP_SIZE, PARAPHRASE_K, condition, cfg.eval_seed, cfg.workers, held
            )
        else:
            report = perplexity_eval(predictor, records, condition, cfg.eval_seed, held)

    if report.n_skipped:
        logging.info("%s skipped %d items", report.metric, report.n_skipped)
    append_reports(cfg.report, [report])
    _emit(report.metric, report.condition, f"{report.value:.6f}", report.n_queries, report.n_candidates)
    return [report]
