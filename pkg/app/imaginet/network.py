"""Two-pathway model: shared embeddings feeding a visual and a textual GRU.

The visual pathway's final state is projected to an image feature vector;
the textual pathway predicts the next token at every position. Position t
predicts token t+1, so the last position (the END sentinel) has no target.
The textual loss sums the tau - 1 log-likelihood terms and divides by tau.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.config import PROB_FLOOR
from app.errors import InputError, ShapeError, VocabularyError
from app.imaginet.layers import (
    embed,
    gru_backward,
    run_gru,
    textual_head,
    textual_head_backward,
    visual_head,
    visual_head_backward,
)
from app.imaginet.numcore import Rng, Vector, as_vector, init_matrix
from app.models.activation_config import DEFAULT_ACTIVATION, ActivationConfig
from app.models.forward_trace import ForwardTrace
from app.models.gru_params import GruParams
from app.models.imaginet_params import ImaginetParams
from app.models.loss_config import LossConfig
from app.models.loss_terms import LossTerms


def init_params(
    vocab_size: int,
    embedding_dim: int,
    hidden_dim: int,
    K: int,  # pylint: disable=invalid-name
    scale: float,
    rng: Rng,
) -> ImaginetParams:
    """Uniform initialisation; draw order follows the checkpoint tensor order."""
    We = init_matrix(embedding_dim, vocab_size, scale, rng)  # pylint: disable=invalid-name
    gru_visual = GruParams.initialize(embedding_dim, hidden_dim, scale, rng)
    gru_textual = GruParams.initialize(embedding_dim, hidden_dim, scale, rng)
    V = init_matrix(K, hidden_dim, scale, rng)  # pylint: disable=invalid-name
    L = init_matrix(vocab_size, hidden_dim, scale, rng)  # pylint: disable=invalid-name
    return ImaginetParams(We=We, gru_visual=gru_visual, gru_textual=gru_textual, V=V, L=L)


def _validate_sentence(p: ImaginetParams, sentence: Sequence[int]) -> Tuple[int, ...]:
    tokens = tuple(int(t) for t in sentence)
    if not tokens:
        raise InputError("sentence is empty")
    for token in tokens:
        if not 0 <= token < p.vocab_size:
            raise VocabularyError(
                f"token {token} outside vocabulary of size {p.vocab_size}"
            )
    return tokens


def _embed_all(p: ImaginetParams, tokens: Sequence[int]) -> List[Vector]:
    return [embed(p.We, token) for token in tokens]


def forward(
    p: ImaginetParams,
    sentence: Sequence[int],
    cfg: ActivationConfig = DEFAULT_ACTIVATION,
) -> ForwardTrace:
    """Run both pathways over ``sentence`` (END-terminated token ids)."""
    tokens = _validate_sentence(p, sentence)
    xs = _embed_all(p, tokens)
    visual_traces = run_gru(p.gru_visual, xs, cfg)
    textual_traces = run_gru(p.gru_textual, xs, cfg)
    predicted_image = visual_head(p.V, visual_traces[-1].h, cfg)
    next_word_dists = [textual_head(p.L, trace.h) for trace in textual_traces]
    return ForwardTrace(
        tokens=tokens,
        visual_traces=visual_traces,
        textual_traces=textual_traces,
        predicted_image=predicted_image,
        next_word_dists=next_word_dists,
    )


def encode_visual(
    p: ImaginetParams,
    sentence: Sequence[int],
    cfg: ActivationConfig = DEFAULT_ACTIVATION,
) -> Vector:
    """Final visual hidden state (before projection) for ``sentence``."""
    tokens = _validate_sentence(p, sentence)
    return run_gru(p.gru_visual, _embed_all(p, tokens), cfg)[-1].h


def predict_image(
    p: ImaginetParams,
    sentence: Sequence[int],
    cfg: ActivationConfig = DEFAULT_ACTIVATION,
) -> Vector:
    """Predicted image vector, skipping the textual pathway."""
    return visual_head(p.V, encode_visual(p, sentence, cfg), cfg)


def project_word(
    p: ImaginetParams,
    word: int,
    end_index: Optional[int] = None,
    cfg: ActivationConfig = DEFAULT_ACTIVATION,
) -> Vector:
    """Image prediction for the one-word sentence ``[word]``.

    By default no END sentinel is appended; pass ``end_index`` to append it.
    """
    sentence = [word] if end_index is None else [word, end_index]
    return predict_image(p, sentence, cfg)


def loss(
    trace: ForwardTrace,
    sentence: Sequence[int],
    target_image: Vector,
    cfg: LossConfig,
) -> LossTerms:
    """Composite objective for one example."""
    tokens = tuple(int(t) for t in sentence)
    target_image = as_vector(target_image)
    if target_image.shape != (cfg.K,):
        raise ShapeError("target image dimension", target_image.shape, (cfg.K,))
    if trace.tokens != tokens:
        raise InputError("trace was computed for a different sentence")
    tau = len(tokens)
    n_clamped = 0
    log_likelihood = 0.0
    for t in range(tau - 1):
        prob = float(trace.next_word_dists[t][tokens[t + 1]])
        if prob < PROB_FLOOR:
            n_clamped += 1
            prob = PROB_FLOOR
        log_likelihood += np.log(prob)
    if n_clamped:
        logging.debug("Clamped %d target probabilities to %g", n_clamped, PROB_FLOOR)
    lt = -log_likelihood / tau
    lv = float(np.mean((trace.predicted_image - target_image) ** 2))
    total = cfg.alpha * lt + (1.0 - cfg.alpha) * lv
    return LossTerms(total=float(total), lt=float(lt), lv=lv, n_clamped=n_clamped)


def backward(
    p: ImaginetParams,
    trace: ForwardTrace,
    sentence: Sequence[int],
    target_image: Vector,
    cfg: LossConfig,
    act: ActivationConfig = DEFAULT_ACTIVATION,
) -> ImaginetParams:
    """Exact gradient of the composite loss with respect to every parameter.

    A pathway whose loss weight is zero is skipped entirely, so its gradients
    are exactly zero.
    """
    tokens = _validate_sentence(p, sentence)
    if trace.tokens != tokens:
        raise InputError("trace was computed for a different sentence")
    target_image = as_vector(target_image)
    if target_image.shape != (cfg.K,) or cfg.K != p.image_dim:
        raise ShapeError("target image dimension", target_image.shape, (p.image_dim,))

    grads = p.zeros_like()
    tau = len(tokens)
    input_grads: List[List[Vector]] = []

    if cfg.alpha > 0.0:
        weight = cfg.alpha / tau
        dh_textual: List[Optional[Vector]] = [None] * tau
        for t in range(tau - 1):
            h = trace.textual_traces[t].h
            d_softmax, dh_textual[t] = textual_head_backward(
                p.L, h, trace.next_word_dists[t], tokens[t + 1], weight
            )
            grads.L += d_softmax
        grads.gru_textual, dx_textual = gru_backward(
            trace.textual_traces, p.gru_textual, dh_textual, act
        )
        input_grads.append(dx_textual)

    if cfg.alpha < 1.0:
        final_h = trace.visual_traces[-1].h
        d_image = (1.0 - cfg.alpha) * 2.0 / cfg.K * (trace.predicted_image - target_image)
        grads.V, dh_final = visual_head_backward(
            p.V, final_h, trace.predicted_image, d_image, act
        )
        dh_visual: List[Optional[Vector]] = [None] * (tau - 1) + [dh_final]
        grads.gru_visual, dx_visual = gru_backward(
            trace.visual_traces, p.gru_visual, dh_visual, act
        )
        input_grads.append(dx_visual)

    for dxs in input_grads:
        for token, dx in zip(tokens, dxs):
            grads.We[:, token] += dx
    return grads


def kink_margin(
    p: ImaginetParams,
    sentence: Sequence[int],
    act: ActivationConfig = DEFAULT_ACTIVATION,
) -> float:
    """Smallest distance of any clipped pre-activation to a clip kink.

    Finite differences are unreliable within epsilon of a kink, so gradient
    checks resample instances whose margin is too small.
    """
    trace = forward(p, sentence, act)
    kinks = np.array(sorted({0.0, act.clip_lo, act.clip_hi}))
    pre_activations = []
    for gru, traces in ((p.gru_visual, trace.visual_traces), (p.gru_textual, trace.textual_traces)):
        for tr in traces:
            pre_activations.append(gru.W @ tr.x + gru.U @ (tr.r * tr.h_prev))
    pre_activations.append(p.V @ trace.visual_traces[-1].h)
    values = np.concatenate(pre_activations)
    return float(np.min(np.abs(values[:, None] - kinks[None, :])))
