"""Recurrent cell, embedding lookup and output heads with exact backward passes.

The GRU follows

    z = sig(Wz x + Uz h_prev)
    r = sig(Wr x + Ur h_prev)
    h_cand = relu_clip(W x + U (r * h_prev))
    h = (1 - z) * h_prev + z * h_cand

where ``sig`` is a logistic with slope ``gate_slope`` and ``relu_clip`` is a
rectifier clipped to [clip_lo, clip_hi]. No layer has a bias term. At the clip
kinks the subgradient is taken as 0.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit, softmax

from app.errors import InputError, ShapeError, VocabularyError
from app.imaginet.numcore import Matrix, Vector
from app.models.activation_config import DEFAULT_ACTIVATION, ActivationConfig
from app.models.gru_params import GruParams
from app.models.gru_step_trace import GruStepTrace


def steep_sigmoid(z, cfg: ActivationConfig = DEFAULT_ACTIVATION):
    """Logistic with slope ``cfg.gate_slope``; works on scalars and arrays."""
    return expit(cfg.gate_slope * np.asarray(z, dtype=np.float64))


def clipped_relu(z, cfg: ActivationConfig = DEFAULT_ACTIVATION):
    """Rectifier 0.5 (z + |z|) clipped to [clip_lo, clip_hi]."""
    z = np.asarray(z, dtype=np.float64)
    return np.clip(0.5 * (z + np.abs(z)), cfg.clip_lo, cfg.clip_hi)


def _sigmoid_slope(s: Vector, cfg: ActivationConfig) -> Vector:
    return cfg.gate_slope * s * (1.0 - s)


def clipped_relu_slope(out: Vector, cfg: ActivationConfig = DEFAULT_ACTIVATION) -> Vector:
    """Derivative of ``clipped_relu`` expressed through its output.

    The output lies strictly inside the linear region exactly when the
    pre-activation does, so the output alone determines the subgradient.
    """
    lower = max(cfg.clip_lo, 0.0)
    return ((out > lower) & (out < cfg.clip_hi)).astype(np.float64)


def gru_step(
    p: GruParams, h_prev: Vector, x: Vector, cfg: ActivationConfig = DEFAULT_ACTIVATION
) -> GruStepTrace:
    """Advance one timestep and return the full activation trace."""
    if x.shape != (p.input_dim,):
        raise ShapeError("GRU input shape mismatch", x.shape, (p.input_dim,))
    if h_prev.shape != (p.hidden_dim,):
        raise ShapeError("GRU state shape mismatch", h_prev.shape, (p.hidden_dim,))
    z = steep_sigmoid(p.Wz @ x + p.Uz @ h_prev, cfg)
    r = steep_sigmoid(p.Wr @ x + p.Ur @ h_prev, cfg)
    h_cand = clipped_relu(p.W @ x + p.U @ (r * h_prev), cfg)
    h = (1.0 - z) * h_prev + z * h_cand
    return GruStepTrace(z=z, r=r, h_cand=h_cand, h=h, x=x, h_prev=h_prev)


def run_gru(
    p: GruParams, xs: Sequence[Vector], cfg: ActivationConfig = DEFAULT_ACTIVATION
) -> List[GruStepTrace]:
    """Unroll the GRU over ``xs`` from a zero initial state."""
    traces = []
    h = np.zeros(p.hidden_dim)
    for x in xs:
        trace = gru_step(p, h, x, cfg)
        traces.append(trace)
        h = trace.h
    return traces


def gru_backward(
    traces: Sequence[GruStepTrace],
    p: GruParams,
    grad_wrt_h_outputs: Sequence[Optional[Vector]],
    cfg: ActivationConfig = DEFAULT_ACTIVATION,
) -> Tuple[GruParams, List[Vector]]:
    """Backpropagate through time over one unrolled sentence.

    ``grad_wrt_h_outputs[t]`` is the gradient of the loss with respect to the
    hidden state emitted at step t (None means zero). Returns the parameter
    gradients accumulated over all steps and the gradient for every input x_t.
    """
    if len(traces) != len(grad_wrt_h_outputs):
        raise InputError(
            f"trace length {len(traces)} does not match "
            f"gradient length {len(grad_wrt_h_outputs)}"
        )
    grads = p.zeros_like()
    input_grads: List[Vector] = [np.zeros(p.input_dim)] * len(traces)
    dh_next = np.zeros(p.hidden_dim)
    for t in reversed(range(len(traces))):
        tr = traces[t]
        upstream = grad_wrt_h_outputs[t]
        dh = dh_next if upstream is None else dh_next + upstream

        da_z = dh * (tr.h_cand - tr.h_prev) * _sigmoid_slope(tr.z, cfg)
        da_h = dh * tr.z * clipped_relu_slope(tr.h_cand, cfg)
        reset_state = tr.r * tr.h_prev
        d_reset_state = p.U.T @ da_h
        da_r = d_reset_state * tr.h_prev * _sigmoid_slope(tr.r, cfg)

        grads.Wz += np.outer(da_z, tr.x)
        grads.Uz += np.outer(da_z, tr.h_prev)
        grads.Wr += np.outer(da_r, tr.x)
        grads.Ur += np.outer(da_r, tr.h_prev)
        grads.W += np.outer(da_h, tr.x)
        grads.U += np.outer(da_h, reset_state)

        input_grads[t] = p.Wz.T @ da_z + p.Wr.T @ da_r + p.W.T @ da_h
        dh_next = (
            dh * (1.0 - tr.z)
            + d_reset_state * tr.r
            + p.Uz.T @ da_z
            + p.Ur.T @ da_r
        )
    return grads, input_grads


def embed(We: Matrix, token: int) -> Vector:  # pylint: disable=invalid-name
    """Column ``token`` of the embedding matrix."""
    if not 0 <= int(token) < We.shape[1]:
        raise VocabularyError(f"token {token} outside vocabulary of size {We.shape[1]}")
    return We[:, int(token)].copy()


def visual_head(
    V: Matrix, h: Vector, cfg: ActivationConfig = DEFAULT_ACTIVATION  # pylint: disable=invalid-name
) -> Vector:
    """Predicted image vector: clipped rectifier of V h."""
    if V.shape[1] != h.shape[0]:
        raise ShapeError("visual head shape mismatch", V.shape, h.shape)
    return clipped_relu(V @ h, cfg)


def visual_head_backward(
    V: Matrix,  # pylint: disable=invalid-name
    h: Vector,
    predicted: Vector,
    d_predicted: Vector,
    cfg: ActivationConfig = DEFAULT_ACTIVATION,
) -> Tuple[Matrix, Vector]:
    """Gradients of the visual head with respect to V and h."""
    d_pre = d_predicted * clipped_relu_slope(predicted, cfg)
    return np.outer(d_pre, h), V.T @ d_pre


def textual_head(L: Matrix, h: Vector) -> Vector:  # pylint: disable=invalid-name
    """Next-word distribution: softmax of L h (max-shifted for stability)."""
    if L.shape[1] != h.shape[0]:
        raise ShapeError("textual head shape mismatch", L.shape, h.shape)
    return softmax(L @ h)


def textual_head_backward(
    L: Matrix, h: Vector, probs: Vector, target: int, weight: float  # pylint: disable=invalid-name
) -> Tuple[Matrix, Vector]:
    """Gradients of ``-weight * log probs[target]`` with respect to L and h."""
    d_logits = probs.copy()
    d_logits[target] -= 1.0
    d_logits *= weight
    return np.outer(d_logits, h), L.T @ d_logits
