"""Adam updates over named tensors and a finite-difference gradient checker."""

from typing import Callable, Dict, Optional, Tuple

import numpy as np

from app.config import GRADCHECK_COORDS
from app.errors import ConfigError, OptimizationError, ShapeError
from app.imaginet.numcore import Matrix, make_rng
from app.models.adam_state import AdamState
from app.models.grad_check_report import GradCheckReport

Tensors = Dict[str, Matrix]


def adam_step(
    state: AdamState, params: Tensors, grads: Tensors
) -> Tuple[Tensors, AdamState]:
    """Apply one bias-corrected Adam update.

    Returns new parameter arrays; the inputs are left untouched. ``state`` is
    owned by the caller's training loop and is advanced in place.
    """
    for name, value in params.items():
        if name not in grads:
            raise ShapeError(f"no gradient for tensor '{name}'")
        if grads[name].shape != value.shape:
            raise ShapeError(f"gradient shape for '{name}'", grads[name].shape, value.shape)
        if not np.all(np.isfinite(grads[name])):
            raise OptimizationError(f"non-finite gradient in tensor '{name}'")

    state.step_count += 1
    bias1 = 1.0 - state.beta1**state.step_count
    bias2 = 1.0 - state.beta2**state.step_count
    updated = {}
    for name, value in params.items():
        g = grads[name]
        m = state.m.get(name, np.zeros_like(value)) * state.beta1 + (1.0 - state.beta1) * g
        v = state.v.get(name, np.zeros_like(value)) * state.beta2 + (1.0 - state.beta2) * (g * g)
        state.m[name], state.v[name] = m, v
        step = state.lr * (m / bias1) / (np.sqrt(v / bias2) + state.eps)
        updated[name] = value - step
    return updated, state


def clip_grad_norm(grads: Tensors, max_norm: Optional[float]) -> Tuple[Tensors, float]:
    """Rescale ``grads`` so their global L2 norm is at most ``max_norm``."""
    norm = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))
    if max_norm is None or norm <= max_norm or norm == 0.0:
        return grads, norm
    scale = max_norm / norm
    return {name: g * scale for name, g in grads.items()}, norm


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)


def grad_check(
    loss_fn: Callable[[Tensors], float],
    params: Tensors,
    epsilon: float,
    grads: Tensors,
    coords_per_tensor: int = GRADCHECK_COORDS,
    seed: int = 0,
) -> GradCheckReport:
    """Compare ``grads`` with central differences of ``loss_fn``.

    Up to ``coords_per_tensor`` coordinates of each tensor are sampled
    (all of them for small tensors) from a generator seeded with ``seed``.
    """
    if not 1e-7 <= epsilon <= 1e-3:
        raise ConfigError(f"epsilon must lie in [1e-7, 1e-3], got {epsilon}")
    rng = make_rng(seed)
    report = GradCheckReport(epsilon=epsilon)
    for name, value in params.items():
        size = value.size
        if size <= coords_per_tensor:
            coords = np.arange(size)
        else:
            coords = np.sort(rng.choice(size, coords_per_tensor, replace=False))
        worst = 0.0
        for flat in coords:
            index = np.unravel_index(flat, value.shape)
            numeric = _central_difference(loss_fn, params, name, index, epsilon)
            worst = max(worst, relative_error(float(grads[name][index]), numeric))
        report.per_tensor[name] = worst
        report.n_coordinates += len(coords)
    return report


def _central_difference(loss_fn, params: Tensors, name: str, index, epsilon: float) -> float:
    shifted = dict(params)
    values = []
    for sign in (1.0, -1.0):
        perturbed = params[name].copy()
        perturbed[index] += sign * epsilon
        shifted[name] = perturbed
        values.append(loss_fn(shifted))
    return (values[0] - values[1]) / (2.0 * epsilon)
