"""Minibatch training loops for the two-pathway model and the ridge baseline."""

import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from app.config import RIDGE_LAMBDA, RIDGE_LAMBDA_GRID
from app.errors import DataError, NumericalError
from app.imaginet.baseline import design_matrix, fit_ridge, select_lambda
from app.imaginet.network import backward, forward, loss
from app.imaginet.numcore import Rng
from app.imaginet.optim import Tensors, adam_step, clip_grad_norm
from app.imaginet.utils import log_elapsed_time
from app.models.activation_config import DEFAULT_ACTIVATION, ActivationConfig
from app.models.adam_state import AdamState
from app.models.caption_record import CaptionRecord
from app.models.epoch_loss import EpochLoss
from app.models.imaginet_params import ImaginetParams
from app.models.linreg_params import LinRegParams
from app.models.loss_config import LossConfig
from app.models.run_config import RunConfig
from app.models.vocabulary import Vocabulary

EpochCallback = Callable[[int, ImaginetParams], None]


def batch_gradients(
    params: ImaginetParams,
    batch: Sequence[CaptionRecord],
    cfg: LossConfig,
    act: ActivationConfig = DEFAULT_ACTIVATION,
) -> Tuple[Tensors, List]:
    """Mean gradient over ``batch`` plus the per-example loss terms.

    Examples are accumulated in batch order so the sum is reproducible.
    """
    totals = {name: np.zeros_like(value) for name, value in params.tensors().items()}
    terms = []
    for record in batch:
        trace = forward(params, record.tokens, act)
        example = loss(trace, record.tokens, record.target, cfg)
        if not np.isfinite(example.total):
            raise NumericalError(
                f"non-finite loss {example.total} for caption of image {record.image_id}"
            )
        terms.append(example)
        for name, grad in backward(params, trace, record.tokens, record.target, cfg, act).tensors().items():
            totals[name] += grad
    return {name: grad / len(batch) for name, grad in totals.items()}, terms


@log_elapsed_time
def train(
    params: ImaginetParams,
    records: Sequence[CaptionRecord],
    cfg: RunConfig,
    rng: Rng,
    on_epoch: Optional[EpochCallback] = None,
    act: ActivationConfig = DEFAULT_ACTIVATION,
) -> Tuple[ImaginetParams, List[EpochLoss]]:
    """Optimise ``params`` with Adam for ``cfg.epochs`` passes over ``records``.

    Record order is reshuffled from ``rng`` every epoch. ``on_epoch`` receives
    the 1-based epoch number and the parameters after that epoch.
    """
    if not records:
        raise DataError("no training records")
    loss_cfg = cfg.loss_config()
    state = AdamState(lr=cfg.lr)
    tensors = params.tensors()
    history: List[EpochLoss] = []
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(len(records))
        sums = np.zeros(3)
        n_clamped = 0
        for start in range(0, len(order), cfg.batch_size):
            batch = [records[i] for i in order[start : start + cfg.batch_size]]
            current = ImaginetParams.from_tensors(tensors)
            grads, terms = batch_gradients(current, batch, loss_cfg, act)
            grads, norm = clip_grad_norm(grads, cfg.max_grad_norm)
            logging.debug("epoch %d batch %d gradient norm %.6f", epoch, start // cfg.batch_size, norm)
            tensors, state = adam_step(state, tensors, grads)
            for term in terms:
                sums += (term.lt, term.lv, term.total)
                n_clamped += term.n_clamped
        lt, lv, total = sums / len(records)
        if not np.isfinite(total):
            raise NumericalError(f"epoch {epoch} mean loss is not finite")
        row = EpochLoss(epoch=epoch, lt=float(lt), lv=float(lv), total=float(total), n_clamped=n_clamped)
        history.append(row)
        logging.info(
            "epoch %d: total=%.6f lt=%.6f lv=%.6f clamped=%d", epoch, row.total, row.lt, row.lv, n_clamped
        )
        if n_clamped:
            logging.warning("epoch %d clamped %d target probabilities", epoch, n_clamped)
        if on_epoch is not None:
            on_epoch(epoch, ImaginetParams.from_tensors(tensors))
    return ImaginetParams.from_tensors(tensors), history


@log_elapsed_time
def train_linreg(
    records: Sequence[CaptionRecord],
    vocab: Vocabulary,
    cfg: RunConfig,
    validation: Optional[Sequence[CaptionRecord]] = None,
) -> LinRegParams:
    """Fit the bag-of-words baseline on ``records``.

    The penalty is ``cfg.ridge_lambda`` when set; otherwise it is chosen from
    the configured grid on ``validation`` if given, else the default penalty.
    """
    if not records:
        raise DataError("no training records")

    def _xy(rows: Sequence[CaptionRecord]):
        X = design_matrix((r.tokens for r in rows), len(vocab), vocab.end_index)  # pylint: disable=invalid-name
        return X, np.vstack([r.target for r in rows])

    X, Y = _xy(records)  # pylint: disable=invalid-name
    lam = cfg.ridge_lambda
    if lam is None and validation:
        lam = select_lambda((X, Y), _xy(validation), RIDGE_LAMBDA_GRID)
    if lam is None:
        lam = RIDGE_LAMBDA
    logging.info("Fitting ridge baseline on %d captions with lambda=%g", len(records), lam)
    return fit_ridge(X, Y, lam)
