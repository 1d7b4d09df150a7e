"""
RNN-T forward pass: stacked-LSTM encoder, stacked-LSTM prediction network and the
tanh joint network with a log-softmax output over blank + |K| labels.
"""

import threading
import weakref
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from osc_rnnt.core.exceptions import DimensionError, EmptyInputError, LabelRangeError
from osc_rnnt.model.types import BLANK_ID
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.numerics import Matrix, Vector, log_softmax, lstm_cell_step, matvec

LayerState = Tuple[Vector, Vector]
"""(h, c) of one LSTM layer"""


@dataclass(frozen=True, eq=False)
class EncState:
    layers: Tuple[LayerState, ...]


@dataclass(frozen=True, eq=False)
class PredState:
    """Prediction-network state after feeding a label sequence."""

    layers: Tuple[LayerState, ...]

    @property
    def last_h(self) -> Vector:
        return self.layers[-1][0]


def _zero_layers(count: int, hidden: int) -> Tuple[LayerState, ...]:
    zero = np.zeros(hidden)
    zero.setflags(write=False)
    return tuple((zero, zero) for _ in range(count))


def initial_enc_state(w: ModelWeights) -> EncState:
    return EncState(_zero_layers(w.config.enc_layers, w.config.enc_hidden))


def zero_pred_state(w: ModelWeights) -> PredState:
    return PredState(_zero_layers(w.config.pred_layers, w.config.pred_hidden))


def encoder_step(w: ModelWeights, x_t: npt.ArrayLike, state: EncState | None = None) -> Tuple[Vector, EncState]:
    """Run one frame through the stacked encoder; returns the top-layer output and the new state."""
    x = np.asarray(x_t, dtype=np.float64)
    if x.shape != (w.config.input_dim,):
        raise DimensionError(
            "Feature frame has the wrong length", f"got {x.shape}, want ({w.config.input_dim},)"
        )
    state = state or initial_enc_state(w)
    new_layers = []
    inp = x
    for layer, (h_prev, c_prev) in zip(w.enc_lstm, state.layers):
        h, c = lstm_cell_step(layer, inp, h_prev, c_prev)
        new_layers.append((h, c))
        inp = h
    return inp, EncState(tuple(new_layers))


def encode(w: ModelWeights, features: npt.ArrayLike) -> Matrix:
    """Encoder outputs for a whole utterance, shape (T, D)."""
    feats = np.asarray(features, dtype=np.float64)
    if feats.ndim != 2 or feats.shape[1] != w.config.input_dim:
        raise DimensionError(
            "Features must be a T x F matrix", f"got {feats.shape}, F={w.config.input_dim}"
        )
    if feats.shape[0] == 0:
        raise EmptyInputError("Utterance has no frames")
    out = np.empty((feats.shape[0], w.config.enc_hidden))
    state = initial_enc_state(w)
    for t, frame in enumerate(feats):
        out[t], state = encoder_step(w, frame, state)
    return out


def _check_label(w: ModelWeights, label: int) -> None:
    if not 0 <= label <= w.config.num_labels:
        raise LabelRangeError(f"Label {label} outside [0, {w.config.num_labels}]")


def predictor_step(w: ModelWeights, label: int, state: PredState) -> PredState:
    """Feed one label (blank only as the start symbol) through the prediction network."""
    _check_label(w, label)
    inp = w.embedding[label]
    new_layers = []
    for layer, (h_prev, c_prev) in zip(w.pred_lstm, state.layers):
        h, c = lstm_cell_step(layer, inp, h_prev, c_prev)
        new_layers.append((h, c))
        inp = h
    return PredState(tuple(new_layers))


def predictor_step_batched(
    w: ModelWeights, labels: Sequence[int], states: Sequence[PredState]
) -> List[PredState]:
    """One batched predictor call advancing states[i] by labels[i]."""
    if len(labels) != len(states):
        raise DimensionError("labels and states differ in length", f"{len(labels)} vs {len(states)}")
    if not states:
        return []
    label_arr = np.asarray(labels, dtype=np.int64)
    for label in label_arr:
        _check_label(w, int(label))
    inp = w.embedding[label_arr]
    per_layer = []
    for depth, layer in enumerate(w.pred_lstm):
        h_prev = np.stack([s.layers[depth][0] for s in states])
        c_prev = np.stack([s.layers[depth][1] for s in states])
        h, c = lstm_cell_step(layer, inp, h_prev, c_prev)
        per_layer.append((h, c))
        inp = h
    return [
        PredState(tuple((h[row], c[row]) for h, c in per_layer)) for row in range(len(states))
    ]


_start_cache: "weakref.WeakKeyDictionary[ModelWeights, PredState]" = weakref.WeakKeyDictionary()
_start_lock = threading.Lock()


def initial_pred_state(w: ModelWeights) -> PredState:
    """
    State after the start step: the blank embedding fed from a zero state. It does not
    depend on the input, so it is computed once per model and reused.
    """
    with _start_lock:
        cached = _start_cache.get(w)
        if cached is None:
            cached = predictor_step(w, BLANK_ID, zero_pred_state(w))
            _start_cache[w] = cached
        return cached


def project_encoder(w: ModelWeights, h_enc: Vector) -> Vector:
    """W_e h_enc + b_z, the frame-dependent half of the joint network."""
    h_enc = np.asarray(h_enc, dtype=np.float64)
    if h_enc.shape != (w.config.enc_hidden,):
        raise DimensionError(
            "Encoder output has the wrong length", f"got {h_enc.shape}, want ({w.config.enc_hidden},)"
        )
    return matvec(w.w_e, h_enc) + w.b_z


def posterior(
    w: ModelWeights, h_enc: Vector, pred: PredState, enc_proj: Vector | None = None
) -> Vector:
    """log Pr(k | y, t) for k in 0..|K|; index 0 is the blank."""
    if enc_proj is None:
        enc_proj = project_encoder(w, h_enc)
    z = np.tanh(enc_proj + matvec(w.w_p, pred.last_h))
    return log_softmax(matvec(w.w_z, z) + w.b_s)


def batched_posterior(
    w: ModelWeights,
    h_enc: Vector,
    preds: Sequence[PredState],
    enc_proj: Vector | None = None,
) -> Matrix:
    """
    Posterior rows for many prediction states at one frame, shape (len(preds), |K|+1).
    The encoder projection is computed once and broadcast to every row.
    """
    if not preds:
        raise EmptyInputError("batched_posterior needs at least one prediction state")
    if enc_proj is None:
        enc_proj = project_encoder(w, h_enc)
    h_pre = np.stack([p.last_h for p in preds])
    z = np.tanh(enc_proj[None, :] + h_pre @ w.w_p.T)
    return log_softmax(z @ w.w_z.T + w.b_s)
