"""
Prefix search support: the chain probability of extending a beam-resident prefix to a
longer hypothesis within one frame, and a cache of prediction states by label sequence.
"""

from typing import Dict, Iterable

import numpy as np

from osc_rnnt.core.exceptions import NotAPrefixError
from osc_rnnt.decode.hypothesis import DecodeCounters, Hypothesis, Labels
from osc_rnnt.model.network import (
    PredState,
    initial_pred_state,
    posterior,
    predictor_step,
    project_encoder,
)
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.numerics import Vector


class PredictorCache:
    """
    Prediction states keyed by label sequence (they depend on nothing else), plus
    posterior rows for the current frame. Call start_frame() whenever h_enc changes;
    decoders pass the labels of the incoming beam so states nothing can reach again are
    dropped.
    """

    def __init__(self, w: ModelWeights, counters: DecodeCounters | None = None) -> None:
        self.w = w
        self.counters = counters
        self._states: Dict[Labels, PredState] = {(): initial_pred_state(w)}
        self._posteriors: Dict[Labels, Vector] = {}
        self.h_enc: Vector | None = None
        self.enc_proj: Vector | None = None

    def start_frame(self, h_enc: Vector, keep: Iterable[Labels] | None = None) -> None:
        self.h_enc = h_enc
        self.enc_proj = project_encoder(self.w, h_enc)
        self._posteriors.clear()
        if keep is not None:
            kept = {(): self._states[()]}
            for labels in keep:
                state = self._states.get(labels)
                if state is not None:
                    kept[labels] = state
            self._states = kept

    def __len__(self) -> int:
        return len(self._states)

    def remember(self, labels: Labels, state: PredState) -> None:
        self._states.setdefault(labels, state)

    def state(self, labels: Labels, hint: PredState | None = None) -> PredState:
        """State for `labels`, stepping from the nearest cached ancestor when needed."""
        if hint is not None:
            self._states.setdefault(labels, hint)
            return hint
        cached = self._states.get(labels)
        if cached is not None:
            return cached
        parent = self.state(labels[:-1])
        state = predictor_step(self.w, labels[-1], parent)
        if self.counters is not None:
            self.counters.predictor_steps += 1
        self._states[labels] = state
        return state

    def posterior(self, labels: Labels, hint: PredState | None = None) -> Vector:
        """Posterior row for `labels` at the current frame."""
        row = self._posteriors.get(labels)
        if row is None:
            row = posterior(self.w, self.h_enc, self.state(labels, hint), enc_proj=self.enc_proj)
            if self.counters is not None:
                self.counters.posterior_calls += 1
            self._posteriors[labels] = row
        return row


def prefix_extension_logprob(
    w: ModelWeights,
    prefix_hyp: Hypothesis,
    full: Labels,
    h_enc: Vector,
    cache: PredictorCache | None = None,
) -> float:
    """
    log Pr(full | prefix, t): the sum of log Pr(full[j] | full[:j], t) over the extension
    positions, all evaluated at the same frame, advancing the predictor through each
    intermediate prefix.
    """
    prefix = tuple(prefix_hyp.labels)
    full = tuple(full)
    if len(prefix) >= len(full) or full[: len(prefix)] != prefix:
        raise NotAPrefixError(
            f"{list(prefix)} is not a strict prefix of {list(full)}",
        )

    if cache is not None:
        if cache.h_enc is None or not np.array_equal(cache.h_enc, h_enc):
            cache.start_frame(h_enc)
        total = 0.0
        for j in range(len(prefix), len(full)):
            hint = prefix_hyp.pred_state if j == len(prefix) else None
            total += float(cache.posterior(full[:j], hint)[full[j]])
        return total

    state = prefix_hyp.pred_state
    if state is None:
        state = initial_pred_state(w)
        for label in prefix:
            state = predictor_step(w, label, state)
    enc_proj = project_encoder(w, h_enc)
    total = 0.0
    for j in range(len(prefix), len(full)):
        total += float(posterior(w, h_enc, state, enc_proj=enc_proj)[full[j]])
        if j + 1 < len(full):
            state = predictor_step(w, full[j], state)
    return total
