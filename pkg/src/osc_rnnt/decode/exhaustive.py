"""
Exhaustive decoding for tiny instances: score every label sequence up to a length
cap by the transducer forward recursion over the (t, u) lattice.

A path emits labels (u + 1, same t) or a blank (t + 1, same u). A sequence is complete
once the blank at the last frame has been taken; nothing is emitted after it.
"""

import itertools
import time
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from osc_rnnt.core.exceptions import SearchBudgetError
from osc_rnnt.decode.common import encoder_output
from osc_rnnt.decode.hypothesis import DecodeOutput, Labels
from osc_rnnt.model.network import PredState, initial_pred_state, predictor_step
from osc_rnnt.model.types import BLANK_ID
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.numerics import Matrix, log_softmax

DEFAULT_BUDGET = 200_000


@dataclass
class ExhaustiveResult:
    labels: Labels
    score: float
    """Length-normalised log-probability of the argmax"""
    logp: float
    table: Dict[Labels, float] = field(default_factory=dict)
    """log Pr(y) for every enumerated sequence"""


def sequence_count(num_labels: int, max_len: int) -> int:
    """Number of label sequences of length 0..max_len."""
    return sum(num_labels**n for n in range(max_len + 1))


def _frame_posteriors(w: ModelWeights, enc_proj: np.ndarray, state: PredState) -> np.ndarray:
    """Posterior rows for one prediction state against every frame, shape (T, |K|+1)."""
    z = np.tanh(enc_proj + w.w_p @ state.last_h)
    return log_softmax(z @ w.w_z.T + w.b_s)


def sequence_logprob(post_by_prefix: Dict[Labels, np.ndarray], labels: Labels, frames: int) -> float:
    """Forward recursion; post_by_prefix[labels[:u]] holds the (T, |K|+1) rows after u labels."""
    size = len(labels)
    alpha = np.full((frames, size + 1), -np.inf)
    alpha[0, 0] = 0.0
    for t in range(frames):
        for u in range(size + 1):
            if t == 0 and u == 0:
                continue
            terms = []
            if t > 0:
                terms.append(alpha[t - 1, u] + post_by_prefix[labels[:u]][t - 1, BLANK_ID])
            if u > 0:
                terms.append(alpha[t, u - 1] + post_by_prefix[labels[: u - 1]][t, labels[u - 1]])
            alpha[t, u] = np.logaddexp.reduce(terms)
    return float(alpha[frames - 1, size] + post_by_prefix[labels][frames - 1, BLANK_ID])


def exhaustive_decode(
    w: ModelWeights,
    features: Matrix | None,
    max_len: int | None = None,
    *,
    budget: int = DEFAULT_BUDGET,
    encoded: Matrix | None = None,
) -> ExhaustiveResult:
    """
    Score every sequence of at most max_len labels (default 2*T) and return the argmax of
    logp / max(|y|, 1) together with the full table. Raises SearchBudgetError before doing
    any work when more than `budget` sequences would be enumerated.
    """
    enc = encoder_output(w, features, encoded)
    frames = enc.shape[0]
    if max_len is None:
        max_len = 2 * frames
    num_labels = w.config.num_labels
    count = sequence_count(num_labels, max_len)
    if count > budget:
        raise SearchBudgetError(
            f"Exhaustive decode would enumerate {count} sequences, budget is {budget}",
            f"T={frames} |K|={num_labels} max_len={max_len}",
        )

    enc_proj = enc @ w.w_e.T + w.b_z
    states: Dict[Labels, PredState] = {(): initial_pred_state(w)}
    posts: Dict[Labels, np.ndarray] = {(): _frame_posteriors(w, enc_proj, states[()])}
    table: Dict[Labels, float] = {}

    for length in range(max_len + 1):
        for labels in itertools.product(range(1, num_labels + 1), repeat=length):
            if labels not in posts:
                states[labels] = predictor_step(w, labels[-1], states[labels[:-1]])
                posts[labels] = _frame_posteriors(w, enc_proj, states[labels])
            table[labels] = sequence_logprob(posts, labels, frames)

    best = min(table, key=lambda y: (-table[y] / max(len(y), 1), len(y), y))
    return ExhaustiveResult(
        labels=best,
        score=table[best] / max(len(best), 1),
        logp=table[best],
        table=table,
    )


def decode_exhaustive(
    w: ModelWeights,
    features: Matrix | None,
    max_len: int | None = None,
    *,
    budget: int = DEFAULT_BUDGET,
    encoded: Matrix | None = None,
) -> DecodeOutput:
    """exhaustive_decode wrapped as a DecodeOutput for the command line."""
    start = time.perf_counter()
    result = exhaustive_decode(w, features, max_len, budget=budget, encoded=encoded)
    return DecodeOutput(
        labels=result.labels,
        score=result.score,
        logp=result.logp,
        frames_processed=encoded.shape[0] if encoded is not None else len(features),
        wall_time=time.perf_counter() - start,
        decoder="oracle",
    )
