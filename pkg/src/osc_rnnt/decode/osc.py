"""
One-step constrained (OSC) beam search.

Every hypothesis may grow by at most one label per frame, which turns the expansion
loop of the reference search into fixed-shape batched work: one posterior call over
the whole beam, one predictor call and one posterior call to blank-rescore the
expanded survivors.
"""

import time
from typing import Dict, List

import numpy as np

from osc_rnnt.core.exceptions import InvariantViolationError
from osc_rnnt.decode.common import encoder_output
from osc_rnnt.decode.hypothesis import (
    Beam,
    DecodeCounters,
    DecodeOutput,
    FrameTrace,
    Hypothesis,
    Labels,
    OscParams,
    best_hypothesis,
    ranking_key,
)
from osc_rnnt.decode.prefix import PredictorCache, prefix_extension_logprob
from osc_rnnt.model.network import batched_posterior, predictor_step_batched
from osc_rnnt.model.types import BLANK_ID
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.numerics import Matrix, log_add


def constrained_prefix_search(
    w: ModelWeights, beam: List[Hypothesis], alpha: int, cache: PredictorCache
) -> np.ndarray:
    """
    Scores of the beam after adding, for every y, the mass of beam-resident strict
    prefixes that are at most alpha labels shorter. Reads the entering scores only.
    """
    scores = np.array([h.logp for h in beam], dtype=np.float64)
    if alpha == 0:
        return scores
    index: Dict[Labels, int] = {h.labels: i for i, h in enumerate(beam)}
    updated = scores.copy()
    for i, hyp in enumerate(beam):
        for diff in range(1, min(alpha, len(hyp.labels)) + 1):
            j = index.get(hyp.labels[:-diff])
            if j is None:
                continue
            ext = prefix_extension_logprob(w, beam[j], hyp.labels, cache.h_enc, cache=cache)
            updated[i] = log_add(updated[i], scores[j] + ext)
    return updated


def local_prune(
    v_scores: np.ndarray, beam: List[Hypothesis], width: int
) -> List[tuple[int, int]]:
    """
    Top `width` (parent, label) pairs of the expansion scores, ordered like ranking_key.
    v_scores[i, k - 1] is the score of beam[i] extended by label k.
    """
    flat = v_scores.ravel()
    num_labels = v_scores.shape[1]
    if flat.size > width:
        # Everything tied with the width-th best stays in the running
        threshold = -np.partition(-flat, width - 1)[width - 1]
        candidates = np.flatnonzero(flat >= threshold)
    else:
        candidates = np.arange(flat.size)

    def key(idx: int):
        parent, col = divmod(int(idx), num_labels)
        labels = beam[parent].labels + (col + 1,)
        return (-float(flat[idx]), len(labels), labels, parent)

    chosen = sorted(candidates, key=key)[:width]
    return [divmod(int(idx), num_labels) for idx in chosen]


def _check_frame(
    beam: List[Hypothesis], parents: List[Hypothesis], width: int, unique: bool
) -> None:
    Beam(tuple(beam), width).check(unique=unique)
    for hyp in beam:
        parent = parents[hyp.parent_index]
        if len(hyp.labels) > len(parent.labels) + 1:
            raise InvariantViolationError(
                f"Hypothesis {list(hyp.labels)} grew by more than one label from {list(parent.labels)}"
            )


def decode_osc(
    w: ModelWeights,
    features: Matrix | None,
    p: OscParams,
    *,
    trace: bool = False,
    encoded: Matrix | None = None,
) -> DecodeOutput:
    start = time.perf_counter()
    enc = encoder_output(w, features, encoded)
    counters = DecodeCounters()
    cache = PredictorCache(w, counters)
    frames: List[FrameTrace] | None = [] if trace else None
    width = p.beam

    beam: List[Hypothesis] = [Hypothesis((), 0.0, cache.state(()))]

    for h_enc in enc:
        cache.start_frame(h_enc, keep=(h.labels for h in beam))
        counters.frames += 1

        scores = constrained_prefix_search(w, beam, p.alpha, cache)

        post = batched_posterior(w, h_enc, [h.pred_state for h in beam], enc_proj=cache.enc_proj)
        counters.batched_posterior_calls += 1

        # No-expansion branch: complete scores
        s_scores = scores + post[:, BLANK_ID]
        # Expansion branch: incomplete scores for every (hypothesis, label)
        v_scores = scores[:, None] + post[:, 1:]

        selected = local_prune(v_scores, beam, width)
        counters.max_local_width = max(counters.max_local_width, len(selected))

        if p.check_duplicates:
            resident = {h.labels for h in beam}
            selected = [
                (i, col) for i, col in selected if beam[i].labels + (col + 1,) not in resident
            ]

        candidates = [
            Hypothesis(h.labels, float(s_scores[i]), h.pred_state, i) for i, h in enumerate(beam)
        ]
        if selected:
            new_states = predictor_step_batched(
                w, [col + 1 for _, col in selected], [beam[i].pred_state for i, _ in selected]
            )
            counters.batched_predictor_calls += 1
            counters.predictor_steps += len(selected)
            rescore = batched_posterior(w, h_enc, new_states, enc_proj=cache.enc_proj)
            counters.rescoring_posterior_calls += 1
            for row, ((i, col), state) in enumerate(zip(selected, new_states)):
                labels = beam[i].labels + (col + 1,)
                logp = float(v_scores[i, col] + rescore[row, BLANK_ID])
                cache.remember(labels, state)
                candidates.append(Hypothesis(labels, logp, state, i))

        next_beam = sorted(candidates, key=ranking_key)[:width]
        if p.debug:
            _check_frame(next_beam, beam, width, unique=p.check_duplicates)
        beam = next_beam
        counters.saw_beam(len(beam))
        if frames is not None:
            frames.append(tuple(h.labels for h in beam))

    best = best_hypothesis(beam)
    return DecodeOutput(
        labels=best.labels,
        score=best.normalized_score,
        logp=best.logp,
        frames_processed=enc.shape[0],
        wall_time=time.perf_counter() - start,
        decoder="osc",
        counters=counters,
        trace=frames,
    )
