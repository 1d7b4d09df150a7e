"""
Straight-line version of the one-step constrained search: one posterior and one
predictor call per hypothesis, plain loops, a full sort for the local prune and no
shared caches. It exists to check decode_osc against.
"""

import time
from typing import List

from osc_rnnt.decode.common import encoder_output
from osc_rnnt.decode.hypothesis import (
    DecodeCounters,
    DecodeOutput,
    FrameTrace,
    Hypothesis,
    OscParams,
    best_hypothesis,
    ranking_key,
)
from osc_rnnt.decode.prefix import prefix_extension_logprob
from osc_rnnt.model.network import initial_pred_state, posterior, predictor_step
from osc_rnnt.model.types import BLANK_ID
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.numerics import Matrix, log_add


def decode_osc_unbatched(
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
    frames: List[FrameTrace] | None = [] if trace else None
    num_labels = w.config.num_labels

    beam: List[Hypothesis] = [Hypothesis((), 0.0, initial_pred_state(w))]

    for h_enc in enc:
        counters.frames += 1

        # Constrained prefix search over the entering scores
        scores = []
        for hyp in beam:
            logp = hyp.logp
            for prefix in beam:
                diff = len(hyp.labels) - len(prefix.labels)
                if 1 <= diff <= p.alpha and hyp.labels[: len(prefix.labels)] == prefix.labels:
                    ext = prefix_extension_logprob(w, prefix, hyp.labels, h_enc)
                    logp = log_add(logp, prefix.logp + ext)
            scores.append(logp)

        complete: List[Hypothesis] = []
        expansions: List[Hypothesis] = []
        for i, hyp in enumerate(beam):
            post = posterior(w, h_enc, hyp.pred_state)
            counters.posterior_calls += 1
            complete.append(Hypothesis(hyp.labels, scores[i] + float(post[BLANK_ID]), hyp.pred_state, i))
            for k in range(1, num_labels + 1):
                expansions.append(Hypothesis(hyp.labels + (k,), scores[i] + float(post[k]), None, i))

        local = sorted(expansions, key=ranking_key)[: p.beam]
        if p.check_duplicates:
            resident = [hyp.labels for hyp in beam]
            local = [h for h in local if h.labels not in resident]

        rescored: List[Hypothesis] = []
        for hyp in local:
            state = predictor_step(w, hyp.labels[-1], beam[hyp.parent_index].pred_state)
            counters.predictor_steps += 1
            blank = float(posterior(w, h_enc, state)[BLANK_ID])
            counters.posterior_calls += 1
            rescored.append(Hypothesis(hyp.labels, hyp.logp + blank, state, hyp.parent_index))

        beam = sorted(complete + rescored, key=ranking_key)[: p.beam]
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
        decoder="osc-unbatched",
        counters=counters,
        trace=frames,
    )
