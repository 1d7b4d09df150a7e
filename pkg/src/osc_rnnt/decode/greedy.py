import time

import numpy as np

from osc_rnnt.decode.common import encoder_output
from osc_rnnt.decode.hypothesis import DecodeCounters, DecodeOutput
from osc_rnnt.model.network import initial_pred_state, posterior, predictor_step
from osc_rnnt.model.types import BLANK_ID
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.numerics import Matrix


def decode_greedy(
    w: ModelWeights, features: Matrix | None, *, encoded: Matrix | None = None
) -> DecodeOutput:
    """
    At most one emission per frame. The best label k of the posterior is blank-rescored
    with the advanced predictor: k is emitted only when Pr(k|y,t)·Pr(blank|y+k,t) beats
    Pr(blank|y,t), which is the choice a one-wide OSC beam makes. Ties go to the blank;
    among labels the lowest index wins (np.argmax returns the first maximum).
    """
    start = time.perf_counter()
    enc = encoder_output(w, features, encoded)
    counters = DecodeCounters()

    state = initial_pred_state(w)
    labels: list[int] = []
    logp = 0.0
    for h_enc in enc:
        post = posterior(w, h_enc, state)
        counters.posterior_calls += 1
        counters.frames += 1
        k = int(np.argmax(post[1:])) + 1
        next_state = predictor_step(w, k, state)
        counters.predictor_steps += 1
        rescore = posterior(w, h_enc, next_state)
        counters.rescoring_posterior_calls += 1

        stay = logp + float(post[BLANK_ID])
        emit = logp + float(post[k]) + float(rescore[BLANK_ID])
        if emit > stay:
            labels.append(k)
            state = next_state
            logp = emit
        else:
            logp = stay

    return DecodeOutput(
        labels=tuple(labels),
        score=logp / max(len(labels), 1),
        logp=logp,
        frames_processed=enc.shape[0],
        wall_time=time.perf_counter() - start,
        decoder="greedy",
        counters=counters,
    )
