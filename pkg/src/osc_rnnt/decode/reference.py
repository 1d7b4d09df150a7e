"""
The reference transducer beam search and its pruned variant.

Per frame: the incoming beam becomes A, B starts empty. Prefix search adds to every
y in A the mass of its strict prefixes in A extended to y at this frame. Then the
expansion loop repeatedly pops the most probable y* from A, commits y* with its blank
probability to B and pushes y*+k with the (incomplete) label probability back into A,
until B holds W hypotheses more probable than anything left in A. B is cut to W.

Scores of A are read from a snapshot taken before the prefix search, so a prefix that
is itself extended in the same pass does not count twice. Like the published
algorithm this search has no duplicate check: a label sequence can be pushed into A
again while an older copy is still there, and both copies may reach B.
"""

import bisect
import heapq
import itertools
import math
import time
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Tuple

from osc_rnnt.core.exceptions import SearchBudgetError
from osc_rnnt.decode.common import encoder_output
from osc_rnnt.decode.hypothesis import (
    DecodeCounters,
    DecodeOutput,
    FrameTrace,
    Hypothesis,
    ImprovedParams,
    Labels,
    StepStats,
    best_hypothesis,
    top_w,
)
from osc_rnnt.decode.prefix import PredictorCache, prefix_extension_logprob
from osc_rnnt.model.types import BLANK_ID
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.numerics import Matrix, log_add

DEFAULT_MAX_POPS_PER_FRAME = 100_000


@dataclass
class _Pruning:
    expand_beam: float = math.inf
    state_beam: float = math.inf


def _prefix_search(
    w: ModelWeights,
    beam: List[Hypothesis],
    cache: PredictorCache,
    stats: StepStats | None,
) -> List[Hypothesis]:
    by_labels: Dict[Labels, List[Hypothesis]] = defaultdict(list)
    for hyp in beam:
        by_labels[hyp.labels].append(hyp)

    updated: List[Hypothesis] = []
    for hyp in beam:
        logp = hyp.logp
        for cut in range(len(hyp.labels)):
            for prefix in by_labels.get(hyp.labels[:cut], ()):
                if stats is not None:
                    stats.prefix_len_diffs[len(hyp.labels) - cut] += 1
                ext = prefix_extension_logprob(w, prefix, hyp.labels, cache.h_enc, cache=cache)
                logp = log_add(logp, prefix.logp + ext)
        updated.append(hyp.with_logp(logp))
    return updated


def _search(
    w: ModelWeights,
    features: Matrix | None,
    width: int,
    *,
    pruning: _Pruning | None,
    instrument: bool,
    trace: bool,
    encoded: Matrix | None,
    max_pops_per_frame: int,
    name: str,
) -> DecodeOutput:
    start = time.perf_counter()
    enc = encoder_output(w, features, encoded)
    counters = DecodeCounters()
    cache = PredictorCache(w, counters)
    stats = StepStats() if instrument else None
    frames: List[FrameTrace] | None = [] if trace else None
    num_labels = w.config.num_labels
    tie = itertools.count()

    beam: List[Hypothesis] = [Hypothesis((), 0.0, cache.state(()))]

    for t, h_enc in enumerate(enc):
        cache.start_frame(h_enc, keep=(h.labels for h in beam))
        counters.frames += 1
        a_beam = _prefix_search(w, beam, cache, stats)

        # Max-heap on logp; entries carry the root length for the expansion histogram
        heap: List[Tuple[float, int, Hypothesis, int]] = [
            (-hyp.logp, next(tie), hyp, len(hyp.labels)) for hyp in a_beam
        ]
        heapq.heapify(heap)
        b_hyps: List[Tuple[Hypothesis, int]] = []
        b_logps: List[float] = []
        pops = 0

        while heap:
            best_a = -heap[0][0]
            if best_a == -math.inf:
                # What is left in A has zero probability
                break
            above = len(b_logps) - bisect.bisect_right(b_logps, best_a)
            if above >= width:
                break
            if pruning is not None and b_logps and b_logps[-1] - best_a > pruning.state_beam:
                break

            if pops >= max_pops_per_frame:
                if not b_logps or b_logps[-1] == -math.inf:
                    # Every blank so far had zero probability: no completion at this frame
                    break
                raise SearchBudgetError(
                    f"Expansion loop exceeded {max_pops_per_frame} pops at frame {t}",
                    f"decoder={name} beam={width}",
                )
            neg_logp, _, y_star, root_len = heapq.heappop(heap)
            pops += 1
            logp = -neg_logp
            post = cache.posterior(y_star.labels, y_star.pred_state)

            committed = Hypothesis(y_star.labels, logp + float(post[BLANK_ID]), None)
            b_hyps.append((committed, root_len))
            bisect.insort(b_logps, committed.logp)

            if pruning is not None and math.isfinite(pruning.expand_beam):
                floor = float(post[1:].max()) - pruning.expand_beam
            else:
                floor = -math.inf
            for k in range(1, num_labels + 1):
                label_logp = float(post[k])
                if label_logp < floor:
                    continue
                extended = Hypothesis(y_star.labels + (k,), logp + label_logp)
                heapq.heappush(heap, (-extended.logp, next(tie), extended, root_len))
                counters.pushes += 1

        counters.pops += pops
        if not b_hyps:
            b_hyps = [(Hypothesis(h.labels, -math.inf, None), root) for _, _, h, root in heap]
        survivors = top_w((h for h, _ in b_hyps), width)
        if stats is not None:
            roots = {id(h): root for h, root in b_hyps}
            for hyp in survivors:
                stats.expansion_counts[len(hyp.labels) - roots[id(hyp)]] += 1

        beam = [Hypothesis(h.labels, h.logp, cache.state(h.labels)) for h in survivors]
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
        decoder=name,
        step_stats=stats,
        counters=counters,
        trace=frames,
    )


def decode_reference(
    w: ModelWeights,
    features: Matrix | None,
    beam: int,
    *,
    trace: bool = False,
    encoded: Matrix | None = None,
    max_pops_per_frame: int = DEFAULT_MAX_POPS_PER_FRAME,
) -> DecodeOutput:
    """Reference beam search with unconstrained prefix search and the full expansion loop."""
    return _search(
        w,
        features,
        beam,
        pruning=None,
        instrument=False,
        trace=trace,
        encoded=encoded,
        max_pops_per_frame=max_pops_per_frame,
        name="ref",
    )


def decode_reference_instrumented(
    w: ModelWeights,
    features: Matrix | None,
    beam: int,
    *,
    trace: bool = False,
    encoded: Matrix | None = None,
    max_pops_per_frame: int = DEFAULT_MAX_POPS_PER_FRAME,
) -> DecodeOutput:
    """
    decode_reference that also fills step_stats: for every hypothesis left in B after a
    frame, how many labels it gained over its root in A; and for every pair of a
    hypothesis in A and one of its strict prefixes in A, their length difference.
    """
    return _search(
        w,
        features,
        beam,
        pruning=None,
        instrument=True,
        trace=trace,
        encoded=encoded,
        max_pops_per_frame=max_pops_per_frame,
        name="ref",
    )


def decode_improved(
    w: ModelWeights,
    features: Matrix | None,
    p: ImprovedParams,
    *,
    trace: bool = False,
    encoded: Matrix | None = None,
    max_pops_per_frame: int = DEFAULT_MAX_POPS_PER_FRAME,
) -> DecodeOutput:
    """
    Reference search with two prunes in the expansion loop:
    state_beam leaves the loop once the best hypothesis in B beats the best one in A by
    more than the margin; expand_beam only pushes labels within the margin of the best
    label of the popped hypothesis.
    """
    return _search(
        w,
        features,
        p.beam,
        pruning=_Pruning(expand_beam=p.expand_beam, state_beam=p.state_beam),
        instrument=False,
        trace=trace,
        encoded=encoded,
        max_pops_per_frame=max_pops_per_frame,
        name="improved",
    )
