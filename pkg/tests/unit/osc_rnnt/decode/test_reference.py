import math

import numpy as np
import pytest

from osc_rnnt.core.exceptions import SearchBudgetError
from osc_rnnt.decode.hypothesis import ImprovedParams, OscParams
from osc_rnnt.decode.osc import decode_osc
from osc_rnnt.decode.reference import (
    decode_improved,
    decode_reference,
    decode_reference_instrumented,
)
from osc_rnnt.decode.stats import aggregate_step_stats


def test_hand_traced_expansion_loop(bias_model):
    """
    Constant posterior [0.2, 0.7, 0.1], W=1: every frame pops (), [1], [1,1], [1,1,1],
    [1,1,1,1] before B holds a hypothesis (the empty one, 0.2) above the best left in A.
    """
    w = bias_model([0.2, 0.7, 0.1])
    out = decode_reference(w, np.zeros((3, 2)), 1, trace=True)
    assert out.labels == ()
    assert out.logp == pytest.approx(3 * math.log(0.2))
    assert out.counters.pops == 15
    assert out.trace == [((),), ((),), ((),)]


def test_pops_grow_with_beam_width(bias_model):
    """On a label-dense model the expansion loop does more than one pop per frame, more for larger W"""
    w = bias_model([0.1, 0.6, 0.3])
    x = np.zeros((4, 2))
    pops = [decode_reference(w, x, width).counters.pops for width in (2, 4, 8)]
    assert pops[0] > 4
    assert pops[0] < pops[1] < pops[2]


def test_safety_cap(bias_model):
    w = bias_model([0.1, 0.6, 0.3])
    with pytest.raises(SearchBudgetError):
        decode_reference(w, np.zeros((2, 2)), 4, max_pops_per_frame=3)


def test_zero_blank_probability_ends_the_frame(bias_model):
    """No hypothesis can complete when the blank has probability zero; the search still returns"""
    w = bias_model([0.0, 0.5, 0.5])
    x = np.zeros((3, 2))
    out = decode_reference(w, x, 2, max_pops_per_frame=200)
    assert out.logp == -math.inf
    assert out.frames_processed == 3
    # The first frame spends the cap, later frames start from zero-probability beams
    assert out.counters.pops == 200
    assert decode_osc(w, x, OscParams(beam=2, alpha=1)).logp == -math.inf


def test_improved_without_pruning_equals_reference(random_model, features):
    no_prune = ImprovedParams(beam=4, expand_beam=math.inf, state_beam=math.inf)
    for seed in range(10):
        w = random_model(seed)
        x = features(5, seed=seed)
        ref = decode_reference(w, x, 4, trace=True)
        improved = decode_improved(w, x, no_prune, trace=True)
        assert improved.labels == ref.labels
        assert improved.logp == ref.logp
        assert improved.trace == ref.trace
        assert improved.counters.pops == ref.counters.pops


def test_zero_expand_beam_pushes_one_label_per_pop(random_model, features):
    for seed in range(5):
        w = random_model(seed)
        out = decode_improved(w, features(4, seed=seed), ImprovedParams(beam=3, expand_beam=0.0))
        assert out.counters.pushes == out.counters.pops


def test_state_beam_only_shortens_the_loop(random_model, features):
    w = random_model(11)
    x = features(6, seed=11)
    loose = decode_improved(w, x, ImprovedParams(beam=4, expand_beam=math.inf, state_beam=math.inf))
    tight = decode_improved(w, x, ImprovedParams(beam=4, expand_beam=math.inf, state_beam=0.0))
    assert tight.counters.pops <= loose.counters.pops


def test_instrumented_statistics(bias_model):
    blank_heavy = bias_model([0.2, 0.7, 0.1])
    out = decode_reference_instrumented(blank_heavy, np.zeros((3, 2)), 1)
    assert out.step_stats.expansion_counts == {0: 3}
    table = aggregate_step_stats([out.step_stats])
    assert table.expansions == {}
    assert table.zero_expansions == 3

    dense = bias_model([0.1, 0.6, 0.3])
    out = decode_reference_instrumented(dense, np.zeros((4, 2)), 4)
    table = aggregate_step_stats([out.step_stats])
    # four survivors in each of the four frames
    assert sum(out.step_stats.expansion_counts.values()) == 16
    if table.expansions:
        assert sum(table.expansions.values()) == pytest.approx(100.0)
    if table.prefix_diffs:
        assert sum(table.prefix_diffs.values()) == pytest.approx(100.0)


@pytest.mark.parametrize("seed", range(12))
def test_improved_trace_stays_inside_reference_trace(random_model, features, seed):
    """Default margins (2.3, 4.6) at W=5: the pruned search keeps nothing the full search did not"""
    w = random_model(seed)
    x = features(5, seed=seed)
    ref = decode_reference(w, x, 5, trace=True)
    improved = decode_improved(w, x, ImprovedParams(beam=5, expand_beam=2.3, state_beam=4.6), trace=True)

    assert len(improved.trace) == len(ref.trace) == 5
    for pruned_frame, full_frame in zip(improved.trace, ref.trace):
        assert set(pruned_frame) <= set(full_frame)
    assert improved.labels in ref.trace[-1]
    assert improved.counters.pops <= ref.counters.pops
