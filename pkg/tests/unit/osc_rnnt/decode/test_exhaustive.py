import itertools
import math

import numpy as np
import pytest

from osc_rnnt.core.exceptions import SearchBudgetError
from osc_rnnt.decode.exhaustive import decode_exhaustive, exhaustive_decode, sequence_count
from osc_rnnt.model.network import encode, initial_pred_state, posterior, predictor_step


def test_sequence_count():
    assert sequence_count(2, 3) == 15
    assert sequence_count(3, 0) == 1
    assert sequence_count(1, 4) == 5


def test_single_frame_mass(bias_model):
    """T=1, blank 0.5: all sequences up to length L hold 1 - 0.5^(L + 1) of the mass"""
    w = bias_model([0.5, 0.25, 0.25])
    result = exhaustive_decode(w, np.zeros((1, 2)), max_len=4)
    assert len(result.table) == sequence_count(2, 4)
    total = sum(math.exp(v) for v in result.table.values())
    assert total == pytest.approx(1 - 0.5**5, abs=1e-12)
    assert result.table[()] == pytest.approx(math.log(0.5))
    assert result.table[(1, 2)] == pytest.approx(math.log(0.25 * 0.25 * 0.5))


def test_alignments_are_summed(bias_model):
    """[1] over two frames has two alignments: emit at t=0 or at t=1"""
    w = bias_model([0.5, 0.25, 0.25])
    result = exhaustive_decode(w, np.zeros((2, 2)), max_len=2)
    assert result.table[(1,)] == pytest.approx(math.log(2 * 0.25 * 0.5 * 0.5))
    assert result.table[()] == pytest.approx(math.log(0.25))


def test_argmax_is_length_normalised(bias_model):
    w = bias_model([0.1, 0.9])
    result = exhaustive_decode(w, np.zeros((1, 2)), max_len=3)
    expected = max(result.table, key=lambda y: result.table[y] / max(len(y), 1))
    assert result.labels == expected
    assert result.score == pytest.approx(result.table[expected] / max(len(expected), 1))
    assert result.logp == result.table[expected]


def test_budget_is_checked_before_enumerating(random_model, features):
    w = random_model(0, num_labels=3)
    with pytest.raises(SearchBudgetError):
        exhaustive_decode(w, features(5), budget=1000)
    # fits once max_len is capped
    assert len(exhaustive_decode(w, features(5), max_len=3, budget=1000).table) == 40


def test_decode_output_wrapper(random_model, features):
    w = random_model(1, num_labels=2)
    x = features(2)
    out = decode_exhaustive(w, x)
    result = exhaustive_decode(w, x)
    assert out.decoder == "oracle"
    assert out.labels == result.labels
    assert out.logp == result.logp
    assert out.frames_processed == 2


def _frame_path_logprob(w, h_enc, state, labels):
    """Emit `labels` at one frame, then the blank; returns the log-probability and the new state"""
    total = 0.0
    for label in labels:
        total += float(posterior(w, h_enc, state)[label])
        state = predictor_step(w, label, state)
    return total + float(posterior(w, h_enc, state)[0]), state


@pytest.mark.parametrize("seed", range(4))
def test_table_matches_alignment_enumeration(random_model, features, seed):
    """T=2, |K|=2: sum every per-frame split of every sequence by walking the network directly"""
    w = random_model(seed, num_labels=2)
    x = features(2, seed=seed)
    enc = encode(w, x)
    max_len = 3
    expected = {}
    for length in range(max_len + 1):
        for labels in itertools.product((1, 2), repeat=length):
            paths = []
            for split in range(length + 1):
                first, state = _frame_path_logprob(w, enc[0], initial_pred_state(w), labels[:split])
                second, _ = _frame_path_logprob(w, enc[1], state, labels[split:])
                paths.append(first + second)
            expected[labels] = float(np.logaddexp.reduce(paths))

    result = exhaustive_decode(w, x, max_len=max_len)
    assert result.table.keys() == expected.keys()
    for labels, logp in expected.items():
        assert result.table[labels] == pytest.approx(logp, abs=1e-9)
