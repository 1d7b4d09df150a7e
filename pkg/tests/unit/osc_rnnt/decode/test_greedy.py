import math

import numpy as np
import pytest

from osc_rnnt.decode.greedy import decode_greedy
from osc_rnnt.decode.hypothesis import OscParams
from osc_rnnt.decode.osc import decode_osc
from osc_rnnt.model.network import encode


def test_blank_dominant_model_outputs_nothing(bias_model):
    w = bias_model([0.7, 0.2, 0.1])
    out = decode_greedy(w, np.zeros((5, 2)))
    assert out.labels == ()
    assert np.isclose(out.logp, 5 * math.log(0.7))
    assert out.counters.posterior_calls == 5
    assert out.frames_processed == 5


def test_label_dominant_model_still_waits_for_blank(bias_model):
    """
    Emitting label 2 costs 0.7 * 0.1 (the emission then its blank) against 0.1 for the
    blank alone, so a model whose posterior never changes never emits.
    """
    w = bias_model([0.1, 0.2, 0.7])
    out = decode_greedy(w, np.zeros((4, 2)))
    assert out.labels == ()
    assert np.isclose(out.logp, 4 * math.log(0.1))
    assert out.counters.rescoring_posterior_calls == 4


def test_precomputed_encoder_output(random_model, features):
    w = random_model(4)
    x = features(6)
    direct = decode_greedy(w, x)
    shared = decode_greedy(w, None, encoded=encode(w, x))
    assert direct.labels == shared.labels
    assert direct.logp == shared.logp


def test_emission_is_blank_rescored(emit_then_blank_model):
    out = decode_greedy(emit_then_blank_model, np.zeros((4, 1)))
    # Frame 0 emits label 1 and pays the blank that follows it; every later frame is a blank
    assert out.labels == (1,)
    assert out.logp > 4 * math.log(0.3)
    assert out.counters.predictor_steps == 4


@pytest.mark.parametrize("seed", range(50))
def test_matches_one_wide_osc_beam(random_model, features, seed):
    w = random_model(seed)
    x = features(5, seed=seed)
    greedy = decode_greedy(w, x)
    for alpha in (1, 2):
        osc = decode_osc(w, x, OscParams(beam=1, alpha=alpha))
        assert greedy.labels == osc.labels
        assert greedy.logp == pytest.approx(osc.logp, abs=1e-9)
