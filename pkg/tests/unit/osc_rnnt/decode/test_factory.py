import numpy as np
import pytest

from osc_rnnt.config import DecoderSettings
from osc_rnnt.core.exceptions import DecoderSpecError, SearchBudgetError
from osc_rnnt.decode.factory import DECODER_NAMES, DecoderSpec, run_decoder
from osc_rnnt.decode.greedy import decode_greedy
from osc_rnnt.decode.hypothesis import OscParams
from osc_rnnt.decode.osc import decode_osc


def test_parse():
    spec = DecoderSpec.parse("osc:beam=4,alpha=2")
    assert spec.name == "osc"
    assert spec.beam == 4 and spec.alpha == 2
    assert DecoderSpec.parse("improved:expand-beam=1.5").expand_beam == 1.5
    assert DecoderSpec.parse(" greedy ") == DecoderSpec(name="greedy")


@pytest.mark.parametrize(
    "text",
    ["ref:alpha=1", "greedy:beam=3", "osc:beam", "viterbi", "osc:beam=four", "oracle:alpha=1"],
)
def test_parse_rejects(text):
    with pytest.raises(DecoderSpecError):
        DecoderSpec.parse(text)


def test_resolved_fills_only_used_knobs():
    defaults = DecoderSettings(beam=7, alpha=2, oracle_budget=50)
    osc = DecoderSpec(name="osc").resolved(defaults)
    assert (osc.beam, osc.alpha, osc.check_duplicates) == (7, 2, True)
    assert osc.expand_beam is None and osc.budget is None

    ref = DecoderSpec(name="ref", beam=3).resolved(defaults)
    assert ref.beam == 3 and ref.alpha is None

    oracle = DecoderSpec(name="oracle").resolved(defaults)
    assert oracle.budget == 50 and oracle.max_len is None


def test_label():
    assert DecoderSpec(name="greedy").label == "greedy"
    assert DecoderSpec.parse("osc:beam=4,alpha=2").label == "osc:beam=4,alpha=2"
    spec = DecoderSpec.parse("osc:check_duplicates=false")
    assert spec.label.endswith("check_duplicates=false")


def test_every_decoder_runs(random_model, features):
    w = random_model(3, num_labels=2)
    x = features(3)
    for name in DECODER_NAMES:
        out = run_decoder(DecoderSpec(name=name), w, x)
        assert out.frames_processed == 3
        assert out.decoder == name


def test_dispatch_matches_direct_calls(random_model, features):
    w = random_model(4)
    x = features(5)
    assert run_decoder(DecoderSpec(name="greedy"), w, x).labels == decode_greedy(w, x).labels
    out = run_decoder(DecoderSpec.parse("osc:beam=3,alpha=2"), w, x, trace=True)
    direct = decode_osc(w, x, OscParams(beam=3, alpha=2), trace=True)
    assert out.labels == direct.labels
    assert out.trace == direct.trace


def test_budget_error_propagates(random_model):
    w = random_model(5)
    with pytest.raises(SearchBudgetError):
        run_decoder(DecoderSpec(name="oracle", budget=10), w, np.zeros((4, 3)))
