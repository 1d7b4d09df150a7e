import json

import numpy as np
import pytest

from osc_rnnt.io.feature_file import read_features, write_features
from osc_rnnt.io.model_file import read_model
from osc_rnnt.io.result_log import read_results
from osc_rnnt.io.transcripts import write_transcripts
from osc_rnnt.model.types import get_preset

pytestmark = pytest.mark.integration


def test_gen_model(tmp_path, invoke):
    out = tmp_path / "m.rntw"
    result = invoke(
        "gen-model", "--out", out, "--input-dim", "3", "--enc-layers", "1", "--enc-hidden", "4",
        "--pred-layers", "1", "--pred-hidden", "4", "--joint-dim", "5", "--num-labels", "2",
        config=False,
    )
    assert result.exit_code == 0, result.output
    assert read_model(out).config.num_labels == 2

    preset = tmp_path / "tiny.rntw"
    assert invoke("gen-model", "--preset", "tiny", "--out", preset, config=False).exit_code == 0
    assert read_model(preset).config == get_preset("tiny")


def test_gen_model_blank_bias(tmp_path, invoke):
    plain, biased = tmp_path / "plain.rntw", tmp_path / "biased.rntw"
    assert invoke("gen-model", "--preset", "tiny", "--out", plain, config=False).exit_code == 0
    result = invoke("gen-model", "--preset", "tiny", "--blank-bias", "6", "--out", biased, config=False)
    assert result.exit_code == 0, result.output
    assert "blank bias" in result.stdout
    assert read_model(biased).b_s[0] == pytest.approx(read_model(plain).b_s[0] + 6.0, abs=1e-6)


def test_gen_model_rejects_invalid_configs(tmp_path, invoke):
    out = tmp_path / "m.rntw"
    result = invoke("gen-model", "--preset", "tiny", "--pred-hidden", "5", "--out", out, config=False)
    assert result.exit_code == 2
    assert not out.exists()
    assert invoke("gen-model", "--preset", "nope", "--out", out, config=False).exit_code == 2


def test_gen_features(workspace):
    _, _, feats = workspace
    files = sorted(feats.glob("*.rntf"))
    assert [f.name for f in files] == [f"utt{i:04d}.rntf" for i in range(4)]
    for f in files:
        utt = read_features(f)
        assert 3 <= utt.frames.shape[0] <= 6
        assert utt.frames.shape[1] == 4
        assert utt.duration_ms == 10 * utt.frames.shape[0]


@pytest.mark.parametrize(
    "flags",
    [
        ["--decoder", "greedy"],
        ["--decoder", "ref", "--beam", "3"],
        ["--decoder", "improved", "--beam", "3", "--expand-beam", "1.0", "--state-beam", "2.0"],
        ["--decoder", "osc", "--beam", "3", "--alpha", "2"],
        ["--decoder", "osc-unbatched", "--beam", "3", "--alpha", "2"],
        ["--decoder", "oracle", "--max-len", "3"],
    ],
)
def test_decode_every_decoder(workspace, invoke, flags):
    tmp, model, feats = workspace
    out = tmp / "results.jsonl"
    result = invoke("decode", "--model", model, "--features", feats, "--out", out, *flags)
    assert result.exit_code == 0, result.output
    records = read_results(out)
    assert [r.utterance_id for r in records] == [f"utt{i:04d}" for i in range(4)]
    assert all(r.decoder == flags[1] for r in records)
    assert all(r.audio_duration_ms > 0 for r in records)


def test_decode_appends(workspace, invoke):
    tmp, model, feats = workspace
    out = tmp / "results.jsonl"
    one = feats / "utt0000.rntf"
    for _ in range(2):
        assert invoke("decode", "--model", model, "-f", one, "--out", out, "-d", "greedy").exit_code == 0
    assert len(read_results(out)) == 2


@pytest.mark.parametrize(
    "flags",
    [
        ["--decoder", "ref", "--alpha", "2"],
        ["--decoder", "greedy", "--beam", "4"],
        ["--decoder", "viterbi"],
    ],
)
def test_decode_rejects_unused_flags(workspace, invoke, flags):
    tmp, model, feats = workspace
    out = tmp / "results.jsonl"
    result = invoke("decode", "--model", model, "--features", feats, "--out", out, *flags)
    assert result.exit_code == 2
    assert not out.exists()


def test_decode_bad_inputs(workspace, invoke):
    tmp, model, feats = workspace
    bad = tmp / "bad.rntf"
    bad.write_bytes(b"RNTF\x01\x00")
    assert invoke("decode", "--model", model, "--features", bad).exit_code == 2
    assert invoke("decode", "--model", feats / "utt0000.rntf", "--features", feats).exit_code == 2
    empty = tmp / "empty"
    empty.mkdir()
    assert invoke("decode", "--model", model, "--features", empty).exit_code == 2


def test_oracle_over_budget_exits_3(workspace, invoke):
    tmp, model, feats = workspace
    result = invoke(
        "decode", "--model", model, "--features", feats, "--out", tmp / "r.jsonl",
        "--decoder", "oracle", "--budget", "10",
    )
    assert result.exit_code == 3


def test_over_budget_keeps_finished_records(tmp_path, invoke):
    model = tmp_path / "model.rntw"
    assert invoke("gen-model", "--preset", "tiny", "--seed", "1", "--out", model, config=False).exit_code == 0
    feats = tmp_path / "feats"
    feats.mkdir()
    rng = np.random.default_rng(0)
    # 13 sequences for one frame, 9841 for four
    write_features(feats / "a_short.rntf", rng.standard_normal((1, 4)), 10)
    write_features(feats / "b_long.rntf", rng.standard_normal((4, 4)), 40)
    out = tmp_path / "r.jsonl"
    result = invoke(
        "decode", "--model", model, "--features", feats, "--out", out,
        "--decoder", "oracle", "--budget", "100",
    )
    assert result.exit_code == 3
    assert [r.utterance_id for r in read_results(out)] == ["a_short"]


def _decode(invoke, tmp, model, feats, *flags):
    out = tmp / "results.jsonl"
    result = invoke("decode", "--model", model, "--features", feats, "--out", out, *flags)
    assert result.exit_code == 0, result.output
    return out


def test_eval_perfect_and_empty(workspace, invoke):
    tmp, model, feats = workspace
    out = _decode(invoke, tmp, model, feats, "-d", "osc", "-W", "3", "--alpha", "1")
    records = read_results(out)

    perfect = tmp / "perfect.txt"
    write_transcripts(perfect, [(r.utterance_id, tuple(r.labels)) for r in records])
    result = invoke("eval", "--results", out, "--transcripts", perfect, config=False)
    assert result.exit_code == 0, result.output
    assert "0.0000" in result.stdout

    # empty hypotheses delete every reference label
    refs = tmp / "refs.txt"
    write_transcripts(refs, [(r.utterance_id, (1, 2)) for r in records])
    empty_log = tmp / "empty.jsonl"
    empty_log.write_text(
        "".join(r.model_copy(update={"labels": []}).model_dump_json() + "\n" for r in records),
        encoding="utf-8",
    )
    result = invoke("eval", "--results", empty_log, "--transcripts", refs, config=False)
    assert result.exit_code == 0, result.output
    assert "1.0000" in result.stdout


def test_eval_mismatch_exits_4(workspace, invoke):
    tmp, model, feats = workspace
    out = _decode(invoke, tmp, model, feats, "-d", "greedy")
    refs = tmp / "refs.txt"
    write_transcripts(refs, [("utt0000", (1,)), ("utt0001", (2,)), ("other", (3,))])
    result = invoke("eval", "--results", out, "--transcripts", refs, config=False)
    assert result.exit_code == 4


def test_eval_bad_transcripts_exit_2(workspace, invoke):
    tmp, model, feats = workspace
    out = _decode(invoke, tmp, model, feats, "-d", "greedy")
    refs = tmp / "refs.txt"
    refs.write_text("utt0000 1 2\n", encoding="utf-8")
    assert invoke("eval", "--results", out, "--transcripts", refs, config=False).exit_code == 2


def test_compare_batched_and_unbatched(workspace, invoke):
    _, model, feats = workspace
    result = invoke(
        "compare", "--model", model, "--features", feats,
        "--a", "osc:beam=4,alpha=2", "--b", "osc-unbatched:beam=4,alpha=2",
    )
    assert result.exit_code == 0, result.output
    assert "Agreement: 4/4 (100.00%)" in result.stdout


def test_one_wide_osc_beam_equals_greedy(workspace, invoke):
    _, model, feats = workspace
    result = invoke("compare", "--model", model, "--features", feats, "--a", "osc:beam=1", "--b", "greedy")
    assert result.exit_code == 0, result.output
    assert "Agreement: 4/4 (100.00%)" in result.stdout


def test_compare_writes_json_lines(workspace, invoke):
    tmp, model, feats = workspace
    out = tmp / "compare.jsonl"
    result = invoke(
        "compare", "--model", model, "--features", feats, "--a", "ref:beam=2", "--b", "ref:beam=2", "--out", out,
    )
    assert result.exit_code == 0, result.output
    lines = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert [line["utterance_id"] for line in lines[:-1]] == ["utt0000", "utt0001", "utt0002", "utt0003"]
    assert all(line["agree"] and line["first_divergent_frame"] is None for line in lines[:-1])
    assert lines[-1]["agreed"] == lines[-1]["utterances"] == 4
    assert lines[-1]["agreement"] == 100.0


def test_compare_rejects_bad_specs(workspace, invoke):
    _, model, feats = workspace
    result = invoke("compare", "--model", model, "--features", feats, "--a", "osc:gamma=1", "--b", "ref")
    assert result.exit_code == 2


def test_stats(workspace, invoke):
    _, model, feats = workspace
    result = invoke("stats", "--model", model, "--features", feats, "--beam", "4")
    assert result.exit_code == 0, result.output
    assert "Ratio (%)" in result.stdout or "No hypothesis was expanded" in result.stdout


def test_stats_writes_json(workspace, invoke):
    tmp, model, feats = workspace
    out = tmp / "stats.json"
    result = invoke("stats", "--model", model, "--features", feats, "--beam", "4", "--out", out)
    assert result.exit_code == 0, result.output
    (line,) = out.read_text(encoding="utf-8").splitlines()
    table = json.loads(line)
    assert {"expansions", "prefix_diffs", "expansion_total", "prefix_total", "zero_expansions"} <= table.keys()
    if table["expansions"]:
        assert sum(table["expansions"].values()) == pytest.approx(100.0)


def test_bench(workspace, invoke):
    tmp, model, feats = workspace
    report = tmp / "bench.jsonl"
    result = invoke(
        "bench", "--model", model, "--features", feats, "--decoders", "ref,osc",
        "--beams", "2,4", "--alphas", "1", "--out", report,
    )
    assert result.exit_code == 0, result.output
    lines = [json.loads(line) for line in report.read_text(encoding="utf-8").splitlines()]
    # 4 cells, one ratio per series, one summary
    assert len(lines) == 4 + 2 + 1
    assert lines[-1]["repeats"] == 1
    assert "RT-90" in result.stdout


def test_bench_rejects_unknown_decoders(workspace, invoke):
    _, model, feats = workspace
    result = invoke("bench", "--model", model, "--features", feats, "--decoders", "fast")
    assert result.exit_code == 2


def test_check_and_welcome(invoke, config_file, monkeypatch):
    monkeypatch.chdir(config_file.parent)
    result = invoke("check", config=False)
    assert result.exit_code == 0, result.output
    assert "Configuration" in result.stdout

    config_file.write_text("decoder:\n  beam: 0\n", encoding="utf-8")
    assert invoke("check", config=False).exit_code == 2

    result = invoke(config=False)
    assert result.exit_code == 0
    assert "gen-model" in result.stdout
