import dataclasses
from pathlib import Path

import numpy as np

from osc_rnnt.decode.hypothesis import DecodeCounters
from osc_rnnt.event_progress import ProgressAction, convert_log_event
from osc_rnnt.logging.events import Event, EventFilter
from osc_rnnt.logging.json_serializer import JSONSerializer


def _event(type_="info", namespace="osc_rnnt.decode", name=None, **data) -> Event:
    return Event(type=type_, namespace=namespace, name=name, message="m", data={"data": data} if data else {})


def test_filter_levels_and_namespaces():
    f = EventFilter(min_level="info", namespaces={"osc_rnnt.bench"})
    assert f.matches(_event("warning", namespace="osc_rnnt.bench.runner"))
    assert not f.matches(_event("debug", namespace="osc_rnnt.bench"))
    assert not f.matches(_event("error", namespace="osc_rnnt.decode"))
    assert EventFilter(names={"decode.done"}).matches(_event(name="decode.done"))
    assert not EventFilter(names={"decode.done"}).matches(_event())


def test_progress_conversion():
    progress = convert_log_event(
        _event(progress_action=ProgressAction.DECODING, target="utt0003", done=2, total=5, details="osc")
    )
    assert progress.action == ProgressAction.DECODING
    assert progress.target == "utt0003"
    assert progress.details == "2/5 osc"
    assert str(progress).startswith("Decoding")

    fatal = convert_log_event(_event(progress_action="Error", error_message="budget exceeded"))
    assert fatal.details == "budget exceeded"
    assert fatal.target == "osc_rnnt.decode"


def test_events_without_progress_are_ignored():
    assert convert_log_event(_event()) is None
    assert convert_log_event(_event(utterance="utt0")) is None
    assert convert_log_event(Event(type="info", namespace="x", message="m", data={"data": "text"})) is None


def test_serializer_handles_numpy_and_dataclasses():
    serialize = JSONSerializer()
    counters = DecodeCounters(frames=3, pops=7)
    out = serialize(
        {
            "logp": np.float64(-1.5),
            "labels": np.array([1, 2]),
            "big": np.zeros((10, 10)),
            "counters": counters,
            "path": Path("a/b.rntw"),
            "action": ProgressAction.FINISHED,
        }
    )
    assert out["logp"] == -1.5 and isinstance(out["logp"], float)
    assert out["labels"] == [1, 2]
    assert out["big"] == {"shape": [10, 10], "dtype": "float64", "min": 0.0, "max": 0.0}
    assert out["counters"] == dataclasses.asdict(counters)
    assert out["path"] == "a/b.rntw"
    assert out["action"] == "Finished"
