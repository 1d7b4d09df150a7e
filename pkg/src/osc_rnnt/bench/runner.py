"""
Sequential wall-clock benchmark over a grid of decoder configurations.

Every utterance is decoded R times and the best time is kept; RT-90 and mean RTF
are computed from those per-utterance best times.
"""

import time
from dataclasses import dataclass
from typing import Callable, Dict, Generic, List, Mapping, Sequence, Tuple, TypeVar

from pydantic import BaseModel, Field

from osc_rnnt.config import BenchSettings, DecoderSettings
from osc_rnnt.core.exceptions import DataMismatchError, DecoderSpecError, EmptyInputError
from osc_rnnt.decode.factory import DECODER_OPTIONS, DecoderSpec, run_decoder
from osc_rnnt.decode.hypothesis import DecodeOutput, Labels
from osc_rnnt.event_progress import ProgressAction
from osc_rnnt.io.feature_file import Features
from osc_rnnt.logging.logger import get_logger
from osc_rnnt.logging.tracing import telemetry
from osc_rnnt.metrics import (
    TimingSample,
    corpus_error_rate,
    doubling_ratios,
    mean_rtf,
    percentile,
    rtf,
    span_ratio,
)
from osc_rnnt.model.network import encode
from osc_rnnt.model.weights import ModelWeights

logger = get_logger(__name__)

R = TypeVar("R")

Utterance = Tuple[str, Features]


def timer_resolution() -> float:
    return time.get_clock_info("perf_counter").resolution


@dataclass
class TimedResult(Generic[R]):
    result: R
    best: float
    """Fastest of the timed repetitions, in seconds"""
    times: List[float]
    ticks: float
    """best expressed in perf_counter resolution units"""


def time_decode(fn: Callable[[], R], repeats: int, warmup: bool = True) -> TimedResult[R]:
    """Best-of-R wall time of fn(); the optional warmup call is not timed."""
    if repeats < 1:
        raise EmptyInputError(f"repeats must be >= 1, got {repeats}")
    if warmup:
        fn()
    times: List[float] = []
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    best = min(times)
    return TimedResult(result=result, best=best, times=times, ticks=best / timer_resolution())


class BenchCell(BaseModel):
    """One (decoder, W, alpha or margins) configuration measured over the whole corpus."""

    decoder: str
    label: str
    beam: int | None = None
    alpha: int | None = None
    expand_beam: float | None = None
    state_beam: float | None = None
    utterances: int
    rt90: float
    mean_rtf: float
    total_time: float
    """Sum of per-utterance best times, in seconds"""
    error_rate: float | None = None
    empty_refs: int = 0
    low_tick_utterances: List[str] = Field(default_factory=list)

    @property
    def series_key(self) -> str:
        """Configuration without the beam width; cells sharing it form one W series."""
        parts = [self.decoder]
        if self.alpha is not None:
            parts.append(f"alpha={self.alpha}")
        if self.expand_beam is not None:
            parts.append(f"expand_beam={self.expand_beam:g}")
        if self.state_beam is not None:
            parts.append(f"state_beam={self.state_beam:g}")
        return " ".join(parts)


class DoublingRow(BaseModel):
    series: str
    beam: int
    next_beam: int
    ratio: float


class BenchReport(BaseModel):
    cells: List[BenchCell]
    doubling: List[DoublingRow] = Field(default_factory=list)
    span: Dict[str, float] = Field(default_factory=dict)
    """time(largest W) / time(smallest W) per series"""
    repeats: int
    warmup: bool
    include_encoder: bool
    timer_resolution: float
    warnings: List[str] = Field(default_factory=list)

    def cell(self, decoder: str, beam: int | None = None, alpha: int | None = None) -> BenchCell:
        for cell in self.cells:
            if cell.decoder == decoder and cell.beam == beam and cell.alpha == alpha:
                return cell
        raise KeyError((decoder, beam, alpha))


def bench_grid(
    decoders: Sequence[str],
    beams: Sequence[int],
    alphas: Sequence[int],
    defaults: DecoderSettings | None = None,
) -> List[DecoderSpec]:
    """Expand the requested grid into resolved decoder specs, one per distinct configuration."""
    defaults = defaults or DecoderSettings()
    specs: List[DecoderSpec] = []
    for name in decoders:
        options = DECODER_OPTIONS.get(name)
        if options is None:
            raise DecoderSpecError(f"Unknown decoder '{name}' in benchmark grid")
        widths = beams if "beam" in options else [None]
        caps = alphas if "alpha" in options else [None]
        for beam in widths:
            for alpha in caps:
                specs.append(DecoderSpec.create(name=name, beam=beam, alpha=alpha).resolved(defaults))
    if not specs:
        raise EmptyInputError("Benchmark grid is empty")
    return specs


def _error_rate(
    outputs: Sequence[Tuple[str, Labels]], transcripts: Mapping[str, Labels] | None
) -> Tuple[float | None, int]:
    if transcripts is None:
        return None, 0
    missing = [utt_id for utt_id, _ in outputs if utt_id not in transcripts]
    if missing:
        raise DataMismatchError(
            "Transcripts are missing for some benchmark utterances", missing=missing
        )
    corpus = corpus_error_rate((labels, transcripts[utt_id]) for utt_id, labels in outputs)
    return corpus.rate, corpus.empty_refs


@telemetry.traced("bench.run")
def run_bench(
    w: ModelWeights,
    utterances: Sequence[Utterance],
    specs: Sequence[DecoderSpec],
    *,
    settings: BenchSettings | None = None,
    decoder_settings: DecoderSettings | None = None,
    transcripts: Mapping[str, Labels] | None = None,
) -> BenchReport:
    """
    Time every configuration in `specs` over all utterances, strictly one decode at a time.
    """
    settings = settings or BenchSettings()
    decoder_settings = decoder_settings or DecoderSettings()
    if not utterances:
        raise EmptyInputError("Benchmark needs at least one utterance")
    if settings.repeats < 1:
        raise EmptyInputError(f"repeats must be >= 1, got {settings.repeats}")

    encoded = None if settings.include_encoder else [encode(w, f.frames) for _, f in utterances]
    resolution = timer_resolution()
    cells: List[BenchCell] = []
    warnings: List[str] = []

    for index, spec in enumerate(specs):
        logger.info(
            f"Benchmarking {spec.label}",
            data={
                "progress_action": ProgressAction.BENCHMARKING,
                "target": spec.label,
                "done": index,
                "total": len(specs),
                "task_name": "bench",
            },
        )

        def decode_fn(i: int) -> Callable[[], DecodeOutput]:
            features = utterances[i][1].frames
            enc = encoded[i] if encoded is not None else None
            return lambda: run_decoder(
                spec, w, features, encoded=enc, settings=decoder_settings
            )

        if settings.warmup:
            logger.info(
                f"Warming up {spec.label}",
                data={
                    "progress_action": ProgressAction.WARMUP,
                    "target": spec.label,
                    "task_name": "bench",
                },
            )
            for i in range(len(utterances)):
                decode_fn(i)()

        samples: List[TimingSample] = []
        hyps: List[Tuple[str, Labels]] = []
        low_ticks: List[str] = []
        for i, (utt_id, features) in enumerate(utterances):
            timed = time_decode(decode_fn(i), settings.repeats, warmup=False)
            samples.append(TimingSample(wall_time=timed.best, audio_duration=features.duration_s))
            hyps.append((utt_id, timed.result.labels))
            if timed.ticks < settings.min_timer_ticks:
                low_ticks.append(utt_id)

        rate, empty = _error_rate(hyps, transcripts)
        cells.append(
            BenchCell(
                decoder=spec.name,
                label=spec.label,
                beam=spec.beam,
                alpha=spec.alpha,
                expand_beam=spec.expand_beam,
                state_beam=spec.state_beam,
                utterances=len(samples),
                rt90=percentile([rtf(s) for s in samples], 90),
                mean_rtf=mean_rtf(samples),
                total_time=sum(s.wall_time for s in samples),
                error_rate=rate,
                empty_refs=empty,
                low_tick_utterances=low_ticks,
            )
        )
        if low_ticks:
            warnings.append(
                f"{spec.label}: {len(low_ticks)} utterance(s) took fewer than "
                f"{settings.min_timer_ticks} timer ticks ({resolution:.2e}s resolution)"
            )

    series: Dict[str, Dict[int, float]] = {}
    for cell in cells:
        if cell.beam is not None:
            series.setdefault(cell.series_key, {})[cell.beam] = cell.total_time
    doubling = [
        DoublingRow(series=key, beam=lo, next_beam=hi, ratio=ratio)
        for key, times in series.items()
        for lo, hi, ratio in doubling_ratios(times)
    ]
    span = {key: ratio for key, times in series.items() if (ratio := span_ratio(times)) is not None}

    report = BenchReport(
        cells=cells,
        doubling=doubling,
        span=span,
        repeats=settings.repeats,
        warmup=settings.warmup,
        include_encoder=settings.include_encoder,
        timer_resolution=resolution,
        warnings=warnings,
    )
    for message in warnings:
        logger.warning(message)
    logger.info(
        "Benchmark finished",
        data={
            "progress_action": ProgressAction.FINISHED,
            "target": "bench",
            "done": len(specs),
            "total": len(specs),
            "task_name": "bench",
        },
    )
    return report
