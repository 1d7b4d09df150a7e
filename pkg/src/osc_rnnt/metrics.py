"""
Error rates (PER/WER) and timing statistics (RTF, RT-90).
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from osc_rnnt.core.exceptions import EmptyInputError, InvalidTimingError


@dataclass(frozen=True)
class EditOps:
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0

    @property
    def total(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    def __add__(self, other: "EditOps") -> "EditOps":
        return EditOps(
            self.substitutions + other.substitutions,
            self.insertions + other.insertions,
            self.deletions + other.deletions,
        )


def edit_distance(hyp: Sequence, ref: Sequence) -> EditOps:
    """
    Levenshtein alignment of hyp against ref. Deletions are ref tokens missing from
    hyp, insertions are extra hyp tokens. When several alignments are minimal the
    backtrace prefers substitution, then deletion, then insertion.
    """
    n, m = len(ref), len(hyp)
    dist = np.zeros((n + 1, m + 1), dtype=np.int64)
    dist[:, 0] = np.arange(n + 1)
    dist[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if ref[i - 1] == hyp[j - 1] else 1
            dist[i, j] = min(dist[i - 1, j - 1] + cost, dist[i - 1, j] + 1, dist[i, j - 1] + 1)

    subs = dels = ins = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and dist[i, j] == dist[i - 1, j - 1]:
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and dist[i, j] == dist[i - 1, j - 1] + 1:
            subs += 1
            i, j = i - 1, j - 1
        elif i > 0 and dist[i, j] == dist[i - 1, j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return EditOps(substitutions=subs, insertions=ins, deletions=dels)


def error_rate(ops: EditOps, ref_len: int) -> float:
    """total / ref_len; an empty reference divides by 1."""
    return ops.total / max(ref_len, 1)


@dataclass(frozen=True)
class CorpusErrorRate:
    ops: EditOps
    ref_len: int
    utterances: int
    empty_refs: int
    """Entries whose reference is empty (their edits count against a length of 1)"""

    @property
    def rate(self) -> float:
        return self.ops.total / max(self.ref_len, 1)


def corpus_error_rate(pairs: Iterable[Tuple[Sequence, Sequence]]) -> CorpusErrorRate:
    """Pooled edits over pooled reference length for (hyp, ref) pairs."""
    ops = EditOps()
    ref_len = utterances = empty = 0
    for hyp, ref in pairs:
        ops = ops + edit_distance(hyp, ref)
        ref_len += len(ref)
        utterances += 1
        if len(ref) == 0:
            empty += 1
    return CorpusErrorRate(ops=ops, ref_len=ref_len, utterances=utterances, empty_refs=empty)


@dataclass(frozen=True)
class TimingSample:
    wall_time: float
    """Seconds spent decoding"""
    audio_duration: float
    """Seconds of audio"""


def rtf(s: TimingSample) -> float:
    """Real-time factor: processing time over audio duration."""
    if s.audio_duration <= 0 or s.wall_time <= 0:
        raise InvalidTimingError(
            "Timing samples need positive durations",
            f"wall_time={s.wall_time} audio_duration={s.audio_duration}",
        )
    return s.wall_time / s.audio_duration


def mean_rtf(samples: Iterable[TimingSample]) -> float:
    values = [rtf(s) for s in samples]
    if not values:
        raise EmptyInputError("mean_rtf needs at least one sample")
    return float(np.mean(values))


def percentile(values: Sequence[float], p: float) -> float:
    """Nearest-rank percentile: the ceil(p/100 * n)-th smallest value, rank clamped to [1, n]."""
    if len(values) == 0:
        raise EmptyInputError("percentile needs at least one value")
    if not 0 <= p <= 100:
        raise ValueError(f"percentile p must be in [0, 100], got {p}")
    ordered = sorted(values)
    rank = min(max(math.ceil(p * len(ordered) / 100), 1), len(ordered))
    return ordered[rank - 1]


def doubling_ratios(series: Mapping[int, float]) -> List[Tuple[int, int, float]]:
    """
    time(W_next) / time(W) for consecutive beam widths of one decoder, as
    (W, W_next, ratio) triples in increasing W.
    """
    widths = sorted(series)
    return [
        (lo, hi, series[hi] / series[lo]) for lo, hi in zip(widths, widths[1:]) if series[lo] > 0
    ]


def span_ratio(series: Dict[int, float]) -> float | None:
    """time(largest W) / time(smallest W), or None with fewer than two widths."""
    if len(series) < 2:
        return None
    widths = sorted(series)
    return series[widths[-1]] / series[widths[0]]
