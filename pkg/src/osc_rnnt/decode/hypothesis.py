"""
Hypotheses, beams, decoder parameters and decode results.
"""

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from osc_rnnt.core.exceptions import EmptyInputError, InvariantViolationError
from osc_rnnt.model.network import PredState

Labels = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Hypothesis:
    """
    A label sequence with its accumulated log-probability.

    Between frames logp is complete (its last factor is a blank probability).
    pred_state is the prediction-network state for exactly `labels`; it may be None
    while a hypothesis waits unexpanded in the reference search.
    parent_index points into the previous frame's beam.
    """

    labels: Labels
    logp: float
    pred_state: PredState | None = None
    parent_index: int | None = None

    def with_logp(self, logp: float) -> "Hypothesis":
        return Hypothesis(self.labels, logp, self.pred_state, self.parent_index)

    @property
    def normalized_score(self) -> float:
        return self.logp / max(len(self.labels), 1)


def ranking_key(hyp: Hypothesis) -> Tuple[float, int, Labels, int]:
    """Higher logp first, then shorter, then lexicographic labels, then lower parent index."""
    parent = hyp.parent_index if hyp.parent_index is not None else -1
    return (-hyp.logp, len(hyp.labels), hyp.labels, parent)


def top_w(candidates: Iterable[Hypothesis], width: int) -> List[Hypothesis]:
    return sorted(candidates, key=ranking_key)[:width]


@dataclass(frozen=True)
class Beam:
    """Score-ordered, width-bounded set of hypotheses."""

    items: Tuple[Hypothesis, ...]
    width: int

    @classmethod
    def select(cls, candidates: Iterable[Hypothesis], width: int) -> "Beam":
        return cls(tuple(top_w(candidates, width)), width)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def label_sets(self) -> Tuple[Labels, ...]:
        return tuple(h.labels for h in self.items)

    def check(self, unique: bool = True) -> None:
        """Raise InvariantViolationError if width, ordering or uniqueness is broken."""
        if len(self.items) > self.width:
            raise InvariantViolationError(
                f"Beam holds {len(self.items)} hypotheses, width is {self.width}"
            )
        for a, b in zip(self.items, self.items[1:]):
            if a.logp < b.logp:
                raise InvariantViolationError("Beam is not ordered by descending logp")
        if unique:
            seen = set()
            for h in self.items:
                if h.labels in seen:
                    raise InvariantViolationError(f"Duplicate hypothesis {list(h.labels)} in beam")
                seen.add(h.labels)


def best_hypothesis(hyps: Sequence[Hypothesis]) -> Hypothesis:
    """
    Best hypothesis by logp / max(|y|, 1); ties go to the shorter sequence,
    then the lexicographically smaller one.
    """
    if not hyps:
        raise EmptyInputError("Cannot select a result from an empty beam")
    return min(hyps, key=lambda h: (-h.normalized_score, len(h.labels), h.labels))


def select_final(hyps: Sequence[Hypothesis]) -> Tuple[Labels, float]:
    best = best_hypothesis(hyps)
    return best.labels, best.normalized_score


class OscParams(BaseModel):
    """Knobs of the one-step constrained search."""

    beam: int = Field(default=5, ge=1)
    alpha: int = Field(default=1, ge=0)
    check_duplicates: bool = True
    """Drop expanded candidates already present in the incoming beam"""
    debug: bool = False
    """Check uniqueness, width and the one-step bound after every frame"""

    model_config = ConfigDict(frozen=True)


class ImprovedParams(BaseModel):
    """Knobs of the pruned reference search. Margins are in the log domain."""

    beam: int = Field(default=5, ge=1)
    expand_beam: float = Field(default=2.3, ge=0.0)
    state_beam: float = Field(default=4.6, ge=0.0)

    model_config = ConfigDict(frozen=True)


@dataclass
class StepStats:
    """Histograms of expansions per surviving hypothesis and prefix length differences."""

    expansion_counts: Counter = field(default_factory=Counter)
    prefix_len_diffs: Counter = field(default_factory=Counter)

    def merge(self, other: "StepStats") -> None:
        self.expansion_counts.update(other.expansion_counts)
        self.prefix_len_diffs.update(other.prefix_len_diffs)

    def is_empty(self) -> bool:
        return not any(self.expansion_counts.values()) and not any(self.prefix_len_diffs.values())


@dataclass
class DecodeCounters:
    """Work done by one decode call."""

    frames: int = 0
    posterior_calls: int = 0
    batched_posterior_calls: int = 0
    rescoring_posterior_calls: int = 0
    predictor_steps: int = 0
    batched_predictor_calls: int = 0
    pops: int = 0
    pushes: int = 0
    max_beam_width: int = 0
    max_local_width: int = 0

    def saw_beam(self, width: int) -> None:
        self.max_beam_width = max(self.max_beam_width, width)


FrameTrace = Tuple[Labels, ...]


@dataclass
class DecodeOutput:
    labels: Labels
    score: float
    """Length-normalised log-probability of the result"""
    logp: float
    """Unnormalised log-probability of the result"""
    frames_processed: int
    wall_time: float
    decoder: str = ""
    step_stats: StepStats | None = None
    counters: DecodeCounters = field(default_factory=DecodeCounters)
    trace: List[FrameTrace] | None = None
    """Beam label sets after each frame, when tracing was requested"""

    @property
    def is_impossible(self) -> bool:
        return math.isinf(self.logp)
