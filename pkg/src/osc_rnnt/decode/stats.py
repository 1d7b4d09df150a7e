"""
Aggregation of the reference-search instrumentation into percentage tables.
"""

from collections import Counter
from typing import Dict, Iterable

from pydantic import BaseModel

from osc_rnnt.core.exceptions import EmptyInputError
from osc_rnnt.decode.hypothesis import StepStats


class StepRatioTable(BaseModel):
    """
    Percentages per bucket. The expansion table leaves out the zero-expansion bucket,
    whose raw count is kept in zero_expansions.
    """

    expansions: Dict[int, float]
    prefix_diffs: Dict[int, float]
    expansion_total: int
    prefix_total: int
    zero_expansions: int


def _percentages(hist: Counter) -> Dict[int, float]:
    total = sum(hist.values())
    if total == 0:
        return {}
    return {bucket: 100.0 * hist[bucket] / total for bucket in sorted(hist) if hist[bucket]}


def aggregate_step_stats(stats: Iterable[StepStats]) -> StepRatioTable:
    merged = StepStats()
    for item in stats:
        merged.merge(item)
    if merged.is_empty():
        raise EmptyInputError("No expansion or prefix statistics to aggregate")

    expansions = Counter({k: v for k, v in merged.expansion_counts.items() if k > 0})
    return StepRatioTable(
        expansions=_percentages(expansions),
        prefix_diffs=_percentages(merged.prefix_len_diffs),
        expansion_total=sum(expansions.values()),
        prefix_total=sum(merged.prefix_len_diffs.values()),
        zero_expansions=merged.expansion_counts.get(0, 0),
    )
