"""
ResultLog: append-only JSON lines, one ResultRecord per decoded utterance.
"""

from pathlib import Path
from typing import Dict, Iterable, List

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from osc_rnnt.core.exceptions import ResultLogFormatError


class ResultRecord(BaseModel):
    utterance_id: str
    decoder: str
    beam: int | None = None
    alpha: float | None = None
    expand_beam: float | None = None
    state_beam: float | None = None
    labels: List[int] = Field(default_factory=list)
    logp: float
    """Unnormalized log-probability; -inf when the search produced no finite hypothesis"""
    score: float
    """Length-normalized score used for the final selection"""
    wall_time_ms: float
    audio_duration_ms: int

    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    @property
    def config_label(self) -> str:
        parts = [self.decoder]
        for name in ("beam", "alpha", "expand_beam", "state_beam"):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}={value:g}")
        return " ".join(parts)


def append_results(path: str | Path, records: Iterable[ResultRecord]) -> int:
    """Append records to the log, creating it if needed. Returns the number written."""
    path = Path(path)
    lines = [record.model_dump_json() + "\n" for record in records]
    with path.open("a", encoding="utf-8") as f:
        f.writelines(lines)
    return len(lines)


def read_results(path: str | Path) -> List[ResultRecord]:
    path = Path(path)
    records: List[ResultRecord] = []
    with path.open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append(ResultRecord.model_validate_json(line))
            except ValidationError as e:
                raise ResultLogFormatError(f"Malformed result record at {path}:{lineno}", str(e)) from e
    return records


def index_results(records: Iterable[ResultRecord]) -> Dict[str, ResultRecord]:
    """Last record wins for repeated utterance ids."""
    return {record.utterance_id: record for record in records}
