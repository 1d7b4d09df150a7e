"""Module for converting log events to progress events."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel

from osc_rnnt.logging.events import Event


class ProgressAction(str, Enum):
    """Progress actions available in the system."""

    LOADING = "Loading"
    DECODING = "Decoding"
    WARMUP = "Warmup"
    BENCHMARKING = "Benchmarking"
    FINISHED = "Finished"
    FATAL_ERROR = "Error"


class ProgressEvent(BaseModel):
    """Represents a progress event converted from a log event."""

    action: ProgressAction
    target: str
    details: Optional[str] = None
    task_name: Optional[str] = None

    def __str__(self) -> str:
        """Format the progress event for display."""
        base = f"{self.action.ljust(12)}. {self.target}"
        if self.details:
            base += f" - {self.details}"
        if self.task_name:
            base = f"[{self.task_name}] {base}"
        return base


def convert_log_event(event: Event) -> Optional[ProgressEvent]:
    """Convert a log event to a progress event if applicable."""

    if not event.data:
        return None

    event_data = event.data.get("data")
    if not isinstance(event_data, dict):
        return None

    progress_action = event_data.get("progress_action")
    if not progress_action:
        return None

    # Progress display is [action] --- [target] [details]
    target = event_data.get("target") or event.namespace
    if progress_action == ProgressAction.FATAL_ERROR:
        details = event_data.get("error_message", "An error occurred")
    else:
        done = event_data.get("done")
        total = event_data.get("total")
        details = event_data.get("details", "")
        if done is not None and total:
            details = f"{done}/{total} {details}".strip()

    return ProgressEvent(
        action=ProgressAction(progress_action),
        target=str(target),
        details=details,
        task_name=event_data.get("task_name"),
    )
