"""
TranscriptFile: UTF-8 text, one "utterance_id<TAB>labels" line per utterance, labels
space-separated integers in [1, |K|].
"""

from pathlib import Path
from typing import Dict, Iterable, Tuple

from osc_rnnt.core.exceptions import TranscriptFormatError
from osc_rnnt.decode.hypothesis import Labels


def parse_transcript_line(line: str, num_labels: int | None = None, where: str = "") -> Tuple[str, Labels]:
    utt_id, sep, rest = line.rstrip("\r\n").partition("\t")
    if not sep or not utt_id:
        raise TranscriptFormatError(f"Malformed transcript line{where}", repr(line))
    try:
        labels = tuple(int(tok) for tok in rest.split())
    except ValueError:
        raise TranscriptFormatError(f"Non-integer label{where}", repr(line)) from None
    for label in labels:
        if label < 1 or (num_labels is not None and label > num_labels):
            raise TranscriptFormatError(
                f"Label {label} out of range{where}",
                f"labels must lie in [1, {num_labels if num_labels is not None else '|K|'}]",
            )
    return utt_id, labels


def read_transcripts(path: str | Path, num_labels: int | None = None) -> Dict[str, Labels]:
    """Read a transcript file into an ordered {utterance_id: labels} mapping."""
    path = Path(path)
    out: Dict[str, Labels] = {}
    with path.open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            utt_id, labels = parse_transcript_line(line, num_labels, where=f" at {path}:{lineno}")
            if utt_id in out:
                raise TranscriptFormatError(f"Duplicate utterance id '{utt_id}' at {path}:{lineno}")
            out[utt_id] = labels
    return out


def write_transcripts(path: str | Path, entries: Iterable[Tuple[str, Labels]]) -> None:
    lines = []
    for utt_id, labels in entries:
        if not utt_id or "\t" in utt_id or "\n" in utt_id:
            raise TranscriptFormatError(f"Utterance id {utt_id!r} cannot be written")
        if any(label < 1 for label in labels):
            raise TranscriptFormatError(f"Transcript for '{utt_id}' contains the blank or a negative label")
        lines.append(f"{utt_id}\t{' '.join(str(label) for label in labels)}\n")
    Path(path).write_text("".join(lines), encoding="utf-8")
