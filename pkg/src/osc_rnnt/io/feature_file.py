"""
FeatureFile: "RNTF", u16 version, u32 T, u32 F, u32 audio duration in ms, then T*F
float32 values row-major. Little-endian throughout.
"""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from osc_rnnt.core.exceptions import (
    BadMagicError,
    DimensionError,
    EmptyInputError,
    InvalidHeaderError,
    NonFiniteValueError,
    TrailingBytesError,
    TruncationError,
    VersionMismatchError,
)
from osc_rnnt.numerics import Matrix

FEATURE_MAGIC = b"RNTF"
FEATURE_VERSION = 1
_HEADER = struct.Struct("<4sH3I")
HEADER_SIZE = _HEADER.size  # 18 bytes
_U32_MAX = 2**32 - 1

_F32 = np.dtype("<f4")


@dataclass(frozen=True, eq=False)
class Features:
    frames: Matrix
    """(T, F) float64"""
    duration_ms: int

    @property
    def duration_s(self) -> float:
        return self.duration_ms / 1000.0


def _check_finite(values: np.ndarray, source: str) -> None:
    """values is the (T, F) float32 matrix as stored."""
    bad = np.argwhere(~np.isfinite(values))
    if len(bad):
        row, col = bad[0]
        raise NonFiniteValueError(
            f"{source} holds {len(bad)} non-finite value(s)",
            f"first at frame {row}, dimension {col}",
            block="frames",
        )


def features_to_bytes(frames: Matrix, duration_ms: int) -> bytes:
    arr = np.asarray(frames, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError("Features must be a T x F matrix", f"got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise EmptyInputError("Cannot write an utterance with zero frames")
    if arr.shape[1] == 0:
        raise EmptyInputError("Cannot write features with zero dimensions")
    if not 0 < duration_ms <= _U32_MAX:
        raise EmptyInputError(f"Audio duration must be positive, got {duration_ms} ms")
    stored = arr.astype(_F32)
    _check_finite(stored, "features")
    header = _HEADER.pack(FEATURE_MAGIC, FEATURE_VERSION, arr.shape[0], arr.shape[1], duration_ms)
    return header + stored.tobytes(order="C")


def features_from_bytes(data: bytes, source: str = "<bytes>") -> Features:
    if len(data) < 4 or data[:4] != FEATURE_MAGIC:
        raise BadMagicError(f"{source} is not a feature file", f"expected magic {FEATURE_MAGIC!r}")
    if len(data) < HEADER_SIZE:
        raise TruncationError(
            f"{source} ends inside the header", f"{len(data)} of {HEADER_SIZE} bytes", block="header"
        )
    _, version, frames, dims, duration_ms = _HEADER.unpack_from(data)
    if version != FEATURE_VERSION:
        raise VersionMismatchError(
            f"{source} has feature format version {version}", f"supported version is {FEATURE_VERSION}"
        )
    if frames == 0 or dims == 0 or duration_ms == 0:
        raise InvalidHeaderError(
            f"{source} has an empty header field", f"T={frames} F={dims} duration_ms={duration_ms}"
        )
    expected = HEADER_SIZE + 4 * frames * dims
    if len(data) < expected:
        raise TruncationError(
            f"{source} is truncated in block frames",
            f"file has {len(data)} bytes, {expected} expected",
            block="frames",
        )
    if len(data) > expected:
        raise TrailingBytesError(f"{source} has {len(data) - expected} bytes after the frames")
    values = np.frombuffer(data, dtype=_F32, count=frames * dims, offset=HEADER_SIZE).reshape(frames, dims)
    _check_finite(values, source)
    return Features(values.astype(np.float64), duration_ms)


def write_features(path: str | Path, frames: Matrix, duration_ms: int) -> None:
    Path(path).write_bytes(features_to_bytes(frames, duration_ms))


def read_features(path: str | Path) -> Features:
    path = Path(path)
    return features_from_bytes(path.read_bytes(), source=str(path))
