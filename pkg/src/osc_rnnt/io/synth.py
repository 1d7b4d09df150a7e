import numpy as np

from osc_rnnt.core.exceptions import EmptyInputError
from osc_rnnt.io.feature_file import Features

FRAME_SHIFT_MS = 10


def synth_features(frames: int, dims: int, seed: int, duration_ms: int | None = None) -> Features:
    """
    Standard-normal (T, F) stand-in for log-Mel features; a fixed seed gives identical
    draws. Duration defaults to T frames at a 10 ms shift.
    """
    if frames < 1 or dims < 1:
        raise EmptyInputError("Synthetic features need T >= 1 and F >= 1", f"T={frames} F={dims}")
    if duration_ms is None:
        duration_ms = frames * FRAME_SHIFT_MS
    if duration_ms < 1:
        raise EmptyInputError(f"Audio duration must be positive, got {duration_ms} ms")
    matrix = np.random.default_rng(seed).standard_normal((frames, dims))
    return Features(matrix, duration_ms)
