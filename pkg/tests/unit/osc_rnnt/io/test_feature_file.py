import struct

import numpy as np
import pytest

from osc_rnnt.core.exceptions import (
    BadMagicError,
    DimensionError,
    EmptyInputError,
    FormatError,
    InvalidHeaderError,
    NonFiniteValueError,
    TrailingBytesError,
    TruncationError,
    VersionMismatchError,
)
from osc_rnnt.io.feature_file import (
    HEADER_SIZE,
    features_from_bytes,
    features_to_bytes,
    read_features,
    write_features,
)


@pytest.fixture
def frames() -> np.ndarray:
    return np.random.default_rng(0).standard_normal((6, 3)).astype(np.float32).astype(np.float64)


def test_header_layout(frames):
    data = features_to_bytes(frames, 60)
    assert HEADER_SIZE == 18
    assert struct.unpack_from("<4sH3I", data) == (b"RNTF", 1, 6, 3, 60)
    assert len(data) == HEADER_SIZE + 4 * 18


def test_write_read_write_is_byte_identical(tmp_path, frames):
    path = tmp_path / "utt.rntf"
    write_features(path, frames, 60)
    feats = read_features(path)
    np.testing.assert_array_equal(feats.frames, frames)
    assert feats.duration_ms == 60
    assert feats.duration_s == pytest.approx(0.06)
    assert features_to_bytes(feats.frames, feats.duration_ms) == path.read_bytes()


def test_rejects_empty_inputs(frames):
    with pytest.raises(EmptyInputError):
        features_to_bytes(np.zeros((0, 3)), 10)
    with pytest.raises(EmptyInputError):
        features_to_bytes(np.zeros((2, 0)), 10)
    with pytest.raises(EmptyInputError):
        features_to_bytes(frames, 0)
    with pytest.raises(DimensionError):
        features_to_bytes(np.zeros(3), 10)


@pytest.mark.parametrize("offset", [6, 10, 14])
def test_zero_header_fields_are_invalid(frames, offset):
    data = bytearray(features_to_bytes(frames, 60))
    struct.pack_into("<I", data, offset, 0)
    with pytest.raises(InvalidHeaderError):
        features_from_bytes(bytes(data))


def test_format_errors(frames):
    data = features_to_bytes(frames, 60)
    with pytest.raises(BadMagicError):
        features_from_bytes(b"RNTW" + data[4:])
    with pytest.raises(VersionMismatchError):
        features_from_bytes(data[:4] + struct.pack("<H", 9) + data[6:])
    with pytest.raises(TruncationError) as excinfo:
        features_from_bytes(data[:-4])
    assert excinfo.value.block == "frames"
    with pytest.raises(TruncationError) as excinfo:
        features_from_bytes(data[:12])
    assert excinfo.value.block == "header"
    with pytest.raises(TrailingBytesError):
        features_from_bytes(data + b"\x00\x00\x00\x00")


def test_random_corruptions_raise(frames):
    data = features_to_bytes(frames, 60)
    rng = np.random.default_rng(2)
    for cut in rng.integers(0, len(data), size=500):
        with pytest.raises(FormatError):
            features_from_bytes(data[: int(cut)])


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_non_finite_frames_are_rejected(frames, bad):
    data = bytearray(features_to_bytes(frames, 60))
    struct.pack_into("<f", data, HEADER_SIZE + 4 * 4, bad)
    with pytest.raises(NonFiniteValueError) as excinfo:
        features_from_bytes(bytes(data))
    assert "frame 1, dimension 1" in excinfo.value.details

    broken = frames.copy()
    broken[2, 0] = bad
    with pytest.raises(NonFiniteValueError):
        features_to_bytes(broken, 60)
