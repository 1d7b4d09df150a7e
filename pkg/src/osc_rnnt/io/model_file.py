"""
ModelFile: "RNTW", u16 version, seven u32 config fields, then float32 parameter
blocks in block_shapes() order. Little-endian throughout; see docs/file_formats.md.
"""

import math
import struct
from pathlib import Path
from typing import Dict

import numpy as np

from osc_rnnt.core.exceptions import (
    BadMagicError,
    InvalidHeaderError,
    ModelConfigError,
    NonFiniteValueError,
    TrailingBytesError,
    TruncationError,
    VersionMismatchError,
)
from osc_rnnt.model.types import ModelConfig
from osc_rnnt.model.weights import ModelWeights, iter_block_shapes, parameter_count

MODEL_MAGIC = b"RNTW"
MODEL_VERSION = 1
_HEADER = struct.Struct("<4sH7I")
HEADER_SIZE = _HEADER.size  # 34 bytes

_F32 = np.dtype("<f4")


def _check_finite(values: np.ndarray, block: str, source: str) -> None:
    bad = np.count_nonzero(~np.isfinite(values))
    if bad:
        raise NonFiniteValueError(
            f"{source} holds {bad} non-finite value(s) in block {block}", block=block
        )


def model_to_bytes(w: ModelWeights) -> bytes:
    c = w.config
    header = _HEADER.pack(
        MODEL_MAGIC,
        MODEL_VERSION,
        c.input_dim,
        c.enc_layers,
        c.enc_hidden,
        c.pred_layers,
        c.pred_hidden,
        c.joint_dim,
        c.num_labels,
    )
    stored = []
    for name, arr in w.parameter_blocks():
        block = arr.astype(_F32)
        _check_finite(block, name, "model")
        stored.append(block.tobytes(order="C"))
    return header + b"".join(stored)


def model_from_bytes(data: bytes, source: str = "<bytes>") -> ModelWeights:
    if len(data) < 4 or data[:4] != MODEL_MAGIC:
        raise BadMagicError(f"{source} is not a model file", f"expected magic {MODEL_MAGIC!r}")
    if len(data) < HEADER_SIZE:
        raise TruncationError(
            f"{source} ends inside the header", f"{len(data)} of {HEADER_SIZE} bytes", block="header"
        )
    _, version, f, enc_layers, d, pred_layers, pred_hidden, joint, labels = _HEADER.unpack_from(data)
    if version != MODEL_VERSION:
        raise VersionMismatchError(
            f"{source} has model format version {version}", f"supported version is {MODEL_VERSION}"
        )
    try:
        config = ModelConfig.create(
            input_dim=f,
            enc_layers=enc_layers,
            enc_hidden=d,
            pred_layers=pred_layers,
            pred_hidden=pred_hidden,
            joint_dim=joint,
            num_labels=labels,
        )
    except ModelConfigError as e:
        raise InvalidHeaderError(f"{source} describes an invalid model", e.details) from e

    expected = HEADER_SIZE + 4 * parameter_count(config)
    offset = HEADER_SIZE
    blocks: Dict[str, np.ndarray] = {}
    # A header may declare more blocks than the file could ever hold; stop at the first short one
    for name, shape in iter_block_shapes(config):
        count = math.prod(shape)
        end = offset + 4 * count
        if end > len(data):
            raise TruncationError(
                f"{source} is truncated in block {name}",
                f"file has {len(data)} bytes, {expected} expected",
                block=name,
            )
        values = np.frombuffer(data, dtype=_F32, count=count, offset=offset)
        _check_finite(values, name, source)
        blocks[name] = values.astype(np.float64).reshape(shape)
        offset = end
    if offset != len(data):
        raise TrailingBytesError(
            f"{source} has {len(data) - offset} bytes after the last block",
        )
    return ModelWeights.from_blocks(config, blocks)


def write_model(path: str | Path, w: ModelWeights) -> None:
    Path(path).write_bytes(model_to_bytes(w))


def read_model(path: str | Path) -> ModelWeights:
    path = Path(path)
    return model_from_bytes(path.read_bytes(), source=str(path))
