"""
Model parameters, their canonical block order and seeded initialisation.
"""

import dataclasses
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple

import numpy as np

from osc_rnnt.core.exceptions import DimensionError
from osc_rnnt.model.types import BLANK_ID, ModelConfig
from osc_rnnt.numerics import LstmLayer, Matrix, Vector

BlockShape = Tuple[int, ...]


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


def iter_block_shapes(config: ModelConfig) -> Iterator[Tuple[str, BlockShape]]:
    """
    Every parameter block with its shape, in file order: embedding, encoder layers
    bottom-up, predictor layers bottom-up, W_e, W_p, b_z, W_z, b_s.
    """
    d = config.enc_hidden
    j = config.joint_dim
    v = config.vocab_size
    yield "embedding", (v, d)
    for prefix, layers, first_in in (
        ("encoder", config.enc_layers, config.input_dim),
        ("predictor", config.pred_layers, d),
    ):
        for layer in range(layers):
            in_dim = first_in if layer == 0 else d
            yield f"{prefix}[{layer}].w_ih", (4 * d, in_dim)
            yield f"{prefix}[{layer}].w_hh", (4 * d, d)
            yield f"{prefix}[{layer}].b", (4 * d,)
    yield "W_e", (j, d)
    yield "W_p", (j, d)
    yield "b_z", (j,)
    yield "W_z", (v, j)
    yield "b_s", (v,)


def block_shapes(config: ModelConfig) -> List[Tuple[str, BlockShape]]:
    return list(iter_block_shapes(config))


def parameter_count(config: ModelConfig) -> int:
    """Total number of parameters, without enumerating the blocks."""
    d = config.enc_hidden
    j = config.joint_dim
    v = config.vocab_size
    gates = 4 * d

    def lstm(layers: int, first_in: int) -> int:
        return gates * (first_in + d + 1) + (layers - 1) * gates * (2 * d + 1)

    return (
        v * d
        + lstm(config.enc_layers, config.input_dim)
        + lstm(config.pred_layers, d)
        + 2 * j * d
        + j
        + v * j
        + v
    )


@dataclass(frozen=True, eq=False)
class ModelWeights:
    """
    All parameters of the encoder, prediction and joint networks.

    Arrays are copied to float64 and made read-only on construction, so one instance
    can be shared by any number of decode threads.
    """

    config: ModelConfig
    embedding: Matrix
    enc_lstm: Tuple[LstmLayer, ...]
    pred_lstm: Tuple[LstmLayer, ...]
    w_e: Matrix
    w_p: Matrix
    b_z: Vector
    w_z: Matrix
    b_s: Vector

    def __post_init__(self) -> None:
        freeze = lambda name: object.__setattr__(self, name, _frozen(getattr(self, name)))  # noqa: E731
        for name in ("embedding", "w_e", "w_p", "b_z", "w_z", "b_s"):
            freeze(name)
        for name in ("enc_lstm", "pred_lstm"):
            layers = tuple(
                LstmLayer(w_ih=_frozen(layer.w_ih), w_hh=_frozen(layer.w_hh), b=_frozen(layer.b))
                for layer in getattr(self, name)
            )
            object.__setattr__(self, name, layers)
        self._check_shapes()

    def _check_shapes(self) -> None:
        if len(self.enc_lstm) != self.config.enc_layers or len(self.pred_lstm) != self.config.pred_layers:
            raise DimensionError(
                "Layer count does not match the configuration",
                f"encoder {len(self.enc_lstm)}/{self.config.enc_layers}, "
                f"predictor {len(self.pred_lstm)}/{self.config.pred_layers}",
            )
        for (name, shape), (_, arr) in zip(block_shapes(self.config), self.parameter_blocks()):
            if arr.shape != shape:
                raise DimensionError(f"Parameter block {name} has shape {arr.shape}, want {shape}")

    def parameter_blocks(self) -> List[Tuple[str, np.ndarray]]:
        """Named parameter arrays in file order."""
        blocks: List[Tuple[str, np.ndarray]] = [("embedding", self.embedding)]
        for prefix, layers in (("encoder", self.enc_lstm), ("predictor", self.pred_lstm)):
            for i, layer in enumerate(layers):
                blocks.append((f"{prefix}[{i}].w_ih", layer.w_ih))
                blocks.append((f"{prefix}[{i}].w_hh", layer.w_hh))
                blocks.append((f"{prefix}[{i}].b", layer.b))
        blocks.extend(
            [
                ("W_e", self.w_e),
                ("W_p", self.w_p),
                ("b_z", self.b_z),
                ("W_z", self.w_z),
                ("b_s", self.b_s),
            ]
        )
        return blocks

    @classmethod
    def from_blocks(cls, config: ModelConfig, blocks: Dict[str, np.ndarray]) -> "ModelWeights":
        """Assemble weights from a name -> array mapping using the block_shapes names."""

        def layers(prefix: str, count: int) -> Tuple[LstmLayer, ...]:
            return tuple(
                LstmLayer(
                    w_ih=blocks[f"{prefix}[{i}].w_ih"],
                    w_hh=blocks[f"{prefix}[{i}].w_hh"],
                    b=blocks[f"{prefix}[{i}].b"],
                )
                for i in range(count)
            )

        return cls(
            config=config,
            embedding=blocks["embedding"],
            enc_lstm=layers("encoder", config.enc_layers),
            pred_lstm=layers("predictor", config.pred_layers),
            w_e=blocks["W_e"],
            w_p=blocks["W_p"],
            b_z=blocks["b_z"],
            w_z=blocks["W_z"],
            b_s=blocks["b_s"],
        )

    @classmethod
    def zeros(cls, config: ModelConfig) -> "ModelWeights":
        return cls.from_blocks(config, {name: np.zeros(shape) for name, shape in block_shapes(config)})

    def replace(self, **changes) -> "ModelWeights":
        """Copy with some parameters swapped out; shapes are re-validated."""
        return dataclasses.replace(self, **changes)


def init_model(config: ModelConfig, seed: int, blank_bias: float = 0.0) -> ModelWeights:
    """
    Seeded synthetic model: every parameter uniform in [-0.5/sqrt(D), +0.5/sqrt(D)],
    drawn block by block in file order from one generator. blank_bias is added to the
    blank entry of b_s after drawing, so the same seed gives the same other weights.
    """
    bound = 0.5 / math.sqrt(config.enc_hidden)
    rng = np.random.default_rng(seed)
    blocks = {
        name: rng.uniform(-bound, bound, size=shape) for name, shape in block_shapes(config)
    }
    blocks["b_s"][BLANK_ID] += blank_bias
    return ModelWeights.from_blocks(config, blocks)
