"""
Model configuration and the named architecture presets.
"""

from typing import Dict

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from osc_rnnt.core.exceptions import ModelConfigError

BLANK_ID = 0


class ModelConfig(BaseModel):
    """
    Shape of an RNN-T model. Label 0 is the blank; labels 1..num_labels are real outputs,
    so the posterior has num_labels + 1 entries.
    """

    input_dim: int
    enc_layers: int
    enc_hidden: int
    pred_layers: int
    pred_hidden: int
    joint_dim: int
    num_labels: int

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def check_shape(self) -> "ModelConfig":
        for field in (
            "input_dim",
            "enc_layers",
            "enc_hidden",
            "pred_layers",
            "pred_hidden",
            "joint_dim",
            "num_labels",
        ):
            if getattr(self, field) < 1:
                raise ValueError(f"{field} must be >= 1")
        if self.pred_hidden != self.enc_hidden:
            raise ValueError(
                f"pred_hidden ({self.pred_hidden}) must equal enc_hidden ({self.enc_hidden})"
            )
        return self

    @property
    def vocab_size(self) -> int:
        return self.num_labels + 1

    @property
    def blank_id(self) -> int:
        return BLANK_ID

    @classmethod
    def create(cls, **fields: int) -> "ModelConfig":
        """Build a config, turning validation failures into ModelConfigError."""
        try:
            return cls(**fields)
        except ValidationError as e:
            raise ModelConfigError("Invalid model configuration", str(e)) from e

    def describe(self) -> str:
        return (
            f"F={self.input_dim} enc={self.enc_layers}x{self.enc_hidden} "
            f"pred={self.pred_layers}x{self.pred_hidden} joint={self.joint_dim} |K|={self.num_labels}"
        )


PRESETS: Dict[str, ModelConfig] = {
    "tiny": ModelConfig(
        input_dim=4,
        enc_layers=1,
        enc_hidden=8,
        pred_layers=1,
        pred_hidden=8,
        joint_dim=8,
        num_labels=3,
    ),
    # 40-dim filter banks, 3-layer encoder / 1-layer predictor with 256 cells, 61 phones
    "timit": ModelConfig(
        input_dim=40,
        enc_layers=3,
        enc_hidden=256,
        pred_layers=1,
        pred_hidden=256,
        joint_dim=256,
        num_labels=61,
    ),
    # 80-dim filter banks, 5-layer encoder / 2-layer predictor with 512 cells
    "librispeech": ModelConfig(
        input_dim=80,
        enc_layers=5,
        enc_hidden=512,
        pred_layers=2,
        pred_hidden=512,
        joint_dim=512,
        num_labels=256,
    ),
}


def get_preset(name: str) -> ModelConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ModelConfigError(
            f"Unknown model preset '{name}'", f"available presets: {', '.join(PRESETS)}"
        ) from None
