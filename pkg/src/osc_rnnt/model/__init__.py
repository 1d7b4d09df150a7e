from osc_rnnt.model.network import (
    EncState,
    PredState,
    batched_posterior,
    encode,
    encoder_step,
    initial_enc_state,
    initial_pred_state,
    posterior,
    predictor_step,
    predictor_step_batched,
    project_encoder,
    zero_pred_state,
)
from osc_rnnt.model.types import BLANK_ID, PRESETS, ModelConfig, get_preset
from osc_rnnt.model.weights import (
    ModelWeights,
    block_shapes,
    init_model,
    iter_block_shapes,
    parameter_count,
)

__all__ = [
    "BLANK_ID",
    "PRESETS",
    "EncState",
    "ModelConfig",
    "ModelWeights",
    "PredState",
    "batched_posterior",
    "block_shapes",
    "encode",
    "encoder_step",
    "get_preset",
    "init_model",
    "iter_block_shapes",
    "initial_enc_state",
    "initial_pred_state",
    "parameter_count",
    "posterior",
    "predictor_step",
    "predictor_step_batched",
    "project_encoder",
    "zero_pred_state",
]
