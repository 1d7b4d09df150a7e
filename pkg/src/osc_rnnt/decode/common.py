import numpy as np

from osc_rnnt.core.exceptions import DimensionError, EmptyInputError
from osc_rnnt.model.network import encode
from osc_rnnt.model.weights import ModelWeights
from osc_rnnt.numerics import Matrix


def encoder_output(w: ModelWeights, features: Matrix | None, encoded: Matrix | None) -> Matrix:
    """Use precomputed encoder output when given, otherwise run the encoder."""
    if encoded is None:
        if features is None:
            raise EmptyInputError("Either features or encoder output is required")
        return encode(w, features)
    enc = np.asarray(encoded, dtype=np.float64)
    if enc.ndim != 2 or enc.shape[1] != w.config.enc_hidden:
        raise DimensionError(
            "Encoder output must be a T x D matrix", f"got {enc.shape}, D={w.config.enc_hidden}"
        )
    if enc.shape[0] == 0:
        raise EmptyInputError("Utterance has no frames")
    return enc
