import math

import numpy as np
import pytest

from osc_rnnt.logging.logger import LoggingConfig
from osc_rnnt.logging.transport import AsyncEventBus
from osc_rnnt.model.types import ModelConfig
from osc_rnnt.model.weights import ModelWeights, init_model
from osc_rnnt.numerics import LstmLayer


@pytest.fixture(scope="function", autouse=True)
def cleanup_event_bus():
    """Reset the AsyncEventBus and logging config between tests"""
    yield
    AsyncEventBus.reset()
    LoggingConfig.reset()


def small_config(
    num_labels: int = 3, hidden: int = 4, input_dim: int = 3, joint: int = 5, layers: int = 1
) -> ModelConfig:
    return ModelConfig(
        input_dim=input_dim,
        enc_layers=layers,
        enc_hidden=hidden,
        pred_layers=layers,
        pred_hidden=hidden,
        joint_dim=joint,
        num_labels=num_labels,
    )


@pytest.fixture
def bias_model():
    """
    Factory for models whose posterior is the same everywhere: all weights zero except
    b_s = log(probs), probs[0] being the blank.
    """

    def make(probs, input_dim: int = 2) -> ModelWeights:
        probs = np.asarray(probs, dtype=np.float64)
        config = small_config(num_labels=len(probs) - 1, hidden=2, input_dim=input_dim, joint=2)
        return ModelWeights.zeros(config).replace(b_s=np.log(probs))

    return make


@pytest.fixture
def random_model():
    """Factory for seeded random models; blank_bias is added to the blank output bias."""

    def make(seed: int, num_labels: int = 3, hidden: int = 4, blank_bias: float = 0.0, **kw):
        return init_model(small_config(num_labels=num_labels, hidden=hidden, **kw), seed, blank_bias)

    return make


@pytest.fixture
def emit_then_blank_model() -> ModelWeights:
    """
    Hand-built model: from the start state label 1 is the most likely output, and once
    label 1 has been emitted the blank dominates every later step.
    """
    config = ModelConfig(
        input_dim=1, enc_layers=1, enc_hidden=1, pred_layers=1, pred_hidden=1, joint_dim=1, num_labels=2
    )
    zeros = ModelWeights.zeros(config)
    pred = LstmLayer(
        w_ih=np.array([[0.0], [0.0], [3.0], [0.0]]),
        w_hh=np.zeros((4, 1)),
        b=np.array([10.0, -10.0, 0.0, 10.0]),
    )
    return zeros.replace(
        embedding=np.array([[0.0], [1.0], [1.0]]),
        pred_lstm=(pred,),
        w_p=np.array([[10.0]]),
        w_z=np.array([[5.0], [0.0], [0.0]]),
        b_s=np.log(np.array([0.3, 0.6, 0.1])),
    )


@pytest.fixture
def features():
    """Factory for seeded standard-normal (T, F) matrices."""

    def make(frames: int, dims: int = 3, seed: int = 0) -> np.ndarray:
        return np.random.default_rng(seed).standard_normal((frames, dims))

    return make


@pytest.fixture
def scalar_lstm_step():
    """
    Element-by-element LSTM step on plain floats (gate rows stacked i, f, g, o), an
    independent reference for the vectorized cell.
    """

    def sigmoid(v: float) -> float:
        return 1.0 / (1.0 + math.exp(-v))

    def step(layer: LstmLayer, x, h_prev, c_prev):
        hidden = len(h_prev)
        pre = []
        for row in range(4 * hidden):
            total = float(layer.b[row])
            for col, xv in enumerate(x):
                total += float(layer.w_ih[row, col]) * float(xv)
            for col, hv in enumerate(h_prev):
                total += float(layer.w_hh[row, col]) * float(hv)
            pre.append(total)
        h, c = [], []
        for j in range(hidden):
            i = sigmoid(pre[j])
            f = sigmoid(pre[hidden + j])
            g = math.tanh(pre[2 * hidden + j])
            o = sigmoid(pre[3 * hidden + j])
            c.append(f * float(c_prev[j]) + i * g)
            h.append(o * math.tanh(c[-1]))
        return h, c

    return step
