"""
Dense linear algebra and log-domain primitives shared by the model and the decoders.

All arithmetic is float64. Probabilities are natural-log values in [-inf, 0];
-inf encodes probability zero.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.typing as npt
from scipy.special import expit
from scipy.special import log_softmax as _scipy_log_softmax
from scipy.special import logsumexp as _scipy_logsumexp

from osc_rnnt.core.exceptions import DimensionError, EmptyInputError

Matrix = npt.NDArray[np.float64]
"""Row-major 2-D float64 array"""

Vector = npt.NDArray[np.float64]

NEG_INF = float("-inf")


def as_vector(values, name: str = "vector") -> Vector:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional", f"got shape {arr.shape}")
    return arr


def matvec(m: Matrix, v: Vector) -> Vector:
    """Matrix-vector product with shape checking."""
    m = np.asarray(m, dtype=np.float64)
    v = as_vector(v)
    if m.ndim != 2:
        raise DimensionError("matvec expects a 2-D matrix", f"got shape {m.shape}")
    if v.shape[0] != m.shape[1]:
        raise DimensionError(
            "matvec dimension mismatch",
            f"matrix has {m.shape[1]} columns, vector has length {v.shape[0]}",
        )
    return m @ v


@dataclass(frozen=True, eq=False)
class LstmLayer:
    """
    One LSTM layer. Gate rows are stacked in the order i, f, g, o:
    w_ih is (4H, in), w_hh is (4H, H), b is (4H,).
    """

    w_ih: Matrix
    w_hh: Matrix
    b: Vector

    @property
    def hidden(self) -> int:
        return self.w_hh.shape[1]

    @property
    def input_dim(self) -> int:
        return self.w_ih.shape[1]


def _check_layer(layer: LstmLayer, x: npt.NDArray, h_prev: npt.NDArray, c_prev: npt.NDArray) -> None:
    hidden = layer.hidden
    if layer.w_ih.shape[0] != 4 * hidden or layer.w_hh.shape != (4 * hidden, hidden):
        raise DimensionError(
            "LSTM weights are inconsistent",
            f"w_ih {layer.w_ih.shape}, w_hh {layer.w_hh.shape}",
        )
    if layer.b.shape != (4 * hidden,):
        raise DimensionError("LSTM bias has the wrong length", f"got {layer.b.shape}, want ({4 * hidden},)")
    if x.shape[-1] != layer.input_dim:
        raise DimensionError(
            "LSTM input has the wrong length", f"got {x.shape[-1]}, want {layer.input_dim}"
        )
    if h_prev.shape[-1] != hidden or c_prev.shape[-1] != hidden:
        raise DimensionError(
            "LSTM state has the wrong size",
            f"h {h_prev.shape}, c {c_prev.shape}, hidden {hidden}",
        )


def lstm_cell_step(
    layer: LstmLayer, x: npt.NDArray, h_prev: npt.NDArray, c_prev: npt.NDArray
) -> Tuple[npt.NDArray, npt.NDArray]:
    """
    Standard LSTM cell (forget gate, no peepholes).

    Accepts a single step (1-D x, h, c) or a batch (2-D, one row per sequence);
    the batched form is what the one-step constrained search uses for blank rescoring.
    """
    x = np.asarray(x, dtype=np.float64)
    h_prev = np.asarray(h_prev, dtype=np.float64)
    c_prev = np.asarray(c_prev, dtype=np.float64)
    _check_layer(layer, x, h_prev, c_prev)
    if x.ndim != h_prev.ndim or h_prev.shape != c_prev.shape:
        raise DimensionError(
            "LSTM input and state batch shapes differ",
            f"x {x.shape}, h {h_prev.shape}, c {c_prev.shape}",
        )

    gates = x @ layer.w_ih.T + h_prev @ layer.w_hh.T + layer.b
    i, f, g, o = np.split(gates, 4, axis=-1)
    i = expit(i)
    f = expit(f)
    g = np.tanh(g)
    o = expit(o)
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c


def log_softmax(logits: npt.NDArray) -> npt.NDArray:
    """Log-softmax over the last axis."""
    logits = np.asarray(logits, dtype=np.float64)
    if logits.size == 0 or logits.shape[-1] == 0:
        raise EmptyInputError("log_softmax needs at least one logit")
    return _scipy_log_softmax(logits, axis=-1)


def log_sum_exp(terms) -> float:
    """ln sum(exp(terms)) with max-shift stabilisation; all -inf gives -inf."""
    arr = np.asarray(terms, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyInputError("log_sum_exp needs at least one term")
    if np.max(arr) == NEG_INF:
        return NEG_INF
    return float(_scipy_logsumexp(arr))


def log_add(a: float, b: float) -> float:
    """Two-term log_sum_exp for the prefix-search accumulation."""
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    return float(np.logaddexp(a, b))
