"""LSTM and BiLSTM primitives with hand-written backward passes.

Parameters for one direction live in a dict with per-gate weights:
``W_*`` (input-to-hidden), ``U_*`` (hidden-to-hidden) and ``b_*`` for the
input (i), forget (f), cell (g) and output (o) gates.  Internally the
sigmoid gates are stacked so a whole sequence needs one input projection
up front and one recurrent matmul per step; sequences are float64 and
every forward returns the cache its backward needs.
"""

import numpy as np

GATES = ("i", "f", "g", "o")
# Stacking order groups the three sigmoid gates ahead of the tanh gate.
_STACK = ("i", "f", "o", "g")
LSTM_PARAM_NAMES = tuple(
    f"{kind}_{gate}" for gate in GATES for kind in ("W", "U", "b")
)


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def init_lstm_params(input_dim: int, hidden: int, rng) -> dict[str, np.ndarray]:
    scale = 1.0 / np.sqrt(hidden)
    params = {}
    for gate in GATES:
        params[f"W_{gate}"] = rng.uniform(-scale, scale, size=(hidden, input_dim))
        params[f"U_{gate}"] = rng.uniform(-scale, scale, size=(hidden, hidden))
        params[f"b_{gate}"] = np.zeros(hidden)
    return params


def _stacked(params):
    W = np.concatenate([params[f"W_{g}"] for g in _STACK], axis=0)
    U = np.concatenate([params[f"U_{g}"] for g in _STACK], axis=0)
    b = np.concatenate([params[f"b_{g}"] for g in _STACK])
    return W, U, b


def lstm_step(x_t, h_prev, c_prev, params):
    """One LSTM cell update.

    i/f/o gates pass through the sigmoid, the candidate g through tanh;
    c_t = f*c_prev + i*g and h_t = o*tanh(c_t), all products elementwise.
    Returns (h_t, c_t, gate_cache).
    """
    i = sigmoid(params["W_i"] @ x_t + params["U_i"] @ h_prev + params["b_i"])
    f = sigmoid(params["W_f"] @ x_t + params["U_f"] @ h_prev + params["b_f"])
    g = np.tanh(params["W_g"] @ x_t + params["U_g"] @ h_prev + params["b_g"])
    o = sigmoid(params["W_o"] @ x_t + params["U_o"] @ h_prev + params["b_o"])
    c_t = f * c_prev + i * g
    h_t = o * np.tanh(c_t)
    return h_t, c_t, (i, f, g, o)


def lstm_forward(X: np.ndarray, params) -> tuple[np.ndarray, tuple]:
    """Run a sequence (n, d) through the cell from zero initial state.
    Returns per-step hidden states (n, h) and the backward cache."""
    n = X.shape[0]
    hidden = params["b_i"].shape[0]
    h3 = 3 * hidden
    W, U, b = _stacked(params)
    Z = X @ W.T + b  # input projections for the whole sequence
    H = np.empty((n, hidden))
    H_prev = np.empty((n, hidden))
    C = np.empty((n, hidden))
    C_prev = np.empty((n, hidden))
    gates = np.empty((n, 4 * hidden))  # [sigmoid(i,f,o) | tanh(g)]
    h = np.zeros(hidden)
    c = np.zeros(hidden)
    with np.errstate(over="ignore"):
        for t in range(n):
            a = Z[t] + U @ h
            sig = 1.0 / (1.0 + np.exp(-a[:h3]))
            g = np.tanh(a[h3:])
            H_prev[t] = h
            C_prev[t] = c
            c = sig[hidden:2 * hidden] * c + sig[:hidden] * g
            h = sig[2 * hidden:] * np.tanh(c)
            gates[t, :h3] = sig
            gates[t, h3:] = g
            H[t] = h
            C[t] = c
    cache = (X, H_prev, C_prev, gates, C, W, U)
    return H, cache


def lstm_backward(dH: np.ndarray, cache, params) -> tuple[np.ndarray, dict]:
    """Backpropagation through time.

    ``dH`` holds the loss gradient w.r.t. every per-step hidden state.
    Returns (dX, parameter gradients).
    """
    X, H_prev, C_prev, gates, C, W, U = cache
    n, hidden = dH.shape
    h3 = 3 * hidden
    Ut = U.T
    dA = np.empty((n, 4 * hidden))
    dh_next = np.zeros(hidden)
    dc_next = np.zeros(hidden)
    for t in range(n - 1, -1, -1):
        row = gates[t]
        i = row[:hidden]
        f = row[hidden:2 * hidden]
        o = row[2 * hidden:h3]
        g = row[h3:]
        dh = dH[t] + dh_next
        tanh_c = np.tanh(C[t])
        do = dh * tanh_c
        dc = dc_next + dh * o * (1.0 - tanh_c * tanh_c)
        da = dA[t]
        da[:hidden] = (dc * g) * i * (1.0 - i)
        da[hidden:2 * hidden] = (dc * C_prev[t]) * f * (1.0 - f)
        da[2 * hidden:h3] = do * o * (1.0 - o)
        da[h3:] = (dc * i) * (1.0 - g * g)
        dc_next = dc * f
        dh_next = Ut @ da
    dX = dA @ W
    dW = dA.T @ X
    dU = dA.T @ H_prev
    db = dA.sum(axis=0)
    grads = {}
    for gi, gate in enumerate(_STACK):
        sl = slice(gi * hidden, (gi + 1) * hidden)
        grads[f"W_{gate}"] = dW[sl]
        grads[f"U_{gate}"] = dU[sl]
        grads[f"b_{gate}"] = db[sl]
    return dX, grads


def bilstm_forward(X: np.ndarray, params_fwd, params_bwd):
    """Encode a sequence in both directions.

    Returns (H, cache) where row t of H concatenates the forward state at t
    with the backward state at t; H has shape (n, 2 * hidden).
    """
    H_f, cache_f = lstm_forward(X, params_fwd)
    H_b_rev, cache_b = lstm_forward(X[::-1], params_bwd)
    H = np.concatenate([H_f, H_b_rev[::-1]], axis=1)
    return H, (cache_f, cache_b)


def bilstm_backward(dH: np.ndarray, cache, params_fwd, params_bwd):
    """Returns (dX, grads_fwd, grads_bwd) for a bilstm_forward call."""
    cache_f, cache_b = cache
    hidden = dH.shape[1] // 2
    dX_f, grads_f = lstm_backward(dH[:, :hidden], cache_f, params_fwd)
    dX_b_rev, grads_b = lstm_backward(dH[::-1, hidden:], cache_b, params_bwd)
    return dX_f + dX_b_rev[::-1], grads_f, grads_b
