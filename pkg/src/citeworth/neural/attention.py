"""Attention pooling over encoder states.

The query is compared with every key through one of three score functions
(cosine, dot product, scaled dot product); softmax turns the scores into
weights and the output is the weighted average of the values.  Keys and
values are both the encoder hidden states.
"""

import numpy as np

VARIANTS = ("cos", "dp", "sdp")

_MASKED_SCORE = -1e30
_NORM_FLOOR = 1e-30


def score_dp(q: np.ndarray, K: np.ndarray) -> np.ndarray:
    return K @ q


def score_sdp(q: np.ndarray, K: np.ndarray) -> np.ndarray:
    return K @ q / np.sqrt(len(q))


def score_cos(q: np.ndarray, K: np.ndarray) -> np.ndarray:
    """Per-key cosine similarity; zero-norm vectors score 0."""
    qn = np.linalg.norm(q)
    kn = np.linalg.norm(K, axis=1)
    denom = kn * qn
    safe = denom > _NORM_FLOOR
    out = np.zeros(K.shape[0])
    out[safe] = (K[safe] @ q) / denom[safe]
    return out


def softmax(scores: np.ndarray) -> np.ndarray:
    e = np.exp(scores - scores.max())
    return e / e.sum()


def attention_pool(H: np.ndarray, query: np.ndarray, variant: str, mask=None):
    """Pool encoder states into one vector.

    ``mask`` (optional boolean array, True = real position) pins padding
    scores far below every real score, so padded positions end up with
    weights indistinguishable from zero.  Returns (z, weights, cache).
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown attention variant {variant!r}")
    if H.shape[0] == 0:
        raise ValueError("cannot pool an empty state sequence")
    if H.shape[1] != len(query):
        raise ValueError(f"query dim {len(query)} != key dim {H.shape[1]}")
    if variant == "dp":
        scores = score_dp(query, H)
    elif variant == "sdp":
        scores = score_sdp(query, H)
    else:
        scores = score_cos(query, H)
    if mask is not None:
        scores = np.where(np.asarray(mask, dtype=bool), scores, _MASKED_SCORE)
    alpha = softmax(scores)
    z = alpha @ H
    cache = (H, query, variant, mask, scores, alpha)
    return z, alpha, cache


def attention_pool_backward(dz: np.ndarray, cache):
    """Gradients of attention_pool w.r.t. the states and the query."""
    H, q, variant, mask, scores, alpha = cache
    dH = np.outer(alpha, dz)
    dalpha = H @ dz
    ds = alpha * (dalpha - alpha @ dalpha)
    if mask is not None:
        ds = np.where(np.asarray(mask, dtype=bool), ds, 0.0)

    dq = np.zeros_like(q)
    if variant == "dp":
        dq += H.T @ ds
        dH += np.outer(ds, q)
    elif variant == "sdp":
        scale = 1.0 / np.sqrt(len(q))
        dq += (H.T @ ds) * scale
        dH += np.outer(ds, q) * scale
    else:
        qn = np.linalg.norm(q)
        kn = np.linalg.norm(H, axis=1)
        safe = (kn * qn) > _NORM_FLOOR
        if np.any(safe):
            v = q / qn
            U = H[safe] / kn[safe, None]
            s = scores[safe] if mask is None else (H[safe] @ q) / (kn[safe] * qn)
            dss = ds[safe]
            dH[safe] += dss[:, None] * (v[None, :] - s[:, None] * U) / kn[safe, None]
            dq += (dss[:, None] * (U - np.outer(s, v))).sum(axis=0) / qn
    return dH, dq
