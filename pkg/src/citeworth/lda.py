"""Latent Dirichlet Allocation via collapsed Gibbs sampling.

Fits topic mixtures for sentences so that a document can be represented by
a low-dimensional probability vector instead of a sparse n-gram vector.
The sampler is sequential and seeded, so fits are reproducible.
"""

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOPICS = 200
DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000
DEFAULT_BURN_IN = 200


@dataclass
class TopicModel:
    """Fitted LDA model: per-topic term distributions and hyperparameters."""

    n_topics: int
    phi: np.ndarray  # (K, V), rows sum to 1
    alpha: float
    beta: float
    gibbs_iterations: int
    burn_in: int
    seed: int
    term_index: dict[str, int]
    token_count_history: list[int] = field(default_factory=list)

    @property
    def vocab_size(self) -> int:
        return len(self.term_index)

    def terms(self) -> list[str]:
        out = [""] * len(self.term_index)
        for t, i in self.term_index.items():
            out[i] = t
        return out

    def top_terms(self, topic: int, k: int = 10) -> list[tuple[str, float]]:
        terms = self.terms()
        order = np.argsort(self.phi[topic])[::-1][:k]
        return [(terms[i], float(self.phi[topic, i])) for i in order]


def _encode(corpus: list[list[str]], term_index: dict[str, int]) -> list[np.ndarray]:
    docs = []
    for tokens in corpus:
        ids = [term_index[t] for t in tokens if t in term_index]
        docs.append(np.array(ids, dtype=np.int64))
    return docs


def fit_lda(
    corpus: list[list[str]],
    n_topics: int = DEFAULT_TOPICS,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    burn_in: int = DEFAULT_BURN_IN,
    seed: int = 0,
) -> TopicModel:
    """Collapsed Gibbs sampling over token-topic assignments.

    ``alpha`` defaults to 50/K.  After burn-in, the per-topic term
    distributions are averaged over the remaining sweeps with beta
    smoothing.
    """
    if n_topics < 2:
        raise ValueError(f"need at least 2 topics, got {n_topics}")
    if not corpus:
        raise ValueError("corpus is empty")
    if alpha is None:
        alpha = 50.0 / n_topics

    term_index: dict[str, int] = {}
    for tokens in corpus:
        for t in tokens:
            if t not in term_index:
                term_index[t] = len(term_index)
    # Re-index in sorted order for order-independent determinism.
    term_index = {t: i for i, t in enumerate(sorted(term_index))}

    docs = _encode(corpus, term_index)
    V = len(term_index)
    K = n_topics
    rng = np.random.default_rng(seed)

    n_dk = np.zeros((len(docs), K))
    n_kv = np.zeros((K, V))
    n_k = np.zeros(K)
    assignments = []
    total_tokens = 0
    for d, doc in enumerate(docs):
        z = rng.integers(0, K, size=len(doc))
        assignments.append(z)
        total_tokens += len(doc)
        for v, k in zip(doc, z):
            n_dk[d, k] += 1
            n_kv[k, v] += 1
            n_k[k] += 1

    phi_sum = np.zeros((K, V))
    phi_samples = 0
    history: list[int] = []
    for it in range(iterations):
        for d, doc in enumerate(docs):
            z = assignments[d]
            for pos, v in enumerate(doc):
                k_old = z[pos]
                n_dk[d, k_old] -= 1
                n_kv[k_old, v] -= 1
                n_k[k_old] -= 1
                weights = (n_dk[d] + alpha) * (n_kv[:, v] + beta) / (n_k + V * beta)
                cdf = np.cumsum(weights)
                k_new = int(np.searchsorted(cdf, rng.random() * cdf[-1]))
                z[pos] = k_new
                n_dk[d, k_new] += 1
                n_kv[k_new, v] += 1
                n_k[k_new] += 1
        history.append(int(n_kv.sum()))
        if it >= burn_in:
            phi_sum += (n_kv + beta) / (n_k + V * beta)[:, None]
            phi_samples += 1

    if phi_samples == 0:  # all sweeps were burn-in; fall back to final state
        phi = (n_kv + beta) / (n_k + V * beta)[:, None]
    else:
        phi = phi_sum / phi_samples
    phi /= phi.sum(axis=1, keepdims=True)

    assert all(h == total_tokens for h in history)
    return TopicModel(
        n_topics=K,
        phi=phi,
        alpha=alpha,
        beta=beta,
        gibbs_iterations=iterations,
        burn_in=burn_in,
        seed=seed,
        term_index=term_index,
        token_count_history=history,
    )


def infer_topics(
    tokens: list[str],
    model: TopicModel,
    iterations: int = 50,
    seed: int = 0,
) -> np.ndarray:
    """Topic proportions of one document with the term distributions
    frozen.  Returns a length-K probability vector; a document with no
    known tokens falls back to the uniform prior."""
    K = model.n_topics
    ids = np.array(
        [model.term_index[t] for t in tokens if t in model.term_index],
        dtype=np.int64,
    )
    if len(ids) == 0:
        return np.full(K, 1.0 / K)

    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=len(ids))
    n_k = np.bincount(z, minlength=K).astype(float)
    for _ in range(iterations):
        for pos, v in enumerate(ids):
            n_k[z[pos]] -= 1
            weights = (n_k + model.alpha) * model.phi[:, v]
            cdf = np.cumsum(weights)
            k_new = int(np.searchsorted(cdf, rng.random() * cdf[-1]))
            z[pos] = k_new
            n_k[k_new] += 1
    theta = (n_k + model.alpha) / (len(ids) + K * model.alpha)
    return theta / theta.sum()
