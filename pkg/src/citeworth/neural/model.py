"""Attention-based BiLSTM sentence classifier.

Four weight-sharing branches (section string, previous, current and next
sentence) run through a character-aware embedding, a BiLSTM encoder and an
attention pool; the pooled vectors are fused with the 8 numeric context
features and classified by a small MLP.  Non-contextual mode keeps the
same layout but zeroes every block except the current sentence, so one
model can serve both modes.

Everything is float64 numpy with hand-written backward passes, verified
against central finite differences (see gradcheck).
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyInput
from ..features import ContextBundle, handcrafted_features
from ..textrep import EmbeddingTable, tokenize
from . import attention as att
from . import lstm

BRANCHES = ("sec", "prev", "cur", "next")
_LSTM_PREFIXES = ("char_f", "char_b", "enc_f", "enc_b")


@dataclass
class NeuralConfig:
    word_dim: int = 128
    encoder_hidden: int = 128
    char_dim: int = 15
    char_hidden: int = 15
    mlp_hidden: int = 64
    attention: str = "cos"  # cos | dp | sdp
    contextual: bool = False
    dropout: float = 0.5
    l2: float = 1e-7
    seed: int = 0

    @property
    def token_dim(self) -> int:
        return self.word_dim + 2 * self.char_hidden

    @property
    def pooled_dim(self) -> int:
        return 2 * self.encoder_hidden

    @property
    def fusion_dim(self) -> int:
        return 4 * self.pooled_dim + 8


def _init_linear(rng, out_dim: int, in_dim: int) -> np.ndarray:
    bound = math.sqrt(6.0 / (in_dim + out_dim))
    return rng.uniform(-bound, bound, size=(out_dim, in_dim))


class NeuralModel:
    """Parameters plus vocabularies; see module docstring."""

    def __init__(self, config: NeuralConfig, word_vocab: dict[str, int], char_vocab: dict[str, int], params: dict[str, np.ndarray]):
        self.config = config
        self.word_vocab = word_vocab
        self.char_vocab = char_vocab
        self.params = params

    # -- construction -------------------------------------------------

    @classmethod
    def build(
        cls,
        token_lists: list[list[str]],
        config: NeuralConfig | None = None,
        pretrained: EmbeddingTable | None = None,
    ) -> "NeuralModel":
        """Initialize a model for the given corpus.

        The word table is trainable; rows present in ``pretrained``
        initialize it (through a seeded random projection when the
        pre-trained dimension differs from the table dimension).  Unseen
        words fall back to their character encoding at inference time.
        """
        config = config or NeuralConfig()
        rng = np.random.default_rng(config.seed)
        words = sorted({t for toks in token_lists for t in toks})
        chars = sorted({c for w in words for c in w})
        word_vocab = {w: i for i, w in enumerate(words)}
        char_vocab = {c: i for i, c in enumerate(chars)}

        params: dict[str, np.ndarray] = {}
        params["word_emb"] = rng.uniform(-0.1, 0.1, size=(len(words), config.word_dim))
        if pretrained is not None and len(pretrained) > 0:
            if pretrained.dim == config.word_dim:
                project = None
            else:
                project = rng.normal(
                    0.0, 1.0 / math.sqrt(pretrained.dim), size=(pretrained.dim, config.word_dim)
                )
            for w, i in word_vocab.items():
                vec = pretrained.get(w)
                if vec is not None:
                    params["word_emb"][i] = vec if project is None else vec @ project
        params["char_emb"] = rng.uniform(-0.1, 0.1, size=(max(len(chars), 1), config.char_dim))
        for prefix, in_dim, hidden in (
            ("char_f", config.char_dim, config.char_hidden),
            ("char_b", config.char_dim, config.char_hidden),
            ("enc_f", config.token_dim, config.encoder_hidden),
            ("enc_b", config.token_dim, config.encoder_hidden),
        ):
            for k, v in lstm.init_lstm_params(in_dim, hidden, rng).items():
                params[f"{prefix}.{k}"] = v
        params["mlp.W1"] = _init_linear(rng, config.mlp_hidden, config.fusion_dim)
        params["mlp.b1"] = np.zeros(config.mlp_hidden)
        params["mlp.W2"] = _init_linear(rng, 2, config.mlp_hidden)
        params["mlp.b2"] = np.zeros(2)
        return cls(config, word_vocab, char_vocab, params)

    def _sub(self, prefix: str) -> dict[str, np.ndarray]:
        plen = len(prefix) + 1
        return {k[plen:]: v for k, v in self.params.items() if k.startswith(prefix + ".")}

    def _subs(self) -> dict[str, dict[str, np.ndarray]]:
        return {p: self._sub(p) for p in _LSTM_PREFIXES}

    def zero_grads(self) -> dict[str, np.ndarray]:
        return {k: np.zeros_like(v) for k, v in self.params.items()}

    def n_parameters(self) -> int:
        return sum(v.size for v in self.params.values())

    # -- forward pieces ------------------------------------------------

    def char_encode(self, word: str, subs=None, memo=None):
        """Character BiLSTM summary of one word: the final forward state
        concatenated with the final backward state (length 2*char_hidden).
        Words with no known characters map to the zero vector."""
        if memo is not None and word in memo:
            return memo[word]
        if subs is None:
            subs = self._subs()
        ids = [self.char_vocab[c] for c in word if c in self.char_vocab]
        ch = self.config.char_hidden
        if not ids:
            result = (np.zeros(2 * ch), None)
        else:
            E = self.params["char_emb"][ids]
            H, cache = lstm.bilstm_forward(E, subs["char_f"], subs["char_b"])
            out = np.concatenate([H[-1, :ch], H[0, ch:]])
            result = (out, (ids, cache))
        if memo is not None:
            memo[word] = result
        return result

    def _char_encode_backward(self, dout: np.ndarray, cache, grads, subs) -> None:
        if cache is None:
            return
        ids, bicache = cache
        ch = self.config.char_hidden
        n = len(ids)
        dH = np.zeros((n, 2 * ch))
        dH[-1, :ch] += dout[:ch]
        dH[0, ch:] += dout[ch:]
        dE, g_f, g_b = lstm.bilstm_backward(dH, bicache, subs["char_f"], subs["char_b"])
        for k, v in g_f.items():
            grads[f"char_f.{k}"] += v
        for k, v in g_b.items():
            grads[f"char_b.{k}"] += v
        for row, cid in enumerate(ids):
            grads["char_emb"][cid] += dE[row]

    def embed_tokens(self, tokens: list[str], subs=None, memo=None):
        """Token matrix: per token the word vector (zero row for unknown
        words) concatenated with its character encoding."""
        if subs is None:
            subs = self._subs()
        rows = []
        caches = []
        wd = self.config.word_dim
        for tok in tokens:
            idx = self.word_vocab.get(tok)
            wvec = self.params["word_emb"][idx] if idx is not None else np.zeros(wd)
            cvec, ccache = self.char_encode(tok, subs, memo)
            rows.append(np.concatenate([wvec, cvec]))
            caches.append((idx, ccache))
        return np.stack(rows), caches

    def _encode_branch(self, tokens: list[str], subs, memo):
        E, tok_caches = self.embed_tokens(tokens, subs, memo)
        H, bicache = lstm.bilstm_forward(E, subs["enc_f"], subs["enc_b"])
        query = H[-1]
        z, alpha, att_cache = att.attention_pool(H, query, self.config.attention)
        return z, (tok_caches, bicache, att_cache, alpha)

    def _branch_backward(self, dz: np.ndarray, cache, grads, subs) -> None:
        tok_caches, bicache, att_cache, _alpha = cache
        dH, dq = att.attention_pool_backward(dz, att_cache)
        dH[-1] += dq  # the query is the final encoder state
        dE, g_f, g_b = lstm.bilstm_backward(dH, bicache, subs["enc_f"], subs["enc_b"])
        for k, v in g_f.items():
            grads[f"enc_f.{k}"] += v
        for k, v in g_b.items():
            grads[f"enc_b.{k}"] += v
        wd = self.config.word_dim
        for row, (idx, ccache) in enumerate(tok_caches):
            if idx is not None:
                grads["word_emb"][idx] += dE[row, :wd]
            self._char_encode_backward(dE[row, wd:], ccache, grads, subs)

    # -- full forward / backward ---------------------------------------

    def forward(
        self,
        bundle: ContextBundle,
        contextual: bool | None = None,
        train_mode: bool = False,
        dropout_rng=None,
        citation_flags: tuple[float, float] | None = None,
        subs=None,
        memo=None,
    ):
        """Class probabilities (non-citing, citing) for one bundle.

        Contextual mode encodes all four branches and appends the 8 numeric
        features; non-contextual mode pools only the current sentence.
        Dropout applies to the fused vector in training mode only, so
        evaluation-mode forwards are deterministic.
        """
        cfg = self.config
        contextual = cfg.contextual if contextual is None else contextual
        cur_tokens = tokenize(bundle.cur_sentence.text)
        if not cur_tokens:
            raise EmptyInput("current sentence has no tokens")
        if subs is None:
            subs = self._subs()

        pd = cfg.pooled_dim
        pooled = {b: np.zeros(pd) for b in BRANCHES}
        branch_caches: dict[str, tuple] = {}
        texts = {
            "sec": bundle.section_type if contextual else None,
            "prev": bundle.prev_sentence.text if contextual and bundle.prev_sentence else None,
            "cur": bundle.cur_sentence.text,
            "next": bundle.next_sentence.text if contextual and bundle.next_sentence else None,
        }
        for branch in BRANCHES:
            text = texts[branch]
            toks = cur_tokens if branch == "cur" else (tokenize(text) if text else [])
            if toks:
                pooled[branch], branch_caches[branch] = self._encode_branch(toks, subs, memo)

        feats = (
            handcrafted_features(bundle, citation_flags) if contextual else np.zeros(8)
        )
        fused = np.concatenate([pooled[b] for b in BRANCHES] + [feats])

        if train_mode and cfg.dropout > 0:
            rng = dropout_rng or np.random.default_rng(cfg.seed)
            keep = (rng.random(fused.shape) >= cfg.dropout).astype(float)
            mask = keep / (1.0 - cfg.dropout)
        else:
            mask = None
        dropped = fused * mask if mask is not None else fused

        a1_pre = self.params["mlp.W1"] @ dropped + self.params["mlp.b1"]
        a1 = np.maximum(a1_pre, 0.0)
        logits = self.params["mlp.W2"] @ a1 + self.params["mlp.b2"]
        shifted = logits - logits.max()
        exp = np.exp(shifted)
        probs = exp / exp.sum()
        cache = (branch_caches, mask, dropped, a1_pre, a1, logits, contextual)
        return probs, cache

    def _backward(self, dlogits: np.ndarray, cache, grads, subs) -> None:
        branch_caches, mask, dropped, a1_pre, a1, _logits, _contextual = cache
        grads["mlp.W2"] += np.outer(dlogits, a1)
        grads["mlp.b2"] += dlogits
        da1 = self.params["mlp.W2"].T @ dlogits
        da1_pre = da1 * (a1_pre > 0)
        grads["mlp.W1"] += np.outer(da1_pre, dropped)
        grads["mlp.b1"] += da1_pre
        dfused = self.params["mlp.W1"].T @ da1_pre
        if mask is not None:
            dfused = dfused * mask
        pd = self.config.pooled_dim
        for bi, branch in enumerate(BRANCHES):
            if branch in branch_caches:
                self._branch_backward(
                    dfused[bi * pd : (bi + 1) * pd], branch_caches[branch], grads, subs
                )

    def loss(
        self,
        bundles: list[ContextBundle],
        labels,
        contextual: bool | None = None,
        lam: float | None = None,
        train_mode: bool = False,
        dropout_rng=None,
        flags: list[tuple[float, float]] | None = None,
    ) -> float:
        value, _ = self.loss_and_grads(
            bundles, labels, contextual, lam, train_mode, dropout_rng,
            flags=flags, want_grads=False,
        )
        return value

    def loss_and_grads(
        self,
        bundles: list[ContextBundle],
        labels,
        contextual: bool | None = None,
        lam: float | None = None,
        train_mode: bool = False,
        dropout_rng=None,
        flags: list[tuple[float, float]] | None = None,
        want_grads: bool = True,
    ):
        """Mean cross-entropy over the batch plus l2 * sum(theta^2) over
        every trainable parameter, with gradients."""
        if not bundles:
            raise ValueError("batch is empty")
        lam = self.config.l2 if lam is None else lam
        n = len(bundles)
        grads = self.zero_grads() if want_grads else None
        subs = self._subs()
        memo: dict = {}
        total = 0.0
        for i, bundle in enumerate(bundles):
            y = int(labels[i])
            probs, cache = self.forward(
                bundle,
                contextual,
                train_mode=train_mode,
                dropout_rng=dropout_rng,
                citation_flags=flags[i] if flags is not None else None,
                subs=subs,
                memo=memo,
            )
            total += -math.log(max(probs[y], 1e-300))
            if want_grads:
                dlogits = probs.copy()
                dlogits[y] -= 1.0
                self._backward(dlogits / n, cache, grads, subs)
        value = total / n
        if lam > 0:
            for name in sorted(self.params):
                theta = self.params[name]
                value += lam * float(np.sum(theta * theta))
                if want_grads:
                    grads[name] += 2.0 * lam * theta
        return value, grads

    def predict_proba(
        self,
        bundles: list[ContextBundle],
        contextual: bool | None = None,
        flags: list[tuple[float, float]] | None = None,
    ) -> np.ndarray:
        """Citing-class probability per bundle (evaluation mode)."""
        out = np.zeros(len(bundles))
        subs = self._subs()
        memo: dict = {}
        for i, bundle in enumerate(bundles):
            probs, _ = self.forward(
                bundle,
                contextual,
                citation_flags=flags[i] if flags is not None else None,
                subs=subs,
                memo=memo,
            )
            out[i] = probs[1]
        return out
