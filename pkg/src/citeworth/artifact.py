"""Versioned model files.

One JSON container holds any trained model family together with the
preprocessing state (vocabulary, scaler, topic model) captured at training
time, so inference reproduces training statistics bit for bit.  Arrays are
stored as base64 little-endian buffers; files carry a magic header and a
format version and contain no timestamps, so identical training runs
produce identical bytes.
"""

import base64
import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .errors import FormatMismatch
from .features import Scaler
from .lda import TopicModel
from .linear import EnlrModel, RfModel, TreeNode
from .neural.model import NeuralConfig, NeuralModel
from .textrep import Vocabulary

MAGIC = "cite-worthiness-model"
FORMAT_VERSION = 1


def encode_array(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a)
    little = a.dtype.newbyteorder("<")
    return {
        "shape": list(a.shape),
        "dtype": little.str,
        "data": base64.b64encode(a.astype(little).tobytes()).decode("ascii"),
    }


def decode_array(d: dict) -> np.ndarray:
    raw = base64.b64decode(d["data"])
    return np.frombuffer(raw, dtype=np.dtype(d["dtype"])).reshape(d["shape"]).copy()


def _vocab_to_dict(v: Vocabulary) -> dict:
    return {
        "terms": v.terms(),
        "doc_freq": encode_array(v.doc_freq),
        "n_docs": v.n_docs,
        "min_df": v.min_df,
        "ngram_range": list(v.ngram_range),
    }


def _vocab_from_dict(d: dict) -> Vocabulary:
    return Vocabulary(
        index={t: i for i, t in enumerate(d["terms"])},
        doc_freq=decode_array(d["doc_freq"]),
        n_docs=d["n_docs"],
        min_df=d["min_df"],
        ngram_range=tuple(d["ngram_range"]),
    )


def _scaler_to_dict(s: Scaler) -> dict:
    return {
        "sparse_cols": encode_array(s.sparse_cols),
        "dense_cols": encode_array(s.dense_cols),
        "max_abs": encode_array(s.max_abs),
        "mean": encode_array(s.mean),
        "std": encode_array(s.std),
        "degenerate_sparse": s.degenerate_sparse,
        "degenerate_dense": s.degenerate_dense,
    }


def _scaler_from_dict(d: dict) -> Scaler:
    return Scaler(
        sparse_cols=decode_array(d["sparse_cols"]).astype(np.int64),
        dense_cols=decode_array(d["dense_cols"]).astype(np.int64),
        max_abs=decode_array(d["max_abs"]),
        mean=decode_array(d["mean"]),
        std=decode_array(d["std"]),
        degenerate_sparse=list(d["degenerate_sparse"]),
        degenerate_dense=list(d["degenerate_dense"]),
    )


def _topics_to_dict(t: TopicModel) -> dict:
    return {
        "n_topics": t.n_topics,
        "phi": encode_array(t.phi),
        "alpha": t.alpha,
        "beta": t.beta,
        "gibbs_iterations": t.gibbs_iterations,
        "burn_in": t.burn_in,
        "seed": t.seed,
        "terms": t.terms(),
    }


def _topics_from_dict(d: dict) -> TopicModel:
    return TopicModel(
        n_topics=d["n_topics"],
        phi=decode_array(d["phi"]),
        alpha=d["alpha"],
        beta=d["beta"],
        gibbs_iterations=d["gibbs_iterations"],
        burn_in=d["burn_in"],
        seed=d["seed"],
        term_index={t: i for i, t in enumerate(d["terms"])},
    )


def _tree_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"counts": [float(c) for c in node.counts]}
    return {
        "feature": int(node.feature),
        "threshold": float(node.threshold),
        "left": _tree_to_dict(node.left),
        "right": _tree_to_dict(node.right),
    }


def _tree_from_dict(d: dict) -> TreeNode:
    if "counts" in d:
        return TreeNode(counts=np.array(d["counts"]))
    return TreeNode(
        feature=d["feature"],
        threshold=d["threshold"],
        left=_tree_from_dict(d["left"]),
        right=_tree_from_dict(d["right"]),
    )


def _model_to_dict(model) -> tuple[str, dict]:
    if isinstance(model, EnlrModel):
        return "enlr", {
            "beta": encode_array(model.beta),
            "b": model.b,
            "alpha": model.alpha,
            "lambda": model.lam,
            "feature_names": model.feature_names,
        }
    if isinstance(model, RfModel):
        return "rf", {
            "trees": [_tree_to_dict(t) for t in model.trees],
            "n_features": model.n_features,
            "features_per_split": model.features_per_split,
            "seed": model.seed,
            "feature_names": model.feature_names,
            "importances": encode_array(model.importances),
        }
    if isinstance(model, NeuralModel):
        return "neural", {
            "config": vars(model.config),
            "word_vocab": sorted(model.word_vocab, key=model.word_vocab.get),
            "char_vocab": sorted(model.char_vocab, key=model.char_vocab.get),
            "params": {k: encode_array(v) for k, v in model.params.items()},
        }
    raise FormatMismatch(f"unknown model type {type(model).__name__}")


def _model_from_dict(family: str, d: dict):
    if family == "enlr":
        return EnlrModel(
            beta=decode_array(d["beta"]),
            b=d["b"],
            alpha=d["alpha"],
            lam=d["lambda"],
            feature_names=list(d["feature_names"]),
        )
    if family == "rf":
        return RfModel(
            trees=[_tree_from_dict(t) for t in d["trees"]],
            n_features=d["n_features"],
            features_per_split=d["features_per_split"],
            seed=d["seed"],
            feature_names=list(d["feature_names"]),
            importances=decode_array(d["importances"]),
        )
    if family == "neural":
        return NeuralModel(
            config=NeuralConfig(**d["config"]),
            word_vocab={w: i for i, w in enumerate(d["word_vocab"])},
            char_vocab={c: i for i, c in enumerate(d["char_vocab"])},
            params={k: decode_array(v) for k, v in d["params"].items()},
        )
    raise FormatMismatch(f"unknown model family {family!r}")


@dataclass
class ModelArtifact:
    """A trained model plus its preprocessing state."""

    family: str  # enlr | rf | neural
    model: object
    contextual: bool = False
    representation: str | None = None  # bow | tm | None (neural)
    vocab: Vocabulary | None = None
    topics: TopicModel | None = None
    scaler: Scaler | None = None
    format_version: int = FORMAT_VERSION

    @property
    def attention_variant(self) -> str | None:
        if self.family == "neural":
            return self.model.config.attention
        return None

    def vocab_hash(self) -> str:
        if self.family == "neural":
            terms = sorted(self.model.word_vocab)
        elif self.vocab is not None:
            terms = self.vocab.terms()
        else:
            terms = []
        digest = hashlib.sha256("\n".join(terms).encode("utf-8")).hexdigest()
        return digest[:16]

    def info(self) -> dict:
        return {
            "family": self.family,
            "attention_variant": self.attention_variant,
            "contextual": self.contextual,
            "representation": self.representation,
            "version": self.format_version,
            "vocab_hash": self.vocab_hash(),
        }


def save_artifact(artifact: ModelArtifact, path) -> None:
    family, model_dict = _model_to_dict(artifact.model)
    container = {
        "magic": MAGIC,
        "format_version": artifact.format_version,
        "family": family,
        "contextual": artifact.contextual,
        "representation": artifact.representation,
        "vocab": _vocab_to_dict(artifact.vocab) if artifact.vocab else None,
        "topics": _topics_to_dict(artifact.topics) if artifact.topics else None,
        "scaler": _scaler_to_dict(artifact.scaler) if artifact.scaler else None,
        "model": model_dict,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(container, fh, sort_keys=True)
        fh.write("\n")


def load_artifact(path) -> ModelArtifact:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            container = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatMismatch(f"{path}: not a model file ({exc})") from exc
    if container.get("magic") != MAGIC:
        raise FormatMismatch(f"{path}: missing magic header")
    if container.get("format_version") != FORMAT_VERSION:
        raise FormatMismatch(
            f"{path}: format version {container.get('format_version')} "
            f"not supported (expected {FORMAT_VERSION})"
        )
    family = container["family"]
    return ModelArtifact(
        family=family,
        model=_model_from_dict(family, container["model"]),
        contextual=container["contextual"],
        representation=container["representation"],
        vocab=_vocab_from_dict(container["vocab"]) if container["vocab"] else None,
        topics=_topics_from_dict(container["topics"]) if container["topics"] else None,
        scaler=_scaler_from_dict(container["scaler"]) if container["scaler"] else None,
        format_version=container["format_version"],
    )
