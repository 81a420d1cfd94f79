"""citeworth: detect sentences that need a citation.

Corpus compilation from JATS XML, three model families (elastic-net
logistic regression, random forest, attention-based BiLSTM with contextual
features), evaluation harnesses, a CLI and an HTTP prediction service.
"""

__version__ = "0.1.0"

from . import corpus, errors, evaluate, features, lda, linear, neural, textrep
from .artifact import ModelArtifact, load_artifact, save_artifact
from .pipeline import SentenceScorer, train_model

__all__ = [
    "ModelArtifact",
    "SentenceScorer",
    "__version__",
    "corpus",
    "errors",
    "evaluate",
    "features",
    "lda",
    "linear",
    "load_artifact",
    "neural",
    "save_artifact",
    "textrep",
    "train_model",
]
