"""
Interpretable models
====================

Elastic-net logistic regression gives the direction of influence per
feature, the random forest gives the importance; together they explain
what promotes or inhibits a citation.
"""

import numpy as np

from citeworth.features import apply_scaler, build_feature_matrix, bundles_for, fit_scaler
from citeworth.linear import (
    importance_report,
    predict_enlr,
    predict_rf,
    train_enlr,
    train_rf,
)
from citeworth.corpus import LabeledSentence
from citeworth.textrep import fit_vocab, tokenize

rng = np.random.default_rng(0)
FILLER = ["assay", "sample", "tissue", "control", "buffer", "growth"]
CITE_WORDS = ["previously", "reported", "described"]

sentences = []
for i in range(120):
    label = i % 3 == 0
    words = [FILLER[rng.integers(0, len(FILLER))] for _ in range(6)]
    if label:
        words[rng.integers(0, 6)] = CITE_WORDS[rng.integers(0, len(CITE_WORDS))]
    text = " ".join(words).capitalize() + "."
    sentences.append(
        LabeledSentence(f"demo:s0:p0:{i}", text, label, "intro",
                        len(text), len(text.split()))
    )
for i, s in enumerate(sentences):  # link neighbors for contextual features
    if i:
        s.prev_id = sentences[i - 1].sentence_id
        s.prev_has_citation = sentences[i - 1].label
    if i + 1 < len(sentences):
        s.next_id = sentences[i + 1].sentence_id
        s.next_has_citation = sentences[i + 1].label

vocab = fit_vocab([tokenize(s.text) for s in sentences], min_df=1)
X, space = build_feature_matrix(bundles_for(sentences), vocab, contextual=True)
scaler = fit_scaler(X, space.sparse_cols, space.dense_cols)
Xs = apply_scaler(scaler, X)
y = np.array([int(s.label) for s in sentences])

enlr = train_enlr(Xs, y, alpha_grid=(0.5,), lambda_grid=(0.001,), cv_folds=1,
                  feature_names=space.names)
rf = train_rf(Xs, y, n_trees=50, seed=1, feature_names=space.names)

print("training accuracy, logistic:", np.mean((predict_enlr(enlr, Xs) >= 0.5) == y))
print("training accuracy, forest:  ", np.mean((predict_rf(rf, Xs) >= 0.5) == y))

report = importance_report(rf, enlr, space.names, dict(zip(space.names, space.categories)))
print("\nimportance by category (sums to 1):")
for cat, total in sorted(report.category_sums.items(), key=lambda kv: -kv[1]):
    print(f"  {cat:15s} {total:.4f}")
print("\ntop features (importance from the forest, sign from the logistic):")
for row in report.features[:8]:
    print(f"  {row['sign']} {row['importance']:.4f}  {row['name']}")
