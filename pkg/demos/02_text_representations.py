"""
Text representations
====================

The three sentence representations behind the models: tf-idf over
unigrams and bigrams, LDA topic mixtures, and (pre-trained) word vectors.
"""

import numpy as np

from citeworth.lda import fit_lda, infer_topics
from citeworth.textrep import fit_vocab, tfidf_transform, tokenize

SENTENCES = [
    "Previous studies reported this effect.",
    "Previous work described the mechanism.",
    "The effect was reported previously.",
    "Prior studies described the mechanism.",
    "Cells were washed and incubated for 10 min.",
    "Samples were incubated in buffer overnight.",
    "Buffer aliquots were washed twice.",
    "Cells from samples were incubated briefly.",
]

# Tokenization lowercases, splits on non-alphanumerics and folds numbers.
print(tokenize("The FZP gene, p < 0.05"))

tokens = [tokenize(s) for s in SENTENCES]

# tf-idf: L2-normalized, so every non-empty vector has unit norm.
vocab = fit_vocab(tokens, min_df=1)
print("vocabulary size:", vocab.size)
vec = tfidf_transform(tokens[0], vocab)
print("norm:", np.linalg.norm(vec.values))
terms = vocab.terms()
top = sorted(zip(vec.values, vec.indices), reverse=True)[:4]
print("heaviest terms:", [(terms[i], round(v, 3)) for v, i in top])

# LDA separates the "previous work" sentences from the lab-bench ones.
model = fit_lda(tokens, n_topics=2, alpha=0.1, iterations=150, burn_in=50, seed=5)
for k in range(2):
    print(f"topic {k}:", [t for t, _ in model.top_terms(k, 4)])
for sentence, toks in zip(SENTENCES, tokens):
    theta = infer_topics(toks, model)
    print(f"{np.round(theta, 2)}  {sentence}")
