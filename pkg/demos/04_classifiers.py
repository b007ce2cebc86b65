"""Train the downstream classifier suite on a selected feature subset.

The classifiers only exist to score feature subsets, so the suite is small
and deterministic: k-nearest-neighbors, logistic regression, a gini decision
tree, and a seeded random forest.
"""

import numpy as np

from miselect import (
    CorpusConfig,
    ModelSpec,
    SelectorConfig,
    accuracy,
    confusion,
    discretize,
    greedy_select,
    stratified_kfold,
    synth_corpus,
    tfidf_vectorize,
    train_predict,
)

docs, _ = synth_corpus(
    CorpusConfig(n_ransomware=200, n_benign=200, vocab_size=60,
                 min_trace_len=10, max_trace_len=60),
    seed=3,
)
ds = tfidf_vectorize(docs, min_df=2)
folds = stratified_kfold(ds, k=5, seed=3)
train_idx, test_idx = folds.folds[0]
train, test = ds.take(train_idx), ds.take(test_idx)

subset = list(greedy_select(discretize(train, bins=5),
                            SelectorConfig("emifs", tau=10)).order)
print("selected tokens:", [ds.feature_names[j] for j in subset])
print(f"train {train.n_samples}, test {test.n_samples}\n")

for kind in ("knn", "logistic", "tree", "forest"):
    predicted = train_predict(ModelSpec(kind), train, test, subset)
    c = confusion(predicted, test.labels)
    print(f"{kind:9s} accuracy {accuracy(c):.3f}   "
          f"(tp={c.tp} tn={c.tn} fp={c.fp} fn={c.fn})")

print("\nhyperparameters are explicit and overridable:")
small_forest = ModelSpec("forest", {"n_trees": 25, "seed": 11})
predicted = train_predict(small_forest, train, test, subset)
print("forest(n_trees=25) accuracy",
      round(accuracy(confusion(predicted, test.labels)), 3))
