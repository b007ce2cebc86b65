"""Run the full evaluation protocol on a desk-scale corpus.

For every selector, features are re-selected inside each training fold (the
test split never influences selection), classifiers consume the continuous
TF-IDF columns restricted to each feature-set size, and cells average the
fold accuracies. Paired t-tests then compare selectors per classifier across
the feature-set sizes.
"""

import tempfile
from pathlib import Path

from miselect import (
    CorpusConfig,
    ExperimentPlan,
    ModelSpec,
    SelectorConfig,
    emit_report,
    run_experiment,
    synth_corpus,
    tfidf_vectorize,
    ttest_grid,
)

docs, _ = synth_corpus(
    CorpusConfig(n_ransomware=120, n_benign=120, vocab_size=50,
                 min_trace_len=10, max_trace_len=50),
    seed=5,
)
ds = tfidf_vectorize(docs, min_df=2)

plan = ExperimentPlan(
    selectors=(
        SelectorConfig("emifs", tau=20),
        SelectorConfig("mrmr", tau=20),
    ),
    set_sizes=(5, 10, 15, 20),
    classifiers=(ModelSpec("knn"), ModelSpec("tree"), ModelSpec("forest", {"n_trees": 30})),
    k_folds=5,
    seed=5,
    bins=5,
)
tables = run_experiment(plan, ds)

for table in tables:
    print(f"\n=== {table.selector} ===")
    print("features  " + "  ".join(f"{c:>8s}" for c in table.classifiers))
    for size, row in zip(table.set_sizes, table.cells):
        print(f"{size:>8d}  " + "  ".join(f"{v:8.4f}" for v in row))
    print(f"{'Avg.':>8s}  " + "  ".join(f"{v:8.4f}" for v in table.avg_row))

print("\n=== paired t-tests (one-tailed, alpha 0.05) ===")
for r in ttest_grid(tables, alpha=0.05, tails="one"):
    flag = "degenerate" if r.degenerate else ("significant" if r.significant else "ns")
    print(f"{r.a_id} vs {r.b_id} on {r.classifier:8s} "
          f"t={r.t_value:8.4f}  p={r.p_value:.6f}  {flag}")

out = Path(tempfile.mkdtemp(prefix="miselect_report_"))
written = emit_report(tables, ttest_grid(tables), out,
                      plan_echo=plan.to_dict(), seed=plan.seed)
print("\nreport files:")
for p in written:
    print(" ", p)
