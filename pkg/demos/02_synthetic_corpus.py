"""Generate a synthetic API-call corpus with known informative tokens.

The generator plants three kinds of marker tokens in the traces:

- informative tokens appear in a fixed share of each class's documents
  (80% of ransomware traces vs 10% of benign ones by default);
- redundant tokens shadow an informative partner document-for-document,
  giving the selectors exact duplicates to avoid;
- noise tokens ignore the class entirely.

Everything else is background padding. Because the ground truth is known,
selection quality can be scored exactly.
"""

from miselect import CorpusConfig, mutual_information, synth_corpus, tfidf_vectorize

config = CorpusConfig(
    n_ransomware=150,
    n_benign=150,
    vocab_size=60,
    n_informative=3,
    n_redundant=3,
    n_noise=6,
    min_trace_len=10,
    max_trace_len=60,
)
docs, ground_truth = synth_corpus(config, seed=42)
print(f"{len(docs)} traces, ground truth: {sorted(ground_truth)}")
print("example trace:", docs[0].sample_id, "label", docs[0].label)
print("  first calls:", " ".join(docs[0].calls[:8]), "...")

ds = tfidf_vectorize(docs, min_df=2)
print(f"\nTF-IDF matrix: {ds.n_samples} x {ds.n_features}")

print("\nMI of token presence with the class label (bits):")
labels = [d.label for d in docs]
for token in ["inf_00", "red_00", "noise_00", "call_010"]:
    presence = [int(token in d.calls) for d in docs]
    print(f"  {token:9s} {mutual_information(presence, labels):.4f}")

twin_matches = all(
    ("inf_00" in d.calls) == ("red_00" in d.calls) for d in docs
)
print("\nred_00 mirrors inf_00 in every document:", twin_matches)
