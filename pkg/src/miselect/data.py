"""Dataset handling: CSV and API-call trace ingestion, TF-IDF weighting,
discretization for the information estimators, stratified CV splitting, and
a synthetic trace-corpus generator with known informative tokens.

All container types are frozen dataclasses holding read-only numpy arrays,
so instances can be shared freely across workers.
"""

from __future__ import annotations

import csv
import math
import warnings
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Dataset",
    "DiscreteDataset",
    "TraceDocument",
    "FoldPlan",
    "CorpusConfig",
    "load_csv",
    "save_csv",
    "ingest_traces",
    "tfidf_vectorize",
    "discretize",
    "stratified_kfold",
    "synth_corpus",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Dataset:
    """Named real-valued feature columns plus a binary class label per sample.

    Labels are 0 (benign) / 1 (ransomware). ``values`` is sample-major:
    one row per sample, one column per feature.
    """

    feature_names: tuple[str, ...]
    values: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        values = _freeze(np.asarray(self.values, dtype=np.float64))
        labels = _freeze(np.asarray(self.labels, dtype=np.int64))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        if values.ndim != 2:
            raise ValueError(f"values must be 2-d, got shape {values.shape}")
        if labels.shape != (values.shape[0],):
            raise ValueError(
                f"labels length {labels.shape} does not match {values.shape[0]} samples"
            )
        if len(self.feature_names) != values.shape[1]:
            raise ValueError("feature_names length does not match value columns")
        seen = set()
        for name in self.feature_names:
            if not name:
                raise ValueError("feature names must be non-empty")
            if name in seen:
                raise ValueError(f"duplicate feature name {name!r}")
            seen.add(name)
        if values.size and not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        if labels.size and not np.all((labels == 0) | (labels == 1)):
            raise ValueError("labels must be 0 or 1")

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def usable(self) -> bool:
        """False for degenerate datasets (no rows or no columns)."""
        return self.n_samples > 0 and self.n_features > 0

    def take(self, indices) -> "Dataset":
        """Row subset preserving feature names and order."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.feature_names, self.values[idx], self.labels[idx])


@dataclass(frozen=True)
class DiscreteDataset:
    """Integer-coded columns with known arities; substrate for MI estimation."""

    columns: np.ndarray
    arities: tuple[int, ...]
    labels: np.ndarray
    label_arity: int

    def __post_init__(self):
        columns = _freeze(np.asarray(self.columns, dtype=np.int64))
        labels = _freeze(np.asarray(self.labels, dtype=np.int64))
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "arities", tuple(int(a) for a in self.arities))
        if columns.ndim != 2:
            raise ValueError(f"columns must be 2-d, got shape {columns.shape}")
        if len(self.arities) != columns.shape[1]:
            raise ValueError("arities length does not match columns")
        if labels.shape != (columns.shape[0],):
            raise ValueError("labels length does not match samples")
        if self.label_arity < 1:
            raise ValueError("label_arity must be positive")
        if columns.size:
            maxes = columns.max(axis=0)
            for j, (m, a) in enumerate(zip(maxes, self.arities)):
                if a < 1 or m >= a:
                    raise ValueError(f"column {j} holds code {m} >= arity {a}")
            if columns.min() < 0:
                raise ValueError("codes must be nonnegative")
        if labels.size and (labels.min() < 0 or labels.max() >= self.label_arity):
            raise ValueError("label code out of range")

    @property
    def n_samples(self) -> int:
        return self.columns.shape[0]

    @property
    def n_features(self) -> int:
        return self.columns.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.columns[:, j]


@dataclass(frozen=True)
class TraceDocument:
    """One analyzed sample: an ordered API-call token sequence plus its label."""

    sample_id: str
    calls: tuple[str, ...]
    label: int

    def __post_init__(self):
        object.__setattr__(self, "calls", tuple(self.calls))
        if not self.calls:
            raise ValueError(f"trace {self.sample_id!r} has no calls")


@dataclass(frozen=True)
class FoldPlan:
    """Stratified train/test index pairs; test sets partition the samples."""

    folds: tuple[tuple[np.ndarray, np.ndarray], ...]
    k: int
    seed: int

    def __post_init__(self):
        object.__setattr__(
            self,
            "folds",
            tuple((_freeze(np.asarray(tr)), _freeze(np.asarray(te))) for tr, te in self.folds),
        )


def load_csv(path, label_column: str) -> Dataset:
    """Load a header-first CSV of numeric feature columns plus a 0/1 label column.

    Cell problems are reported with their file line number and column name.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, header row required") from None
        seen = set()
        for name in header:
            if not name:
                raise ValueError(f"{path}: empty column name in header")
            if name in seen:
                raise ValueError(f"{path}: duplicate column name {name!r}")
            seen.add(name)
        if label_column not in header:
            raise ValueError(f"{path}: label column {label_column!r} not in header")
        label_idx = header.index(label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]

        rows, labels = [], []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(
                    f"{path}: line {line_no} has {len(row)} cells, expected {len(header)}"
                )
            token = row[label_idx].strip()
            if token not in ("0", "1"):
                raise ValueError(
                    f"{path}: line {line_no}, column {label_column!r}: "
                    f"label must be 0 or 1, got {token!r}"
                )
            labels.append(int(token))
            parsed = []
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    raise ValueError(
                        f"{path}: line {line_no}, column {header[i]!r}: "
                        f"non-numeric cell {cell!r}"
                    ) from None
                if not math.isfinite(v):
                    raise ValueError(
                        f"{path}: line {line_no}, column {header[i]!r}: "
                        f"non-finite cell {cell!r}"
                    )
                parsed.append(v)
            rows.append(parsed)

    values = np.array(rows, dtype=np.float64) if rows else np.empty((0, len(feature_names)))
    return Dataset(tuple(feature_names), values, np.array(labels, dtype=np.int64))


def save_csv(ds: Dataset, path, label_column: str = "label") -> None:
    """Write a Dataset in the format load_csv reads (features then label)."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(ds.feature_names) + [label_column])
        for row, label in zip(ds.values, ds.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])


def ingest_traces(trace_dir, manifest) -> list[TraceDocument]:
    """Read one TraceDocument per manifest row (CSV columns filename,label).

    Trace files hold one call token per line; blank lines are ignored and the
    filename stem becomes the sample id. Labeled-but-missing and empty files
    are errors; unlabeled files in the directory produce a warning only.
    """
    trace_dir = Path(trace_dir)
    manifest = Path(manifest)
    if not trace_dir.is_dir():
        raise FileNotFoundError(f"no such directory: {trace_dir}")
    if not manifest.is_file():
        raise FileNotFoundError(f"no such file: {manifest}")

    entries: list[tuple[str, int]] = []
    with manifest.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["filename", "label"]:
            raise ValueError(f"{manifest}: expected header 'filename,label'")
        seen = set()
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ValueError(f"{manifest}: line {line_no}: expected 2 cells")
            filename, token = row[0].strip(), row[1].strip()
            if token not in ("0", "1"):
                raise ValueError(
                    f"{manifest}: line {line_no}: label must be 0 or 1, got {token!r}"
                )
            if filename in seen:
                raise ValueError(
                    f"{manifest}: line {line_no}: duplicate trace file {filename!r}"
                )
            seen.add(filename)
            entries.append((filename, int(token)))

    listed = {fn for fn, _ in entries}
    unlabeled = sorted(
        p.name
        for p in trace_dir.iterdir()
        if p.is_file() and p.name not in listed and p.resolve() != manifest.resolve()
    )
    if unlabeled:
        warnings.warn(f"skipping {len(unlabeled)} unlabeled trace file(s): {', '.join(unlabeled)}")

    docs = []
    for filename, label in entries:
        trace_path = trace_dir / filename
        if not trace_path.is_file():
            raise FileNotFoundError(f"manifest references missing trace file: {trace_path}")
        calls = [
            line.strip()
            for line in trace_path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        if not calls:
            raise ValueError(f"empty trace file: {trace_path}")
        docs.append(TraceDocument(sample_id=trace_path.stem, calls=tuple(calls), label=label))
    return docs


def tfidf_vectorize(corpus: list[TraceDocument], min_df: int = 2) -> Dataset:
    """TF-IDF weight matrix over call tokens, one feature per surviving token.

    tf(t, d) = count(t in d) / len(d); idf(t) = ln((1 + N) / (1 + df(t))) + 1.
    Tokens below the document-frequency threshold are dropped; surviving
    tokens become features in lexicographic order.
    """
    if not corpus:
        raise ValueError("corpus is empty")
    if min_df < 1:
        raise ValueError("min_df must be >= 1")

    n_docs = len(corpus)
    doc_counts = [Counter(doc.calls) for doc in corpus]
    df = Counter()
    for counts in doc_counts:
        df.update(counts.keys())
    vocab = sorted(t for t, d in df.items() if d >= min_df)
    if not vocab:
        raise ValueError(f"vocabulary is empty after min_df={min_df} filtering")
    col = {t: j for j, t in enumerate(vocab)}
    idf = np.array([math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in vocab])

    values = np.zeros((n_docs, len(vocab)))
    for i, (doc, counts) in enumerate(zip(corpus, doc_counts)):
        length = len(doc.calls)
        for token, count in counts.items():
            j = col.get(token)
            if j is not None:
                values[i, j] = (count / length) * idf[j]
    labels = np.array([doc.label for doc in corpus], dtype=np.int64)
    return Dataset(tuple(vocab), values, labels)


def _discretize_column(x: np.ndarray, bins: int, strategy: str) -> np.ndarray:
    lo, hi = x.min(), x.max()
    if lo == hi:
        return np.zeros(x.size, dtype=np.int64)
    if strategy == "equal_frequency":
        qs = np.arange(1, bins) / bins
        edges = np.quantile(x, qs)
    elif strategy == "equal_width":
        edges = np.linspace(lo, hi, bins + 1)[1:-1]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    # dropping duplicate edges keeps codes contiguous when quantiles collide;
    # side='left' sends values equal to an edge into the lower bin, so equal
    # values always share a bin
    edges = np.unique(edges)
    codes = np.searchsorted(edges, x, side="left")
    _, codes = np.unique(codes, return_inverse=True)
    return codes.astype(np.int64)


def discretize(ds: Dataset, bins: int = 5, strategy: str = "equal_frequency") -> DiscreteDataset:
    """Independent per-column binning of a Dataset's values.

    Constant columns collapse to a single code with arity 1; otherwise codes
    are contiguous from 0 and the arity is the number of bins actually used.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    n, m = ds.values.shape
    columns = np.zeros((n, m), dtype=np.int64)
    arities = []
    for j in range(m):
        if n == 0:
            arities.append(1)
            continue
        codes = _discretize_column(ds.values[:, j], bins, strategy)
        columns[:, j] = codes
        arities.append(int(codes.max()) + 1)
    label_arity = int(ds.labels.max()) + 1 if n else 1
    return DiscreteDataset(columns, tuple(arities), ds.labels, label_arity)


def stratified_kfold(ds: Dataset, k: int, seed: int) -> FoldPlan:
    """Deterministic stratified k-fold split of a Dataset's sample indices.

    Per-class leftovers go to the currently lightest folds, so fold sizes
    differ by at most one overall and per class.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    test_sets: list[list[np.ndarray]] = [[] for _ in range(k)]
    fold_totals = np.zeros(k, dtype=np.int64)
    for cls in np.unique(ds.labels):
        idx = np.flatnonzero(ds.labels == cls)
        if idx.size < k:
            raise ValueError(f"class {int(cls)} has {idx.size} samples, fewer than k={k}")
        rng.shuffle(idx)
        base, extra = divmod(idx.size, k)
        # lightest folds (ties by fold id) absorb the remainder
        order = np.lexsort((np.arange(k), fold_totals))
        sizes = np.full(k, base, dtype=np.int64)
        sizes[order[:extra]] += 1
        stop = np.cumsum(sizes)
        start = stop - sizes
        for f in range(k):
            test_sets[f].append(idx[start[f]:stop[f]])
        fold_totals += sizes

    all_idx = np.arange(ds.n_samples)
    folds = []
    for f in range(k):
        test = np.sort(np.concatenate(test_sets[f]))
        train = np.setdiff1d(all_idx, test, assume_unique=True)
        folds.append((train, test))
    return FoldPlan(tuple(folds), k=k, seed=seed)


@dataclass(frozen=True)
class CorpusConfig:
    """Knobs for the synthetic trace-corpus generator.

    Informative tokens appear in an exact per-class share of documents
    (``p_informative_*`` realized as document frequencies, placement
    randomized); each redundant token copies the per-document presence and
    occurrence count of its designated informative partner; noise tokens are
    placed without regard to class. Remaining vocabulary is background
    padding drawn to reach each trace's target length.
    """

    n_ransomware: int = 1000
    n_benign: int = 1000
    vocab_size: int = 200
    n_informative: int = 5
    n_redundant: int = 5
    n_noise: int = 10
    p_informative_ransomware: float = 0.8
    p_informative_benign: float = 0.1
    p_noise: float = 0.5
    min_trace_len: int = 20
    max_trace_len: int = 200

    def __post_init__(self):
        if self.n_ransomware < 1 or self.n_benign < 1:
            raise ValueError("need at least one document per class")
        special = self.n_informative + self.n_redundant + self.n_noise
        if self.vocab_size < special:
            raise ValueError(
                f"vocab_size={self.vocab_size} smaller than "
                f"informative+redundant+noise={special}"
            )
        if self.n_redundant > 0 and self.n_informative == 0:
            raise ValueError("redundant tokens need an informative partner")
        for p in (self.p_informative_ransomware, self.p_informative_benign, self.p_noise):
            if not 0.0 <= p <= 1.0:
                raise ValueError("emission probabilities must lie in [0, 1]")
        if not 1 <= self.min_trace_len <= self.max_trace_len:
            raise ValueError("need 1 <= min_trace_len <= max_trace_len")


def _exact_presence(rng, n_docs: int, p: float) -> np.ndarray:
    """Boolean presence over n_docs with an exact round(p * n_docs) count."""
    present = np.zeros(n_docs, dtype=bool)
    count = int(round(p * n_docs))
    if count:
        present[rng.choice(n_docs, size=count, replace=False)] = True
    return present


def synth_corpus(config: CorpusConfig, seed: int) -> tuple[list[TraceDocument], set[str]]:
    """Generate a labeled trace corpus with known informative tokens.

    Returns the documents (ransomware first, then benign) and the ground-truth
    set of informative token names. Same (config, seed) reproduces the corpus
    exactly.
    """
    rng = np.random.default_rng(seed)
    n_r, n_b = config.n_ransomware, config.n_benign
    n_docs = n_r + n_b

    informative = [f"inf_{i:02d}" for i in range(config.n_informative)]
    redundant = [f"red_{i:02d}" for i in range(config.n_redundant)]
    noise = [f"noise_{i:02d}" for i in range(config.n_noise)]
    n_background = config.vocab_size - len(informative) - len(redundant) - len(noise)
    background = [f"call_{i:03d}" for i in range(n_background)]

    # per-marker occurrence counts (0 = absent), documents 0..n_r-1 ransomware
    marker_tokens: list[str] = []
    count_rows: list[np.ndarray] = []

    inf_counts = []
    for token in informative:
        present = np.concatenate([
            _exact_presence(rng, n_r, config.p_informative_ransomware),
            _exact_presence(rng, n_b, config.p_informative_benign),
        ])
        counts = np.where(present, rng.integers(1, 4, size=n_docs), 0)
        inf_counts.append(counts)
        marker_tokens.append(token)
        count_rows.append(counts)
    for j, token in enumerate(redundant):
        marker_tokens.append(token)
        count_rows.append(inf_counts[j % config.n_informative])
    for token in noise:
        present = _exact_presence(rng, n_docs, config.p_noise)
        marker_tokens.append(token)
        count_rows.append(np.where(present, rng.integers(1, 4, size=n_docs), 0))

    count_matrix = (
        np.stack(count_rows) if count_rows else np.zeros((0, n_docs), dtype=np.int64)
    )
    target_lens = rng.integers(config.min_trace_len, config.max_trace_len + 1, size=n_docs)

    docs = []
    for d in range(n_docs):
        calls: list[str] = []
        for m, token in enumerate(marker_tokens):
            calls.extend([token] * int(count_matrix[m, d]))
        pad = int(target_lens[d]) - len(calls)
        if pad > 0:
            if background:
                calls.extend(rng.choice(background, size=pad).tolist())
            elif not calls:
                raise ValueError(
                    "document would be empty: no marker emitted and no background vocabulary"
                )
        rng.shuffle(calls)
        label = 1 if d < n_r else 0
        docs.append(TraceDocument(sample_id=f"trace_{d:05d}", calls=tuple(calls), label=label))
    return docs, set(informative)
