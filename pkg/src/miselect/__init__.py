"""Information-theoretic feature selection with gradual redundancy
up-weighting, baseline selectors, from-scratch classifiers, and a
cross-validated evaluation harness for API-call trace data."""

__version__ = "0.1.0"

from .data import (
    CorpusConfig,
    Dataset,
    DiscreteDataset,
    FoldPlan,
    TraceDocument,
    discretize,
    ingest_traces,
    load_csv,
    save_csv,
    stratified_kfold,
    synth_corpus,
    tfidf_vectorize,
)
from .infotheory import (
    ContingencyTable,
    conditional_mutual_information,
    entropy,
    joint_pair_mi,
    mutual_information,
)
from .selectors import (
    METHODS,
    SelectionResult,
    SelectionState,
    SelectorConfig,
    compute_beta,
    greedy_select,
    score_emifs,
    score_linear_baseline,
    score_maxmin,
)
from .classifiers import (
    MODEL_KINDS,
    ConfusionCounts,
    ModelSpec,
    accuracy,
    confusion,
    train_predict,
)
from .evaluation import (
    AccuracyTable,
    ExperimentPlan,
    TTestResult,
    emit_report,
    paired_ttest,
    run_experiment,
    ttest_grid,
)

__all__ = [
    "__version__",
    "CorpusConfig",
    "Dataset",
    "DiscreteDataset",
    "FoldPlan",
    "TraceDocument",
    "discretize",
    "ingest_traces",
    "load_csv",
    "save_csv",
    "stratified_kfold",
    "synth_corpus",
    "tfidf_vectorize",
    "ContingencyTable",
    "conditional_mutual_information",
    "entropy",
    "joint_pair_mi",
    "mutual_information",
    "METHODS",
    "SelectionResult",
    "SelectionState",
    "SelectorConfig",
    "compute_beta",
    "greedy_select",
    "score_emifs",
    "score_linear_baseline",
    "score_maxmin",
    "MODEL_KINDS",
    "ConfusionCounts",
    "ModelSpec",
    "accuracy",
    "confusion",
    "train_predict",
    "AccuracyTable",
    "ExperimentPlan",
    "TTestResult",
    "emit_report",
    "paired_ttest",
    "run_experiment",
    "ttest_grid",
]
