"""Experiment orchestration: selectors x feature-set sizes x classifiers under
stratified k-fold cross validation, plus paired t-tests between selectors.

Feature selection happens once per training fold (never touching the test
split) at the largest requested size; smaller sizes reuse prefixes of that
order, which greedy selection makes consistent. Accuracy cells are averaged
over folds in fold order, so results are identical however the grid is
scheduled.
"""

from __future__ import annotations

import json
import math
import re
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import betainc

from . import __version__
from .classifiers import ModelSpec, accuracy, confusion, train_predict
from .data import Dataset, FoldPlan, discretize, stratified_kfold
from .selectors import SelectorConfig, greedy_select

__all__ = [
    "DEFAULT_SET_SIZES",
    "ExperimentPlan",
    "AccuracyTable",
    "TTestResult",
    "run_experiment",
    "paired_ttest",
    "ttest_grid",
    "emit_report",
]

DEFAULT_SET_SIZES = tuple(range(5, 55, 5))
DEFAULT_CLASSIFIERS = ("logistic", "tree", "knn", "forest")


@dataclass(frozen=True)
class ExperimentPlan:
    """Everything needed to reproduce one evaluation grid."""

    selectors: tuple[SelectorConfig, ...]
    set_sizes: tuple[int, ...] = DEFAULT_SET_SIZES
    classifiers: tuple[ModelSpec, ...] = tuple(
        ModelSpec(kind) for kind in DEFAULT_CLASSIFIERS
    )
    k_folds: int = 10
    seed: int = 0
    bins: int = 5

    def __post_init__(self):
        object.__setattr__(self, "selectors", tuple(self.selectors))
        object.__setattr__(self, "set_sizes", tuple(int(s) for s in self.set_sizes))
        object.__setattr__(self, "classifiers", tuple(self.classifiers))
        if not self.selectors:
            raise ValueError("plan needs at least one selector")
        if not self.classifiers:
            raise ValueError("plan needs at least one classifier")
        if not self.set_sizes or self.set_sizes[0] < 1:
            raise ValueError("set sizes must be positive")
        if any(b >= a for a, b in zip(self.set_sizes[1:], self.set_sizes)):
            raise ValueError("set sizes must be strictly increasing")
        if self.k_folds < 2:
            raise ValueError("k_folds must be >= 2")

    def to_dict(self) -> dict:
        return {
            "selectors": [
                {
                    "method": c.method,
                    "tau": c.tau,
                    "beta_fixed": c.beta_fixed,
                    "gamma": c.gamma,
                }
                for c in self.selectors
            ],
            "set_sizes": list(self.set_sizes),
            "classifiers": [
                {"kind": m.kind, "params": dict(m.params)} for m in self.classifiers
            ],
            "k_folds": self.k_folds,
            "seed": self.seed,
            "bins": self.bins,
        }


@dataclass(frozen=True)
class AccuracyTable:
    """Mean CV accuracy per (feature-set size, classifier) for one selector.

    ``fold_orders`` records the per-fold selected feature names at the
    largest size, for provenance and leakage checks.
    """

    selector: str
    set_sizes: tuple[int, ...]
    classifiers: tuple[str, ...]
    cells: np.ndarray
    fold_orders: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.float64)
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)
        if cells.shape != (len(self.set_sizes), len(self.classifiers)):
            raise ValueError("cells shape does not match sizes x classifiers")

    @property
    def avg_row(self) -> np.ndarray:
        return self.cells.mean(axis=0)

    def column(self, classifier: str) -> np.ndarray:
        return self.cells[:, self.classifiers.index(classifier)]

    def to_dict(self) -> dict:
        return {
            "selector": self.selector,
            "set_sizes": list(self.set_sizes),
            "classifiers": list(self.classifiers),
            "rows": [
                {"features": size, "accuracy": [round(float(v), 6) for v in row]}
                for size, row in zip(self.set_sizes, self.cells)
            ],
            "avg": [round(float(v), 6) for v in self.avg_row],
            "fold_selections": [list(order) for order in self.fold_orders],
        }


def _effective_sizes(set_sizes, n_features: int) -> tuple[int, ...]:
    usable = tuple(s for s in set_sizes if s <= n_features)
    if len(usable) < len(set_sizes):
        warnings.warn(
            f"dropping feature-set sizes above the {n_features} available features"
        )
    return usable if usable else (n_features,)


def _selector_id(config: SelectorConfig) -> str:
    if config.method == "mifs":
        return f"mifs(beta={config.beta_fixed:g})"
    return config.method


def run_experiment(
    plan: ExperimentPlan,
    ds: Dataset,
    folds: FoldPlan | None = None,
    threads: int = 1,
) -> list[AccuracyTable]:
    """Run the full grid and return one AccuracyTable per selector.

    ``folds`` overrides the seeded stratified split (useful for tests); the
    thread count only schedules fold work, never changes results.
    """
    if not ds.usable:
        raise ValueError("dataset has no samples or no features")
    sizes = _effective_sizes(plan.set_sizes, ds.n_features)
    if folds is None:
        folds = stratified_kfold(ds, plan.k_folds, plan.seed)
    max_size = max(sizes)

    def run_fold(args):
        config, train_idx, test_idx = args
        train = ds.take(train_idx)
        test = ds.take(test_idx)
        disc = discretize(train, bins=plan.bins)
        fold_config = SelectorConfig(
            method=config.method,
            tau=max_size,
            beta_fixed=config.beta_fixed,
            gamma=config.gamma,
            log_base=config.log_base,
        )
        order = greedy_select(disc, fold_config).order
        acc = np.zeros((len(sizes), len(plan.classifiers)))
        for i, size in enumerate(sizes):
            subset = list(order[:size])
            for j, spec in enumerate(plan.classifiers):
                predicted = train_predict(spec, train, test, subset)
                acc[i, j] = accuracy(confusion(predicted, test.labels))
        return order, acc

    tables = []
    for config in plan.selectors:
        jobs = [(config, tr, te) for tr, te in folds.folds]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(run_fold, jobs))
        else:
            outcomes = [run_fold(job) for job in jobs]
        cells = np.mean([acc for _, acc in outcomes], axis=0)
        fold_orders = tuple(
            tuple(ds.feature_names[f] for f in order) for order, _ in outcomes
        )
        tables.append(
            AccuracyTable(
                selector=_selector_id(config),
                set_sizes=sizes,
                classifiers=tuple(m.kind for m in plan.classifiers),
                cells=cells,
                fold_orders=fold_orders,
            )
        )
    return tables


@dataclass(frozen=True)
class TTestResult:
    """Paired t-test outcome; ``degenerate`` marks a zero-variance difference."""

    t_value: float
    p_value: float
    degrees_of_freedom: int
    significant: bool
    tails: str
    degenerate: bool
    alpha: float = 0.05
    a_id: str = ""
    b_id: str = ""
    classifier: str = ""

    def to_dict(self) -> dict:
        return {
            "a": self.a_id,
            "b": self.b_id,
            "classifier": self.classifier,
            "t_value": round(self.t_value, 6) if math.isfinite(self.t_value) else self.t_value,
            "p_value": round(self.p_value, 6),
            "degrees_of_freedom": self.degrees_of_freedom,
            "significant": self.significant,
            "tails": self.tails,
            "degenerate": self.degenerate,
            "alpha": self.alpha,
        }


def _t_tail(t: float, df: int) -> float:
    """P(T >= t) for Student's t via the regularized incomplete beta."""
    if t == 0.0:
        return 0.5
    half = 0.5 * float(betainc(df / 2.0, 0.5, df / (df + t * t)))
    return half if t > 0 else 1.0 - half


def paired_ttest(a, b, alpha: float = 0.05, tails: str = "one", **labels) -> TTestResult:
    """Paired t-test of accuracy vectors a vs b (one-tailed H1: mean(a-b) > 0).

    Zero-variance differences short-circuit: all-equal vectors give p = 1; a
    constant nonzero shift gives p = 0 with the degenerate flag raised.
    """
    if tails not in ("one", "two"):
        raise ValueError("tails must be 'one' or 'two'")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"paired vectors must share a 1-d shape: {a.shape} vs {b.shape}")
    n = a.size
    if n < 2:
        raise ValueError("need at least two paired observations")
    d = a - b
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    df = n - 1
    if sd == 0.0:
        if mean == 0.0:
            t, p = 0.0, 1.0
        else:
            t, p = math.copysign(math.inf, mean), 0.0
        return TTestResult(t, p, df, p < alpha, tails, True, alpha, **labels)
    t = mean / (sd / math.sqrt(n))
    if tails == "one":
        p = _t_tail(t, df)
    else:
        p = min(1.0, 2.0 * _t_tail(abs(t), df))
    return TTestResult(t, p, df, p < alpha, tails, False, alpha, **labels)


def ttest_grid(
    tables: list[AccuracyTable], alpha: float = 0.05, tails: str = "one"
) -> list[TTestResult]:
    """Paired t-tests per classifier for every ordered pair of selectors.

    Pairing follows the tables' rows (accuracies matched by feature-set
    size); H1 for the one-tailed test is that the earlier-listed selector
    outperforms the later one.
    """
    results = []
    for i, ta in enumerate(tables):
        for tb in tables[i + 1:]:
            if ta.set_sizes != tb.set_sizes or ta.classifiers != tb.classifiers:
                raise ValueError("tables do not share a grid")
            for clf in ta.classifiers:
                results.append(
                    paired_ttest(
                        ta.column(clf),
                        tb.column(clf),
                        alpha=alpha,
                        tails=tails,
                        a_id=ta.selector,
                        b_id=tb.selector,
                        classifier=clf,
                    )
                )
    return results


def emit_report(
    tables: list[AccuracyTable],
    ttests: list[TTestResult],
    out_dir,
    formats=("json", "csv", "plotdata"),
    plan_echo: dict | None = None,
    seed: int | None = None,
) -> list[Path]:
    """Write the report document plus per-table CSVs and plot series.

    The JSON document round-trips the tables and tests; CSVs mirror the
    accuracy-table layout (features column, one column per classifier, final
    Avg. row); plotdata is a long-format CSV of per-classifier series.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out_dir} is not writable: {exc}") from exc

    unknown = set(formats) - {"json", "csv", "plotdata"}
    if unknown:
        raise ValueError(f"unknown report formats: {sorted(unknown)}")

    written = []
    if "json" in formats:
        doc = {
            "plan_echo": plan_echo or {},
            "tables": [t.to_dict() for t in tables],
            "ttests": [t.to_dict() for t in ttests],
            "seed": seed,
            "tool_version": __version__,
        }
        path = out_dir / "report.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(path)
    if "csv" in formats:
        for table in tables:
            slug = re.sub(r"[^A-Za-z0-9_.-]+", "_", table.selector).strip("_")
            path = out_dir / f"accuracy_{slug}.csv"
            lines = ["features," + ",".join(table.classifiers)]
            for size, row in zip(table.set_sizes, table.cells):
                lines.append(f"{size}," + ",".join(f"{v:.6f}" for v in row))
            lines.append("Avg.," + ",".join(f"{v:.6f}" for v in table.avg_row))
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            written.append(path)
    if "plotdata" in formats:
        path = out_dir / "plotdata.csv"
        lines = ["classifier,selector,features,accuracy"]
        for table in tables:
            for clf in table.classifiers:
                for size, v in zip(table.set_sizes, table.column(clf)):
                    lines.append(f"{clf},{table.selector},{size},{v:.6f}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written
