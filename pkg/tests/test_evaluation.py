import json
import math

import numpy as np
import pytest
from scipy import stats

from miselect.classifiers import ModelSpec
from miselect.data import CorpusConfig, Dataset, stratified_kfold, synth_corpus, tfidf_vectorize
from miselect.evaluation import (
    AccuracyTable,
    ExperimentPlan,
    TTestResult,
    emit_report,
    paired_ttest,
    run_experiment,
    ttest_grid,
)
from miselect.selectors import SelectorConfig


def small_dataset(seed=0):
    cfg = CorpusConfig(n_ransomware=30, n_benign=30, vocab_size=40,
                       n_informative=3, n_redundant=2, n_noise=5,
                       min_trace_len=8, max_trace_len=30)
    docs, _ = synth_corpus(cfg, seed)
    return tfidf_vectorize(docs, min_df=2)


def small_plan(**overrides):
    defaults = dict(
        selectors=(SelectorConfig("emifs", tau=4), SelectorConfig("mrmr", tau=4)),
        set_sizes=(2, 4),
        classifiers=(ModelSpec("knn", {"k": 3}), ModelSpec("tree", {"max_depth": 4})),
        k_folds=3,
        seed=11,
        bins=4,
    )
    defaults.update(overrides)
    return ExperimentPlan(**defaults)


class TestPlanValidation:
    def test_rejects_bad_plans(self):
        with pytest.raises(ValueError, match="increasing"):
            small_plan(set_sizes=(4, 2))
        with pytest.raises(ValueError, match="positive"):
            small_plan(set_sizes=(0, 2))
        with pytest.raises(ValueError, match="k_folds"):
            small_plan(k_folds=1)
        with pytest.raises(ValueError, match="selector"):
            small_plan(selectors=())

    def test_to_dict_round_trips_config(self):
        plan = small_plan()
        d = plan.to_dict()
        assert d["set_sizes"] == [2, 4]
        assert d["selectors"][0]["method"] == "emifs"
        assert d["classifiers"][0]["kind"] == "knn"


class TestRunExperiment:
    def test_table_layout_and_avg(self):
        ds = small_dataset()
        tables = run_experiment(small_plan(), ds)
        assert [t.selector for t in tables] == ["emifs", "mrmr"]
        for table in tables:
            assert table.set_sizes == (2, 4)
            assert table.classifiers == ("knn", "tree")
            assert table.cells.shape == (2, 2)
            assert np.all((table.cells >= 0) & (table.cells <= 1))
            for j in range(2):
                assert table.avg_row[j] == pytest.approx(
                    table.cells[:, j].mean(), abs=1e-12
                )

    def test_deterministic_reruns(self):
        ds = small_dataset()
        a = run_experiment(small_plan(), ds)
        b = run_experiment(small_plan(), ds)
        for ta, tb in zip(a, b):
            assert np.array_equal(ta.cells, tb.cells)
            assert ta.fold_orders == tb.fold_orders

    def test_threads_do_not_change_results(self):
        ds = small_dataset()
        a = run_experiment(small_plan(), ds, threads=1)
        b = run_experiment(small_plan(), ds, threads=4)
        for ta, tb in zip(a, b):
            assert np.array_equal(ta.cells, tb.cells)
            assert ta.fold_orders == tb.fold_orders

    def test_selection_ignores_test_fold_labels(self):
        # permuting labels inside one test fold must not move that fold's
        # selection (it reads the training split only)
        ds = small_dataset()
        plan = small_plan()
        folds = stratified_kfold(ds, plan.k_folds, plan.seed)
        base = run_experiment(plan, ds, folds=folds)

        rng = np.random.default_rng(99)
        for fold_id in range(plan.k_folds):
            _, test_idx = folds.folds[fold_id]
            labels = ds.labels.copy()
            labels[test_idx] = rng.permutation(labels[test_idx])
            shuffled = Dataset(ds.feature_names, ds.values, labels)
            redone = run_experiment(plan, shuffled, folds=folds)
            for ta, tb in zip(base, redone):
                assert ta.fold_orders[fold_id] == tb.fold_orders[fold_id]

    def test_prefix_consistency_across_sizes(self):
        ds = small_dataset()
        wide = run_experiment(small_plan(set_sizes=(2, 4)), ds)
        narrow = run_experiment(small_plan(set_sizes=(2,),
                                           selectors=(SelectorConfig("emifs", tau=2),
                                                      SelectorConfig("mrmr", tau=2))), ds)
        for tw, tn in zip(wide, narrow):
            for wide_order, narrow_order in zip(tw.fold_orders, tn.fold_orders):
                assert wide_order[:2] == narrow_order

    def test_oversized_set_sizes_truncated_with_warning(self):
        ds = small_dataset()
        plan = small_plan(set_sizes=(2, 500))
        with pytest.warns(UserWarning, match="available features"):
            tables = run_experiment(plan, ds)
        assert tables[0].set_sizes == (2,)

    def test_unusable_dataset_rejected(self):
        ds = Dataset(("a",), np.empty((0, 1)), np.empty(0, dtype=int))
        with pytest.raises(ValueError, match="no samples"):
            run_experiment(small_plan(), ds)


class TestPairedTTest:
    def test_identical_vectors_degenerate_not_significant(self):
        a = [0.9, 0.91, 0.92, 0.93]
        r = paired_ttest(a, a)
        assert r.degenerate and r.p_value == 1.0 and not r.significant
        assert r.t_value == 0.0

    def test_constant_shift_degenerate_zero_p(self):
        a = np.array([0.9, 0.91, 0.92, 0.93])
        r = paired_ttest(a + 0.01, a)
        assert r.degenerate and r.p_value == 0.0 and r.significant
        assert math.isinf(r.t_value) and r.t_value > 0

    def test_regression_vector_case(self):
        a = [0.91, 0.92, 0.93, 0.94, 0.95]
        b = [0.90, 0.90, 0.92, 0.93, 0.93]
        r = paired_ttest(a, b, tails="one")
        # closed form: d mean 0.014, sample sd sqrt(3e-05)
        t_expected = 0.014 / (math.sqrt(3e-05) / math.sqrt(5))
        assert r.t_value == pytest.approx(t_expected, abs=1e-12)
        assert r.degrees_of_freedom == 4
        # frozen from the numeric-integration oracle of the t density
        assert r.p_value == pytest.approx(0.002317919708952208, abs=1e-10)
        assert r.significant

    def test_matches_scipy_reference(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            n = int(rng.integers(3, 12))
            a = rng.normal(0.9, 0.05, size=n)
            b = a + rng.normal(0.0, 0.02, size=n)
            ours = paired_ttest(a, b, tails="two")
            ref = stats.ttest_rel(a, b)
            assert ours.t_value == pytest.approx(ref.statistic, abs=1e-9)
            assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-9)
            one = paired_ttest(a, b, tails="one")
            ref_one = stats.ttest_rel(a, b, alternative="greater")
            assert one.p_value == pytest.approx(ref_one.pvalue, abs=1e-9)

    def test_antisymmetry_and_shift_invariance(self):
        rng = np.random.default_rng(22)
        a = rng.normal(0.9, 0.03, size=8)
        b = rng.normal(0.88, 0.03, size=8)
        fwd = paired_ttest(a, b, tails="two")
        rev = paired_ttest(b, a, tails="two")
        assert rev.t_value == -fwd.t_value
        assert rev.p_value == fwd.p_value
        shifted = paired_ttest(a + 0.5, b + 0.5, tails="two")
        assert shifted.t_value == pytest.approx(fwd.t_value, abs=1e-12)

    def test_negative_t_one_tailed_p_above_half(self):
        a = [0.80, 0.81, 0.79, 0.80, 0.82]
        b = [0.90, 0.91, 0.89, 0.93, 0.88]
        r = paired_ttest(a, b, tails="one")
        assert r.t_value < 0 and r.p_value > 0.5 and not r.significant

    def test_errors(self):
        with pytest.raises(ValueError, match="two paired"):
            paired_ttest([0.9], [0.8])
        with pytest.raises(ValueError, match="shape"):
            paired_ttest([0.9, 0.8], [0.8])
        with pytest.raises(ValueError, match="tails"):
            paired_ttest([0.9, 0.8], [0.8, 0.7], tails="three")
        with pytest.raises(ValueError, match="alpha"):
            paired_ttest([0.9, 0.8], [0.8, 0.7], alpha=0.0)


def toy_tables():
    sizes = tuple(range(5, 55, 5))
    rng = np.random.default_rng(31)
    base = 0.9 + 0.005 * rng.standard_normal((10, 4))
    t1 = AccuracyTable("emifs", sizes, ("logistic", "tree", "knn", "forest"),
                       np.clip(base + 0.01, 0, 1))
    t2 = AccuracyTable("mrmr", sizes, ("logistic", "tree", "knn", "forest"),
                       np.clip(base, 0, 1))
    return [t1, t2]


class TestTTestGrid:
    def test_pairs_and_labels(self):
        results = ttest_grid(toy_tables(), alpha=0.05, tails="one")
        assert len(results) == 4
        assert all(r.a_id == "emifs" and r.b_id == "mrmr" for r in results)
        assert [r.classifier for r in results] == ["logistic", "tree", "knn", "forest"]

    def test_mismatched_grids_rejected(self):
        t1, t2 = toy_tables()
        t3 = AccuracyTable("x", t1.set_sizes[:5], t1.classifiers, t1.cells[:5])
        with pytest.raises(ValueError, match="share a grid"):
            ttest_grid([t1, t3])


class TestEmitReport:
    def test_round_trip_and_layout(self, tmp_path):
        tables = toy_tables()
        ttests = ttest_grid(tables)
        out = tmp_path / "report"
        written = emit_report(tables, ttests, out, plan_echo={"k_folds": 10}, seed=7)
        names = {p.name for p in written}
        assert "report.json" in names and "plotdata.csv" in names

        doc = json.loads((out / "report.json").read_text())
        assert doc["seed"] == 7
        assert doc["plan_echo"] == {"k_folds": 10}
        assert doc["tables"] == [t.to_dict() for t in tables]
        assert doc["ttests"] == [t.to_dict() for t in ttests]

        csv_lines = (out / "accuracy_emifs.csv").read_text().strip().split("\n")
        assert len(csv_lines) == 12  # header + 10 sizes + Avg.
        assert csv_lines[0] == "features,logistic,tree,knn,forest"
        assert csv_lines[-1].startswith("Avg.,")
        assert all(len(line.split(",")) == 5 for line in csv_lines)

    def test_plotdata_cardinality(self, tmp_path):
        t1, t2 = toy_tables()
        one_clf = [
            AccuracyTable(t.selector, t.set_sizes, ("forest",), t.cells[:, 3:4])
            for t in (t1, t2)
        ]
        emit_report(one_clf, [], tmp_path, formats=("plotdata",))
        lines = (tmp_path / "plotdata.csv").read_text().strip().split("\n")
        assert len(lines) == 1 + 2 * 10
        series = {tuple(line.split(",")[:2]) for line in lines[1:]}
        assert len(series) == 2

    def test_avg_row_consistency(self):
        for table in toy_tables():
            d = table.to_dict()
            cols = np.array([row["accuracy"] for row in d["rows"]])
            assert np.allclose(cols.mean(axis=0), d["avg"], atol=1e-6)

    def test_unwritable_directory(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(OSError, match="not writable"):
            emit_report(toy_tables(), [], blocker / "sub")

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="formats"):
            emit_report(toy_tables(), [], tmp_path, formats=("yaml",))

    def test_degenerate_ttest_serializes(self, tmp_path):
        r = paired_ttest([0.9, 0.91], [0.8, 0.81], a_id="a", b_id="b", classifier="knn")
        emit_report([], [r], tmp_path)
        doc = json.loads((tmp_path / "report.json").read_text())
        assert doc["ttests"][0]["degenerate"] is True
        assert doc["ttests"][0]["p_value"] == 0.0
