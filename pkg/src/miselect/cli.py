"""Command-line front door: synth, ingest, select, evaluate, report.

Exit codes: 0 success, 1 usage error, 2 data/runtime error. Every output
document echoes the seed and the effective configuration, so a run can be
reproduced exactly from its own output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classifiers import MODEL_KINDS, ModelSpec
from .data import (
    CorpusConfig,
    ingest_traces,
    load_csv,
    save_csv,
    discretize,
    synth_corpus,
    tfidf_vectorize,
)
from .evaluation import (
    DEFAULT_SET_SIZES,
    AccuracyTable,
    ExperimentPlan,
    TTestResult,
    emit_report,
    run_experiment,
    ttest_grid,
)
from .selectors import METHODS, SelectorConfig, greedy_select

SEED_ENV_VAR = "MISELECT_SEED"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise _UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def build_parser() -> _Parser:
    parser = _Parser(prog="miselect", description=__doc__)
    parser.add_argument("--version", action="version", version=f"miselect {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("synth",
                       help="generate a synthetic trace corpus with known ground truth")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("ingest",
                       help="turn labeled trace files into a TF-IDF feature CSV")
    p.add_argument("--input", required=True, help="directory of trace files")
    p.add_argument("--manifest", default=None,
                   help="filename,label manifest (default: <input>/manifest.csv)")
    p.add_argument("--min-df", type=int, default=2)
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("select",
                       help="run one feature selector on a feature CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--method", default="emifs", choices=METHODS)
    p.add_argument("--tau", type=int, default=30)
    p.add_argument("--beta", type=float, default=0.5, help="fixed beta for mifs")
    p.add_argument("--bins", type=int, default=5)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output JSON path")

    p = sub.add_parser("evaluate",
                       help="run the selectors x sizes x classifiers CV grid")
    p.add_argument("--input", required=True)
    p.add_argument("--method", default="emifs,mm_emifs",
                   help="comma-separated selector methods")
    p.add_argument("--sizes", default=",".join(str(s) for s in DEFAULT_SET_SIZES))
    p.add_argument("--classifiers", default="logistic,tree,knn,forest")
    p.add_argument("--k-folds", type=int, default=10)
    p.add_argument("--bins", type=int, default=5)
    p.add_argument("--beta", type=float, default=0.5, help="fixed beta for mifs")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--tails", default="one", choices=("one", "two"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", required=True, help="output report document (JSON)")

    p = sub.add_parser("report",
                       help="render tables and plot series from an evaluate document")
    p.add_argument("--input", required=True, help="report document from evaluate")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _resolve_seed(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _UsageError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
    return 0


def _cmd_synth(args) -> None:
    seed = _resolve_seed(args.seed)
    config = CorpusConfig()
    docs, ground_truth = synth_corpus(config, seed)
    out = Path(args.out)
    trace_dir = out / "traces"
    trace_dir.mkdir(parents=True, exist_ok=True)
    manifest_lines = ["filename,label"]
    for doc in docs:
        (trace_dir / f"{doc.sample_id}.trace").write_text(
            "\n".join(doc.calls) + "\n", encoding="utf-8"
        )
        manifest_lines.append(f"{doc.sample_id}.trace,{doc.label}")
    (out / "manifest.csv").write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    doc = {
        "config": {**config.__dict__, "subcommand": "synth", "out": str(out)},
        "seed": seed,
        "informative_tokens": sorted(ground_truth),
        "n_documents": len(docs),
        "tool_version": __version__,
    }
    (out / "ground_truth.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(docs)} traces to {trace_dir}")


def _cmd_ingest(args) -> None:
    trace_dir = Path(args.input)
    manifest = Path(args.manifest) if args.manifest else trace_dir / "manifest.csv"
    docs = ingest_traces(trace_dir, manifest)
    ds = tfidf_vectorize(docs, min_df=args.min_df)
    save_csv(ds, args.out)
    print(f"wrote {ds.n_samples} x {ds.n_features} feature matrix to {args.out}")


def _cmd_select(args) -> None:
    seed = _resolve_seed(args.seed)
    ds = load_csv(args.input, label_column="label")
    if not ds.usable:
        raise ValueError(f"{args.input}: dataset has no usable samples or features")
    disc = discretize(ds, bins=args.bins)
    config = SelectorConfig(method=args.method, tau=args.tau, beta_fixed=args.beta)
    result = greedy_select(disc, config)
    doc = {
        "config": {
            "subcommand": "select",
            "input": str(args.input),
            "method": args.method,
            "tau": args.tau,
            "beta_fixed": args.beta,
            "bins": args.bins,
        },
        "seed": seed,
        "order": [ds.feature_names[j] for j in result.order],
        "scores": list(result.scores),
        "beta_trajectory": list(result.beta_trajectory),
        "tool_version": __version__,
    }
    Path(args.out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"selected {len(result.order)} features with {args.method}; wrote {args.out}")


def _parse_evaluate_plan(args, seed: int) -> ExperimentPlan:
    methods = [tok for tok in args.method.split(",") if tok]
    for m in methods:
        if m not in METHODS:
            raise _UsageError(f"unknown method {m!r}; expected one of {METHODS}")
    kinds = [tok for tok in args.classifiers.split(",") if tok]
    for kind in kinds:
        if kind not in MODEL_KINDS:
            raise _UsageError(f"unknown classifier {kind!r}; expected one of {MODEL_KINDS}")
    sizes = _int_list(args.sizes)
    selectors = tuple(
        SelectorConfig(method=m, tau=max(sizes), beta_fixed=args.beta) for m in methods
    )
    return ExperimentPlan(
        selectors=selectors,
        set_sizes=tuple(sizes),
        classifiers=tuple(ModelSpec(kind) for kind in kinds),
        k_folds=args.k_folds,
        seed=seed,
        bins=args.bins,
    )


def _cmd_evaluate(args) -> None:
    seed = _resolve_seed(args.seed)
    plan = _parse_evaluate_plan(args, seed)
    ds = load_csv(args.input, label_column="label")
    if not ds.usable:
        raise ValueError(f"{args.input}: dataset has no usable samples or features")
    tables = run_experiment(plan, ds, threads=max(1, args.threads))
    ttests = ttest_grid(tables, alpha=args.alpha, tails=args.tails)
    doc = {
        "plan_echo": {
            **plan.to_dict(),
            "subcommand": "evaluate",
            "input": str(args.input),
            "alpha": args.alpha,
            "tails": args.tails,
        },
        "tables": [t.to_dict() for t in tables],
        "ttests": [t.to_dict() for t in ttests],
        "seed": seed,
        "tool_version": __version__,
    }
    Path(args.out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"evaluated {len(tables)} selector(s); wrote {args.out}")


def _cmd_report(args) -> None:
    doc = json.loads(Path(args.input).read_text(encoding="utf-8"))
    tables = []
    for td in doc["tables"]:
        tables.append(
            AccuracyTable(
                selector=td["selector"],
                set_sizes=tuple(td["set_sizes"]),
                classifiers=tuple(td["classifiers"]),
                cells=np.array([row["accuracy"] for row in td["rows"]]),
                fold_orders=tuple(tuple(sel) for sel in td.get("fold_selections", [])),
            )
        )
    ttests = [
        TTestResult(
            t_value=float(td["t_value"]),
            p_value=float(td["p_value"]),
            degrees_of_freedom=int(td["degrees_of_freedom"]),
            significant=bool(td["significant"]),
            tails=td["tails"],
            degenerate=bool(td["degenerate"]),
            alpha=float(td["alpha"]),
            a_id=td["a"],
            b_id=td["b"],
            classifier=td["classifier"],
        )
        for td in doc["ttests"]
    ]
    written = emit_report(
        tables,
        ttests,
        args.out,
        plan_echo=doc.get("plan_echo", {}),
        seed=doc.get("seed"),
    )
    print(f"wrote {len(written)} report file(s) to {args.out}")


_COMMANDS = {
    "synth": _cmd_synth,
    "ingest": _cmd_ingest,
    "select": _cmd_select,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
}


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        _COMMANDS[args.subcommand](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"miselect {args.subcommand}: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
