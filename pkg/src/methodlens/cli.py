"""Command-line entry point.

Subcommands: extract, metrics, trace, label, pareto, bugs, correlate, rank,
train, report, pipeline.  Exit codes: 0 success, 2 configuration error,
3 repository error, 4 stage failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .gitrepo import GitRepo, RepoAccessError, UnknownCommit
from .history import MethodNotAtSnapshot
from .labeling import EmptyProject
from .metrics import METRIC_NAMES, compute_metric_vector
from .ml import CLASSIFIER_NAMES
from .pipeline import (
    ConfigError,
    INDICATOR_ALIASES,
    MissingStage,
    PipelineConfig,
    StageError,
    decl_from_record,
    digest_file,
    digest_params,
    emit_plot_data,
    read_ndjson,
    run_bugs,
    run_correlate,
    run_extract,
    run_label,
    run_pareto,
    run_pipeline,
    run_rank,
    run_trace,
    run_train,
    validate_config,
    write_csv,
    write_ndjson,
)

log = logging.getLogger("methodlens")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REPO = 3
EXIT_STAGE = 4


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--repo", help="path to a local git clone")
    common.add_argument("--commit", help="snapshot commit sha")
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--out", help="output directory (default: artifacts)")
    common.add_argument("--seed", type=int, help="root random seed")
    common.add_argument("--jobs", type=int, help="worker threads for tracing")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="methodlens",
        description="Mine per-method change histories from Java git repositories, "
                    "compute inception-time code metrics, and rank/predict "
                    "change-prone methods.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", parents=[common], help="extract methods at a snapshot")
    p.add_argument("--files", default=None, help="glob filter over repository paths")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("metrics", parents=[common], help="annotate methods.ndjson with metric vectors")
    p.add_argument("--methods", required=True, help="methods.ndjson from `extract`")
    p.add_argument("--csv", help="also write a 17-column metrics CSV")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("trace", parents=[common], help="trace per-method change histories")
    p.add_argument("--methods", required=True)
    p.add_argument("--window-years", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("label", parents=[common], help="label methods good/bad/ugly")
    p.add_argument("--histories", required=True)
    p.add_argument("--indicator", choices=sorted(INDICATOR_ALIASES), default=None)
    p.add_argument("--ugly-fraction", type=float, default=None)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("pareto", parents=[common], help="change-concentration curves")
    p.add_argument("--labeled", required=True, help="dataset.ndjson from `label`")
    p.add_argument("--indicator", choices=sorted(INDICATOR_ALIASES), default=None)
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("bugs", parents=[common], help="bug-capture curves")
    p.add_argument("--labeled", required=True, help="dataset.ndjson from `label`")
    p.add_argument("--dataset", choices=["high-recall", "high-precision"], required=True)
    p.add_argument("--indicator", choices=sorted(INDICATOR_ALIASES), default=None)
    p.set_defaults(func=cmd_bugs)

    p = sub.add_parser("correlate", parents=[common], help="metric/indicator correlation table")
    p.add_argument("--labeled", required=True)
    p.add_argument("--indicator", choices=sorted(INDICATOR_ALIASES), default=None)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("rank", parents=[common], help="surprisingly good/ugly candidates")
    p.add_argument("--labeled", required=True)
    p.add_argument("--histories", required=True)
    p.add_argument("--top", type=int, default=None)
    p.add_argument("--per-project", type=int, default=None)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("train", parents=[common], help="train and evaluate classifiers")
    p.add_argument("--approach", type=int, choices=[1, 2], default=None)
    p.add_argument("--classifier", choices=list(CLASSIFIER_NAMES), action="append",
                   help="restrict to one classifier (repeatable; default: all)")
    p.add_argument("--dataset", required=True, help="dataset.ndjson from `label`")
    p.add_argument("--cdf-csv", help="also write per-project (project, precision, recall) points")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("report", parents=[common], help="emit plot-ready CDF CSV files")
    p.add_argument("--artifacts", required=True, help="pipeline output directory")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pipeline", parents=[common], help="run every stage end to end")
    p.add_argument("--files", default=None)
    p.add_argument("--indicator", choices=sorted(INDICATOR_ALIASES), default=None)
    p.add_argument("--ugly-fraction", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--window-years", type=float, default=None)
    p.add_argument("--approach", type=int, choices=[1, 2], default=None)
    p.set_defaults(func=cmd_pipeline)

    return parser


def load_config(args) -> PipelineConfig:
    config = validate_config(args.config) if args.config else PipelineConfig()
    overrides = {
        "repo": getattr(args, "repo", None),
        "commit": getattr(args, "commit", None),
        "out": getattr(args, "out", None),
        "seed": getattr(args, "seed", None),
        "jobs": getattr(args, "jobs", None),
        "files": getattr(args, "files", None),
        "ugly_fraction": getattr(args, "ugly_fraction", None),
        "theta": getattr(args, "theta", None),
        "window_years": getattr(args, "window_years", None),
        "approach": getattr(args, "approach", None),
        "top_n": getattr(args, "top", None),
        "per_project_cap": getattr(args, "per_project", None),
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    indicator = getattr(args, "indicator", None)
    if indicator is not None:
        config.indicator = INDICATOR_ALIASES[indicator]
    return config


def _out_dir(config: PipelineConfig) -> Path:
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require(config: PipelineConfig, *fields) -> None:
    for name in fields:
        if not getattr(config, name):
            raise ConfigError(f"--{name} is required (flag or config file)")


def cmd_extract(args) -> int:
    config = load_config(args)
    _require(config, "repo", "commit")
    repo = GitRepo(config.repo)
    digests = {"params": digest_params({"files": config.files, "commit": config.commit})}
    run_extract(config, repo, _out_dir(config), digests)
    print(f"wrote {_out_dir(config) / 'methods.ndjson'}")
    return EXIT_OK


def cmd_metrics(args) -> int:
    config = load_config(args)
    methods_path = Path(args.methods)
    header, records = read_ndjson(methods_path)
    annotated = []
    vectors = []
    for record in records:
        vector = compute_metric_vector(decl_from_record(record))
        record = dict(record)
        record["metrics"] = vector.as_dict()
        annotated.append(record)
        vectors.append(vector)
    input_digests = dict(header.get("inputDigests", {}))
    write_ndjson(methods_path, header.get("stage", "extract"), input_digests, annotated,
                 extra_header={k: v for k, v in header.items()
                               if k not in ("schemaVersion", "stage", "toolVersion", "inputDigests")})
    print(f"annotated {len(annotated)} records in {methods_path}")
    if args.csv:
        rows = [[repr(float(getattr(v, name))) if isinstance(getattr(v, name), float)
                 else getattr(v, name) for name in METRIC_NAMES] for v in vectors]
        write_csv(Path(args.csv), list(METRIC_NAMES), rows)
        print(f"wrote {args.csv}")
    return EXIT_OK


def cmd_trace(args) -> int:
    config = load_config(args)
    _require(config, "repo", "commit")
    repo = GitRepo(config.repo)
    methods_path = Path(args.methods)
    digests = {
        "methods.ndjson": digest_file(methods_path),
        "params": digest_params({"theta": config.theta, "windowYears": config.window_years}),
    }
    run_trace(config, repo, _out_dir(config), digests, methods_path=methods_path)
    print(f"wrote {_out_dir(config) / 'histories.ndjson'}")
    return EXIT_OK


def cmd_label(args) -> int:
    config = load_config(args)
    histories_path = Path(args.histories)
    digests = {
        "histories.ndjson": digest_file(histories_path),
        "params": digest_params({"indicator": config.indicator, "uglyFraction": config.ugly_fraction}),
    }
    run_label(config, _out_dir(config), digests, histories_path=histories_path)
    print(f"wrote {_out_dir(config) / 'dataset.ndjson'}")
    return EXIT_OK


def cmd_pareto(args) -> int:
    config = load_config(args)
    dataset_path = Path(args.labeled)
    run_pareto(config, _out_dir(config), {"dataset.ndjson": digest_file(dataset_path)},
               dataset_path=dataset_path)
    print(f"wrote {_out_dir(config) / 'pareto.csv'}")
    return EXIT_OK


def cmd_bugs(args) -> int:
    config = load_config(args)
    dataset_path = Path(args.labeled)
    dataset = "highRecall" if args.dataset == "high-recall" else "highPrecision"
    run_bugs(config, _out_dir(config), {"dataset.ndjson": digest_file(dataset_path)},
             dataset_path=dataset_path, datasets=(dataset,))
    name = "bugs_high_recall.csv" if dataset == "highRecall" else "bugs_high_precision.csv"
    print(f"wrote {_out_dir(config) / name}")
    return EXIT_OK


def cmd_correlate(args) -> int:
    config = load_config(args)
    dataset_path = Path(args.labeled)
    run_correlate(config, _out_dir(config), {"dataset.ndjson": digest_file(dataset_path)},
                  dataset_path=dataset_path)
    print(f"wrote {_out_dir(config) / 'correlations.csv'}")
    return EXIT_OK


def cmd_rank(args) -> int:
    config = load_config(args)
    dataset_path = Path(args.labeled)
    histories_path = Path(args.histories)
    digests = {
        "dataset.ndjson": digest_file(dataset_path),
        "histories.ndjson": digest_file(histories_path),
    }
    run_rank(config, _out_dir(config), digests,
             dataset_path=dataset_path, histories_path=histories_path)
    out = _out_dir(config)
    print(f"wrote {out / 'surprisingly_good.ndjson'} and {out / 'surprisingly_ugly.ndjson'}")
    return EXIT_OK


def cmd_train(args) -> int:
    config = load_config(args)
    dataset_path = Path(args.dataset)
    digests = {
        "dataset.ndjson": digest_file(dataset_path),
        "params": digest_params({"seed": config.seed, "approach": config.approach}),
    }
    run_train(config, _out_dir(config), digests,
              dataset_path=dataset_path, classifiers=args.classifier)
    report_path = _out_dir(config) / "report.json"
    print(f"wrote {report_path}")
    if args.cdf_csv:
        import json

        report = json.loads(report_path.read_text(encoding="utf-8"))
        rows = []
        if report.get("approach") == 2:
            for project in sorted(report.get("projects", {})):
                for name in sorted(report["projects"][project]):
                    rep = report["projects"][project][name]
                    if rep is None:
                        continue
                    ugly = rep["perClass"]["ugly"]
                    rows.append((project, ugly["precision"], ugly["recall"]))
        else:
            for name in sorted(report.get("classifiers", {})):
                ugly = report["classifiers"][name]["report"]["perClass"]["ugly"]
                rows.append((f"test:{name}", ugly["precision"], ugly["recall"]))
        write_csv(Path(args.cdf_csv), ["project", "precision", "recall"], rows)
        print(f"wrote {args.cdf_csv}")
    return EXIT_OK


def cmd_report(args) -> int:
    config = load_config(args)
    written = emit_plot_data(args.artifacts)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    config = load_config(args)
    _require(config, "repo", "commit")
    status = run_pipeline(config)
    for stage, state in status.items():
        print(f"{stage}: {state}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (RepoAccessError, UnknownCommit) as err:
        print(f"repository error: {err}", file=sys.stderr)
        return EXIT_REPO
    except (StageError, MissingStage, EmptyProject, MethodNotAtSnapshot) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_STAGE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
