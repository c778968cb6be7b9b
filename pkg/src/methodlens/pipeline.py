"""Pipeline orchestration: configuration files, self-describing stage
artifacts (NDJSON with a header record, plain CSV for curves), digest-based
stage skipping, and plot-ready CDF emission."""

from __future__ import annotations

import csv
import fnmatch
import hashlib
import io
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .gitrepo import CommitMeta, GitRepo, RepoAccessError, UnknownCommit
from .history import (
    ChangeIndicators,
    MethodHistory,
    MethodIdentity,
    Revision,
    TraceConfig,
    TraceSession,
    compute_indicators,
    filter_by_age,
    trace_method,
)
from .java_extract import ExtractionError, LexicalError, MethodDeclaration, extract_methods, normalize_source, signature
from .labeling import (
    BugRuleConfig,
    LabeledMethod,
    bug_capture,
    bug_counts,
    label_methods,
    pareto_curve,
)
from .metrics import METRIC_NAMES, MetricVector, compute_metric_vector
from .ml import run_approach1, run_approach2
from .stats import composite_scores, correlation_table, select_surprising, signs_from_table

log = logging.getLogger("methodlens.pipeline")

TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = 1

STAGE_ORDER = ("extract", "trace", "label", "pareto", "bugs", "correlate", "rank", "train")

STAGE_OUTPUTS = {
    "extract": ("methods.ndjson",),
    "trace": ("histories.ndjson",),
    "label": ("dataset.ndjson",),
    "pareto": ("pareto.csv",),
    "bugs": ("bugs_high_recall.csv", "bugs_high_precision.csv"),
    "correlate": ("correlations.csv",),
    "rank": ("surprisingly_good.ndjson", "surprisingly_ugly.ndjson"),
    "train": ("report.json",),
}

STAGE_DEPS = {
    "extract": (),
    "trace": ("extract",),
    "label": ("trace",),
    "pareto": ("label",),
    "bugs": ("label",),
    "correlate": ("label",),
    "rank": ("label",),
    "train": ("label",),
}


class ConfigError(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


class MissingStage(Exception):
    pass


INDICATOR_ALIASES = {
    "edit-distance": "editDistance",
    "diff-size": "diffSize",
    "addition-only": "additionOnly",
    "revisions": "revisions",
}
INDICATOR_FLAGS = {v: k for k, v in INDICATOR_ALIASES.items()}


@dataclass
class PipelineConfig:
    repo: str = ""
    commit: str = ""
    window_years: float = 5.0
    indicator: str = "editDistance"
    ugly_fraction: float = 0.2
    theta: float = 0.75
    seed: int = 0
    out: str = "artifacts"
    files: str = "*"
    jobs: int = 1
    project: str = ""
    approach: int = 1
    top_n: int = 50
    per_project_cap: int = 2
    high_recall_keywords: tuple[str, ...] = BugRuleConfig().highRecallKeywords
    high_precision_bug_words: tuple[str, ...] = BugRuleConfig().highPrecisionBugWords
    high_precision_fix_words: tuple[str, ...] = BugRuleConfig().highPrecisionFixWords

    def project_name(self) -> str:
        return self.project or Path(self.repo).resolve().name or "project"

    def trace_config(self) -> TraceConfig:
        return TraceConfig(
            similarity_threshold=self.theta,
            window_years=self.window_years,
            snapshot_commit=self.commit,
        )

    def bug_rules(self) -> BugRuleConfig:
        return BugRuleConfig(
            highRecallKeywords=self.high_recall_keywords,
            highPrecisionBugWords=self.high_precision_bug_words,
            highPrecisionFixWords=self.high_precision_fix_words,
        )

    def to_text(self) -> str:
        lines = []
        for key, value in sorted(asdict(self).items()):
            if isinstance(value, tuple):
                value = ",".join(value)
            elif key == "indicator":
                value = INDICATOR_FLAGS.get(value, value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


_WORD_LIST_KEYS = {"high_recall_keywords", "high_precision_bug_words", "high_precision_fix_words"}
_FLOAT_KEYS = {"window_years", "ugly_fraction", "theta"}
_INT_KEYS = {"seed", "jobs", "approach", "top_n", "per_project_cap"}
_STR_KEYS = {"repo", "commit", "out", "files", "project"}


def _parse_value(key: str, raw: str, line_no: int):
    def fail(message):
        raise ConfigError(f"line {line_no}: {message}")

    if key in _WORD_LIST_KEYS:
        words = tuple(w.strip() for w in raw.split(",") if w.strip())
        if not words:
            fail(f"{key} must be a non-empty comma-separated list")
        return words
    if key in _FLOAT_KEYS:
        try:
            value = float(raw)
        except ValueError:
            fail(f"{key} expects a number, got {raw!r}")
        if key == "window_years" and value <= 0:
            fail("window_years must be positive")
        if key in ("ugly_fraction", "theta") and not (0.0 < value <= 1.0):
            fail(f"{key} must lie in (0, 1]")
        return value
    if key in _INT_KEYS:
        try:
            value = int(raw)
        except ValueError:
            fail(f"{key} expects an integer, got {raw!r}")
        if key == "jobs" and value < 1:
            fail("jobs must be >= 1")
        if key == "approach" and value not in (1, 2):
            fail("approach must be 1 or 2")
        if key in ("top_n", "per_project_cap") and value < 1:
            fail(f"{key} must be >= 1")
        return value
    if key == "indicator":
        name = INDICATOR_ALIASES.get(raw, raw)
        if name not in INDICATOR_ALIASES.values():
            fail(f"unknown indicator {raw!r}")
        return name
    if key in _STR_KEYS:
        return raw
    fail(f"unknown key {key!r}")


def validate_config(path: str | Path) -> PipelineConfig:
    """Parse a key = value config file; unknown keys and bad types are errors,
    absent keys keep module defaults."""
    config = PipelineConfig()
    text = Path(path).read_text(encoding="utf-8")
    for line_no, raw_line in enumerate(text.split("\n"), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if not hasattr(config, key):
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        setattr(config, key, _parse_value(key, raw, line_no))
    return config


# ---------------------------------------------------------------------------
# persistence


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _json_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def stage_header(stage: str, input_digests: dict[str, str]) -> dict:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "stage": stage,
        "toolVersion": TOOL_VERSION,
        "inputDigests": dict(sorted(input_digests.items())),
    }


def write_ndjson(path: Path, stage: str, input_digests: dict[str, str], records, extra_header: dict | None = None) -> None:
    header = stage_header(stage, input_digests)
    if extra_header:
        header.update(extra_header)
    buf = io.StringIO()
    buf.write(_json_line(header) + "\n")
    for record in records:
        buf.write(_json_line(record) + "\n")
    _atomic_write(path, buf.getvalue().encode("utf-8"))


def read_ndjson(path: Path) -> tuple[dict, list[dict]]:
    """First line is the stage header; interior header lines (from
    concatenating per-project files) are skipped."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise StageError("read", ValueError(f"{path} is empty"))
    header = json.loads(lines[0])
    records = []
    for line in lines[1:]:
        if not line:
            continue
        record = json.loads(line)
        if isinstance(record, dict) and "schemaVersion" in record and "stage" in record:
            continue
        records.append(record)
    return header, records


def write_csv(path: Path, columns: list[str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    _atomic_write(path, buf.getvalue().encode("utf-8"))


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_file(path: Path) -> str:
    return digest_bytes(Path(path).read_bytes())


def digest_params(params: dict) -> str:
    return digest_bytes(_json_line(params).encode("utf-8"))


# ---------------------------------------------------------------------------
# record (de)serialization


def method_record(file: str, decl: MethodDeclaration) -> dict:
    return {
        "file": file,
        "signature": signature(decl),
        "name": decl.name,
        "startLine": decl.startLine,
        "endLine": decl.endLine,
        "modifiers": sorted(decl.modifiers),
        "annotations": list(decl.annotations),
        "body": decl.bodyText,
    }


def decl_from_record(record: dict) -> MethodDeclaration:
    sig = record["signature"]
    params = sig[sig.index("(") + 1:sig.rindex(")")]
    chain = sig[:sig.index("#")].split(".")
    return MethodDeclaration(
        name=record["name"],
        parameterTypes=[p for p in params.split(",") if p],
        modifiers=set(record.get("modifiers", [])),
        annotations=list(record.get("annotations", [])),
        bodyText=record["body"],
        startLine=record["startLine"],
        endLine=record["endLine"],
        containerChain=chain,
    )


def history_record(h: MethodHistory, indicators: ChangeIndicators) -> dict:
    return {
        "identity": {
            "project": h.identity.project,
            "file": h.identity.file,
            "signature": h.identity.signature,
            "startLine": h.identity.startLine,
        },
        "introduction": {
            "commit": h.introduction.id,
            "time": h.introduction.authorTime,
            "path": h.introductionPath,
            "method": method_record(h.introductionPath, h.introductionDecl),
        },
        "revisions": [
            {
                "commit": r.commit.id,
                "time": r.commit.authorTime,
                "added": r.linesAdded,
                "deleted": r.linesDeleted,
                "editDistance": r.editDistance,
                "message": r.commit.message,
                "daysSinceIntroduction": r.daysSinceIntroduction,
            }
            for r in h.revisions
        ],
        "indicators": {
            "revisions": indicators.revisions,
            "diffSize": indicators.diffSize,
            "additionOnly": indicators.additionOnly,
            "editDistance": indicators.editDistance,
        },
    }


def history_from_record(record: dict) -> tuple[MethodHistory, ChangeIndicators]:
    ident = record["identity"]
    intro = record["introduction"]
    history = MethodHistory(
        identity=MethodIdentity(
            project=ident["project"], file=ident["file"],
            signature=ident["signature"], startLine=ident["startLine"],
        ),
        introduction=CommitMeta(
            id=intro["commit"], firstParentId=None,
            authorTime=intro["time"], message="",
        ),
        introductionPath=intro["path"],
        introductionDecl=decl_from_record(intro["method"]),
        revisions=[
            Revision(
                commit=CommitMeta(id=r["commit"], firstParentId=None,
                                  authorTime=r["time"], message=r["message"]),
                linesAdded=r["added"],
                linesDeleted=r["deleted"],
                editDistance=r["editDistance"],
                daysSinceIntroduction=r["daysSinceIntroduction"],
            )
            for r in record["revisions"]
        ],
    )
    ind = record["indicators"]
    indicators = ChangeIndicators(
        revisions=ind["revisions"], diffSize=ind["diffSize"],
        additionOnly=ind["additionOnly"], editDistance=ind["editDistance"],
    )
    return history, indicators


def labeled_record(m: LabeledMethod, intro_time: int, age_days: float) -> dict:
    return {
        "identity": {
            "project": m.identity.project,
            "file": m.identity.file,
            "signature": m.identity.signature,
            "startLine": m.identity.startLine,
        },
        "label": m.label,
        "metrics": m.metrics.as_dict(),
        "indicators": {
            "revisions": m.indicators.revisions,
            "diffSize": m.indicators.diffSize,
            "additionOnly": m.indicators.additionOnly,
            "editDistance": m.indicators.editDistance,
        },
        "bugCountHighRecall": m.bugCountHighRecall,
        "bugCountHighPrecision": m.bugCountHighPrecision,
        "introTime": intro_time,
        "ageDays": age_days,
    }


def labeled_from_record(record: dict) -> LabeledMethod:
    ident = record["identity"]
    ind = record["indicators"]
    raw_metrics = dict(record["metrics"])
    return LabeledMethod(
        identity=MethodIdentity(
            project=ident["project"], file=ident["file"],
            signature=ident["signature"], startLine=ident["startLine"],
        ),
        metrics=MetricVector(**raw_metrics),
        indicators=ChangeIndicators(
            revisions=ind["revisions"], diffSize=ind["diffSize"],
            additionOnly=ind["additionOnly"], editDistance=ind["editDistance"],
        ),
        label=record["label"],
        bugCountHighRecall=record["bugCountHighRecall"],
        bugCountHighPrecision=record["bugCountHighPrecision"],
    )


# ---------------------------------------------------------------------------
# stage implementations


def run_extract(config: PipelineConfig, repo: GitRepo, out: Path, digests: dict[str, str]) -> None:
    snapshot = repo.resolve_commit(config.commit)
    records = []
    for path in repo.ls_files(snapshot):
        if config.files not in ("", "*") and not fnmatch.fnmatch(path, config.files):
            continue
        content = repo.file_at(snapshot, path)
        if content is None:
            continue
        try:
            decls = extract_methods(normalize_source(path, content))
        except (ExtractionError, LexicalError) as err:
            log.warning("skipping %s: %s", path, err)
            continue
        records.extend(method_record(path, d) for d in decls)
    write_ndjson(out / "methods.ndjson", "extract", digests, records,
                 extra_header={"snapshot": snapshot, "project": config.project_name()})


def run_trace(config: PipelineConfig, repo: GitRepo, out: Path, digests: dict[str, str],
              methods_path: Path | None = None) -> None:
    header, records = read_ndjson(methods_path or out / "methods.ndjson")
    cfg = config.trace_config()
    session = TraceSession(repo, header["snapshot"], cfg, project=config.project_name())

    def trace_one(record):
        decl = session.resolve_at_snapshot(record["file"], record["signature"], record["startLine"])
        history = trace_method(session, decl, record["file"])
        return history_record(history, compute_indicators(history, cfg))

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            out_records = list(pool.map(trace_one, records))
    else:
        out_records = [trace_one(r) for r in records]
    out_records.sort(key=lambda r: (
        r["identity"]["project"], r["identity"]["file"],
        r["identity"]["startLine"], r["identity"]["signature"],
    ))
    write_ndjson(
        out / "histories.ndjson", "trace", digests, out_records,
        extra_header={
            "snapshot": session.snapshot.id,
            "snapshotTime": session.snapshot.authorTime,
            "windowYears": cfg.window_years,
            "theta": cfg.similarity_threshold,
        },
    )


def run_label(config: PipelineConfig, out: Path, digests: dict[str, str],
              histories_path: Path | None = None) -> None:
    header, records = read_ndjson(histories_path or out / "histories.ndjson")
    snapshot_time = header["snapshotTime"]
    cfg = config.trace_config()
    pairs = [history_from_record(r) for r in records]
    histories = [h for h, _ in pairs]
    indicators_by_key = {h.identity.as_str(): ind for h, ind in pairs}
    eligible = filter_by_age(histories, snapshot_time, cfg)
    bug_by_key = bug_counts(histories, config.bug_rules(), cfg)

    class _Sample:
        def __init__(self, identity, indicators):
            self.identity = identity
            self.indicators = indicators

    samples = [_Sample(h.identity, indicators_by_key[h.identity.as_str()]) for h in eligible]
    labels = label_methods(samples, indicator=config.indicator, ugly_fraction=config.ugly_fraction)
    out_records = []
    for h in eligible:
        key = h.identity.as_str()
        bugs = bug_by_key[key]
        labeled = LabeledMethod(
            identity=h.identity,
            metrics=compute_metric_vector(h.introductionDecl),
            indicators=indicators_by_key[key],
            label=labels[key],
            bugCountHighRecall=bugs[0],
            bugCountHighPrecision=bugs[1],
        )
        age_days = (snapshot_time - h.introduction.authorTime) / 86400.0
        out_records.append(labeled_record(labeled, h.introduction.authorTime, age_days))
    out_records.sort(key=lambda r: (
        r["identity"]["project"], r["identity"]["file"],
        r["identity"]["startLine"], r["identity"]["signature"],
    ))
    write_ndjson(
        out / "dataset.ndjson", "label", digests, out_records,
        extra_header={
            "indicator": config.indicator,
            "uglyFraction": config.ugly_fraction,
            "snapshotTime": snapshot_time,
        },
    )


def _load_dataset(out: Path, dataset_path: Path | None = None) -> list[LabeledMethod]:
    _, records = read_ndjson(dataset_path or out / "dataset.ndjson")
    return [labeled_from_record(r) for r in records]


def _by_project(methods: list[LabeledMethod]) -> dict[str, list[LabeledMethod]]:
    grouped: dict[str, list[LabeledMethod]] = {}
    for m in methods:
        grouped.setdefault(m.identity.project, []).append(m)
    return dict(sorted(grouped.items()))


def run_pareto(config: PipelineConfig, out: Path, digests: dict[str, str],
               dataset_path: Path | None = None) -> None:
    methods = _load_dataset(out, dataset_path)
    rows = []
    for project, group in _by_project(methods).items():
        curve = pareto_curve(group, indicator=config.indicator)
        for fraction, captured in zip(curve.fractions, curve.captured):
            rows.append((project, fraction, _fmt(captured)))
    write_csv(out / "pareto.csv", ["project", "fraction", "captured"], rows)


def run_bugs(config: PipelineConfig, out: Path, digests: dict[str, str],
             dataset_path: Path | None = None, datasets=("highRecall", "highPrecision")) -> None:
    methods = _load_dataset(out, dataset_path)
    names = {"highRecall": "bugs_high_recall.csv", "highPrecision": "bugs_high_precision.csv"}
    for dataset, filename in ((d, names[d]) for d in datasets):
        rows = []
        for project, group in _by_project(methods).items():
            curve = bug_capture(group, indicator=config.indicator, dataset=dataset)
            for fraction, captured in zip(curve.fractions, curve.captured):
                rows.append((project, fraction, _fmt(captured)))
        write_csv(out / filename, ["project", "fraction", "captured"], rows)


def run_correlate(config: PipelineConfig, out: Path, digests: dict[str, str],
                  dataset_path: Path | None = None) -> None:
    methods = _load_dataset(out, dataset_path)
    table = correlation_table(methods, indicator=config.indicator)
    rows = [(e.metric, _fmt(e.tau), _fmt(e.pValue), e.n) for e in table]
    write_csv(out / "correlations.csv", ["metric", "tau", "p", "n"], rows)


def run_rank(config: PipelineConfig, out: Path, digests: dict[str, str],
             dataset_path: Path | None = None, histories_path: Path | None = None) -> None:
    methods = _load_dataset(out, dataset_path)
    _, history_records = read_ndjson(histories_path or out / "histories.ndjson")
    history_by_key = {}
    for record in history_records:
        ident = record["identity"]
        key = f"{ident['project']}:{ident['file']}:{ident['startLine']}:{ident['signature']}"
        history_by_key[key] = record
    table = correlation_table(methods, indicator=config.indicator)
    ranking = composite_scores(methods, signs_from_table(table))
    good, ugly = select_surprising(
        methods, ranking, top_n=config.top_n, per_project_cap=config.per_project_cap
    )

    def export(selected):
        for m in selected:
            key = m.identity.as_str()
            h = history_by_key.get(key, {})
            intro = h.get("introduction", {})
            yield {
                "identity": {
                    "project": m.identity.project,
                    "file": m.identity.file,
                    "signature": m.identity.signature,
                    "startLine": m.identity.startLine,
                },
                "label": m.label,
                "compositeScore": ranking.scores[key],
                "rank": ranking.ranks[key],
                "source": intro.get("method", {}).get("body", ""),
                "history": {
                    "introductionCommit": intro.get("commit", ""),
                    "introductionTime": intro.get("time", 0),
                    "revisions": [
                        {"commit": r["commit"], "time": r["time"], "message": r["message"]}
                        for r in h.get("revisions", [])
                    ],
                },
            }

    write_ndjson(out / "surprisingly_good.ndjson", "rank", digests, export(good))
    write_ndjson(out / "surprisingly_ugly.ndjson", "rank", digests, export(ugly))


def _class_metrics_dict(cm) -> dict:
    return {
        "precision": cm.precision,
        "recall": cm.recall,
        "fMeasure": cm.fMeasure,
        "flags": list(cm.flags),
    }


def _report_dict(report) -> dict:
    return {
        "classifier": report.classifier,
        "positiveClass": report.positiveClass,
        "perClass": {label: _class_metrics_dict(cm) for label, cm in report.perClass.items()},
        "confusion": report.confusion,
        "seed": report.seed,
    }


def run_train(config: PipelineConfig, out: Path, digests: dict[str, str],
              dataset_path: Path | None = None, classifiers=None) -> None:
    methods = _load_dataset(out, dataset_path)
    header = stage_header("train", digests)
    from .ml import CLASSIFIER_NAMES, NoUglyRows, SingleClass, TooFewProjects
    chosen = tuple(classifiers) if classifiers else CLASSIFIER_NAMES
    try:
        _run_train_inner(config, out, header, methods, chosen)
    except (TooFewProjects, NoUglyRows, SingleClass) as err:
        # corpora too small to train on still get a well-formed stage output
        log.warning("training not possible: %s", err)
        payload = {
            "stageRecord": header,
            "approach": config.approach,
            "seed": config.seed,
            "status": "not-trainable",
            "reason": str(err),
        }
        _atomic_write(out / "report.json", (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8"))


def _run_train_inner(config: PipelineConfig, out: Path, header: dict, methods, chosen) -> None:
    if config.approach == 1:
        outcome = run_approach1(methods, seed=config.seed, classifiers=chosen)
        payload = {
            "stageRecord": header,
            "approach": 1,
            "seed": config.seed,
            "plan": {
                "train": list(outcome["plan"].trainProjects),
                "validation": list(outcome["plan"].validationProjects),
                "test": list(outcome["plan"].testProjects),
            },
            "classifiers": {
                name: {
                    "config": entry["config"],
                    "validationF": entry["validationF"],
                    "report": _report_dict(entry["report"]),
                }
                for name, entry in outcome["results"].items()
            },
        }
    else:
        outcome = run_approach2(methods, seed=config.seed, classifiers=chosen)
        payload = {
            "stageRecord": header,
            "approach": 2,
            "seed": config.seed,
            "projects": {
                project: {
                    name: (_report_dict(report) if report is not None else None)
                    for name, report in entry.items()
                }
                for project, entry in outcome["projects"].items()
            },
        }
    _atomic_write(out / "report.json", (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8"))


def _fmt(value: float) -> str:
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return repr(float(value))


# ---------------------------------------------------------------------------
# orchestration


def _stage_digests(config: PipelineConfig, stage: str, out: Path, snapshot: str) -> dict[str, str]:
    """Digests of everything a stage's output depends on."""
    common = {"toolVersion": TOOL_VERSION, "snapshot": snapshot}
    params: dict = {}
    inputs: dict[str, str] = {}
    if stage == "extract":
        params = {"files": config.files, "project": config.project_name()}
    elif stage == "trace":
        params = {"theta": config.theta, "windowYears": config.window_years}
        inputs["methods.ndjson"] = digest_file(out / "methods.ndjson")
    elif stage == "label":
        params = {
            "indicator": config.indicator,
            "uglyFraction": config.ugly_fraction,
            "windowYears": config.window_years,
            "bugRules": [
                list(config.high_recall_keywords),
                list(config.high_precision_bug_words),
                list(config.high_precision_fix_words),
            ],
        }
        inputs["histories.ndjson"] = digest_file(out / "histories.ndjson")
    elif stage in ("pareto", "bugs", "correlate"):
        params = {"indicator": config.indicator}
        inputs["dataset.ndjson"] = digest_file(out / "dataset.ndjson")
    elif stage == "rank":
        params = {
            "indicator": config.indicator,
            "topN": config.top_n,
            "perProjectCap": config.per_project_cap,
        }
        inputs["dataset.ndjson"] = digest_file(out / "dataset.ndjson")
        inputs["histories.ndjson"] = digest_file(out / "histories.ndjson")
    elif stage == "train":
        params = {"seed": config.seed, "approach": config.approach}
        inputs["dataset.ndjson"] = digest_file(out / "dataset.ndjson")
    digests = dict(inputs)
    digests["params"] = digest_params({**common, **params})
    return digests


def run_pipeline(config: PipelineConfig) -> dict[str, str]:
    """Execute all stages in order, skipping stages whose inputs are
    unchanged; returns {stage: "ran" | "skipped"}."""
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    repo = GitRepo(config.repo)
    snapshot = repo.resolve_commit(config.commit)
    manifest_path = out / "manifest.json"
    manifest = {"schemaVersion": SCHEMA_VERSION, "toolVersion": TOOL_VERSION, "stages": {}}
    if manifest_path.exists():
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
            manifest.setdefault("stages", {})
        except json.JSONDecodeError:
            manifest = {"schemaVersion": SCHEMA_VERSION, "toolVersion": TOOL_VERSION, "stages": {}}

    runners = {
        "extract": lambda d: run_extract(config, repo, out, d),
        "trace": lambda d: run_trace(config, repo, out, d),
        "label": lambda d: run_label(config, out, d),
        "pareto": lambda d: run_pareto(config, out, d),
        "bugs": lambda d: run_bugs(config, out, d),
        "correlate": lambda d: run_correlate(config, out, d),
        "rank": lambda d: run_rank(config, out, d),
        "train": lambda d: run_train(config, out, d),
    }

    status: dict[str, str] = {}
    ran: set[str] = set()
    for stage in STAGE_ORDER:
        digests = _stage_digests(config, stage, out, snapshot)
        digest = digest_params(digests)
        outputs = [out / name for name in STAGE_OUTPUTS[stage]]
        recorded = manifest["stages"].get(stage, {})
        fresh = (
            not any(dep in ran for dep in STAGE_DEPS[stage])
            and recorded.get("digest") == digest
            and all(p.exists() for p in outputs)
        )
        if fresh:
            status[stage] = "skipped"
            continue
        try:
            runners[stage](digests)
        except Exception as err:  # noqa: BLE001 - stage boundary
            _atomic_write(manifest_path, (json.dumps(manifest, sort_keys=True, indent=2) + "\n").encode("utf-8"))
            raise StageError(stage, err) from err
        manifest["stages"][stage] = {
            "digest": digest,
            "outputs": list(STAGE_OUTPUTS[stage]),
        }
        status[stage] = "ran"
        ran.add(stage)
    _atomic_write(manifest_path, (json.dumps(manifest, sort_keys=True, indent=2) + "\n").encode("utf-8"))
    return status


# ---------------------------------------------------------------------------
# plot data


def _cdf_points(series: str, values: list[float]):
    ordered = sorted(values)
    n = len(ordered)
    for i, v in enumerate(ordered, start=1):
        yield (series, _fmt(v), _fmt(i / n))


def _curve_cdf_rows(csv_path: Path, series_prefix: str):
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        by_fraction: dict[str, list[float]] = {}
        for row in reader:
            by_fraction.setdefault(row["fraction"], []).append(float(row["captured"]))
    rows = []
    for fraction in sorted(by_fraction, key=float):
        pct = int(round(float(fraction) * 100))
        values = [v for v in by_fraction[fraction] if not math.isnan(v)]
        if not values:
            continue
        rows.extend(_cdf_points(f"{series_prefix}-top{pct}", values))
    return rows


def emit_plot_data(artifacts: str | Path, plots_dir: str | Path | None = None) -> list[Path]:
    """Plot-ready CDF files, columns exactly (series, x, y)."""
    artifacts = Path(artifacts)
    plots = Path(plots_dir) if plots_dir else artifacts / "plots"
    plots.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    sources = [
        ("pareto.csv", "pareto", "pareto_cdf.csv"),
        ("bugs_high_recall.csv", "bugs-high-recall", "bugs_high_recall_cdf.csv"),
        ("bugs_high_precision.csv", "bugs-high-precision", "bugs_high_precision_cdf.csv"),
    ]
    for source, prefix, target in sources:
        src = artifacts / source
        if not src.exists():
            raise MissingStage(f"{source} not found in {artifacts}")
        rows = _curve_cdf_rows(src, prefix)
        path = plots / target
        write_csv(path, ["series", "x", "y"], rows)
        written.append(path)

    report_path = artifacts / "report.json"
    if not report_path.exists():
        raise MissingStage(f"report.json not found in {artifacts}")
    report = json.loads(report_path.read_text(encoding="utf-8"))
    rows = []
    if report.get("approach") == 2:
        per_classifier: dict[str, dict[str, list[float]]] = {}
        for entry in report.get("projects", {}).values():
            for name, rep in entry.items():
                if rep is None:
                    continue
                ugly = rep["perClass"]["ugly"]
                slot = per_classifier.setdefault(name, {"precision": [], "recall": []})
                for key in ("precision", "recall"):
                    value = ugly[key]
                    if value is not None and not (isinstance(value, float) and math.isnan(value)):
                        slot[key].append(value)
        for name in sorted(per_classifier):
            for key in ("precision", "recall"):
                rows.extend(_cdf_points(f"{key}-ugly-{name}", per_classifier[name][key]))
    else:
        for name, entry in sorted(report.get("classifiers", {}).items()):
            ugly = entry["report"]["perClass"]["ugly"]
            rows.append((f"precision-ugly-{name}", _fmt(ugly["precision"]), "1.0"))
            rows.append((f"recall-ugly-{name}", _fmt(ugly["recall"]), "1.0"))
    path = plots / "prediction_pr_cdf.csv"
    write_csv(path, ["series", "x", "y"], rows)
    written.append(path)
    return written
