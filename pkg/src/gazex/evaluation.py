"""Judging, the four retrieval metrics, baseline deltas, and the full sweep.

Metrics are computed as exact rationals from the confusion counts; deltas
versus the no-expansion baseline are reported in percentage points with two
decimals.  The sweep evaluates every configuration of a corpus store in
(cardinality, name) order and emits the report table, per-metric plot data,
and the top/bottom-10 variation tables.
"""

from __future__ import annotations

import csv
import enum
import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Sequence

from .classifier import ClassificationOutcome, reformulate
from .combinations import CorpusStore
from .corpus import BASELINE_NAME, Corpus
from .errors import GroundTruthFormatError, MissingBaseline
from .taxonomy import LemmaTable

NONE_SENTINEL = "NONE"
NOT_AN_ANSWER_SENTINEL = "NOT_AN_ANSWER"

METRIC_NAMES = ("precision", "recall", "f_measure", "accuracy")


class TruthKind(enum.Enum):
    CATEGORY = "category"
    NONE = "none"
    NOT_AN_ANSWER = "not_an_answer"


class Judgment(enum.Enum):
    TP = "TP"
    FP = "FP"
    TN = "TN"
    FN = "FN"


@dataclass(frozen=True)
class GroundTruthEntry:
    query_id: str
    query: str
    kind: TruthKind
    parent_label: str = ""
    category_label: str = ""

    @property
    def category(self) -> tuple[str, str] | None:
        if self.kind is TruthKind.CATEGORY:
            return (self.parent_label, self.category_label)
        return None


def parse_ground_truth(source: IO[str] | Iterable[str]) -> list[GroundTruthEntry]:
    """Parse `query_id<TAB>query<TAB>parent<TAB>category` lines.

    The sentinel rows use `NONE<TAB>NONE` and `NOT_AN_ANSWER<TAB>NOT_AN_ANSWER`
    in the label columns.  Any structural problem raises
    :class:`GroundTruthFormatError`; a clean parse has zero rejects.
    """
    entries = []
    seen_ids: set[str] = set()
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise GroundTruthFormatError(f"line {lineno}: expected 4 tab-separated fields")
        query_id, query, parent_label, category_label = parts
        if not query_id or not query:
            raise GroundTruthFormatError(f"line {lineno}: empty query id or text")
        if query_id in seen_ids:
            raise GroundTruthFormatError(f"line {lineno}: duplicate query id {query_id!r}")
        seen_ids.add(query_id)
        if parent_label == NONE_SENTINEL and category_label == NONE_SENTINEL:
            entries.append(GroundTruthEntry(query_id, query, TruthKind.NONE))
        elif parent_label == NOT_AN_ANSWER_SENTINEL and category_label == NOT_AN_ANSWER_SENTINEL:
            entries.append(GroundTruthEntry(query_id, query, TruthKind.NOT_AN_ANSWER))
        elif parent_label and category_label:
            entries.append(
                GroundTruthEntry(query_id, query, TruthKind.CATEGORY, parent_label, category_label)
            )
        else:
            raise GroundTruthFormatError(f"line {lineno}: empty label in {line!r}")
    return entries


def load_ground_truth(path: str | Path) -> list[GroundTruthEntry]:
    with open(path, encoding="utf-8") as fh:
        return parse_ground_truth(fh)


def judge(outcome: ClassificationOutcome, truth: GroundTruthEntry) -> Judgment | None:
    """Classify one (outcome, truth) pair into the four confusion cases.

    Entries whose truth is NOT_AN_ANSWER are excluded from the counts and
    yield None.
    """
    if truth.kind is TruthKind.NOT_AN_ANSWER:
        return None
    if outcome.elected:
        if truth.category is not None and truth.category in outcome.elected:
            return Judgment.TP
        return Judgment.FP
    if truth.kind is TruthKind.NONE:
        return Judgment.TN
    return Judgment.FN


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Metrics:
    precision: Fraction
    recall: Fraction
    f_measure: Fraction
    accuracy: Fraction

    def value(self, name: str) -> Fraction:
        return getattr(self, name)


def compute_metrics(counts: ConfusionCounts) -> Metrics:
    """The four standard metrics; a zero denominator yields 0 by convention."""
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn
    precision = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
    recall = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
    accuracy = Fraction(tp + tn, counts.total) if counts.total else Fraction(0)
    if precision + recall:
        f_measure = 2 * precision * recall / (precision + recall)
    else:
        f_measure = Fraction(0)
    return Metrics(precision, recall, f_measure, accuracy)


@dataclass(frozen=True)
class MetricsReport:
    config_name: str
    k: int
    numeric_id: int
    counts: ConfusionCounts
    excluded: int
    metrics: Metrics
    deltas: dict[str, Fraction]  # percentage points vs baseline, per metric

    def delta(self, name: str) -> Fraction:
        return self.deltas[name]


def judge_queries(
    corpus: Corpus, entries: Sequence[GroundTruthEntry], lemma_table: LemmaTable
) -> list[tuple[GroundTruthEntry, Judgment | None]]:
    """Classify and judge every entry; the per-query log feeds the tallies."""
    log = []
    for entry in entries:
        outcome = reformulate(entry.query, corpus, lemma_table)
        log.append((entry, judge(outcome, entry)))
    return log


def tally(log: Iterable[tuple[GroundTruthEntry, Judgment | None]]) -> tuple[ConfusionCounts, int]:
    tp = fp = tn = fn = excluded = 0
    for _, judgment in log:
        if judgment is None:
            excluded += 1
        elif judgment is Judgment.TP:
            tp += 1
        elif judgment is Judgment.FP:
            fp += 1
        elif judgment is Judgment.TN:
            tn += 1
        else:
            fn += 1
    return ConfusionCounts(tp, fp, tn, fn), excluded


def evaluate_configuration(
    corpus: Corpus,
    entries: Sequence[GroundTruthEntry],
    lemma_table: LemmaTable,
    baseline: MetricsReport | None = None,
    k: int = 0,
    numeric_id: int = 0,
) -> MetricsReport:
    """Judge every entry under one corpus and report metrics plus deltas.

    The baseline report is required for any non-baseline corpus; evaluating
    the baseline itself (or any corpus against a matching baseline) yields
    zero deltas.
    """
    if baseline is None and corpus.name != BASELINE_NAME:
        raise MissingBaseline(f"evaluating {corpus.name!r} requires a baseline report")
    counts, excluded = tally(judge_queries(corpus, entries, lemma_table))
    metrics = compute_metrics(counts)
    if baseline is None:
        deltas = {name: Fraction(0) for name in METRIC_NAMES}
    else:
        deltas = {
            name: (metrics.value(name) - baseline.metrics.value(name)) * 100
            for name in METRIC_NAMES
        }
    return MetricsReport(corpus.name, k, numeric_id, counts, excluded, metrics, deltas)


@dataclass(frozen=True)
class SweepResult:
    baseline: MetricsReport
    reports: tuple[MetricsReport, ...]  # one per configuration, in (k, name) order

    def rows(self) -> list[MetricsReport]:
        return [self.baseline, *self.reports]


def sweep(
    store: CorpusStore,
    baseline_corpus: Corpus,
    entries: Sequence[GroundTruthEntry],
    lemma_table: LemmaTable,
    jobs: int = 1,
) -> SweepResult:
    """Evaluate the baseline and then every configuration in the store.

    Rows come back in configuration order (cardinality, then name) with their
    numeric ids; the result is deterministic for any `jobs` value.
    """
    baseline_report = evaluate_configuration(baseline_corpus, entries, lemma_table)

    def run(config) -> MetricsReport:
        corpus = store.corpus(config)
        return evaluate_configuration(
            corpus, entries, lemma_table, baseline=baseline_report, k=config.k, numeric_id=config.numeric_id
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = tuple(pool.map(run, store.configurations))
    else:
        reports = tuple(run(c) for c in store.configurations)
    return SweepResult(baseline_report, reports)


def format_metric(value: Fraction, places: int = 4) -> str:
    return f"{float(value):.{places}f}"


def format_delta(value: Fraction, places: int = 2, signed: bool = False) -> str:
    text = f"{float(value):+.{places}f}" if signed else f"{float(value):.{places}f}"
    return text


REPORT_HEADER = [
    "id", "config", "k", "tp", "fp", "tn", "fn",
    "precision", "recall", "f_measure", "accuracy",
    "d_precision", "d_recall", "d_f", "d_accuracy",
]


def write_report_csv(result: SweepResult, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_HEADER)
        for report in result.rows():
            writer.writerow(
                [
                    report.numeric_id,
                    report.config_name,
                    report.k,
                    report.counts.tp,
                    report.counts.fp,
                    report.counts.tn,
                    report.counts.fn,
                    format_metric(report.metrics.precision),
                    format_metric(report.metrics.recall),
                    format_metric(report.metrics.f_measure),
                    format_metric(report.metrics.accuracy),
                    format_delta(report.delta("precision")),
                    format_delta(report.delta("recall")),
                    format_delta(report.delta("f_measure")),
                    format_delta(report.delta("accuracy")),
                ]
            )


def write_plot_data(result: SweepResult, out_dir: str | Path) -> list[Path]:
    """One `plot_<metric>.csv` per metric with `id,value` rows, configs only."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in METRIC_NAMES:
        path = out / f"plot_{name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "value"])
            for report in result.reports:
                writer.writerow([report.numeric_id, format_metric(report.metrics.value(name))])
        paths.append(path)
    return paths


def extreme_configurations(
    result: SweepResult, metric: str, count: int = 10
) -> tuple[list[MetricsReport], list[MetricsReport]]:
    """Top and bottom configurations by delta; ties resolve by numeric id."""
    by_delta = sorted(result.reports, key=lambda r: (-r.delta(metric), r.numeric_id))
    top = by_delta[:count]
    bottom = sorted(result.reports, key=lambda r: (r.delta(metric), r.numeric_id))[:count]
    return top, bottom


def write_extreme_tables(result: SweepResult, out_dir: str | Path, count: int = 10) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in METRIC_NAMES:
        top, bottom = extreme_configurations(result, name, count)
        for kind, reports in (("top", top), ("bottom", bottom)):
            path = out / f"{kind}_{name}.csv"
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["config", "delta"])
                for report in reports:
                    writer.writerow([report.config_name, format_delta(report.delta(name), signed=True)])
            paths.append(path)
    return paths


@dataclass(frozen=True)
class QueryFilter:
    """The transactional-query patterns: declared, versioned, configurable."""

    prefixes: tuple[str, ...] = ("where can i", "where to find")
    keywords: tuple[str, ...] = ("buy", "purchase", "near")

    def matches(self, line: str) -> bool:
        normalized = " ".join(line.split()).casefold()
        if any(normalized.startswith(p) for p in self.prefixes):
            return True
        if not self.keywords:
            return False
        pattern = r"\b(?:" + "|".join(re.escape(k) for k in self.keywords) + r")\b"
        return re.search(pattern, normalized) is not None


DEFAULT_QUERY_FILTER = QueryFilter()


def filter_queries(
    log: IO[str] | Iterable[str],
    limit: int | None = None,
    seed: int = 0,
    query_filter: QueryFilter = DEFAULT_QUERY_FILTER,
) -> list[str]:
    """Keep matching lines, deduplicate, shuffle with the seed, truncate.

    Deduplication is case- and whitespace-insensitive, keeping the first
    occurrence's text (stripped).  The seeded shuffle makes the sample
    reproducible.
    """
    kept = []
    seen: set[str] = set()
    for raw in log:
        line = raw.strip()
        if not line or not query_filter.matches(line):
            continue
        key = " ".join(line.split()).casefold()
        if key in seen:
            continue
        seen.add(key)
        kept.append(line)
    random.Random(seed).shuffle(kept)
    if limit is not None:
        kept = kept[:limit]
    return kept


def write_query_file(queries: Sequence[str], path: str | Path) -> None:
    """Write `query_id<TAB>query` lines with sequential ids (q00001, ...)."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, query in enumerate(queries, start=1):
            fh.write(f"q{i:05d}\t{query}\n")


def read_query_file(path: str | Path) -> list[tuple[str, str]]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise GroundTruthFormatError(f"{path}:{lineno}: expected 'query_id<TAB>query'")
            records.append((parts[0], parts[1]))
    return records
