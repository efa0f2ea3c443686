"""Command-line entry points for the expansion, combination and evaluation flows."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .annotation import DEFAULT_BATCH_SIZE, AnnotationStore
from .classifier import reformulate
from .combinations import build_all, directory_store, enumerate_configurations, lazy_store
from .corpus import BASELINE_NAME, generate_baseline, build_single_relation_corpora, read_corpus, write_corpus
from .errors import GazexError
from .evaluation import (
    QueryFilter,
    evaluate_configuration,
    filter_queries,
    format_delta,
    format_metric,
    load_ground_truth,
    read_query_file,
    sweep,
    write_extreme_tables,
    write_plot_data,
    write_query_file,
    write_report_csv,
)
from .relations import (
    DEFAULT_MAX_RESULTS,
    RELATION_CATALOG,
    CachingProvider,
    FixtureProvider,
    LiveProvider,
    relation_from_code,
)
from .server import AnnotationServer
from .taxonomy import EMPTY_LEMMAS, LemmaTable, load_taxonomy


def _add_provider_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--provider", choices=["live", "fixtures"], default="fixtures")
    parser.add_argument("--fixtures", type=Path, help="fixture file for the offline provider")
    parser.add_argument("--cache-dir", type=Path, help="response cache directory")
    parser.add_argument("--max-terms", type=int, default=DEFAULT_MAX_RESULTS,
                        help="cap on expansion words per category and relation")


def _make_provider(args: argparse.Namespace):
    if args.provider == "live":
        provider = LiveProvider(max_results=args.max_terms)
    else:
        if not args.fixtures:
            raise SystemExit("--fixtures is required with --provider fixtures")
        provider = FixtureProvider(args.fixtures)
    if args.cache_dir:
        provider = CachingProvider(provider, args.cache_dir)
    return provider


def _lemmas(args: argparse.Namespace) -> LemmaTable:
    return LemmaTable.load(args.lemmas) if args.lemmas else EMPTY_LEMMAS


def _parse_relations(text: str):
    return [relation_from_code(code) for code in text.replace(",", " ").split()]


def cmd_build(args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(args.taxonomy)
    lemma_table = _lemmas(args)
    provider = _make_provider(args)
    relations = _parse_relations(args.relations) if args.relations else list(RELATION_CATALOG)
    baseline = generate_baseline(taxonomy, lemma_table)
    write_corpus(baseline, args.out)
    corpora = build_single_relation_corpora(
        taxonomy, provider, lemma_table, relations, max_terms=args.max_terms, jobs=args.jobs
    )
    for corpus in corpora.values():
        write_corpus(corpus, args.out)
    print(f"wrote {BASELINE_NAME} + {len(corpora)} relation corpora under {args.out}")
    return 0


def cmd_combine(args: argparse.Namespace) -> int:
    # labels come from the taxonomy when given, otherwise slugs stand in and
    # the stored BASELINE corpus supplies the label weights to strip/re-add
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else None
    root = Path(args.relations_root)
    configs = [
        c for c in enumerate_configurations(args.n_relations)
        if args.k_min <= c.k <= args.k_max
    ]
    single = {
        relation: read_corpus(root / relation.code, taxonomy=taxonomy)
        for relation in RELATION_CATALOG[: args.n_relations]
    }
    baseline = read_corpus(root / BASELINE_NAME, taxonomy=taxonomy)
    if args.lazy:
        store = lazy_store(configs, single, baseline=baseline)
        total = len(configs) * len(baseline.gazetteers)
        print(f"{len(configs)} configurations, {total} gazetteers (not materialized)")
        return 0
    if not args.out:
        raise SystemExit("--out is required unless --lazy is given")
    build_all(configs, single, None, None, args.out, jobs=args.jobs, baseline=baseline)
    print(f"materialized {len(configs)} configurations under {args.out}")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else None
    corpus = read_corpus(args.corpus, taxonomy=taxonomy)
    outcome = reformulate(args.query, corpus, _lemmas(args))
    if outcome.elected:
        for parent, category in sorted(outcome.elected):
            print(f"elected\t{parent}\t{category}")
    else:
        print("elected\t-\t-")
    for score in outcome.ranking[:10]:
        print(f"score\t{score.parent_label}\t{score.category_label}\t{format_metric(score.units / 2, 1)}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else None
    lemma_table = _lemmas(args)
    entries = load_ground_truth(args.truth)
    baseline_report = None
    if args.baseline_corpus:
        baseline = read_corpus(args.baseline_corpus, taxonomy=taxonomy)
        baseline_report = evaluate_configuration(baseline, entries, lemma_table)
    corpus = read_corpus(args.corpus, taxonomy=taxonomy)
    if corpus.name == BASELINE_NAME and baseline_report is not None:
        report = baseline_report
    else:
        report = evaluate_configuration(corpus, entries, lemma_table, baseline=baseline_report)
    c = report.counts
    print(f"config\t{report.config_name}")
    print(f"counts\ttp={c.tp} fp={c.fp} tn={c.tn} fn={c.fn} excluded={report.excluded}")
    print(
        "metrics\t"
        f"precision={format_metric(report.metrics.precision)} "
        f"recall={format_metric(report.metrics.recall)} "
        f"f_measure={format_metric(report.metrics.f_measure)} "
        f"accuracy={format_metric(report.metrics.accuracy)}"
    )
    if baseline_report is not None:
        print(
            "deltas\t"
            f"precision={format_delta(report.delta('precision'), signed=True)} "
            f"recall={format_delta(report.delta('recall'), signed=True)} "
            f"f_measure={format_delta(report.delta('f_measure'), signed=True)} "
            f"accuracy={format_delta(report.delta('accuracy'), signed=True)}"
        )
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(args.taxonomy)
    lemma_table = _lemmas(args)
    entries = load_ground_truth(args.truth)
    configs = enumerate_configurations(args.n_relations)
    root = Path(args.relations_root)
    single = {
        relation: read_corpus(root / relation.code, taxonomy=taxonomy)
        for relation in RELATION_CATALOG[: args.n_relations]
    }
    baseline = read_corpus(root / BASELINE_NAME, taxonomy=taxonomy)
    store = lazy_store(configs, single, taxonomy, lemma_table)
    result = sweep(store, baseline, entries, lemma_table, jobs=args.jobs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_report_csv(result, out / "report.csv")
    write_plot_data(result, out)
    write_extreme_tables(result, out)
    print(f"swept {len(result.reports)} configurations + baseline -> {out / 'report.csv'}")
    return 0


def cmd_filter_queries(args: argparse.Namespace) -> int:
    query_filter = QueryFilter()
    if args.prefixes:
        query_filter = QueryFilter(prefixes=tuple(args.prefixes), keywords=query_filter.keywords)
    if args.keywords:
        query_filter = QueryFilter(prefixes=query_filter.prefixes, keywords=tuple(args.keywords))
    with open(args.input, encoding="utf-8") as fh:
        queries = filter_queries(fh, limit=args.limit, seed=args.seed, query_filter=query_filter)
    write_query_file(queries, args.output)
    print(f"kept {len(queries)} queries -> {args.output}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(args.taxonomy)
    queries = read_query_file(args.queries)
    store = AnnotationStore(taxonomy, queries, store_dir=args.store, batch_size=args.batch_size)
    server = AnnotationServer(store, host=args.host, port=args.port, static_dir=args.static)
    print(f"annotation service on http://{args.host}:{server.port}/ ({len(queries)} queries)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gazex", description=__doc__)
    parser.add_argument("--version", action="version", version=f"gazex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="generate the baseline and one corpus per relation")
    p.add_argument("--taxonomy", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--lemmas", type=Path)
    p.add_argument("--relations", help="subset of relation codes (default: all 11)")
    p.add_argument("--jobs", type=int, default=1)
    _add_provider_args(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("combine", help="build combined corpora for relation subsets")
    p.add_argument("--relations-root", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--taxonomy", type=Path, help="restores original labels from slugs")
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=11)
    p.add_argument("--n-relations", type=int, default=11)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--lazy", action="store_true", help="enumerate and count without writing")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("classify", help="reformulate one query against a corpus directory")
    p.add_argument("--corpus", type=Path, required=True, help="path to <root>/<CONFIG_NAME>")
    p.add_argument("--query", required=True)
    p.add_argument("--taxonomy", type=Path, help="restores original labels from slugs")
    p.add_argument("--lemmas", type=Path)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="score one corpus against a ground-truth file")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--truth", type=Path, required=True)
    p.add_argument("--baseline-corpus", type=Path)
    p.add_argument("--taxonomy", type=Path)
    p.add_argument("--lemmas", type=Path)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="evaluate every configuration and write the report")
    p.add_argument("--relations-root", type=Path, required=True)
    p.add_argument("--truth", type=Path, required=True)
    p.add_argument("--taxonomy", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--lemmas", type=Path)
    p.add_argument("--n-relations", type=int, default=11)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("filter-queries", help="extract transactional queries from a raw log")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int)
    p.add_argument("--prefixes", nargs="*", help="override the prefix patterns")
    p.add_argument("--keywords", nargs="*", help="override the whole-word patterns")
    p.set_defaults(func=cmd_filter_queries)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--queries", type=Path, required=True)
    p.add_argument("--taxonomy", type=Path, required=True)
    p.add_argument("--store", type=Path, required=True)
    p.add_argument("--static", type=Path, help="directory with the built UI bundle")
    p.add_argument("--batch-size", type=int, default=DEFAULT_BATCH_SIZE)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GazexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
