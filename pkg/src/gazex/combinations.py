"""Enumeration of relation subsets and construction of the combined corpora.

Every nonempty subset of the relation catalog names one corpus configuration.
Configurations are ordered by subset size, then name, and carry consecutive
numeric ids starting at 1; for the full catalog of 11 relations that is 2047
configurations.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping

from .corpus import (
    Corpus,
    Gazetteer,
    entries_from_units,
    baseline_units,
    generate_baseline,
    read_corpus,
    write_corpus,
)
from .errors import EmptyRelationSet, GazexError, MissingRelationCorpus
from .relations import RELATION_CATALOG, RelationId
from .taxonomy import LemmaTable, Taxonomy


def configuration_name(relations: Iterable[RelationId]) -> str:
    return " ".join(sorted(r.code for r in relations))


@dataclass(frozen=True)
class CorpusConfiguration:
    """A nonempty relation subset: one classifier tuning."""

    relations: frozenset[RelationId]
    name: str
    numeric_id: int

    @property
    def k(self) -> int:
        return len(self.relations)


def enumerate_configurations(n: int = len(RELATION_CATALOG)) -> list[CorpusConfiguration]:
    """All 2^n - 1 nonempty subsets of the first n catalog relations.

    Ordered by cardinality ascending, then name lexicographic; ids run
    1..2^n - 1 in that order.
    """
    if n <= 0:
        raise EmptyRelationSet("need at least one relation to enumerate configurations")
    if n > len(RELATION_CATALOG):
        raise ValueError(f"catalog holds {len(RELATION_CATALOG)} relations, asked for {n}")
    available = RELATION_CATALOG[:n]
    configs = []
    next_id = 1
    for k in range(1, n + 1):
        # itertools.combinations over the sorted catalog emits subsets in
        # name-lexicographic order already; sort anyway to pin the contract.
        subsets = sorted(combinations(available, k), key=configuration_name)
        for subset in subsets:
            configs.append(CorpusConfiguration(frozenset(subset), configuration_name(subset), next_id))
            next_id += 1
    return configs


def combine_corpora(
    config: CorpusConfiguration,
    single_relation_corpora: Mapping[RelationId, Corpus],
    taxonomy: Taxonomy | None = None,
    lemma_table: LemmaTable | None = None,
    baseline: Corpus | None = None,
) -> Corpus:
    """Merge the single-relation corpora named by `config` into one corpus.

    Per category the label-derived baseline weights are stripped from each
    input gazetteer, the remaining expansion weights are summed term-wise
    across relations, and the label entries are re-added once at baseline
    weights.  For a singleton configuration this reproduces the
    single-relation corpus exactly.  The baseline may be passed directly
    (e.g. read from disk) instead of the taxonomy and lemma table it is
    generated from.
    """
    for relation in config.relations:
        if relation not in single_relation_corpora:
            raise MissingRelationCorpus(f"configuration {config.name!r} needs corpus {relation.code}")
    if baseline is None:
        if taxonomy is None or lemma_table is None:
            raise ValueError("combine_corpora needs a baseline corpus or a taxonomy and lemma table")
        baseline = generate_baseline(taxonomy, lemma_table)
    ordered = sorted(config.relations, key=lambda r: r.code)

    gazetteers = []
    for base_gazetteer in baseline.gazetteers:
        parent_label = base_gazetteer.parent_label
        category_label = base_gazetteer.category_label
        base = base_gazetteer.units_by_term()
        merged = dict(base)
        for relation in ordered:
            source = single_relation_corpora[relation].gazetteer_for(parent_label, category_label)
            for entry in source.entries:
                expansion = entry.units - base.get(entry.term, 0)
                if expansion > 0:
                    merged[entry.term] = merged.get(entry.term, 0) + expansion
        gazetteers.append(Gazetteer(parent_label, category_label, entries_from_units(merged)))
    return Corpus(config.name, tuple(gazetteers))


class CorpusStore:
    """Access to the corpus of every configuration, materialized or lazy."""

    def __init__(self, configurations: list[CorpusConfiguration], loader: Callable[[CorpusConfiguration], Corpus]):
        self.configurations = configurations
        self._loader = loader

    def corpus(self, config: CorpusConfiguration) -> Corpus:
        return self._loader(config)

    def gazetteer_count(self, taxonomy: Taxonomy) -> int:
        """Total gazetteers across configurations without loading contents."""
        per_corpus = taxonomy.category_count()
        return sum(per_corpus for _ in self.configurations)

    def __iter__(self) -> Iterator[tuple[CorpusConfiguration, Corpus]]:
        for config in self.configurations:
            yield config, self.corpus(config)


def lazy_store(
    configurations: list[CorpusConfiguration],
    single_relation_corpora: Mapping[RelationId, Corpus],
    taxonomy: Taxonomy | None = None,
    lemma_table: LemmaTable | None = None,
    baseline: Corpus | None = None,
) -> CorpusStore:
    """A store that builds each combined corpus on demand, nothing on disk."""
    if baseline is None:
        if taxonomy is None or lemma_table is None:
            raise ValueError("lazy_store needs a baseline corpus or a taxonomy and lemma table")
        baseline = generate_baseline(taxonomy, lemma_table)
    fixed_baseline = baseline

    def load(config: CorpusConfiguration) -> Corpus:
        return combine_corpora(config, single_relation_corpora, baseline=fixed_baseline)

    return CorpusStore(configurations, load)


def directory_store(root: str | Path, configurations: list[CorpusConfiguration], taxonomy: Taxonomy | None = None) -> CorpusStore:
    base = Path(root)

    def load(config: CorpusConfiguration) -> Corpus:
        return read_corpus(base / config.name, taxonomy=taxonomy)

    return CorpusStore(configurations, load)


def build_all(
    configurations: list[CorpusConfiguration],
    single_relation_corpora: Mapping[RelationId, Corpus],
    taxonomy: Taxonomy | None,
    lemma_table: LemmaTable | None,
    out_root: str | Path,
    jobs: int = 1,
    baseline: Corpus | None = None,
) -> CorpusStore:
    """Materialize every configuration's corpus under `out_root`.

    Each configuration writes only its own subtree, so the resulting tree is
    byte-identical for any parallelism degree.  The first failure propagates
    with the configuration name attached.
    """
    if baseline is None:
        if taxonomy is None or lemma_table is None:
            raise ValueError("build_all needs a baseline corpus or a taxonomy and lemma table")
        baseline = generate_baseline(taxonomy, lemma_table)
    fixed_baseline = baseline

    def build_one(config: CorpusConfiguration) -> None:
        corpus = combine_corpora(config, single_relation_corpora, baseline=fixed_baseline)
        write_corpus(corpus, out_root)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [(c, pool.submit(build_one, c)) for c in configurations]
            for config, future in futures:
                try:
                    future.result()
                except GazexError as exc:
                    raise type(exc)(f"building {config.name!r}: {exc}") from exc
    else:
        for config in configurations:
            try:
                build_one(config)
            except GazexError as exc:
                raise type(exc)(f"building {config.name!r}: {exc}") from exc
    return directory_store(out_root, configurations, taxonomy=taxonomy)
