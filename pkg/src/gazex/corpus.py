"""Gazetteer corpus generation: baseline, per-relation expansion, enhancement.

A corpus is one weighted word list (gazetteer) per taxonomy category, laid out
on disk as `<root>/<NAME>/<parent_slug>/<category_slug>.lst`.  Weights are
occurrence counts kept in fixed-point half-units so the half-weighted parent
tokens stay exact: 1 unit = 0.5.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

from .errors import CorpusIoError, ProviderUnavailable
from .relations import ExpansionRequest, Provider, RelationId, fetch_related
from .taxonomy import LemmaTable, Taxonomy, Token, slugify, tokenize_label

BASELINE_NAME = "BASELINE"

CATEGORY_UNITS = 2  # weight 1.0 per category-label token occurrence
PARENT_UNITS = 1  # weight 0.5: parent tokens are half weighted
EXPANSION_UNITS = 2  # weight 1.0 per retained expansion occurrence

_WEIGHT_RE = re.compile(r"^(\d+)(?:\.(\d))?$")


def format_weight(units: int) -> str:
    """Render half-units as a decimal with one fractional digit (3 -> '1.5')."""
    return f"{units // 2}.{5 if units % 2 else 0}"


def parse_weight(text: str) -> int:
    """Inverse of :func:`format_weight`; raises ValueError off the half grid."""
    m = _WEIGHT_RE.match(text)
    if not m:
        raise ValueError(f"bad weight {text!r}")
    whole, frac = m.group(1), m.group(2)
    if frac not in (None, "0", "5"):
        raise ValueError(f"weight {text!r} is not a multiple of 0.5")
    units = int(whole) * 2 + (1 if frac == "5" else 0)
    if units <= 0:
        raise ValueError(f"weight {text!r} must be positive")
    return units


@dataclass(frozen=True)
class WeightedTerm:
    term: str
    units: int  # fixed point, 1 unit = 0.5

    @property
    def weight(self) -> float:
        return self.units / 2


@dataclass(frozen=True)
class Gazetteer:
    """The weighted term list for one category.

    Entries are expected in strict ascending term order (plain string order,
    which for lowercase UTF-8 equals byte order); `lookup_units` binary-searches
    under that assumption and callers may check :attr:`is_sorted` first.
    """

    parent_label: str
    category_label: str
    entries: tuple[WeightedTerm, ...]

    @cached_property
    def _terms(self) -> tuple[str, ...]:
        return tuple(e.term for e in self.entries)

    @cached_property
    def is_sorted(self) -> bool:
        terms = self._terms
        return all(terms[i] < terms[i + 1] for i in range(len(terms) - 1))

    def lookup_units(self, term: str) -> int:
        """Binary-search the entries; 0 when the term is absent."""
        terms = self._terms
        lo, hi = 0, len(terms)
        while lo < hi:
            mid = (lo + hi) // 2
            if terms[mid] < term:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(terms) and terms[lo] == term:
            return self.entries[lo].units
        return 0

    def units_by_term(self) -> dict[str, int]:
        return {e.term: e.units for e in self.entries}


@dataclass(frozen=True)
class Corpus:
    """One gazetteer per taxonomy category under a single configuration name."""

    name: str
    gazetteers: tuple[Gazetteer, ...]

    @cached_property
    def by_category(self) -> dict[tuple[str, str], Gazetteer]:
        return {(g.parent_label, g.category_label): g for g in self.gazetteers}

    def gazetteer_for(self, parent_label: str, category_label: str) -> Gazetteer:
        return self.by_category[(parent_label, category_label)]


@dataclass(frozen=True)
class RawCorpus:
    """Phase-2 output: the untouched related-word lists, one per category."""

    relation: RelationId
    word_lists: Mapping[tuple[str, str], tuple[str, ...]]


def _add_label_tokens(units: dict[str, int], tokens: Iterable[Token], per_occurrence: int) -> None:
    # A lemma distinct from its surface counts as one more occurrence at the
    # same weight; identical lemmas must not double the surface.
    for token in tokens:
        units[token.surface] = units.get(token.surface, 0) + per_occurrence
        if token.lemma != token.surface:
            units[token.lemma] = units.get(token.lemma, 0) + per_occurrence


def entries_from_units(units: dict[str, int]) -> tuple[WeightedTerm, ...]:
    return tuple(WeightedTerm(term, n) for term, n in sorted(units.items()) if n > 0)


def baseline_units(category_label: str, parent_label: str, lemma_table: LemmaTable) -> dict[str, int]:
    units: dict[str, int] = {}
    _add_label_tokens(units, tokenize_label(category_label, lemma_table), CATEGORY_UNITS)
    _add_label_tokens(units, tokenize_label(parent_label, lemma_table), PARENT_UNITS)
    return units


def generate_baseline(taxonomy: Taxonomy, lemma_table: LemmaTable) -> Corpus:
    """Build the no-expansion reference corpus.

    Each gazetteer holds the category-label tokens and lemmas at weight 1.0
    and the parent-label tokens and lemmas at weight 0.5, grouped by term with
    summed weights; loaded into the classifier it behaves as pattern matching
    on label words.
    """
    gazetteers = []
    for parent in taxonomy.parents:
        for category in parent.categories:
            units = baseline_units(category.label, parent.label, lemma_table)
            gazetteers.append(Gazetteer(parent.label, category.label, entries_from_units(units)))
    return Corpus(BASELINE_NAME, tuple(gazetteers))


def generate_lists_by_sem_rel(
    taxonomy: Taxonomy,
    relation: RelationId,
    provider: Provider,
    max_terms: int | None = None,
    jobs: int = 1,
) -> RawCorpus:
    """Fetch the raw related-word list for every category under one relation.

    Each request carries the category label as the term and the parent label
    as the topic.  Lists keep provider order, truncated to `max_terms` when
    given.  Results are assembled in taxonomy order regardless of completion
    order, so the output is independent of `jobs`.
    """
    pairs = [(c.parent_label, c.label) for c in taxonomy.categories()]

    def one(pair: tuple[str, str]) -> tuple[str, ...]:
        parent_label, category_label = pair
        request = ExpansionRequest(relation, category_label, parent_label)
        try:
            terms = fetch_related(request, provider)
        except ProviderUnavailable as exc:
            raise ProviderUnavailable(
                f"category {category_label!r} / relation {relation.code}: {exc}"
            ) from exc
        words = tuple(t.word for t in terms)
        return words[:max_terms] if max_terms is not None else words

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            lists = list(pool.map(one, pairs))
    else:
        lists = [one(p) for p in pairs]
    return RawCorpus(relation, dict(zip(pairs, lists)))


def enhance_lists(raw: RawCorpus, taxonomy: Taxonomy, lemma_table: LemmaTable) -> Corpus:
    """Turn raw related-word lists into gazetteers.

    Per category: tokenize every retrieved entry (multi-word entries split),
    prune stop words and words shorter than 2 characters, add the lemma of
    each retained word, then group duplicates with occurrence counts as
    weights.  Category-label tokens (1.0) and parent-label tokens (0.5) are
    added exactly as in the baseline; every retained expansion occurrence and
    its distinct lemma contribute 1.0.  An empty raw list reproduces the
    baseline gazetteer.
    """
    gazetteers = []
    for parent in taxonomy.parents:
        for category in parent.categories:
            units = baseline_units(category.label, parent.label, lemma_table)
            for phrase in raw.word_lists.get((parent.label, category.label), ()):
                _add_label_tokens(units, tokenize_label(phrase, lemma_table), EXPANSION_UNITS)
            gazetteers.append(Gazetteer(parent.label, category.label, entries_from_units(units)))
    return Corpus(raw.relation.code, tuple(gazetteers))


def sort_leaves(corpus: Corpus) -> Corpus:
    """Sort every gazetteer ascending by term, grouping any stray duplicates."""
    changed = False
    gazetteers = []
    for g in corpus.gazetteers:
        if g.is_sorted:
            gazetteers.append(g)
            continue
        units: dict[str, int] = {}
        for entry in g.entries:
            units[entry.term] = units.get(entry.term, 0) + entry.units
        gazetteers.append(Gazetteer(g.parent_label, g.category_label, entries_from_units(units)))
        changed = True
    return Corpus(corpus.name, tuple(gazetteers)) if changed else corpus


def build_single_relation_corpora(
    taxonomy: Taxonomy,
    provider: Provider,
    lemma_table: LemmaTable,
    relations: Iterable[RelationId],
    max_terms: int | None = None,
    jobs: int = 1,
) -> dict[RelationId, Corpus]:
    """Expand, enhance and sort: one finished corpus per relation."""
    corpora = {}
    for relation in relations:
        raw = generate_lists_by_sem_rel(taxonomy, relation, provider, max_terms=max_terms, jobs=jobs)
        corpora[relation] = sort_leaves(enhance_lists(raw, taxonomy, lemma_table))
    return corpora


def write_corpus(corpus: Corpus, root: str | Path) -> Path:
    """Write `<root>/<corpus.name>/<parent_slug>/<category_slug>.lst` files.

    File content: `term<TAB>weight` lines in stored entry order, weight as a
    decimal with one fractional digit.  Empty gazetteers still produce a file
    so file-count identities hold.
    """
    base = Path(root) / corpus.name
    try:
        parent_dirs: dict[str, Path] = {}
        for g in corpus.gazetteers:
            directory = parent_dirs.get(g.parent_label)
            if directory is None:
                directory = base / slugify(g.parent_label)
                directory.mkdir(parents=True, exist_ok=True)
                parent_dirs[g.parent_label] = directory
            lines = "".join(f"{e.term}\t{format_weight(e.units)}\n" for e in g.entries)
            with open(directory / (slugify(g.category_label) + ".lst"), "w", encoding="utf-8") as fh:
                fh.write(lines)
    except OSError as exc:
        raise CorpusIoError(f"writing corpus {corpus.name!r}: {exc}") from exc
    return base


def read_corpus(path: str | Path, taxonomy: Taxonomy | None = None, name: str | None = None) -> Corpus:
    """Read one corpus directory back into memory.

    Slugged directory and file names are restored to original labels when a
    taxonomy is supplied (gazetteers then come back in taxonomy order);
    without one, slugs stand in as labels and order is the sorted directory
    walk.  A malformed weight raises :class:`CorpusIoError` naming the line.
    """
    base = Path(path)
    if not base.is_dir():
        raise CorpusIoError(f"no corpus directory at {base}")
    corpus_name = name if name is not None else base.name

    found: dict[tuple[str, str], tuple[WeightedTerm, ...]] = {}
    for parent_dir in sorted(p for p in base.iterdir() if p.is_dir()):
        for leaf in sorted(parent_dir.glob("*.lst")):
            entries = []
            with open(leaf, encoding="utf-8") as fh:
                for lineno, raw_line in enumerate(fh, start=1):
                    line = raw_line.rstrip("\n")
                    if not line:
                        continue
                    parts = line.split("\t")
                    if len(parts) != 2:
                        raise CorpusIoError(f"{leaf}:{lineno}: expected 'term<TAB>weight'")
                    term, weight_text = parts
                    try:
                        units = parse_weight(weight_text)
                    except ValueError as exc:
                        raise CorpusIoError(f"{leaf}:{lineno}: {exc}") from None
                    entries.append(WeightedTerm(term, units))
            found[(parent_dir.name, leaf.stem)] = tuple(entries)

    if taxonomy is None:
        gazetteers = tuple(
            Gazetteer(parent_slug, category_slug, entries)
            for (parent_slug, category_slug), entries in sorted(found.items())
        )
        return Corpus(corpus_name, gazetteers)

    gazetteers_list = []
    for category in taxonomy.categories():
        key = (slugify(category.parent_label), slugify(category.label))
        entries = found.get(key)
        if entries is None:
            raise CorpusIoError(f"{base}: missing gazetteer file for {key[0]}/{key[1]}.lst")
        gazetteers_list.append(Gazetteer(category.parent_label, category.label, entries))
    return Corpus(corpus_name, tuple(gazetteers_list))
