"""Three-phase query classification: clean, browse the corpus, reformulate.

A query is cleaned with the same tokenizer used on taxonomy labels, every
term (and its distinct lemma) is looked up in each gazetteer by binary
search, and the query is reformulated as the taxonomy label(s) holding the
highest positive weight sum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Corpus, Gazetteer
from .errors import UnsortedGazetteer
from .taxonomy import LemmaTable, Token, tokenize_label


@dataclass(frozen=True)
class CleanQuery:
    original: str
    terms: tuple[Token, ...]


@dataclass(frozen=True)
class LabelScore:
    parent_label: str
    category_label: str
    units: int  # weight sum in half-units

    @property
    def score(self) -> float:
        return self.units / 2


@dataclass(frozen=True)
class ClassificationOutcome:
    """Elected labels (the tie set at the maximal positive score) and ranking."""

    elected: frozenset[tuple[str, str]]
    ranking: tuple[LabelScore, ...]  # positive scores only, descending

    @property
    def best(self) -> tuple[str, str] | None:
        """Single-answer view: lexicographically first elected label."""
        return min(self.elected) if self.elected else None


def clean_query(query: str, lemma_table: LemmaTable) -> CleanQuery:
    """Prune stop words and short words, lowercase, attach lemmas."""
    return CleanQuery(query, tuple(tokenize_label(query, lemma_table)))


def score_gazetteer(query: CleanQuery, gazetteer: Gazetteer) -> int:
    """Weight-sum of the query terms found in one gazetteer, in half-units.

    Every query-term occurrence contributes independently; a term's lemma is
    looked up too when it differs from the surface.
    """
    if not gazetteer.is_sorted:
        raise UnsortedGazetteer(
            f"gazetteer {gazetteer.parent_label!r}/{gazetteer.category_label!r} is not sorted"
        )
    units = 0
    for token in query.terms:
        units += gazetteer.lookup_units(token.surface)
        if token.lemma != token.surface:
            units += gazetteer.lookup_units(token.lemma)
    return units


def score_corpus(query: CleanQuery, corpus: Corpus) -> list[LabelScore]:
    """Score every gazetteer of the corpus, in corpus order."""
    return [
        LabelScore(g.parent_label, g.category_label, score_gazetteer(query, g))
        for g in corpus.gazetteers
    ]


def reformulate(query: str, corpus: Corpus, lemma_table: LemmaTable) -> ClassificationOutcome:
    """Classify a query as the highest-scoring taxonomy label(s).

    All labels tied at the maximal positive score are elected; when no
    gazetteer scores above zero the elected set is empty.
    """
    cleaned = clean_query(query, lemma_table)
    scores = score_corpus(cleaned, corpus)
    positive = [s for s in scores if s.units > 0]
    positive.sort(key=lambda s: (-s.units, s.parent_label, s.category_label))
    if not positive:
        return ClassificationOutcome(frozenset(), ())
    top = positive[0].units
    elected = frozenset(
        (s.parent_label, s.category_label) for s in positive if s.units == top
    )
    return ClassificationOutcome(elected, tuple(positive))
