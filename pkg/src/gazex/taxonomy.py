"""Two-level taxonomy parsing and the label tokenization shared by every phase.

The taxonomy file is UTF-8 text with one `parent<TAB>category` record per
line; lines starting with `#` are comments.  Labels are kept verbatim for
display, while all matching happens on lowercase tokens produced by
:func:`tokenize_label`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import DuplicateLabel, EmptyTaxonomy, MalformedRecord

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
_MIN_TOKEN_LEN = 2


def _load_default_stopwords() -> frozenset[str]:
    text = resources.files("gazex.data").joinpath("stopwords.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


STOP_WORDS: frozenset[str] = _load_default_stopwords()


def slugify(label: str) -> str:
    """Map a label to its file-system name: lowercase, non-alphanumerics -> `_`."""
    return "".join(c if c.isalnum() else "_" for c in label.lower())


@dataclass(frozen=True)
class Token:
    """A lowercase word kept after filtering, with its lemma (surface on miss)."""

    surface: str
    lemma: str


class LemmaTable:
    """Surface -> lemma lookup, identity for unknown surfaces.

    File format: one `surface<TAB>lemma` pair per line, UTF-8.  Mappings whose
    lemma would not survive token filtering (too short, stop word, not a single
    alphanumeric word) are ignored so gazetteers never inherit invalid terms.
    """

    def __init__(self, mapping: dict[str, str] | None = None):
        self._map: dict[str, str] = {}
        for surface, lemma in (mapping or {}).items():
            surface = surface.lower()
            lemma = lemma.lower()
            if _is_valid_term(lemma):
                self._map[surface] = lemma

    @classmethod
    def load(cls, path: str | Path) -> "LemmaTable":
        mapping: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    continue
                mapping[parts[0].strip()] = parts[1].strip()
        return cls(mapping)

    def lemma_of(self, surface: str) -> str:
        return self._map.get(surface, surface)

    def __len__(self) -> int:
        return len(self._map)


EMPTY_LEMMAS = LemmaTable()


def _is_valid_term(word: str) -> bool:
    if len(word) < _MIN_TOKEN_LEN or word in STOP_WORDS:
        return False
    return _WORD_RE.fullmatch(word) is not None


def tokenize_label(label: str, lemma_table: LemmaTable = EMPTY_LEMMAS) -> list[Token]:
    """Split a label or query into kept tokens.

    Lowercases, treats every non-alphanumeric character as a boundary, drops
    stop words and words shorter than 2 characters, and attaches each
    surviving word's lemma.  A lemma that would itself be filtered falls back
    to the surface form.
    """
    tokens = []
    for word in _WORD_RE.findall(label.lower()):
        if len(word) < _MIN_TOKEN_LEN or word in STOP_WORDS:
            continue
        lemma = lemma_table.lemma_of(word)
        if not _is_valid_term(lemma):
            lemma = word
        tokens.append(Token(word, lemma))
    return tokens


@dataclass(frozen=True)
class Category:
    label: str
    parent_label: str


@dataclass(frozen=True)
class ParentCategory:
    label: str
    categories: tuple[Category, ...]


@dataclass(frozen=True)
class Taxonomy:
    """An ordered two-level hierarchy of parent categories and categories."""

    parents: tuple[ParentCategory, ...] = field(default_factory=tuple)

    def category_count(self) -> int:
        return sum(len(p.categories) for p in self.parents)

    def categories(self) -> Iterator[Category]:
        for parent in self.parents:
            yield from parent.categories

    def parent_labels(self) -> list[str]:
        return [p.label for p in self.parents]

    def categories_of(self, parent_label: str) -> list[str]:
        for parent in self.parents:
            if parent.label == parent_label:
                return [c.label for c in parent.categories]
        raise KeyError(parent_label)

    def serialize(self) -> str:
        lines = [f"{c.parent_label}\t{c.label}" for c in self.categories()]
        return "".join(line + "\n" for line in lines)


def parse_taxonomy(source: IO[str] | Iterable[str]) -> Taxonomy:
    """Parse and validate a taxonomy stream, preserving source ordering.

    Raises :class:`MalformedRecord` for structurally broken lines,
    :class:`DuplicateLabel` for a repeated (parent, category) pair and
    :class:`EmptyTaxonomy` when the stream holds no records.
    """
    order: list[str] = []
    children: dict[str, list[Category]] = {}
    seen: set[tuple[str, str]] = set()

    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise MalformedRecord(f"line {lineno}: expected 'parent<TAB>category', got {line!r}")
        parent_label, category_label = (p.strip() for p in parts)
        if not parent_label or not category_label:
            raise MalformedRecord(f"line {lineno}: empty label in {line!r}")
        key = (parent_label, category_label)
        if key in seen:
            raise DuplicateLabel(f"line {lineno}: duplicate pair {parent_label!r} / {category_label!r}")
        seen.add(key)
        if parent_label not in children:
            if not tokenize_label(parent_label):
                raise MalformedRecord(
                    f"line {lineno}: parent label {parent_label!r} leaves no tokens after filtering"
                )
            order.append(parent_label)
            children[parent_label] = []
        children[parent_label].append(Category(category_label, parent_label))

    if not seen:
        raise EmptyTaxonomy("no category records found")

    parents = tuple(ParentCategory(label, tuple(children[label])) for label in order)
    return Taxonomy(parents)


def load_taxonomy(path: str | Path) -> Taxonomy:
    with open(path, encoding="utf-8") as fh:
        return parse_taxonomy(fh)
