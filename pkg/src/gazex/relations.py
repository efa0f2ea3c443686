"""The 11 semantic relations and the providers that fetch related words.

A provider answers an :class:`ExpansionRequest` with scored related words.
Three implementations cover the lifecycle: a live HTTP client speaking the
Datamuse `/words?rel_<code>=` wire format, a deterministic fixture provider
for offline runs, and a caching wrapper that snapshots every response on disk
so corpora stay reproducible.
"""

from __future__ import annotations

import enum
import json
import os
import tempfile
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .errors import ProtocolError, ProviderUnavailable

DEFAULT_API_URL = "https://api.datamuse.com"
API_URL_ENV_VAR = "GAZEX_API_URL"
DEFAULT_MAX_RESULTS = 100


class RelationId(enum.Enum):
    """One of the 11 word relations exposed as `rel_<code>` query constraints."""

    ANT = "ANT"  # antonyms
    BGA = "BGA"  # frequent follower words
    BGB = "BGB"  # frequent predecessor words
    COM = "COM"  # comprises: parts of the given whole
    GEN = "GEN"  # more general than: narrower terms
    JJA = "JJA"  # popular nouns for a given adjective
    JJB = "JJB"  # popular adjectives for a given noun
    PAR = "PAR"  # part of: wholes containing the given part
    SPC = "SPC"  # kind of: broader terms
    SYN = "SYN"  # synonyms
    TRG = "TRG"  # trigger words (statistical association)

    @property
    def code(self) -> str:
        return self.value

    def __str__(self) -> str:
        return self.value


# Lexicographic by code; this is the canonical ordering everywhere.
RELATION_CATALOG: tuple[RelationId, ...] = tuple(sorted(RelationId, key=lambda r: r.code))


def relation_from_code(code: str) -> RelationId:
    try:
        return RelationId(code.upper())
    except ValueError:
        raise ValueError(f"unknown relation code {code!r}") from None


@dataclass(frozen=True)
class ScoredTerm:
    word: str
    score: float


@dataclass(frozen=True)
class ExpansionRequest:
    relation: RelationId
    term: str
    topic: str = ""


_SAFE_CHARS = "abcdefghijklmnopqrstuvwxyz0123456789-_"


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in _SAFE_CHARS:
            out.append(ch)
        else:
            out.append("".join(f"%{b:02x}" for b in ch.encode("utf-8")))
    return "".join(out)


def cache_key(request: ExpansionRequest) -> str:
    """A filesystem-safe key, injective over (relation, term, topic) case-folded.

    The term/topic separator `~` never appears in escaped text, so
    ("cake shop", "food") and ("cake", "shop food") map to distinct keys.
    """
    key = f"{request.relation.code.lower()}/{_escape(request.term.lower())}"
    if request.topic:
        key += f"~{_escape(request.topic.lower())}"
    return key


class Provider(Protocol):
    def fetch(self, request: ExpansionRequest) -> list[ScoredTerm]: ...


def _sanitize(entries: list[tuple[str, float]], origin: str) -> list[ScoredTerm]:
    """Drop empty words, reject negative scores, order by descending score."""
    terms = []
    for word, score in entries:
        if not word:
            continue
        if score < 0:
            raise ProtocolError(f"{origin}: negative score for {word!r}")
        terms.append(ScoredTerm(word, score))
    terms.sort(key=lambda t: -t.score)  # stable: ties keep response order
    return terms


class FixtureProvider:
    """Pure provider backed by `relation<TAB>term<TAB>topic<TAB>word<TAB>score` lines.

    Lookup is exact on (relation, lowercase term, lowercase topic); when no
    topic-specific entries exist, entries recorded without a topic apply.
    Unknown requests yield an empty list.
    """

    def __init__(self, path: str | Path | None = None):
        self._entries: dict[tuple[str, str, str], list[tuple[str, float]]] = {}
        if path is not None:
            self._load(Path(path))

    def _load(self, path: Path) -> None:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 5:
                    raise ProtocolError(f"{path}:{lineno}: expected 5 tab-separated fields")
                code, term, topic, word, score_text = parts
                try:
                    relation = relation_from_code(code)
                except ValueError as exc:
                    raise ProtocolError(f"{path}:{lineno}: {exc}") from None
                try:
                    score = float(score_text)
                except ValueError:
                    raise ProtocolError(f"{path}:{lineno}: bad score {score_text!r}") from None
                self.add(relation, term, topic, word, score)

    def add(self, relation: RelationId, term: str, topic: str, word: str, score: float) -> None:
        key = (relation.code, term.lower(), topic.lower())
        self._entries.setdefault(key, []).append((word, score))

    def fetch(self, request: ExpansionRequest) -> list[ScoredTerm]:
        key = (request.relation.code, request.term.lower(), request.topic.lower())
        entries = self._entries.get(key)
        if entries is None and request.topic:
            entries = self._entries.get((request.relation.code, request.term.lower(), ""))
        return _sanitize(list(entries or ()), origin="fixtures")


class LiveProvider:
    """HTTP client for a Datamuse-compatible endpoint.

    One GET per request: `/words?rel_<code>=<term>[&topics=<topic>][&max=<n>]`,
    expecting a JSON array of objects with `word` and optional `score`.
    Failures are retried with exponential backoff before raising
    :class:`ProviderUnavailable`; at most `max_inflight` requests run at once.
    """

    def __init__(
        self,
        base_url: str | None = None,
        max_results: int = DEFAULT_MAX_RESULTS,
        timeout: float = 10.0,
        retries: int = 3,
        backoff: float = 0.5,
        max_inflight: int = 4,
    ):
        self.base_url = (base_url or os.environ.get(API_URL_ENV_VAR) or DEFAULT_API_URL).rstrip("/")
        self.max_results = max_results
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._gate = threading.Semaphore(max_inflight)

    def _url(self, request: ExpansionRequest) -> str:
        params = [(f"rel_{request.relation.code.lower()}", request.term)]
        if request.topic:
            params.append(("topics", request.topic))
        if self.max_results:
            params.append(("max", str(self.max_results)))
        return f"{self.base_url}/words?{urllib.parse.urlencode(params)}"

    def fetch(self, request: ExpansionRequest) -> list[ScoredTerm]:
        url = self._url(request)
        last_error: Exception | None = None
        for attempt in range(self.retries):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                with self._gate:
                    with urllib.request.urlopen(url, timeout=self.timeout) as resp:
                        if resp.status != 200:
                            raise ProviderUnavailable(f"GET {url} -> HTTP {resp.status}")
                        body = resp.read()
                return _parse_body(body, origin=url)
            except ProtocolError:
                raise
            except (urllib.error.URLError, OSError, ProviderUnavailable) as exc:
                last_error = exc
        raise ProviderUnavailable(f"GET {url} failed after {self.retries} attempts: {last_error}")


def _parse_body(body: bytes, origin: str) -> list[ScoredTerm]:
    try:
        payload = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProtocolError(f"{origin}: unparseable body: {exc}") from None
    if not isinstance(payload, list):
        raise ProtocolError(f"{origin}: expected a JSON array")
    entries = []
    for item in payload:
        if not isinstance(item, dict) or "word" not in item:
            raise ProtocolError(f"{origin}: array item without 'word': {item!r}")
        word = item["word"]
        score = item.get("score", 0)
        if not isinstance(word, str) or not isinstance(score, (int, float)):
            raise ProtocolError(f"{origin}: malformed entry {item!r}")
        entries.append((word, float(score)))
    return _sanitize(entries, origin=origin)


class CachingProvider:
    """Wrap any provider with a never-expiring on-disk response cache.

    One JSON file per :func:`cache_key`; writes go through a temp file and an
    atomic rename so concurrent workers never observe partial entries.  Repeat
    requests are answered from disk verbatim, which makes recorded live
    sessions replayable without network access.
    """

    def __init__(self, inner: Provider, cache_dir: str | Path):
        self.inner = inner
        self.cache_dir = Path(cache_dir)

    def _path(self, request: ExpansionRequest) -> Path:
        return self.cache_dir / (cache_key(request) + ".json")

    def fetch(self, request: ExpansionRequest) -> list[ScoredTerm]:
        path = self._path(request)
        if path.exists():
            payload = json.loads(path.read_text("utf-8"))
            return [ScoredTerm(e["word"], float(e["score"])) for e in payload]
        terms = self.inner.fetch(request)
        payload = [{"word": t.word, "score": t.score} for t in terms]
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, ensure_ascii=False)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return terms


def fetch_related(request: ExpansionRequest, provider: Provider) -> list[ScoredTerm]:
    """Fetch the related words for one request; empty list is a valid outcome."""
    if not request.term:
        raise ValueError("expansion request needs a non-empty term")
    return provider.fetch(request)
