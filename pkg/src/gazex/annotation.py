"""Ground-truth collection: sessions, cascading choice lists, append-only store.

Annotators receive round-robin batches of queries, pick a parent category and
then one of its categories (or a sentinel) per query, and the store exports
the aggregated choices in the tab-separated truth format the evaluation
harness parses.  All writes go through an append-only JSONL event log, so
replaying the log reconstructs identical state.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import AlreadyAnnotated, InvalidChoice, NoSuchParent, NoSuchSession
from .evaluation import NONE_SENTINEL, NOT_AN_ANSWER_SENTINEL
from .taxonomy import Taxonomy

SENTINELS = (NONE_SENTINEL, NOT_AN_ANSWER_SENTINEL)
DEFAULT_BATCH_SIZE = 100


@dataclass(frozen=True)
class Annotation:
    query_id: str
    annotator_id: str
    parent_label: str
    category_label: str
    timestamp: float

    @property
    def is_sentinel(self) -> bool:
        return self.parent_label in SENTINELS and self.parent_label == self.category_label


@dataclass(frozen=True)
class SessionView:
    annotator_id: str
    assigned: tuple[str, ...]
    completed: int


class AnnotationStore:
    """State of the ground-truth builder for one query set and taxonomy."""

    def __init__(
        self,
        taxonomy: Taxonomy,
        queries: Sequence[tuple[str, str]],
        store_dir: str | Path | None = None,
        batch_size: int = DEFAULT_BATCH_SIZE,
    ):
        self.taxonomy = taxonomy
        self._queries = list(queries)
        self._query_text = dict(queries)
        if len(self._query_text) != len(self._queries):
            raise ValueError("duplicate query ids in query set")
        self._batch_size = max(1, batch_size)
        self._valid_pairs = {(c.parent_label, c.label) for c in taxonomy.categories()}
        self._parent_labels = taxonomy.parent_labels()

        self._lock = threading.RLock()
        self._assigned: dict[str, list[str]] = {}
        self._session_order: list[str] = []
        self._done: dict[str, set[str]] = {}
        # query_id -> list of (seq, annotator, parent, category) in arrival order
        self._choices: dict[str, list[tuple[int, str, str, str]]] = {}
        self._seq = 0

        self._log_path: Path | None = None
        if store_dir is not None:
            directory = Path(store_dir)
            directory.mkdir(parents=True, exist_ok=True)
            self._log_path = directory / "events.jsonl"
            if self._log_path.exists():
                self._replay()

    # -- persistence ---------------------------------------------------

    def _append_event(self, event: dict) -> None:
        if self._log_path is None:
            return
        with open(self._log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _replay(self) -> None:
        assert self._log_path is not None
        with open(self._log_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                if event["type"] == "session":
                    self._apply_session(event["annotator_id"], event["query_ids"])
                elif event["type"] == "annotation":
                    self._apply_annotation(
                        event["query_id"], event["annotator_id"], event["parent"], event["category"]
                    )

    # -- sessions ------------------------------------------------------

    def _apply_session(self, annotator_id: str, query_ids: list[str]) -> None:
        self._assigned[annotator_id] = list(query_ids)
        self._session_order.append(annotator_id)
        self._done.setdefault(annotator_id, set())

    def _next_batch(self) -> list[str]:
        if not self._queries:
            return []
        batch_count = (len(self._queries) + self._batch_size - 1) // self._batch_size
        index = len(self._session_order) % batch_count
        start = index * self._batch_size
        return [qid for qid, _ in self._queries[start : start + self._batch_size]]

    def create_session(self, annotator_id: str) -> SessionView:
        """Assign the next round-robin batch; idempotent for a known annotator."""
        with self._lock:
            if annotator_id not in self._assigned:
                batch = self._next_batch()
                self._apply_session(annotator_id, batch)
                self._append_event(
                    {"type": "session", "annotator_id": annotator_id, "query_ids": batch}
                )
            return self.session(annotator_id)

    def session(self, annotator_id: str) -> SessionView:
        with self._lock:
            if annotator_id not in self._assigned:
                raise NoSuchSession(f"unknown session {annotator_id!r}")
            assigned = tuple(self._assigned[annotator_id])
            done = self._done[annotator_id]
            return SessionView(annotator_id, assigned, sum(1 for q in assigned if q in done))

    def next_query(self, annotator_id: str) -> tuple[str, str] | None:
        """The next unannotated assigned query in stable order, or None when done."""
        with self._lock:
            if annotator_id not in self._assigned:
                raise NoSuchSession(f"unknown session {annotator_id!r}")
            done = self._done[annotator_id]
            for qid in self._assigned[annotator_id]:
                if qid not in done:
                    return (qid, self._query_text[qid])
            return None

    # -- choice lists ----------------------------------------------------

    def list_parents(self) -> list[str]:
        return list(self._parent_labels)

    def list_categories(self, parent_label: str) -> list[str]:
        """Categories under one parent with the two sentinels appended."""
        try:
            labels = self.taxonomy.categories_of(parent_label)
        except KeyError:
            raise NoSuchParent(f"unknown parent {parent_label!r}") from None
        return labels + list(SENTINELS)

    # -- annotations -----------------------------------------------------

    def _apply_annotation(self, query_id: str, annotator_id: str, parent: str, category: str) -> None:
        self._seq += 1
        self._choices.setdefault(query_id, []).append((self._seq, annotator_id, parent, category))
        self._done.setdefault(annotator_id, set()).add(query_id)

    def submit(self, query_id: str, annotator_id: str, parent_label: str, category_label: str) -> Annotation:
        """Validate and persist one choice.

        Sentinels use the same value in both label fields.  A category that
        does not exist under the chosen parent raises :class:`InvalidChoice`;
        a repeat submission by the same annotator raises
        :class:`AlreadyAnnotated`.
        """
        sentinel = parent_label in SENTINELS or category_label in SENTINELS
        if sentinel:
            if parent_label != category_label:
                raise InvalidChoice("sentinel choices must fill both label fields")
        else:
            if (parent_label, category_label) not in self._valid_pairs:
                raise InvalidChoice(f"{category_label!r} is not a category of {parent_label!r}")
        with self._lock:
            if query_id not in self._query_text:
                raise InvalidChoice(f"unknown query id {query_id!r}")
            for _, annotator, _, _ in self._choices.get(query_id, ()):
                if annotator == annotator_id:
                    raise AlreadyAnnotated(f"{annotator_id!r} already annotated {query_id!r}")
            self._apply_annotation(query_id, annotator_id, parent_label, category_label)
            annotation = Annotation(query_id, annotator_id, parent_label, category_label, time.time())
            self._append_event(
                {
                    "type": "annotation",
                    "query_id": query_id,
                    "annotator_id": annotator_id,
                    "parent": parent_label,
                    "category": category_label,
                    "ts": annotation.timestamp,
                }
            )
            return annotation

    # -- export ----------------------------------------------------------

    def export_ground_truth(self) -> str:
        """One truth line per annotated query, in query-set order.

        Disagreeing annotators resolve by majority; ties go to the choice
        submitted first.
        """
        with self._lock:
            lines = []
            for query_id, text in self._queries:
                choices = self._choices.get(query_id)
                if not choices:
                    continue
                tallies: dict[tuple[str, str], list[int]] = {}
                for seq, _, parent, category in choices:
                    tallies.setdefault((parent, category), []).append(seq)
                parent, category = max(
                    tallies, key=lambda choice: (len(tallies[choice]), -min(tallies[choice]))
                )
                lines.append(f"{query_id}\t{text}\t{parent}\t{category}\n")
            return "".join(lines)
