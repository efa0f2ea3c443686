"""HTTP+JSON front of the annotation store, plus static serving for the UI.

Endpoints:
  GET  /api/session/{id}/next      next unannotated query (session auto-created)
  GET  /api/parents                parent labels and the sentinel choices
  GET  /api/categories?parent=X    categories under X with sentinels appended
  POST /api/annotations            {query_id, annotator_id, parent, category}
  GET  /api/export                 the tab-separated ground-truth file

Anything outside /api/ is served from the static directory when one is
configured (the built UI bundle).
"""

from __future__ import annotations

import json
import mimetypes
import threading
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .annotation import SENTINELS, AnnotationStore
from .errors import AlreadyAnnotated, InvalidChoice, NoSuchParent


class AnnotationServer:
    """A threaded HTTP server bound to one annotation store."""

    def __init__(self, store: AnnotationStore, host: str = "127.0.0.1", port: int = 8080,
                 static_dir: str | Path | None = None):
        self.store = store
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        handler = _make_handler(store, self.static_dir)
        self.httpd = ThreadingHTTPServer((host, port), handler)

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    def serve_forever(self) -> None:
        self.httpd.serve_forever()

    def start_background(self) -> threading.Thread:
        thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        thread.start()
        return thread

    def shutdown(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()


def _make_handler(store: AnnotationStore, static_dir: Path | None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, payload: dict, status: int = 200) -> None:
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_error_json(self, status: int, code: str, message: str) -> None:
            self._send_json({"error": code, "message": message}, status=status)

        def do_GET(self) -> None:
            parsed = urllib.parse.urlparse(self.path)
            path = parsed.path
            if path == "/api/parents":
                self._send_json({"parents": store.list_parents(), "sentinels": list(SENTINELS)})
            elif path == "/api/categories":
                params = urllib.parse.parse_qs(parsed.query)
                parent = params.get("parent", [""])[0]
                try:
                    categories = store.list_categories(parent)
                except NoSuchParent as exc:
                    self._send_error_json(404, "no_such_parent", str(exc))
                    return
                self._send_json({"parent": parent, "categories": categories})
            elif path.startswith("/api/session/") and path.endswith("/next"):
                annotator_id = urllib.parse.unquote(path[len("/api/session/") : -len("/next")])
                if not annotator_id:
                    self._send_error_json(404, "no_such_session", "empty session id")
                    return
                session = store.create_session(annotator_id)
                record = store.next_query(annotator_id)
                payload = {
                    "annotator_id": annotator_id,
                    "assigned": len(session.assigned),
                    "completed": session.completed,
                }
                if record is None:
                    payload["exhausted"] = True
                else:
                    payload["query_id"], payload["query"] = record
                self._send_json(payload)
            elif path == "/api/export":
                body = store.export_ground_truth().encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "text/tab-separated-values; charset=utf-8")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
            elif path.startswith("/api/"):
                self._send_error_json(404, "not_found", f"no endpoint {path}")
            else:
                self._serve_static(path)

        def do_POST(self) -> None:
            if urllib.parse.urlparse(self.path).path != "/api/annotations":
                self._send_error_json(404, "not_found", f"no endpoint {self.path}")
                return
            length = int(self.headers.get("Content-Length", "0"))
            try:
                payload = json.loads(self.rfile.read(length).decode("utf-8"))
                query_id = payload["query_id"]
                annotator_id = payload["annotator_id"]
                parent = payload["parent"]
                category = payload["category"]
            except (json.JSONDecodeError, UnicodeDecodeError, KeyError, TypeError):
                self._send_error_json(400, "bad_request", "expected JSON with query_id, annotator_id, parent, category")
                return
            try:
                store.submit(query_id, annotator_id, parent, category)
            except InvalidChoice as exc:
                self._send_error_json(400, "invalid_choice", str(exc))
                return
            except AlreadyAnnotated as exc:
                self._send_error_json(409, "already_annotated", str(exc))
                return
            self._send_json({"accepted": True}, status=201)

        def _serve_static(self, path: str) -> None:
            if static_dir is None:
                self._send_error_json(404, "not_found", "no static directory configured")
                return
            relative = path.lstrip("/") or "index.html"
            target = (static_dir / relative).resolve()
            if not str(target).startswith(str(static_dir)) or not target.is_file():
                self._send_error_json(404, "not_found", f"no file {path}")
                return
            body = target.read_bytes()
            ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler
