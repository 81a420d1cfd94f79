"""HTTP prediction service.

A small stateless JSON API over a model loaded once at startup:

    POST /api/predict     {"raw_text": ...} or {"sentences": [...]},
                          optional "contextual", "threshold", "flag_policy"
    GET  /api/health      200 when a model is loaded, 503 otherwise
    GET  /api/model-info  the model artifact header

Requests are served concurrently over a shared immutable model, so
identical requests always produce identical responses.  Responses carry a
permissive CORS header for the browser front end.
"""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .artifact import load_artifact
from .pipeline import SentenceScorer

MAX_PAYLOAD_BYTES = 1 << 20  # 1 MiB


class ServiceState:
    def __init__(self, artifact=None, cors_origin: str = "*"):
        self.artifact = artifact
        self.scorer = SentenceScorer(artifact) if artifact is not None else None
        self.cors_origin = cors_origin


def _validate(payload: dict) -> tuple[dict | None, str | None]:
    if not isinstance(payload, dict):
        return None, "request body must be a JSON object"
    has_text = "raw_text" in payload
    has_sentences = "sentences" in payload
    if has_text == has_sentences:
        return None, "provide exactly one of raw_text or sentences"
    if has_text and not isinstance(payload["raw_text"], str):
        return None, "raw_text must be a string"
    if has_sentences:
        if not isinstance(payload["sentences"], list) or not all(
            isinstance(s, dict) and isinstance(s.get("text"), str)
            for s in payload["sentences"]
        ):
            return None, "sentences must be a list of {text, section_type?} objects"
    threshold = payload.get("threshold", 0.5)
    if not isinstance(threshold, (int, float)) or not 0 < threshold < 1:
        return None, "threshold must lie strictly between 0 and 1"
    contextual = payload.get("contextual")
    if contextual is not None and not isinstance(contextual, bool):
        return None, "contextual must be a boolean"
    flag_policy = payload.get("flag_policy", "zeros")
    if flag_policy not in ("zeros", "two_pass"):
        return None, "flag_policy must be 'zeros' or 'two_pass'"
    return {
        "raw_text": payload.get("raw_text"),
        "records": payload.get("sentences"),
        "threshold": float(threshold),
        "contextual": contextual,
        "flag_policy": flag_policy,
    }, None


class PredictionHandler(BaseHTTPRequestHandler):
    state: ServiceState  # assigned by make_server

    server_version = "citeworth/0.1"
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # silent by default
        pass

    def _send(self, status: int, body: dict) -> None:
        data = json.dumps(body, sort_keys=True).encode("utf-8")
        try:
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(data)))
            self.send_header("Access-Control-Allow-Origin", self.state.cors_origin)
            if self.close_connection:
                self.send_header("Connection", "close")
            self.end_headers()
            self.wfile.write(data)
        except (BrokenPipeError, ConnectionResetError):
            pass

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", self.state.cors_origin)
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        if self.path == "/api/health":
            if self.state.scorer is None:
                self._send(503, {"status": "unavailable"})
            else:
                self._send(
                    200,
                    {
                        "status": "ok",
                        "model_version": self.state.artifact.format_version,
                    },
                )
        elif self.path == "/api/model-info":
            if self.state.scorer is None:
                self._send(503, {"error": "model not loaded"})
            else:
                self._send(200, self.state.artifact.info())
        else:
            self._send(404, {"error": "not found"})

    def do_POST(self):
        if self.path != "/api/predict":
            self._send(404, {"error": "not found"})
            return
        if self.state.scorer is None:
            self._send(503, {"error": "model not loaded"})
            return
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_PAYLOAD_BYTES:
            # Refuse without reading the oversized body; the connection
            # cannot be reused afterwards.
            self.close_connection = True
            self._send(413, {"error": "payload exceeds 1 MiB"})
            return
        raw = self.rfile.read(length)
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            self._send(400, {"error": "malformed JSON body"})
            return
        request, problem = _validate(payload)
        if problem:
            self._send(400, {"error": problem})
            return
        results = self.state.scorer.predict(
            raw_text=request["raw_text"],
            records=request["records"],
            contextual=request["contextual"],
            threshold=request["threshold"],
            flag_policy=request["flag_policy"],
        )
        self._send(
            200,
            {
                "sentences": [r.to_dict() for r in results],
                "model_info": self.state.artifact.info(),
            },
        )


def make_server(
    model_file=None,
    artifact=None,
    host: str = "127.0.0.1",
    port: int = 8080,
    cors_origin: str = "*",
) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server.

    A missing or unloadable model leaves the service answering 503 on
    health checks instead of refusing to start.
    """
    if artifact is None and model_file is not None:
        try:
            artifact = load_artifact(model_file)
        except Exception:
            artifact = None
    state = ServiceState(artifact, cors_origin)
    handler = type("BoundHandler", (PredictionHandler,), {"state": state})
    return ThreadingHTTPServer((host, port), handler)


def start_background(server: ThreadingHTTPServer) -> threading.Thread:
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread


def serve(model_file, host: str = "127.0.0.1", port: int = 8080, cors_origin: str = "*") -> None:
    """Blocking entry point used by the CLI."""
    server = make_server(model_file, host=host, port=port, cors_origin=cors_origin)
    sa = server.socket.getsockname()
    print(f"serving on http://{sa[0]}:{sa[1]} (Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
