"""HTTP service backing the interactive console.

Endpoints (all JSON):

* ``POST /sessions`` ``{environment, seed, object_count?}`` opens a session
  and returns the scene, camera state, and initial viewport.
* ``POST /sessions/{id}/request`` ``{text, raw?, endpoint?}`` runs one
  interaction: raw mode executes the text as commands, otherwise the text
  is a natural-language request answered by the configured (or inline)
  endpoint. Returns the raw model text, parsed commands, emitted frames,
  the new state, and fresh observations.
* ``GET /sessions/{id}`` returns the full session including transcript.
* ``GET /scenes`` lists the environment catalog.
* ``DELETE /sessions/{id}`` discards a session.

Sessions live in memory; a per-session lock serializes concurrent
requests against the same session while distinct sessions proceed in
parallel.
"""

from __future__ import annotations

import json
import re
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .camera import CameraState, HOME_STATE, simulate, viewport_of
from .commands import parse_response, serialize
from .gateway import EndpointSpec, GatewayError, complete
from .prompting import PromptConfig, build_prompt
from .scene import ENVIRONMENTS, Scene, describe_observations, generate_scene

DEFAULT_OBJECT_COUNT = 5


class ServiceError(Exception):
    def __init__(self, status: int, payload: dict):
        super().__init__(payload.get("error", "service error"))
        self.status = status
        self.payload = payload


def unknown_session(session_id: str) -> ServiceError:
    return ServiceError(404, {"error": "UnknownSession", "session_id": session_id})


def validation_failure(diagnostics, raw_response: str) -> ServiceError:
    return ServiceError(
        400,
        {
            "error": "ValidationFailure",
            "raw_response": raw_response,
            "diagnostics": [
                {"position": d.position, "kind": d.kind, "text": d.text} for d in diagnostics
            ],
        },
    )


def bad_request(message: str) -> ServiceError:
    return ServiceError(400, {"error": "BadRequest", "detail": message})


@dataclass
class Session:
    session_id: str
    scene: Scene
    state: CameraState
    transcript: list[dict] = field(default_factory=list)
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)
    frames_emitted: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "scene": self.scene.to_dict(),
            "state": self.state.to_dict(),
            "transcript": list(self.transcript),
            "created": self.created,
            "updated": self.updated,
        }


class CameraService:
    """Session store and request logic, independent of the HTTP plumbing."""

    def __init__(
        self,
        endpoint: EndpointSpec | None = None,
        prompt_config: PromptConfig | None = None,
        persist_path: str | None = None,
    ):
        self.endpoint = endpoint
        self.prompt_config = prompt_config or PromptConfig()
        self.persist_path = persist_path
        self._sessions: dict[str, Session] = {}
        self._guard = threading.Lock()
        self._persist_lock = threading.Lock()

    # -- sessions ----------------------------------------------------------

    def create_session(self, environment: str, seed: int, object_count: int = DEFAULT_OBJECT_COUNT) -> dict:
        try:
            scene = generate_scene(environment, seed, object_count)
        except ValueError as exc:
            raise bad_request(str(exc)) from exc
        session = Session(session_id=uuid.uuid4().hex[:12], scene=scene, state=HOME_STATE)
        with self._guard:
            self._sessions[session.session_id] = session
        return {
            "session_id": session.session_id,
            "state": session.state.to_dict(),
            "scene": scene.to_dict(),
            "viewport": viewport_of(session.state).to_dict(),
        }

    def _session(self, session_id: str) -> Session:
        with self._guard:
            session = self._sessions.get(session_id)
        if session is None:
            raise unknown_session(session_id)
        return session

    def get_session(self, session_id: str) -> dict:
        return self._session(session_id).to_dict()

    def delete_session(self, session_id: str) -> dict:
        with self._guard:
            if session_id not in self._sessions:
                raise unknown_session(session_id)
            del self._sessions[session_id]
        return {"deleted": session_id}

    def scene_catalog(self) -> dict:
        return {
            "environments": [
                {"name": name, "labels": list(vocab.labels), "attributes": list(vocab.attributes)}
                for name, vocab in sorted(ENVIRONMENTS.items())
            ]
        }

    # -- interaction -------------------------------------------------------

    def handle_request(
        self,
        session_id: str,
        text: str,
        raw: bool = False,
        endpoint_override: dict | None = None,
    ) -> dict:
        if not text or not text.strip():
            raise bad_request("text must be nonempty")
        session = self._session(session_id)
        with session.lock:
            endpoint = self.endpoint
            if endpoint_override is not None:
                try:
                    endpoint = EndpointSpec.from_dict(endpoint_override)
                except (ValueError, TypeError) as exc:
                    raise bad_request(f"bad endpoint spec: {exc}") from exc
            if raw or endpoint is None:
                raw_response = text
            else:
                prompt = build_prompt(session.scene, session.state, text, self.prompt_config)
                try:
                    raw_response = complete(endpoint, prompt).response_text
                except GatewayError as exc:
                    raise ServiceError(
                        502, {"error": type(exc).__name__, "detail": str(exc)}
                    ) from exc
            outcome = parse_response(raw_response, session.scene)
            if not outcome.accepted:
                raise validation_failure(outcome.diagnostics, raw_response)
            sim = simulate(session.scene, session.state, outcome.commands)
            first = session.frames_emitted + 1
            session.frames_emitted += len(sim.frames)
            session.state = sim.final_state
            session.updated = time.time()
            entry = {
                "request": text,
                "raw_response": raw_response,
                "commands": [c.render() for c in outcome.commands],
                "frame_span": [first, session.frames_emitted],
            }
            session.transcript.append(entry)
            if self.persist_path:
                with self._persist_lock, open(self.persist_path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps({"session_id": session_id, **entry}, sort_keys=True) + "\n")
            return {
                "raw_response": raw_response,
                "commands": [c.render() for c in outcome.commands],
                "commands_text": serialize(outcome.commands),
                "frames": [f.to_dict() for f in sim.frames],
                "state": session.state.to_dict(),
                "observations": describe_observations(session.scene, session.state),
            }


_SESSION_PATH = re.compile(r"^/sessions/([0-9a-f]+)$")
_REQUEST_PATH = re.compile(r"^/sessions/([0-9a-f]+)/request$")


class _Handler(BaseHTTPRequestHandler):
    service: CameraService  # set by make_server

    def log_message(self, fmt: str, *args) -> None:  # quiet by default
        pass

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        try:
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            raise bad_request(f"body is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise bad_request("body must be a JSON object")
        return payload

    def _dispatch(self) -> tuple[int, dict]:
        path = self.path.split("?", 1)[0].rstrip("/") or "/"
        if self.command == "GET" and path == "/scenes":
            return 200, self.service.scene_catalog()
        if self.command == "POST" and path == "/sessions":
            body = self._body()
            if "environment" not in body:
                raise bad_request("missing field 'environment'")
            try:
                seed = int(body.get("seed", 0))
                object_count = int(body.get("object_count", DEFAULT_OBJECT_COUNT))
            except (TypeError, ValueError) as exc:
                raise bad_request(f"seed and object_count must be integers: {exc}") from exc
            return 200, self.service.create_session(
                environment=str(body["environment"]),
                seed=seed,
                object_count=object_count,
            )
        match = _REQUEST_PATH.match(path)
        if self.command == "POST" and match:
            body = self._body()
            if "text" not in body:
                raise bad_request("missing field 'text'")
            return 200, self.service.handle_request(
                match.group(1),
                text=str(body["text"]),
                raw=bool(body.get("raw", False)),
                endpoint_override=body.get("endpoint"),
            )
        match = _SESSION_PATH.match(path)
        if match:
            if self.command == "GET":
                return 200, self.service.get_session(match.group(1))
            if self.command == "DELETE":
                return 200, self.service.delete_session(match.group(1))
        raise ServiceError(404, {"error": "NotFound", "path": path})

    def _handle(self) -> None:
        try:
            status, payload = self._dispatch()
        except ServiceError as exc:
            status, payload = exc.status, exc.payload
        except Exception as exc:  # total: the service must answer something
            status, payload = 500, {"error": "InternalError", "detail": str(exc)}
        self._send(status, payload)

    do_GET = _handle
    do_POST = _handle
    do_DELETE = _handle


def make_server(service: CameraService, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """Bind the service to a ThreadingHTTPServer (port 0 picks a free port)."""
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve(
    port: int,
    host: str = "127.0.0.1",
    endpoint: EndpointSpec | None = None,
    persist_path: str | None = None,
) -> None:
    """Run the service until interrupted, announcing the bound address."""
    service = CameraService(endpoint=endpoint, persist_path=persist_path)
    server = make_server(service, host=host, port=port)
    actual_port = server.server_address[1]
    print(f"ptzbench service listening on http://{host}:{actual_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
