import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from ptzbench.camera import CameraState
from ptzbench.fixtures import build_expert_dataset
from ptzbench.gateway import (
    AuthError,
    DuplicatePromptFingerprint,
    EndpointSpec,
    MalformedEndpointReply,
    Timeout,
    TransportError,
    complete,
    scripted_from_dataset,
)
from ptzbench.prompting import build_prompt
from ptzbench.scene import generate_scene

SCENE = generate_scene("urban", 5, 4)
PROMPT = build_prompt(SCENE, CameraState(0, 0, 1), "Look left.")


class _StubHandler(BaseHTTPRequestHandler):
    """Configurable chat-completions stub."""

    behavior = "ok"
    fail_times = 0
    calls = 0

    def log_message(self, fmt, *args):
        pass

    def do_POST(self):
        cls = type(self)
        cls.calls += 1
        if cls.behavior == "flaky" and cls.calls <= cls.fail_times:
            self.send_response(503)
            self.end_headers()
            return
        if cls.behavior == "auth":
            self.send_response(401)
            self.end_headers()
            return
        if cls.behavior == "slow":
            time.sleep(0.5)
        if cls.behavior == "garbage":
            body = b"{\"nope\": true}"
        else:
            length = int(self.headers.get("Content-Length") or 0)
            request = json.loads(self.rfile.read(length))
            reply = {
                "choices": [{"message": {"content": f"echo:{request['model']}"}}],
                "usage": {"prompt_tokens": 5, "completion_tokens": 2},
            }
            body = json.dumps(reply).encode()
        try:
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        except BrokenPipeError:
            pass  # client gave up (timeout test)


@pytest.fixture
def stub_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    _StubHandler.behavior = "ok"
    _StubHandler.fail_times = 0
    _StubHandler.calls = 0
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


def _remote(base_url: str, **kwargs) -> EndpointSpec:
    defaults = dict(kind="remote-chat", base_url=base_url, model_name="stub", timeout=2.0, max_retries=2)
    defaults.update(kwargs)
    return EndpointSpec(**defaults)


def test_scripted_transcript_playback():
    endpoint = EndpointSpec(transcript={PROMPT.fingerprint: "zoom(2.0)"})
    exchange = complete(endpoint, PROMPT)
    assert exchange.response_text == "zoom(2.0)"
    assert exchange.error is None


def test_scripted_request_map_and_default():
    endpoint = EndpointSpec(request_map={"Look left.": "pan_left(3)"}, default_response="home()")
    assert complete(endpoint, PROMPT).response_text == "pan_left(3)"
    other = build_prompt(SCENE, CameraState(0, 0, 1), "Anything else.")
    assert complete(endpoint, other).response_text == "home()"


def test_scripted_responder_wins():
    endpoint = EndpointSpec(responder=lambda p: "hold(2)", default_response="home()")
    assert complete(endpoint, PROMPT).response_text == "hold(2)"


def test_scripted_missing_prompt_is_malformed_reply():
    endpoint = EndpointSpec(transcript={"deadbeef": "zoom(2.0)"})
    with pytest.raises(MalformedEndpointReply):
        complete(endpoint, PROMPT)


def test_empty_completion_carries_error_marker():
    endpoint = EndpointSpec(default_response="")
    exchange = complete(endpoint, PROMPT)
    assert exchange.response_text == ""
    assert exchange.error == "EmptyCompletion"


def test_remote_roundtrip(stub_server):
    exchange = complete(_remote(stub_server), PROMPT)
    assert exchange.response_text == "echo:stub"
    assert exchange.token_counts == (5, 2)
    assert exchange.latency >= 0.0


def test_remote_retries_transient_failures(stub_server):
    _StubHandler.behavior = "flaky"
    _StubHandler.fail_times = 2
    exchange = complete(_remote(stub_server), PROMPT)
    assert exchange.response_text == "echo:stub"
    assert _StubHandler.calls == 3


def test_remote_transport_error_after_retries(stub_server):
    _StubHandler.behavior = "flaky"
    _StubHandler.fail_times = 99
    with pytest.raises(TransportError):
        complete(_remote(stub_server, max_retries=1), PROMPT)
    assert _StubHandler.calls == 2


def test_remote_unreachable_is_transport_error():
    endpoint = _remote("http://127.0.0.1:9", max_retries=0, timeout=0.5)
    with pytest.raises(TransportError):
        complete(endpoint, PROMPT)


def test_remote_auth_error_not_retried(stub_server):
    _StubHandler.behavior = "auth"
    with pytest.raises(AuthError):
        complete(_remote(stub_server), PROMPT)
    assert _StubHandler.calls == 1


def test_remote_timeout(stub_server):
    _StubHandler.behavior = "slow"
    with pytest.raises(Timeout):
        complete(_remote(stub_server, timeout=0.05, max_retries=0), PROMPT)


def test_remote_malformed_reply(stub_server):
    _StubHandler.behavior = "garbage"
    with pytest.raises(MalformedEndpointReply):
        complete(_remote(stub_server, max_retries=0), PROMPT)


def test_endpoint_spec_validation():
    with pytest.raises(ValueError):
        EndpointSpec(kind="carrier-pigeon")
    with pytest.raises(ValueError):
        EndpointSpec(kind="remote-chat", base_url="")
    with pytest.raises(ValueError):
        EndpointSpec(timeout=0)


def test_scripted_from_dataset_replays_expert_responses():
    dataset = build_expert_dataset(count=10)
    endpoint = scripted_from_dataset(dataset)
    for instance in dataset:
        prompt = build_prompt(instance.scene, instance.initial_state, instance.request)
        assert complete(endpoint, prompt).response_text == instance.response


def test_scripted_from_dataset_rejects_duplicates():
    dataset = build_expert_dataset(count=5)
    with pytest.raises(DuplicatePromptFingerprint):
        scripted_from_dataset(list(dataset) + [dataset[0]])


def test_audit_log_written(tmp_path):
    path = tmp_path / "audit.jsonl"
    endpoint = EndpointSpec(default_response="home()", audit_log_path=str(path))
    complete(endpoint, PROMPT)
    complete(endpoint, PROMPT)
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert len(records) == 2
    assert records[0]["fingerprint"] == PROMPT.fingerprint
    assert records[0]["response_text"] == "home()"
