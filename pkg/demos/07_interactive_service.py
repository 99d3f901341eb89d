"""Driving the camera service over HTTP.

The service is what the browser console talks to: sessions, requests,
frames, and diagnostics all travel as JSON. Here a scripted endpoint
answers the natural-language request; the same flow works against any
chat-completion endpoint config.
"""

import json
import threading
import urllib.request

from ptzbench.gateway import EndpointSpec
from ptzbench.service import CameraService, make_server

service = CameraService(
    endpoint=EndpointSpec(request_map={"sweep right, please": "pan_right(4)\nhold(2)"})
)
server = make_server(service, port=0)
threading.Thread(target=server.serve_forever, daemon=True).start()
base = f"http://127.0.0.1:{server.server_address[1]}"
print("service at", base)


def call(method: str, path: str, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(base + path, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


status, created = call("POST", "/sessions", {"environment": "construction", "seed": 7})
sid = created["session_id"]
print(f"session {sid}: {len(created['scene']['objects'])} objects, viewport {created['viewport']}")

status, reply = call("POST", f"/sessions/{sid}/request", {"text": "sweep right, please"})
print(f"model said {reply['raw_response'].splitlines()} -> {len(reply['frames'])} frames")
print("camera now:", reply["state"])

status, reply = call("POST", f"/sessions/{sid}/request", {"text": "zoom(99)", "raw": True})
print(f"raw zoom(99) -> HTTP {status}: {[d['kind'] for d in reply['diagnostics']]}")

status, session = call("GET", f"/sessions/{sid}")
print("transcript entries:", len(session["transcript"]))

server.shutdown()
server.server_close()
