import { describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import type { FetchLike } from "../src/api.js";
import { ConsoleState } from "../src/view.js";

const SCENE = {
  scene_id: "urban-1-2",
  environment: "urban",
  world_bounds: { pan_min: -180, pan_max: 180, tilt_min: -90, tilt_max: 90 },
  objects: [
    {
      id: "car_1",
      label: "car",
      attributes: ["red"],
      extent: { pan_min: 10, pan_max: 20, tilt_min: 0, tilt_max: 6 },
    },
  ],
};

const FRAMES = [
  { index: 1, viewport: { pan_min: -25, pan_max: 35, tilt_min: -16.875, tilt_max: 16.875 }, state: { pan: 5, tilt: 0, zoom: 1 } },
  { index: 2, viewport: { pan_min: -20, pan_max: 40, tilt_min: -16.875, tilt_max: 16.875 }, state: { pan: 10, tilt: 0, zoom: 1 } },
];

function jsonResponse(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function fakeService(routes: Record<string, (body: any) => Response>): FetchLike {
  return async (input, init) => {
    const key = `${init?.method ?? "GET"} ${new URL(input, "http://x").pathname}`;
    const handler = routes[key];
    if (!handler) return jsonResponse(404, { error: "NotFound" });
    const body = init?.body ? JSON.parse(String(init.body)) : {};
    return handler(body);
  };
}

function stateWith(routes: Record<string, (body: any) => Response>): ConsoleState {
  return new ConsoleState(new ServiceClient("http://svc", fakeService(routes)));
}

describe("ConsoleState", () => {
  it("starts a session and mirrors the scene", async () => {
    const state = stateWith({
      "POST /sessions": (body) => {
        expect(body).toEqual({ environment: "urban", seed: 3 });
        return jsonResponse(200, {
          session_id: "abc123",
          state: { pan: 0, tilt: 0, zoom: 1 },
          scene: SCENE,
          viewport: { pan_min: -30, pan_max: 30, tilt_min: -16.875, tilt_max: 16.875 },
        });
      },
    });
    expect(await state.startSession("urban", 3)).toBe(true);
    expect(state.sessionId).toBe("abc123");
    expect(state.scene?.objects[0].id).toBe("car_1");
    expect(state.banner).toBeNull();
  });

  it("shows the server's error verbatim for a bad environment", async () => {
    const state = stateWith({
      "POST /sessions": () =>
        jsonResponse(400, { error: "BadRequest", detail: "unknown environment 'underwater'" }),
    });
    expect(await state.startSession("underwater", 1)).toBe(false);
    expect(state.banner).toContain("unknown environment 'underwater'");
    expect(state.connected).toBe(false);
  });

  it("shows a banner when the service is unreachable", async () => {
    const failing: FetchLike = async () => {
      throw new Error("connect ECONNREFUSED");
    };
    const state = new ConsoleState(new ServiceClient("http://svc", failing));
    expect(await state.startSession("urban", 1)).toBe(false);
    expect(state.banner).toContain("service unreachable");
  });

  it("accepted requests update playlist, state, and transcript", async () => {
    const state = stateWith({
      "POST /sessions": () =>
        jsonResponse(200, {
          session_id: "abc123",
          state: { pan: 0, tilt: 0, zoom: 1 },
          scene: SCENE,
          viewport: FRAMES[0].viewport,
        }),
      "POST /sessions/abc123/request": (body) => {
        expect(body).toEqual({ text: "look right", raw: false });
        return jsonResponse(200, {
          raw_response: "pan_right(2)",
          commands: ["pan_right(2)"],
          commands_text: "pan_right(2)",
          frames: FRAMES,
          state: FRAMES[1].state,
          observations: "a red car is in view\ncamera: pan=10°, tilt=0°, zoom=1x",
        });
      },
    });
    await state.startSession("urban", 3);
    expect(await state.submit("look right")).toBe(true);
    expect(state.playback.all).toEqual(FRAMES);
    expect(state.cameraState).toEqual({ pan: 10, tilt: 0, zoom: 1 });
    expect(state.entries).toHaveLength(1);
    expect(state.entries[0].accepted).toBe(true);
    expect(state.entries[0].commands).toEqual(["pan_right(2)"]);
  });

  it("rejected responses surface the exact diagnostic kinds", async () => {
    const state = stateWith({
      "POST /sessions": () =>
        jsonResponse(200, {
          session_id: "abc123",
          state: { pan: 0, tilt: 0, zoom: 1 },
          scene: SCENE,
          viewport: FRAMES[0].viewport,
        }),
      "POST /sessions/abc123/request": () =>
        jsonResponse(400, {
          error: "ValidationFailure",
          raw_response: "warp(moon_1)",
          diagnostics: [{ position: 0, kind: "UnknownCommand", text: "warp(moon_1)" }],
        }),
    });
    await state.startSession("urban", 3);
    expect(await state.submit("fly to the moon")).toBe(false);
    expect(state.lastDiagnosticKinds()).toEqual(["UnknownCommand"]);
    expect(state.entries[0].accepted).toBe(false);
    expect(state.entries[0].rawResponse).toBe("warp(moon_1)");
    // viewport and playlist untouched
    expect(state.playback.length).toBe(0);
    expect(state.banner).toBeNull();
  });

  it("cannot submit while disconnected, pending, or empty", async () => {
    const state = stateWith({});
    expect(state.canSubmit("hello")).toBe(false);
    state.sessionId = "abc123";
    expect(state.canSubmit("  ")).toBe(false);
    state.pending = true;
    expect(state.canSubmit("hello")).toBe(false);
  });

  it("raw mode flag travels with the request", async () => {
    let sawRaw: boolean | null = null;
    const state = stateWith({
      "POST /sessions": () =>
        jsonResponse(200, {
          session_id: "abc123",
          state: { pan: 0, tilt: 0, zoom: 1 },
          scene: SCENE,
          viewport: FRAMES[0].viewport,
        }),
      "POST /sessions/abc123/request": (body) => {
        sawRaw = body.raw;
        return jsonResponse(200, {
          raw_response: body.text,
          commands: [body.text],
          commands_text: body.text,
          frames: [FRAMES[0]],
          state: FRAMES[0].state,
          observations: "",
        });
      },
    });
    await state.startSession("urban", 3);
    state.rawMode = true;
    await state.submit("zoom(2.0)");
    expect(sawRaw).toBe(true);
  });

  it("resumes an existing session transcript", async () => {
    const state = stateWith({
      "GET /sessions/abc123": () =>
        jsonResponse(200, {
          session_id: "abc123",
          scene: SCENE,
          state: { pan: 15, tilt: 0, zoom: 1 },
          transcript: [
            { request: "look right", raw_response: "pan_right(3)", commands: ["pan_right(3)"], frame_span: [1, 3] },
          ],
          created: 1,
          updated: 2,
        }),
    });
    expect(await state.resumeSession("abc123")).toBe(true);
    expect(state.entries).toHaveLength(1);
    expect(state.cameraState?.pan).toBe(15);
  });
});
