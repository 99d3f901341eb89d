/**
 * Typed client for the ptzbench camera service. The console performs no
 * simulation or parsing of its own: every frame, state, and diagnostic
 * shown in the UI originates from one of these endpoints.
 */

export interface RectDto {
  pan_min: number;
  pan_max: number;
  tilt_min: number;
  tilt_max: number;
}

export interface StateDto {
  pan: number;
  tilt: number;
  zoom: number;
}

export interface SceneObjectDto {
  id: string;
  label: string;
  attributes: string[];
  extent: RectDto;
}

export interface SceneDto {
  scene_id: string;
  environment: string;
  world_bounds: RectDto;
  objects: SceneObjectDto[];
}

export interface FrameDto {
  index: number;
  viewport: RectDto;
  state: StateDto;
}

export interface SessionCreated {
  session_id: string;
  state: StateDto;
  scene: SceneDto;
  viewport: RectDto;
}

export interface RequestReply {
  raw_response: string;
  commands: string[];
  commands_text: string;
  frames: FrameDto[];
  state: StateDto;
  observations: string;
}

export interface DiagnosticDto {
  position: number;
  kind: string;
  text: string;
}

export interface TranscriptEntryDto {
  request: string;
  raw_response: string;
  commands: string[];
  frame_span: [number, number];
}

export interface SessionDto {
  session_id: string;
  scene: SceneDto;
  state: StateDto;
  transcript: TranscriptEntryDto[];
  created: number;
  updated: number;
}

export interface EnvironmentInfo {
  name: string;
  labels: string[];
  attributes: string[];
}

export interface Catalog {
  environments: EnvironmentInfo[];
}

/** A non-2xx reply; `payload` is the service's JSON error body verbatim. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly payload: { error?: string; diagnostics?: DiagnosticDto[]; [key: string]: unknown },
  ) {
    super(`service replied ${status}: ${payload.error ?? "unknown error"}`);
    this.name = "ServiceError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ServiceError(response.status, payload);
    }
    return payload as T;
  }

  createSession(environment: string, seed: number, objectCount?: number): Promise<SessionCreated> {
    const body: Record<string, unknown> = { environment, seed };
    if (objectCount !== undefined) body.object_count = objectCount;
    return this.call<SessionCreated>("POST", "/sessions", body);
  }

  submitRequest(sessionId: string, text: string, raw: boolean): Promise<RequestReply> {
    return this.call<RequestReply>("POST", `/sessions/${sessionId}/request`, { text, raw });
  }

  getSession(sessionId: string): Promise<SessionDto> {
    return this.call<SessionDto>("GET", `/sessions/${sessionId}`);
  }

  deleteSession(sessionId: string): Promise<{ deleted: string }> {
    return this.call<{ deleted: string }>("DELETE", `/sessions/${sessionId}`);
  }

  catalog(): Promise<Catalog> {
    return this.call<Catalog>("GET", "/scenes");
  }
}
