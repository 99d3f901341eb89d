/**
 * Console view state: one session, its scene snapshot, the transcript,
 * and the current frame playlist. The server is the single source of
 * truth; this layer only mirrors its responses for the DOM to render.
 */

import { ServiceClient, ServiceError } from "./api.js";
import type { DiagnosticDto, SceneDto, StateDto } from "./api.js";
import { Playback } from "./playback.js";

export interface ConsoleEntry {
  request: string;
  rawResponse: string;
  commands: string[];
  diagnostics: DiagnosticDto[];
  accepted: boolean;
}

export class ConsoleState {
  sessionId: string | null = null;
  scene: SceneDto | null = null;
  cameraState: StateDto | null = null;
  observations = "";
  entries: ConsoleEntry[] = [];
  playback = new Playback();
  rawMode = false;
  banner: string | null = null;
  pending = false;

  constructor(private readonly client: ServiceClient) {}

  get connected(): boolean {
    return this.sessionId !== null;
  }

  /** Submission is disabled while a request is in flight or text is empty. */
  canSubmit(text: string): boolean {
    return this.connected && !this.pending && text.trim().length > 0;
  }

  async startSession(environment: string, seed: number, objectCount?: number): Promise<boolean> {
    this.banner = null;
    try {
      const created = await this.client.createSession(environment, seed, objectCount);
      this.sessionId = created.session_id;
      this.scene = created.scene;
      this.cameraState = created.state;
      this.observations = "";
      this.entries = [];
      this.playback.clear();
      return true;
    } catch (err) {
      this.sessionId = null;
      this.scene = null;
      this.banner = describeError(err);
      return false;
    }
  }

  /** Re-hydrate from the server (page reload with a known session id). */
  async resumeSession(sessionId: string): Promise<boolean> {
    this.banner = null;
    try {
      const session = await this.client.getSession(sessionId);
      this.sessionId = session.session_id;
      this.scene = session.scene;
      this.cameraState = session.state;
      this.entries = session.transcript.map((entry) => ({
        request: entry.request,
        rawResponse: entry.raw_response,
        commands: entry.commands,
        diagnostics: [],
        accepted: true,
      }));
      this.playback.clear();
      return true;
    } catch (err) {
      this.banner = describeError(err);
      return false;
    }
  }

  async submit(text: string): Promise<boolean> {
    if (!this.canSubmit(text) || this.sessionId === null) return false;
    this.pending = true;
    try {
      const reply = await this.client.submitRequest(this.sessionId, text, this.rawMode);
      this.entries.push({
        request: text,
        rawResponse: reply.raw_response,
        commands: reply.commands,
        diagnostics: [],
        accepted: true,
      });
      this.playback.load(reply.frames);
      this.cameraState = reply.state;
      this.observations = reply.observations;
      return true;
    } catch (err) {
      if (err instanceof ServiceError && err.payload.error === "ValidationFailure") {
        // rejected response: show the model text and the parser diagnostics;
        // camera state and playlist stay as they were
        this.entries.push({
          request: text,
          rawResponse: String(err.payload.raw_response ?? ""),
          commands: [],
          diagnostics: err.payload.diagnostics ?? [],
          accepted: false,
        });
      } else {
        this.banner = describeError(err);
      }
      return false;
    } finally {
      this.pending = false;
    }
  }

  /** Diagnostic kinds of the most recent entry (what the badges render). */
  lastDiagnosticKinds(): string[] {
    const last = this.entries[this.entries.length - 1];
    return last ? last.diagnostics.map((d) => d.kind) : [];
  }
}

export function describeError(err: unknown): string {
  if (err instanceof ServiceError) {
    const detail = err.payload.detail ?? err.payload.error ?? "request failed";
    return `service error ${err.status}: ${detail}`;
  }
  return `service unreachable: ${err instanceof Error ? err.message : String(err)}`;
}
