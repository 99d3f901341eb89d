/**
 * Frame playlist playback. Purely presentational: stepping through the
 * playlist never talks to the server and never mutates server state.
 */

import type { FrameDto } from "./api.js";

export class Playback {
  private frames: FrameDto[] = [];
  private cursor = -1;
  private playing = false;

  /** Replace the playlist and rewind to its first frame (auto-playing). */
  load(frames: FrameDto[]): void {
    this.frames = frames.slice();
    this.cursor = this.frames.length > 0 ? 0 : -1;
    this.playing = this.frames.length > 1;
  }

  clear(): void {
    this.frames = [];
    this.cursor = -1;
    this.playing = false;
  }

  get length(): number {
    return this.frames.length;
  }

  get position(): number {
    return this.cursor;
  }

  get isPlaying(): boolean {
    return this.playing;
  }

  get current(): FrameDto | null {
    return this.cursor >= 0 ? this.frames[this.cursor] : null;
  }

  get all(): FrameDto[] {
    return this.frames.slice();
  }

  atEnd(): boolean {
    return this.cursor >= this.frames.length - 1;
  }

  /** Timer tick: advance one frame; stops playing at the last frame. */
  advance(): boolean {
    if (!this.playing) return false;
    if (this.atEnd()) {
      this.playing = false;
      return false;
    }
    this.cursor += 1;
    if (this.atEnd()) this.playing = false;
    return true;
  }

  stepForward(): FrameDto | null {
    this.playing = false;
    if (this.cursor < this.frames.length - 1) this.cursor += 1;
    return this.current;
  }

  stepBack(): FrameDto | null {
    this.playing = false;
    if (this.cursor > 0) this.cursor -= 1;
    return this.current;
  }

  pause(): void {
    this.playing = false;
  }

  resume(): void {
    if (this.frames.length > 0 && !this.atEnd()) this.playing = true;
  }

  restart(): void {
    if (this.frames.length > 0) {
      this.cursor = 0;
      this.playing = this.frames.length > 1;
    }
  }
}
