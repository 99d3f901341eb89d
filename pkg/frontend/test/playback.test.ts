import { describe, expect, it } from "vitest";

import type { FrameDto } from "../src/api.js";
import { Playback } from "../src/playback.js";

function frame(index: number): FrameDto {
  const pan = index * 5;
  return {
    index,
    viewport: { pan_min: pan - 30, pan_max: pan + 30, tilt_min: -16.875, tilt_max: 16.875 },
    state: { pan, tilt: 0, zoom: 1 },
  };
}

describe("Playback", () => {
  it("starts empty", () => {
    const playback = new Playback();
    expect(playback.current).toBeNull();
    expect(playback.length).toBe(0);
    expect(playback.advance()).toBe(false);
  });

  it("loads a playlist at its first frame, playing", () => {
    const playback = new Playback();
    playback.load([frame(1), frame(2), frame(3)]);
    expect(playback.position).toBe(0);
    expect(playback.isPlaying).toBe(true);
    expect(playback.current?.index).toBe(1);
  });

  it("advances to the end and stops", () => {
    const playback = new Playback();
    playback.load([frame(1), frame(2), frame(3)]);
    expect(playback.advance()).toBe(true);
    expect(playback.advance()).toBe(true);
    expect(playback.isPlaying).toBe(false);
    expect(playback.advance()).toBe(false);
    expect(playback.position).toBe(2);
  });

  it("single-frame playlists are immediately at rest", () => {
    const playback = new Playback();
    playback.load([frame(1)]);
    expect(playback.isPlaying).toBe(false);
    expect(playback.current?.index).toBe(1);
  });

  it("stepping pauses and clamps at both ends", () => {
    const playback = new Playback();
    playback.load([frame(1), frame(2)]);
    playback.stepBack();
    expect(playback.position).toBe(0);
    expect(playback.isPlaying).toBe(false);
    playback.stepForward();
    playback.stepForward();
    expect(playback.position).toBe(1);
  });

  it("restart rewinds and resumes", () => {
    const playback = new Playback();
    playback.load([frame(1), frame(2), frame(3)]);
    while (playback.advance()) { /* run out */ }
    playback.restart();
    expect(playback.position).toBe(0);
    expect(playback.isPlaying).toBe(true);
  });

  it("pause and resume round-trip", () => {
    const playback = new Playback();
    playback.load([frame(1), frame(2), frame(3)]);
    playback.pause();
    expect(playback.advance()).toBe(false);
    playback.resume();
    expect(playback.advance()).toBe(true);
  });

  it("replaying never mutates the playlist", () => {
    const playback = new Playback();
    const frames = [frame(1), frame(2)];
    playback.load(frames);
    playback.stepForward();
    playback.restart();
    expect(playback.all).toEqual(frames);
  });
});
