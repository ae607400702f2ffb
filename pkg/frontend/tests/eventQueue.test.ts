import { describe, expect, it, vi } from "vitest";

import { EventQueue } from "../src/eventQueue.js";
import { PlayerTracker, type VideoLike } from "../src/player.js";
import type { PlayerEventRecord } from "../src/types.js";
import { FakeApi } from "./helpers.js";

class FakeVideo implements VideoLike {
  currentTime = 0;
  playbackRate = 1.0;
  private listeners = new Map<string, (() => void)[]>();

  addEventListener(type: string, listener: () => void): void {
    this.listeners.set(type, [...(this.listeners.get(type) ?? []), listener]);
  }

  emit(type: string): void {
    for (const listener of this.listeners.get(type) ?? []) listener();
  }
}

describe("event queue", () => {
  it("flushes batched events on the timer", async () => {
    vi.useFakeTimers();
    const api = new FakeApi();
    const queue = new EventQueue(api, "vid");
    queue.start();
    queue.push("play", 3);
    queue.push("rate", 10, 1.5);
    expect(api.postedBatches()).toHaveLength(0);

    await vi.advanceTimersByTimeAsync(5000);
    const batches = api.postedBatches();
    expect(batches).toHaveLength(1);
    expect(batches[0].events!.map((e) => e.kind)).toEqual(["play", "rate"]);
    expect(batches[0].events![1].rate).toBe(1.5);
    queue.stop();
    vi.useRealTimers();
  });

  it("requeues on failure and retries: at-least-once delivery", async () => {
    const api = new FakeApi();
    const queue = new EventQueue(api, "vid");
    queue.push("play", 0);
    api.failNextPost = true;
    await queue.flush();
    expect(queue.pendingCount).toBe(1);

    await queue.flush();
    expect(queue.pendingCount).toBe(0);
    expect(api.postedBatches()).toHaveLength(1);
  });

  it("player trace replays to the same watch intervals it produced", async () => {
    const api = new FakeApi();
    const queue = new EventQueue(api, "vid");
    const video = new FakeVideo();
    new PlayerTracker(video, {
      onPlay: (second) => queue.push("play", second),
      onPause: (second) => queue.push("pause", second),
      onRateChange: (second, rate) => queue.push("rate", second, rate),
    });

    // watch [0, 30], seek to 100, watch [100, 120]
    const trace: [string, number][] = [
      ["play", 0],
      ["pause", 30],
      ["seeking", 30],
      ["seeked", 100],
      ["play", 100],
      ["pause", 120],
    ];
    for (const [type, second] of trace) {
      video.currentTime = second;
      video.emit(type);
    }
    await queue.flush();
    const events = api.postedBatches().flatMap((b) => b.events ?? []);

    // independent interval reconstruction: play opens, pause closes
    const intervals: [number, number][] = [];
    let open: number | null = null;
    for (const event of events) {
      if (event.kind === "play" && open === null) open = event.video_second;
      if (event.kind === "pause" && open !== null) {
        intervals.push([open, event.video_second]);
        open = null;
      }
    }
    expect(intervals).toEqual([
      [0, 30],
      [100, 120],
    ]);
  });

  it("rate changes carry the new playback rate", async () => {
    const api = new FakeApi();
    const queue = new EventQueue(api, "vid");
    const video = new FakeVideo();
    new PlayerTracker(video, {
      onPlay: (s) => queue.push("play", s),
      onPause: (s) => queue.push("pause", s),
      onRateChange: (s, r) => queue.push("rate", s, r),
    });
    video.currentTime = 42.7;
    video.playbackRate = 2.0;
    video.emit("ratechange");
    await queue.flush();
    const events = api.postedBatches()[0].events as PlayerEventRecord[];
    expect(events[0]).toMatchObject({ kind: "rate", video_second: 42, rate: 2.0 });
  });
});
