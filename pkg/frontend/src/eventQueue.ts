import type { Api } from "./api.js";
import type { PlayerEventKind, PlayerEventRecord } from "./types.js";

const FLUSH_INTERVAL_MS = 5000;

/** Batches player events and flushes them every few seconds.
 *
 * Delivery is at-least-once: a failed flush requeues the batch and retries on
 * the next tick; the server deduplicates identical events, so replays are
 * harmless. Events carry their own wall_time, assigned at enqueue time.
 */
export class EventQueue {
  private pending: PlayerEventRecord[] = [];
  private inFlight = false;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly api: Api,
    private readonly videoId: string,
    private readonly now: () => Date = () => new Date(),
  ) {}

  start(intervalMs: number = FLUSH_INTERVAL_MS): void {
    if (this.timer === null) {
      this.timer = setInterval(() => void this.flush(), intervalMs);
    }
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  push(kind: PlayerEventKind, videoSecond: number, rate?: number): void {
    const record: PlayerEventRecord = {
      kind,
      video_second: videoSecond,
      wall_time: this.now().toISOString(),
    };
    if (kind === "rate" && rate !== undefined) record.rate = rate;
    this.pending.push(record);
  }

  get pendingCount(): number {
    return this.pending.length;
  }

  async flush(): Promise<void> {
    if (this.inFlight || this.pending.length === 0) return;
    const batch = this.pending;
    this.pending = [];
    this.inFlight = true;
    try {
      await this.api.postFeedback(this.videoId, { events: batch });
    } catch {
      // requeue ahead of anything pushed while the request was in flight
      this.pending = [...batch, ...this.pending];
    } finally {
      this.inFlight = false;
    }
  }
}
