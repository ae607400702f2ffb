import type { ChapterDoc } from "./types.js";

/** The slice of HTMLVideoElement the tracker needs; lets tests drive a fake. */
export interface VideoLike {
  currentTime: number;
  playbackRate: number;
  addEventListener(type: string, listener: () => void): void;
}

export interface PlayerEvents {
  onPlay(second: number): void;
  onPause(second: number): void;
  onRateChange(second: number, rate: number): void;
}

/** Emits one clickstream record per player transition, stamped with the
 * current integer video second. */
export class PlayerTracker {
  constructor(video: VideoLike, events: PlayerEvents) {
    video.addEventListener("play", () => events.onPlay(Math.floor(video.currentTime)));
    video.addEventListener("pause", () => events.onPause(Math.floor(video.currentTime)));
    video.addEventListener("ratechange", () =>
      events.onRateChange(Math.floor(video.currentTime), video.playbackRate),
    );
    // a seek interrupts the watch interval: model it as pause + play
    video.addEventListener("seeking", () => events.onPause(Math.floor(video.currentTime)));
    video.addEventListener("seeked", () => events.onPlay(Math.floor(video.currentTime)));
  }
}

/** Chapter progress bar under the player; clicking a segment seeks to its
 * start, and the segment containing the playhead carries the active class. */
export class ChapterBar {
  private segments = new Map<string, HTMLElement>();

  constructor(
    private readonly container: HTMLElement,
    private readonly onSeek: (second: number) => void,
  ) {}

  render(chapters: ChapterDoc[], duration: number): void {
    this.container.replaceChildren();
    this.segments.clear();
    this.container.classList.add("chapter-bar");
    for (const chapter of chapters) {
      const segment = document.createElement("div");
      segment.className = "chapter-segment";
      segment.dataset.chapterId = chapter.chapter_id;
      segment.title = chapter.title;
      segment.style.width = `${(((chapter.end - chapter.start) / duration) * 100).toFixed(2)}%`;
      segment.addEventListener("click", () => this.onSeek(chapter.start));
      this.container.appendChild(segment);
      this.segments.set(chapter.chapter_id, segment);
    }
  }

  setActive(chapterId: string | null): void {
    for (const [id, segment] of this.segments) {
      segment.classList.toggle("active", id === chapterId);
    }
  }

  highlight(chapterIds: string[]): void {
    const wanted = new Set(chapterIds);
    for (const [id, segment] of this.segments) {
      segment.classList.toggle("highlighted", wanted.has(id));
    }
  }
}

export function chapterAt(chapters: ChapterDoc[], second: number): ChapterDoc | null {
  let preceding: ChapterDoc | null = null;
  for (const chapter of chapters) {
    if (chapter.start <= second && second < chapter.end) return chapter;
    if (chapter.end <= second) preceding = chapter;
  }
  return preceding ?? chapters[0] ?? null;
}
