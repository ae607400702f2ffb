import { CHART_COLORS } from "./colors.js";
import type { ChapterDoc, TimelineDoc } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface TooltipData {
  second: number;
  plays: number;
  pauses: number;
  avg_speed: number;
  cumulative_comments: number;
  chapter_id: string | null;
}

export interface VideoDataViewOptions {
  width?: number;
  height?: number;
  onHover?: (data: TooltipData | null) => void;
  onRangeSelect?: (from: number, to: number) => void;
  onSeek?: (second: number) => void;
}

/** The instructor's per-second activity chart.
 *
 * Plays stack as an area from the lower edge, pauses from the upper edge,
 * average speed is a line around the vertical midline (the 1x baseline), and
 * the cumulative comment count grows from the lower edge. Hovering reports
 * per-second statistics (tooltip mode); dragging selects a second range.
 */
export class VideoDataView {
  private timeline: TimelineDoc | null = null;
  private chapters: ChapterDoc[] = [];
  private duration = 0;
  private readonly width: number;
  private readonly height: number;
  private dragStart: number | null = null;
  private rangeRect: SVGRectElement | null = null;
  private svg: SVGSVGElement | null = null;

  constructor(
    private readonly container: HTMLElement,
    private readonly options: VideoDataViewOptions = {},
  ) {
    this.width = options.width ?? 640;
    this.height = options.height ?? 160;
  }

  render(timeline: TimelineDoc, duration: number, chapters: ChapterDoc[]): void {
    this.timeline = timeline;
    this.duration = duration;
    this.chapters = chapters;

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${this.width} ${this.height}`);
    svg.setAttribute("class", "videodata-view");

    const maxPlays = Math.max(1, ...timeline.plays);
    const maxPauses = Math.max(1, ...timeline.pauses);
    const maxComments = Math.max(1, ...timeline.cumulative_comments);

    // plays accumulate from the lower edge
    svg.appendChild(
      this.areaPath(timeline.plays, maxPlays, "from-bottom", CHART_COLORS.plays, "plays-area"),
    );
    // pauses accumulate from the upper edge
    svg.appendChild(
      this.areaPath(timeline.pauses, maxPauses, "from-top", CHART_COLORS.pauses, "pauses-area"),
    );
    // cumulative comments as a line growing from the lower edge
    svg.appendChild(
      this.linePath(
        timeline.cumulative_comments.map((v) => this.height - (v / maxComments) * this.height * 0.9),
        CHART_COLORS.comments,
        "comments-line",
      ),
    );
    // speed line around the 1x midline; one rate unit spans a quarter height
    const mid = this.height / 2;
    svg.appendChild(
      this.linePath(
        timeline.avg_speed.map((rate) => mid - (rate - 1.0) * (this.height / 4)),
        CHART_COLORS.speed,
        "speed-line",
      ),
    );
    const baseline = document.createElementNS(SVG_NS, "line");
    baseline.setAttribute("x1", "0");
    baseline.setAttribute("x2", String(this.width));
    baseline.setAttribute("y1", String(mid));
    baseline.setAttribute("y2", String(mid));
    baseline.setAttribute("class", "speed-baseline");
    baseline.setAttribute("stroke", "#cccccc");
    baseline.setAttribute("stroke-dasharray", "4 3");
    svg.appendChild(baseline);

    this.rangeRect = document.createElementNS(SVG_NS, "rect");
    this.rangeRect.setAttribute("class", "range-selection");
    this.rangeRect.setAttribute("y", "0");
    this.rangeRect.setAttribute("height", String(this.height));
    this.rangeRect.setAttribute("fill", "#88aaff");
    this.rangeRect.setAttribute("fill-opacity", "0");
    svg.appendChild(this.rangeRect);

    svg.addEventListener("mousemove", (event) => this.pointerMove(this.localX(event)));
    svg.addEventListener("mouseleave", () => this.options.onHover?.(null));
    svg.addEventListener("mousedown", (event) => this.pointerDown(this.localX(event)));
    svg.addEventListener("mouseup", (event) => this.pointerUp(this.localX(event)));
    svg.addEventListener("click", (event) => {
      if (this.dragStart === null) this.options.onSeek?.(this.secondAt(this.localX(event)));
    });

    this.container.replaceChildren(svg);
    this.svg = svg;
  }

  /** Per-second numbers for the tooltip; always equals the dashboard data the
   * view was rendered from. */
  tooltipDataAt(second: number): TooltipData | null {
    if (!this.timeline) return null;
    const s = Math.max(0, Math.min(this.duration, Math.round(second)));
    let chapterId: string | null = null;
    for (const chapter of this.chapters) {
      if (chapter.start <= s && s < chapter.end) chapterId = chapter.chapter_id;
    }
    return {
      second: s,
      plays: this.timeline.plays[s],
      pauses: this.timeline.pauses[s],
      avg_speed: this.timeline.avg_speed[s],
      cumulative_comments: this.timeline.cumulative_comments[s],
      chapter_id: chapterId,
    };
  }

  secondAt(x: number): number {
    const clamped = Math.max(0, Math.min(this.width, x));
    return Math.round((clamped / this.width) * this.duration);
  }

  // pointer handlers take local pixel coordinates so tests can drive them
  pointerMove(x: number): void {
    if (this.dragStart !== null && this.rangeRect) {
      const start = (Math.min(this.dragStart, this.secondAt(x)) / this.duration) * this.width;
      const end = (Math.max(this.dragStart, this.secondAt(x)) / this.duration) * this.width;
      this.rangeRect.setAttribute("x", String(start));
      this.rangeRect.setAttribute("width", String(end - start));
      this.rangeRect.setAttribute("fill-opacity", "0.25");
    }
    this.options.onHover?.(this.tooltipDataAt(this.secondAt(x)));
  }

  pointerDown(x: number): void {
    this.dragStart = this.secondAt(x);
  }

  pointerUp(x: number): void {
    if (this.dragStart === null) return;
    const a = this.dragStart;
    const b = this.secondAt(x);
    this.dragStart = null;
    if (a === b) {
      // a stationary press is a click-to-seek, not a range selection
      this.rangeRect?.setAttribute("fill-opacity", "0");
      return;
    }
    this.options.onRangeSelect?.(Math.min(a, b), Math.max(a, b));
  }

  private localX(event: MouseEvent): number {
    const rect = (this.svg as SVGSVGElement).getBoundingClientRect();
    const scale = rect.width > 0 ? this.width / rect.width : 1;
    return (event.clientX - rect.left) * scale;
  }

  private areaPath(
    values: number[],
    max: number,
    edge: "from-bottom" | "from-top",
    color: string,
    className: string,
  ): SVGPathElement {
    const n = values.length;
    const step = this.width / Math.max(1, n - 1);
    const scale = (this.height / 2) * 0.95;
    const parts: string[] = [];
    const baseline = edge === "from-bottom" ? this.height : 0;
    parts.push(`M 0 ${baseline}`);
    values.forEach((value, i) => {
      const magnitude = (value / max) * scale;
      const y = edge === "from-bottom" ? this.height - magnitude : magnitude;
      parts.push(`L ${(i * step).toFixed(2)} ${y.toFixed(2)}`);
    });
    parts.push(`L ${this.width} ${baseline} Z`);
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", parts.join(" "));
    path.setAttribute("fill", color);
    path.setAttribute("fill-opacity", "0.55");
    path.setAttribute("class", className);
    return path;
  }

  private linePath(ys: number[], color: string, className: string): SVGPathElement {
    const step = this.width / Math.max(1, ys.length - 1);
    const parts = ys.map(
      (y, i) => `${i === 0 ? "M" : "L"} ${(i * step).toFixed(2)} ${y.toFixed(2)}`,
    );
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", parts.join(" "));
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", color);
    path.setAttribute("class", className);
    return path;
  }
}
