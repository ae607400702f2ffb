import type { Api } from "./api.js";
import { ChapterBar } from "./player.js";
import { CommentPanel } from "./commentPanel.js";
import { GraphView } from "./graphView.js";
import { VideoDataView, type TooltipData } from "./charts.js";
import type { CommentSort, DashboardDoc } from "./types.js";

export interface InstructorViewElements {
  chapterBar: HTMLElement;
  charts: HTMLElement;
  tooltip: HTMLElement;
  network: HTMLElement;
  comments: HTMLElement;
  seek?: (second: number) => void;
}

/** Instructor end: VideoData charts with tooltip and range-selection modes,
 * the three-way sortable comment section, and the aggregate-shaded network. */
export class InstructorView {
  readonly charts: VideoDataView;
  readonly graph: GraphView;
  readonly comments: CommentPanel;
  readonly chapterBar: ChapterBar;
  private dashboard: DashboardDoc | null = null;
  private sort: CommentSort = "submit_time";

  constructor(
    private readonly api: Api,
    private readonly videoId: string,
    private readonly elements: InstructorViewElements,
  ) {
    this.chapterBar = new ChapterBar(elements.chapterBar, (second) =>
      elements.seek?.(second),
    );
    this.charts = new VideoDataView(elements.charts, {
      onHover: (data) => this.renderTooltip(data),
      onRangeSelect: (from, to) => void this.selectRange(from, to),
      onSeek: (second) => elements.seek?.(second),
    });
    this.graph = new GraphView(elements.network, {});
    this.comments = new CommentPanel(elements.comments, {
      mode: "instructor",
      onSortChange: (sort) => void this.resort(sort),
    });
  }

  async start(): Promise<void> {
    this.dashboard = await this.api.getDashboard(this.videoId);
    const video = this.dashboard.video;
    this.chapterBar.render(video.chapters, video.duration);
    this.charts.render(this.dashboard.timeline, video.duration, video.chapters);

    const graphDoc = await this.api.getGraph(this.videoId);
    this.graph.render(graphDoc);
    this.graph.applyAggregates(this.dashboard.concepts);

    this.renderComments();
  }

  /** Tooltip mode: per-second statistics plus the chapter node highlight. */
  private renderTooltip(data: TooltipData | null): void {
    const tooltip = this.elements.tooltip;
    if (!data) {
      tooltip.hidden = true;
      this.chapterBar.highlight([]);
      return;
    }
    tooltip.hidden = false;
    tooltip.replaceChildren();
    const rows: [string, string][] = [
      ["second", String(data.second)],
      ["plays", String(data.plays)],
      ["pauses", String(data.pauses)],
      ["avg speed", data.avg_speed.toFixed(3)],
      ["comments so far", String(data.cumulative_comments)],
    ];
    for (const [label, value] of rows) {
      const row = document.createElement("div");
      row.dataset.stat = label.replace(/ /g, "-");
      row.textContent = `${label}: ${value}`;
      tooltip.appendChild(row);
    }
    this.chapterBar.highlight(data.chapter_id ? [data.chapter_id] : []);
  }

  /** Range-selection mode: one API call, then focus the comment section on
   * the in-range list and highlight intersecting chapters. */
  async selectRange(from: number, to: number): Promise<void> {
    this.dashboard = await this.api.getDashboard(this.videoId, [from, to]);
    const range = this.dashboard.range;
    if (!range) return;
    this.chapterBar.highlight(range.chapter_ids);
    this.comments.focus(range.comments);
  }

  private async resort(sort: CommentSort): Promise<void> {
    this.sort = sort;
    this.renderComments();
  }

  private renderComments(): void {
    if (!this.dashboard) return;
    const index = this.dashboard.comment_index;
    const ordered = index.order[this.sort].map((id) => index.comments[id]);
    this.comments.render(ordered, this.sort);
  }

  get currentDashboard(): DashboardDoc | null {
    return this.dashboard;
  }
}
