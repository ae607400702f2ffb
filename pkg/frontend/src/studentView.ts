import type { Api } from "./api.js";
import { ChapterBar, PlayerTracker, type VideoLike, chapterAt } from "./player.js";
import { CommentPanel } from "./commentPanel.js";
import { EventQueue } from "./eventQueue.js";
import { GraphView } from "./graphView.js";
import { KnowledgeView } from "./knowledgeView.js";
import type { NodeDoc, VideoRecord } from "./types.js";

export interface StudentViewElements {
  video: VideoLike & { currentTime: number };
  chapterBar: HTMLElement;
  network: HTMLElement;
  knowledge: HTMLElement;
  comments: HTMLElement;
}

/** Student end: player with chapter bar, own-comment section, the chapter's
 * dependency subgraph, and the knowledge view with the scoring module.
 *
 * Every server-facing interaction maps to exactly one API call; player events
 * go through the batching queue with idempotent server-side dedup.
 */
export class StudentView {
  readonly graph: GraphView;
  readonly knowledge: KnowledgeView;
  readonly comments: CommentPanel;
  readonly queue: EventQueue;
  readonly chapterBar: ChapterBar;
  private record: VideoRecord | null = null;
  private currentChapter: string | null = null;
  private scores = new Map<string, number>();

  constructor(
    private readonly api: Api,
    private readonly videoId: string,
    elements: StudentViewElements,
  ) {
    this.queue = new EventQueue(api, videoId);
    this.graph = new GraphView(elements.network, {
      onSelect: (node) => this.showKnowledge(node),
    });
    this.knowledge = new KnowledgeView(elements.knowledge, (node, score) => {
      void this.submitScore(node, score);
    });
    this.comments = new CommentPanel(elements.comments, {
      mode: "student",
      onPost: (second, body) => void this.postComment(second, body),
      onDelete: (commentId) => void this.deleteComment(commentId),
    });
    this.chapterBar = new ChapterBar(elements.chapterBar, (second) => {
      elements.video.currentTime = second;
    });
    new PlayerTracker(elements.video, {
      onPlay: (second) => this.queue.push("play", second),
      onPause: (second) => this.queue.push("pause", second),
      onRateChange: (second, rate) => this.queue.push("rate", second, rate),
    });
  }

  async start(): Promise<void> {
    this.record = await this.api.getVideo(this.videoId);
    this.chapterBar.render(this.record.chapters, this.record.duration);
    this.queue.start();
    await this.refreshComments();
    await this.enterChapterAt(0);
  }

  /** Called on every playhead second; re-fetches the subgraph on chapter change. */
  async enterChapterAt(second: number): Promise<void> {
    if (!this.record) return;
    const chapter = chapterAt(this.record.chapters, second);
    if (!chapter || chapter.chapter_id === this.currentChapter) {
      this.chapterBar.setActive(chapter?.chapter_id ?? null);
      return;
    }
    this.currentChapter = chapter.chapter_id;
    this.chapterBar.setActive(chapter.chapter_id);
    const doc = await this.api.getGraph(this.videoId, chapter.chapter_id);
    this.scores = new Map(
      doc.nodes
        .filter((n) => n.my_score !== undefined && n.my_score !== null)
        .map((n) => [n.id, n.my_score as number]),
    );
    this.graph.render(doc);
  }

  get activeChapter(): string | null {
    return this.currentChapter;
  }

  private showKnowledge(node: NodeDoc): void {
    this.knowledge.show(node, this.scores.get(node.id) ?? null);
  }

  private async submitScore(node: NodeDoc, score: number): Promise<void> {
    await this.api.postFeedback(this.videoId, {
      markings: [{ concept_id: node.id, score }],
    });
    this.scores.set(node.id, score);
    this.graph.setScore(node.id, score);
  }

  private async postComment(second: number, body: string): Promise<void> {
    await this.api.postFeedback(this.videoId, {
      comments: [{ video_second: second, body }],
    });
    await this.refreshComments();
  }

  private async deleteComment(commentId: string): Promise<void> {
    await this.api.deleteComment(this.videoId, commentId);
    await this.refreshComments();
  }

  private async refreshComments(): Promise<void> {
    const comments = await this.api.getComments(this.videoId);
    this.comments.render(comments);
  }
}
