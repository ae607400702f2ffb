import type { CommentDoc, CommentSort } from "./types.js";

export interface CommentPanelOptions {
  /** student mode shows the composer and delete buttons */
  mode: "student" | "instructor";
  onPost?: (videoSecond: number, body: string) => void;
  onDelete?: (commentId: string) => void;
  onSortChange?: (sort: CommentSort) => void;
}

const SORT_LABELS: Record<CommentSort, string> = {
  submit_time: "Submission time",
  video_timestamp: "Video timestamp",
  student_id: "Student",
};

function formatTimestamp(second: number): string {
  const minutes = Math.floor(second / 60);
  const secs = second % 60;
  return `${String(minutes).padStart(2, "0")}:${String(secs).padStart(2, "0")}`;
}

/** Comment list with the three instructor sorts, or the student's own
 * composer + list. Rendering is a pure function of the comments passed in. */
export class CommentPanel {
  private currentSecond = 0;

  constructor(
    private readonly container: HTMLElement,
    private readonly options: CommentPanelOptions,
  ) {}

  /** Playhead position used for new comments' video timestamps. */
  setCurrentSecond(second: number): void {
    this.currentSecond = second;
  }

  render(comments: CommentDoc[], sort: CommentSort = "submit_time"): void {
    this.container.replaceChildren();
    this.container.classList.add("comment-panel");

    if (this.options.mode === "instructor") {
      const select = document.createElement("select");
      select.className = "comment-sort";
      for (const [value, label] of Object.entries(SORT_LABELS)) {
        const option = document.createElement("option");
        option.value = value;
        option.textContent = label;
        option.selected = value === sort;
        select.appendChild(option);
      }
      select.addEventListener("change", () =>
        this.options.onSortChange?.(select.value as CommentSort),
      );
      this.container.appendChild(select);
    }

    const list = document.createElement("ul");
    list.className = "comment-list";
    for (const comment of comments) {
      const item = document.createElement("li");
      item.className = "comment";
      item.dataset.commentId = comment.comment_id;
      if (comment.deleted) item.classList.add("deleted");

      const meta = document.createElement("span");
      meta.className = "comment-meta";
      meta.textContent = `${formatTimestamp(comment.video_second)} · ${comment.chapter_title}`;
      const body = document.createElement("span");
      body.className = "comment-body";
      body.textContent = comment.body;
      item.append(meta, body);

      if (this.options.mode === "instructor") {
        const who = document.createElement("span");
        who.className = "comment-author";
        who.textContent = comment.pseudonym;
        item.prepend(who);
      } else {
        const remove = document.createElement("button");
        remove.className = "comment-delete";
        remove.textContent = "delete";
        remove.addEventListener("click", () => this.options.onDelete?.(comment.comment_id));
        item.appendChild(remove);
      }
      list.appendChild(item);
    }
    this.container.appendChild(list);

    if (this.options.mode === "student") {
      const composer = document.createElement("form");
      composer.className = "comment-composer";
      const input = document.createElement("input");
      input.type = "text";
      input.placeholder = "Ask a question or leave a note";
      const submit = document.createElement("button");
      submit.type = "submit";
      submit.textContent = "Post";
      composer.append(input, submit);
      composer.addEventListener("submit", (event) => {
        event.preventDefault();
        if (input.value.trim().length > 0) {
          this.options.onPost?.(this.currentSecond, input.value.trim());
          input.value = "";
        }
      });
      this.container.appendChild(composer);
    }
  }

  /** Range-selection focus: render exactly the in-range list from the API. */
  focus(comments: CommentDoc[]): void {
    this.render(comments, "video_timestamp");
    this.container.classList.add("focused");
  }
}
