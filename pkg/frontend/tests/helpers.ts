import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { Api } from "../src/api.js";
import type {
  CommentDoc,
  DashboardDoc,
  FeedbackBatch,
  GraphDoc,
  VideoRecord,
} from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

/** Serves the recorded API responses and records every mutation call. */
export class FakeApi implements Api {
  video = loadFixture<VideoRecord>("video.json");
  graphGlobal = loadFixture<GraphDoc>("graph_global.json");
  graphStudentCh3 = loadFixture<GraphDoc>("graph_student_ch3.json");
  dashboard = loadFixture<DashboardDoc>("dashboard.json");
  dashboardRange = loadFixture<DashboardDoc>("dashboard_range.json");
  studentComments = loadFixture<{ comments: CommentDoc[] }>("comments_student.json");

  calls: { method: string; args: unknown[] }[] = [];
  failNextPost = false;

  async getVideo(): Promise<VideoRecord> {
    return this.video;
  }

  async getGraph(_videoId: string, chapterId?: string): Promise<GraphDoc> {
    this.calls.push({ method: "getGraph", args: [chapterId] });
    return chapterId ? this.graphStudentCh3 : this.graphGlobal;
  }

  async postFeedback(videoId: string, batch: FeedbackBatch): Promise<void> {
    if (this.failNextPost) {
      this.failNextPost = false;
      throw new Error("simulated network failure");
    }
    this.calls.push({ method: "postFeedback", args: [videoId, batch] });
  }

  async getComments(): Promise<CommentDoc[]> {
    this.calls.push({ method: "getComments", args: [] });
    return this.studentComments.comments;
  }

  async deleteComment(videoId: string, commentId: string): Promise<void> {
    this.calls.push({ method: "deleteComment", args: [videoId, commentId] });
  }

  async getDashboard(_videoId: string, range?: [number, number]): Promise<DashboardDoc> {
    this.calls.push({ method: "getDashboard", args: [range] });
    return range ? this.dashboardRange : this.dashboard;
  }

  postedBatches(): FeedbackBatch[] {
    return this.calls
      .filter((c) => c.method === "postFeedback")
      .map((c) => c.args[1] as FeedbackBatch);
  }
}

export function container(): HTMLElement {
  const element = document.createElement("div");
  document.body.appendChild(element);
  return element;
}
