import type {
  CommentDoc,
  CommentSort,
  DashboardDoc,
  FeedbackBatch,
  GraphDoc,
  SessionDoc,
  VideoRecord,
} from "./types.js";

/** Everything the views need from the backend; test doubles implement this. */
export interface Api {
  getVideo(videoId: string): Promise<VideoRecord>;
  getGraph(videoId: string, chapterId?: string): Promise<GraphDoc>;
  postFeedback(videoId: string, batch: FeedbackBatch): Promise<void>;
  getComments(
    videoId: string,
    sort?: CommentSort,
    range?: [number, number],
  ): Promise<CommentDoc[]>;
  deleteComment(videoId: string, commentId: string): Promise<void>;
  getDashboard(videoId: string, range?: [number, number]): Promise<DashboardDoc>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorName: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient implements Api {
  private token: string | null = null;

  constructor(private readonly baseUrl: string = "") {}

  async openSession(pseudonym: string, role: "student" | "instructor"): Promise<SessionDoc> {
    const session = await this.request<SessionDoc>("POST", "/auth/session", {
      body: { pseudonym, role },
    });
    this.token = session.token;
    return session;
  }

  getVideo(videoId: string): Promise<VideoRecord> {
    return this.request("GET", `/videos/${videoId}`);
  }

  getGraph(videoId: string, chapterId?: string): Promise<GraphDoc> {
    const query = chapterId
      ? `?scope=chapter&chapter=${encodeURIComponent(chapterId)}`
      : "?scope=global";
    return this.request("GET", `/videos/${videoId}/graph${query}`);
  }

  async postFeedback(videoId: string, batch: FeedbackBatch): Promise<void> {
    await this.request("POST", `/videos/${videoId}/feedback`, { body: batch });
  }

  async getComments(
    videoId: string,
    sort: CommentSort = "submit_time",
    range?: [number, number],
  ): Promise<CommentDoc[]> {
    const params = new URLSearchParams({ sort });
    if (range) {
      params.set("from", String(range[0]));
      params.set("to", String(range[1]));
    }
    const reply = await this.request<{ comments: CommentDoc[] }>(
      "GET",
      `/videos/${videoId}/comments?${params}`,
    );
    return reply.comments;
  }

  async deleteComment(videoId: string, commentId: string): Promise<void> {
    await this.request("DELETE", `/videos/${videoId}/comments/${commentId}`);
  }

  getDashboard(videoId: string, range?: [number, number]): Promise<DashboardDoc> {
    const query = range ? `?from=${range[0]}&to=${range[1]}` : "";
    return this.request("GET", `/videos/${videoId}/dashboard${query}`);
  }

  private async request<T>(
    method: string,
    path: string,
    options: { body?: unknown } = {},
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (options.body !== undefined) headers["Content-Type"] = "application/json";
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: options.body === undefined ? undefined : JSON.stringify(options.body),
    });
    if (!response.ok) {
      let name = "HttpError";
      let message = response.statusText;
      try {
        const detail = (await response.json()) as { error?: string; message?: string };
        name = detail.error ?? name;
        message = detail.message ?? message;
      } catch {
        // non-JSON error body
      }
      throw new ApiError(response.status, name, message);
    }
    return (await response.json()) as T;
  }
}
