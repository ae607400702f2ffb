// Wire types mirroring the API's JSON payloads.

export type NodeKind = "course" | "association" | "prerequisite";

export interface QuizDoc {
  question: string;
  answer: string;
  explanation: string;
}

export interface NodeDoc {
  id: string;
  name: string;
  kind: NodeKind;
  definition: string;
  quiz: QuizDoc | null;
  chapters: string[];
  /** present on student-scoped graph responses; latest own score or null */
  my_score?: number | null;
}

export interface LayoutCell {
  q: number;
  r: number;
  x: number;
  y: number;
  layer: number | null;
}

export interface GraphDoc {
  nodes: NodeDoc[];
  edges: [string, string][];
  layout: Record<string, LayoutCell>;
  hex_side?: number;
}

export interface ChapterDoc {
  chapter_id: string;
  title: string;
  start: number;
  end: number;
}

export interface VideoRecord {
  video_id: string;
  title: string;
  duration: number;
  chapters: ChapterDoc[];
  state: "uploaded" | "processing" | "ready" | "failed";
  fail_reason: string | null;
}

export interface TimelineDoc {
  plays: number[];
  pauses: number[];
  avg_speed: number[];
  cumulative_comments: number[];
}

export interface ConceptAggregateDoc {
  concept_id: string;
  mean_score: number;
  marker_count: number;
  intensity: number;
  alpha: number;
}

export interface CommentDoc {
  comment_id: string;
  pseudonym: string;
  video_id: string;
  video_second: number;
  wall_time: string;
  chapter_id: string | null;
  chapter_title: string;
  body: string;
  deleted: boolean;
}

export type CommentSort = "submit_time" | "video_timestamp" | "student_id";

export interface CommentIndexDoc {
  comments: Record<string, CommentDoc>;
  order: Record<CommentSort, string[]>;
  total: number;
  deleted: number;
}

export interface DowngradeDoc {
  pseudonym: string;
  concept_id: string;
  wall_time: string;
  previous_score: number;
  score: number;
  gap_seconds: number;
}

export interface RangeDoc {
  from: number;
  to: number;
  comments: CommentDoc[];
  chapter_ids: string[];
}

export interface DashboardDoc {
  video: VideoRecord;
  timeline: TimelineDoc;
  concepts: ConceptAggregateDoc[];
  comment_index: CommentIndexDoc;
  downgrades: DowngradeDoc[];
  range: RangeDoc | null;
}

export type PlayerEventKind = "play" | "pause" | "rate";

export interface PlayerEventRecord {
  kind: PlayerEventKind;
  video_second: number;
  wall_time: string;
  rate?: number;
}

export interface FeedbackBatch {
  events?: PlayerEventRecord[];
  comments?: { video_second: number; body: string; wall_time?: string }[];
  markings?: { concept_id: string; score: number; wall_time?: string }[];
}

export interface SessionDoc {
  token: string;
  pseudonym: string;
  role: "student" | "instructor";
  expiry: string;
}
