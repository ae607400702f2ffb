// Browser entry point: wires the student or instructor view to the API.

import { ApiClient } from "./api.js";
import { InstructorView } from "./instructorView.js";
import { StudentView } from "./studentView.js";

export { ApiClient } from "./api.js";
export { GraphView } from "./graphView.js";
export { VideoDataView } from "./charts.js";
export { KnowledgeView } from "./knowledgeView.js";
export { CommentPanel } from "./commentPanel.js";
export { EventQueue } from "./eventQueue.js";
export { StudentView } from "./studentView.js";
export { InstructorView } from "./instructorView.js";

function requireElement(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing #${id}`);
  return element;
}

export async function boot(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const videoId = params.get("video");
  const role = params.get("role") === "instructor" ? "instructor" : "student";
  const pseudonym = params.get("pseudonym") ?? `anon-${Math.random().toString(36).slice(2, 8)}`;
  if (!videoId) {
    requireElement("app").textContent = "Add ?video=<id>&role=student|instructor to the URL.";
    return;
  }

  const api = new ApiClient(params.get("api") ?? "");
  await api.openSession(pseudonym, role);

  if (role === "instructor") {
    const view = new InstructorView(api, videoId, {
      chapterBar: requireElement("chapter-bar"),
      charts: requireElement("charts"),
      tooltip: requireElement("tooltip"),
      network: requireElement("network"),
      comments: requireElement("comments"),
    });
    await view.start();
  } else {
    const video = document.getElementById("player") as HTMLVideoElement;
    const media = params.get("media");
    if (media) video.src = media;
    const view = new StudentView(api, videoId, {
      video,
      chapterBar: requireElement("chapter-bar"),
      network: requireElement("network"),
      knowledge: requireElement("knowledge"),
      comments: requireElement("comments"),
    });
    await view.start();
    video.addEventListener("timeupdate", () => {
      void view.enterChapterAt(Math.floor(video.currentTime));
    });
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot();
}
