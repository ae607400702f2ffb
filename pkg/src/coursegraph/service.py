"""HTTP service exposing upload/processing, graph retrieval, feedback
ingestion and instructor aggregates.

Sessions are opaque bearer tokens bound to a pseudonym and a role; every
endpoint declares its allowed roles in ROLE_MATRIX, which the test suite
enumerates exhaustively. Uploads trigger the processing pipeline on a bounded
worker pool (one job per video); feedback writes funnel through the store's
single-writer lock.
"""

from __future__ import annotations

import json
import logging
import math
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from fastapi import FastAPI, File, Form, Query, Request, UploadFile
from fastapi.responses import JSONResponse

from . import errors
from .adapters import AdapterSet
from .chapters import chapters_from_dicts, chapters_to_dicts
from .errors import (
    BadChapters,
    BadStream,
    CourseGraphError,
    Forbidden,
    NotReady,
    UnknownChapter,
    UnknownVideo,
)
from .feedback import FeedbackStore, VideoInfo
from .framestream import load_frame_stream
from .graph import chapter_scope_dict
from .pipeline import EngineConfig, run_pipeline

logger = logging.getLogger(__name__)

STUDENT = "student"
INSTRUCTOR = "instructor"
PUBLIC = "public"

#: Allowed roles per endpoint; the contract the acceptance suite checks.
ROLE_MATRIX: dict[tuple[str, str], frozenset[str]] = {
    ("POST", "/auth/session"): frozenset({PUBLIC}),
    ("POST", "/videos"): frozenset({INSTRUCTOR}),
    ("GET", "/videos/{video_id}"): frozenset({STUDENT, INSTRUCTOR}),
    ("GET", "/videos/{video_id}/graph"): frozenset({STUDENT, INSTRUCTOR}),
    ("POST", "/videos/{video_id}/feedback"): frozenset({STUDENT}),
    ("GET", "/videos/{video_id}/comments"): frozenset({STUDENT, INSTRUCTOR}),
    ("DELETE", "/videos/{video_id}/comments/{comment_id}"): frozenset({STUDENT}),
    ("GET", "/videos/{video_id}/dashboard"): frozenset({INSTRUCTOR}),
}

_STATUS_BY_ERROR: list[tuple[type[Exception], int]] = [
    (Forbidden, 403),
    (errors.NotOwner, 403),
    (errors.UnknownVideo, 404),
    (errors.UnknownChapter, 404),
    (errors.UnknownComment, 404),
    (errors.UnknownConcept, 404),
    (NotReady, 409),
    (CourseGraphError, 422),
    (ValueError, 422),
    (KeyError, 422),
]


@dataclass
class ServiceConfig:
    adapters: AdapterSet
    store_path: str = ":memory:"
    workers: int = 2  # 0 = process uploads synchronously in the request
    engine: EngineConfig = field(default_factory=EngineConfig)
    session_ttl: timedelta = timedelta(hours=12)


@dataclass
class Session:
    token: str
    pseudonym: str
    role: str
    expiry: datetime


def video_record_dict(video: VideoInfo) -> dict:
    return {
        "video_id": video.video_id,
        "title": video.title,
        "duration": video.duration,
        "chapters": chapters_to_dicts(video.chapters),
        "state": video.state,
        "fail_reason": video.fail_reason,
    }


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="coursegraph", version="0.1.0")
    store = FeedbackStore(config.store_path)
    executor = (
        ThreadPoolExecutor(max_workers=config.workers) if config.workers > 0 else None
    )
    sessions: dict[str, Session] = {}
    sessions_lock = threading.Lock()

    app.state.store = store
    app.state.config = config
    app.state.sessions = sessions

    async def handle_engine_error(request: Request, exc: Exception):
        for exc_type, status in _STATUS_BY_ERROR:
            if isinstance(exc, exc_type):
                return JSONResponse(
                    status_code=status,
                    content={"error": type(exc).__name__, "message": str(exc)},
                )
        raise exc

    for registered in (CourseGraphError, ValueError, KeyError):
        app.add_exception_handler(registered, handle_engine_error)

    def authorize(request: Request, method: str, path: str) -> Session | None:
        allowed = ROLE_MATRIX[(method, path)]
        if PUBLIC in allowed:
            return None
        header = request.headers.get("authorization", "")
        token = header.removeprefix("Bearer ").strip()
        with sessions_lock:
            session = sessions.get(token)
            if session is not None and session.expiry < datetime.now(timezone.utc):
                del sessions[token]
                session = None
        if session is None:
            raise Forbidden("missing or expired session token")
        if session.role not in allowed:
            raise Forbidden(f"endpoint requires role in {sorted(allowed)}")
        return session

    # -- processing pipeline ------------------------------------------------

    def process_video(video_id: str) -> None:
        store.set_state(video_id, "processing")
        try:
            blob = store.load_artifact(video_id, "stream")
            video = store.video(video_id)
            seq = load_frame_stream(blob, video_id=video_id)
            result = run_pipeline(seq, video.chapters, config.adapters, config.engine)
            store.save_artifact(video_id, "graph", result.graph_json)
            store.save_artifact(
                video_id,
                "keyframes",
                json.dumps(result.keyframe_manifest(), sort_keys=True).encode(),
            )
            store.register_concepts(video_id, sorted(result.graph.nodes))
            store.set_state(video_id, "ready")
        except Exception as exc:  # any pipeline failure must land in the record
            logger.exception("pipeline failed for %s", video_id)
            store.set_state(video_id, "failed", fail_reason=str(exc))

    def load_ready_graph(video_id: str) -> dict:
        video = store.video(video_id)
        if video.state != "ready":
            raise NotReady(f"video {video_id!r} is in state {video.state!r}")
        blob = store.load_artifact(video_id, "graph")
        if blob is None:
            raise NotReady(f"video {video_id!r} has no graph artifact")
        return json.loads(blob.decode("utf-8"))

    # -- routes ---------------------------------------------------------------

    @app.post("/auth/session")
    async def open_session(request: Request):
        body = await request.json()
        pseudonym = str(body.get("pseudonym", "")).strip()
        role = str(body.get("role", "")).strip().lower()
        if not pseudonym:
            raise ValueError("pseudonym must be non-empty")
        if role not in (STUDENT, INSTRUCTOR):
            raise ValueError(f"role must be {STUDENT!r} or {INSTRUCTOR!r}")
        session = Session(
            token=uuid.uuid4().hex,
            pseudonym=pseudonym,
            role=role,
            expiry=datetime.now(timezone.utc) + config.session_ttl,
        )
        with sessions_lock:
            sessions[session.token] = session
        return {
            "token": session.token,
            "pseudonym": session.pseudonym,
            "role": session.role,
            "expiry": session.expiry.isoformat(),
        }

    @app.post("/videos", status_code=201)
    async def upload_video(
        request: Request,
        stream: UploadFile = File(...),
        chapters: str = Form("[]"),
        title: str = Form("untitled"),
    ):
        authorize(request, "POST", "/videos")
        try:
            chapter_list = chapters_from_dicts(json.loads(chapters))
        except json.JSONDecodeError as exc:
            raise BadChapters(f"chapters is not valid JSON: {exc}") from exc

        blob = await stream.read()
        try:
            seq = load_frame_stream(blob)
        except CourseGraphError as exc:
            raise BadStream(str(exc)) from exc

        video_id = uuid.uuid4().hex[:12]
        duration = math.ceil(seq.duration_seconds)
        store.register_video(video_id, title, duration, chapter_list, state="uploaded")
        store.save_artifact(video_id, "stream", blob)
        if executor is None:
            process_video(video_id)
        else:
            executor.submit(process_video, video_id)
        return video_record_dict(store.video(video_id))

    @app.get("/videos/{video_id}")
    async def get_video(request: Request, video_id: str):
        authorize(request, "GET", "/videos/{video_id}")
        return video_record_dict(store.video(video_id))

    @app.get("/videos/{video_id}/graph")
    async def get_graph(
        request: Request, video_id: str, scope: str = "global", chapter: str | None = None
    ):
        session = authorize(request, "GET", "/videos/{video_id}/graph")
        doc = load_ready_graph(video_id)
        if scope == "chapter":
            if chapter is None:
                raise ValueError("scope=chapter requires a chapter parameter")
            known = {ch.chapter_id for ch in store.video(video_id).chapters}
            doc = chapter_scope_dict(doc, chapter, known_chapters=known)
        elif scope != "global":
            raise ValueError(f"scope must be 'global' or 'chapter', got {scope!r}")
        if session is not None and session.role == STUDENT:
            scores = store.student_scores(session.pseudonym, video_id)
            for node in doc["nodes"]:
                node["my_score"] = scores.get(node["id"])
        return doc

    @app.post("/videos/{video_id}/feedback")
    async def post_feedback(request: Request, video_id: str):
        session = authorize(request, "POST", "/videos/{video_id}/feedback")
        store.video(video_id)
        batch = await request.json()
        stored = store.apply_feedback_batch(video_id, session.pseudonym, batch)
        return {"stored": stored}

    @app.get("/videos/{video_id}/comments")
    async def get_comments(
        request: Request,
        video_id: str,
        sort: str = "submit_time",
        s_from: int | None = Query(None, alias="from"),
        s_to: int | None = Query(None, alias="to"),
    ):
        session = authorize(request, "GET", "/videos/{video_id}/comments")
        if session.role == STUDENT:
            own = store.list_own_comments(session.pseudonym, video_id)
            return {"comments": [c.to_dict() for c in own]}
        time_range = _parse_range(s_from, s_to, store.video(video_id).duration)
        listed = store.list_comments(video_id, sort=sort, time_range=time_range)
        return {"comments": [c.to_dict() for c in listed]}

    @app.delete("/videos/{video_id}/comments/{comment_id}")
    async def delete_comment(request: Request, video_id: str, comment_id: str):
        session = authorize(request, "DELETE", "/videos/{video_id}/comments/{comment_id}")
        store.video(video_id)
        store.delete_comment(session.pseudonym, comment_id)
        return {"deleted": comment_id}

    @app.get("/videos/{video_id}/dashboard")
    async def dashboard(
        request: Request,
        video_id: str,
        s_from: int | None = Query(None, alias="from"),
        s_to: int | None = Query(None, alias="to"),
    ):
        authorize(request, "GET", "/videos/{video_id}/dashboard")
        video = store.video(video_id)
        timeline = store.aggregate_timeline(video_id)
        concepts = store.aggregate_concept_scores(video_id)
        payload = {
            "video": video_record_dict(video),
            "timeline": timeline.to_dict(),
            "concepts": [c.to_dict() for c in concepts],
            "comment_index": store.comment_index(video_id),
            "downgrades": [
                {
                    "pseudonym": d.pseudonym,
                    "concept_id": d.concept_id,
                    "wall_time": d.wall_time.isoformat(),
                    "previous_score": d.previous_score,
                    "score": d.score,
                    "gap_seconds": d.gap_seconds,
                }
                for d in store.long_interval_downgrades(video_id)
            ],
            "range": None,
        }
        time_range = _parse_range(s_from, s_to, video.duration)
        if time_range is not None:
            s1, s2 = time_range
            in_range = store.list_comments(video_id, "video_timestamp", time_range)
            chapter_ids = [
                ch.chapter_id
                for ch in video.chapters
                if ch.start <= s2 and ch.end > s1
            ]
            payload["range"] = {
                "from": s1,
                "to": s2,
                "comments": [c.to_dict() for c in in_range],
                "chapter_ids": chapter_ids,
            }
        return payload

    return app


def _parse_range(
    s_from: int | None, s_to: int | None, duration: int
) -> tuple[int, int] | None:
    if s_from is None and s_to is None:
        return None
    s1 = 0 if s_from is None else int(s_from)
    s2 = duration if s_to is None else int(s_to)
    return (s1, s2)
