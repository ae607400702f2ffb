"""Three-channel feedback store and instructor aggregates.

Channels: player clickstream (play / pause / rate-change per second), text
comments (soft-deletable, chapter-tagged), and 0-3 concept markings with a
full revision log. Everything lives in one embedded SQLite database; events
are append-only, aggregates are recomputed on demand, writes are serialized
through a single lock so replaying a log always yields identical aggregates.

Score semantics: 3 = never heard of / unfamiliar, 0 = completely mastered.
"""

from __future__ import annotations

import itertools
import json
import sqlite3
import threading
import uuid
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .chapters import ChapterAnnotation, chapter_for_time, chapters_from_dicts, chapters_to_dicts
from .errors import (
    BadLogLine,
    BadRange,
    BadRate,
    BadScore,
    EmptyBody,
    NotOwner,
    OutOfRangeSecond,
    UnknownComment,
    UnknownConcept,
    UnknownVideo,
)

ALLOWED_RATES = (0.5, 0.75, 1.0, 1.25, 1.5, 2.0)
ALLOWED_SCORES = (0, 1, 2, 3)
EVENT_KINDS = ("play", "pause", "rate")

# Inter-revision gap, in seconds, beyond which a score decrease counts as a
# long-interval downgrade in the marking analysis.
DOWNGRADE_GAP_SECONDS = 10.0

COMMENT_SORTS = ("submit_time", "video_timestamp", "student_id")


def parse_rfc3339(value: str) -> datetime:
    dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_rfc3339(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).isoformat()


def _now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class FeedbackEvent:
    pseudonym: str
    video_id: str
    video_second: int
    wall_time: datetime
    kind: str  # play | pause | rate
    rate: float | None = None


@dataclass
class Comment:
    comment_id: str
    pseudonym: str
    video_id: str
    video_second: int
    wall_time: datetime
    chapter_id: str | None
    chapter_title: str
    body: str
    deleted: bool = False

    def to_dict(self) -> dict:
        return {
            "comment_id": self.comment_id,
            "pseudonym": self.pseudonym,
            "video_id": self.video_id,
            "video_second": self.video_second,
            "wall_time": format_rfc3339(self.wall_time),
            "chapter_id": self.chapter_id,
            "chapter_title": self.chapter_title,
            "body": self.body,
            "deleted": self.deleted,
        }


@dataclass
class Marking:
    pseudonym: str
    concept_id: str
    revisions: list[tuple[datetime, int]]

    @property
    def effective_score(self) -> int:
        return self.revisions[-1][1]


@dataclass
class TimelineAggregate:
    """Per-second rollups over all students; arrays span seconds 0..duration."""

    plays: list[int]
    pauses: list[int]
    avg_speed: list[float]
    cumulative_comments: list[int]

    def to_dict(self) -> dict:
        return {
            "plays": self.plays,
            "pauses": self.pauses,
            "avg_speed": self.avg_speed,
            "cumulative_comments": self.cumulative_comments,
        }


@dataclass(frozen=True)
class ConceptAggregate:
    concept_id: str
    mean_score: float
    marker_count: int
    intensity: float  # mean_score / 3
    alpha: float  # 0.25 + 0.75 * marker_count / max_marker_count; 0 when unmarked

    def to_dict(self) -> dict:
        return {
            "concept_id": self.concept_id,
            "mean_score": self.mean_score,
            "marker_count": self.marker_count,
            "intensity": self.intensity,
            "alpha": self.alpha,
        }


@dataclass(frozen=True)
class Downgrade:
    pseudonym: str
    concept_id: str
    wall_time: datetime
    previous_score: int
    score: int
    gap_seconds: float


@dataclass
class VideoInfo:
    video_id: str
    title: str
    duration: int
    chapters: list[ChapterAnnotation]
    state: str = "uploaded"
    fail_reason: str | None = None


_SCHEMA = """
CREATE TABLE IF NOT EXISTS videos(
    video_id TEXT PRIMARY KEY,
    title TEXT NOT NULL,
    duration INTEGER NOT NULL,
    chapters TEXT NOT NULL,
    state TEXT NOT NULL DEFAULT 'uploaded',
    fail_reason TEXT
);
CREATE TABLE IF NOT EXISTS concepts(
    video_id TEXT NOT NULL,
    concept_id TEXT NOT NULL,
    PRIMARY KEY(video_id, concept_id)
);
CREATE TABLE IF NOT EXISTS events(
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    video_id TEXT NOT NULL,
    pseudonym TEXT NOT NULL,
    kind TEXT NOT NULL,
    video_second INTEGER NOT NULL,
    wall_time TEXT NOT NULL,
    rate REAL,
    UNIQUE(video_id, pseudonym, kind, video_second, wall_time)
);
CREATE TABLE IF NOT EXISTS comments(
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    comment_id TEXT UNIQUE NOT NULL,
    video_id TEXT NOT NULL,
    pseudonym TEXT NOT NULL,
    video_second INTEGER NOT NULL,
    wall_time TEXT NOT NULL,
    chapter_id TEXT,
    chapter_title TEXT NOT NULL,
    body TEXT NOT NULL,
    deleted INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS markings(
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    video_id TEXT NOT NULL,
    pseudonym TEXT NOT NULL,
    concept_id TEXT NOT NULL,
    wall_time TEXT NOT NULL,
    score INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS artifacts(
    video_id TEXT NOT NULL,
    name TEXT NOT NULL,
    data BLOB NOT NULL,
    PRIMARY KEY(video_id, name)
);
"""


class FeedbackStore:
    """Embedded store for the three feedback channels plus the video catalog.

    Thread-safe: one connection, writes serialized by a re-entrant lock
    (the single-writer queue); WAL journaling for on-disk stores.
    """

    def __init__(self, path: str | Path = ":memory:"):
        # autocommit mode: transactions are issued explicitly by _write so
        # batches can nest single-record operations without mid-batch commits
        self._conn = sqlite3.connect(str(path), check_same_thread=False, isolation_level=None)
        self._conn.row_factory = sqlite3.Row
        self._lock = threading.RLock()
        with self._lock:
            if str(path) != ":memory:":
                self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.executescript(_SCHEMA)

    def close(self) -> None:
        self._conn.close()

    @contextmanager
    def _write(self):
        """Serialized write transaction; joins an enclosing one if present."""
        with self._lock:
            opened = not self._conn.in_transaction
            if opened:
                self._conn.execute("BEGIN")
            try:
                yield self._conn
            except BaseException:
                if opened:
                    self._conn.execute("ROLLBACK")
                raise
            else:
                if opened:
                    self._conn.execute("COMMIT")

    # -- video catalog ---------------------------------------------------

    def register_video(
        self,
        video_id: str,
        title: str,
        duration: int,
        chapters: list[ChapterAnnotation],
        state: str = "uploaded",
    ) -> VideoInfo:
        with self._write():
            self._conn.execute(
                "INSERT OR REPLACE INTO videos(video_id, title, duration, chapters, state)"
                " VALUES (?, ?, ?, ?, ?)",
                (video_id, title, int(duration), json.dumps(chapters_to_dicts(chapters)), state),
            )
        return self.video(video_id)

    def video(self, video_id: str) -> VideoInfo:
        with self._lock:
            row = self._conn.execute(
                "SELECT * FROM videos WHERE video_id = ?", (video_id,)
            ).fetchone()
        if row is None:
            raise UnknownVideo(f"unknown video {video_id!r}")
        return VideoInfo(
            video_id=row["video_id"],
            title=row["title"],
            duration=row["duration"],
            chapters=chapters_from_dicts(json.loads(row["chapters"])),
            state=row["state"],
            fail_reason=row["fail_reason"],
        )

    def set_state(self, video_id: str, state: str, fail_reason: str | None = None) -> None:
        with self._write():
            updated = self._conn.execute(
                "UPDATE videos SET state = ?, fail_reason = ? WHERE video_id = ?",
                (state, fail_reason, video_id),
            ).rowcount
        if updated == 0:
            raise UnknownVideo(f"unknown video {video_id!r}")

    def register_concepts(self, video_id: str, concept_ids: list[str]) -> None:
        self.video(video_id)
        with self._write():
            self._conn.executemany(
                "INSERT OR IGNORE INTO concepts(video_id, concept_id) VALUES (?, ?)",
                [(video_id, cid) for cid in concept_ids],
            )

    def concept_ids(self, video_id: str) -> list[str]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT concept_id FROM concepts WHERE video_id = ? ORDER BY concept_id",
                (video_id,),
            ).fetchall()
        return [r["concept_id"] for r in rows]

    def save_artifact(self, video_id: str, name: str, data: bytes) -> None:
        with self._write():
            self._conn.execute(
                "INSERT OR REPLACE INTO artifacts(video_id, name, data) VALUES (?, ?, ?)",
                (video_id, name, data),
            )

    def load_artifact(self, video_id: str, name: str) -> bytes | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT data FROM artifacts WHERE video_id = ? AND name = ?",
                (video_id, name),
            ).fetchone()
        return None if row is None else bytes(row["data"])

    # -- channel 1: clickstream -------------------------------------------

    def record_event(self, event: FeedbackEvent) -> None:
        """Append one event; duplicates (same pseudonym, kind, second and
        wall time) are deduplicated idempotently."""
        video = self.video(event.video_id)
        if not 0 <= event.video_second <= video.duration:
            raise OutOfRangeSecond(
                f"second {event.video_second} outside 0..{video.duration}"
            )
        if event.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {event.kind!r}")
        rate = None
        if event.kind == "rate":
            if event.rate not in ALLOWED_RATES:
                raise BadRate(f"rate {event.rate!r} not one of {ALLOWED_RATES}")
            rate = float(event.rate)
        with self._write():
            self._conn.execute(
                "INSERT OR IGNORE INTO events"
                "(video_id, pseudonym, kind, video_second, wall_time, rate)"
                " VALUES (?, ?, ?, ?, ?, ?)",
                (
                    event.video_id,
                    event.pseudonym,
                    event.kind,
                    int(event.video_second),
                    format_rfc3339(event.wall_time),
                    rate,
                ),
            )

    def event_counts(self, video_id: str) -> dict[str, int]:
        self.video(video_id)
        with self._lock:
            rows = self._conn.execute(
                "SELECT kind, COUNT(*) AS n FROM events WHERE video_id = ? GROUP BY kind",
                (video_id,),
            ).fetchall()
        counts = {kind: 0 for kind in EVENT_KINDS}
        counts.update({r["kind"]: r["n"] for r in rows})
        return counts

    # -- channel 2: comments ------------------------------------------------

    def post_comment(
        self,
        pseudonym: str,
        video_id: str,
        video_second: int,
        body: str,
        wall_time: datetime | None = None,
        comment_id: str | None = None,
    ) -> Comment:
        if not body:
            raise EmptyBody("comment body must be non-empty")
        video = self.video(video_id)
        if not 0 <= video_second <= video.duration:
            raise OutOfRangeSecond(f"second {video_second} outside 0..{video.duration}")
        chapter = chapter_for_time(video.chapters, float(video_second))
        comment = Comment(
            comment_id=comment_id or uuid.uuid4().hex,
            pseudonym=pseudonym,
            video_id=video_id,
            video_second=int(video_second),
            wall_time=wall_time or _now(),
            chapter_id=chapter.chapter_id if chapter else None,
            chapter_title=chapter.title if chapter else "",
            body=body,
        )
        with self._write():
            self._conn.execute(
                "INSERT INTO comments(comment_id, video_id, pseudonym, video_second,"
                " wall_time, chapter_id, chapter_title, body, deleted)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, 0)",
                (
                    comment.comment_id,
                    comment.video_id,
                    comment.pseudonym,
                    comment.video_second,
                    format_rfc3339(comment.wall_time),
                    comment.chapter_id,
                    comment.chapter_title,
                    comment.body,
                ),
            )
        return comment

    def delete_comment(self, pseudonym: str, comment_id: str) -> None:
        """Soft delete; repeating the call is a no-op acknowledgement."""
        with self._write():
            row = self._conn.execute(
                "SELECT pseudonym FROM comments WHERE comment_id = ?", (comment_id,)
            ).fetchone()
            if row is None:
                raise UnknownComment(f"unknown comment {comment_id!r}")
            if row["pseudonym"] != pseudonym:
                raise NotOwner("comments can only be deleted by their author")
            self._conn.execute(
                "UPDATE comments SET deleted = 1 WHERE comment_id = ?", (comment_id,)
            )

    def _comment_rows(self, video_id: str) -> list[sqlite3.Row]:
        with self._lock:
            return self._conn.execute(
                "SELECT * FROM comments WHERE video_id = ? ORDER BY wall_time, seq",
                (video_id,),
            ).fetchall()

    @staticmethod
    def _row_to_comment(row: sqlite3.Row) -> Comment:
        return Comment(
            comment_id=row["comment_id"],
            pseudonym=row["pseudonym"],
            video_id=row["video_id"],
            video_second=row["video_second"],
            wall_time=parse_rfc3339(row["wall_time"]),
            chapter_id=row["chapter_id"],
            chapter_title=row["chapter_title"],
            body=row["body"],
            deleted=bool(row["deleted"]),
        )

    def list_comments(
        self,
        video_id: str,
        sort: str = "video_timestamp",
        time_range: tuple[int, int] | None = None,
    ) -> list[Comment]:
        """Instructor-facing listing: stable sort by the chosen key with
        submit time as the secondary key; deleted comments stay visible with
        their flag exposed."""
        if sort not in COMMENT_SORTS:
            raise ValueError(f"sort must be one of {COMMENT_SORTS}, got {sort!r}")
        if time_range is not None and time_range[0] > time_range[1]:
            raise BadRange(f"range {time_range} has s1 > s2")
        self.video(video_id)
        comments = [self._row_to_comment(r) for r in self._comment_rows(video_id)]
        if time_range is not None:
            s1, s2 = time_range
            comments = [c for c in comments if s1 <= c.video_second <= s2]
        if sort == "video_timestamp":
            comments.sort(key=lambda c: c.video_second)
        elif sort == "student_id":
            comments.sort(key=lambda c: c.pseudonym)
        return comments

    def list_own_comments(self, pseudonym: str, video_id: str) -> list[Comment]:
        """Student-facing listing: own non-deleted comments, submit order."""
        self.video(video_id)
        return [
            c
            for r in self._comment_rows(video_id)
            if (c := self._row_to_comment(r)).pseudonym == pseudonym and not c.deleted
        ]

    # -- channel 3: markings -------------------------------------------------

    def set_marking(
        self,
        pseudonym: str,
        video_id: str,
        concept_id: str,
        score: int,
        wall_time: datetime | None = None,
    ) -> Marking:
        """Append a revision; the full history is retained for analysis."""
        if score not in ALLOWED_SCORES:
            raise BadScore(f"score must be one of {ALLOWED_SCORES}, got {score!r}")
        self.video(video_id)
        with self._write():
            known = self._conn.execute(
                "SELECT 1 FROM concepts WHERE video_id = ? AND concept_id = ?",
                (video_id, concept_id),
            ).fetchone()
            if known is None:
                raise UnknownConcept(f"unknown concept {concept_id!r} for video {video_id!r}")
            self._conn.execute(
                "INSERT INTO markings(video_id, pseudonym, concept_id, wall_time, score)"
                " VALUES (?, ?, ?, ?, ?)",
                (
                    video_id,
                    pseudonym,
                    concept_id,
                    format_rfc3339(wall_time or _now()),
                    int(score),
                ),
            )
        return self.marking(pseudonym, video_id, concept_id)

    def marking(self, pseudonym: str, video_id: str, concept_id: str) -> Marking | None:
        with self._lock:
            rows = self._conn.execute(
                "SELECT wall_time, score FROM markings"
                " WHERE video_id = ? AND pseudonym = ? AND concept_id = ?"
                " ORDER BY wall_time, seq",
                (video_id, pseudonym, concept_id),
            ).fetchall()
        if not rows:
            return None
        return Marking(
            pseudonym=pseudonym,
            concept_id=concept_id,
            revisions=[(parse_rfc3339(r["wall_time"]), r["score"]) for r in rows],
        )

    def student_scores(self, pseudonym: str, video_id: str) -> dict[str, int]:
        """Latest score per concept for one student (inlined into chapter
        graphs served to that student)."""
        self.video(video_id)
        with self._lock:
            rows = self._conn.execute(
                "SELECT concept_id, score FROM markings"
                " WHERE video_id = ? AND pseudonym = ? ORDER BY wall_time, seq",
                (video_id, pseudonym),
            ).fetchall()
        scores: dict[str, int] = {}
        for row in rows:
            scores[row["concept_id"]] = row["score"]
        return scores

    def long_interval_downgrades(
        self, video_id: str, min_gap_seconds: float = DOWNGRADE_GAP_SECONDS
    ) -> list[Downgrade]:
        """Revisions whose gap from the previous revision of the same
        (student, concept) exceeds the threshold and whose score decreased."""
        self.video(video_id)
        with self._lock:
            rows = self._conn.execute(
                "SELECT pseudonym, concept_id, wall_time, score FROM markings"
                " WHERE video_id = ? ORDER BY pseudonym, concept_id, wall_time, seq",
                (video_id,),
            ).fetchall()
        downgrades: list[Downgrade] = []
        for (pseudonym, concept_id), group in itertools.groupby(
            rows, key=lambda r: (r["pseudonym"], r["concept_id"])
        ):
            previous = None
            for row in group:
                current = (parse_rfc3339(row["wall_time"]), row["score"])
                if previous is not None:
                    gap = (current[0] - previous[0]).total_seconds()
                    if gap > min_gap_seconds and current[1] < previous[1]:
                        downgrades.append(
                            Downgrade(
                                pseudonym=pseudonym,
                                concept_id=concept_id,
                                wall_time=current[0],
                                previous_score=previous[1],
                                score=current[1],
                                gap_seconds=gap,
                            )
                        )
                previous = current
        return downgrades

    # -- aggregates -----------------------------------------------------------

    def aggregate_timeline(self, video_id: str) -> TimelineAggregate:
        """Per-second play/pause counts, mean playback rate over covering
        students, and the cumulative non-deleted comment count.

        A student covers second s when s lies inside a reconstructed watch
        interval (a Play opens it; the next Pause, or the student's last
        event, closes it inclusively). Rates step at each RateChange and
        start at 1.0; seconds covered by nobody report 1.0.
        """
        video = self.video(video_id)
        size = video.duration + 1
        plays = [0] * size
        pauses = [0] * size
        speed_sum = [0.0] * size
        speed_count = [0] * size

        with self._lock:
            rows = self._conn.execute(
                "SELECT pseudonym, kind, video_second, wall_time, rate FROM events"
                " WHERE video_id = ? ORDER BY pseudonym, video_second, wall_time, seq",
                (video_id,),
            ).fetchall()

        for _, group in itertools.groupby(rows, key=lambda r: r["pseudonym"]):
            events = list(group)
            covered = [False] * size
            rate_steps: list[tuple[int, float]] = []
            open_play: int | None = None
            last_second = 0
            for row in events:
                second = row["video_second"]
                last_second = second
                if row["kind"] == "play":
                    plays[second] += 1
                    if open_play is None:
                        open_play = second
                elif row["kind"] == "pause":
                    pauses[second] += 1
                    if open_play is not None:
                        for s in range(open_play, second + 1):
                            covered[s] = True
                        open_play = None
                elif row["kind"] == "rate":
                    rate_steps.append((second, row["rate"]))
            if open_play is not None:
                for s in range(open_play, last_second + 1):
                    covered[s] = True

            rate = 1.0
            step = 0
            for s in range(size):
                while step < len(rate_steps) and rate_steps[step][0] <= s:
                    rate = rate_steps[step][1]
                    step += 1
                if covered[s]:
                    speed_sum[s] += rate
                    speed_count[s] += 1

        avg_speed = [
            speed_sum[s] / speed_count[s] if speed_count[s] else 1.0 for s in range(size)
        ]

        per_second_comments = [0] * size
        for row in self._comment_rows(video_id):
            if not row["deleted"]:
                per_second_comments[min(row["video_second"], size - 1)] += 1
        cumulative = list(itertools.accumulate(per_second_comments))

        return TimelineAggregate(
            plays=plays, pauses=pauses, avg_speed=avg_speed, cumulative_comments=cumulative
        )

    def aggregate_concept_scores(self, video_id: str) -> list[ConceptAggregate]:
        """Mean of each student's latest revision per concept, with the
        intensity/alpha shading encoding; unmarked concepts report zeros."""
        concept_ids = self.concept_ids(video_id)
        with self._lock:
            rows = self._conn.execute(
                "SELECT pseudonym, concept_id, score FROM markings"
                " WHERE video_id = ? ORDER BY wall_time, seq",
                (video_id,),
            ).fetchall()
        latest: dict[tuple[str, str], int] = {}
        for row in rows:
            latest[(row["pseudonym"], row["concept_id"])] = row["score"]

        scores_by_concept: dict[str, list[int]] = {cid: [] for cid in concept_ids}
        for (_, concept_id), score in latest.items():
            # markings may exist for concepts dropped from a rebuilt graph
            if concept_id in scores_by_concept:
                scores_by_concept[concept_id].append(score)

        max_markers = max((len(v) for v in scores_by_concept.values()), default=0)
        aggregates = []
        for cid in concept_ids:
            scores = scores_by_concept[cid]
            count = len(scores)
            mean = sum(scores) / count if count else 0.0
            alpha = 0.25 + 0.75 * count / max_markers if count else 0.0
            aggregates.append(
                ConceptAggregate(
                    concept_id=cid,
                    mean_score=mean,
                    marker_count=count,
                    intensity=mean / 3.0,
                    alpha=alpha,
                )
            )
        return aggregates

    def comment_index(self, video_id: str) -> dict:
        """Comment map plus id orderings for each of the three sort keys."""
        comments = {c.comment_id: c for c in self.list_comments(video_id, "submit_time")}
        return {
            "comments": {cid: c.to_dict() for cid, c in comments.items()},
            "order": {
                sort: [c.comment_id for c in self.list_comments(video_id, sort)]
                for sort in COMMENT_SORTS
            },
            "total": sum(1 for c in comments.values() if not c.deleted),
            "deleted": sum(1 for c in comments.values() if c.deleted),
        }

    # -- batching and the event-log wire format --------------------------------

    def apply_feedback_batch(self, video_id: str, pseudonym: str, batch: dict) -> dict:
        """Apply a student batch transactionally: on any failure nothing is
        stored. Returns counts per channel."""
        events = batch.get("events", [])
        comments = batch.get("comments", [])
        markings = batch.get("markings", [])
        with self._write():
            for entry in events:
                self.record_event(
                    FeedbackEvent(
                        pseudonym=pseudonym,
                        video_id=video_id,
                        video_second=int(entry["video_second"]),
                        wall_time=parse_rfc3339(entry["wall_time"]),
                        kind=entry["kind"],
                        rate=entry.get("rate"),
                    )
                )
            for entry in comments:
                self.post_comment(
                    pseudonym=pseudonym,
                    video_id=video_id,
                    video_second=int(entry["video_second"]),
                    body=entry.get("body", ""),
                    wall_time=parse_rfc3339(entry["wall_time"])
                    if "wall_time" in entry
                    else None,
                )
            for entry in markings:
                self.set_marking(
                    pseudonym=pseudonym,
                    video_id=video_id,
                    concept_id=entry["concept_id"],
                    score=entry["score"],
                    wall_time=parse_rfc3339(entry["wall_time"])
                    if "wall_time" in entry
                    else None,
                )
        return {"events": len(events), "comments": len(comments), "markings": len(markings)}

    def export_event_log(self, video_id: str) -> list[str]:
        """Newline-delimited JSON records, ordered by wall time. Soft deletes
        are exported as delete_comment records so a replay reproduces the
        aggregates exactly."""
        self.video(video_id)
        records: list[tuple[str, int, dict]] = []
        with self._lock:
            for row in self._conn.execute(
                "SELECT * FROM events WHERE video_id = ? ORDER BY seq", (video_id,)
            ):
                payload = {} if row["kind"] != "rate" else {"rate": row["rate"]}
                records.append(
                    (
                        row["wall_time"],
                        row["seq"],
                        _log_record(
                            row["kind"] if row["kind"] != "rate" else "rate",
                            row["pseudonym"],
                            video_id,
                            row["video_second"],
                            row["wall_time"],
                            payload,
                        ),
                    )
                )
            for row in self._conn.execute(
                "SELECT * FROM comments WHERE video_id = ? ORDER BY seq", (video_id,)
            ):
                records.append(
                    (
                        row["wall_time"],
                        row["seq"],
                        _log_record(
                            "comment",
                            row["pseudonym"],
                            video_id,
                            row["video_second"],
                            row["wall_time"],
                            {"comment_id": row["comment_id"], "body": row["body"]},
                        ),
                    )
                )
                if row["deleted"]:
                    records.append(
                        (
                            row["wall_time"],
                            row["seq"] + 1_000_000_000,
                            _log_record(
                                "delete_comment",
                                row["pseudonym"],
                                video_id,
                                row["video_second"],
                                row["wall_time"],
                                {"comment_id": row["comment_id"]},
                            ),
                        )
                    )
            for row in self._conn.execute(
                "SELECT * FROM markings WHERE video_id = ? ORDER BY seq", (video_id,)
            ):
                records.append(
                    (
                        row["wall_time"],
                        row["seq"],
                        _log_record(
                            "marking",
                            row["pseudonym"],
                            video_id,
                            0,
                            row["wall_time"],
                            {"concept_id": row["concept_id"], "score": row["score"]},
                        ),
                    )
                )
        records.sort(key=lambda item: (item[0], item[1]))
        return [json.dumps(record, sort_keys=True) for _, _, record in records]

    def apply_log_record(self, record: dict) -> None:
        """Ingest one event-log record (the replay path)."""
        rtype = record["type"]
        pseudonym = record["pseudonym"]
        video_id = record["video_id"]
        second = int(record.get("video_second", 0))
        wall_time = parse_rfc3339(record["wall_time"])
        payload = record.get("payload", {})
        if rtype in ("play", "pause"):
            self.record_event(
                FeedbackEvent(pseudonym, video_id, second, wall_time, rtype)
            )
        elif rtype == "rate":
            self.record_event(
                FeedbackEvent(pseudonym, video_id, second, wall_time, "rate", payload["rate"])
            )
        elif rtype == "comment":
            self.post_comment(
                pseudonym,
                video_id,
                second,
                payload["body"],
                wall_time=wall_time,
                comment_id=payload.get("comment_id"),
            )
        elif rtype == "delete_comment":
            self.delete_comment(pseudonym, payload["comment_id"])
        elif rtype == "marking":
            self.set_marking(
                pseudonym, video_id, payload["concept_id"], payload["score"], wall_time
            )
        else:
            raise ValueError(f"unknown record type {rtype!r}")


def _log_record(
    rtype: str, pseudonym: str, video_id: str, second: int, wall_time: str, payload: dict
) -> dict:
    return {
        "type": rtype,
        "pseudonym": pseudonym,
        "video_id": video_id,
        "video_second": second,
        "wall_time": wall_time,
        "payload": payload,
    }


def replay_log_lines(store: FeedbackStore, lines: list[str]) -> None:
    """Apply newline-delimited JSON records; BadLogLine carries the 1-based
    number of the offending line."""
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            record = json.loads(stripped)
            store.apply_log_record(record)
        except (ValueError, KeyError, TypeError) as exc:
            raise BadLogLine(number, str(exc)) from exc
