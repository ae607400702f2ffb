"""Chapter annotations and the shared time-to-chapter resolution rule."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BadChapters


@dataclass(frozen=True)
class ChapterAnnotation:
    chapter_id: str
    title: str
    start: float
    end: float


@dataclass
class ChapterTextBundle:
    """Per-chapter OCR text sequence: (video_time, text lines) entries in time order."""

    chapter_id: str
    keyframe_texts: list[tuple[float, list[str]]] = field(default_factory=list)


def validate_chapters(chapters: list[ChapterAnnotation]) -> None:
    """Chapters must be ordered, non-overlapping, with 0 <= start < end.

    The union need not cover the whole video.
    """
    prev_end = None
    for ch in chapters:
        if not (0 <= ch.start < ch.end):
            raise BadChapters(f"chapter {ch.chapter_id}: need 0 <= start < end")
        if prev_end is not None and ch.start < prev_end:
            raise BadChapters(f"chapter {ch.chapter_id} overlaps or precedes the previous one")
        prev_end = ch.end


def chapter_for_time(chapters: list[ChapterAnnotation], t: float) -> ChapterAnnotation | None:
    """Chapter whose [start, end) contains t; otherwise the nearest preceding
    chapter, or the first chapter if none precedes. None only when there are
    no chapters at all."""
    if not chapters:
        return None
    preceding = None
    for ch in chapters:
        if ch.start <= t < ch.end:
            return ch
        if ch.end <= t:
            preceding = ch
    return preceding if preceding is not None else chapters[0]


def chapters_from_dicts(raw: list[dict]) -> list[ChapterAnnotation]:
    try:
        chapters = [
            ChapterAnnotation(
                chapter_id=str(item["chapter_id"]),
                title=str(item.get("title", item["chapter_id"])),
                start=float(item["start"]),
                end=float(item["end"]),
            )
            for item in raw
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise BadChapters(f"malformed chapter entry: {exc}") from exc
    validate_chapters(chapters)
    return chapters


def chapters_to_dicts(chapters: list[ChapterAnnotation]) -> list[dict]:
    return [
        {"chapter_id": c.chapter_id, "title": c.title, "start": c.start, "end": c.end}
        for c in chapters
    ]
