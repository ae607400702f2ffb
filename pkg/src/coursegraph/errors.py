"""Exception hierarchy shared across the engine."""

from __future__ import annotations


class CourseGraphError(Exception):
    """Base class for all engine errors."""


# --- frame stream ---------------------------------------------------------

class BadHeader(CourseGraphError):
    pass


class TruncatedStream(CourseGraphError):
    pass


class ZeroFrames(CourseGraphError):
    pass


class BadStream(CourseGraphError):
    """Stream rejected at upload time (wraps header/payload errors)."""


# --- keyframe pipeline ----------------------------------------------------

class TooFewFrames(CourseGraphError):
    pass


class BadWindowLength(CourseGraphError):
    pass


# --- adapters -------------------------------------------------------------

class AdapterUnavailable(CourseGraphError):
    pass


class MalformedAdapterReply(CourseGraphError):
    pass


# --- graph ----------------------------------------------------------------

class CyclicInput(CourseGraphError):
    pass


class UnknownChapter(CourseGraphError):
    pass


class RingOverflow(CourseGraphError):
    def __init__(self, node_id: str, count: int):
        super().__init__(f"node {node_id} has {count} prerequisites; ring capacity is 18")
        self.node_id = node_id
        self.count = count


class MissingLayout(CourseGraphError):
    pass


# --- feedback store -------------------------------------------------------

class FeedbackError(CourseGraphError):
    pass


class UnknownVideo(FeedbackError):
    pass


class OutOfRangeSecond(FeedbackError):
    pass


class BadRate(FeedbackError):
    pass


class EmptyBody(FeedbackError):
    pass


class NotOwner(FeedbackError):
    pass


class UnknownComment(FeedbackError):
    pass


class UnknownConcept(FeedbackError):
    pass


class BadScore(FeedbackError):
    pass


class BadRange(FeedbackError):
    pass


# --- service / cli --------------------------------------------------------

class Forbidden(CourseGraphError):
    pass


class BadChapters(CourseGraphError):
    pass


class NotReady(CourseGraphError):
    pass


class BadLogLine(CourseGraphError):
    def __init__(self, line_number: int, reason: str = ""):
        detail = f"bad log line {line_number}"
        if reason:
            detail += f": {reason}"
        super().__init__(detail)
        self.line_number = line_number
