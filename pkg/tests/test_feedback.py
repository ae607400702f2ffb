from __future__ import annotations

import datetime as dt
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coursegraph.chapters import ChapterAnnotation
from coursegraph.errors import (
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
from coursegraph.feedback import FeedbackEvent, FeedbackStore, replay_log_lines

T0 = dt.datetime(2025, 3, 1, 9, 0, 0, tzinfo=dt.timezone.utc)


def at(seconds: float) -> dt.datetime:
    return T0 + dt.timedelta(seconds=seconds)


def make_video(store: FeedbackStore, video_id="v", duration=100):
    chapters = [
        ChapterAnnotation("ch1", "Opening", 0.0, 30.0),
        ChapterAnnotation("ch2", "Middle", 30.0, 60.0),
    ]
    store.register_video(video_id, "Lecture", duration, chapters, state="ready")
    store.register_concepts(video_id, ["c-alpha", "c-beta", "c-gamma"])
    return video_id


def play(store, second, who="s1", t=None, video="v"):
    store.record_event(FeedbackEvent(who, video, second, t or at(second), "play"))


def pause(store, second, who="s1", t=None, video="v"):
    store.record_event(FeedbackEvent(who, video, second, t or at(second), "pause"))


def rate(store, second, value, who="s1", t=None, video="v"):
    store.record_event(FeedbackEvent(who, video, second, t or at(second), "rate", value))


# --- events -------------------------------------------------------------------

def test_play_increments_counter(store):
    make_video(store)
    play(store, 10)
    timeline = store.aggregate_timeline("v")
    assert timeline.plays[10] == 1
    assert sum(timeline.plays) == 1


def test_second_beyond_duration_rejected(store):
    make_video(store, duration=50)
    play(store, 50)  # second == duration is allowed
    with pytest.raises(OutOfRangeSecond):
        play(store, 51)


def test_duplicate_event_is_idempotent(store):
    make_video(store)
    for _ in range(3):
        store.record_event(FeedbackEvent("s1", "v", 10, at(10), "play"))
    assert store.event_counts("v")["play"] == 1


def test_unknown_video_rejected(store):
    with pytest.raises(UnknownVideo):
        play(store, 1, video="ghost")


def test_bad_rate_rejected(store):
    make_video(store)
    with pytest.raises(BadRate):
        rate(store, 5, 3.0)
    rate(store, 5, 1.25)


# --- comments ------------------------------------------------------------------

def test_comment_resolves_chapter(store):
    make_video(store)
    comment = store.post_comment("s1", "v", 45, "why?")
    assert comment.chapter_id == "ch2"
    assert comment.chapter_title == "Middle"


def test_comment_before_first_chapter_and_in_gap(store):
    store.register_video(
        "v", "L", 100, [ChapterAnnotation("c1", "One", 10.0, 20.0)], state="ready"
    )
    early = store.post_comment("s1", "v", 2, "early")
    late = store.post_comment("s1", "v", 90, "late")
    assert early.chapter_id == "c1"  # first chapter when none precedes
    assert late.chapter_id == "c1"  # nearest preceding chapter


def test_empty_body_rejected(store):
    make_video(store)
    with pytest.raises(EmptyBody):
        store.post_comment("s1", "v", 1, "")


def test_soft_delete_owner_rules(store):
    make_video(store)
    comment = store.post_comment("s1", "v", 5, "mine")
    with pytest.raises(NotOwner):
        store.delete_comment("s2", comment.comment_id)
    store.delete_comment("s1", comment.comment_id)
    store.delete_comment("s1", comment.comment_id)  # idempotent no-op
    listed = store.list_comments("v")
    assert listed[0].deleted is True  # instructors still see it, flagged
    assert store.list_own_comments("s1", "v") == []
    with pytest.raises(UnknownComment):
        store.delete_comment("s1", "nope")


# --- markings ----------------------------------------------------------------------

def test_latest_revision_wins(store):
    make_video(store)
    store.set_marking("s1", "v", "c-alpha", 2, at(0))
    marking = store.set_marking("s1", "v", "c-alpha", 1, at(5))
    assert len(marking.revisions) == 2
    assert marking.effective_score == 1


def test_bad_score_and_unknown_concept(store):
    make_video(store)
    with pytest.raises(BadScore):
        store.set_marking("s1", "v", "c-alpha", 5)
    with pytest.raises(UnknownConcept):
        store.set_marking("s1", "v", "ghost", 2)


def test_long_interval_downgrade_query(store):
    make_video(store)
    # 12s apart, decreasing: flagged
    store.set_marking("s1", "v", "c-alpha", 3, at(0))
    store.set_marking("s1", "v", "c-alpha", 1, at(12))
    # 5s apart, decreasing: too fast
    store.set_marking("s2", "v", "c-alpha", 3, at(0))
    store.set_marking("s2", "v", "c-alpha", 1, at(5))
    # 20s apart, increasing: not a downgrade
    store.set_marking("s3", "v", "c-beta", 1, at(0))
    store.set_marking("s3", "v", "c-beta", 3, at(20))

    found = store.long_interval_downgrades("v")
    assert len(found) == 1
    hit = found[0]
    assert (hit.pseudonym, hit.concept_id) == ("s1", "c-alpha")
    assert (hit.previous_score, hit.score) == (3, 1)
    assert hit.gap_seconds == pytest.approx(12.0)


@given(
    st.lists(
        st.tuples(st.integers(0, 3), st.floats(min_value=0.5, max_value=30.0)),
        min_size=1,
        max_size=8,
    )
)
@settings(max_examples=50, deadline=None)
def test_marking_properties(revisions):
    store = FeedbackStore(":memory:")
    try:
        make_video(store)
        t = 0.0
        times = []
        for score, gap in revisions:
            t += gap
            times.append(t)
            store.set_marking("s1", "v", "c-alpha", score, at(t))
        marking = store.marking("s1", "v", "c-alpha")
        assert marking.effective_score == revisions[-1][0]
        assert len(marking.revisions) == len(revisions)

        expected = []
        for i in range(1, len(revisions)):
            gap = times[i] - times[i - 1]
            if gap > 10.0 and revisions[i][0] < revisions[i - 1][0]:
                expected.append((revisions[i - 1][0], revisions[i][0]))
        got = [
            (d.previous_score, d.score) for d in store.long_interval_downgrades("v")
        ]
        assert got == expected
    finally:
        store.close()


# --- timeline aggregation --------------------------------------------------------------

def test_empty_log_gives_zeroes_and_unit_speed(store):
    make_video(store, duration=5)
    timeline = store.aggregate_timeline("v")
    assert timeline.plays == [0] * 6
    assert timeline.pauses == [0] * 6
    assert timeline.avg_speed == [1.0] * 6
    assert timeline.cumulative_comments == [0] * 6


def test_rate_step_function_example(store):
    make_video(store, duration=30)
    play(store, 0)
    rate(store, 10, 1.5)
    pause(store, 20)
    timeline = store.aggregate_timeline("v")
    for s in range(0, 10):
        assert timeline.avg_speed[s] == pytest.approx(1.0)
    for s in range(10, 21):
        assert timeline.avg_speed[s] == pytest.approx(1.5)
    for s in range(21, 31):
        assert timeline.avg_speed[s] == pytest.approx(1.0)  # uncovered default


def test_speed_averages_over_covering_students(store):
    make_video(store, duration=10)
    play(store, 0, who="s1")
    pause(store, 10, who="s1")
    play(store, 0, who="s2")
    rate(store, 0, 2.0, who="s2")
    pause(store, 10, who="s2")
    timeline = store.aggregate_timeline("v")
    assert timeline.avg_speed[5] == pytest.approx(1.5)


def test_deleted_comment_excluded_from_cumulative(store):
    make_video(store, duration=10)
    keep = store.post_comment("s1", "v", 5, "keep")
    drop = store.post_comment("s2", "v", 5, "drop")
    store.delete_comment("s2", drop.comment_id)
    timeline = store.aggregate_timeline("v")
    assert timeline.cumulative_comments[4] == 0
    assert timeline.cumulative_comments[5] == 1
    assert timeline.cumulative_comments[10] == 1


def test_event_conservation(store):
    make_video(store)
    rng = random.Random(5)
    for i in range(200):
        kind = rng.choice(["play", "pause"])
        who = f"s{rng.randint(1, 6)}"
        second = rng.randint(0, 100)
        store.record_event(FeedbackEvent(who, "v", second, at(i), kind))
    timeline = store.aggregate_timeline("v")
    counts = store.event_counts("v")
    assert sum(timeline.plays) == counts["play"]
    assert sum(timeline.pauses) == counts["pause"]


# --- concept aggregation -----------------------------------------------------------------

def test_mean_and_intensity(store):
    make_video(store)
    store.set_marking("s1", "v", "c-alpha", 3, at(0))
    store.set_marking("s2", "v", "c-alpha", 3, at(1))
    store.set_marking("s3", "v", "c-alpha", 0, at(2))
    agg = {a.concept_id: a for a in store.aggregate_concept_scores("v")}
    assert agg["c-alpha"].mean_score == pytest.approx(2.0)
    assert agg["c-alpha"].intensity == pytest.approx(2.0 / 3.0)
    assert agg["c-alpha"].marker_count == 3


def test_no_markings_gives_zero_aggregates(store):
    make_video(store)
    for agg in store.aggregate_concept_scores("v"):
        assert agg.marker_count == 0
        assert agg.mean_score == 0.0
        assert agg.alpha == 0.0


def test_alpha_formula(store):
    make_video(store)
    for i in range(4):
        store.set_marking(f"s{i}", "v", "c-alpha", 2, at(i))
    store.set_marking("s0", "v", "c-beta", 1, at(10))
    agg = {a.concept_id: a for a in store.aggregate_concept_scores("v")}
    assert agg["c-alpha"].alpha == pytest.approx(1.0)
    assert agg["c-beta"].alpha == pytest.approx(0.25 + 0.75 / 4)
    assert agg["c-gamma"].alpha == 0.0


def test_mean_uses_latest_revision_per_student(store):
    make_video(store)
    store.set_marking("s1", "v", "c-alpha", 3, at(0))
    store.set_marking("s1", "v", "c-alpha", 0, at(5))
    agg = {a.concept_id: a for a in store.aggregate_concept_scores("v")}
    assert agg["c-alpha"].mean_score == 0.0
    assert agg["c-alpha"].marker_count == 1


# --- comment listing -------------------------------------------------------------------

def seeded_comments(store):
    make_video(store, duration=300)
    data = [
        ("s2", 120, "b"),
        ("s1", 250, "c"),
        ("s3", 10, "d"),
        ("s1", 120, "a"),
        ("s2", 40, "e"),
    ]
    for i, (who, second, body) in enumerate(data):
        store.post_comment(who, "v", second, body, wall_time=at(i))
    return data


def test_sort_by_video_timestamp(store):
    seeded_comments(store)
    listed = store.list_comments("v", "video_timestamp")
    seconds = [c.video_second for c in listed]
    assert seconds == sorted(seconds)
    # stable within equal seconds: submit order preserved
    at_120 = [c.body for c in listed if c.video_second == 120]
    assert at_120 == ["b", "a"]


def test_sort_by_student_groups(store):
    seeded_comments(store)
    listed = store.list_comments("v", "student_id")
    pseudonyms = [c.pseudonym for c in listed]
    assert pseudonyms == sorted(pseudonyms)
    assert [c.body for c in listed if c.pseudonym == "s1"] == ["c", "a"]


def test_range_matches_linear_scan_oracle(store):
    data = seeded_comments(store)
    listed = store.list_comments("v", "submit_time", time_range=(100, 200))
    oracle = [body for _, second, body in data if 100 <= second <= 200]
    assert sorted(c.body for c in listed) == sorted(oracle)
    assert len(listed) == 2


def test_full_range_equals_no_range(store):
    seeded_comments(store)
    everything = store.list_comments("v", "submit_time")
    full = store.list_comments("v", "submit_time", time_range=(0, 300))
    assert [c.comment_id for c in everything] == [c.comment_id for c in full]


def test_bad_range_rejected(store):
    make_video(store)
    with pytest.raises(BadRange):
        store.list_comments("v", "submit_time", time_range=(10, 5))


def test_unknown_sort_rejected(store):
    make_video(store)
    with pytest.raises(ValueError):
        store.list_comments("v", "upvotes")


# --- batches and replay --------------------------------------------------------------

def test_batch_is_atomic(store):
    make_video(store)
    batch = {
        "events": [{"kind": "play", "video_second": 1, "wall_time": at(1).isoformat()}],
        "comments": [{"video_second": 2, "body": "ok"}],
        "markings": [{"concept_id": "c-alpha", "score": 9}],  # invalid score
    }
    with pytest.raises(BadScore):
        store.apply_feedback_batch("v", "s1", batch)
    assert store.event_counts("v")["play"] == 0
    assert store.list_comments("v") == []

    batch["markings"][0]["score"] = 2
    stored = store.apply_feedback_batch("v", "s1", batch)
    assert stored == {"events": 1, "comments": 1, "markings": 1}
    assert store.event_counts("v")["play"] == 1


def test_replay_reproduces_aggregates(store):
    make_video(store, duration=120)
    rng = random.Random(17)
    for i in range(150):
        who = f"s{rng.randint(1, 5)}"
        second = rng.randint(0, 120)
        kind = rng.choice(["play", "pause", "rate", "comment", "marking"])
        if kind == "rate":
            rate(store, second, rng.choice([0.5, 1.0, 1.5, 2.0]), who=who, t=at(i))
        elif kind == "comment":
            c = store.post_comment(who, "v", second, f"c{i}", wall_time=at(i))
            if rng.random() < 0.3:
                store.delete_comment(who, c.comment_id)
        elif kind == "marking":
            store.set_marking(who, "v", rng.choice(["c-alpha", "c-beta"]), rng.randint(0, 3), at(i))
        else:
            store.record_event(FeedbackEvent(who, "v", second, at(i), kind))

    lines = store.export_event_log("v")
    fresh = FeedbackStore(":memory:")
    try:
        make_video(fresh, duration=120)
        replay_log_lines(fresh, lines)
        assert fresh.aggregate_timeline("v").to_dict() == store.aggregate_timeline("v").to_dict()
        assert [a.to_dict() for a in fresh.aggregate_concept_scores("v")] == [
            a.to_dict() for a in store.aggregate_concept_scores("v")
        ]
        assert fresh.export_event_log("v") == lines
    finally:
        fresh.close()


def test_bad_log_line_number(store):
    make_video(store)
    lines = [
        json.dumps({"type": "play", "pseudonym": "s1", "video_id": "v",
                    "video_second": 1, "wall_time": at(1).isoformat(), "payload": {}}),
        "{broken",
    ]
    from coursegraph.errors import BadLogLine

    with pytest.raises(BadLogLine) as excinfo:
        replay_log_lines(store, lines)
    assert excinfo.value.line_number == 2
