"""Feedback channels and instructor aggregates
===============================================

Simulates a small cohort watching one video (play/pause/rate events, a few
comments, concept markings with revisions) and prints the instructor-facing
rollups: the per-second timeline, concept shading values, and the
long-interval downgrade analysis.

Run from the repository root:

    python demos/demo_feedback_analytics.py
"""

import datetime as dt
import random

from coursegraph.chapters import ChapterAnnotation
from coursegraph.feedback import FeedbackEvent, FeedbackStore

T0 = dt.datetime(2025, 3, 1, 9, 0, 0, tzinfo=dt.timezone.utc)
rng = random.Random(5)

# %%
# One video, 240 seconds, three chapters, four concepts.

store = FeedbackStore(":memory:")
chapters = [
    ChapterAnnotation("intro", "Introduction", 0.0, 60.0),
    ChapterAnnotation("core", "Core Material", 60.0, 180.0),
    ChapterAnnotation("wrap", "Wrap-up", 180.0, 240.0),
]
store.register_video("demo", "Demo Lecture", 240, chapters, state="ready")
concepts = ["c-flow", "c-cut", "c-residual", "c-duality"]
store.register_concepts("demo", concepts)

# %%
# Twelve students watch linearly, some speeding up mid-video, a few pausing
# around the hard part at ~150s.

wall = 0
for s in range(12):
    who = f"anon-{s:02d}"
    wall += 60
    store.record_event(FeedbackEvent(who, "demo", 0, T0 + dt.timedelta(seconds=wall), "play"))
    if s % 3 == 0:
        store.record_event(
            FeedbackEvent(who, "demo", 90, T0 + dt.timedelta(seconds=wall + 90), "rate", 1.5)
        )
    if s % 4 == 0:
        store.record_event(
            FeedbackEvent(who, "demo", 150, T0 + dt.timedelta(seconds=wall + 150), "pause")
        )
        store.record_event(
            FeedbackEvent(who, "demo", 150, T0 + dt.timedelta(seconds=wall + 170), "play")
        )
    store.record_event(
        FeedbackEvent(who, "demo", 240, T0 + dt.timedelta(seconds=wall + 260), "pause")
    )

for who, second, text in [
    ("anon-01", 148, "lost me at the residual construction"),
    ("anon-04", 152, "why does the reverse edge exist?"),
    ("anon-07", 30, "nice recap"),
]:
    store.post_comment(who, "demo", second, text, wall_time=T0 + dt.timedelta(seconds=second))

# markings: the cohort struggles with c-residual; one student revises slowly
for s in range(12):
    who = f"anon-{s:02d}"
    store.set_marking(who, "demo", "c-flow", rng.choice([0, 0, 1]), T0 + dt.timedelta(seconds=400 + s))
    store.set_marking(who, "demo", "c-residual", rng.choice([2, 3]), T0 + dt.timedelta(seconds=500 + s))
store.set_marking("anon-01", "demo", "c-residual", 3, T0 + dt.timedelta(seconds=600))
store.set_marking("anon-01", "demo", "c-residual", 1, T0 + dt.timedelta(seconds=615))

# %%
# The VideoData-style timeline: plays stack from below, pauses from above,
# the speed line wobbles around 1x, comments accumulate.

timeline = store.aggregate_timeline("demo")
print("second  plays  pauses  avg_speed  cum_comments")
for s in range(0, 241, 30):
    print(f"{s:6d}  {timeline.plays[s]:5d}  {timeline.pauses[s]:6d}"
          f"  {timeline.avg_speed[s]:9.3f}  {timeline.cumulative_comments[s]:12d}")

# %%
# Concept shading: intensity follows the mean score (high = weak mastery),
# alpha follows how many students marked the concept at all.

print("\nconcept      mean  markers  intensity  alpha")
for agg in store.aggregate_concept_scores("demo"):
    print(f"{agg.concept_id:<12} {agg.mean_score:4.2f}  {agg.marker_count:7d}"
          f"  {agg.intensity:9.3f}  {agg.alpha:5.3f}")

# %%
# Long-interval downgrades: revisions more than 10 seconds after the previous
# one that lowered the score suggest understanding that grew while studying.

print("\nlong-interval downgrades:")
for d in store.long_interval_downgrades("demo"):
    print(f"  {d.pseudonym} on {d.concept_id}: {d.previous_score} -> {d.score}"
          f" after {d.gap_seconds:.0f}s")
