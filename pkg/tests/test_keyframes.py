from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coursegraph.adapters import MockOcr, SubprocessOcr, decode_png, encode_png, pixel_digest
from coursegraph.chapters import ChapterAnnotation, chapter_for_time
from coursegraph.errors import AdapterUnavailable, BadWindowLength, TooFewFrames
from coursegraph.framestream import FrameSequence
from coursegraph.keyframes import (
    DiffSeries,
    dedup_keyframes,
    detect_local_maxima,
    frame_difference_series,
    frame_similarity,
    group_candidates,
    hann_kernel,
    ocr_keyframes,
    smooth_hanning,
)


def seq_from(frames: list[np.ndarray], fps: int = 1) -> FrameSequence:
    stack = np.stack([f.astype(np.uint8) for f in frames])
    return FrameSequence(
        width=stack.shape[2], height=stack.shape[1], fps=Fraction(fps), frames=stack
    )


def flat(value: int, shape=(4, 4)) -> np.ndarray:
    return np.full(shape, value, dtype=np.uint8)


# --- frame differencing -----------------------------------------------------

def test_identical_frames_give_zero():
    series = frame_difference_series(seq_from([flat(7), flat(7)]))
    assert series.values.tolist() == [0.0]
    assert series.smoothed is False


def test_black_to_white_gives_255():
    series = frame_difference_series(seq_from([flat(0), flat(255)]))
    assert series.values.tolist() == [255.0]


def test_random_frames_match_pixel_loop_oracle():
    rng = np.random.RandomState(42)
    frames = [rng.randint(0, 256, size=(2, 2)).astype(np.uint8) for _ in range(3)]
    series = frame_difference_series(seq_from(frames))
    for i in range(2):
        total = 0
        for y in range(2):
            for x in range(2):
                total += abs(int(frames[i + 1][y, x]) - int(frames[i][y, x]))
        assert series.values[i] == pytest.approx(total / 4.0)


def test_single_frame_rejected():
    with pytest.raises(TooFewFrames):
        frame_difference_series(seq_from([flat(0)]))


def test_reversing_frames_reverses_series():
    rng = np.random.RandomState(3)
    frames = [rng.randint(0, 256, size=(3, 3)).astype(np.uint8) for _ in range(5)]
    forward = frame_difference_series(seq_from(frames))
    backward = frame_difference_series(seq_from(frames[::-1]))
    assert np.allclose(forward.values, backward.values[::-1])


# --- Hann smoothing -----------------------------------------------------------

def test_impulse_response_window_3():
    series = DiffSeries(values=np.array([0.0, 0.0, 1.0, 0.0, 0.0]))
    out = smooth_hanning(series, 3)
    assert out.smoothed is True
    assert np.allclose(out.values, [0.0, 0.25, 0.5, 0.25, 0.0], atol=1e-12)


def test_impulse_response_equals_kernel():
    n = 31
    values = np.zeros(n)
    values[n // 2] = 1.0
    out = smooth_hanning(DiffSeries(values=values), 9)
    kernel = hann_kernel(9)
    assert np.allclose(out.values[n // 2 - 4 : n // 2 + 5], kernel, atol=1e-12)
    assert abs(kernel.sum() - 1.0) < 1e-12


def test_constant_series_is_fixed_point():
    series = DiffSeries(values=np.full(20, 3.25))
    out = smooth_hanning(series, 9)
    assert np.allclose(out.values, 3.25, atol=1e-12)
    assert len(out) == 20


@pytest.mark.parametrize("window", [2, 1, 4, 0, -3])
def test_even_or_small_window_rejected(window):
    series = DiffSeries(values=np.zeros(10))
    with pytest.raises(BadWindowLength):
        smooth_hanning(series, window)


def test_window_longer_than_series_rejected():
    with pytest.raises(BadWindowLength):
        smooth_hanning(DiffSeries(values=np.zeros(5)), 7)


def test_double_smoothing_rejected():
    out = smooth_hanning(DiffSeries(values=np.zeros(10)), 3)
    with pytest.raises(ValueError):
        smooth_hanning(out, 3)


@given(
    st.lists(st.floats(min_value=0, max_value=255), min_size=9, max_size=40),
    st.sampled_from([3, 5, 7, 9]),
)
@settings(max_examples=60, deadline=None)
def test_smoothing_preserves_length_and_nonnegativity(values, window):
    series = DiffSeries(values=np.array(values))
    out = smooth_hanning(series, window)
    assert len(out) == len(series)
    assert (out.values >= -1e-12).all()


# --- local maxima --------------------------------------------------------------

def smoothed(values) -> DiffSeries:
    return DiffSeries(values=np.array(values, dtype=float), smoothed=True)


def test_interior_maxima_with_floor():
    assert detect_local_maxima(smoothed([0, 1, 0, 2, 0]), 0.5) == [1, 3]


def test_strictly_decreasing_boundary_rule():
    assert detect_local_maxima(smoothed([3, 2, 1]), 0.5) == [0]
    assert detect_local_maxima(smoothed([3, 2, 1]), 5.0) == []


def test_floor_dominates():
    assert detect_local_maxima(smoothed([0.1, 0.4, 0.1]), 0.5) == []


def test_plateau_leftmost_wins():
    assert detect_local_maxima(smoothed([0, 2, 2, 2, 0]), 0.1) == [1]


def test_rising_tail_boundary():
    assert detect_local_maxima(smoothed([0, 1, 2]), 0.1) == [2]


def test_unsmoothed_series_rejected():
    with pytest.raises(ValueError):
        detect_local_maxima(DiffSeries(values=np.zeros(3)), 0.0)


def test_reported_maxima_satisfy_neighbor_inequalities():
    rng = np.random.RandomState(11)
    for _ in range(50):
        v = rng.rand(30)
        floor = 0.3
        found = detect_local_maxima(smoothed(v), floor)
        assert found == sorted(found)
        expected = []
        for i in range(len(v)):
            left_ok = i == 0 or v[i] > v[i - 1]
            right_ok = i == len(v) - 1 or v[i] >= v[i + 1]
            if left_ok and right_ok and v[i] > floor:
                expected.append(i)
        assert found == expected


# --- near-duplicate collapsing ---------------------------------------------------

def test_identical_candidate_frames_collapse_to_last():
    frames = [flat(0), flat(200), flat(200), flat(200)]
    seq = seq_from(frames)
    kfs = dedup_keyframes(seq, [0, 1, 2], threshold=0.9)
    assert len(kfs) == 1
    assert kfs[0].frame_index == 3  # last of the group, mapped to frame idx+1
    assert kfs[0].video_time == pytest.approx(3.0)
    assert kfs[0].ocr_text == []


def test_dissimilar_candidates_both_retained():
    # similarity(flat 0, flat 128) = 1 - 128/255 ~= 0.498
    frames = [flat(255), flat(0), flat(128)]
    seq = seq_from(frames)
    assert frame_similarity(frames[1], frames[2]) == pytest.approx(1 - 128 / 255)
    kfs = dedup_keyframes(seq, [0, 1], threshold=0.9)
    assert [k.frame_index for k in kfs] == [1, 2]


def test_annotated_slide_groups_with_original():
    base = np.full((10, 10), 100, dtype=np.uint8)
    annotated = base.copy()
    annotated[:2, :2] = 228  # 4/100 pixels change by 128 -> similarity 0.98
    expected_sim = 1 - (4 * 128 / 100) / 255
    assert frame_similarity(base, annotated) == pytest.approx(expected_sim)
    assert expected_sim >= 0.9

    frames = [flat(0, (10, 10)), base, annotated]
    kfs = dedup_keyframes(seq_from(frames), [0, 1], threshold=0.9)
    assert len(kfs) == 1
    assert kfs[0].frame_index == 2  # the annotated (last) version is retained


def test_unsorted_candidates_rejected():
    with pytest.raises(ValueError):
        dedup_keyframes(seq_from([flat(0), flat(1), flat(2)]), [1, 0])


def test_output_subset_and_group_breaks_dissimilar():
    rng = np.random.RandomState(5)
    frames = [rng.randint(0, 256, size=(6, 6)).astype(np.uint8) for _ in range(10)]
    seq = seq_from(frames)
    candidates = list(range(9))
    groups = group_candidates(seq, candidates, 0.9)
    kfs = dedup_keyframes(seq, candidates, 0.9)
    assert [k.frame_index - 1 for k in kfs] == [g[-1] for g in groups]
    assert set(k.frame_index - 1 for k in kfs) <= set(candidates)
    for earlier, later in zip(groups, groups[1:]):
        boundary_sim = frame_similarity(
            seq.frames[earlier[-1] + 1], seq.frames[later[0] + 1]
        )
        assert boundary_sim < 0.9


# --- OCR and chapter bundling ------------------------------------------------------

class TableOcr:
    def __init__(self, table):
        self.table = table

    def recognize(self, png: bytes) -> list[str]:
        return self.table[pixel_digest(decode_png(png))]


class FailingOcr:
    def recognize(self, png: bytes) -> list[str]:
        raise AdapterUnavailable("down")


CHAPTERS = [
    ChapterAnnotation("c1", "One", 0.0, 10.0),
    ChapterAnnotation("c2", "Two", 20.0, 30.0),
]


def test_mock_table_passthrough(tmp_path):
    frame = flat(9)
    table = {pixel_digest(frame): ["alpha", "beta"]}
    (tmp_path / "ocr.json").write_text(json.dumps(table))
    seq = seq_from([flat(0), frame])
    kfs = dedup_keyframes(seq, [0])
    bundles = ocr_keyframes(kfs, CHAPTERS, MockOcr(tmp_path))
    assert kfs[0].ocr_text == ["alpha", "beta"]
    assert bundles[0].keyframe_texts == [(1.0, ["alpha", "beta"])]


def test_gap_attaches_to_preceding_chapter():
    assert chapter_for_time(CHAPTERS, 15.0).chapter_id == "c1"
    assert chapter_for_time(CHAPTERS, 5.0).chapter_id == "c1"
    assert chapter_for_time(CHAPTERS, 25.0).chapter_id == "c2"
    # before the first chapter start
    late = [ChapterAnnotation("c1", "One", 10.0, 20.0)]
    assert chapter_for_time(late, 3.0).chapter_id == "c1"
    assert chapter_for_time(late, 50.0).chapter_id == "c1"


def test_bundle_sizes_match_interval_oracle(tmp_path):
    (tmp_path / "ocr.json").write_text("{}")
    frames = [flat(v) for v in (0, 50, 100, 150)]
    seq = seq_from(frames, fps=1)
    # three keyframes at t = 1, 2, 3 with chapters [0,2) and [2,10)
    chapters = [
        ChapterAnnotation("a", "A", 0.0, 2.0),
        ChapterAnnotation("b", "B", 2.0, 10.0),
    ]
    kfs = dedup_keyframes(seq, [0, 1, 2], threshold=0.99)
    bundles = ocr_keyframes(kfs, chapters, MockOcr(tmp_path))
    sizes = {b.chapter_id: len(b.keyframe_texts) for b in bundles}
    oracle = {"a": 0, "b": 0}
    for kf in kfs:
        key = "a" if 0 <= kf.video_time < 2 else "b"
        oracle[key] += 1
    assert sizes == oracle == {"a": 1, "b": 2}


def test_adapter_unavailable_fails_whole_call():
    seq = seq_from([flat(0), flat(200)])
    kfs = dedup_keyframes(seq, [0])
    with pytest.raises(AdapterUnavailable):
        ocr_keyframes(kfs, CHAPTERS, FailingOcr())
    assert kfs[0].ocr_text == []  # no partial fill


def test_unsorted_keyframes_rejected():
    seq = seq_from([flat(0), flat(100), flat(200)])
    kfs = dedup_keyframes(seq, [0, 1], threshold=0.99)
    with pytest.raises(ValueError):
        ocr_keyframes(list(reversed(kfs)), CHAPTERS, FailingOcr())


def test_subprocess_ocr_round_trip():
    script = (
        "import sys, json; sys.stdin.buffer.read();"
        " print(json.dumps(['line-1', 'line-2']))"
    )
    ocr = SubprocessOcr(["python3", "-c", script])
    assert ocr.recognize(encode_png(flat(3))) == ["line-1", "line-2"]


def test_subprocess_ocr_failure_is_adapter_unavailable():
    ocr = SubprocessOcr(["python3", "-c", "import sys; sys.exit(5)"])
    with pytest.raises(AdapterUnavailable):
        ocr.recognize(encode_png(flat(3)))


def test_png_round_trip_preserves_pixels():
    rng = np.random.RandomState(8)
    bitmap = rng.randint(0, 256, size=(12, 9)).astype(np.uint8)
    assert np.array_equal(decode_png(encode_png(bitmap)), bitmap)


# --- determinism ------------------------------------------------------------------

def test_pipeline_detection_is_deterministic(course_deck):
    from coursegraph.keyframes import extract_keyframes

    first, groups_a = extract_keyframes(course_deck)
    second, groups_b = extract_keyframes(course_deck)
    assert [k.frame_index for k in first] == [k.frame_index for k in second]
    assert groups_a == groups_b
    assert all(np.array_equal(a.bitmap, b.bitmap) for a, b in zip(first, second))
