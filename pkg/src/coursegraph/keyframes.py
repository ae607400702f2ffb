"""Keyframe extraction: inter-frame difference, Hann smoothing, peak picking,
near-duplicate collapsing, and per-chapter OCR text bundling.

The pipeline is pure over immutable inputs: identical frames and parameters
produce an identical keyframe list.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .adapters import OcrAdapter, encode_png
from .chapters import ChapterAnnotation, ChapterTextBundle, chapter_for_time
from .errors import BadWindowLength, TooFewFrames
from .framestream import FrameSequence

logger = logging.getLogger(__name__)

DEFAULT_WINDOW_LEN = 9
DEFAULT_DEDUP_THRESHOLD = 0.9
# Fraction of the series maximum used as the default peak floor.
DEFAULT_FLOOR_RATIO = 0.02


@dataclass(eq=False)
class DiffSeries:
    """Average pixel-wise difference intensity between consecutive frames."""

    values: np.ndarray  # float64, length = frame_count - 1
    smoothed: bool = False

    def __len__(self) -> int:
        return int(self.values.shape[0])


@dataclass(eq=False)
class Keyframe:
    frame_index: int
    video_time: float
    bitmap: np.ndarray  # (height, width) uint8
    ocr_text: list[str] = field(default_factory=list)


def frame_difference_series(seq: FrameSequence) -> DiffSeries:
    """values[i] = mean over pixels of |frame[i+1] - frame[i]|."""
    if seq.frame_count < 2:
        raise TooFewFrames("need at least two frames to difference")
    frames = seq.frames
    values = np.empty(seq.frame_count - 1, dtype=np.float64)
    for i in range(seq.frame_count - 1):
        a = frames[i].astype(np.int16)
        b = frames[i + 1].astype(np.int16)
        values[i] = np.abs(b - a).mean()
    return DiffSeries(values=values, smoothed=False)


def hann_kernel(window_len: int) -> np.ndarray:
    """Unit-sum smoothing kernel of window_len nonzero Hann samples.

    The zero endpoints of the raised-cosine window are dropped so every tap
    contributes; window_len=3 gives [0.25, 0.5, 0.25].
    """
    if window_len < 3 or window_len % 2 == 0:
        raise BadWindowLength(f"window length must be odd and >= 3, got {window_len}")
    kernel = np.hanning(window_len + 2)[1:-1]
    return kernel / kernel.sum()


def smooth_hanning(series: DiffSeries, window_len: int = DEFAULT_WINDOW_LEN) -> DiffSeries:
    """Convolve with the unit-sum Hann kernel using reflection padding.

    Length-preserving; a constant series is a fixed point.
    """
    if series.smoothed:
        raise ValueError("series is already smoothed")
    kernel = hann_kernel(window_len)
    if window_len > len(series):
        raise BadWindowLength(
            f"window length {window_len} exceeds series length {len(series)}"
        )
    pad = (window_len - 1) // 2
    padded = np.pad(series.values, pad, mode="reflect") if pad else series.values
    # kernel is symmetric, so convolution equals correlation
    smoothed = np.convolve(padded, kernel, mode="valid")
    return DiffSeries(values=smoothed, smoothed=True)


def default_noise_floor(series: DiffSeries) -> float:
    """2% of the series maximum; suppresses low-level compression noise."""
    if len(series) == 0:
        return 0.0
    return DEFAULT_FLOOR_RATIO * float(series.values.max())


def detect_local_maxima(series: DiffSeries, noise_floor: float) -> list[int]:
    """Indices i with values[i] > values[i-1], values[i] >= values[i+1] and
    values[i] > noise_floor.

    The strict-left / loose-right pair makes the leftmost point of a plateau
    win; boundary indices are tested against their one existing neighbor.
    """
    if not series.smoothed:
        raise ValueError("peak picking expects a smoothed series")
    v = series.values
    n = len(v)
    if n == 0:
        return []
    rises = np.ones(n, dtype=bool)
    rises[1:] = v[1:] > v[:-1]
    falls = np.ones(n, dtype=bool)
    falls[:-1] = v[:-1] >= v[1:]
    return np.flatnonzero(rises & falls & (v > noise_floor)).tolist()


def frame_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """1 - meanAbsDiff/255 over full frames; 1.0 means identical."""
    diff = np.abs(a.astype(np.int16) - b.astype(np.int16)).mean()
    return 1.0 - float(diff) / 255.0


def candidate_frame_index(candidate: int) -> int:
    """A difference-series index i marks the change into frame i + 1."""
    return candidate + 1


def group_candidates(
    seq: FrameSequence, candidates: list[int], threshold: float = DEFAULT_DEDUP_THRESHOLD
) -> list[list[int]]:
    """Chain consecutive candidates while the similarity of their frames stays
    at or above the threshold."""
    if list(candidates) != sorted(candidates):
        raise ValueError("candidates must be sorted ascending")
    groups: list[list[int]] = []
    prev_frame = None
    for cand in candidates:
        frame = seq.frames[candidate_frame_index(cand)]
        if prev_frame is not None and frame_similarity(prev_frame, frame) >= threshold:
            groups[-1].append(cand)
        else:
            groups.append([cand])
        prev_frame = frame
    return groups


def dedup_keyframes(
    seq: FrameSequence,
    candidates: list[int],
    threshold: float = DEFAULT_DEDUP_THRESHOLD,
) -> list[Keyframe]:
    """Collapse each group of similar candidates to one keyframe.

    The last frame of a group is kept: slides accumulate annotations, so the
    final state is the most complete one.
    """
    keyframes = []
    for group in group_candidates(seq, candidates, threshold):
        idx = candidate_frame_index(group[-1])
        keyframes.append(
            Keyframe(frame_index=idx, video_time=seq.time_of(idx), bitmap=seq.frames[idx])
        )
    return keyframes


def extract_keyframes(
    seq: FrameSequence,
    window_len: int = DEFAULT_WINDOW_LEN,
    dedup_threshold: float = DEFAULT_DEDUP_THRESHOLD,
    noise_floor: float | None = None,
) -> tuple[list[Keyframe], list[list[int]]]:
    """Full detection stage: returns the keyframes and the candidate groups
    they were collapsed from."""
    series = smooth_hanning(frame_difference_series(seq), window_len)
    floor = default_noise_floor(series) if noise_floor is None else noise_floor
    candidates = detect_local_maxima(series, floor)
    groups = group_candidates(seq, candidates, dedup_threshold)
    keyframes = dedup_keyframes(seq, candidates, dedup_threshold)
    return keyframes, groups


def ocr_keyframes(
    keyframes: list[Keyframe],
    chapters: list[ChapterAnnotation],
    ocr: OcrAdapter,
) -> list[ChapterTextBundle]:
    """Run OCR on every keyframe and bucket the texts by chapter.

    A keyframe outside every chapter window attaches to the nearest preceding
    chapter, or to the first chapter when none precedes. The whole call fails
    on an unavailable adapter; there are no partial bundles.
    """
    times = [kf.video_time for kf in keyframes]
    if times != sorted(times):
        raise ValueError("keyframes must be time-sorted")

    recognized: list[list[str]] = [ocr.recognize(encode_png(kf.bitmap)) for kf in keyframes]

    bundles = {ch.chapter_id: ChapterTextBundle(chapter_id=ch.chapter_id) for ch in chapters}
    for kf, lines in zip(keyframes, recognized):
        kf.ocr_text = list(lines)
        chapter = chapter_for_time(chapters, kf.video_time)
        if chapter is None:
            logger.warning("keyframe at %.2fs dropped: video has no chapters", kf.video_time)
            continue
        bundles[chapter.chapter_id].keyframe_texts.append((kf.video_time, list(lines)))
    return [bundles[ch.chapter_id] for ch in chapters]
