from __future__ import annotations

import struct
from fractions import Fraction

import numpy as np
import pytest

from coursegraph.errors import BadHeader, TruncatedStream, ZeroFrames
from coursegraph.framestream import (
    HEADER_SIZE,
    FrameSequence,
    dump_frame_stream,
    load_frame_stream,
)


def make_header(width=4, height=4, fps_num=1, fps_den=1, count=2) -> bytes:
    return struct.pack("<4sIIIIQ", b"TSCF", width, height, fps_num, fps_den, count)


def test_minimal_well_formed_stream():
    blob = make_header() + bytes(range(32))
    seq = load_frame_stream(blob)
    assert seq.frame_count == 2
    assert seq.width == seq.height == 4
    assert seq.fps == Fraction(1)
    assert seq.frames[1][3][3] == 31


def test_truncated_payload_off_by_one():
    blob = make_header() + bytes(31)
    with pytest.raises(TruncatedStream):
        load_frame_stream(blob)


def test_truncated_header():
    with pytest.raises(TruncatedStream):
        load_frame_stream(make_header()[: HEADER_SIZE - 1])


def test_zero_fps_rejected():
    with pytest.raises(BadHeader):
        load_frame_stream(make_header(fps_num=0) + bytes(32))
    with pytest.raises(BadHeader):
        load_frame_stream(make_header(fps_den=0) + bytes(32))


def test_bad_magic_rejected():
    blob = b"XXXX" + make_header()[4:] + bytes(32)
    with pytest.raises(BadHeader):
        load_frame_stream(blob)


def test_zero_frames_rejected():
    with pytest.raises(ZeroFrames):
        load_frame_stream(make_header(count=0))


def test_zero_dimensions_rejected():
    with pytest.raises(BadHeader):
        load_frame_stream(make_header(width=0) + b"")


def test_round_trip_preserves_frames_and_fps():
    rng = np.random.RandomState(1)
    frames = rng.randint(0, 256, size=(3, 5, 7), dtype=np.uint8).astype(np.uint8)
    seq = FrameSequence(width=7, height=5, fps=Fraction(30000, 1001), frames=frames)
    again = load_frame_stream(dump_frame_stream(seq), video_id="rt")
    assert np.array_equal(seq.frames, again.frames)
    assert again.fps == Fraction(30000, 1001)
    assert again.video_id == "rt"


def test_video_time_is_frame_index_over_fps():
    frames = np.zeros((4, 2, 2), dtype=np.uint8)
    seq = FrameSequence(width=2, height=2, fps=Fraction(2), frames=frames)
    assert seq.time_of(3) == pytest.approx(1.5)
    assert seq.duration_seconds == pytest.approx(2.0)
