"""Raw frame-stream (TSCF) decoding and encoding.

Layout, little-endian:

    magic "TSCF" | u32 width | u32 height | u32 fps_num | u32 fps_den
    | u64 frame_count | frames as row-major 8-bit grayscale

Container demuxing happens upstream; the engine only ever sees this format.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import BinaryIO

import numpy as np

from .errors import BadHeader, TruncatedStream, ZeroFrames

MAGIC = b"TSCF"
_HEADER = struct.Struct("<4sIIIIQ")
HEADER_SIZE = _HEADER.size


@dataclass(eq=False)
class FrameSequence:
    """Decoded grayscale frames of one lecture video."""

    width: int
    height: int
    fps: Fraction
    frames: np.ndarray  # shape (n, height, width), uint8
    video_id: str = "video"

    def __post_init__(self) -> None:
        if self.fps <= 0:
            raise BadHeader("fps must be positive")
        if self.frames.ndim != 3 or self.frames.shape[1:] != (self.height, self.width):
            raise BadHeader("frame array does not match declared dimensions")
        if self.frames.shape[0] < 1:
            raise ZeroFrames("a frame sequence needs at least one frame")

    @property
    def frame_count(self) -> int:
        return int(self.frames.shape[0])

    @property
    def duration_seconds(self) -> float:
        return float(self.frame_count / self.fps)

    def time_of(self, frame_index: int) -> float:
        """Video time of a frame, in seconds (frame_index / fps)."""
        return float(Fraction(frame_index) / self.fps)


def load_frame_stream(source: BinaryIO | bytes, video_id: str = "video") -> FrameSequence:
    """Parse a TSCF stream. Raises BadHeader / TruncatedStream / ZeroFrames."""
    stream = io.BytesIO(source) if isinstance(source, (bytes, bytearray)) else source

    header = stream.read(HEADER_SIZE)
    if len(header) < HEADER_SIZE:
        raise TruncatedStream(f"header needs {HEADER_SIZE} bytes, got {len(header)}")
    magic, width, height, fps_num, fps_den, frame_count = _HEADER.unpack(header)
    if magic != MAGIC:
        raise BadHeader(f"bad magic {magic!r}")
    if width == 0 or height == 0:
        raise BadHeader("zero frame dimensions")
    if fps_num == 0 or fps_den == 0:
        raise BadHeader("fps must be a positive rational")
    if frame_count == 0:
        raise ZeroFrames("header declares zero frames")

    expected = width * height * frame_count
    payload = stream.read(expected)
    if len(payload) < expected:
        raise TruncatedStream(f"payload needs {expected} bytes, got {len(payload)}")

    frames = np.frombuffer(payload, dtype=np.uint8).reshape(frame_count, height, width)
    return FrameSequence(
        width=width,
        height=height,
        fps=Fraction(fps_num, fps_den),
        frames=frames,
        video_id=video_id,
    )


def write_frame_stream(seq: FrameSequence, sink: BinaryIO) -> None:
    """Serialize a FrameSequence back to TSCF (used by fixtures and uploads)."""
    fps = Fraction(seq.fps)
    sink.write(
        _HEADER.pack(MAGIC, seq.width, seq.height, fps.numerator, fps.denominator, seq.frame_count)
    )
    sink.write(np.ascontiguousarray(seq.frames, dtype=np.uint8).tobytes())


def dump_frame_stream(seq: FrameSequence) -> bytes:
    buf = io.BytesIO()
    write_frame_stream(seq, buf)
    return buf.getvalue()
