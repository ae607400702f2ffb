"""End-to-end pipeline: frame stream -> keyframes -> chapter text bundles ->
concept graph -> layered hexagonal layout -> canonical graph JSON.

Used by both the CLI and the HTTP service so results never drift between the
two entry points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .adapters import AdapterSet
from .chapters import ChapterAnnotation, ChapterTextBundle
from .extraction import BuildReport, build_concept_graph
from .framestream import FrameSequence
from .graph import DependencyGraph, dump_graph_json, graph_to_dict
from .keyframes import (
    DEFAULT_DEDUP_THRESHOLD,
    DEFAULT_WINDOW_LEN,
    Keyframe,
    extract_keyframes,
    ocr_keyframes,
)
from .layout import LayoutPlacement, place_graph

logger = logging.getLogger(__name__)

DEFAULT_HEX_SIDE = 20.0


@dataclass
class EngineConfig:
    window_len: int = DEFAULT_WINDOW_LEN
    dedup_threshold: float = DEFAULT_DEDUP_THRESHOLD
    noise_floor: float | None = None  # None = 2% of the smoothed series maximum
    hex_side: float = DEFAULT_HEX_SIDE


@dataclass
class PipelineResult:
    keyframes: list[Keyframe]
    groups: list[list[int]]
    bundles: list[ChapterTextBundle]
    graph: DependencyGraph
    layers: list[list[str]]
    placement: LayoutPlacement
    report: BuildReport
    graph_json: bytes

    def keyframe_manifest(self) -> dict:
        entries = [
            {
                "frame_index": kf.frame_index,
                "video_time": kf.video_time,
                "group_size": len(group),
            }
            for kf, group in zip(self.keyframes, self.groups)
        ]
        return {"keyframes": entries, "warnings": self.report.warning_lines()}


def run_pipeline(
    seq: FrameSequence,
    chapters: list[ChapterAnnotation],
    adapters: AdapterSet,
    config: EngineConfig | None = None,
) -> PipelineResult:
    config = config or EngineConfig()
    keyframes, groups = extract_keyframes(
        seq,
        window_len=config.window_len,
        dedup_threshold=config.dedup_threshold,
        noise_floor=config.noise_floor,
    )
    logger.info("%s: %d keyframes from %d frames", seq.video_id, len(keyframes), seq.frame_count)

    bundles = ocr_keyframes(keyframes, chapters, adapters.ocr)
    graph, report = build_concept_graph(bundles, chapters, adapters)
    layers, placement = place_graph(graph, config.hex_side)
    graph_json = dump_graph_json(
        graph_to_dict(graph, layout=placement.to_layout_dict(), hex_side=config.hex_side)
    )
    return PipelineResult(
        keyframes=keyframes,
        groups=groups,
        bundles=bundles,
        graph=graph,
        layers=layers,
        placement=placement,
        report=report,
        graph_json=graph_json,
    )
