#!/usr/bin/env python3
"""Regenerate the derived parts of the course fixture.

Reads the hand-written adapter tables, rebuilds ocr.json from the keyframes
the detector actually finds on the synthetic deck, re-runs the full pipeline
and freezes the result as golden_graph.json. Run from the repository root
after changing the deck or the fixture tables:

    python scripts/generate_fixture_course.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from fixture_course import ADAPTER_DIR, GOLDEN_GRAPH, build_course_deck, course_chapters

from coursegraph.adapters import AdapterSet, MockConceptExtractor, MockEncyclopedia, MockOcr, pixel_digest
from coursegraph.chapters import chapter_for_time
from coursegraph.keyframes import extract_keyframes
from coursegraph.pipeline import EngineConfig, run_pipeline


def main() -> None:
    seq = build_course_deck()
    chapters = course_chapters()

    keyframes, groups = extract_keyframes(seq)
    ocr_table = {}
    for slide_number, kf in enumerate(keyframes, start=1):
        chapter = chapter_for_time(chapters, kf.video_time)
        ocr_table[pixel_digest(kf.bitmap)] = [
            f"Slide {slide_number}",
            chapter.title if chapter else "",
            f"t={kf.video_time:.0f}s",
        ]
    (ADAPTER_DIR / "ocr.json").write_text(
        json.dumps(ocr_table, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"ocr.json: {len(ocr_table)} keyframes, group sizes {[len(g) for g in groups]}")

    adapters = AdapterSet(
        ocr=MockOcr(ADAPTER_DIR),
        extractor=MockConceptExtractor(ADAPTER_DIR),
        encyclopedia=MockEncyclopedia(ADAPTER_DIR),
    )
    result = run_pipeline(seq, chapters, adapters, EngineConfig())
    GOLDEN_GRAPH.write_bytes(result.graph_json)
    print(f"golden_graph.json: {len(result.graph.nodes)} nodes, "
          f"{result.graph.edge_count()} edges, {len(result.report.warning_lines())} warnings")
    for line in result.report.warning_lines():
        print(f"  warning: {line}")


if __name__ == "__main__":
    main()
