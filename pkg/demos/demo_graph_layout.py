"""Concept graph construction and hexagonal layout
===================================================

Runs the fixture lecture through the concept pipeline with the file-backed
mock adapters, prints the layer structure, and writes the hex-lattice SVG.

Run from the repository root:

    python demos/demo_graph_layout.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from fixture_course import ADAPTER_DIR, build_course_deck, course_chapters

from coursegraph.adapters import make_adapters
from coursegraph.pipeline import EngineConfig, run_pipeline
from coursegraph.svg import render_svg
from coursegraph.graph import graph_to_dict

# %%
# Full pipeline: frames -> keyframes -> OCR bundles -> concept graph -> layout.

seq = build_course_deck()
adapters = make_adapters(f"mock:{ADAPTER_DIR}")
result = run_pipeline(seq, course_chapters(), adapters, EngineConfig(hex_side=24.0))

graph = result.graph
print(f"{len(result.keyframes)} keyframes -> {len(graph.nodes)} concepts, "
      f"{graph.edge_count()} prerequisite edges")

# %%
# The layered structure: sources on the left, every edge pointing rightward.

for index, layer in enumerate(result.layers):
    names = [graph.nodes[nid].name for nid in layer]
    print(f"layer {index}: {', '.join(names)}")

# %%
# Gray prerequisite nodes sit in the two rings around their owning skeleton
# node; shared prerequisites are placed once, owned by the first referencing
# node in layer order.

for nid, node in sorted(graph.nodes.items(), key=lambda kv: kv[1].name):
    if node.kind.value == "prerequisite":
        owners = [graph.nodes[s].name for s in sorted(graph.successors(nid))]
        print(f"prerequisite {node.name!r} feeds {owners}")

# %%
# Render the SVG exactly as `coursegraph export-svg` would.

doc = graph_to_dict(graph, layout=result.placement.to_layout_dict(), hex_side=24.0)
out = Path(__file__).with_suffix(".svg")
out.write_text(render_svg(doc), encoding="utf-8")
print(f"svg saved to {out}")

if result.report.warning_lines():
    print("pipeline warnings:")
    for line in result.report.warning_lines():
        print(f"  {line}")
