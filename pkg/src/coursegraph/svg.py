"""SVG export of a laid-out dependency graph.

One pointy-top hexagon per node at its layout position, purple for skeleton
nodes and gray for prerequisites, and an arrow per skeleton-to-skeleton edge.
Output is deterministic: sorted iteration and fixed-precision coordinates.
"""

from __future__ import annotations

import math

from .errors import MissingLayout

SKELETON_FILL = "#C39EFF"  # rgb(195, 158, 255)
PREREQUISITE_FILL = "#888888"  # rgb(136, 136, 136)
EDGE_STROKE = "#555555"
DEFAULT_SIDE = 20.0
MARGIN = 40.0

# vertex at the top first, then clockwise (SVG y grows downward)
_VERTEX_ANGLES = [math.radians(60.0 * k - 90.0) for k in range(6)]


def _fmt(value: float) -> str:
    text = f"{value:.3f}"
    return "0.000" if text == "-0.000" else text


def _hexagon_points(x: float, y: float, side: float) -> str:
    return " ".join(
        f"{_fmt(x + side * math.cos(a))},{_fmt(y + side * math.sin(a))}"
        for a in _VERTEX_ANGLES
    )


def render_svg(doc: dict) -> str:
    """Render an exported graph document (see graph_to_dict) to an SVG string.

    Raises MissingLayout when the document has no layout section.
    """
    layout = doc.get("layout") or {}
    if not layout:
        raise MissingLayout("graph document has no layout section")
    nodes = {entry["id"]: entry for entry in doc["nodes"]}
    missing = sorted(set(nodes) - set(layout))
    if missing:
        raise MissingLayout(f"layout missing nodes: {', '.join(missing)}")

    side = float(doc.get("hex_side", DEFAULT_SIDE))
    xs = [cell["x"] for cell in layout.values()]
    ys = [cell["y"] for cell in layout.values()]
    min_x, max_x = min(xs) - side - MARGIN, max(xs) + side + MARGIN
    min_y, max_y = min(ys) - side - MARGIN, max(ys) + side + MARGIN

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(min_x)} {_fmt(min_y)}'
        f' {_fmt(max_x - min_x)} {_fmt(max_y - min_y)}">',
        "  <defs>",
        '    <marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7"'
        ' markerHeight="7" orient="auto-start-reverse">',
        f'      <path d="M 0 0 L 10 5 L 0 10 z" fill="{EDGE_STROKE}"/>',
        "    </marker>",
        "  </defs>",
    ]

    skeleton_ids = {nid for nid, n in nodes.items() if n["kind"] in ("course", "association")}
    for u, v in sorted(map(tuple, doc.get("edges", []))):
        if u not in skeleton_ids or v not in skeleton_ids:
            continue
        ax, ay = layout[u]["x"], layout[u]["y"]
        bx, by = layout[v]["x"], layout[v]["y"]
        length = math.hypot(bx - ax, by - ay) or 1.0
        # trim both ends so arrows start and stop at the hexagon boundary
        ux, uy = (bx - ax) / length, (by - ay) / length
        x1, y1 = ax + ux * side, ay + uy * side
        x2, y2 = bx - ux * side * 1.25, by - uy * side * 1.25
        lines.append(
            f'  <line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"'
            f' stroke="{EDGE_STROKE}" stroke-width="2" marker-end="url(#arrow)"/>'
        )

    for nid in sorted(layout):
        cell = layout[nid]
        node = nodes.get(nid)
        if node is None:
            continue
        fill = SKELETON_FILL if nid in skeleton_ids else PREREQUISITE_FILL
        title = node["name"].replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        lines.append(
            f'  <polygon points="{_hexagon_points(cell["x"], cell["y"], side)}"'
            f' fill="{fill}" stroke="#333333" stroke-width="1"><title>{title}</title></polygon>'
        )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
