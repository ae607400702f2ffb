"""Deterministic layered hexagonal layout.

Skeleton nodes (course + association) are layered by longest-path depth and
placed as columns on a pointy-top axial hex lattice, spaced so every pair of
skeleton centers sits at least five hexagon side lengths apart. Each skeleton
node's prerequisite neighbors fill its first ring (6 cells) clockwise from the
east cell, then its second ring (12 cells): 18 cells per skeleton node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CyclicInput, RingOverflow
from .graph import DependencyGraph

SQRT3 = math.sqrt(3.0)

# Skeleton centers: layer L, within-layer position j -> axial (5L - 3j, 6j).
# Consecutive columns differ by 5 in q, within-column neighbors by (-3, +6);
# both keep every skeleton pair at hex distance >= 5, so the two rings around
# distinct skeleton nodes can never collide and pixel distance stays >= 5s.
_COL_Q_STEP = 5
_ROW_Q_STEP = -3
_ROW_R_STEP = 6

# Ring offsets in clockwise order starting at the east cell (y grows downward).
RING1 = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
RING2 = [
    (2, 0), (1, 1), (0, 2), (-1, 2), (-2, 2), (-2, 1),
    (-2, 0), (-1, -1), (0, -2), (1, -2), (2, -2), (2, -1),
]
RING_CAPACITY = len(RING1) + len(RING2)


def axial_to_pixel(q: int, r: int, side: float) -> tuple[float, float]:
    """Pointy-top axial coordinates to pixel center for hexagon side length s."""
    return (SQRT3 * side * (q + r / 2.0), 1.5 * side * r)


def hex_distance(a: tuple[int, int], b: tuple[int, int]) -> int:
    dq = a[0] - b[0]
    dr = a[1] - b[1]
    return (abs(dq) + abs(dr) + abs(dq + dr)) // 2


@dataclass(frozen=True)
class HexPlacement:
    q: int
    r: int
    x: float
    y: float
    layer: int | None  # None for prerequisite nodes


@dataclass
class LayoutPlacement:
    side: float
    cells: dict[str, HexPlacement]

    def to_layout_dict(self) -> dict[str, dict]:
        return {
            nid: {"q": p.q, "r": p.r, "x": p.x, "y": p.y, "layer": p.layer}
            for nid, p in self.cells.items()
        }


def layered_layout(graph: DependencyGraph) -> list[list[str]]:
    """Layers of skeleton node ids: layer(v) is the longest-path depth from
    the skeleton sources; within a layer, descending out-degree, name
    ascending on ties."""
    skeleton = set(graph.skeleton_ids())

    indeg = {
        nid: sum(1 for p in graph.predecessors(nid) if p in skeleton) for nid in skeleton
    }
    depth = {nid: 0 for nid in skeleton}
    queue = sorted(nid for nid in skeleton if indeg[nid] == 0)
    order: list[str] = []
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        order.append(u)
        for w in sorted(graph.successors(u)):
            if w not in skeleton:
                continue
            depth[w] = max(depth[w], depth[u] + 1)
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) != len(skeleton):
        raise CyclicInput("skeleton contains a cycle")

    layers: list[list[str]] = [[] for _ in range(max(depth.values(), default=-1) + 1)]
    for nid in skeleton:
        layers[depth[nid]].append(nid)

    def layer_key(nid: str):
        out_degree = sum(1 for w in graph.successors(nid) if w in skeleton)
        return (-out_degree, graph.nodes[nid].name)

    for layer in layers:
        layer.sort(key=layer_key)
    return layers


def hex_layout(layers: list[list[str]], graph: DependencyGraph, side: float) -> LayoutPlacement:
    """Place skeleton centers column by column and fill their rings with
    prerequisite neighbors.

    A prerequisite node shared by several skeleton nodes is placed once, in
    the rings of the skeleton node that comes first in layer order. Raises
    RingOverflow when a skeleton node has more than 18 prerequisite neighbors.
    """
    skeleton_in_layer_order = [nid for layer in layers for nid in layer]
    for nid in skeleton_in_layer_order:
        count = len(graph.prerequisite_neighbors(nid))
        if count > RING_CAPACITY:
            raise RingOverflow(nid, count)

    cells: dict[str, HexPlacement] = {}
    occupied: set[tuple[int, int]] = set()

    centers: dict[str, tuple[int, int]] = {}
    for layer_index, layer in enumerate(layers):
        for j, nid in enumerate(layer):
            q = _COL_Q_STEP * layer_index + _ROW_Q_STEP * j
            r = _ROW_R_STEP * j
            centers[nid] = (q, r)
            x, y = axial_to_pixel(q, r, side)
            cells[nid] = HexPlacement(q=q, r=r, x=x, y=y, layer=layer_index)
            occupied.add((q, r))

    for layer_index, layer in enumerate(layers):
        for nid in layer:
            cq, cr = centers[nid]
            ring_cells = iter(RING1 + RING2)
            for prereq_id in graph.prerequisite_neighbors(nid):
                if prereq_id in cells:
                    continue  # shared prerequisite already owned by an earlier node
                dq, dr = next(ring_cells)
                q, r = cq + dq, cr + dr
                if (q, r) in occupied:
                    raise AssertionError(f"hex cell collision at {(q, r)}")
                occupied.add((q, r))
                x, y = axial_to_pixel(q, r, side)
                cells[prereq_id] = HexPlacement(q=q, r=r, x=x, y=y, layer=None)

    return LayoutPlacement(side=side, cells=cells)


def place_graph(graph: DependencyGraph, side: float) -> tuple[list[list[str]], LayoutPlacement]:
    layers = layered_layout(graph)
    return layers, hex_layout(layers, graph, side)
