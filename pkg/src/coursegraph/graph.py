"""Prerequisite dependency graph: nodes, acyclic edge insertion, transitive
reduction, chapter subgraphs, and the canonical JSON export.

An edge (u, v) means "u is a prerequisite of v". The graph is acyclic at all
times; cycle-creating insertions are rejected, never repaired after the fact.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable

from .adapters import Quiz
from .errors import CyclicInput, UnknownChapter


class NodeKind(str, Enum):
    COURSE = "course"
    ASSOCIATION = "association"
    PREREQUISITE = "prerequisite"


SKELETON_KINDS = (NodeKind.COURSE, NodeKind.ASSOCIATION)


def normalize_name(name: str) -> str:
    """Concept identity: case-insensitive, whitespace-normalized."""
    return " ".join(name.split()).casefold()


def node_id_for(name: str) -> str:
    """Stable opaque id derived from the canonical name."""
    return hashlib.sha1(normalize_name(name).encode("utf-8")).hexdigest()[:12]


@dataclass
class ConceptNode:
    node_id: str
    name: str
    kind: NodeKind
    definition: str = ""
    quiz: Quiz | None = None
    source_chapters: set[str] = field(default_factory=set)

    @classmethod
    def create(cls, name: str, kind: NodeKind, chapters: Iterable[str] = ()) -> "ConceptNode":
        return cls(node_id=node_id_for(name), name=name, kind=kind, source_chapters=set(chapters))

    def is_skeleton(self) -> bool:
        return self.kind in SKELETON_KINDS


@dataclass(frozen=True)
class RejectedEdge:
    source: str
    target: str
    reason: str  # "self-loop" or "cycle"


class DependencyGraph:
    """Directed acyclic graph over ConceptNodes with id-keyed adjacency."""

    def __init__(self) -> None:
        self.nodes: dict[str, ConceptNode] = {}
        self._succ: dict[str, set[str]] = {}
        self._pred: dict[str, set[str]] = {}

    # -- construction --------------------------------------------------

    def add_node(self, node: ConceptNode) -> ConceptNode:
        existing = self.nodes.get(node.node_id)
        if existing is not None:
            existing.source_chapters |= node.source_chapters
            return existing
        self.nodes[node.node_id] = node
        self._succ[node.node_id] = set()
        self._pred[node.node_id] = set()
        return node

    def find_by_name(self, name: str) -> ConceptNode | None:
        return self.nodes.get(node_id_for(name))

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._succ.get(u, ())

    def try_add_edge(self, u: str, v: str) -> RejectedEdge | None:
        """Insert edge u -> v unless it is a self-loop or would close a cycle.

        Duplicate edges are dropped silently. Returns the rejection, if any.
        """
        if u not in self.nodes or v not in self.nodes:
            raise KeyError(f"edge references unknown node: {u} -> {v}")
        if u == v:
            return RejectedEdge(u, v, "self-loop")
        if self.has_edge(u, v):
            return None
        if self.is_reachable(v, u):
            return RejectedEdge(u, v, "cycle")
        self._succ[u].add(v)
        self._pred[v].add(u)
        return None

    def remove_edge(self, u: str, v: str) -> None:
        self._succ[u].discard(v)
        self._pred[v].discard(u)

    # -- queries --------------------------------------------------------

    def successors(self, u: str) -> set[str]:
        return set(self._succ[u])

    def predecessors(self, v: str) -> set[str]:
        return set(self._pred[v])

    def edges(self) -> list[tuple[str, str]]:
        return sorted((u, v) for u, vs in self._succ.items() for v in vs)

    def edge_count(self) -> int:
        return sum(len(vs) for vs in self._succ.values())

    def degree(self, u: str) -> int:
        return len(self._succ[u]) + len(self._pred[u])

    def is_reachable(self, src: str, dst: str) -> bool:
        if src == dst:
            return True
        seen = {src}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in self._succ[u]:
                if w == dst:
                    return True
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return False

    def ancestors(self, seeds: Iterable[str]) -> set[str]:
        """All nodes from which any seed is reachable (prerequisite closure)."""
        result: set[str] = set()
        queue = deque(seeds)
        while queue:
            u = queue.popleft()
            for p in self._pred[u]:
                if p not in result:
                    result.add(p)
                    queue.append(p)
        return result

    def topological_order(self) -> list[str]:
        """Kahn's algorithm; raises CyclicInput if a cycle survives."""
        indeg = {u: len(self._pred[u]) for u in self.nodes}
        queue = deque(sorted(u for u, d in indeg.items() if d == 0))
        order: list[str] = []
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(self._succ[u]):
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        if len(order) != len(self.nodes):
            raise CyclicInput("graph contains a cycle")
        return order

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
            return True
        except CyclicInput:
            return False

    def skeleton_ids(self) -> list[str]:
        return [nid for nid, n in self.nodes.items() if n.is_skeleton()]

    def prerequisite_neighbors(self, skeleton_id: str) -> list[str]:
        """Direct Prerequisite-kind predecessors, name-sorted."""
        ids = [
            p for p in self._pred[skeleton_id]
            if self.nodes[p].kind is NodeKind.PREREQUISITE
        ]
        return sorted(ids, key=lambda nid: self.nodes[nid].name)

    def copy(self) -> "DependencyGraph":
        g = DependencyGraph()
        for node in self.nodes.values():
            g.add_node(replace(node, source_chapters=set(node.source_chapters)))
        for u, vs in self._succ.items():
            for v in vs:
                g._succ[u].add(v)
                g._pred[v].add(u)
        return g


def build_dag(
    nodes: Iterable[ConceptNode], proposed_edges: Iterable[tuple[str, str]]
) -> tuple[DependencyGraph, list[RejectedEdge]]:
    """Insert edges in deterministic (u.name, v.name) order, rejecting
    self-loops and cycle-creating edges. Rejections are warnings, not errors."""
    graph = DependencyGraph()
    for node in nodes:
        graph.add_node(node)

    def sort_key(edge: tuple[str, str]):
        u, v = edge
        return (graph.nodes[u].name, graph.nodes[v].name)

    rejected: list[RejectedEdge] = []
    for u, v in sorted(set(proposed_edges), key=sort_key):
        rejection = graph.try_add_edge(u, v)
        if rejection is not None:
            rejected.append(rejection)
    return graph, rejected


def transitive_reduce(graph: DependencyGraph) -> DependencyGraph:
    """Unique minimal DAG with the same reachability relation.

    An edge (u, v) is dropped iff v is reachable from u through some other
    successor of u, i.e. by a path of length >= 2.
    """
    order = graph.topological_order()  # raises CyclicInput

    descendants: dict[str, set[str]] = {}
    for u in reversed(order):
        reach: set[str] = set()
        for w in graph._succ[u]:
            reach.add(w)
            reach |= descendants[w]
        descendants[u] = reach

    reduced = DependencyGraph()
    for node in graph.nodes.values():
        reduced.add_node(replace(node, source_chapters=set(node.source_chapters)))
    for u in graph.nodes:
        beyond_one_step: set[str] = set()
        for w in graph._succ[u]:
            beyond_one_step |= descendants[w]
        for v in graph._succ[u]:
            if v not in beyond_one_step:
                reduced._succ[u].add(v)
                reduced._pred[v].add(u)
    return reduced


def chapter_subgraph(
    graph: DependencyGraph,
    chapter_id: str,
    known_chapters: Iterable[str] | None = None,
) -> DependencyGraph:
    """Restrict the graph to one chapter: its course nodes, their full
    prerequisite closure, and the induced edges."""
    if known_chapters is not None:
        known = set(known_chapters)
    else:
        known = {ch for node in graph.nodes.values() for ch in node.source_chapters}
    if chapter_id not in known:
        raise UnknownChapter(f"unknown chapter {chapter_id!r}")

    seeds = {
        nid
        for nid, node in graph.nodes.items()
        if node.kind is NodeKind.COURSE and chapter_id in node.source_chapters
    }
    retained = seeds | graph.ancestors(seeds)

    sub = DependencyGraph()
    for nid in graph.nodes:
        if nid in retained:
            node = graph.nodes[nid]
            sub.add_node(replace(node, source_chapters=set(node.source_chapters)))
    for u, v in graph.edges():
        if u in retained and v in retained:
            sub.try_add_edge(u, v)
    return sub


# --- canonical JSON export --------------------------------------------------

def graph_to_dict(
    graph: DependencyGraph,
    layout: dict[str, dict] | None = None,
    hex_side: float | None = None,
) -> dict:
    nodes = [
        {
            "id": node.node_id,
            "name": node.name,
            "kind": node.kind.value,
            "definition": node.definition,
            "quiz": node.quiz.to_dict() if node.quiz else None,
            "chapters": sorted(node.source_chapters),
        }
        for node in sorted(graph.nodes.values(), key=lambda n: n.node_id)
    ]
    doc: dict = {
        "nodes": nodes,
        "edges": [[u, v] for u, v in graph.edges()],
        "layout": layout or {},
    }
    if hex_side is not None:
        doc["hex_side"] = hex_side
    return doc


def dump_graph_json(doc: dict) -> bytes:
    """Canonical bytes: sorted keys, two-space indent, trailing newline."""
    return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def graph_from_dict(doc: dict) -> DependencyGraph:
    graph = DependencyGraph()
    for entry in doc["nodes"]:
        quiz = entry.get("quiz")
        graph.add_node(
            ConceptNode(
                node_id=entry["id"],
                name=entry["name"],
                kind=NodeKind(entry["kind"]),
                definition=entry.get("definition") or "",
                quiz=Quiz(**quiz) if quiz else None,
                source_chapters=set(entry.get("chapters", [])),
            )
        )
    for u, v in doc["edges"]:
        rejection = graph.try_add_edge(u, v)
        if rejection is not None:
            raise CyclicInput(f"stored graph is not acyclic at {u} -> {v}")
    return graph


def chapter_scope_dict(doc: dict, chapter_id: str, known_chapters: Iterable[str] | None = None) -> dict:
    """Chapter view over an exported graph document: chapter_subgraph plus the
    stored layout restricted to retained nodes."""
    graph = graph_from_dict(doc)
    sub = chapter_subgraph(graph, chapter_id, known_chapters=known_chapters)
    layout = {nid: cell for nid, cell in doc.get("layout", {}).items() if nid in sub.nodes}
    return graph_to_dict(sub, layout=layout, hex_side=doc.get("hex_side"))
