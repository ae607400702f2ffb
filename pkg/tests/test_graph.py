from __future__ import annotations

import random

import pytest

from coursegraph.errors import CyclicInput, UnknownChapter
from coursegraph.graph import (
    ConceptNode,
    DependencyGraph,
    NodeKind,
    build_dag,
    chapter_subgraph,
    dump_graph_json,
    graph_from_dict,
    graph_to_dict,
    node_id_for,
    normalize_name,
    transitive_reduce,
)

# --- independent oracles -----------------------------------------------------

def bfs_reachable(edges: set[tuple[str, str]], src: str, dst: str) -> bool:
    if src == dst:
        return True
    frontier = [src]
    seen = {src}
    while frontier:
        u = frontier.pop()
        for a, b in edges:
            if a == u and b not in seen:
                if b == dst:
                    return True
                seen.add(b)
                frontier.append(b)
    return False


def closure_matrix(names: list[str], edges: set[tuple[str, str]]) -> dict:
    """Floyd-Warshall transitive closure."""
    reach = {(a, b): (a == b or (a, b) in edges) for a in names for b in names}
    for k in names:
        for i in names:
            for j in names:
                if reach[(i, k)] and reach[(k, j)]:
                    reach[(i, j)] = True
    return reach


def brute_force_reduction(edges: set[tuple[str, str]]) -> set[tuple[str, str]]:
    """Minimal reduction of a DAG: drop (u, v) iff a length >= 2 path exists."""
    keep = set()
    for u, v in edges:
        if not bfs_reachable(edges - {(u, v)}, u, v):
            keep.add((u, v))
    return keep


def nodes_for(names: list[str]) -> list[ConceptNode]:
    return [ConceptNode.create(n, NodeKind.COURSE) for n in names]


def ids_for(names: list[str]) -> dict[str, str]:
    return {n: node_id_for(n) for n in names}


def name_edges_to_ids(edges, ids):
    return [(ids[u], ids[v]) for u, v in edges]


def random_dag(rng: random.Random, size: int, density: float) -> tuple[list[str], set]:
    names = [f"n{i:02d}" for i in range(size)]
    edges = set()
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < density:
                edges.add((names[i], names[j]))
    return names, edges


# --- normalization and ids ------------------------------------------------------

def test_name_normalization():
    assert normalize_name("  Max   Flow ") == "max flow"
    assert node_id_for("Max Flow") == node_id_for("max    flow")
    assert node_id_for("Max Flow") != node_id_for("Min Cut")


# --- build_dag --------------------------------------------------------------------

def test_cycle_edge_rejected_in_sorted_order():
    names = ["a", "b", "c"]
    ids = ids_for(names)
    graph, rejected = build_dag(
        nodes_for(names),
        name_edges_to_ids([("a", "b"), ("b", "c"), ("c", "a")], ids),
    )
    assert graph.is_acyclic()
    assert [(r.source, r.target, r.reason) for r in rejected] == [
        (ids["c"], ids["a"], "cycle")
    ]
    assert graph.edge_count() == 2


def test_self_loop_rejected():
    ids = ids_for(["a"])
    graph, rejected = build_dag(nodes_for(["a"]), [(ids["a"], ids["a"])])
    assert rejected[0].reason == "self-loop"
    assert graph.edge_count() == 0


def test_empty_edge_set_gives_isolated_nodes():
    graph, rejected = build_dag(nodes_for(["a", "b"]), [])
    assert rejected == []
    assert graph.edge_count() == 0
    assert len(graph.nodes) == 2


def test_duplicate_edges_collapse_without_rejection():
    ids = ids_for(["a", "b"])
    graph, rejected = build_dag(
        nodes_for(["a", "b"]), [(ids["a"], ids["b"]), (ids["a"], ids["b"])]
    )
    assert rejected == []
    assert graph.edge_count() == 1


def test_build_dag_rejections_match_reachability_oracle():
    rng = random.Random(99)
    for _ in range(150):
        size = rng.randint(2, 8)
        names = [f"n{i}" for i in range(size)]
        ids = ids_for(names)
        proposed = set()
        for _ in range(rng.randint(0, 14)):
            u, v = rng.sample(names, 2) if rng.random() > 0.1 else (names[0], names[0])
            proposed.add((u, v))

        graph, rejected = build_dag(nodes_for(names), name_edges_to_ids(proposed, ids))
        assert graph.is_acyclic()

        # oracle: replay insertion in the same (u.name, v.name) order
        accepted_oracle: set[tuple[str, str]] = set()
        rejected_oracle = []
        for u, v in sorted(proposed):
            if u == v:
                rejected_oracle.append((ids[u], ids[v], "self-loop"))
            elif bfs_reachable(accepted_oracle, v, u):
                rejected_oracle.append((ids[u], ids[v], "cycle"))
            else:
                accepted_oracle.add((u, v))
        assert [(r.source, r.target, r.reason) for r in rejected] == rejected_oracle
        assert graph.edge_count() == len(accepted_oracle)


# --- transitive reduction -----------------------------------------------------------

def test_reduction_drops_shortcut_edge():
    names = ["a", "b", "c"]
    ids = ids_for(names)
    graph, _ = build_dag(
        nodes_for(names), name_edges_to_ids([("a", "b"), ("b", "c"), ("a", "c")], ids)
    )
    reduced = transitive_reduce(graph)
    assert reduced.edges() == sorted(
        [(ids["a"], ids["b"]), (ids["b"], ids["c"])]
    )


def test_chain_already_reduced():
    names = ["a", "b", "c"]
    ids = ids_for(names)
    graph, _ = build_dag(nodes_for(names), name_edges_to_ids([("a", "b"), ("b", "c")], ids))
    assert transitive_reduce(graph).edges() == graph.edges()


def test_diamond_unchanged():
    names = ["a", "b", "c", "d"]
    ids = ids_for(names)
    edges = [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]
    graph, _ = build_dag(nodes_for(names), name_edges_to_ids(edges, ids))
    reduced = transitive_reduce(graph)
    assert set(reduced.edges()) == set(graph.edges())
    # oracle agrees nothing is redundant
    name_edges = set(edges)
    assert brute_force_reduction(name_edges) == name_edges


def test_cyclic_input_rejected():
    graph = DependencyGraph()
    for node in nodes_for(["a", "b"]):
        graph.add_node(node)
    ids = ids_for(["a", "b"])
    graph._succ[ids["a"]].add(ids["b"])
    graph._pred[ids["b"]].add(ids["a"])
    graph._succ[ids["b"]].add(ids["a"])
    graph._pred[ids["a"]].add(ids["b"])
    with pytest.raises(CyclicInput):
        transitive_reduce(graph)


def test_reduction_preserves_reachability_and_is_idempotent_and_minimal():
    rng = random.Random(4)
    for _ in range(120):
        names, name_edges = random_dag(rng, rng.randint(1, 9), rng.random() * 0.6)
        ids = ids_for(names)
        graph, rejected = build_dag(nodes_for(names), name_edges_to_ids(name_edges, ids))
        assert not rejected
        reduced = transitive_reduce(graph)

        name_of = {nid: name for name, nid in ids.items()}
        reduced_name_edges = {(name_of[a], name_of[b]) for a, b in reduced.edges()}
        assert closure_matrix(names, name_edges) == closure_matrix(names, reduced_name_edges)
        assert brute_force_reduction(name_edges) == reduced_name_edges

        twice = transitive_reduce(reduced)
        assert twice.edges() == reduced.edges()


# --- chapter subgraph -----------------------------------------------------------------

def build_tagged_graph():
    """Small fixture: ch1 = {a}, ch2 = {c}; edges a->b->c, p->a (prerequisite)."""
    a = ConceptNode.create("a", NodeKind.COURSE, {"ch1"})
    b = ConceptNode.create("b", NodeKind.COURSE, {"ch2"})
    c = ConceptNode.create("c", NodeKind.COURSE, {"ch2"})
    p = ConceptNode.create("p", NodeKind.PREREQUISITE)
    graph, _ = build_dag(
        [a, b, c, p],
        [
            (a.node_id, b.node_id),
            (b.node_id, c.node_id),
            (p.node_id, a.node_id),
        ],
    )
    return graph, a, b, c, p


def test_source_chapter_closure():
    graph, a, b, c, p = build_tagged_graph()
    sub = chapter_subgraph(graph, "ch1")
    assert set(sub.nodes) == {a.node_id, p.node_id}
    assert sub.edges() == [(p.node_id, a.node_id)]


def test_cross_chapter_prerequisite_retained():
    graph, a, b, c, p = build_tagged_graph()
    sub = chapter_subgraph(graph, "ch2")
    # ch2's course nodes depend on chapter-1's concept, which stays retained
    assert set(sub.nodes) == {a.node_id, b.node_id, c.node_id, p.node_id}
    assert sub.is_acyclic()


def test_unknown_chapter():
    graph, *_ = build_tagged_graph()
    with pytest.raises(UnknownChapter):
        chapter_subgraph(graph, "nope")
    # explicit chapter registry admits chapters with no tagged nodes
    empty = chapter_subgraph(graph, "ch9", known_chapters={"ch1", "ch2", "ch9"})
    assert len(empty.nodes) == 0


def test_random_tags_match_reverse_bfs_oracle():
    rng = random.Random(12)
    chapter_pool = ["c1", "c2", "c3"]
    for _ in range(120):
        names, name_edges = random_dag(rng, rng.randint(1, 9), rng.random() * 0.5)
        ids = ids_for(names)
        nodes = []
        for n in names:
            kind = NodeKind.PREREQUISITE if rng.random() < 0.25 else NodeKind.COURSE
            tags = {rng.choice(chapter_pool)} if kind is not NodeKind.PREREQUISITE else set()
            nodes.append(ConceptNode(node_id=ids[n], name=n, kind=kind, source_chapters=tags))
        graph, _ = build_dag(nodes, name_edges_to_ids(name_edges, ids))
        chapter = rng.choice(chapter_pool)

        try:
            sub = chapter_subgraph(graph, chapter)
        except UnknownChapter:
            assert all(
                chapter not in node.source_chapters for node in graph.nodes.values()
            )
            continue

        seeds = {
            n.node_id
            for n in graph.nodes.values()
            if n.kind is NodeKind.COURSE and chapter in n.source_chapters
        }
        expected = set(seeds)
        changed = True
        while changed:
            changed = False
            for u, v in graph.edges():
                if v in expected and u not in expected:
                    expected.add(u)
                    changed = True
        assert set(sub.nodes) == expected
        assert set(sub.edges()) == {
            (u, v) for u, v in graph.edges() if u in expected and v in expected
        }
        assert sub.is_acyclic()


# --- export round trip ---------------------------------------------------------------

def test_export_import_round_trip():
    graph, a, b, c, p = build_tagged_graph()
    doc = graph_to_dict(graph, layout={}, hex_side=20.0)
    blob = dump_graph_json(doc)
    assert dump_graph_json(graph_to_dict(graph, layout={}, hex_side=20.0)) == blob
    again = graph_from_dict(doc)
    assert set(again.nodes) == set(graph.nodes)
    assert again.edges() == graph.edges()
    assert again.nodes[a.node_id].source_chapters == {"ch1"}
    assert again.nodes[p.node_id].kind is NodeKind.PREREQUISITE
