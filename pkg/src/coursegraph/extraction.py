"""Concept graph construction from chapter text bundles.

Stages, in order: per-chapter two-pass extraction, global disambiguation and
merge, association attachment for isolated course nodes, definition and quiz
enrichment, hidden-prerequisite extraction from definitions, transitive
reduction. Chapter results are merged in chapter start-time order so
concurrent extraction stays deterministic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .adapters import (
    AdapterSet,
    ConceptExtractorAdapter,
    EncyclopediaAdapter,
)
from .chapters import ChapterAnnotation, ChapterTextBundle
from .errors import AdapterUnavailable, MalformedAdapterReply
from .graph import (
    ConceptNode,
    DependencyGraph,
    NodeKind,
    RejectedEdge,
    build_dag,
    node_id_for,
    normalize_name,
    transitive_reduce,
)

logger = logging.getLogger(__name__)


@dataclass
class ChapterConcepts:
    """Output of one chapter's two-pass extraction, tagged with its chapter."""

    chapter_id: str
    subtopics: list[str]
    concepts: list[str]
    edges: list[tuple[str, str]]  # (prerequisite name, dependent name)


@dataclass(frozen=True)
class EnrichmentWarning:
    node_id: str
    fieldname: str
    message: str


@dataclass
class BuildReport:
    rejected_edges: list[RejectedEdge] = field(default_factory=list)
    enrichment_warnings: list[EnrichmentWarning] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def warning_lines(self) -> list[str]:
        lines = [
            f"edge rejected ({r.reason}): {r.source} -> {r.target}" for r in self.rejected_edges
        ]
        lines += [f"enrichment: {w.node_id}.{w.fieldname}: {w.message}" for w in self.enrichment_warnings]
        lines += list(self.notes)
        return lines


def extract_chapter_concepts(
    bundle: ChapterTextBundle,
    chapter: ChapterAnnotation,
    extractor: ConceptExtractorAdapter,
) -> ChapterConcepts:
    """Two-pass protocol: subtopics first, then concepts with prerequisite
    dependencies given those subtopics. Edges must reference returned
    concepts only."""
    texts = [line for _, lines in bundle.keyframe_texts for line in lines]
    subtopics = extractor.subtopics(bundle.chapter_id, chapter.title, texts)
    reply = extractor.concepts(bundle.chapter_id, chapter.title, subtopics, texts)

    known = {normalize_name(c) for c in reply.concepts}
    for u, v in reply.edges:
        if normalize_name(u) not in known or normalize_name(v) not in known:
            raise MalformedAdapterReply(
                f"chapter {bundle.chapter_id}: edge ({u!r}, {v!r}) references an absent concept"
            )
    return ChapterConcepts(
        chapter_id=bundle.chapter_id,
        subtopics=list(subtopics),
        concepts=list(reply.concepts),
        edges=list(reply.edges),
    )


def disambiguate_and_merge(
    chapter_results: list[ChapterConcepts],
    encyclopedia: EncyclopediaAdapter,
    extractor: ConceptExtractorAdapter,
) -> tuple[DependencyGraph, BuildReport]:
    """Merge per-chapter concepts into the course-node skeleton.

    Identical canonical names merge directly; remaining variants that resolve
    to the same encyclopedia title are merged under the extractor's pick of a
    canonical name. Unavailable encyclopedia downgrades to exact-name merging
    with a warning.
    """
    report = BuildReport()

    # exact merge on normalized names; first occurrence keeps its display form
    display: dict[str, str] = {}
    chapters_of: dict[str, set[str]] = {}
    for result in chapter_results:
        for name in result.concepts:
            norm = normalize_name(name)
            display.setdefault(norm, name)
            chapters_of.setdefault(norm, set()).add(result.chapter_id)

    # encyclopedia-backed resolution of near-duplicates
    merged_into: dict[str, str] = {norm: norm for norm in display}
    try:
        by_title: dict[str, list[str]] = {}
        for norm in sorted(display):
            title = encyclopedia.lookup_title(display[norm])
            if title is not None:
                by_title.setdefault(title, []).append(norm)
        for title in sorted(by_title):
            variants = by_title[title]
            if len(variants) < 2:
                continue
            canonical = extractor.canonical_name(sorted(display[n] for n in variants), title)
            canon_norm = normalize_name(canonical)
            display.setdefault(canon_norm, canonical)
            chapters_of.setdefault(canon_norm, set())
            for norm in variants:
                merged_into[norm] = canon_norm
                chapters_of[canon_norm] |= chapters_of[norm]
    except AdapterUnavailable as exc:
        report.notes.append(f"encyclopedia unavailable, exact-name merge only: {exc}")
        logger.warning("encyclopedia unavailable, merging by exact name only: %s", exc)

    canonical_norms = sorted(set(merged_into.values()))
    nodes = [
        ConceptNode.create(display[norm], NodeKind.COURSE, chapters_of[norm])
        for norm in canonical_norms
    ]

    edges = []
    for result in chapter_results:
        for u, v in result.edges:
            cu = merged_into[normalize_name(u)]
            cv = merged_into[normalize_name(v)]
            edges.append((node_id_for(display[cu]), node_id_for(display[cv])))

    graph, rejected = build_dag(nodes, edges)
    report.rejected_edges.extend(rejected)
    return graph, report


def attach_association_nodes(
    graph: DependencyGraph, extractor: ConceptExtractorAdapter, report: BuildReport
) -> DependencyGraph:
    """Give every isolated course node (total degree zero after the merge) at
    least one association prerequisite."""
    isolated = sorted(
        (nid for nid in graph.nodes
         if graph.nodes[nid].kind is NodeKind.COURSE and graph.degree(nid) == 0),
        key=lambda nid: graph.nodes[nid].name,
    )
    for nid in isolated:
        names = extractor.associations(graph.nodes[nid].name)
        if not names:
            raise MalformedAdapterReply(
                f"extractor returned no associations for {graph.nodes[nid].name!r}"
            )
        for name in names:
            existing = graph.find_by_name(name)
            if existing is None:
                existing = graph.add_node(
                    ConceptNode.create(
                        name, NodeKind.ASSOCIATION, graph.nodes[nid].source_chapters
                    )
                )
            else:
                existing.source_chapters |= graph.nodes[nid].source_chapters
            rejection = graph.try_add_edge(existing.node_id, nid)
            if rejection is not None:
                report.rejected_edges.append(rejection)
    return graph


def enrich_definitions(
    graph: DependencyGraph,
    encyclopedia: EncyclopediaAdapter,
    extractor: ConceptExtractorAdapter,
    report: BuildReport,
    include_quizzes: bool = True,
) -> DependencyGraph:
    """Fill definitions (encyclopedia intro simplified by the extractor) for
    nodes that lack one, and quizzes for course and association nodes.

    Per-node failures leave the field empty and surface as warnings; the call
    itself never fails.
    """
    for nid in sorted(graph.nodes, key=lambda nid: graph.nodes[nid].name):
        node = graph.nodes[nid]
        if not node.definition:
            try:
                title = encyclopedia.lookup_title(node.name)
                intro = encyclopedia.intro(title) if title is not None else None
                if intro is None:
                    report.enrichment_warnings.append(
                        EnrichmentWarning(nid, "definition", "no encyclopedia entry")
                    )
                else:
                    node.definition = extractor.simplify(node.name, intro)
            except (AdapterUnavailable, MalformedAdapterReply) as exc:
                report.enrichment_warnings.append(EnrichmentWarning(nid, "definition", str(exc)))
        if include_quizzes and node.is_skeleton() and node.quiz is None:
            try:
                quiz = extractor.quiz(node.name, node.definition)
                if quiz is None:
                    report.enrichment_warnings.append(
                        EnrichmentWarning(nid, "quiz", "extractor returned no quiz")
                    )
                else:
                    node.quiz = quiz
            except (AdapterUnavailable, MalformedAdapterReply) as exc:
                report.enrichment_warnings.append(EnrichmentWarning(nid, "quiz", str(exc)))
    return graph


def extract_hidden_prerequisites(
    graph: DependencyGraph, extractor: ConceptExtractorAdapter, report: BuildReport
) -> DependencyGraph:
    """Extract prerequisite concepts from every skeleton node's definition.

    A name that already exists as any node gains an edge to the existing node
    instead of a duplicate; otherwise a new Prerequisite node is created.
    Cycle-closing proposals are rejected with a warning.
    """
    skeleton = sorted(graph.skeleton_ids(), key=lambda nid: graph.nodes[nid].name)
    for nid in skeleton:
        node = graph.nodes[nid]
        for name in extractor.prerequisites(node.name, node.definition):
            existing = graph.find_by_name(name)
            if existing is None:
                existing = graph.add_node(ConceptNode.create(name, NodeKind.PREREQUISITE))
            rejection = graph.try_add_edge(existing.node_id, nid)
            if rejection is not None:
                report.rejected_edges.append(rejection)
                logger.warning(
                    "hidden prerequisite edge rejected (%s): %s -> %s",
                    rejection.reason, existing.name, node.name,
                )
    return graph


def build_concept_graph(
    bundles: list[ChapterTextBundle],
    chapters: list[ChapterAnnotation],
    adapters: AdapterSet,
) -> tuple[DependencyGraph, BuildReport]:
    """Run every stage and return the reduced graph plus the build report."""
    by_id = {ch.chapter_id: ch for ch in chapters}
    ordered = sorted(
        (b for b in bundles if b.chapter_id in by_id),
        key=lambda b: by_id[b.chapter_id].start,
    )
    chapter_results = [
        extract_chapter_concepts(bundle, by_id[bundle.chapter_id], adapters.extractor)
        for bundle in ordered
    ]
    graph, report = disambiguate_and_merge(chapter_results, adapters.encyclopedia, adapters.extractor)
    graph = attach_association_nodes(graph, adapters.extractor, report)
    graph = enrich_definitions(graph, adapters.encyclopedia, adapters.extractor, report)
    graph = extract_hidden_prerequisites(graph, adapters.extractor, report)
    # second pass fills definitions of the freshly created prerequisite nodes
    graph = enrich_definitions(
        graph, adapters.encyclopedia, adapters.extractor, report, include_quizzes=False
    )
    graph = transitive_reduce(graph)
    return graph, report
