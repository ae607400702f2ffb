"""Lecture-video to prerequisite-knowledge-graph engine with a three-channel
student feedback store and instructor aggregation API."""

from .adapters import (
    AdapterSet,
    ConceptExtractorAdapter,
    ConceptReply,
    EncyclopediaAdapter,
    MockConceptExtractor,
    MockEncyclopedia,
    MockOcr,
    OcrAdapter,
    Quiz,
    make_adapters,
)
from .chapters import ChapterAnnotation, ChapterTextBundle, chapter_for_time, validate_chapters
from .errors import CourseGraphError
from .feedback import (
    ConceptAggregate,
    FeedbackEvent,
    FeedbackStore,
    Marking,
    TimelineAggregate,
)
from .framestream import FrameSequence, dump_frame_stream, load_frame_stream, write_frame_stream
from .graph import (
    ConceptNode,
    DependencyGraph,
    NodeKind,
    build_dag,
    chapter_subgraph,
    dump_graph_json,
    graph_from_dict,
    graph_to_dict,
    transitive_reduce,
)
from .keyframes import (
    DiffSeries,
    Keyframe,
    dedup_keyframes,
    detect_local_maxima,
    extract_keyframes,
    frame_difference_series,
    ocr_keyframes,
    smooth_hanning,
)
from .layout import LayoutPlacement, hex_layout, layered_layout, place_graph
from .pipeline import EngineConfig, PipelineResult, run_pipeline
from .svg import render_svg

__version__ = "0.1.0"

__all__ = [
    "AdapterSet",
    "ChapterAnnotation",
    "ChapterTextBundle",
    "ConceptAggregate",
    "ConceptExtractorAdapter",
    "ConceptNode",
    "ConceptReply",
    "CourseGraphError",
    "DependencyGraph",
    "DiffSeries",
    "EncyclopediaAdapter",
    "EngineConfig",
    "FeedbackEvent",
    "FeedbackStore",
    "FrameSequence",
    "Keyframe",
    "LayoutPlacement",
    "Marking",
    "MockConceptExtractor",
    "MockEncyclopedia",
    "MockOcr",
    "NodeKind",
    "OcrAdapter",
    "PipelineResult",
    "Quiz",
    "TimelineAggregate",
    "build_dag",
    "chapter_for_time",
    "chapter_subgraph",
    "dedup_keyframes",
    "detect_local_maxima",
    "dump_frame_stream",
    "dump_graph_json",
    "extract_keyframes",
    "frame_difference_series",
    "graph_from_dict",
    "graph_to_dict",
    "hex_layout",
    "layered_layout",
    "load_frame_stream",
    "make_adapters",
    "ocr_keyframes",
    "place_graph",
    "render_svg",
    "run_pipeline",
    "smooth_hanning",
    "transitive_reduce",
    "validate_chapters",
    "write_frame_stream",
]
