from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixture_course import ADAPTER_DIR, build_course_deck, course_chapters

from coursegraph.adapters import AdapterSet, MockConceptExtractor, MockEncyclopedia, MockOcr
from coursegraph.feedback import FeedbackStore


@pytest.fixture(scope="session")
def course_deck():
    return build_course_deck()


@pytest.fixture(scope="session")
def chapters():
    return course_chapters()


@pytest.fixture(scope="session")
def mock_adapters() -> AdapterSet:
    return AdapterSet(
        ocr=MockOcr(ADAPTER_DIR),
        extractor=MockConceptExtractor(ADAPTER_DIR),
        encyclopedia=MockEncyclopedia(ADAPTER_DIR),
    )


@pytest.fixture
def store():
    s = FeedbackStore(":memory:")
    yield s
    s.close()
