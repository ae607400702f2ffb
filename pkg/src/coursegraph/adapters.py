"""Adapter protocols for OCR, concept extraction and encyclopedia lookup,
plus the file-backed mocks and the HTTP / subprocess transports.

The engine core never talks to a live OCR model, LLM or wiki directly; it
only sees these three small protocols, so the whole pipeline runs offline
against fixture tables.

Wire formats
------------
OCR: request body is a PNG-encoded keyframe, response is a JSON array of
UTF-8 text lines. Transport is HTTP (``POST {base}/ocr``) or a local
subprocess reading the PNG from stdin and printing the JSON array.

Extractor and encyclopedia: ``POST {base}/extractor`` / ``POST
{base}/encyclopedia`` with a JSON object ``{"op": ..., ...}``; the response
carries a single ``"result"`` key. Ops mirror the protocol methods below.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np
from PIL import Image

from .errors import AdapterUnavailable, MalformedAdapterReply

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Quiz:
    question: str
    answer: str
    explanation: str

    def to_dict(self) -> dict:
        return {"question": self.question, "answer": self.answer, "explanation": self.explanation}


@dataclass(frozen=True)
class ConceptReply:
    """Pass-2 extractor reply: concept names plus (prerequisite, dependent) pairs."""

    concepts: list[str]
    edges: list[tuple[str, str]]


def encode_png(bitmap: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(bitmap, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def decode_png(png: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(png)) as img:
        return np.asarray(img.convert("L"))


def pixel_digest(bitmap: np.ndarray) -> str:
    """Content hash of the raw pixels; stable across PNG encoder versions."""
    h = hashlib.sha256()
    h.update(f"{bitmap.shape[0]}x{bitmap.shape[1]}:".encode())
    h.update(np.ascontiguousarray(bitmap, dtype=np.uint8).tobytes())
    return h.hexdigest()


@runtime_checkable
class OcrAdapter(Protocol):
    def recognize(self, png: bytes) -> list[str]: ...


@runtime_checkable
class ConceptExtractorAdapter(Protocol):
    def subtopics(self, chapter_id: str, chapter_title: str, texts: list[str]) -> list[str]: ...

    def concepts(
        self, chapter_id: str, chapter_title: str, subtopics: list[str], texts: list[str]
    ) -> ConceptReply: ...

    def canonical_name(self, variants: list[str], title: str) -> str: ...

    def associations(self, concept_name: str) -> list[str]: ...

    def simplify(self, concept_name: str, intro: str) -> str: ...

    def quiz(self, concept_name: str, definition: str) -> Quiz | None: ...

    def prerequisites(self, concept_name: str, definition: str) -> list[str]: ...


@runtime_checkable
class EncyclopediaAdapter(Protocol):
    def lookup_title(self, name: str) -> str | None: ...

    def intro(self, title: str) -> str | None: ...


@dataclass
class AdapterSet:
    ocr: OcrAdapter
    extractor: ConceptExtractorAdapter
    encyclopedia: EncyclopediaAdapter


def _norm(name: str) -> str:
    return " ".join(name.split()).casefold()


# --- file-backed mocks ------------------------------------------------------

class MockOcr:
    """OCR mock keyed by pixel digest; unknown frames get a deterministic
    placeholder line so the mock is total."""

    def __init__(self, fixture_dir: str | Path):
        self.table: dict[str, list[str]] = _load_table(fixture_dir, "ocr.json")

    def recognize(self, png: bytes) -> list[str]:
        digest = pixel_digest(decode_png(png))
        return list(self.table.get(digest, [f"slide {digest[:12]}"]))


class MockConceptExtractor:
    """Concept extractor backed by plain JSON tables in a fixture directory.

    Tables: subtopics.json and concepts.json keyed by chapter id;
    associations.json, simplify.json, quizzes.json and hidden.json keyed by
    normalized concept name; canonical.json keyed by encyclopedia title.
    Missing keys fall back to deterministic defaults.
    """

    def __init__(self, fixture_dir: str | Path):
        d = Path(fixture_dir)
        self._subtopics = _load_table(d, "subtopics.json")
        self._concepts = _load_table(d, "concepts.json")
        self._canonical = _load_table(d, "canonical.json")
        self._associations = _load_table(d, "associations.json")
        self._simplify = _load_table(d, "simplify.json")
        self._quizzes = _load_table(d, "quizzes.json")
        self._hidden = _load_table(d, "hidden.json")

    def subtopics(self, chapter_id: str, chapter_title: str, texts: list[str]) -> list[str]:
        return list(self._subtopics.get(chapter_id, []))

    def concepts(
        self, chapter_id: str, chapter_title: str, subtopics: list[str], texts: list[str]
    ) -> ConceptReply:
        entry = self._concepts.get(chapter_id, {"concepts": [], "edges": []})
        return parse_concept_reply(entry)

    def canonical_name(self, variants: list[str], title: str) -> str:
        if title in self._canonical:
            return str(self._canonical[title])
        return sorted(variants)[0]

    def associations(self, concept_name: str) -> list[str]:
        return list(self._associations.get(_norm(concept_name), [f"{concept_name} basics"]))

    def simplify(self, concept_name: str, intro: str) -> str:
        return str(self._simplify.get(_norm(concept_name), intro))

    def quiz(self, concept_name: str, definition: str) -> Quiz | None:
        entry = self._quizzes.get(_norm(concept_name))
        if entry is None:
            return None
        return parse_quiz(entry)

    def prerequisites(self, concept_name: str, definition: str) -> list[str]:
        return list(self._hidden.get(_norm(concept_name), []))


class MockEncyclopedia:
    """Encyclopedia mock: titles.json maps normalized query names to canonical
    titles, intros.json maps titles to introductory text."""

    def __init__(self, fixture_dir: str | Path):
        d = Path(fixture_dir)
        self._titles = _load_table(d, "titles.json")
        self._intros = _load_table(d, "intros.json")

    def lookup_title(self, name: str) -> str | None:
        title = self._titles.get(_norm(name))
        return str(title) if title is not None else None

    def intro(self, title: str) -> str | None:
        intro = self._intros.get(title)
        return str(intro) if intro is not None else None


def _load_table(fixture_dir: str | Path, filename: str) -> dict:
    path = Path(fixture_dir) / filename
    if not path.exists():
        return {}
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedAdapterReply(f"{path}: {exc}") from exc


def parse_quiz(entry: dict) -> Quiz:
    try:
        return Quiz(
            question=str(entry["question"]),
            answer=str(entry["answer"]),
            explanation=str(entry["explanation"]),
        )
    except (KeyError, TypeError) as exc:
        raise MalformedAdapterReply(f"quiz reply missing field: {exc}") from exc


def parse_concept_reply(entry: dict) -> ConceptReply:
    try:
        concepts = [str(c) for c in entry["concepts"]]
        edges = [(str(u), str(v)) for u, v in entry["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedAdapterReply(f"concept reply failed schema validation: {exc}") from exc
    return ConceptReply(concepts=concepts, edges=edges)


# --- HTTP transports --------------------------------------------------------

class HttpOcr:
    def __init__(self, base_url: str, timeout: float = 30.0):
        self.url = base_url.rstrip("/") + "/ocr"
        self.timeout = timeout

    def recognize(self, png: bytes) -> list[str]:
        reply = _http_post_raw(self.url, png, "image/png", self.timeout)
        if not isinstance(reply, list) or not all(isinstance(x, str) for x in reply):
            raise MalformedAdapterReply("OCR reply must be a JSON array of strings")
        return reply


class _HttpJsonRpc:
    def __init__(self, url: str, timeout: float):
        self.url = url
        self.timeout = timeout

    def call(self, op: str, **params):
        payload = json.dumps({"op": op, **params}).encode("utf-8")
        reply = _http_post_raw(self.url, payload, "application/json", self.timeout)
        if not isinstance(reply, dict) or "result" not in reply:
            raise MalformedAdapterReply(f"{op}: reply missing 'result'")
        return reply["result"]


class HttpConceptExtractor:
    def __init__(self, base_url: str, timeout: float = 120.0):
        self._rpc = _HttpJsonRpc(base_url.rstrip("/") + "/extractor", timeout)

    def subtopics(self, chapter_id: str, chapter_title: str, texts: list[str]) -> list[str]:
        result = self._rpc.call(
            "subtopics", chapter_id=chapter_id, chapter_title=chapter_title, texts=texts
        )
        return [str(s) for s in result]

    def concepts(
        self, chapter_id: str, chapter_title: str, subtopics: list[str], texts: list[str]
    ) -> ConceptReply:
        result = self._rpc.call(
            "concepts",
            chapter_id=chapter_id,
            chapter_title=chapter_title,
            subtopics=subtopics,
            texts=texts,
        )
        return parse_concept_reply(result)

    def canonical_name(self, variants: list[str], title: str) -> str:
        return str(self._rpc.call("canonical_name", variants=variants, title=title))

    def associations(self, concept_name: str) -> list[str]:
        return [str(s) for s in self._rpc.call("associations", concept_name=concept_name)]

    def simplify(self, concept_name: str, intro: str) -> str:
        return str(self._rpc.call("simplify", concept_name=concept_name, intro=intro))

    def quiz(self, concept_name: str, definition: str) -> Quiz | None:
        result = self._rpc.call("quiz", concept_name=concept_name, definition=definition)
        return None if result is None else parse_quiz(result)

    def prerequisites(self, concept_name: str, definition: str) -> list[str]:
        result = self._rpc.call("prerequisites", concept_name=concept_name, definition=definition)
        return [str(s) for s in result]


class HttpEncyclopedia:
    def __init__(self, base_url: str, timeout: float = 30.0):
        self._rpc = _HttpJsonRpc(base_url.rstrip("/") + "/encyclopedia", timeout)

    def lookup_title(self, name: str) -> str | None:
        result = self._rpc.call("lookup_title", name=name)
        return None if result is None else str(result)

    def intro(self, title: str) -> str | None:
        result = self._rpc.call("intro", title=title)
        return None if result is None else str(result)


def _http_post_raw(url: str, body: bytes, content_type: str, timeout: float):
    import httpx

    try:
        response = httpx.post(
            url, content=body, headers={"content-type": content_type}, timeout=timeout
        )
    except httpx.HTTPError as exc:
        raise AdapterUnavailable(f"{url}: {exc}") from exc
    if response.status_code >= 500:
        raise AdapterUnavailable(f"{url}: HTTP {response.status_code}")
    if response.status_code >= 400:
        raise MalformedAdapterReply(f"{url}: HTTP {response.status_code}")
    try:
        return response.json()
    except ValueError as exc:
        raise MalformedAdapterReply(f"{url}: reply is not JSON") from exc


# --- subprocess OCR ---------------------------------------------------------

class SubprocessOcr:
    """Runs one OCR process per keyframe: PNG on stdin, JSON array on stdout."""

    def __init__(self, argv: list[str], timeout: float = 60.0):
        self.argv = list(argv)
        self.timeout = timeout

    def recognize(self, png: bytes) -> list[str]:
        try:
            proc = subprocess.run(
                self.argv, input=png, capture_output=True, timeout=self.timeout, check=True
            )
        except (OSError, subprocess.SubprocessError) as exc:
            raise AdapterUnavailable(f"ocr subprocess failed: {exc}") from exc
        try:
            reply = json.loads(proc.stdout.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise MalformedAdapterReply(f"ocr subprocess output is not JSON: {exc}") from exc
        if not isinstance(reply, list) or not all(isinstance(x, str) for x in reply):
            raise MalformedAdapterReply("ocr subprocess must print a JSON array of strings")
        return reply


def make_adapters(spec: str) -> AdapterSet:
    """Build the adapter set from a config string.

    ``mock:<fixture-dir>`` wires all three adapters to fixture tables;
    ``http://host[:port]`` (or https) wires them to the JSON-over-HTTP
    endpoints under that base URL.
    """
    if spec.startswith("mock:"):
        fixture_dir = spec[len("mock:"):]
        return AdapterSet(
            ocr=MockOcr(fixture_dir),
            extractor=MockConceptExtractor(fixture_dir),
            encyclopedia=MockEncyclopedia(fixture_dir),
        )
    if spec.startswith("http://") or spec.startswith("https://"):
        return AdapterSet(
            ocr=HttpOcr(spec),
            extractor=HttpConceptExtractor(spec),
            encyclopedia=HttpEncyclopedia(spec),
        )
    raise ValueError(f"adapter spec must be 'mock:<dir>' or an http(s) URL, got {spec!r}")
