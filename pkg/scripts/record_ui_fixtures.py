#!/usr/bin/env python3
"""Record API responses as fixtures for the web client's test suite.

Boots the service in-process with the mock adapters, uploads the fixture
course, seeds a small cohort of feedback, and freezes the JSON replies the
UI tests render from:

    python scripts/record_ui_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from fixture_course import ADAPTER_DIR, FIXTURE_DIR, build_course_deck

from coursegraph.adapters import make_adapters
from coursegraph.framestream import dump_frame_stream
from coursegraph.graph import node_id_for
from coursegraph.service import ServiceConfig, create_app

OUT_DIR = ROOT / "frontend" / "tests" / "fixtures"


def main() -> None:
    app = create_app(ServiceConfig(adapters=make_adapters(f"mock:{ADAPTER_DIR}"), workers=0))
    client = TestClient(app)

    def session(pseudonym, role):
        reply = client.post("/auth/session", json={"pseudonym": pseudonym, "role": role})
        return {"Authorization": f"Bearer {reply.json()['token']}"}

    instructor = session("prof", "instructor")
    chapters = (FIXTURE_DIR / "chapters.json").read_text()
    video_id = client.post(
        "/videos",
        headers=instructor,
        files={"stream": ("c.tscf", dump_frame_stream(build_course_deck()), "application/octet-stream")},
        data={"chapters": chapters, "title": "Fixture Course"},
    ).json()["video_id"]

    # a small cohort: three students watching, commenting and marking
    for index, who in enumerate(["anon-ada", "anon-bob", "anon-cleo"]):
        student = session(who, "student")
        base = 100 * index
        client.post(
            f"/videos/{video_id}/feedback",
            headers=student,
            json={
                "events": [
                    {"kind": "play", "video_second": 0,
                     "wall_time": f"2025-03-01T09:{index:02d}:00Z"},
                    {"kind": "rate", "video_second": 140 + base, "rate": 1.5,
                     "wall_time": f"2025-03-01T09:{index:02d}:40Z"},
                    {"kind": "pause", "video_second": 150 + base,
                     "wall_time": f"2025-03-01T09:{index:02d}:50Z"},
                ],
                "comments": [
                    {"video_second": 140 + base, "body": f"question from {who}"},
                    {"video_second": 40 + 10 * index, "body": f"note from {who}"},
                ],
                "markings": [
                    {"concept_id": node_id_for("Max-Flow"), "score": 3 - index},
                    {"concept_id": node_id_for("Set Theory"), "score": index},
                ],
            },
        )

    ada = session("anon-ada", "student")

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    fixtures = {
        "video.json": client.get(f"/videos/{video_id}", headers=instructor).json(),
        "graph_global.json": client.get(f"/videos/{video_id}/graph", headers=instructor).json(),
        "graph_student_ch3.json": client.get(
            f"/videos/{video_id}/graph",
            params={"scope": "chapter", "chapter": "ch3"},
            headers=ada,
        ).json(),
        "dashboard.json": client.get(f"/videos/{video_id}/dashboard", headers=instructor).json(),
        "dashboard_range.json": client.get(
            f"/videos/{video_id}/dashboard",
            params={"from": 130, "to": 320},
            headers=instructor,
        ).json(),
        "comments_student.json": client.get(
            f"/videos/{video_id}/comments", headers=ada
        ).json(),
    }
    for name, payload in fixtures.items():
        (OUT_DIR / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {name}")


if __name__ == "__main__":
    main()
