"""
Unit tests for report and plan rendering.
"""

import json

from app.core.models import (
    ALL_KINDS,
    AdjacencyPair,
    ConflictReport,
    Dichromacy,
    Relation,
    RemapEntry,
    RemapPlan,
    Srgb8,
)
from app.render.report import conflicts_to_json, conflicts_to_text, plan_to_json, plan_to_text

REPORT = ConflictReport(
    pair=AdjacencyPair("fg", "bg", Relation.TEXT_ON_BACKGROUND),
    de_normal=100.0,
    de_sim={Dichromacy.PROTANOPIA: 4.567},
    conflicting_kinds=(Dichromacy.PROTANOPIA,),
    severity=1.0,
)


def test_json_reals_rounded_to_two_places():
    text = conflicts_to_json([REPORT])
    data = json.loads(text)
    assert data[0]["de_normal"] == 100.0
    assert data[0]["de_sim"] == {"protan": 4.57}
    # JSON numbers keep their shortest form; the text table pads
    assert '"de_normal": 100.0,' in text
    assert text.endswith("]\n")


def test_text_table_pads_two_places():
    text = conflicts_to_text([REPORT], ALL_KINDS)
    lines = text.splitlines()
    assert lines[0].split() == [
        "a", "b", "relation", "dE", "normal", "dE", "protan", "dE", "deutan", "dE", "tritan", "conflicts", "severity",
    ]
    assert lines[2].split() == ["fg", "bg", "text-on-background", "100.00", "4.57", "-", "-", "protan", "1.00"]
    assert lines[-1] == "1 conflict(s)"


def test_no_conflicts():
    assert conflicts_to_text([], ALL_KINDS) == "No conflicts found.\n"
    assert json.loads(conflicts_to_json([])) == []


def test_plan_rendering():
    plan = RemapPlan(entries=(
        RemapEntry("c_ff0000", Srgb8(255, 0, 0), Srgb8(255, 0, 64), -15.0, 0.0),
    ))
    assert plan_to_text(plan).splitlines() == [
        "c_ff0000: #ff0000 -> #ff0040 (rotation -15.0, lightness +0.00)",
        "1 recoloured, 0 unresolved",
    ]
    data = json.loads(plan_to_json(plan))
    assert data["entries"][0]["replacement"] == "#ff0040"
    assert data["unresolved"] == []
