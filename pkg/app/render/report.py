"""
Renders conflict reports and remap plans as JSON or a plain-text table.
Output is deterministic: fixed key order, reals rounded to 2 decimals.
"""

import json
from typing import Iterable, Sequence

from app.core.models import ConflictReport, Dichromacy, RemapPlan


def conflicts_to_json(reports: Sequence[ConflictReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"


def plan_to_json(plan: RemapPlan) -> str:
    return json.dumps(plan.to_dict(), indent=2) + "\n"


def conflicts_to_text(reports: Sequence[ConflictReport], kinds: Iterable[Dichromacy]) -> str:
    ordered = Dichromacy.ordered(kinds)
    if not reports:
        return "No conflicts found.\n"

    header = ["a", "b", "relation", "dE normal", *[f"dE {k.value}" for k in ordered], "conflicts", "severity"]
    rows = [
        [
            r.pair.a,
            r.pair.b,
            r.pair.relation.value,
            f"{r.de_normal:.2f}",
            *[f"{r.de_sim[k]:.2f}" if k in r.de_sim else "-" for k in ordered],
            ",".join(k.value for k in r.conflicting_kinds),
            f"{r.severity:.2f}",
        ]
        for r in reports
    ]
    widths = [max(len(str(row[i])) for row in [header, *rows]) for i in range(len(header))]

    def fmt(row) -> str:
        return "  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip()

    lines = [fmt(header), fmt(["-" * w for w in widths]), *[fmt(row) for row in rows]]
    lines.append(f"{len(reports)} conflict(s)")
    return "\n".join(lines) + "\n"


def plan_to_text(plan: RemapPlan) -> str:
    lines = [
        f"{e.token_id}: {e.original.hex} -> {e.replacement.hex} "
        f"(rotation {e.rotation:+.1f}, lightness {e.lightness_offset:+.2f})"
        for e in plan.entries
    ]
    lines.append(f"{len(plan.entries)} recoloured, {len(plan.unresolved)} unresolved")
    return "\n".join(lines) + "\n"
