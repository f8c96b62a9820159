"""
Greedy recolouring of conflicting tokens by HSL hue rotation.

For each conflict (in detect_conflicts order) one side is chosen as the
victim and replaced by the first candidate, in enumeration order, that keeps
every edge incident to the victim distinguishable under normal vision and
under every requested dichromacy. Candidates are always derived from the
victim's original colour, so an entry's rotation and lightness offset are
relative to what the document started with.
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence

from app.color.convert import hsl_to_srgb8, rgb_to_hsl
from app.core.models import (
    ALL_KINDS,
    AdjacencyPair,
    ColorToken,
    ConflictThresholds,
    Dichromacy,
    Hsl,
    RemapEntry,
    RemapPlan,
    RemapPolicy,
    Srgb8,
)
from app.rules.conflict import (
    conflicting_kinds,
    degree_map,
    detect_conflicts,
    expand_adjacency,
    incident_pairs,
    index_tokens,
    pair_score,
)
from app.utils.logging import create_logger, log_performance

logger = create_logger(__name__, component='remap')


@dataclass(frozen=True)
class Candidate:
    color: Srgb8
    rotation: float
    lightness_offset: float


def choose_victim(
    pair: AdjacencyPair,
    tokens: Mapping[str, ColorToken],
    adjacency: Sequence[AdjacencyPair] = (),
) -> str:
    """
    Pick the side of a pair to recolour.

    Smaller weight loses; then fewer adjacency edges; then the larger hex
    value, so heavily used colours are preserved.
    """
    a, b = tokens[pair.a], tokens[pair.b]
    if a.weight != b.weight:
        return a.id if a.weight < b.weight else b.id

    degrees = degree_map(adjacency)
    da, db = degrees.get(a.id, 0), degrees.get(b.id, 0)
    if da != db:
        return a.id if da < db else b.id

    if a.color.hex != b.color.hex:
        return a.id if a.color.hex > b.color.hex else b.id
    return max(a.id, b.id)


def iter_candidates(c: Srgb8, policy: Optional[RemapPolicy] = None) -> Iterator[Candidate]:
    """
    Enumerate replacement colours for c.

    For each lightness offset (policy order) and k = 1..max_rotation/hue_step,
    yield +k*step then -k*step. Colours equal to c or to an earlier candidate
    after 8-bit quantisation are skipped.
    """
    policy = policy or RemapPolicy()
    base = rgb_to_hsl(c)
    steps = int(math.floor(policy.max_rotation / policy.hue_step + 1e-9))
    seen = {c}

    def make(rotation: float, offset: float) -> Optional[Candidate]:
        lightness = min(1.0, max(0.0, base.l + offset))
        color = hsl_to_srgb8(Hsl(base.h + rotation, base.s, lightness))
        if color in seen:
            return None
        seen.add(color)
        return Candidate(color=color, rotation=rotation, lightness_offset=offset)

    if policy.opposite_first and steps > 0:
        first = make(180.0, 0.0)
        if first is not None:
            yield first

    for offset in policy.lightness_steps:
        for k in range(1, steps + 1):
            for rotation in (k * policy.hue_step, -k * policy.hue_step):
                candidate = make(rotation, offset)
                if candidate is not None:
                    yield candidate


def candidate_colors(c: Srgb8, policy: Optional[RemapPolicy] = None) -> List[Srgb8]:
    return [cand.color for cand in iter_candidates(c, policy)]


def accepts(
    color: Srgb8,
    victim_id: str,
    edges: Sequence[AdjacencyPair],
    colors: Mapping[str, Srgb8],
    kinds: Sequence[Dichromacy],
    thresholds: ConflictThresholds,
) -> bool:
    """True when every edge of the victim stays distinct normally and when simulated"""
    for edge in edges:
        other = colors[edge.b if edge.a == victim_id else edge.a]
        score = pair_score(color, other, kinds)
        if score.de_normal < thresholds.distinct_normal:
            return False
        if any(d < thresholds.confusable_sim for d in score.de_sim.values()):
            return False
    return True


@log_performance(logger)
def resolve(
    tokens: Sequence[ColorToken],
    adjacency: Optional[Sequence[AdjacencyPair]] = None,
    kinds: Iterable[Dichromacy] = ALL_KINDS,
    thresholds: Optional[ConflictThresholds] = None,
    policy: Optional[RemapPolicy] = None,
    complete_graph: bool = False,
) -> RemapPlan:
    """Build a RemapPlan; conflicts that survive max_passes land in `unresolved`"""
    thresholds = thresholds or ConflictThresholds()
    policy = policy or RemapPolicy()
    ordered = Dichromacy.ordered(kinds)

    by_id = index_tokens(tokens)
    pairs = expand_adjacency(tokens, adjacency, complete_graph)
    colors: Dict[str, Srgb8] = {t.id: t.color for t in tokens}
    applied: Dict[str, Candidate] = {}

    for pass_no in range(1, policy.max_passes + 1):
        current = [t.with_color(colors[t.id]) for t in tokens]
        conflicts = detect_conflicts(current, pairs, ordered, thresholds)
        if not conflicts:
            break

        changed = False
        for report in conflicts:
            pair = report.pair
            score = pair_score(colors[pair.a], colors[pair.b], ordered)
            if not conflicting_kinds(score, thresholds):
                # fixed earlier in this pass
                continue

            victim = choose_victim(pair, {i: t.with_color(colors[i]) for i, t in by_id.items()}, pairs)
            edges = incident_pairs(victim, pairs)
            original = by_id[victim].color
            for candidate in iter_candidates(original, policy):
                if accepts(candidate.color, victim, edges, colors, ordered, thresholds):
                    colors[victim] = candidate.color
                    applied[victim] = candidate
                    changed = True
                    logger.debug("Recoloured token", extra_data={
                        'pass': pass_no,
                        'token': victim,
                        'from': original.hex,
                        'to': candidate.color.hex,
                    })
                    break
            else:
                logger.debug("No acceptable candidate", extra_data={'pass': pass_no, 'token': victim})

        if not changed:
            break

    entries = tuple(
        RemapEntry(
            token_id=token_id,
            original=by_id[token_id].color,
            replacement=cand.color,
            rotation=cand.rotation,
            lightness_offset=cand.lightness_offset,
        )
        for token_id, cand in applied.items()
    )
    remapped = [t.with_color(colors[t.id]) for t in tokens]
    unresolved = tuple(detect_conflicts(remapped, pairs, ordered, thresholds))

    logger.info("Remap finished", extra_data={
        'entries': len(entries),
        'unresolved': len(unresolved),
    })
    return RemapPlan(entries=entries, unresolved=unresolved)
