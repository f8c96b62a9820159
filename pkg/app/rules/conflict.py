"""
Dichromatic conflict detection over an adjacency graph of colour tokens.

A pair conflicts for a kind when it is distinguishable under normal vision
(de_normal >= distinct_normal) and confusable once simulated
(de_sim < confusable_sim). Both distances are CIE76 delta-E.
"""

from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from app.color.convert import delta_e, srgb8_to_lab
from app.core.exceptions import UnknownTokenError, ValidationError
from app.core.models import (
    ALL_KINDS,
    AdjacencyPair,
    ColorToken,
    ConflictReport,
    ConflictThresholds,
    Dichromacy,
    LabColor,
    PairScore,
    Relation,
    Srgb8,
)
from app.utils.logging import create_logger
from app.vision.simulate import simulate_color

logger = create_logger(__name__, component='conflict')


@lru_cache(maxsize=65536)
def _lab(c: Srgb8) -> LabColor:
    return srgb8_to_lab(c)


@lru_cache(maxsize=65536)
def _sim_lab(c: Srgb8, kind: Dichromacy) -> LabColor:
    return srgb8_to_lab(simulate_color(c, kind))


def pair_score(a: Srgb8, b: Srgb8, kinds: Iterable[Dichromacy] = ALL_KINDS) -> PairScore:
    """Delta-E between two colours, normally and under each simulated kind"""
    ordered = Dichromacy.ordered(kinds)
    if not ordered:
        raise ValueError("pair_score needs at least one dichromacy kind")
    return PairScore(
        de_normal=delta_e(_lab(a), _lab(b)),
        de_sim={k: delta_e(_sim_lab(a, k), _sim_lab(b, k)) for k in ordered},
    )


def conflicting_kinds(score: PairScore, thresholds: ConflictThresholds) -> List[Dichromacy]:
    if score.de_normal < thresholds.distinct_normal:
        return []
    return [k for k, d in score.de_sim.items() if d < thresholds.confusable_sim]


def index_tokens(tokens: Sequence[ColorToken]) -> Dict[str, ColorToken]:
    by_id: Dict[str, ColorToken] = {}
    for token in tokens:
        if token.id in by_id:
            raise ValidationError([f"Duplicate token id: {token.id}"])
        by_id[token.id] = token
    return by_id


def expand_adjacency(
    tokens: Sequence[ColorToken],
    adjacency: Optional[Sequence[AdjacencyPair]],
    complete_graph: bool = False,
) -> List[AdjacencyPair]:
    """Explicit adjacency, or every unordered pair when it is empty and complete_graph is set"""
    if adjacency:
        return list(adjacency)
    if complete_graph:
        return [AdjacencyPair(a.id, b.id, Relation.NEIGHBORS) for a, b in combinations(tokens, 2)]
    return []


def score_report(
    pair: AdjacencyPair,
    a: Srgb8,
    b: Srgb8,
    kinds: Sequence[Dichromacy],
    thresholds: ConflictThresholds,
) -> Optional[ConflictReport]:
    score = pair_score(a, b, kinds)
    hits = conflicting_kinds(score, thresholds)
    if not hits:
        return None
    cs = thresholds.confusable_sim
    severity = max((cs - score.de_sim[k]) / cs for k in hits)
    return ConflictReport(
        pair=pair,
        de_normal=score.de_normal,
        de_sim=dict(score.de_sim),
        conflicting_kinds=tuple(hits),
        severity=severity,
    )


def detect_conflicts(
    tokens: Sequence[ColorToken],
    adjacency: Optional[Sequence[AdjacencyPair]] = None,
    kinds: Iterable[Dichromacy] = ALL_KINDS,
    thresholds: Optional[ConflictThresholds] = None,
    complete_graph: bool = False,
) -> List[ConflictReport]:
    """
    Score every adjacency pair and report the conflicting ones.

    Reports are ordered by severity (descending), then by (a, b) id.
    """
    thresholds = thresholds or ConflictThresholds()
    ordered = Dichromacy.ordered(kinds)
    if not ordered:
        raise ValueError("detect_conflicts needs at least one dichromacy kind")

    by_id = index_tokens(tokens)
    pairs = expand_adjacency(tokens, adjacency, complete_graph)
    for pair in pairs:
        for token_id in (pair.a, pair.b):
            if token_id not in by_id:
                raise UnknownTokenError(token_id)

    reports = []
    for pair in pairs:
        report = score_report(pair, by_id[pair.a].color, by_id[pair.b].color, ordered, thresholds)
        if report is not None:
            reports.append(report)

    reports.sort(key=lambda r: (-r.severity, r.pair.a, r.pair.b))

    logger.debug("Conflict scan finished", extra_data={
        'tokens': len(by_id),
        'pairs': len(pairs),
        'conflicts': len(reports),
    })
    return reports


def incident_pairs(token_id: str, pairs: Sequence[AdjacencyPair]) -> List[AdjacencyPair]:
    return [p for p in pairs if token_id in (p.a, p.b)]


def degree_map(pairs: Sequence[AdjacencyPair]) -> Mapping[str, int]:
    degrees: Dict[str, int] = {}
    for p in pairs:
        degrees[p.a] = degrees.get(p.a, 0) + 1
        degrees[p.b] = degrees.get(p.b, 0) + 1
    return degrees
