"""
Unit tests for pair scoring and conflict detection.
"""

import itertools

import numpy as np
import pytest

from app.color.convert import decode_srgb_array, rgb_to_lab_array
from app.core.exceptions import UnknownTokenError, ValidationError
from app.core.models import (
    ALL_KINDS,
    AdjacencyPair,
    ColorToken,
    ConflictThresholds,
    Dichromacy,
    Relation,
    Srgb8,
)
from app.rules.conflict import detect_conflicts, expand_adjacency, pair_score
from app.vision.simulate import simulate_pixels

RED = Srgb8(255, 0, 0)


def _oracle(colors, thresholds):
    """Exhaustive pair enumeration straight from the array pipeline"""
    px = np.array([c.as_tuple() for c in colors], dtype=np.uint8)
    normal = rgb_to_lab_array(decode_srgb_array(px))
    sims = {k: rgb_to_lab_array(decode_srgb_array(simulate_pixels(px, k))) for k in ALL_KINDS}
    found = {}
    for i, j in itertools.combinations(range(len(colors)), 2):
        if np.linalg.norm(normal[i] - normal[j]) < thresholds.distinct_normal:
            continue
        kinds = tuple(
            k for k in ALL_KINDS
            if np.linalg.norm(sims[k][i] - sims[k][j]) < thresholds.confusable_sim
        )
        if kinds:
            found[(f"t{i}", f"t{j}")] = kinds
    return found


class TestPairScore:

    def test_identical_colours(self):
        score = pair_score(RED, RED)
        assert score.de_normal == 0.0
        assert all(d == 0.0 for d in score.de_sim.values())

    def test_grays_keep_their_distance(self):
        score = pair_score(Srgb8(64, 64, 64), Srgb8(192, 192, 192))
        for kind in ALL_KINDS:
            assert abs(score.de_sim[kind] - score.de_normal) < 2.0

    def test_symmetry(self):
        a, b = Srgb8(12, 200, 99), Srgb8(240, 17, 180)
        ab, ba = pair_score(a, b), pair_score(b, a)
        assert ab.de_normal == ba.de_normal
        assert ab.de_sim == ba.de_sim

    def test_only_requested_kinds(self):
        score = pair_score(RED, Srgb8(0, 0, 255), [Dichromacy.TRITANOPIA])
        assert list(score.de_sim) == [Dichromacy.TRITANOPIA]

    def test_needs_a_kind(self):
        with pytest.raises(ValueError):
            pair_score(RED, RED, [])

    def test_brute_force_confusion_pair(self):
        """Closest protan match to red among grid colours that look clearly different"""
        axis = np.linspace(0, 255, 32).round().astype(np.uint8)
        grid = np.array(list(itertools.product(axis, axis, axis)), dtype=np.uint8)
        kind = Dichromacy.PROTANOPIA
        red = np.array([RED.as_tuple()], dtype=np.uint8)

        normal = np.linalg.norm(
            rgb_to_lab_array(decode_srgb_array(grid)) - rgb_to_lab_array(decode_srgb_array(red))[0], axis=1
        )
        candidates = grid[normal > 40.0]
        red_sim = rgb_to_lab_array(decode_srgb_array(simulate_pixels(red, kind)))[0]
        sims = rgb_to_lab_array(decode_srgb_array(simulate_pixels(candidates, kind)))
        best = Srgb8(*(int(v) for v in candidates[int(np.argmin(np.linalg.norm(sims - red_sim, axis=1)))]))

        score = pair_score(RED, best, [kind])
        assert score.de_normal > 40.0
        assert score.de_sim[kind] < ConflictThresholds().confusable_sim

        tokens = [ColorToken("red", RED), ColorToken("match", best)]
        reports = detect_conflicts(tokens, [AdjacencyPair("red", "match")])
        assert len(reports) == 1
        assert kind in reports[0].conflicting_kinds


class TestDetectConflicts:

    def test_identical_colours_do_not_conflict(self):
        tokens = [ColorToken("a", RED), ColorToken("b", RED)]
        assert detect_conflicts(tokens, [AdjacencyPair("a", "b")]) == []

    def test_black_on_white(self, black_white_tokens):
        tokens, pairs = black_white_tokens
        assert detect_conflicts(tokens, pairs) == []

    def test_red_on_green(self, red_green_tokens):
        tokens, pairs = red_green_tokens
        reports = detect_conflicts(tokens, pairs)
        assert len(reports) == 1
        report = reports[0]
        assert Dichromacy.PROTANOPIA in report.conflicting_kinds
        assert report.pair.relation is Relation.TEXT_ON_BACKGROUND
        assert report.de_normal >= 15.0
        cs = 12.0
        assert report.severity == pytest.approx(max((cs - report.de_sim[k]) / cs for k in report.conflicting_kinds))
        assert 0.0 < report.severity <= 1.0

    def test_kind_filter(self, red_green_tokens):
        tokens, pairs = red_green_tokens
        for r in detect_conflicts(tokens, pairs, kinds=[Dichromacy.TRITANOPIA]):
            assert r.conflicting_kinds == (Dichromacy.TRITANOPIA,)
        protan_only = detect_conflicts(tokens, pairs, kinds=[Dichromacy.PROTANOPIA])
        assert protan_only[0].conflicting_kinds == (Dichromacy.PROTANOPIA,)
        assert set(protan_only[0].de_sim) == {Dichromacy.PROTANOPIA}

    def test_unknown_id(self, red_green_tokens):
        tokens, _ = red_green_tokens
        with pytest.raises(UnknownTokenError) as exc:
            detect_conflicts(tokens, [AdjacencyPair("fg", "ghost")])
        assert exc.value.token_id == "ghost"
        assert "ghost" in str(exc.value)

    def test_duplicate_ids(self):
        with pytest.raises(ValidationError, match="Duplicate token id"):
            detect_conflicts([ColorToken("a", RED), ColorToken("a", Srgb8(0, 0, 0))])

    def test_empty_adjacency_without_complete_graph(self, red_green_tokens):
        tokens, _ = red_green_tokens
        assert detect_conflicts(tokens, []) == []
        assert len(detect_conflicts(tokens, [], complete_graph=True)) == 1

    def test_complete_graph_expansion(self):
        tokens = [ColorToken(i, RED) for i in ("a", "b", "c", "d")]
        pairs = expand_adjacency(tokens, None, complete_graph=True)
        assert [(p.a, p.b) for p in pairs] == [
            ("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d"),
        ]

    def test_sorted_by_severity_then_ids(self):
        rng = np.random.default_rng(11)
        colors = [RED, Srgb8(0, 102, 0), Srgb8(0, 99, 16), Srgb8(160, 160, 0)]
        colors += [Srgb8(*rng.integers(0, 256, 3)) for _ in range(4)]
        tokens = [ColorToken(f"t{i}", c) for i, c in enumerate(colors)]
        reports = detect_conflicts(tokens, complete_graph=True)
        keys = [(-r.severity, r.pair.a, r.pair.b) for r in reports]
        assert keys == sorted(keys)

    def test_monotone_gating(self):
        rng = np.random.default_rng(5)
        colors = [RED, Srgb8(0, 102, 0)] + [Srgb8(*rng.integers(0, 256, 3)) for _ in range(6)]
        tokens = [ColorToken(f"t{i}", c) for i, c in enumerate(colors)]

        def pairs_for(**kw):
            reports = detect_conflicts(tokens, thresholds=ConflictThresholds(**kw), complete_graph=True)
            return {(r.pair.a, r.pair.b) for r in reports}

        base = pairs_for()
        assert base <= pairs_for(confusable_sim=20.0)
        assert pairs_for(distinct_normal=40.0) <= base

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_matches_exhaustive_oracle(self, seed):
        rng = np.random.default_rng(seed)
        colors = [RED, Srgb8(0, 102, 0)] + [Srgb8(*rng.integers(0, 256, 3)) for _ in range(4)]
        tokens = [ColorToken(f"t{i}", c) for i, c in enumerate(colors)]
        thresholds = ConflictThresholds()

        reports = detect_conflicts(tokens, thresholds=thresholds, complete_graph=True)
        got = {(r.pair.a, r.pair.b): r.conflicting_kinds for r in reports}
        assert got == _oracle(colors, thresholds)

    def test_report_serialisation(self, red_green_tokens):
        tokens, pairs = red_green_tokens
        data = detect_conflicts(tokens, pairs)[0].to_dict()
        assert list(data) == ["pair", "de_normal", "de_sim", "conflicting_kinds", "severity"]
        assert data["pair"] == {"a": "fg", "b": "bg", "relation": "text-on-background"}
        assert list(data["de_sim"]) == ["protan", "deutan", "tritan"]
        assert data["de_normal"] == round(data["de_normal"], 2)
