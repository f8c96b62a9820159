"""
Unit tests for colour conversions and the colour value types.
"""

import itertools
import math

import numpy as np
import pytest

from app.color import constants as C
from app.color.convert import (
    LMS_TO_RGB,
    RGB_TO_LMS,
    decode_srgb,
    decode_srgb_array,
    delta_e,
    encode_srgb,
    encode_srgb_array,
    hsl_to_rgb,
    hsl_to_srgb8,
    lms_to_rgb,
    parse_color,
    rgb_to_hsl,
    rgb_to_lab,
    rgb_to_lms,
    rotate_hue,
    round_half_away,
    srgb8_to_lab,
)
from app.core.exceptions import ColorParseError
from app.core.models import Dichromacy, Hsl, LabColor, LinearRgb, Lms, Srgb8, mat3

GRID_32 = [int(v) for v in np.linspace(0, 255, 32).round()]


class TestSrgbTransfer:

    def test_black_and_white_are_fixed(self):
        assert decode_srgb(Srgb8(0, 0, 0)).as_tuple() == (0.0, 0.0, 0.0)
        assert decode_srgb(Srgb8(255, 255, 255)).as_tuple() == pytest.approx((1.0, 1.0, 1.0), abs=1e-12)
        assert encode_srgb(LinearRgb(1.0, 1.0, 1.0)) == Srgb8(255, 255, 255)

    def test_mid_gray_matches_hand_evaluation(self):
        expected = ((128 / 255 + 0.055) / 1.055) ** 2.4
        assert decode_srgb(Srgb8(128, 128, 128)).r == pytest.approx(expected, abs=1e-12)

    def test_linear_segment_below_threshold(self):
        assert decode_srgb(Srgb8(10, 0, 0)).r == pytest.approx(10 / 255 / 12.92, abs=1e-12)

    def test_round_trip_every_code_value(self):
        codes = np.arange(256, dtype=np.uint8)
        assert np.array_equal(encode_srgb_array(decode_srgb_array(codes)), codes)

    def test_scalar_round_trip(self):
        for v in (0, 1, 10, 11, 127, 128, 200, 254, 255):
            c = Srgb8(v, 255 - v, v // 2)
            assert encode_srgb(decode_srgb(c)) == c

    def test_out_of_range_is_clamped(self):
        assert encode_srgb(LinearRgb(1.2, -0.1, 0.5)) == encode_srgb(LinearRgb(1.0, 0.0, 0.5))
        assert np.array_equal(
            encode_srgb_array([1.2, -0.1, 0.5]),
            encode_srgb_array([1.0, 0.0, 0.5]),
        )

    def test_round_half_away(self):
        assert round_half_away(2.5) == 3
        assert round_half_away(-2.5) == -3
        assert round_half_away(127.5) == 128
        assert round_half_away(0.49) == 0


class TestLms:

    def test_black_maps_to_origin(self):
        assert rgb_to_lms(LinearRgb(0, 0, 0)).as_tuple() == (0.0, 0.0, 0.0)
        assert lms_to_rgb(Lms(0, 0, 0)).as_tuple() == (0.0, 0.0, 0.0)

    def test_white_point_satisfies_protan_plane(self):
        w = rgb_to_lms(LinearRgb(1, 1, 1))
        predicted = C.PROTAN_M_COEF * w.m + C.PROTAN_S_COEF * w.s
        assert abs(predicted - w.l) / w.l < 1e-3

    def test_matches_hand_multiply(self):
        rgb = (0.25, 0.6, 0.1)
        out = rgb_to_lms(LinearRgb(*rgb))
        for got, row in zip(out.as_tuple(), C.RGB_TO_LMS_ROWS):
            assert got == pytest.approx(sum(a * b for a, b in zip(row, rgb)), rel=1e-12)

    def test_round_trip_grid(self):
        axis = np.linspace(0.0, 1.0, 16)
        for r, g, b in itertools.product(axis, axis, axis):
            back = lms_to_rgb(rgb_to_lms(LinearRgb(r, g, b)))
            assert back.as_tuple() == pytest.approx((r, g, b), abs=1e-6)

    def test_inverse_is_exact(self):
        assert np.allclose(LMS_TO_RGB @ RGB_TO_LMS, np.eye(3), atol=1e-12)

    def test_out_of_gamut_result_is_clamped(self):
        out = lms_to_rgb(Lms(100.0, -5.0, 3.0))
        assert all(0.0 <= v <= 1.0 for v in out.as_tuple())


class TestHsl:

    def test_pure_red(self):
        hsl = rgb_to_hsl((1.0, 0.0, 0.0))
        assert (hsl.h, hsl.s, hsl.l) == pytest.approx((0.0, 1.0, 0.5))

    def test_gray_is_achromatic(self):
        hsl = rgb_to_hsl((0.5, 0.5, 0.5))
        assert (hsl.h, hsl.s, hsl.l) == (0.0, 0.0, 0.5)

    def test_blue_branch(self):
        hsl = rgb_to_hsl((0.2, 0.4, 0.6))
        assert (hsl.h, hsl.s, hsl.l) == pytest.approx((210.0, 0.5, 0.4))

    @pytest.mark.parametrize("color,hue", [
        (Srgb8(0, 255, 0), 120.0),
        (Srgb8(0, 0, 255), 240.0),
        (Srgb8(255, 0, 255), 300.0),
        (Srgb8(255, 255, 0), 60.0),
    ])
    def test_primary_hues(self, color, hue):
        assert rgb_to_hsl(color).h == pytest.approx(hue)

    def test_inverse_examples(self):
        assert hsl_to_rgb(Hsl(0.0, 1.0, 0.5)) == pytest.approx((1.0, 0.0, 0.0))
        assert hsl_to_rgb(Hsl(210.0, 0.5, 0.4)) == pytest.approx((0.2, 0.4, 0.6))
        for h in (0.0, 77.0, 300.0):
            assert hsl_to_rgb(Hsl(h, 0.0, 0.3)) == pytest.approx((0.3, 0.3, 0.3))

    def test_lightness_and_ranges(self):
        for r, g, b in itertools.product(GRID_32[::4], repeat=3):
            hsl = rgb_to_hsl(Srgb8(r, g, b))
            assert hsl.l == (max(r, g, b) / 255.0 + min(r, g, b) / 255.0) / 2.0
            assert 0.0 <= hsl.s <= 1.0
            assert 0.0 <= hsl.h < 360.0

    def test_round_trip_grid(self):
        for r, g, b in itertools.product(GRID_32, repeat=3):
            back = hsl_to_srgb8(rgb_to_hsl(Srgb8(r, g, b)))
            assert abs(back.r - r) <= 1 and abs(back.g - g) <= 1 and abs(back.b - b) <= 1

    def test_rotate_wraps(self):
        assert rotate_hue(Hsl(350.0, 1.0, 0.5), 20.0).h == pytest.approx(10.0)
        assert rotate_hue(Hsl(10.0, 1.0, 0.5), -20.0).h == pytest.approx(350.0)

    def test_rotating_by_120_permutes_primaries(self):
        hsl = rgb_to_hsl(Srgb8(255, 0, 0))
        seen = []
        for _ in range(3):
            hsl = rotate_hue(hsl, 120.0)
            seen.append(hsl_to_srgb8(hsl))
        assert seen == [Srgb8(0, 255, 0), Srgb8(0, 0, 255), Srgb8(255, 0, 0)]

    def test_hue_of_gray_is_forced_to_zero(self):
        assert Hsl(123.0, 0.0, 0.4).h == 0.0


class TestLab:

    def test_white_point(self):
        lab = rgb_to_lab(LinearRgb(1, 1, 1))
        assert lab.l_star == pytest.approx(100.0, abs=0.01)
        assert abs(lab.a_star) < 0.05 and abs(lab.b_star) < 0.05

    def test_black(self):
        assert rgb_to_lab(LinearRgb(0, 0, 0)).as_tuple() == pytest.approx((0.0, 0.0, 0.0), abs=1e-9)

    def test_neutral_axis(self):
        for v in (32, 128, 200):
            lab = srgb8_to_lab(Srgb8(v, v, v))
            assert abs(lab.a_star) < 0.05 and abs(lab.b_star) < 0.05

    def test_delta_e_metric(self):
        rng = np.random.default_rng(7)
        labs = [LabColor(*rng.uniform(-100, 100, 3)) for _ in range(30)]
        for a, b, c in zip(labs, labs[1:], labs[2:]):
            assert delta_e(a, a) == 0.0
            assert delta_e(a, b) == delta_e(b, a)
            assert delta_e(a, c) <= delta_e(a, b) + delta_e(b, c) + 1e-9

    def test_black_white_distance(self):
        d = delta_e(srgb8_to_lab(Srgb8(0, 0, 0)), srgb8_to_lab(Srgb8(255, 255, 255)))
        assert d == pytest.approx(100.0, abs=0.01)


class TestValueTypes:

    def test_hex_parsing(self):
        assert parse_color("#abc") == Srgb8(170, 187, 204)
        assert parse_color("#FF0000").hex == "#ff0000"
        assert Srgb8.from_hex("fff") == Srgb8(255, 255, 255)

    @pytest.mark.parametrize("text", ["not-a-color", "#12", "#gggggg", ""])
    def test_bad_literals_raise(self, text):
        with pytest.raises(ColorParseError):
            parse_color(text)

    @pytest.mark.parametrize("bad", [256, -1, 1.5, True])
    def test_srgb8_rejects_bad_channels(self, bad):
        with pytest.raises(ValueError):
            Srgb8(bad, 0, 0)

    def test_linear_rgb_rejects_nan(self):
        with pytest.raises(ValueError):
            LinearRgb(float("nan"), 0.0, 0.0)

    def test_mat3_validation(self):
        with pytest.raises(ValueError):
            mat3([[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            mat3([[1, 0, 0], [0, math.inf, 0], [0, 0, 1]])
        m = mat3([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        with pytest.raises(ValueError):
            m[0, 0] = 2.0

    @pytest.mark.parametrize("name,kind", [
        ("protan", Dichromacy.PROTANOPIA),
        ("Protanopia", Dichromacy.PROTANOPIA),
        ("DEUTERANOPIA", Dichromacy.DEUTERANOPIA),
        (" tritan ", Dichromacy.TRITANOPIA),
    ])
    def test_dichromacy_names(self, name, kind):
        assert Dichromacy.parse(name) is kind

    def test_unknown_dichromacy(self):
        with pytest.raises(ValueError, match="Unknown dichromacy"):
            Dichromacy.parse("achromat")
