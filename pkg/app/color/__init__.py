"""Colour representations and conversions."""

from app.color.convert import (
    decode_srgb,
    delta_e,
    encode_srgb,
    hsl_to_rgb,
    hsl_to_srgb8,
    lms_to_rgb,
    parse_color,
    rgb_to_hsl,
    rgb_to_lab,
    rgb_to_lms,
    round_half_away,
    srgb8_to_lab,
)

__all__ = [
    "decode_srgb",
    "delta_e",
    "encode_srgb",
    "hsl_to_rgb",
    "hsl_to_srgb8",
    "lms_to_rgb",
    "parse_color",
    "rgb_to_hsl",
    "rgb_to_lab",
    "rgb_to_lms",
    "round_half_away",
    "srgb8_to_lab",
]
