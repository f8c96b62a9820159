"""
Conversions between sRGB, linear RGB, LMS, HSL and CIELAB.

Scalar functions operate on the value types in app.core.models; the *_array
twins operate on numpy arrays shaped (..., 3) and back the image pipeline.
Scalar sRGB encoding and Lab conversion delegate to the array versions so the
two paths round identically.
"""

import math
from typing import Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from app.color import constants as C
from app.core.exceptions import ColorParseError
from app.core.models import Hsl, LabColor, LinearRgb, Lms, Srgb8, mat3

RGB_TO_LMS = mat3(C.RGB_TO_LMS_ROWS)
LMS_TO_RGB = mat3(np.linalg.inv(RGB_TO_LMS))
RGB_TO_XYZ = mat3(C.RGB_TO_XYZ_ROWS)
WHITE_XYZ = RGB_TO_XYZ.sum(axis=1)

RgbLike = Union[Srgb8, LinearRgb, Sequence[float]]


def round_half_away(x: float) -> int:
    """Round to nearest integer, halves away from zero"""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def _decode_channel(v: float) -> float:
    if v <= C.SRGB_DECODE_THRESHOLD:
        return v / C.SRGB_LINEAR_SLOPE
    return ((v + C.SRGB_OFFSET) / (1.0 + C.SRGB_OFFSET)) ** C.SRGB_GAMMA


_DECODE_LUT = np.array([_decode_channel(i / 255.0) for i in range(256)], dtype=np.float64)
_DECODE_LUT.setflags(write=False)


# ---------------------------------------------------------------------------
# Array twins
# ---------------------------------------------------------------------------

def decode_srgb_array(values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """uint8 sRGB -> linear light in [0, 1]"""
    return _DECODE_LUT[np.asarray(values, dtype=np.uint8)]


def encode_srgb_array(linear: npt.ArrayLike) -> npt.NDArray[np.uint8]:
    """Linear light -> uint8 sRGB; clamps to [0, 1] first"""
    v = np.clip(np.nan_to_num(np.asarray(linear, dtype=np.float64)), 0.0, 1.0)
    encoded = np.where(
        v <= C.SRGB_ENCODE_THRESHOLD,
        v * C.SRGB_LINEAR_SLOPE,
        (1.0 + C.SRGB_OFFSET) * np.power(v, 1.0 / C.SRGB_GAMMA) - C.SRGB_OFFSET,
    )
    # values are non-negative, so floor(x + 0.5) is round-half-away
    return np.floor(encoded * 255.0 + 0.5).astype(np.uint8)


def rgb_to_lab_array(linear: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Linear RGB (..., 3) -> CIELAB (..., 3), D65"""
    xyz = np.asarray(linear, dtype=np.float64) @ RGB_TO_XYZ.T
    t = xyz / WHITE_XYZ
    f = np.where(t > C.LAB_EPSILON, np.cbrt(t), t / C.LAB_KAPPA_DIV + C.LAB_OFFSET)
    lab = np.empty_like(f)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


# ---------------------------------------------------------------------------
# Scalar operations
# ---------------------------------------------------------------------------

def decode_srgb(c: Srgb8) -> LinearRgb:
    return LinearRgb(float(_DECODE_LUT[c.r]), float(_DECODE_LUT[c.g]), float(_DECODE_LUT[c.b]))


def encode_srgb(c: LinearRgb) -> Srgb8:
    r, g, b = encode_srgb_array(c.as_tuple())
    return Srgb8(int(r), int(g), int(b))


def rgb_to_lms(c: LinearRgb) -> Lms:
    l, m, s = RGB_TO_LMS @ np.array(c.as_tuple())
    return Lms(float(l), float(m), float(s))


def lms_to_rgb(c: Lms) -> LinearRgb:
    r, g, b = LMS_TO_RGB @ np.array(c.as_tuple())
    # LinearRgb clamps out-of-gamut channels
    return LinearRgb(float(r), float(g), float(b))


def _normalized(c: RgbLike) -> Tuple[float, float, float]:
    if isinstance(c, Srgb8):
        return (c.r / 255.0, c.g / 255.0, c.b / 255.0)
    if isinstance(c, LinearRgb):
        return c.as_tuple()
    r, g, b = c
    return (float(r), float(g), float(b))


def rgb_to_hsl(c: RgbLike) -> Hsl:
    """
    Convert normalized gamma-encoded RGB to HSL.

    Accepts an Srgb8 (divided by 255) or any triple already in [0, 1].
    Achromatic inputs get H = 0, S = 0.
    """
    r, g, b = _normalized(c)
    mx = max(r, g, b)
    mn = min(r, g, b)
    l = (mx + mn) / 2.0
    if mx == mn:
        return Hsl(0.0, 0.0, l)

    d = mx - mn
    s = min(1.0, d / (1.0 - abs(1.0 - (mx + mn))))
    if mx == r:
        h = 60.0 * (g - b) / d + (0.0 if g >= b else 360.0)
    elif mx == g:
        h = 60.0 * (b - r) / d + 120.0
    else:
        h = 60.0 * (r - g) / d + 240.0
    return Hsl(h, s, l)


def hsl_to_rgb(c: Hsl) -> Tuple[float, float, float]:
    """Inverse of rgb_to_hsl; returns normalized gamma-encoded channels"""
    chroma = (1.0 - abs(2.0 * c.l - 1.0)) * c.s
    hp = c.h / 60.0
    x = chroma * (1.0 - abs(hp % 2.0 - 1.0))
    sector = int(hp) % 6
    r1, g1, b1 = (
        (chroma, x, 0.0),
        (x, chroma, 0.0),
        (0.0, chroma, x),
        (0.0, x, chroma),
        (x, 0.0, chroma),
        (chroma, 0.0, x),
    )[sector]
    m = c.l - chroma / 2.0
    return (
        min(1.0, max(0.0, r1 + m)),
        min(1.0, max(0.0, g1 + m)),
        min(1.0, max(0.0, b1 + m)),
    )


def hsl_to_srgb8(c: Hsl) -> Srgb8:
    r, g, b = hsl_to_rgb(c)
    return Srgb8(round_half_away(r * 255.0), round_half_away(g * 255.0), round_half_away(b * 255.0))


def rotate_hue(c: Hsl, degrees: float) -> Hsl:
    return Hsl(c.h + degrees, c.s, c.l)


def rgb_to_lab(c: LinearRgb) -> LabColor:
    l_star, a_star, b_star = rgb_to_lab_array(c.as_tuple())
    return LabColor(float(l_star), float(a_star), float(b_star))


def srgb8_to_lab(c: Srgb8) -> LabColor:
    return rgb_to_lab(decode_srgb(c))


def delta_e(a: LabColor, b: LabColor) -> float:
    """CIE76 colour difference"""
    return math.dist(a.as_tuple(), b.as_tuple())


def parse_color(text: str) -> Srgb8:
    """Parse a #rgb / #rrggbb literal, raising ColorParseError"""
    try:
        return Srgb8.from_hex(text)
    except ValueError as e:
        raise ColorParseError(text, str(e)) from e
