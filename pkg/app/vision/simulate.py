"""
Dichromacy simulation of colours and raster images via LMS-space projection.

Pipeline per pixel: decode sRGB -> linear RGB -> LMS -> projection ->
linear RGB (clamped) -> encode sRGB. The three linear steps are folded into
one 3x3 matrix per kind; simulate_color and simulate_image share
simulate_pixels, so a single colour and the same pixel in an image always
agree bit for bit.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from PIL import Image

from app.color import constants as C
from app.color.convert import (
    LMS_TO_RGB,
    RGB_TO_LMS,
    decode_srgb_array,
    encode_srgb_array,
)
from app.core.exceptions import ImageFormatError
from app.core.models import Dichromacy, Lms, Mat3, Srgb8, mat3
from app.utils.logging import create_logger, log_performance

logger = create_logger(__name__, component='simulate')

_PROJECTION_ROWS = {
    Dichromacy.PROTANOPIA: C.PROTAN_ROWS,
    Dichromacy.DEUTERANOPIA: C.DEUTAN_ROWS,
    Dichromacy.TRITANOPIA: C.TRITAN_ROWS,
}


@dataclass(frozen=True, eq=False)
class SimulationMatrix:
    """Rank-2 idempotent projection acting on LMS column vectors"""
    kind: Dichromacy
    matrix: Mat3

    def __post_init__(self):
        if np.max(np.abs(self.matrix @ self.matrix - self.matrix)) >= 1e-9:
            raise ValueError(f"{self.kind.name} projection is not idempotent")
        if np.linalg.matrix_rank(self.matrix) != 2:
            raise ValueError(f"{self.kind.name} projection must have rank 2")

    def apply(self, lms: Lms) -> Lms:
        l, m, s = self.matrix @ np.array(lms.as_tuple())
        return Lms(float(l), float(m), float(s))

    @property
    def confusion_axis(self) -> npt.NDArray[np.float64]:
        """Unit vector spanning the null space; colours along it collide"""
        _, _, vt = np.linalg.svd(self.matrix)
        axis = vt[-1]
        return axis / np.linalg.norm(axis)


@lru_cache(maxsize=None)
def simulation_matrix(kind: Dichromacy) -> SimulationMatrix:
    return SimulationMatrix(kind=kind, matrix=mat3(_PROJECTION_ROWS[kind]))


@lru_cache(maxsize=None)
def _linear_pipeline(kind: Dichromacy) -> Mat3:
    """LMS->RGB . projection . RGB->LMS, acting on linear RGB"""
    return mat3(LMS_TO_RGB @ simulation_matrix(kind).matrix @ RGB_TO_LMS)


def simulate_linear(linear: npt.ArrayLike, kind: Dichromacy) -> npt.NDArray[np.float64]:
    """Project linear RGB (..., 3); the result is not clamped"""
    return np.asarray(linear, dtype=np.float64) @ _linear_pipeline(kind).T


def simulate_pixels(rgb: npt.ArrayLike, kind: Dichromacy) -> npt.NDArray[np.uint8]:
    """Simulate an array of 8-bit sRGB pixels shaped (..., 3)"""
    linear = decode_srgb_array(rgb)
    return encode_srgb_array(simulate_linear(linear, kind))


@lru_cache(maxsize=65536)
def simulate_color(c: Srgb8, kind: Dichromacy) -> Srgb8:
    r, g, b = simulate_pixels(np.array([c.as_tuple()], dtype=np.uint8), kind)[0]
    return Srgb8(int(r), int(g), int(b))


def map_rgb_channels(img: Image.Image, transform, workers: int = 1) -> Image.Image:
    """
    Apply a per-pixel (..., 3) uint8 transform to an RGB or RGBA image.

    Alpha bytes are copied unchanged. Rows are split across `workers`
    threads; the result does not depend on the split.
    """
    if img.mode not in ("RGB", "RGBA"):
        has_alpha = img.mode in ("LA", "PA") or (img.mode == "P" and "transparency" in img.info)
        img = img.convert("RGBA" if has_alpha else "RGB")

    pixels = np.asarray(img, dtype=np.uint8)
    out = pixels.copy()
    height = pixels.shape[0]

    def run(rows: slice) -> None:
        out[rows, :, :3] = transform(pixels[rows, :, :3])

    if workers <= 1 or height < 2:
        run(slice(0, height))
    else:
        bounds = np.linspace(0, height, min(workers, height) + 1, dtype=int)
        chunks = [slice(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:])]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, chunks))

    return Image.fromarray(out)


@log_performance(logger)
def simulate_image(img: Image.Image, kind: Dichromacy, workers: int = 1) -> Image.Image:
    """Simulate a dichromacy on every pixel of an image"""
    try:
        img.load()
    except (OSError, ValueError) as e:
        raise ImageFormatError(getattr(img, "filename", "") or "<image>", str(e)) from e

    result = map_rgb_channels(img, lambda px: simulate_pixels(px, kind), workers=workers)
    logger.info("Simulated image", extra_data={
        'kind': kind.value,
        'width': result.width,
        'height': result.height,
    })
    return result
