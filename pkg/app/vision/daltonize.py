"""
Daltonization: shift the information a dichromat loses into channels they
still perceive. The simulation error (original - simulated, linear light) is
redistributed with a fixed error-shift matrix and added back.
"""

from functools import lru_cache

import numpy as np
import numpy.typing as npt
from PIL import Image

from app.color import constants as C
from app.color.convert import decode_srgb_array, encode_srgb_array
from app.core.models import Dichromacy, Mat3, Srgb8, mat3
from app.utils.logging import create_logger, log_performance
from app.vision.simulate import map_rgb_channels, simulate_linear

logger = create_logger(__name__, component='simulate')


@lru_cache(maxsize=None)
def error_shift_matrix(kind: Dichromacy) -> Mat3:
    if kind is Dichromacy.TRITANOPIA:
        return mat3(C.ERROR_SHIFT_BY_ROWS)
    return mat3(C.ERROR_SHIFT_RG_ROWS)


def daltonize_pixels(rgb: npt.ArrayLike, kind: Dichromacy) -> npt.NDArray[np.uint8]:
    linear = decode_srgb_array(rgb)
    simulated = np.clip(simulate_linear(linear, kind), 0.0, 1.0)
    shift = (linear - simulated) @ error_shift_matrix(kind).T
    return encode_srgb_array(linear + shift)


def daltonize_color(c: Srgb8, kind: Dichromacy) -> Srgb8:
    r, g, b = daltonize_pixels(np.array([c.as_tuple()], dtype=np.uint8), kind)[0]
    return Srgb8(int(r), int(g), int(b))


@log_performance(logger)
def daltonize_image(img: Image.Image, kind: Dichromacy, workers: int = 1) -> Image.Image:
    result = map_rgb_channels(img, lambda px: daltonize_pixels(px, kind), workers=workers)
    logger.info("Daltonized image", extra_data={'kind': kind.value, 'size': result.size})
    return result
