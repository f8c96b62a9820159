"""
PNG input/output for 8-bit RGB and RGBA rasters.
"""

import struct
import zlib
from pathlib import Path
from typing import Union

from PIL import Image, UnidentifiedImageError

from app.core.exceptions import ImageFormatError
from app.utils.logging import create_logger

logger = create_logger(__name__, component='ingest')

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def locate_png_damage(data: bytes) -> int:
    """
    Byte offset of the chunk where a PNG stops being readable.

    The first chunk that runs past the end of the data or fails its CRC
    is reported. If the chunk structure is intact the fault is in the
    compressed pixel stream, and the first IDAT chunk is reported (or the
    end of the data when there is none).
    """
    pos = len(PNG_SIGNATURE)
    first_idat = None
    while pos < len(data):
        if pos + 8 > len(data):
            return pos
        length, tag = struct.unpack(">I4s", data[pos:pos + 8])
        end = pos + 12 + length
        if end > len(data):
            return pos
        (crc,) = struct.unpack(">I", data[end - 4:end])
        if zlib.crc32(data[pos + 4:end - 4]) & 0xFFFFFFFF != crc:
            return pos
        if tag == b"IDAT" and first_idat is None:
            first_idat = pos
        if tag == b"IEND":
            break
        pos = end
    return first_idat if first_idat is not None else min(pos, len(data))


def load_png(path: Union[str, Path]) -> Image.Image:
    """Read and fully decode a PNG; corrupt or non-PNG input raises ImageFormatError"""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ImageFormatError(str(path), f"cannot read file: {e.strerror or e}") from e

    if not data.startswith(PNG_SIGNATURE):
        raise ImageFormatError(str(path), "missing PNG signature", position=0)

    try:
        img = Image.open(path)
        img.load()
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as e:
        raise ImageFormatError(str(path), str(e), position=locate_png_damage(data)) from e

    logger.debug("Loaded image", extra_data={'path': str(path), 'mode': img.mode, 'size': img.size})
    return img


def save_png(img: Image.Image, path: Union[str, Path]) -> None:
    path = Path(path)
    img.save(path, format="PNG")
    logger.debug("Wrote image", extra_data={'path': str(path), 'size': img.size})
