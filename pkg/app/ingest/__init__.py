"""Palette, stylesheet and raster input/output."""

from app.ingest.image import load_png, save_png
from app.ingest.palette import load_palette, parse_palette, serialize_palette
from app.ingest.stylesheet import (
    StylesheetScanner,
    derive_adjacency,
    rewrite_stylesheet,
    scan_stylesheet,
)

__all__ = [
    "StylesheetScanner",
    "derive_adjacency",
    "load_palette",
    "load_png",
    "parse_palette",
    "rewrite_stylesheet",
    "save_png",
    "scan_stylesheet",
    "serialize_palette",
]
