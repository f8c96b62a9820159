"""
Shared fixtures for unit, integration and regression suites.
"""

import logging
import os
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from app.core.config import reset_settings
from app.core.models import AdjacencyPair, ColorToken, Relation, Srgb8, TokenRole

SAMPLES = Path(__file__).resolve().parent.parent / "data" / "samples"

RED = Srgb8(255, 0, 0)
DARK_GREEN = Srgb8(0, 102, 0)
BLACK = Srgb8(0, 0, 0)
WHITE = Srgb8(255, 255, 255)


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    """Every test starts from defaults, whatever CVD_* is set in the shell"""
    for name in list(os.environ):
        if name.upper().startswith("CVD_"):
            monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()
    # drop console handlers bound to this test's captured stderr
    root = logging.getLogger()
    for handler in list(root.handlers):
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES


@pytest.fixture
def red_green_tokens():
    tokens = [
        ColorToken("fg", RED, TokenRole.TEXT),
        ColorToken("bg", DARK_GREEN, TokenRole.BACKGROUND),
    ]
    pairs = [AdjacencyPair("fg", "bg", Relation.TEXT_ON_BACKGROUND)]
    return tokens, pairs


@pytest.fixture
def black_white_tokens():
    tokens = [
        ColorToken("ink", BLACK, TokenRole.TEXT),
        ColorToken("paper", WHITE, TokenRole.BACKGROUND),
    ]
    pairs = [AdjacencyPair("ink", "paper", Relation.TEXT_ON_BACKGROUND)]
    return tokens, pairs


@pytest.fixture
def write_png(tmp_path):
    """Write a uint8 array (H, W, 3|4) as a PNG and return its path"""
    def _write(pixels, name: str = "in.png") -> Path:
        path = tmp_path / name
        Image.fromarray(np.asarray(pixels, dtype=np.uint8)).save(path, format="PNG")
        return path
    return _write


@pytest.fixture
def noise_pixels():
    rng = np.random.default_rng(1234)
    return rng.integers(0, 256, size=(37, 29, 3), dtype=np.uint8)
