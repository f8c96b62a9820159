"""Dichromacy simulation and daltonization."""

from app.core.models import Dichromacy
from app.vision.daltonize import daltonize_color, daltonize_image
from app.vision.simulate import (
    SimulationMatrix,
    simulate_color,
    simulate_image,
    simulate_pixels,
    simulation_matrix,
)

__all__ = [
    "Dichromacy",
    "SimulationMatrix",
    "daltonize_color",
    "daltonize_image",
    "simulate_color",
    "simulate_image",
    "simulate_pixels",
    "simulation_matrix",
]
