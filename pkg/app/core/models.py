"""
Core domain models for the colour-vision toolkit.
Uses dataclasses for immutability and pydantic for the tuning knobs.
"""

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field


# Row-major 3x3 float matrix
Mat3 = npt.NDArray[np.float64]


def mat3(rows: Sequence[Sequence[float]]) -> Mat3:
    """Build a read-only 3x3 matrix, rejecting bad shapes and non-finite entries"""
    m = np.array(rows, dtype=np.float64)
    if m.shape != (3, 3):
        raise ValueError(f"Mat3 needs shape (3, 3), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("Mat3 entries must be finite")
    m.setflags(write=False)
    return m


_HEX_RE = re.compile(r"^#?(?P<h>[0-9a-fA-F]{3}|[0-9a-fA-F]{6})$")


# ---------------------------------------------------------------------------
# Colour values
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Srgb8:
    """Gamma-encoded 8-bit sRGB colour"""
    r: int
    g: int
    b: int

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v <= 255:
                raise ValueError(f"Srgb8.{name} must be an integer in [0, 255], got {v!r}")
            object.__setattr__(self, name, int(v))

    @classmethod
    def from_hex(cls, text: str) -> "Srgb8":
        m = _HEX_RE.match(text.strip())
        if not m:
            raise ValueError(f"Invalid hex colour: {text!r}. Expected #rgb or #rrggbb.")
        h = m.group("h")
        if len(h) == 3:
            h = "".join(ch * 2 for ch in h)
        return cls(int(h[0:2], 16), int(h[2:4], 16), int(h[4:6], 16))

    @property
    def hex(self) -> str:
        return f"#{self.r:02x}{self.g:02x}{self.b:02x}"

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.r, self.g, self.b)

    def __str__(self) -> str:
        return self.hex


@dataclass(frozen=True)
class LinearRgb:
    """Linear-light RGB; channels are clamped to [0, 1] on construction"""
    r: float
    g: float
    b: float

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"LinearRgb.{name} must be finite, got {v!r}")
            object.__setattr__(self, name, min(1.0, max(0.0, v)))

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.r, self.g, self.b)


@dataclass(frozen=True)
class Lms:
    """Cone responses; may go negative after projection"""
    l: float
    m: float
    s: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.l, self.m, self.s)):
            raise ValueError(f"Lms components must be finite: {self}")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.l, self.m, self.s)


@dataclass(frozen=True)
class Hsl:
    """Hue in degrees [0, 360), saturation and lightness in [0, 1]"""
    h: float
    s: float
    l: float

    def __post_init__(self):
        for name in ("s", "l"):
            v = float(getattr(self, name))
            if not -1e-9 <= v <= 1.0 + 1e-9:
                raise ValueError(f"Hsl.{name} must be in [0, 1], got {v!r}")
            object.__setattr__(self, name, min(1.0, max(0.0, v)))
        h = float(self.h) % 360.0
        if h >= 360.0 or self.s == 0.0:
            h = 0.0
        object.__setattr__(self, "h", h)


@dataclass(frozen=True)
class LabColor:
    """CIELAB coordinates under D65"""
    l_star: float
    a_star: float
    b_star: float

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.l_star, self.a_star, self.b_star)


class Dichromacy(Enum):
    """Supported dichromacy types, in canonical order"""
    PROTANOPIA = "protan"
    DEUTERANOPIA = "deutan"
    TRITANOPIA = "tritan"

    @classmethod
    def parse(cls, name: str) -> "Dichromacy":
        """Accept short names, full names and enum names, case-insensitively"""
        key = name.strip().lower()
        for kind in cls:
            if key in (kind.value, kind.name.lower()):
                return kind
        raise ValueError(f"Unknown dichromacy type: {name!r} (use protan, deutan or tritan)")

    @classmethod
    def ordered(cls, kinds) -> Tuple["Dichromacy", ...]:
        chosen = set(kinds)
        return tuple(k for k in cls if k in chosen)


ALL_KINDS: Tuple[Dichromacy, ...] = tuple(Dichromacy)


# ---------------------------------------------------------------------------
# Conflict detection
# ---------------------------------------------------------------------------

class TokenRole(Enum):
    TEXT = "text"
    BACKGROUND = "background"
    DECORATION = "decoration"


class Relation(Enum):
    TEXT_ON_BACKGROUND = "text-on-background"
    NEIGHBORS = "neighbors"


@dataclass(frozen=True)
class ColorToken:
    """A named colour in a document"""
    id: str
    color: Srgb8
    role: TokenRole = TokenRole.DECORATION
    weight: int = 1

    def __post_init__(self):
        if not self.id:
            raise ValueError("ColorToken id cannot be empty")
        if self.weight < 1:
            raise ValueError(f"ColorToken {self.id} weight must be >= 1, got {self.weight}")

    def with_color(self, color: Srgb8) -> "ColorToken":
        return ColorToken(id=self.id, color=color, role=self.role, weight=self.weight)


@dataclass(frozen=True)
class AdjacencyPair:
    """Two tokens whose distinguishability must be preserved"""
    a: str
    b: str
    relation: Relation = Relation.NEIGHBORS

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"Adjacency pair cannot join {self.a!r} to itself")

    def to_dict(self) -> Dict[str, Any]:
        return {"a": self.a, "b": self.b, "relation": self.relation.value}


class ConflictThresholds(BaseModel):
    """Gates in CIE76 delta-E units"""
    model_config = ConfigDict(frozen=True)

    distinct_normal: float = Field(default=15.0, gt=0.0)
    confusable_sim: float = Field(default=12.0, gt=0.0)


@dataclass(frozen=True)
class PairScore:
    """Distances between two colours under normal and simulated vision"""
    de_normal: float
    de_sim: Mapping[Dichromacy, float]


@dataclass(frozen=True)
class ConflictReport:
    pair: AdjacencyPair
    de_normal: float
    de_sim: Mapping[Dichromacy, float]
    conflicting_kinds: Tuple[Dichromacy, ...]
    severity: float

    def __post_init__(self):
        if not self.conflicting_kinds:
            raise ValueError("ConflictReport needs at least one conflicting kind")
        if not 0.0 < self.severity <= 1.0:
            raise ValueError(f"ConflictReport severity out of (0, 1]: {self.severity}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pair": self.pair.to_dict(),
            "de_normal": round(self.de_normal, 2),
            "de_sim": {k.value: round(v, 2) for k, v in self.de_sim.items()},
            "conflicting_kinds": [k.value for k in self.conflicting_kinds],
            "severity": round(self.severity, 2),
        }


# ---------------------------------------------------------------------------
# Remapping
# ---------------------------------------------------------------------------

DEFAULT_LIGHTNESS_STEPS: Tuple[float, ...] = (0.0, 0.05, -0.05, 0.10, -0.10, 0.20, -0.20)


class RemapPolicy(BaseModel):
    """Search space for replacement colours"""
    model_config = ConfigDict(frozen=True)

    hue_step: float = Field(default=15.0, gt=0.0)
    max_rotation: float = Field(default=180.0, ge=0.0, le=180.0)
    lightness_steps: Tuple[float, ...] = Field(default=DEFAULT_LIGHTNESS_STEPS, min_length=1)
    max_passes: int = Field(default=4, ge=1)
    opposite_first: bool = False


@dataclass(frozen=True)
class RemapEntry:
    token_id: str
    original: Srgb8
    replacement: Srgb8
    rotation: float
    lightness_offset: float

    def __post_init__(self):
        if self.original == self.replacement:
            raise ValueError(f"RemapEntry for {self.token_id} does not change the colour")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.token_id,
            "original": self.original.hex,
            "replacement": self.replacement.hex,
            "rotation": self.rotation,
            "lightness_offset": self.lightness_offset,
        }


@dataclass(frozen=True)
class RemapPlan:
    entries: Tuple[RemapEntry, ...] = ()
    unresolved: Tuple[ConflictReport, ...] = ()

    def __post_init__(self):
        ids = [e.token_id for e in self.entries]
        if len(ids) != len(set(ids)):
            raise ValueError("RemapPlan lists a token id more than once")

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def replacements(self) -> Dict[str, Srgb8]:
        return {e.token_id: e.replacement for e in self.entries}

    def color_map(self) -> Dict[Srgb8, Srgb8]:
        """original colour -> replacement colour"""
        return {e.original: e.replacement for e in self.entries}

    def apply(self, tokens: Sequence[ColorToken]) -> List[ColorToken]:
        repl = self.replacements()
        return [t.with_color(repl[t.id]) if t.id in repl else t for t in tokens]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "unresolved": [r.to_dict() for r in self.unresolved],
        }


# ---------------------------------------------------------------------------
# Ingested documents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PaletteDoc:
    colors: Tuple[ColorToken, ...] = ()
    adjacency: Optional[Tuple[AdjacencyPair, ...]] = None
    complete_graph: bool = True

    @property
    def token_count(self) -> int:
        return len(self.colors)


@dataclass(frozen=True)
class StyleOccurrence:
    """A colour literal inside a declaration value"""
    selector: str
    property: str
    byte_span: Tuple[int, int]
    color: Srgb8
    alpha: Optional[float] = None
    rule_index: int = 0
    literal: str = field(default="", compare=False)

    def __post_init__(self):
        start, end = self.byte_span
        if not 0 <= start < end:
            raise ValueError(f"Invalid byte span {self.byte_span}")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"Alpha out of [0, 1]: {self.alpha}")
