"""
Palette documents: JSON in, PaletteDoc out, and back.

Schema:
    {"colors": [{"id": str, "hex": "#rrggbb", "role": "text"|"background"|"decoration"?,
                 "weight": int?}],
     "adjacency": [[idA, idB], ...]?}
"""

import json
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as SchemaError

from app.core.exceptions import PaletteValidationError
from app.core.models import AdjacencyPair, ColorToken, PaletteDoc, Relation, Srgb8, TokenRole
from app.rules.conflict import expand_adjacency
from app.rules.validation import PaletteValidator
from app.utils.logging import create_logger

logger = create_logger(__name__, component='ingest')

HEX_PATTERN = r"^#(?:[0-9a-fA-F]{3}|[0-9a-fA-F]{6})$"


class PaletteColorSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    hex: str = Field(pattern=HEX_PATTERN)
    role: Literal["text", "background", "decoration"] = "decoration"
    weight: int = Field(default=1, ge=1)


class PaletteSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    colors: List[PaletteColorSchema] = Field(default_factory=list)
    adjacency: Optional[List[Tuple[str, str]]] = None


def _line_locator(text: str):
    def locate(needle: str, nth: int = 0) -> Optional[int]:
        pos = -1
        for _ in range(nth + 1):
            pos = text.find(needle, pos + 1)
            if pos < 0:
                return None
        return text.count("\n", 0, pos) + 1
    return locate


def _relation_for(a: ColorToken, b: ColorToken) -> Relation:
    roles = {a.role, b.role}
    if roles == {TokenRole.TEXT, TokenRole.BACKGROUND}:
        return Relation.TEXT_ON_BACKGROUND
    return Relation.NEIGHBORS


def parse_palette(text: str) -> PaletteDoc:
    """Parse palette JSON; a missing adjacency list means the complete graph"""
    locate = _line_locator(text)

    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise PaletteValidationError([f"Malformed JSON: {e.msg} (line {e.lineno})"], path="", line=e.lineno) from e

    try:
        schema = PaletteSchema.model_validate(raw)
    except SchemaError as e:
        first = e.errors()[0]
        path = ".".join(str(p) for p in first["loc"])
        bad = first.get("input")
        line = locate(f'"{bad}"') if isinstance(bad, str) else None
        errors = [
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        ]
        if line:
            errors[0] += f" (line {line})"
        raise PaletteValidationError(errors, path=path, line=line) from e

    colors = tuple(
        ColorToken(
            id=c.id,
            color=Srgb8.from_hex(c.hex),
            role=TokenRole(c.role),
            weight=c.weight,
        )
        for c in schema.colors
    )
    by_id = {t.id: t for t in colors}

    adjacency: Optional[Tuple[AdjacencyPair, ...]] = None
    if schema.adjacency is not None:
        pairs = []
        for i, (a, b) in enumerate(schema.adjacency):
            if a == b:
                raise PaletteValidationError(
                    [f"adjacency[{i}]: color {a} cannot be adjacent to itself"],
                    path=f"adjacency.{i}",
                    line=locate(f'"{a}"', 1),
                )
            relation = _relation_for(by_id[a], by_id[b]) if a in by_id and b in by_id else Relation.NEIGHBORS
            pairs.append(AdjacencyPair(a, b, relation))
        adjacency = tuple(pairs)

    PaletteValidator(locate).validate(colors, adjacency)

    doc = PaletteDoc(colors=colors, adjacency=adjacency, complete_graph=adjacency is None)
    logger.debug("Parsed palette", extra_data={
        'colors': doc.token_count,
        'complete_graph': doc.complete_graph,
    })
    return doc


def load_palette(path: Union[str, Path]) -> PaletteDoc:
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise PaletteValidationError(
            [f"{path}: not valid UTF-8 (byte {e.start})"],
            path="",
            line=data.count(b"\n", 0, e.start) + 1,
        ) from e
    return parse_palette(text)


def palette_edges(doc: PaletteDoc) -> List[AdjacencyPair]:
    return expand_adjacency(doc.colors, doc.adjacency, doc.complete_graph)


def palette_to_dict(doc: PaletteDoc) -> dict:
    data: dict = {
        "colors": [
            {"id": t.id, "hex": t.color.hex, "role": t.role.value, "weight": t.weight}
            for t in doc.colors
        ]
    }
    if doc.adjacency is not None:
        data["adjacency"] = [[p.a, p.b] for p in doc.adjacency]
    return data


def serialize_palette(doc: PaletteDoc) -> str:
    return json.dumps(palette_to_dict(doc), indent=2) + "\n"
