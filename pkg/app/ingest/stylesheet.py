"""
Span-preserving stylesheet colour scanner and rewriter.

This is a tokenizer, not a CSS grammar. It tracks comments, strings and
braces well enough to find declaration values, and records every colour
literal in them with its exact byte span. Rule blocks are scanned; blocks of
conditional group at-rules (@media, @supports, @layer, @container) are
descended into; every other at-rule block and nested style rule is skipped
as opaque text.

Recognised literals: #rgb, #rgba, #rrggbb, #rrggbbaa, rgb()/rgba() with
integer or percent components, hsl()/hsla(), and the 16 basic colour
keywords. Custom properties (--name) are not scanned.
"""

import re
from collections import Counter
from dataclasses import dataclass
from itertools import accumulate
from typing import Dict, List, Optional, Sequence, Tuple, TypeVar, Union

from app.color.convert import hsl_to_srgb8, round_half_away
from app.core.exceptions import StylesheetConsistencyError, StylesheetParseError
from app.core.models import (
    AdjacencyPair,
    ColorToken,
    Hsl,
    RemapPlan,
    Relation,
    Srgb8,
    StyleOccurrence,
    TokenRole,
)
from app.utils.logging import create_logger

logger = create_logger(__name__, component='ingest')

NAMED_COLORS: Dict[str, Srgb8] = {
    "black": Srgb8(0, 0, 0),
    "silver": Srgb8(192, 192, 192),
    "gray": Srgb8(128, 128, 128),
    "white": Srgb8(255, 255, 255),
    "maroon": Srgb8(128, 0, 0),
    "red": Srgb8(255, 0, 0),
    "purple": Srgb8(128, 0, 128),
    "fuchsia": Srgb8(255, 0, 255),
    "green": Srgb8(0, 128, 0),
    "lime": Srgb8(0, 255, 0),
    "olive": Srgb8(128, 128, 0),
    "yellow": Srgb8(255, 255, 0),
    "navy": Srgb8(0, 0, 128),
    "blue": Srgb8(0, 0, 255),
    "teal": Srgb8(0, 128, 128),
    "aqua": Srgb8(0, 255, 255),
}

GROUP_AT_RULES = frozenset({"media", "supports", "layer", "container"})
TEXT_PROPERTIES = frozenset({"color"})
BACKGROUND_PROPERTIES = frozenset({"background", "background-color"})

# Bare keywords only count as colours in these properties; elsewhere an
# identifier such as "Red" may be part of a font or animation name.
KEYWORD_COLOR_PROPERTIES = frozenset({
    "color", "fill", "stroke", "box-shadow", "text-shadow",
    "column-rule", "text-decoration", "text-emphasis",
})
KEYWORD_COLOR_PREFIXES = ("background", "border", "outline")


def accepts_color_keyword(prop: str) -> bool:
    prop = prop.lower()
    return (
        prop in KEYWORD_COLOR_PROPERTIES
        or prop.endswith("-color")
        or prop.startswith(KEYWORD_COLOR_PREFIXES)
    )

_VALUE_TOKEN = re.compile(
    r"""
      (?P<comment>/\*.*?(?:\*/|\Z))
    | (?P<string>"(?:\\.|[^"\\])*"?|'(?:\\.|[^'\\])*'?)
    | (?P<url>(?<![\w-])url\()
    | (?P<func>(?<![\w-])(?:rgba?|hsla?)\()
    | (?P<hex>(?<![\w-])\#[0-9a-zA-Z]+(?![\w-]))
    | (?P<ident>(?<![\w\#-])[A-Za-z_][\w-]*(?![\w(-]))
    """,
    re.S | re.X | re.I,
)
_COMMENT = re.compile(r"/\*.*?(?:\*/|\Z)", re.S)
_PROPERTY_NAME = re.compile(r"^-?[A-Za-z_][\w-]*$")
_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_NUMBER_RE = re.compile(rf"^({_NUMBER})(%|deg)?$", re.I)
_FUNC_RE = re.compile(r"^(rgba?|hsla?)\((.*)\)$", re.S | re.I)

Text = TypeVar("Text", str, bytes)


@dataclass(frozen=True)
class ScanWarning:
    offset: int
    literal: str
    message: str


# ---------------------------------------------------------------------------
# Literal parsing
# ---------------------------------------------------------------------------

def _component(text: str, scale: float) -> float:
    """Number or percentage; percentages are mapped onto [0, scale]"""
    m = _NUMBER_RE.match(text.strip())
    if not m or (m.group(2) or "").lower() == "deg":
        raise ValueError(f"bad component {text!r}")
    value = float(m.group(1))
    return value / 100.0 * scale if m.group(2) else value


def _alpha(text: str) -> float:
    return min(1.0, max(0.0, _component(text, 1.0)))


def _split_args(args: str) -> Tuple[List[str], Optional[str]]:
    if "," in args:
        parts = [p.strip() for p in args.split(",")]
        if len(parts) == 4:
            return parts[:3], parts[3]
        return parts, None
    main, slash, alpha = args.partition("/")
    if not slash:
        return main.split(), None
    return main.split(), alpha.strip() or None


def _parse_function(name: str, args: str) -> Tuple[Srgb8, Optional[float]]:
    parts, alpha_text = _split_args(args)
    if len(parts) != 3:
        raise ValueError(f"{name}() needs 3 components, got {len(parts)}")
    alpha = _alpha(alpha_text) if alpha_text is not None else None

    if name.startswith("rgb"):
        channels = [round_half_away(min(255.0, max(0.0, _component(p, 255.0)))) for p in parts]
        return Srgb8(*channels), alpha

    m = _NUMBER_RE.match(parts[0].strip())
    if not m or m.group(2) == "%":
        raise ValueError(f"bad hue {parts[0]!r}")
    hue = float(m.group(1))
    sat = min(1.0, max(0.0, _component(parts[1], 100.0) / 100.0))
    light = min(1.0, max(0.0, _component(parts[2], 100.0) / 100.0))
    return hsl_to_srgb8(Hsl(hue, sat, light)), alpha


def _parse_hex(digits: str) -> Tuple[Srgb8, Optional[float]]:
    if len(digits) in (3, 4):
        digits = "".join(ch * 2 for ch in digits)
    if len(digits) not in (6, 8) or not all(ch in "0123456789abcdefABCDEF" for ch in digits):
        raise ValueError(f"bad hex colour #{digits}")
    color = Srgb8(int(digits[0:2], 16), int(digits[2:4], 16), int(digits[4:6], 16))
    alpha = int(digits[6:8], 16) / 255.0 if len(digits) == 8 else None
    return color, alpha


def parse_color_literal(literal: str) -> Tuple[Srgb8, Optional[float]]:
    """Parse a single colour literal; raises ValueError when it is not one"""
    text = literal.strip()
    if text.startswith("#"):
        return _parse_hex(text[1:])
    m = _FUNC_RE.match(text)
    if m:
        return _parse_function(m.group(1).lower(), m.group(2))
    named = NAMED_COLORS.get(text.lower())
    if named is not None:
        return named, None
    raise ValueError(f"not a colour literal: {literal!r}")


def format_color(color: Srgb8, alpha: Optional[float]) -> str:
    if alpha is None:
        return color.hex
    return f"{color.hex}{round_half_away(alpha * 255.0):02x}"


# ---------------------------------------------------------------------------
# Scanner
# ---------------------------------------------------------------------------

def _decode(text: Union[str, bytes]) -> str:
    if isinstance(text, bytes):
        return text.decode("utf-8", "surrogateescape")
    return text


def _encode(text: str) -> bytes:
    return text.encode("utf-8", "surrogateescape")


class StylesheetScanner:
    """Collects colour occurrences and skipped-literal warnings from one stylesheet"""

    def __init__(self, text: Union[str, bytes]):
        self.text = _decode(text)
        self.occurrences: List[StyleOccurrence] = []
        self.warnings: List[ScanWarning] = []
        self._rule_index = 0
        self._byte_at: Optional[List[int]] = None
        if not self.text.isascii():
            self._byte_at = [0, *accumulate(len(_encode(ch)) for ch in self.text)]

    def byte_offset(self, index: int) -> int:
        return index if self._byte_at is None else self._byte_at[index]

    def scan(self) -> List[StyleOccurrence]:
        self.occurrences.clear()
        self.warnings.clear()
        self._rule_index = 0
        self._rule_list(0, open_at=None)
        logger.debug("Scanned stylesheet", extra_data={
            'occurrences': len(self.occurrences),
            'warnings': len(self.warnings),
        })
        return list(self.occurrences)

    # -- lexical helpers --------------------------------------------------

    def _skip_comment(self, i: int) -> int:
        end = self.text.find("*/", i + 2)
        return len(self.text) if end < 0 else end + 2

    def _skip_string(self, i: int) -> int:
        quote = self.text[i]
        j = i + 1
        while j < len(self.text):
            ch = self.text[j]
            if ch == "\\":
                j += 2
                continue
            if ch == quote or ch == "\n":
                return j + 1
            j += 1
        return len(self.text)

    def _unclosed(self, open_at: int) -> StylesheetParseError:
        return StylesheetParseError("unclosed '{'", self.byte_offset(open_at))

    def _skip_block(self, open_at: int) -> int:
        depth = 0
        i = open_at
        text = self.text
        while i < len(text):
            ch = text[i]
            if text.startswith("/*", i):
                i = self._skip_comment(i)
                continue
            if ch in "\"'":
                i = self._skip_string(i)
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    return i + 1
            i += 1
        raise self._unclosed(open_at)

    # -- structure -------------------------------------------------------

    def _rule_list(self, i: int, open_at: Optional[int]) -> int:
        text = self.text
        prelude_start = i
        while i < len(text):
            ch = text[i]
            if text.startswith("/*", i):
                i = self._skip_comment(i)
            elif ch in "\"'":
                i = self._skip_string(i)
            elif ch == "{":
                prelude = " ".join(_COMMENT.sub(" ", text[prelude_start:i]).split())
                if prelude.startswith("@"):
                    name = re.match(r"@([\w-]*)", prelude).group(1).lower()
                    if name in GROUP_AT_RULES:
                        i = self._rule_list(i + 1, open_at=i)
                    else:
                        i = self._skip_block(i)
                else:
                    i = self._declarations(i + 1, prelude, open_at=i)
                prelude_start = i
            elif ch == ";":
                i += 1
                prelude_start = i
            elif ch == "}":
                if open_at is None:
                    raise StylesheetParseError("unmatched '}'", self.byte_offset(i))
                return i + 1
            else:
                i += 1
        if open_at is not None:
            raise self._unclosed(open_at)
        return i

    def _declarations(self, i: int, selector: str, open_at: int) -> int:
        text = self.text
        rule_index = self._rule_index
        self._rule_index += 1
        decl_start = i
        depth = 0
        while i < len(text):
            ch = text[i]
            if text.startswith("/*", i):
                i = self._skip_comment(i)
                continue
            if ch in "\"'":
                i = self._skip_string(i)
                continue
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth = max(0, depth - 1)
            elif ch == ";" and depth == 0:
                self._declaration(decl_start, i, selector, rule_index)
                decl_start = i + 1
            elif ch == "{":
                # nested rule: opaque
                i = self._skip_block(i)
                decl_start = i
                depth = 0
                continue
            elif ch == "}":
                self._declaration(decl_start, i, selector, rule_index)
                return i + 1
            i += 1
        raise self._unclosed(open_at)

    def _declaration(self, start: int, end: int, selector: str, rule_index: int) -> None:
        chunk = self.text[start:end]
        colon = chunk.find(":")
        if colon < 0:
            return
        name = _COMMENT.sub("", chunk[:colon]).strip()
        if not _PROPERTY_NAME.match(name):
            return
        self._scan_value(start + colon + 1, end, selector, name.lower(), rule_index)

    def _scan_value(self, start: int, end: int, selector: str, prop: str, rule_index: int) -> None:
        text = self.text
        pos = start
        while True:
            m = _VALUE_TOKEN.search(text, pos, end)
            if not m:
                return
            kind = m.lastgroup
            lit_start, lit_end = m.start(), m.end()
            pos = lit_end

            if kind in ("comment", "string"):
                continue
            if kind == "url":
                close = text.find(")", lit_end, end)
                pos = end if close < 0 else close + 1
                continue
            if kind == "func":
                close = self._matching_paren(lit_end, end)
                if close < 0:
                    self._warn(lit_start, text[lit_start:end], "unterminated colour function")
                    return
                lit_end = close + 1
                pos = lit_end
            elif kind == "ident" and (
                m.group("ident").lower() not in NAMED_COLORS or not accepts_color_keyword(prop)
            ):
                continue

            literal = text[lit_start:lit_end]
            try:
                color, alpha = parse_color_literal(literal)
            except ValueError as e:
                self._warn(lit_start, literal, str(e))
                continue
            self.occurrences.append(StyleOccurrence(
                selector=selector,
                property=prop,
                byte_span=(self.byte_offset(lit_start), self.byte_offset(lit_end)),
                color=color,
                alpha=alpha,
                rule_index=rule_index,
                literal=literal,
            ))

    def _matching_paren(self, i: int, end: int) -> int:
        depth = 1
        while i < end:
            ch = self.text[i]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    return i
            i += 1
        return -1

    def _warn(self, index: int, literal: str, message: str) -> None:
        warning = ScanWarning(offset=self.byte_offset(index), literal=literal, message=message)
        self.warnings.append(warning)
        logger.warning(f"Skipped colour literal {literal!r} at byte {warning.offset}: {message}")


def scan_stylesheet(text: Union[str, bytes]) -> List[StyleOccurrence]:
    return StylesheetScanner(text).scan()


# ---------------------------------------------------------------------------
# Tokens and adjacency
# ---------------------------------------------------------------------------

def token_id_for(color: Srgb8) -> str:
    return "c_" + color.hex[1:]


def role_for(prop: str) -> TokenRole:
    if prop in TEXT_PROPERTIES:
        return TokenRole.TEXT
    if prop in BACKGROUND_PROPERTIES:
        return TokenRole.BACKGROUND
    return TokenRole.DECORATION


def derive_adjacency(
    occurrences: Sequence[StyleOccurrence],
) -> Tuple[List[ColorToken], List[AdjacencyPair]]:
    """
    One token per distinct colour (weight = occurrence count) and a
    TextOnBackground pair for every rule block that sets both a text colour
    and a background colour. The last declaration of each kind in a block wins.
    """
    counts = Counter(o.color for o in occurrences)
    first_role: Dict[Srgb8, TokenRole] = {}
    for o in occurrences:
        first_role.setdefault(o.color, role_for(o.property))

    tokens = [
        ColorToken(id=token_id_for(c), color=c, role=first_role[c], weight=counts[c])
        for c in sorted(counts, key=lambda c: c.hex)
    ]

    text_by_rule: Dict[int, Srgb8] = {}
    background_by_rule: Dict[int, Srgb8] = {}
    for o in occurrences:
        if o.property in TEXT_PROPERTIES:
            text_by_rule[o.rule_index] = o.color
        elif o.property in BACKGROUND_PROPERTIES:
            background_by_rule[o.rule_index] = o.color

    pairs: List[AdjacencyPair] = []
    seen = set()
    for rule_index in sorted(text_by_rule.keys() & background_by_rule.keys()):
        fg, bg = text_by_rule[rule_index], background_by_rule[rule_index]
        if fg == bg:
            continue
        key = frozenset((fg, bg))
        if key in seen:
            continue
        seen.add(key)
        pairs.append(AdjacencyPair(token_id_for(fg), token_id_for(bg), Relation.TEXT_ON_BACKGROUND))
    return tokens, pairs


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------

def rewrite_stylesheet(text: Text, occurrences: Sequence[StyleOccurrence], plan: RemapPlan) -> Text:
    """
    Replace the span of every remapped occurrence with a lowercase hex literal.

    Bytes outside replaced spans are copied verbatim. Returns the same type
    (str or bytes) it was given.
    """
    data = _encode(text) if isinstance(text, str) else bytes(text)
    mapping = plan.color_map()
    ordered = sorted(occurrences, key=lambda o: o.byte_span)

    pieces: List[bytes] = []
    cursor = 0
    previous_end = 0
    for occ in ordered:
        start, end = occ.byte_span
        if start < previous_end or end > len(data):
            raise StylesheetConsistencyError(f"Span {occ.byte_span} overlaps or exceeds the source")
        previous_end = end
        if occ.color not in mapping:
            continue
        literal = data[start:end].decode("utf-8", "surrogateescape")
        try:
            parsed = parse_color_literal(literal)
        except ValueError as e:
            raise StylesheetConsistencyError(
                f"Span {occ.byte_span} holds {literal!r}, not a colour literal"
            ) from e
        if parsed[0] != occ.color:
            raise StylesheetConsistencyError(
                f"Span {occ.byte_span} holds {literal!r}, expected {occ.color.hex}"
            )
        pieces.append(data[cursor:start])
        pieces.append(format_color(mapping[occ.color], occ.alpha).encode("ascii"))
        cursor = end
    pieces.append(data[cursor:])

    out = b"".join(pieces)
    return out.decode("utf-8", "surrogateescape") if isinstance(text, str) else out
