"""
Validation of palette documents before conflict detection.
"""

from typing import Callable, List, Optional, Sequence

from app.core.exceptions import PaletteValidationError
from app.core.models import AdjacencyPair, ColorToken


class PaletteValidator:
    """Checks token ids and adjacency references of a parsed palette"""

    def __init__(self, locate: Optional[Callable[[str, int], Optional[int]]] = None):
        # maps a value back to its source line, when the caller has the text
        self.locate = locate or (lambda _value, _nth: None)

    def validate(
        self,
        colors: Sequence[ColorToken],
        adjacency: Optional[Sequence[AdjacencyPair]],
    ) -> None:
        errors: List[str] = []
        first_path = ""
        first_line: Optional[int] = None

        def fail(path: str, message: str, needle: str, nth: int = 0) -> None:
            nonlocal first_path, first_line
            line = self.locate(needle, nth)
            errors.append(f"{path}: {message}" + (f" (line {line})" if line else ""))
            if not first_path:
                first_path, first_line = path, line

        seen = set()
        for i, token in enumerate(colors):
            if token.id in seen:
                fail(f"colors[{i}].id", f"Duplicate color id: {token.id}", f'"{token.id}"', nth=1)
            seen.add(token.id)

        for i, pair in enumerate(adjacency or ()):
            for side, token_id in (("0", pair.a), ("1", pair.b)):
                if token_id not in seen:
                    fail(f"adjacency[{i}][{side}]", f"Unknown color id: {token_id}", f'"{token_id}"')

        if errors:
            raise PaletteValidationError(errors, path=first_path, line=first_line)
