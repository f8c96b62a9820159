"""
Custom exception hierarchy for better error handling and reporting.
"""

from typing import Optional


class CvdError(Exception):
    """Base exception for all toolkit errors"""
    pass


class ValidationError(CvdError):
    """Raised when input validation fails"""
    def __init__(self, errors: list[str], warnings: Optional[list[str]] = None):
        self.errors = errors
        self.warnings = warnings or []
        message = f"Validation failed with {len(errors)} error(s): " + "; ".join(errors)
        super().__init__(message)


class PaletteValidationError(ValidationError):
    """Raised when a palette document is malformed"""
    def __init__(self, errors: list[str], path: str = "", line: Optional[int] = None):
        self.path = path
        self.line = line
        super().__init__(errors)


class UnknownTokenError(ValidationError):
    """Raised when an adjacency pair names a token id that does not exist"""
    def __init__(self, token_id: str):
        self.token_id = token_id
        super().__init__([f"Unknown token id in adjacency: {token_id!r}"])


class ColorParseError(ValidationError):
    """Raised when a colour literal cannot be parsed"""
    def __init__(self, literal: str, reason: str = "not a recognised colour"):
        self.literal = literal
        super().__init__([f"{literal!r}: {reason}"])


class StylesheetParseError(CvdError):
    """Raised when a stylesheet is structurally unreadable"""
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at byte {offset}")


class StylesheetConsistencyError(CvdError):
    """Raised when occurrence spans do not match the text being rewritten"""
    pass


class ImageFormatError(CvdError):
    """Raised when a raster image cannot be decoded"""
    def __init__(self, path: str, message: str, position: int = 0):
        self.path = path
        self.position = position
        super().__init__(f"{path}: byte {position}: {message}")


class ConfigurationError(CvdError):
    """Raised when configuration is invalid"""
    pass
