"""Exception types shared across the package."""

from __future__ import annotations


class Compact64Error(Exception):
    """Base class for all errors raised by compact64."""


class PatternError(Compact64Error, ValueError):
    """A digit pattern could not be parsed."""

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"bad digit pattern {text!r} at position {position}: {reason}")


class ConflictError(Compact64Error):
    """Two target values demand different low words at the same table index."""

    def __init__(self, index: int, existing_entry: int, existing_value: float, offending_value: float):
        self.index = index
        self.existing_entry = existing_entry
        self.existing_value = existing_value
        self.offending_value = offending_value
        super().__init__(
            f"table index {index} already holds 0x{existing_entry:08X} "
            f"(from {existing_value!r}); {offending_value!r} needs a different low word"
        )


class Infeasible(Compact64Error):
    """No mantissa bit count up to the search limit yields a valid table."""


class TooManyDistinctError(Compact64Error):
    """A table has more distinct entries than a 16-bit index can address."""


class NotRepresentable(Compact64Error, ValueError):
    """A value cannot be stored in the requested compact form."""

    def __init__(self, value: float, detail: str = "", index: int | None = None):
        self.value = value
        self.index = index
        where = f" at index {index}" if index is not None else ""
        msg = f"{value!r}{where} is not representable"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class TableFormatError(Compact64Error, ValueError):
    """A serialized table file is malformed."""
