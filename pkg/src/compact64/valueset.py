"""Target sets of doubles that a scheme must reproduce exactly.

A set is built from fixed-point digit patterns such as ``"ddd.ddd"`` (every
``d`` ranges over 0-9, other digits are literal), from rational grids
``n/q``, or from explicit lists. Members are held as a sorted, deduplicated
array of 64-bit patterns.

Decimal text is converted with correct rounding. Whenever the digit string
is an integer below 2**53 and the scale is at most 10**22, both operands of
``N / 10**k`` are exact doubles and one IEEE division rounds the exact
quotient; otherwise each text goes through ``float()``, which CPython
implements with correct rounding.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import PatternError
from .floatbits import NA_BITS, SIGN_BIT, as_bits

_EXACT_INT = 2**53
_EXACT_POW10 = 22
MAX_FREE_DIGITS = 8

# Forms whose expansions (plus negations and NA) make up each named set.
BUILTIN_FORMS: dict[str, tuple[str, ...]] = {
    "A": ("ddddd.d",),
    "B": ("dddd.dd",),
    "C": ("dddd.", "ddd.ddd"),
    "D": ("ddd.d", "dd.dddd"),
    "E": ("dd.dd", "d.ddddd"),
    "F": ("dd.", "d.ddd", ".dddddd"),
    "W": ("ddddd0.", "ddddd.d", "dddd.dd", "ddd.ddd", "dd.dddd"),
    "X": (
        "dd0000000.", "dd000000.", "dddd000.", "dddddd.", "ddddd.d",
        "dddd.dd", "ddd.ddd", "dd.dddd", ".000dd", ".0000dd", ".00000dd",
        ".000000dd", ".0000000dd", ".00000000dd", ".000000000dd",
    ),
    "Y": (
        "d0000000.", "dddd000.", "dddddd.", "ddddd.d", "dddd.dd",
        "ddd.ddd", "dd.dddd", "d.ddddd", ".000ddd", ".0000ddd",
        ".00000ddd", ".000000ddd", ".0000000ddd", ".00000000ddd",
        ".000000000ddd",
    ),
    "Z": (
        "dd0000000.", "ddd00000.", "dddd000.", "dddddd.", "ddddd.d",
        "dddd.dd", "ddd.ddd", "dd.dddd", "d.ddddd", ".dddddd",
        ".0000ddd", ".00000ddd", ".000000ddd", ".0000000ddd",
        ".00000000ddd", ".000000000ddd",
    ),
}

# Extra forms the Y layout absorbs without growing its tables.
Y_EXTENSION_FORMS = ("1dddddd.", "1ddd.ddd")


@dataclass(frozen=True)
class DigitPattern:
    """A fixed-point form like ``"ddd.ddd"`` or ``"1ddd.ddd"``."""

    text: str

    def __post_init__(self):
        text = self.text
        if not text:
            raise PatternError(text, 0, "empty pattern")
        points = 0
        digits = 0
        for pos, ch in enumerate(text):
            if ch == ".":
                points += 1
                if points > 1:
                    raise PatternError(text, pos, "more than one decimal point")
            elif ch == "d" or ch in "0123456789":
                digits += 1
            else:
                raise PatternError(text, pos, f"unexpected character {ch!r}")
        if digits == 0:
            raise PatternError(text, 0, "no digit positions")
        if self.free_digits > MAX_FREE_DIGITS:
            raise PatternError(text, 0, f"more than {MAX_FREE_DIGITS} free digits")

    @property
    def free_digits(self) -> int:
        return self.text.count("d")

    @property
    def scale(self) -> int:
        """Number of digit positions right of the point."""
        _, point, frac = self.text.partition(".")
        return len(frac) if point else 0

    def __len__(self) -> int:
        return 10**self.free_digits

    def texts(self) -> Iterable[str]:
        """Decimal strings matching the pattern, in enumeration order."""
        slots = [i for i, ch in enumerate(self.text) if ch == "d"]
        chars = list(self.text)
        for k in range(len(self)):
            for j, pos in enumerate(reversed(slots)):
                chars[pos] = "0123456789"[(k // 10**j) % 10]
            yield "".join(chars)

    def values(self) -> np.ndarray:
        """Correctly rounded doubles for every digit assignment, as float64.

        Element ``k`` is the text whose free digits, read left to right, spell
        ``k`` in decimal (with leading zeros).
        """
        digits = self.text.replace(".", "")
        width = len(digits)
        literal = 0
        weights = []
        for j, ch in enumerate(digits):
            w = width - 1 - j
            if ch == "d":
                weights.append(w)
            else:
                literal += int(ch) * 10**w
        largest = literal + sum(9 * 10**w for w in weights)
        if largest >= _EXACT_INT or self.scale > _EXACT_POW10:
            return np.array([float(t) for t in self.texts()], dtype=np.float64)

        count = len(self)
        k = np.arange(count, dtype=np.int64)
        n = np.full(count, literal, dtype=np.int64)
        for j, w in enumerate(reversed(weights)):
            n += (k // 10**j) % 10 * 10**w
        out = n.astype(np.float64)
        if self.scale:
            out /= float(10**self.scale)
        return out


@dataclass(frozen=True)
class RationalGrid:
    """Nearest doubles to ``n/q`` for ``n_min <= n <= n_max``, ``1 <= q <= q_max``."""

    n_min: int
    n_max: int
    q_max: int

    def __post_init__(self):
        if self.q_max < 1:
            raise ValueError("q_max must be at least 1")
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        if max(abs(self.n_min), abs(self.n_max), self.q_max) >= _EXACT_INT:
            raise ValueError("grid bounds must stay below 2**53")

    def values(self) -> np.ndarray:
        n = np.arange(self.n_min, self.n_max + 1, dtype=np.int64).astype(np.float64)
        return np.concatenate([n / float(q) for q in range(1, self.q_max + 1)])


@dataclass(frozen=True)
class ValueSet:
    """Immutable, sorted, deduplicated set of 64-bit patterns."""

    bits: np.ndarray = field(repr=False)
    include_na: bool = True
    include_negations: bool = True

    @classmethod
    def build(cls, parts: Iterable, include_na: bool = True, include_negations: bool = True) -> "ValueSet":
        arrays = [as_bits(p).ravel() for p in parts]
        bits = np.concatenate(arrays) if arrays else np.empty(0, dtype=np.uint64)
        if include_negations:
            na = bits == np.uint64(NA_BITS)
            bits = np.concatenate([bits, bits[~na] ^ np.uint64(SIGN_BIT)])
        if include_na:
            bits = np.concatenate([bits, np.array([NA_BITS], dtype=np.uint64)])
        bits = np.unique(bits)
        bits.setflags(write=False)
        return cls(bits, include_na, include_negations)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.floats().tolist())

    def __contains__(self, v: float) -> bool:
        b = np.float64(v).view(np.uint64)
        i = np.searchsorted(self.bits, b)
        return bool(i < len(self.bits) and self.bits[i] == b)

    def floats(self) -> np.ndarray:
        return self.bits.view(np.float64)

    def union(self, other: "ValueSet") -> "ValueSet":
        return ValueSet.build(
            [self.bits, other.bits],
            include_na=self.include_na or other.include_na,
            include_negations=self.include_negations and other.include_negations,
        )


def _as_pattern(p) -> DigitPattern:
    return p if isinstance(p, DigitPattern) else DigitPattern(p)


def expand_pattern(p, include_na: bool = True, include_negations: bool = True) -> ValueSet:
    return ValueSet.build([_as_pattern(p).values()], include_na, include_negations)


def expand_patterns(patterns: Iterable, include_na: bool = True, include_negations: bool = True) -> ValueSet:
    return ValueSet.build([_as_pattern(p).values() for p in patterns], include_na, include_negations)


def expand_rationals(grid: RationalGrid, include_na: bool = True, include_negations: bool = False) -> ValueSet:
    # The symmetric numerator range already supplies negations; flipping
    # signs here would only add -0.0.
    return ValueSet.build([grid.values()], include_na, include_negations)


def explicit_set(values: Sequence[float], include_na: bool = True, include_negations: bool = True) -> ValueSet:
    return ValueSet.build([np.asarray(values, dtype=np.float64)], include_na, include_negations)


def builtin_set(name: str) -> ValueSet:
    try:
        forms = BUILTIN_FORMS[name.upper()]
    except KeyError:
        raise KeyError(f"unknown scheme {name!r}; expected one of {', '.join(BUILTIN_FORMS)}") from None
    return expand_patterns(forms)


@dataclass
class PatternSpec:
    """Contents of a pattern file: forms plus optional scheme directives."""

    patterns: list[DigitPattern]
    m: int | None = None
    e: int | None = None
    f: int | None = None
    negations: bool = True
    na: bool = True

    def value_set(self) -> ValueSet:
        return expand_patterns(self.patterns, include_na=self.na, include_negations=self.negations)


_INT_DIRECTIVES = ("m", "e", "f")
_FLAG_DIRECTIVES = ("negations", "na")


def parse_pattern_spec(text: str, source: str = "<string>") -> PatternSpec:
    """Parse pattern-file text.

    One pattern per line; blank lines and ``#`` comments are skipped. Lines
    of the form ``key=value`` set ``m``, ``e``, ``f`` (integers) or
    ``negations``, ``na`` (0 or 1).
    """
    spec = PatternSpec(patterns=[])
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line:
            key, _, value = (s.strip() for s in line.partition("="))
            try:
                number = int(value)
            except ValueError:
                raise ValueError(f"{source}:{lineno}: directive {key!r} needs an integer, got {value!r}") from None
            if key in _INT_DIRECTIVES:
                setattr(spec, key, number)
            elif key in _FLAG_DIRECTIVES:
                if number not in (0, 1):
                    raise ValueError(f"{source}:{lineno}: {key} must be 0 or 1")
                setattr(spec, key, bool(number))
            else:
                raise ValueError(f"{source}:{lineno}: unknown directive {key!r}")
            continue
        try:
            spec.patterns.append(DigitPattern(line))
        except PatternError as exc:
            raise PatternError(exc.text, exc.position, f"{exc.reason} ({source}:{lineno})") from None
    if not spec.patterns:
        raise ValueError(f"{source}: no patterns")
    return spec


def read_pattern_file(path: str | os.PathLike) -> PatternSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_pattern_spec(fh.read(), source=str(path))
