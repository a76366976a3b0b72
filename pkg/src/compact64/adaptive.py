"""A growable numeric vector that stays compact while it can.

Every scheme stores a value as the same upper-half word, so a vector of
compact words can be decodable by several schemes at once. The vector keeps
the set of registered schemes that still represent every element and
narrows it as values arrive. When no candidate is left, the contents are
expanded to plain doubles for good.
"""

from __future__ import annotations

from array import array
from typing import Iterable, Sequence

from . import codec
from .codec import SchemeHandle
from .floatbits import to_bits, upper32

COMPRESSED = "compressed"
PLAIN = "plain"


class AdaptiveVector:
    """Vector of doubles with reads bit-identical to a plain ``list``.

    ``schemes`` defaults to the ten built-in schemes. Reads in compressed mode
    use the candidate with the smallest direct table. With ``debug=True`` each
    read also checks that all candidates agree on the element.
    """

    def __init__(self, values: Iterable[float] = (), schemes: Sequence[SchemeHandle] | None = None,
                 debug: bool = False):
        if schemes is None:
            schemes = codec.builtin_schemes()
        if not schemes:
            raise ValueError("at least one scheme is required")
        self.schemes = tuple(schemes)
        self.debug = debug
        self._candidates = self.schemes
        self._active = self._fastest(self._candidates)
        self._words: array | None = array("I")
        self._doubles: array | None = None
        self.extend(values)

    @staticmethod
    def _fastest(candidates):
        return min(candidates, key=lambda s: s.direct_bytes) if candidates else None

    @property
    def mode(self) -> str:
        return PLAIN if self._words is None else COMPRESSED

    @property
    def is_compressed(self) -> bool:
        return self._words is not None

    @property
    def candidates(self) -> tuple[SchemeHandle, ...]:
        return self._candidates

    @property
    def active(self) -> SchemeHandle | None:
        return self._active

    def __len__(self) -> int:
        return len(self._words) if self._words is not None else len(self._doubles)

    def _narrow(self, v: float) -> bool:
        """Drop candidates that cannot hold ``v``; False once none remain."""
        keep = tuple(s for s in self._candidates if codec.is_representable(v, s))
        if keep:
            if keep != self._candidates:
                self._candidates = keep
                self._active = self._fastest(keep)
            return True
        self._expand()
        return False

    def _expand(self):
        active = self._active
        self._doubles = array("d", (codec.decode(w, active) for w in self._words))
        self._words = None
        self._candidates = ()
        self._active = None

    def append(self, v: float):
        if self._words is not None and self._narrow(v):
            self._words.append(upper32(v))
        else:
            self._doubles.append(v)

    push = append

    def extend(self, values: Iterable[float]):
        for v in values:
            self.append(v)

    def _check_index(self, i: int) -> int:
        n = len(self)
        if i < 0:
            i += n
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for length {n}")
        return i

    def __getitem__(self, i: int) -> float:
        i = self._check_index(i)
        if self._words is None:
            return self._doubles[i]
        w = self._words[i]
        v = codec.decode(w, self._active)
        if self.debug:
            bits = to_bits(v)
            for s in self._candidates:
                assert to_bits(codec.decode(w, s)) == bits, f"{s.label} disagrees at {i}"
        return v

    get = __getitem__

    def __setitem__(self, i: int, v: float):
        i = self._check_index(i)
        if self._words is not None and self._narrow(v):
            self._words[i] = upper32(v)
        else:
            self._doubles[i] = v

    set = __setitem__

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def nbytes(self) -> int:
        """Payload bytes, not counting the shared scheme tables."""
        return 4 * len(self._words) if self._words is not None else 8 * len(self._doubles)

    def __repr__(self) -> str:
        names = ",".join(s.label for s in self._candidates) or "-"
        return f"AdaptiveVector(len={len(self)}, mode={self.mode}, candidates={names})"
