"""Exact 32-bit storage for subsets of 64-bit floats.

A compact word is the upper half of a double (sign, exponent, top 20
mantissa bits). Decoding looks up the missing low 32 bits in a small table
indexed by a few bits of the word itself.
"""

from .adaptive import AdaptiveVector
from .codec import (
    BUILTIN_CONFIGS,
    BUILTIN_NAMES,
    SchemeHandle,
    builtin_scheme,
    builtin_schemes,
    decode,
    decode_array,
    decode_indirect,
    encode_array,
    encode_checked,
    encode_unchecked,
    is_representable,
)
from .decfloat import dec_decode, dec_encode
from .designer import (
    DirectTable,
    IndirectTable,
    SchemeConfig,
    SchemeStats,
    build_indirect,
    design,
    index_of,
    search_min_m,
    stats,
)
from .errors import (
    Compact64Error,
    ConflictError,
    Infeasible,
    NotRepresentable,
    PatternError,
    TableFormatError,
    TooManyDistinctError,
)
from .floatbits import NA, NA_BITS, lower32, recompose, upper32
from .valueset import (
    DigitPattern,
    RationalGrid,
    ValueSet,
    builtin_set,
    expand_pattern,
    expand_patterns,
    expand_rationals,
)

__version__ = "0.1.0"
