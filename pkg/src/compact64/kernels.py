"""Streaming vector operations over plain, compact, or decimal-float inputs.

Each kernel decodes every input element exactly once per call, inline in a
compiled loop, and produces plain binary64 results. Sums run strictly left to
right from +0.0 and the linear combination is ``((1.1*a) + (2.2*b)) + (3.3*c)``
with no fused multiply-add, so outputs are bit-identical whatever the input
representation.
"""

from __future__ import annotations

import functools

import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic

from . import codec, decfloat
from .codec import SchemeHandle
from .floatbits import NA

SCALE = 123.456789
LINCOMB = (1.1, 2.2, 3.3)

OPS = ("copy", "sum", "scale", "add", "lincomb")
ARITY = {"copy": 1, "sum": 1, "scale": 1, "add": 2, "lincomb": 3}


@intrinsic
def _as_double(typingctx, x):
    sig = types.float64(types.uint64)

    def codegen(context, builder, signature, args):
        return builder.bitcast(args[0], ir.DoubleType())

    return sig, codegen


@njit
def _dec_plain(x, tabs):
    return x


@njit
def _dec_direct(w, tabs):
    entries, mmask, m, emask, shift = tabs
    hi = np.uint64(w)
    i = (hi & mmask) | (((hi >> shift) & emask) << m)
    return _as_double((hi << np.uint64(32)) | np.uint64(entries[i]))


@njit
def _dec_indirect(w, tabs):
    index16, values, mmask, m, emask, shift = tabs
    hi = np.uint64(w)
    i = (hi & mmask) | (((hi >> shift) & emask) << m)
    return _as_double((hi << np.uint64(32)) | np.uint64(values[index16[i]]))


@njit
def _dec_decimal(w, tabs):
    pow10, na = tabs
    p = w & np.uint32(15)
    if p == 15:
        return na[0]
    M = np.int32(w) >> 4
    return np.float64(M) / pow10[p]


_DECODERS = {
    "plain": _dec_plain,
    "direct": _dec_direct,
    "indirect": _dec_indirect,
    "decimal": _dec_decimal,
}


def _counting(dec):
    @njit
    def counted(w, tabs):
        tabs[1][0] += 1
        return dec(w, tabs[0])

    return counted


class NumericVector:
    """Read-only input to the kernels."""

    kind: str
    data: np.ndarray

    def __len__(self) -> int:
        return len(self.data)

    def tables(self) -> tuple:
        return ()

    def to_floats(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def nbytes(self) -> int:
        return self.data.nbytes


class PlainVector(NumericVector):
    kind = "plain"

    def __init__(self, values):
        self.data = np.ascontiguousarray(values, dtype=np.float64)

    def to_floats(self) -> np.ndarray:
        return self.data.copy()


class CompactVector(NumericVector):
    """Compact words plus the scheme (and lookup path) that decodes them."""

    def __init__(self, words, scheme: SchemeHandle, path: str = "direct"):
        if path not in ("direct", "indirect"):
            raise ValueError(f"unknown decode path {path!r}")
        if path == "indirect" and scheme.indirect is None:
            raise ValueError(f"scheme {scheme.label} has no indirect table")
        self.data = np.ascontiguousarray(words, dtype=np.uint32)
        self.scheme = scheme
        self.path = path

    @classmethod
    def encode(cls, values, scheme: SchemeHandle, path: str = "direct") -> "CompactVector":
        return cls(codec.encode_array(values, scheme), scheme, path)

    @property
    def kind(self) -> str:
        return self.path

    def tables(self) -> tuple:
        c = self.scheme.config
        masks = (
            np.uint64((1 << c.m) - 1),
            np.uint64(c.m),
            np.uint64((1 << c.e) - 1),
            np.uint64(20 + c.f),
        )
        if self.path == "direct":
            return (self.scheme.entries,) + masks
        ind = self.scheme.indirect
        return (ind.index16, ind.values) + masks

    def to_floats(self) -> np.ndarray:
        return codec.decode_array(self.data, self.scheme, self.path)


class DecimalVector(NumericVector):
    kind = "decimal"
    _pow10 = np.array(decfloat.POW10, dtype=np.float64)
    _na = np.array([NA], dtype=np.float64)

    def __init__(self, words):
        self.data = np.ascontiguousarray(words, dtype=np.uint32)

    @classmethod
    def encode(cls, values) -> "DecimalVector":
        return cls(decfloat.dec_encode_array(values))

    def tables(self) -> tuple:
        return (self._pow10, self._na)

    def to_floats(self) -> np.ndarray:
        return decfloat.dec_decode_array(self.data)


@functools.lru_cache(maxsize=None)
def _kernel(op: str, kinds: tuple, counted: bool):
    decs = [_DECODERS[k] for k in kinds]
    if counted:
        decs = [_counting(d) for d in decs]
    da = decs[0]
    db = decs[1] if len(decs) > 1 else None
    dc = decs[2] if len(decs) > 2 else None
    scale = SCALE
    ca, cb, cc = LINCOMB

    if op == "copy":
        @njit
        def kernel(a, ta, out):
            for i in range(out.shape[0]):
                out[i] = da(a[i], ta)
    elif op == "sum":
        @njit
        def kernel(a, ta):
            s = 0.0
            for i in range(a.shape[0]):
                s += da(a[i], ta)
            return s
    elif op == "scale":
        @njit
        def kernel(a, ta, out):
            for i in range(out.shape[0]):
                out[i] = scale * da(a[i], ta)
    elif op == "add":
        @njit
        def kernel(a, ta, b, tb, out):
            for i in range(out.shape[0]):
                out[i] = da(a[i], ta) + db(b[i], tb)
    elif op == "lincomb":
        @njit
        def kernel(a, ta, b, tb, c, tc, out):
            for i in range(out.shape[0]):
                x = ca * da(a[i], ta)
                y = cb * db(b[i], tb)
                z = cc * dc(c[i], tc)
                out[i] = (x + y) + z
    else:
        raise ValueError(f"unknown operation {op!r}")
    return kernel


def _operands(vectors, counter):
    n = len(vectors[0])
    for v in vectors[1:]:
        if len(v) != n:
            raise ValueError(f"length mismatch: {n} vs {len(v)}")
    args = []
    for j, v in enumerate(vectors):
        tabs = v.tables()
        if counter is not None:
            tabs = (tabs, counter[j:j + 1])
        args += [v.data, tabs]
    return n, args


def _output(out, n):
    if out is None:
        return np.empty(n, dtype=np.float64)
    if out.dtype != np.float64 or out.shape != (n,):
        raise ValueError(f"output buffer must be float64 of length {n}")
    return out


def _check_counter(counter, arity):
    if counter is not None and (counter.dtype != np.int64 or len(counter) < arity):
        raise ValueError(f"counter must be an int64 array with at least {arity} slots")


def _run(op, vectors, out, counter):
    _check_counter(counter, len(vectors))
    n, args = _operands(vectors, counter)
    kernel = _kernel(op, tuple(v.kind for v in vectors), counter is not None)
    if op == "sum":
        return kernel(*args)
    out = _output(out, n)
    kernel(*args, out)
    return out


def k_copy(a: NumericVector, out=None, counter=None) -> np.ndarray:
    """Decoded copy of ``a``.

    ``counter``, if given, is an int64 array; slot ``j`` is incremented once
    per element decoded from input ``j`` (instrumented build of the same loop).
    """
    return _run("copy", (a,), out, counter)


def k_sum(a: NumericVector, counter=None) -> float:
    return float(_run("sum", (a,), None, counter))


def k_scale(a: NumericVector, out=None, counter=None) -> np.ndarray:
    return _run("scale", (a,), out, counter)


def k_add(a: NumericVector, b: NumericVector, out=None, counter=None) -> np.ndarray:
    return _run("add", (a, b), out, counter)


def k_lincomb(a: NumericVector, b: NumericVector, c: NumericVector, out=None, counter=None) -> np.ndarray:
    return _run("lincomb", (a, b, c), out, counter)


KERNELS = {
    "copy": k_copy,
    "sum": k_sum,
    "scale": k_scale,
    "add": k_add,
    "lincomb": k_lincomb,
}


def run_op(op: str, vectors, out=None):
    """Dispatch by operation name; ``vectors`` supplies the operands in order."""
    if op not in KERNELS:
        raise ValueError(f"unknown operation {op!r}; expected one of {', '.join(OPS)}")
    if len(vectors) < ARITY[op]:
        raise ValueError(f"{op} needs {ARITY[op]} input vectors")
    vectors = tuple(vectors[: ARITY[op]])
    if op == "sum":
        return k_sum(*vectors)
    return KERNELS[op](*vectors, out=out)
