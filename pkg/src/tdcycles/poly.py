"""Truncated polynomials in four indeterminates ``x, y, z, w``.

Terms live in a sparse dict keyed by a packed exponent.  Each exponent gets
its own bit field with one spare guard bit, so adding two keys adds the
exponents fieldwise; adding ``bias`` first pushes any field that exceeds its
cap into its guard bit, which turns the cap test into a single ``&``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

import numpy as np


class PolyMismatch(TypeError):
    """Operands were built over different caps or coefficient rings."""


@dataclass(frozen=True)
class CoeffRing:
    """Integers (``modulus_exp=None``) or residues modulo ``2**modulus_exp``."""

    modulus_exp: int | None = None

    @classmethod
    def exact(cls) -> "CoeffRing":
        return cls(None)

    @classmethod
    def modular(cls, k: int) -> "CoeffRing":
        """Residues modulo ``2**(k+1)``: what the cycle-cover test needs for
        at most ``k`` cycles."""
        if k < 0:
            raise ValueError("k must be non-negative")
        return cls(k + 1)

    @property
    def is_exact(self) -> bool:
        return self.modulus_exp is None

    @property
    def modulus(self) -> int | None:
        return None if self.modulus_exp is None else 1 << self.modulus_exp

    @property
    def mask(self) -> int | None:
        return None if self.modulus_exp is None else (1 << self.modulus_exp) - 1

    def reduce(self, c: int) -> int:
        return c if self.modulus_exp is None else c & self.mask

    def __str__(self):
        return "exact" if self.is_exact else f"mod 2^{self.modulus_exp}"


@dataclass(frozen=True)
class DegreeCaps:
    x: int
    y: int
    z: int
    w: int

    def __post_init__(self):
        if min(self.x, self.y, self.z, self.w) < 0:
            raise ValueError(f"degree caps must be non-negative: {self}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.z, self.w)


@dataclass(frozen=True)
class PolySpace:
    """Caps and ring shared by every polynomial of one computation."""

    caps: DegreeCaps
    ring: CoeffRing

    @cached_property
    def _layout(self):
        widths = [max(1, c.bit_length()) for c in self.caps.as_tuple()]
        offsets, off = [], 0
        for wd in reversed(widths):  # w lowest, x highest
            offsets.append(off)
            off += wd + 1
        offsets.reverse()
        bias = guard = 0
        for cap, wd, o in zip(self.caps.as_tuple(), widths, offsets):
            bias |= ((1 << wd) - 1 - cap) << o
            guard |= 1 << (o + wd)
        return tuple(offsets), tuple((1 << wd) - 1 for wd in widths), bias, guard

    @property
    def bias(self) -> int:
        return self._layout[2]

    @property
    def guard(self) -> int:
        return self._layout[3]

    def fits(self, a: int, b: int, c: int, d: int) -> bool:
        x, y, z, w = self.caps.as_tuple()
        return 0 <= a <= x and 0 <= b <= y and 0 <= c <= z and 0 <= d <= w

    def pack(self, a: int, b: int, c: int, d: int) -> int:
        if not self.fits(a, b, c, d):
            raise ValueError(f"exponent {(a, b, c, d)} exceeds caps {self.caps.as_tuple()}")
        o = self._layout[0]
        return (a << o[0]) | (b << o[1]) | (c << o[2]) | (d << o[3])

    def unpack(self, key: int) -> tuple[int, int, int, int]:
        offs, masks, _, _ = self._layout
        return tuple((key >> o) & mk for o, mk in zip(offs, masks))

    def zero(self) -> "TruncPoly":
        return TruncPoly(self, {})

    def one(self) -> "TruncPoly":
        return TruncPoly(self, {0: 1})

    def monomial(self, a=0, b=0, c=0, d=0, coeff=1) -> "TruncPoly":
        if not self.fits(a, b, c, d):
            return self.zero()
        return TruncPoly.from_terms(self, {(a, b, c, d): coeff})


# -- raw term-dict kernels, shared with the counting recursion -------------

# products with at least this many term pairs go through numpy (modular ring only)
NUMPY_MIN_PAIRS = 1 << 10
_NUMPY_CHUNK = 1 << 21
# dense accumulation: window at most this many slots per term pair, and in total
_DENSE_RATIO = 8
_DENSE_MAX = 1 << 24


def mul_terms(t1: dict, t2: dict, bias: int, guard: int, mask: int | None) -> dict:
    if len(t1) > len(t2):
        t1, t2 = t2, t1
    if mask is not None and len(t1) * len(t2) >= NUMPY_MIN_PAIRS and guard < 1 << 63:
        return mul_terms_numpy(t1, t2, bias, guard, mask)
    if len(t1) == 1:
        (k1, c1), = t1.items()
        kb = k1 + bias
        if mask is None:
            return {k1 + k2: c1 * c2 for k2, c2 in t2.items() if not (kb + k2) & guard}
        return {k1 + k2: r for k2, c2 in t2.items() if not (kb + k2) & guard and (r := c1 * c2 & mask)}
    out: dict = {}
    get = out.get
    items2 = list(t2.items())
    for k1, c1 in t1.items():
        kb = k1 + bias
        for k2, c2 in items2:
            if (kb + k2) & guard:
                continue
            k = k1 + k2
            out[k] = get(k, 0) + c1 * c2
    if mask is None:
        return {k: c for k, c in out.items() if c}
    return {k: r for k, c in out.items() if (r := c & mask)}


def mul_terms_numpy(t1: dict, t2: dict, bias: int, guard: int, mask: int) -> dict:
    """Modular product via chunked outer sums.  Coefficient arithmetic wraps
    modulo ``2**64``, which the power-of-two modulus divides, so overflow is
    harmless."""
    if not t1 or not t2:
        return {}
    u64 = np.uint64
    k1 = np.fromiter(t1.keys(), u64, len(t1))
    c1 = np.fromiter(t1.values(), u64, len(t1))
    k2 = np.fromiter(t2.keys(), u64, len(t2))
    c2 = np.fromiter(t2.values(), u64, len(t2))
    k2b = k2 + u64(bias)
    g = u64(guard)
    step = max(1, _NUMPY_CHUNK // len(t2))
    if mask < 1 << 15:
        dense = _mul_dense(k1, c1, k2, c2, k2b, g, step, bias, guard, mask)
        if dense is not None:
            return dense
    keys, coeffs = [], []
    for i in range(0, len(t1), step):
        i1, i2 = np.nonzero((k1[i:i + step, None] + k2b) & g == 0)
        i1 += i
        keys.append(k1[i1] + k2[i2])
        coeffs.append(c1[i1] * c2[i2])
    keys = np.concatenate(keys)
    if not len(keys):
        return {}
    coeffs = np.concatenate(coeffs)
    order = np.argsort(keys, kind="stable")
    keys, coeffs = keys[order], coeffs[order]
    starts = np.concatenate(([0], np.flatnonzero(keys[1:] != keys[:-1]) + 1))
    sums = np.add.reduceat(coeffs, starts) & u64(mask)
    nz = sums != 0
    return dict(zip(keys[starts][nz].tolist(), sums[nz].tolist()))


@lru_cache(maxsize=64)
def _radix(bias: int, guard: int):
    """Field offsets, widths and mixed-radix strides recovered from a layout."""
    offsets, masks, strides = [], [], []
    lo, stride = 0, 1
    g = guard
    while g:
        top = (g & -g).bit_length() - 1  # guard bit above the next field
        wd = top - lo
        mk = (1 << wd) - 1
        cap = mk - ((bias >> lo) & mk)
        offsets.append(lo)
        masks.append(mk)
        strides.append(stride)
        stride *= cap + 1
        lo = top + 1
        g &= g - 1
    return tuple(offsets), tuple(masks), tuple(strides), stride


def _to_index(keys: np.ndarray, radix) -> np.ndarray:
    offsets, masks, strides, _ = radix
    idx = np.zeros(len(keys), np.int64)
    for o, mk, st in zip(offsets, masks, strides):
        idx += ((keys >> np.uint64(o)) & np.uint64(mk)).astype(np.int64) * st
    return idx


def _mul_dense(k1, c1, k2, c2, k2b, g, step, bias, guard, mask):
    """Accumulate into a dense window of mixed-radix indices with bincount.
    Float sums stay exact: residues are below 2**15 and a chunk holds at
    most 2**21 pairs.  Returns ``None`` when the window is too sparse."""
    radix = _radix(bias, guard)
    i1, i2 = _to_index(k1, radix), _to_index(k2, radix)
    base = int(i1.min()) + int(i2.min())
    size = min(int(i1.max()) + int(i2.max()), radix[3] - 1) - base + 1
    if size <= 0:
        return {}
    if size >min(_DENSE_MAX, _DENSE_RATIO * len(k1) * len(k2)):
        return None
    f1, f2 = c1.astype(np.float64), c2.astype(np.float64)
    i2 = i2 - base
    acc = np.zeros(size, np.uint64)
    for i in range(0, len(k1), step):
        a, b = np.nonzero((k1[i:i + step, None] + k2b) & g == 0)
        a += i
        acc += np.bincount(i1[a] + i2[b], weights=f1[a] * f2[b], minlength=size).astype(np.uint64)
    acc &= np.uint64(mask)
    nz = np.flatnonzero(acc)
    offsets, _, strides, _ = radix
    rest = nz + base
    keys = np.zeros(len(nz), np.int64)
    for o, st in reversed(list(zip(offsets, strides))):  # highest field first; cap-0 fields share strides
        f, rest = np.divmod(rest, st)
        keys |= f << o
    return dict(zip(keys.tolist(), acc[nz].tolist()))


def add_into(acc: dict, t: dict, mask: int | None, sign: int = 1) -> None:
    """``acc += sign * t`` in place, dropping zeros."""
    for k, c in t.items():
        c = acc.get(k, 0) + sign * c
        if mask is not None:
            c &= mask
        if c:
            acc[k] = c
        else:
            acc.pop(k, None)


class TruncPoly:
    """Immutable polynomial over a :class:`PolySpace`.

    Stored terms never carry a zero coefficient and never exceed the caps.
    """

    __slots__ = ("space", "_terms")

    def __init__(self, space: PolySpace, terms: dict):
        self.space = space
        self._terms = terms

    @classmethod
    def from_terms(cls, space: PolySpace, terms) -> "TruncPoly":
        """From ``{(a, b, c, d): coeff}``; terms above the caps are dropped."""
        out: dict = {}
        ring = space.ring
        for exps, c in dict(terms).items():
            if not space.fits(*exps):
                continue
            k = space.pack(*exps)
            c = ring.reduce(out.get(k, 0) + c)
            if c:
                out[k] = c
            else:
                out.pop(k, None)
        return cls(space, out)

    def _check(self, other: "TruncPoly"):
        if self.space != other.space:
            raise PolyMismatch(f"cannot combine polynomials over {self.space} and {other.space}")

    def __add__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        acc = dict(self._terms)
        add_into(acc, other._terms, self.space.ring.mask)
        return TruncPoly(self.space, acc)

    def __sub__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        acc = dict(self._terms)
        add_into(acc, other._terms, self.space.ring.mask, -1)
        return TruncPoly(self.space, acc)

    def __neg__(self) -> "TruncPoly":
        return self.space.zero() - self

    def __mul__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        sp = self.space
        return TruncPoly(sp, mul_terms(self._terms, other._terms, sp.bias, sp.guard, sp.ring.mask))

    def scale_monomial(self, a: int, b: int, c: int, d: int) -> "TruncPoly":
        """Multiply by ``x^a y^b z^c w^d``, discarding terms pushed past a cap."""
        if min(a, b, c, d) < 0:
            raise ValueError("monomial exponents must be non-negative")
        sp = self.space
        if not sp.fits(a, b, c, d):
            return sp.zero()
        shift = sp.pack(a, b, c, d)
        bias, guard = sp.bias + shift, sp.guard
        return TruncPoly(sp, {k + shift: v for k, v in self._terms.items() if not (k + bias) & guard})

    def coefficient(self, a: int, b: int, c: int, d: int) -> int:
        if not self.space.fits(a, b, c, d):
            return 0
        return self._terms.get(self.space.pack(a, b, c, d), 0)

    def terms(self) -> Iterator[tuple[tuple[int, int, int, int], int]]:
        """``((a, b, c, d), coeff)`` pairs in lexicographic exponent order."""
        unpack = self.space.unpack
        yield from sorted((unpack(k), c) for k, c in self._terms.items())

    def as_dict(self) -> dict:
        return dict(self.terms())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.space == other.space and self._terms == other._terms

    def __hash__(self):
        return hash((self.space, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "TruncPoly(0)"
        parts = []
        for (a, b, c, d), coeff in self.terms():
            mono = "".join(
                f"{v}" + (f"^{e}" if e > 1 else "") for v, e in zip("xyzw", (a, b, c, d)) if e
            )
            parts.append(f"{coeff}{'*' + mono if mono else ''}")
        return f"TruncPoly({' + '.join(parts)})"

    def dumps(self) -> str:
        """One ``a b c d coeff`` line per term, sorted by exponent."""
        return "".join(f"{a} {b} {c} {d} {coeff}\n" for (a, b, c, d), coeff in self.terms())

    @classmethod
    def loads(cls, space: PolySpace, text: str) -> "TruncPoly":
        terms = {}
        for line in text.splitlines():
            if line.strip():
                a, b, c, d, coeff = map(int, line.split())
                terms[(a, b, c, d)] = coeff
        return cls.from_terms(space, terms)


def poly_zero(caps: DegreeCaps, ring: CoeffRing) -> TruncPoly:
    return PolySpace(caps, ring).zero()


def poly_one(caps: DegreeCaps, ring: CoeffRing) -> TruncPoly:
    return PolySpace(caps, ring).one()


def poly_add(p: TruncPoly, q: TruncPoly) -> TruncPoly:
    return p + q


def poly_mul(p: TruncPoly, q: TruncPoly) -> TruncPoly:
    return p * q


def poly_scale_monomial(p: TruncPoly, a: int, b: int, c: int, d: int) -> TruncPoly:
    return p.scale_monomial(a, b, c, d)


def coefficient(p: TruncPoly, a: int, b: int, c: int, d: int) -> int:
    return p.coefficient(a, b, c, d)
