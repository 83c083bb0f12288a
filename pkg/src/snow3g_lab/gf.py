"""Arithmetic in GF(2^8) and the multiply-by-alpha maps on 32-bit words.

Bytes are polynomials over GF(2) reduced modulo x^8 + x^7 + x^5 + x^3 + 1
(0x1A9); 0x02 is the primitive element beta.  A word (c3, c2, c1, c0), c3 the
most significant byte, is a polynomial over GF(2^8) reduced modulo alpha's
minimal polynomial x^4 + beta^23 x^3 + beta^245 x^2 + beta^48 x + beta^239.
"""

from __future__ import annotations

import enum
import struct
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

POLY_BYTE = 0xA9
WORD_MASK = 0xFFFFFFFF

# beta exponents of the four columns, most significant byte first
MUL_ALPHA_EXPONENTS = (23, 245, 48, 239)
DIV_ALPHA_EXPONENTS = (16, 39, 6, 64)

# the recursive realization nests up to 245 frames deep
if sys.getrecursionlimit() < 2000:
    sys.setrecursionlimit(2000)


def mulx(v: int, c: int) -> int:
    """Multiply byte ``v`` by x modulo the polynomial ``0x100 | c``."""
    if v & 0x80:
        return ((v << 1) & 0xFF) ^ c
    return v << 1


def mulxpow(v: int, i: int, c: int) -> int:
    """Apply :func:`mulx` to ``v`` ``i`` times (iterative)."""
    if i < 0:
        raise ValueError("exponent must be non-negative")
    for _ in range(i):
        v = ((v << 1) & 0xFF) ^ c if v & 0x80 else v << 1
    return v


def mulxpow_recursive(v: int, i: int, c: int) -> int:
    """Same map as :func:`mulxpow`, one stack frame per doubling.

    This is the cost model profiled by the recursive backend, so keep it
    recursive even though the loop form is faster.
    """
    if i == 0:
        return v
    v = mulxpow_recursive(v, i - 1, c)
    return ((v << 1) & 0xFF) ^ c if v & 0x80 else v << 1


def gf8_mul(a: int, b: int, c: int = POLY_BYTE) -> int:
    """Shift-and-add product of two bytes modulo ``0x100 | c``."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a = mulx(a, c)
        b >>= 1
    return result


def beta_pow(i: int) -> int:
    return mulxpow(0x01, i, POLY_BYTE)


def _columns(c: int, exponents, power: Callable[[int, int, int], int]) -> int:
    e3, e2, e1, e0 = exponents
    return (
        (power(c, e3, POLY_BYTE) << 24)
        | (power(c, e2, POLY_BYTE) << 16)
        | (power(c, e1, POLY_BYTE) << 8)
        | power(c, e0, POLY_BYTE)
    )


class BackendKind(enum.Enum):
    RECURSIVE = "recursive"
    TABLE = "table"

    @classmethod
    def parse(cls, text: str) -> "BackendKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown backend {text!r} (expected one of: {names})") from None


@dataclass(frozen=True)
class AlphaTables:
    """Precomputed byte-to-word products for multiplication by alpha and alpha^-1."""

    mul_table: tuple
    div_table: tuple

    def __post_init__(self):
        if len(self.mul_table) != 256 or len(self.div_table) != 256:
            raise ValueError("alpha tables need exactly 256 entries each")

    def payload(self) -> bytes:
        """Both tables packed as big-endian 32-bit words (2048 bytes)."""
        return struct.pack(">512I", *self.mul_table, *self.div_table)

    @property
    def nbytes(self) -> int:
        return len(self.payload())


def build_tables() -> AlphaTables:
    """Fill both tables from the recursive column products."""
    return AlphaTables(
        mul_table=tuple(_columns(c, MUL_ALPHA_EXPONENTS, mulxpow_recursive) for c in range(256)),
        div_table=tuple(_columns(c, DIV_ALPHA_EXPONENTS, mulxpow_recursive) for c in range(256)),
    )


@dataclass(frozen=True)
class MulBackend:
    """Strategy for the byte-to-word products MUL_alpha / DIV_alpha.

    ``mul_alpha_byte`` and ``div_alpha_byte`` are plain callables so the LFSR
    can bind them once; the benchmark harness swaps in timed wrappers through
    :meth:`instrumented`.
    """

    kind: BackendKind
    tables: Optional[AlphaTables] = None
    mulxpow: Callable[[int, int, int], int] = field(default=mulxpow_recursive, compare=False)
    wrap_mul: Optional[Callable] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if (self.kind is BackendKind.TABLE) != (self.tables is not None):
            raise ValueError("tables must be present exactly for the table backend")

    @classmethod
    def recursive(cls) -> "MulBackend":
        return cls(BackendKind.RECURSIVE)

    @classmethod
    def table(cls, tables: Optional[AlphaTables] = None) -> "MulBackend":
        return cls(BackendKind.TABLE, tables if tables is not None else build_tables())

    @classmethod
    def from_kind(cls, kind) -> "MulBackend":
        if isinstance(kind, str):
            kind = BackendKind.parse(kind)
        return cls.table() if kind is BackendKind.TABLE else cls.recursive()

    @property
    def mul_alpha_byte(self) -> Callable[[int], int]:
        if self.tables is not None:
            return self.tables.mul_table.__getitem__
        power = self.mulxpow
        fn = lambda c: _columns(c, MUL_ALPHA_EXPONENTS, power)  # noqa: E731
        return self.wrap_mul("MULalpha", fn) if self.wrap_mul else fn

    @property
    def div_alpha_byte(self) -> Callable[[int], int]:
        if self.tables is not None:
            return self.tables.div_table.__getitem__
        power = self.mulxpow
        fn = lambda c: _columns(c, DIV_ALPHA_EXPONENTS, power)  # noqa: E731
        return self.wrap_mul("DIValpha", fn) if self.wrap_mul else fn

    def instrumented(self, wrap: Callable[[str, Callable], Callable]) -> "MulBackend":
        """Copy of this backend whose recursive path reports to ``wrap``.

        Table lookups stay unwrapped: they are inlined into the LFSR clock,
        which is how the precomputed variant is normally compiled.
        """
        if self.kind is BackendKind.TABLE:
            return self
        return MulBackend(
            self.kind,
            mulxpow=wrap("MULxPow", self.mulxpow),
            wrap_mul=wrap,
        )


def mul_alpha_byte(c: int, backend: MulBackend) -> int:
    return backend.mul_alpha_byte(c)


def div_alpha_byte(c: int, backend: MulBackend) -> int:
    return backend.div_alpha_byte(c)


def mul_alpha_word(w: int, backend: MulBackend) -> int:
    """alpha * w in GF(2^32)."""
    return ((w << 8) & WORD_MASK) ^ backend.mul_alpha_byte(w >> 24)


def div_alpha_word(w: int, backend: MulBackend) -> int:
    """alpha^-1 * w in GF(2^32)."""
    return (w >> 8) ^ backend.div_alpha_byte(w & 0xFF)
