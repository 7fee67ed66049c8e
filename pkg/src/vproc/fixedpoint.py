"""Signed Q32.32 fixed-point arithmetic with saturating, hardware-like semantics.

Values are stored as 64-bit two's-complement integers scaled by 2^32.
Every operation saturates to the representable range instead of wrapping,
and records saturation / zero-divisor events in a sticky flag set, the way
a hardware status register would.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

FRAC_BITS = 32
WORD_BITS = 64
SCALE = 1 << FRAC_BITS

RAW_MIN = -(1 << (WORD_BITS - 1))
RAW_MAX = (1 << (WORD_BITS - 1)) - 1

#: Smallest representable positive value.
EPSILON = 1.0 / SCALE


@dataclass
class ArithFlags:
    """Sticky arithmetic status flags; cleared only by reset()."""

    overflow: bool = False
    div_by_zero: bool = False

    def reset(self) -> None:
        self.overflow = False
        self.div_by_zero = False

    def merge(self, other: "ArithFlags") -> None:
        self.overflow = self.overflow or other.overflow
        self.div_by_zero = self.div_by_zero or other.div_by_zero

    def copy(self) -> "ArithFlags":
        return ArithFlags(self.overflow, self.div_by_zero)


@dataclass(frozen=True)
class Fixed64:
    """A Q32.32 scalar: value = raw / 2^32."""

    raw: int

    def __post_init__(self) -> None:
        if not (RAW_MIN <= self.raw <= RAW_MAX):
            raise ValueError(f"raw value {self.raw:#x} outside 64-bit range")


ZERO = Fixed64(0)
ONE = Fixed64(SCALE)
MAX = Fixed64(RAW_MAX)
MIN = Fixed64(RAW_MIN)


def _saturate(raw: int, flags: ArithFlags | None) -> Fixed64:
    if raw > RAW_MAX:
        if flags is not None:
            flags.overflow = True
        return MAX
    if raw < RAW_MIN:
        if flags is not None:
            flags.overflow = True
        return MIN
    return Fixed64(raw)


def from_real(x: float, flags: ArithFlags | None = None) -> Fixed64:
    """Convert a finite real to the nearest Q32.32 value (ties to even).

    Out-of-range inputs clamp to the nearest bound.  Non-finite input is a
    contract violation and raises.
    """
    if not math.isfinite(x):
        raise ValueError(f"cannot convert non-finite value {x!r}")
    # Fraction(x) is exact for floats, so the scaled rounding is exact too.
    raw = round(Fraction(x) * SCALE)
    return _saturate(raw, flags)


def to_real(a: Fixed64) -> float:
    """Nearest double to raw / 2^32 (may round: Q32.32 has 63 value bits)."""
    return a.raw / SCALE


def fx_add(a: Fixed64, b: Fixed64, flags: ArithFlags | None = None) -> Fixed64:
    return _saturate(a.raw + b.raw, flags)


def fx_sub(a: Fixed64, b: Fixed64, flags: ArithFlags | None = None) -> Fixed64:
    return _saturate(a.raw - b.raw, flags)


def fx_mul(a: Fixed64, b: Fixed64, flags: ArithFlags | None = None) -> Fixed64:
    # Full 128-bit product, arithmetic right shift: floor rounding.
    return _saturate((a.raw * b.raw) >> FRAC_BITS, flags)


def fx_div(a: Fixed64, b: Fixed64, flags: ArithFlags | None = None) -> Fixed64:
    """Quotient with truncation toward zero; zero divisor saturates."""
    if b.raw == 0:
        if flags is not None:
            flags.div_by_zero = True
        return MAX if a.raw >= 0 else MIN
    num = a.raw << FRAC_BITS
    q = abs(num) // abs(b.raw)
    if (num < 0) != (b.raw < 0):
        q = -q
    return _saturate(q, flags)


def fx_inv(a: Fixed64, flags: ArithFlags | None = None) -> Fixed64:
    return fx_div(ONE, a, flags)
