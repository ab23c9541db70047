"""Certified enclosures of log(p/(p-1)).

Uses log(p/(p-1)) = 2*atanh(1/(2p-1)) evaluated in integer fixed point.
Every term is rounded down for the lower bound and up for the upper bound,
and the truncated tail is bounded by a geometric series, so the returned
interval always contains the true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import DEFAULT_PRECISION_CAP
from .errors import PrecisionError, ValidationError


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def scale(self, k: Fraction | int) -> "Interval":
        k = Fraction(k)
        if k < 0:
            return Interval(self.hi * k, self.lo * k)
        return Interval(self.lo * k, self.hi * k)

    def decimal_strings(self, digits: int) -> list[str]:
        """Outward-rounded decimal endpoints with ``digits`` fractional digits."""
        scale = 10**digits
        lo = math.floor(self.lo * scale)
        hi = math.ceil(self.hi * scale)
        return [_fixed(lo, digits), _fixed(hi, digits)]


def _fixed(v: int, digits: int) -> str:
    sign = "-" if v < 0 else ""
    s = str(abs(v)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"


def parse_decimal(text: str) -> Fraction:
    return Fraction(text)


def log_ratio_interval(p: int, bits: int) -> Interval:
    """Enclosure of log(p/(p-1)) of width at most 2**-bits, for integer p >= 2."""
    if p < 2:
        raise ValidationError(f"log(p/(p-1)) needs p >= 2, got {p}")
    if bits < 1:
        raise ValidationError("bits must be positive")
    m = 2 * p - 1
    m2 = m * m
    guard = 8 + max(bits, 1).bit_length()
    work = bits + guard
    scale = 1 << work
    lo = hi = 0
    power = m  # m**(2k+1)
    k = 0
    while True:
        den = power * (2 * k + 1)
        q, r = divmod(scale, den)
        lo += q
        hi += q + (1 if r else 0)
        k += 1
        power *= m2
        # tail: sum_{j>=k} 1/((2j+1) m^(2j+1)) <= 1/((2k+1) m^(2k+1)) * m^2/(m^2-1)
        tail_num = scale * m2
        tail_den = (2 * k + 1) * power * (m2 - 1)
        if tail_num < tail_den:  # scaled tail < 1
            hi += 1
            break
    return Interval(Fraction(2 * lo, scale), Fraction(2 * hi, scale))


@dataclass(frozen=True)
class PrecisionPolicy:
    start_bits: int = 64
    max_bits: int = DEFAULT_PRECISION_CAP


def certified_floor_log_ratio(p: int, x: int, policy: PrecisionPolicy | None = None) -> int:
    """floor(x * log(p/(p-1))), refined by doubling precision until certain."""
    policy = policy or PrecisionPolicy()
    if x < 1:
        raise ValidationError(f"x must be >= 1, got {x}")
    bits = max(1, min(policy.start_bits, policy.max_bits))
    while True:
        iv = log_ratio_interval(p, bits)
        flo = math.floor(iv.lo * x)
        fhi = math.floor(iv.hi * x)
        if flo == fhi:
            return flo
        if bits >= policy.max_bits:
            raise PrecisionError(
                f"floor of {x}*log({p}/{p - 1}) still ambiguous at {bits} bits "
                f"(precision cap {policy.max_bits})", "precision_cap", policy.max_bits)
        bits = min(2 * bits, policy.max_bits)
