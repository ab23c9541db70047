"""Uncovered density: the residue sieve (ground truth) and the closed formulas
for prime families."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import kernels
from .core import (
    DEFAULT_SIEVE_CAP,
    CongruenceSystem,
    Partition,
    PrimeFamily,
    crt_pair,
    format_rational,
    mk_congruence,
    product_one_minus_inverse,
    system_lcm,
    validate_prime_set,
)
from .errors import ResourceError, ValidationError


@dataclass(frozen=True)
class DensityResult:
    density: Fraction
    uncovered_count: int
    period: int

    def to_json(self) -> dict:
        return {
            "density": format_rational(self.density),
            "uncovered_count": str(self.uncovered_count),
            "period": str(self.period),
        }


def check_sieve_cap(period: int, sieve_cap: int | None) -> None:
    cap = DEFAULT_SIEVE_CAP if sieve_cap is None else sieve_cap
    if period > cap:
        raise ResourceError(
            f"period {period} exceeds sieve cap {cap} (sieve_cap)", "sieve_cap", cap)


def sieve_uncovered_density(s: CongruenceSystem, sieve_cap: int | None = None) -> DensityResult:
    period = system_lcm(s)
    check_sieve_cap(period, sieve_cap)
    uncovered = kernels.count_uncovered(s.residues, s.moduli, period)
    return DensityResult(Fraction(uncovered, period), uncovered, period)


def _prime_part(primes: Iterable[int], what: str, q: int) -> tuple[int, ...]:
    ps = validate_prime_set(primes, what)
    if q in ps:
        raise ValidationError(f"{what}: prime {q} is not allowed (it equals q)")
    return ps


def eq1_density(p1: Iterable[int], p2: Iterable[int]) -> Fraction:
    """Uncovered density of {0 mod 3} with the 3p moduli split into classes 1 and 2."""
    a = _prime_part(p1, "P1", 3)
    b = _prime_part(p2, "P2", 3)
    overlap = set(a) & set(b)
    if overlap:
        raise ValidationError(f"P1 and P2 overlap in {sorted(overlap)}")
    return (product_one_minus_inverse(a) + product_one_minus_inverse(b)) / 3


def _check_parts(q: int, parts: Partition | Sequence[Iterable[int]],
                 standalone: bool | None) -> tuple[Partition, bool]:
    if not isinstance(parts, Partition):
        parts = Partition(tuple(tuple(p) for p in parts))
    for part in parts.parts:
        _prime_part(part, "part", q)
    k = parts.k
    if standalone is None:
        if k == q:
            standalone = False
        elif k == q - 1:
            standalone = True
        else:
            raise ValidationError(f"q={q} needs {q} parts (or {q - 1} with standalone q), got {k}")
    expected = q - 1 if standalone else q
    if k != expected:
        shape = "standalone" if standalone else "no standalone"
        raise ValidationError(f"q={q} family ({shape}) needs {expected} parts, got {k}")
    return parts, standalone


def q_partition_density(q: int, parts: Partition | Sequence[Iterable[int]],
                        standalone: bool | None = None) -> Fraction:
    """(1/q) * sum over parts of prod(1 - 1/b).

    With ``standalone`` the modulus q itself takes class 0, so only q - 1
    parts are expected.  ``None`` infers the shape from the part count.
    """
    parts, _ = _check_parts(q, parts, standalone)
    return sum(parts.part_products(), Fraction(0)) / q


def realize_partition(family: PrimeFamily, parts: Partition | Sequence[Iterable[int]],
                      lifts: Mapping[int, int] | None = None) -> CongruenceSystem:
    """Concrete congruence system for a family and a prime partition.

    Part j is put on residue class j+1 mod q (class 0 belongs to the
    standalone modulus when present).  For prime p the residue mod q*p is
    the CRT lift with component ``lifts.get(p, 0)`` mod p.  The returned
    system lists congruences in the order of ``family.moduli``.
    """
    if isinstance(parts, Partition):
        raw = parts.parts
    else:
        raw = tuple(tuple(p) for p in parts)
    _check_parts(family.q, Partition(raw), family.standalone)
    if set(p for part in raw for p in part) != set(family.primes):
        raise ValidationError("partition does not cover exactly the family primes")
    q = family.q
    cls_of = {p: (j + 1) % q for j, part in enumerate(raw) for p in part}
    lifts = lifts or {}
    out = []
    if family.standalone:
        out.append(mk_congruence(0, q))
    for p in family.primes:
        out.append(mk_congruence(crt_pair(cls_of[p], q, lifts.get(p, 0) % p, p), q * p))
    return CongruenceSystem(tuple(out))
