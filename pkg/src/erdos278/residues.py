"""Exact search over residue choices for a list of moduli."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .core import (
    DEFAULT_ENUM_CAP,
    CongruenceSystem,
    Partition,
    PrimeFamily,
    format_rational,
    lcm_all,
)
from .density import check_sieve_cap, q_partition_density
from .errors import ResourceError, ValidationError
from .partition import min_sum_partition


@dataclass(frozen=True)
class OptimizationResult:
    residues: tuple[int, ...]
    density: Fraction
    tuples_examined: int

    def system(self, moduli: Sequence[int]) -> CongruenceSystem:
        return CongruenceSystem.from_residues(self.residues, moduli)

    def to_json(self) -> dict:
        return {
            "residues": list(self.residues),
            "density": format_rational(self.density),
            "tuples_examined": self.tuples_examined,
        }


@dataclass(frozen=True)
class ResidueExtrema:
    """Minimum and maximum uncovered density over all residue tuples (a1 = 0)."""

    moduli: tuple[int, ...]
    minimum: OptimizationResult
    maximum: OptimizationResult
    worst_case: Fraction

    @property
    def max_at_equal_residues(self) -> bool:
        return self.maximum.density == self.worst_case


def _validate_moduli(moduli: Sequence[int]) -> tuple[int, ...]:
    if not moduli:
        raise ValidationError("moduli must be non-empty")
    out = []
    for n in moduli:
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValidationError(f"modulus must be a positive integer, got {n!r}")
        out.append(n)
    return tuple(out)


def _scan(moduli: tuple[int, ...], enum_cap: int | None, sieve_cap: int | None):
    cap = DEFAULT_ENUM_CAP if enum_cap is None else enum_cap
    total = math.prod(moduli)
    if total > cap:
        raise ResourceError(f"{total} residue tuples exceed enumeration cap {cap} (enum_cap)",
                            "enum_cap", cap)
    period = lcm_all(moduli)
    check_sieve_cap(period, sieve_cap)
    return period, kernels.residue_extrema(moduli, period)


def optimize_residues_exhaustive(moduli: Sequence[int], enum_cap: int | None = None,
                                 sieve_cap: int | None = None) -> OptimizationResult:
    """Minimum uncovered density; lexicographically first minimiser with a1 = 0."""
    moduli = _validate_moduli(moduli)
    period, (lo, lo_t, _, _, seen) = _scan(moduli, enum_cap, sieve_cap)
    return OptimizationResult(tuple(lo_t), Fraction(lo, period), seen)


def worst_case_density(moduli: Sequence[int], sieve_cap: int | None = None) -> OptimizationResult:
    """Density with every residue equal to 0."""
    moduli = _validate_moduli(moduli)
    period = lcm_all(moduli)
    check_sieve_cap(period, sieve_cap)
    zeros = (0,) * len(moduli)
    unc = kernels.count_uncovered(zeros, moduli, period)
    return OptimizationResult(zeros, Fraction(unc, period), 1)


def residue_extrema(moduli: Sequence[int], enum_cap: int | None = None,
                    sieve_cap: int | None = None) -> ResidueExtrema:
    moduli = _validate_moduli(moduli)
    period, (lo, lo_t, hi, hi_t, seen) = _scan(moduli, enum_cap, sieve_cap)
    return ResidueExtrema(
        moduli,
        OptimizationResult(tuple(lo_t), Fraction(lo, period), seen),
        OptimizationResult(tuple(hi_t), Fraction(hi, period), seen),
        worst_case_density(moduli, sieve_cap).density,
    )


def optimize_structured_family(f: PrimeFamily, search_cap: int | None = None
                               ) -> tuple[Partition, Fraction]:
    best = min_sum_partition(f.primes, f.parts, search_cap=search_cap)
    return best.partition, q_partition_density(f.q, best.partition, f.standalone)
