"""Minimising sum_j prod_{b in P_j} (1 - 1/b) over partitions of a prime set.

All search comparisons are exact.  Part products are carried as unreduced
integer pairs (num, den) and compared by cross-multiplication; logarithms
only show up in :func:`to_knapsack_log_form`, where they are certified
intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import (
    DEFAULT_BRUTEFORCE_CAP,
    Partition,
    format_rational,
    product_one_minus_inverse,
    validate_prime_set,
)
from .errors import ResourceError, ValidationError
from .interval import Interval, log_ratio_interval

DEFAULT_SEARCH_CAP_K2 = 30
DEFAULT_SEARCH_CAP = 20


@dataclass(frozen=True)
class PartitionValue:
    partition: Partition
    value: Fraction
    part_products: tuple[Fraction, ...]

    @classmethod
    def of(cls, partition: Partition) -> "PartitionValue":
        products = tuple(partition.part_products())
        return cls(partition, sum(products, Fraction(0)), products)

    @property
    def smaller_product(self) -> Fraction:
        return min(self.part_products)

    def to_json(self) -> dict:
        return {
            "partition": self.partition.to_json(),
            "value": format_rational(self.value),
            "part_products": [format_rational(x) for x in self.part_products],
        }


def _validate(primes: Iterable[int], k: int) -> tuple[int, ...]:
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ValidationError(f"number of parts must be a positive integer, got {k!r}")
    return validate_prime_set(primes)


def min_sum_partition(primes: Iterable[int], k: int, search_cap: int | None = None) -> PartitionValue:
    """Exact minimum of the partition value over partitions into k parts."""
    ps = _validate(primes, k)
    cap = search_cap if search_cap is not None else (
        DEFAULT_SEARCH_CAP_K2 if k == 2 else DEFAULT_SEARCH_CAP)
    if len(ps) > cap:
        raise ResourceError(f"{len(ps)} primes exceed partition search cap {cap} (search_cap)",
                            "search_cap", cap)
    if k == 1 or not ps:
        labels = [0] * len(ps)
    elif k == 2:
        labels = _two_way(ps)
    else:
        labels = _k_way(ps, k)
    return PartitionValue.of(Partition.from_assignment(ps, labels, k))


def _two_way(ps: tuple[int, ...]) -> list[int]:
    # Part products multiply to the fixed total, so the sum x + T/x falls as
    # the smaller product x rises towards sqrt(T).  A branch whose current
    # smaller product is already <= the incumbent's can only end lower.
    n = len(ps)
    labels = [0] * n
    best = {"num": 0, "den": 1, "labels": None}

    def dfs(i, n0, d0, n1, d1):
        # smaller current product
        if n0 * d1 <= n1 * d0:
            sn, sd = n0, d0
        else:
            sn, sd = n1, d1
        if best["labels"] is not None and sn * best["den"] <= best["num"] * sd:
            return
        if i == n:
            best.update(num=sn, den=sd, labels=list(labels))
            return
        p = ps[i]
        if i == 0:
            order = (0,)
        elif n0 * d1 <= n1 * d0:
            order = (0, 1)
        else:
            order = (1, 0)
        for j in order:
            labels[i] = j
            if j == 0:
                dfs(i + 1, n0 * (p - 1), d0 * p, n1, d1)
            else:
                dfs(i + 1, n0, d0, n1 * (p - 1), d1 * p)

    dfs(0, 1, 1, 1, 1)
    return best["labels"]


def bound_exceeds(current: list[int], total: int, incumbent: int) -> bool:
    """True iff every completion of the current parts sums to more than ``incumbent``.

    Integer form: part products are current[j]/D over a common denominator
    D, ``total`` is prod(final products) * D**k and ``incumbent`` is a sum
    numerator over D.  Final products obey y_j <= current[j] with a fixed
    product, so the smallest reachable sum sets y_j = min(current[j], L).
    The level L is generally irrational and only enters through L**m.
    """
    xs = sorted(current, reverse=True)
    k = len(xs)
    rest = [1] * (k + 1)  # rest[m] = prod xs[m:]
    rest_sum = [0] * (k + 1)
    for m in range(k - 1, -1, -1):
        rest[m] = rest[m + 1] * xs[m]
        rest_sum[m] = rest_sum[m + 1] + xs[m]
    for m in range(1, k + 1):
        # top m parts sit at level L with L**m * rest[m] = total
        if total > xs[m - 1] ** m * rest[m]:
            continue
        if m < k and total < xs[m] ** m * rest[m]:
            continue
        slack = incumbent - rest_sum[m]
        if slack <= 0:
            return True
        return slack**m * rest[m] < m**m * total
    return False


def _k_way(ps: tuple[int, ...], k: int) -> list[int]:
    # part j's product is prods[j]/D with D = prod(ps); unassigned primes
    # count as "not in part j", contributing p to every numerator
    n = len(ps)
    denom = math.prod(ps)
    total = math.prod(p - 1 for p in ps) * denom ** (k - 1)
    labels = [0] * n
    prods = [denom] * k
    best: dict = {"value": None, "key": None, "labels": None}

    def key(lab):
        return Partition.from_assignment(ps, lab, k).sort_key()

    def dfs(i, used):
        if best["value"] is not None and bound_exceeds(prods, total, best["value"]):
            return
        if i == n:
            value = sum(prods)
            if best["value"] is None or value < best["value"] or (
                    value == best["value"] and key(labels) < best["key"]):
                best.update(value=value, key=key(labels), labels=list(labels))
            return
        p = ps[i]
        # restricted growth: existing parts by descending product, then one new part
        order = sorted(range(used), key=lambda j: (-prods[j], j))
        if used < k:
            order.append(used)
        for j in order:
            labels[i] = j
            saved = prods[j]
            prods[j] = saved // p * (p - 1)
            dfs(i + 1, max(used, j + 1))
            prods[j] = saved

    dfs(0, 0)
    return best["labels"]


def partition_bruteforce(primes: Iterable[int], k: int,
                         cap: int = DEFAULT_BRUTEFORCE_CAP) -> PartitionValue:
    """Enumerate all k**|P| labelled assignments; canonical minimiser.

    Values are compared as integer numerators over the common denominator
    prod(P), vectorised with numpy (exact int64 when it cannot overflow,
    Python integers otherwise).
    """
    ps = _validate(primes, k)
    n = len(ps)
    count = k**n
    if count > cap:
        raise ResourceError(f"{k}**{n} = {count} assignments exceed brute-force cap {cap}",
                            "bruteforce_cap", cap)
    denom = math.prod(ps)
    dtype = np.int64 if k * denom < 2**62 else object
    best_num = None
    best_idx: list[int] = []
    chunk = 1 << 16
    for start in range(0, count, chunk):
        idx = np.arange(start, min(start + chunk, count), dtype=np.int64)
        digits = []
        rem = idx.copy()
        for _ in range(n):
            digits.append(rem % k)
            rem //= k
        numer = np.zeros(len(idx), dtype=dtype)
        for j in range(k):
            term = np.ones(len(idx), dtype=dtype)
            for i, p in enumerate(ps):
                term = term * np.where(digits[i] == j, p - 1, p).astype(dtype)
            numer = numer + term
        low = numer.min()
        if best_num is None or low < best_num:
            best_num = low
            best_idx = []
        if low == best_num:
            best_idx.extend(int(v) for v in idx[numer == low])
    candidates = []
    for v in best_idx:
        lab = []
        for _ in range(n):
            lab.append(v % k)
            v //= k
        candidates.append(Partition.from_assignment(ps, lab, k))
    return PartitionValue.of(min(candidates, key=Partition.sort_key))


# ---------------------------------------------------------------------------
# log-form bridge
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KnapsackLogInstance:
    """Weights -log(1 - 1/p) and capacity half their sum, as certified intervals.

    Choosing I within the primes with the weight sum maximal but at most
    the capacity is the 2-part problem: I is the part with the larger
    product.  :meth:`solve_exact` answers it through exact products.
    """

    primes: tuple[int, ...]
    weights: tuple[Interval, ...]
    capacity: Interval
    precision_bits: int

    def solve_exact(self) -> tuple[int, ...]:
        best = min_sum_partition(self.primes, 2)
        parts = best.partition.parts
        prods = best.part_products
        return parts[0] if prods[0] >= prods[1] else parts[1]

    def to_json(self) -> dict:
        digits = math.ceil(self.precision_bits * math.log10(2)) + 2
        return {
            "primes": list(self.primes),
            "precision_bits": self.precision_bits,
            "weights": [w.decimal_strings(digits) for w in self.weights],
            "capacity": self.capacity.decimal_strings(digits),
        }


def to_knapsack_log_form(primes: Iterable[int], precision_bits: int = 64) -> KnapsackLogInstance:
    ps = validate_prime_set(primes)
    if not ps:
        raise ValidationError("prime set must be non-empty")
    if precision_bits < 1:
        raise ValidationError("precision_bits must be positive")
    # one spare bit for decimal rounding, log2(n) for the summed capacity
    work = precision_bits + 1 + max(1, len(ps)).bit_length()
    weights = tuple(log_ratio_interval(p, work) for p in ps)
    total = weights[0]
    for w in weights[1:]:
        total = total + w
    return KnapsackLogInstance(ps, weights, total.scale(Fraction(1, 2)), precision_bits)
