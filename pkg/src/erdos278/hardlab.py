"""Hard subset-sum instances built from prime log-weights, and their checker.

Weights are w_i = log(p_i/(p_i - 1)) for primes p_1 < ... < p_n, so
w_1 >= ... >= w_n.  With eps the smallest non-zero |sum c_i w_i| over
c in {-1, 0, 1}^n, pick an integer x > 4n/eps, put f_i = floor(w_i x),
c = lcm(f_1, ..., f_{n//2}) and

    a_i = c*f_i        for i <= n//2
    a_i = c*f_i + 1    otherwise.

eps itself is irrational.  It is handled through the exact ratio
R = prod ((p_i - 1)/p_i)**c_i closest to 1 and the certified lower bound
log t >= (t - 1)/t for t = max(R, 1/R).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .core import format_rational, lcm_all, parse_rational, validate_prime_set
from .errors import ResourceError, ValidationError
from .interval import PrecisionPolicy, certified_floor_log_ratio
from .knapsack import (
    DISTINCT_SUMS_CAP,
    find_subset_with_sum,
    find_sum_collision,
)

EPSILON_CAP = 18
GCD_SCAN_CAP = 20
FORMAT_NAME = "erdos278.hard-instance"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class EpsilonCertificate:
    witness_ratio: Fraction  # t = max(R*, 1/R*) > 1
    eps_lower: Fraction
    signs: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "witness_ratio": format_rational(self.witness_ratio),
            "eps_lower": format_rational(self.eps_lower),
            "signs": list(self.signs),
        }


def _signed_ratios(ps: Sequence[int]) -> list[tuple[Fraction, tuple[int, ...]]]:
    out = [(Fraction(1), ())]
    for p in ps:
        f = Fraction(p - 1, p)
        out = [(r * g, v + (s,)) for r, v in out for s, g in ((-1, 1 / f), (0, 1), (1, f))]
    return out


def epsilon_certified(primes: Iterable[int], cap: int = EPSILON_CAP) -> EpsilonCertificate:
    """Exact ratio closest to 1 over non-zero sign vectors, by meet in the middle.

    The products over distinct primes are injective in the sign vector (the
    largest prime with a non-zero sign survives in the denominator), so the
    left half's ratios are distinct and the closest partner of each right
    ratio r sits next to 1/r in sorted order.
    """
    ps = validate_prime_set(primes)
    if not ps:
        raise ValidationError("prime set must be non-empty")
    if len(ps) > cap:
        raise ResourceError(f"{len(ps)} primes exceed epsilon enumeration cap {cap}",
                            "epsilon_cap", cap)
    h = len(ps) // 2
    left = sorted(_signed_ratios(ps[:h]))
    keys = [r for r, _ in left]
    zero_left = (0,) * h
    best_t = None
    best_v: tuple[int, ...] = ()
    for r, vr in _signed_ratios(ps[h:]):
        right_zero = not any(vr)
        i = bisect.bisect_left(keys, 1 / r)
        for j in range(max(0, i - 2), min(len(keys), i + 2)):
            lr, vl = left[j]
            if right_zero and vl == zero_left:
                continue
            prod_ = lr * r
            t = prod_ if prod_ >= 1 else 1 / prod_
            if best_t is None or t < best_t:
                best_t, best_v = t, vl + vr
    return EpsilonCertificate(best_t, (best_t - 1) / best_t, best_v)


def weights_within_factor_two(primes: Sequence[int]) -> bool:
    """w_max <= 2 w_min, i.e. p_min/(p_min-1) <= (p_max/(p_max-1))**2, exactly."""
    lo, hi = min(primes), max(primes)
    return Fraction(lo, lo - 1) <= Fraction(hi, hi - 1) ** 2


def floor_weight_times_x(p: int, x: int, policy: PrecisionPolicy | None = None) -> int:
    return certified_floor_log_ratio(p, x, policy)


# ---------------------------------------------------------------------------
# condition checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionReport:
    a_ok: bool
    b_ok: bool
    c_ok: bool
    d_ok: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def all_ok(self) -> bool:
        return self.a_ok and self.b_ok and self.c_ok and self.d_ok

    def to_json(self) -> dict:
        return {"a_ok": self.a_ok, "b_ok": self.b_ok, "c_ok": self.c_ok, "d_ok": self.d_ok,
                "witnesses": self.witnesses}

    @classmethod
    def from_json(cls, data: dict) -> "ConditionReport":
        return cls(bool(data["a_ok"]), bool(data["b_ok"]), bool(data["c_ok"]),
                   bool(data["d_ok"]), dict(data.get("witnesses", {})))


def check_condition_a(a: Sequence[int]) -> list[int] | None:
    """Every I with 10|I| <= n has sum < total/2; returns a violating I or None.

    For a fixed size s the largest sum comes from the s largest items, so
    checking those sets covers every I of that size.
    """
    n = len(a)
    total = sum(a)
    order = sorted(range(n), key=lambda i: (-a[i], i))
    run = 0
    for s in range(0, n // 10 + 1):
        if s:
            run += a[order[s - 1]]
        if 2 * run >= total:
            return sorted(order[:s])
    return None


def check_condition_b(a: Sequence[int], cap: int = GCD_SCAN_CAP) -> tuple[list[int], int] | None:
    """Some d > 1 divides more than ceil(n/2) items; returns (indices, gcd) or None."""
    n = len(a)
    if n > cap:
        raise ResourceError(f"{n} items exceed subset-gcd scan cap {cap}", "gcd_scan_cap", cap)
    m = -(-n // 2) + 1
    if m > n:
        return None
    chosen: list[int] = []

    def dfs(start: int, g: int):
        if len(chosen) == m:
            return (list(chosen), g) if g != 1 else None
        if g == 1:
            return None
        for i in range(start, n - (m - len(chosen)) + 1):
            chosen.append(i)
            hit = dfs(i + 1, math.gcd(g, a[i]))
            chosen.pop()
            if hit:
                return hit
        return None

    return dfs(0, 0)


def verify_chvatal_conditions(a: Sequence[int], cap: int = DISTINCT_SUMS_CAP,
                              gcd_cap: int = GCD_SCAN_CAP) -> ConditionReport:
    a = [int(v) for v in a]
    n = len(a)
    if n > cap:
        raise ResourceError(f"{n} items exceed verifier cap {cap}", "verify_cap", cap)
    witnesses: dict = {}
    wa = check_condition_a(a)
    if wa is not None:
        witnesses["a"] = {"I": wa}
    wb = check_condition_b(a, gcd_cap)
    if wb is not None:
        witnesses["b"] = {"I": wb[0], "divisor": str(wb[1])}
    wc = find_sum_collision(a, cap)
    if wc is not None:
        witnesses["c"] = {"I": list(wc[0]), "J": list(wc[1])}
    wd = find_subset_with_sum(a, sum(a) // 2)
    if wd is not None:
        witnesses["d"] = {"I": list(wd)}
    return ConditionReport(wa is None, wb is None, wc is None, wd is None, witnesses)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HardInstance:
    primes: tuple[int, ...]
    x: int
    c: int
    floors: tuple[int, ...]
    a: tuple[int, ...]
    epsilon: EpsilonCertificate | None = None
    x_supplied: bool = False
    report: ConditionReport | None = None

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def half_capacity(self) -> int:
        return sum(self.a) // 2

    def ratio_below_three(self) -> bool:
        return max(self.a) < 3 * min(self.a)

    def weights_times_x_at_least(self, bound: int) -> bool:
        # floor(w x) >= bound <=> w x >= bound for integer bound; floors are certified
        return all(f >= bound for f in self.floors)

    def to_json(self) -> dict:
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "primes": list(self.primes),
            "x": str(self.x),
            "c": str(self.c),
            "floors": [str(f) for f in self.floors],
            "a": [str(v) for v in self.a],
            "eps_lower": format_rational(self.epsilon.eps_lower) if self.epsilon else None,
            "witness_ratio": format_rational(self.epsilon.witness_ratio) if self.epsilon else None,
            "x_supplied": self.x_supplied,
            "report": self.report.to_json() if self.report else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "HardInstance":
        try:
            eps = None
            if data.get("eps_lower"):
                lower = parse_rational(data["eps_lower"])
                ratio = parse_rational(data["witness_ratio"]) if data.get("witness_ratio") else 1 / (1 - lower)
                eps = EpsilonCertificate(ratio, lower, ())
            report = ConditionReport.from_json(data["report"]) if data.get("report") else None
            return cls(
                tuple(int(p) for p in data["primes"]),
                int(data["x"]),
                int(data["c"]),
                tuple(int(f) for f in data.get("floors", ())),
                tuple(int(v) for v in data["a"]),
                eps,
                bool(data.get("x_supplied", False)),
                report,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed hard instance: {exc}") from None


def load_values(data: dict) -> list[int]:
    """The integer list ``a`` from an instance record (base-10 strings or ints)."""
    try:
        return [int(v) for v in data["a"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"instance file needs an integer list 'a': {exc}") from None


def generate_hard_instance(primes: Iterable[int], x: int | None = None,
                           policy: PrecisionPolicy | None = None,
                           eps_cap: int = EPSILON_CAP, verify: bool = True) -> HardInstance:
    """Build the instance; verify (a)-(d) when the verifier caps allow."""
    ps = validate_prime_set(primes)
    n = len(ps)
    if n < 2:
        raise ValidationError("need at least two primes")
    if not weights_within_factor_two(ps):
        raise ValidationError(
            f"weights differ by more than a factor 2: log({ps[0]}/{ps[0] - 1}) > "
            f"2*log({ps[-1]}/{ps[-1] - 1})")
    eps = None
    if x is None:
        eps = epsilon_certified(ps, eps_cap)
        x = math.floor(4 * n / eps.eps_lower) + 1
    elif isinstance(x, bool) or not isinstance(x, int) or x < 1:
        raise ValidationError(f"x must be a positive integer, got {x!r}")
    floors = tuple(floor_weight_times_x(p, x, policy) for p in ps)
    half = n // 2
    c = lcm_all(floors[:half])
    a = tuple(c * f + (0 if i < half else 1) for i, f in enumerate(floors))
    report = None
    if verify and n <= min(DISTINCT_SUMS_CAP, GCD_SCAN_CAP):
        report = verify_chvatal_conditions(a)
    return HardInstance(ps, x, c, floors, a, eps, eps is None, report)


def epsilon_bruteforce(primes: Sequence[int]) -> Fraction:
    """max(R, 1/R) closest to 1 by full 3**n enumeration (test oracle)."""
    ps = list(primes)
    best = None
    for signs in product((-1, 0, 1), repeat=len(ps)):
        if not any(signs):
            continue
        r = Fraction(1)
        for p, s in zip(ps, signs):
            r *= Fraction(p - 1, p) ** s
        t = max(r, 1 / r)
        if best is None or t < best:
            best = t
    return best
