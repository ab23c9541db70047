"""Exact number types and validated domain objects.

Densities are plain :class:`fractions.Fraction` values (always reduced,
denominator positive).  Every other type here is an immutable dataclass
that validates itself on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import StructureError, ValidationError

ExactRational = Fraction

DEFAULT_SIEVE_CAP = 10**8
DEFAULT_ENUM_CAP = 10**7
DEFAULT_PRECISION_CAP = 4096
DEFAULT_BRUTEFORCE_CAP = 10**7


# ---------------------------------------------------------------------------
# small number theory helpers
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out // math.gcd(out, v) * v
    return out


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Smallest non-negative x with x = r1 (mod m1) and x = r2 (mod m2), coprime moduli."""
    if math.gcd(m1, m2) != 1:
        raise ValidationError(f"CRT needs coprime moduli, got {m1} and {m2}")
    r1 %= m1
    t = ((r2 - r1) * pow(m1, -1, m2)) % m2
    return r1 + m1 * t


def one_minus_inverse(p: int) -> Fraction:
    return Fraction(p - 1, p)


def product_one_minus_inverse(primes: Iterable[int]) -> Fraction:
    num = den = 1
    for p in primes:
        num *= p - 1
        den *= p
    return Fraction(num, den)


def _as_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{what} must be an integer, got {value!r}")
    return value


def validate_prime_set(primes: Iterable[int], what: str = "prime set") -> tuple[int, ...]:
    """Sorted tuple of distinct primes, or ValidationError."""
    out = []
    for p in primes:
        p = _as_int(p, what)
        if not is_prime(p):
            raise ValidationError(f"{what}: {p} is not prime")
        out.append(p)
    if len(set(out)) != len(out):
        raise ValidationError(f"{what}: repeated prime in {sorted(out)}")
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# rational text encoding
# ---------------------------------------------------------------------------

def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/")
            if int(den) <= 0:
                raise ValueError
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"not a rational 'num/den': {text!r}") from None


# ---------------------------------------------------------------------------
# congruences
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Congruence:
    a: int
    n: int

    def __post_init__(self):
        _as_int(self.a, "residue")
        _as_int(self.n, "modulus")
        if self.n < 1:
            raise ValidationError(f"modulus must be >= 1, got {self.n}")
        if not 0 <= self.a < self.n:
            raise ValidationError(f"residue {self.a} not in [0, {self.n})")

    def hits(self, k: int) -> bool:
        return k % self.n == self.a

    def __str__(self):
        return f"{self.a} mod {self.n}"


def mk_congruence(a: int, n: int) -> Congruence:
    _as_int(a, "residue")
    _as_int(n, "modulus")
    if n < 1:
        raise ValidationError(f"modulus must be >= 1, got {n}")
    return Congruence(a % n, n)


@dataclass(frozen=True)
class CongruenceSystem:
    congruences: tuple[Congruence, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "congruences", tuple(self.congruences))
        for c in self.congruences:
            if not isinstance(c, Congruence):
                raise ValidationError(f"not a Congruence: {c!r}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "CongruenceSystem":
        return cls(tuple(mk_congruence(a, n) for a, n in pairs))

    @classmethod
    def from_residues(cls, residues: Sequence[int], moduli: Sequence[int]) -> "CongruenceSystem":
        if len(residues) != len(moduli):
            raise ValidationError("residues and moduli differ in length")
        return cls.from_pairs(zip(residues, moduli))

    @property
    def r(self) -> int:
        return len(self.congruences)

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(c.n for c in self.congruences)

    @property
    def residues(self) -> tuple[int, ...]:
        return tuple(c.a for c in self.congruences)

    def __len__(self):
        return len(self.congruences)

    def __iter__(self):
        return iter(self.congruences)

    def appended(self, c: Congruence) -> "CongruenceSystem":
        return CongruenceSystem(self.congruences + (c,))

    def to_json(self) -> dict:
        return {"congruences": [{"a": c.a, "n": c.n} for c in self.congruences]}

    @classmethod
    def from_json(cls, data: dict) -> "CongruenceSystem":
        try:
            items = data["congruences"]
            return cls.from_pairs((int(c["a"]), int(c["n"])) for c in items)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed congruence system: {exc}") from None


def system_lcm(s: CongruenceSystem) -> int:
    if s.r == 0:
        raise ValidationError("empty congruence system has no period")
    return lcm_all(s.moduli)


# ---------------------------------------------------------------------------
# structured prime families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeFamily:
    """Moduli {q} + {q*p : p in primes} (standalone) or just {q*p}."""

    q: int
    standalone: bool
    primes: tuple[int, ...]

    def __post_init__(self):
        q = _as_int(self.q, "q")
        if not is_prime(q):
            raise ValidationError(f"q must be prime, got {q}")
        primes = validate_prime_set(self.primes, "family primes")
        if q in primes:
            raise StructureError(f"prime {q} equals q")
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "standalone", bool(self.standalone))

    @property
    def moduli(self) -> tuple[int, ...]:
        head = (self.q,) if self.standalone else ()
        return head + tuple(self.q * p for p in self.primes)

    @property
    def parts(self) -> int:
        """Number of residue classes mod q left for the composite moduli."""
        return self.q - 1 if self.standalone else self.q

    def to_json(self) -> dict:
        return {"q": self.q, "standalone": self.standalone, "primes": list(self.primes)}

    @classmethod
    def from_json(cls, data: dict) -> "PrimeFamily":
        try:
            return cls(int(data["q"]), bool(data.get("standalone", False)),
                       tuple(int(p) for p in data["primes"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed family: {exc}") from None


def validate_q_family(moduli: Sequence[int], q: int) -> PrimeFamily:
    q = _as_int(q, "q")
    if not is_prime(q):
        raise ValidationError(f"q must be prime, got {q}")
    if not moduli:
        raise ValidationError("moduli must be non-empty")
    standalone = False
    primes: list[int] = []
    for m in moduli:
        m = _as_int(m, "modulus")
        if m == q:
            if standalone:
                raise StructureError(f"modulus {q} repeated")
            standalone = True
            continue
        if m <= 0 or m % q:
            raise StructureError(f"modulus {m} is neither {q} nor {q}*p")
        p = m // q
        if not is_prime(p):
            raise StructureError(f"modulus {m} = {q}*{p} with {p} not prime")
        if p == q:
            raise StructureError(f"modulus {m} = {q}*{q}; p must differ from q")
        if p in primes:
            raise StructureError(f"prime {p} repeated (modulus {m})")
        primes.append(p)
    composite = [q * p for p in primes]
    for i, m1 in enumerate(composite):
        for m2 in composite[i + 1:]:
            g = math.gcd(m1, m2)
            if g != q:
                raise StructureError(f"gcd({m1}, {m2}) = {g} != {q}")
    return PrimeFamily(q, standalone, tuple(sorted(primes)))


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

def _part_key(part: tuple[int, ...]):
    return (1, ()) if not part else (0, part)


@dataclass(frozen=True)
class Partition:
    """k labelled-by-position prime sets, stored in canonical order.

    Canonical order: non-empty parts sorted by their smallest prime, then
    the empty parts.
    """

    parts: tuple[tuple[int, ...], ...]
    primes: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        parts = tuple(tuple(sorted(part)) for part in self.parts)
        flat = [p for part in parts for p in part]
        if len(set(flat)) != len(flat):
            raise ValidationError(f"parts are not disjoint: {parts}")
        object.__setattr__(self, "parts", tuple(sorted(parts, key=_part_key)))
        object.__setattr__(self, "primes", tuple(sorted(flat)))

    @classmethod
    def from_assignment(cls, primes: Sequence[int], labels: Sequence[int], k: int) -> "Partition":
        buckets: list[list[int]] = [[] for _ in range(k)]
        for p, j in zip(primes, labels):
            buckets[j].append(p)
        return cls(tuple(tuple(b) for b in buckets))

    @property
    def k(self) -> int:
        return len(self.parts)

    def sort_key(self):
        return tuple(_part_key(part) for part in self.parts)

    def part_products(self) -> list[Fraction]:
        return [product_one_minus_inverse(part) for part in self.parts]

    def value(self) -> Fraction:
        return sum(self.part_products(), Fraction(0))

    def __str__(self):
        return "|".join("{" + ",".join(map(str, part)) + "}" if part else "∅"
                        for part in self.parts)

    def to_json(self) -> list[list[int]]:
        return [list(part) for part in self.parts]
