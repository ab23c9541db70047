"""Pure-Python versions of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; the
selector in :mod:`erdos278.kernels` picks one at import time.
"""


def _periodic_mask(a: int, n: int, period: int) -> int:
    # bit j set iff j = a (mod n), 0 <= j < period; built by doubling
    mask = 1 << a
    span = n
    while span < period:
        mask |= mask << span
        span <<= 1
    return mask & ((1 << period) - 1)


def count_uncovered(residues, moduli, period):
    """Residues in [0, period) hit by no congruence (one bit per residue)."""
    covered = 0
    for a, n in set(zip(residues, moduli)):
        if n == 1:
            return 0
        covered |= _periodic_mask(a, n, period)
    return period - covered.bit_count()


def residue_extrema(moduli, period):
    """Scan all residue tuples with the first residue fixed at 0.

    Returns ``(min_uncovered, min_tuple, max_uncovered, max_tuple, examined)``
    where each tuple is the lexicographically first one attaining its extreme.
    """
    moduli = list(moduli)
    r = len(moduli)
    cur = [0] * r
    best = {"min": period + 1, "min_t": None, "max": -1, "max_t": None, "seen": 0}

    def leaf(unc):
        best["seen"] += 1
        if unc < best["min"]:
            best["min"] = unc
            best["min_t"] = tuple(cur)
        if unc > best["max"]:
            best["max"] = unc
            best["max_t"] = tuple(cur)

    def dfs(level, cov, covered):
        n = moduli[level]
        if level == r - 1:
            for a in range(n):
                cur[level] = a
                leaf(period - covered - cov[a::n].count(0))
            return
        for a in range(n):
            cur[level] = a
            nxt = bytearray(cov)
            added = nxt[a::n].count(0)
            nxt[a::n] = b"\x01" * len(range(a, period, moduli[level]))
            dfs(level + 1, nxt, covered + added)

    cov = bytearray(period)
    cov[0::moduli[0]] = b"\x01" * len(range(0, period, moduli[0]))
    covered = len(range(0, period, moduli[0]))
    if r == 1:
        leaf(period - covered)
    else:
        dfs(1, cov, covered)
    return best["min"], best["min_t"], best["max"], best["max_t"], best["seen"]
