"""Subset-sum solvers: instrumented branch and bound, meet-in-the-middle checks.

Weights equal values throughout (the instances built here have that shape).
Node definition for :func:`solve_branch_and_bound`: every call of the
recursive include/exclude step is one node, counted on entry, before any
pruning test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetError, ResourceError, ValidationError

DISTINCT_SUMS_CAP = 24
SUBSET_SUM_CAP = 40


@dataclass(frozen=True)
class KnapsackResult:
    best_value: int
    chosen: tuple[int, ...]
    nodes_expanded: int

    def to_json(self) -> dict:
        return {
            "best_value": str(self.best_value),
            "chosen": list(self.chosen),
            "nodes_expanded": self.nodes_expanded,
        }


def _ints(a: Sequence[int]) -> list[int]:
    out = []
    for v in a:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValidationError(f"items must be integers, got {v!r}")
        out.append(v)
    return out


def solve_branch_and_bound(a: Sequence[int], capacity: int,
                           node_budget: int | None = None) -> KnapsackResult:
    """max sum(a[i] for i in I) subject to the sum being <= capacity.

    Items are branched in order of decreasing size, include before exclude.
    The bound is the fractional relaxation, which for weights = values is
    min(capacity, current + remaining).
    """
    items = _ints(a)
    if any(v < 0 for v in items):
        raise ValidationError("items must be non-negative")
    if capacity < 0:
        raise ValidationError(f"capacity must be >= 0, got {capacity}")
    order = sorted(range(len(items)), key=lambda i: (-items[i], i))
    vals = [items[i] for i in order]
    n = len(vals)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + vals[i]

    best_value = 0
    best_set: list[int] = []
    taken: list[int] = []
    nodes = 0

    def dfs(i: int, cur: int) -> None:
        nonlocal nodes, best_value, best_set
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise BudgetError(f"node budget {node_budget} exhausted (node_budget)",
                              "node_budget", node_budget)
        if cur > best_value:
            best_value = cur
            best_set = list(taken)
        if i == n or best_value == capacity:
            return
        if min(capacity, cur + suffix[i]) <= best_value:
            return
        if cur + vals[i] <= capacity:
            taken.append(order[i])
            dfs(i + 1, cur + vals[i])
            taken.pop()
        dfs(i + 1, cur)

    dfs(0, 0)
    return KnapsackResult(best_value, tuple(sorted(best_set)), nodes)


def _subset_sums(vals: Sequence[int]) -> list[tuple[int, int]]:
    """(sum, mask) for every subset of vals."""
    sums = [(0, 0)]
    for i, v in enumerate(vals):
        bit = 1 << i
        sums += [(s + v, m | bit) for s, m in sums]
    return sums


def _mask_indices(mask: int, offset: int = 0) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + offset)
        mask >>= 1
        i += 1
    return out


def find_subset_with_sum(a: Sequence[int], target: int,
                         cap: int = SUBSET_SUM_CAP) -> tuple[int, ...] | None:
    """Indices of some subset summing to ``target``, or None (meet in the middle)."""
    items = _ints(a)
    if len(items) > cap:
        raise ResourceError(f"{len(items)} items exceed subset-sum cap {cap}", "subset_sum_cap", cap)
    h = len(items) // 2
    left = {}
    for s, m in _subset_sums(items[:h]):
        left.setdefault(s, m)
    for s, m in _subset_sums(items[h:]):
        lm = left.get(target - s)
        if lm is not None:
            return tuple(_mask_indices(lm) + _mask_indices(m, h))
    return None


def subset_sum_exists(a: Sequence[int], target: int, cap: int = SUBSET_SUM_CAP) -> bool:
    return find_subset_with_sum(a, target, cap) is not None


def _signed_sums(vals: Sequence[int]) -> list[tuple[int, int, int]]:
    """(sum, plus_mask, minus_mask) over all sign vectors in {-1, 0, 1}^n."""
    out = [(0, 0, 0)]
    for i, v in enumerate(vals):
        bit = 1 << i
        prev = out
        out = (prev + [(s + v, p | bit, m) for s, p, m in prev]
               + [(s - v, p, m | bit) for s, p, m in prev])
    return out


def find_sum_collision(a: Sequence[int], cap: int = DISTINCT_SUMS_CAP
                       ) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Disjoint index sets I != J with equal sums, or None if all subset sums differ.

    Two subsets have equal sums iff some non-zero vector c in {-1, 0, 1}^n
    has sum(c_i a_i) = 0.  The vector is split in halves and the signed sums
    of the halves are matched through a hash map.
    """
    items = _ints(a)
    if len(items) > cap:
        raise ResourceError(f"{len(items)} items exceed distinct-sums cap {cap}",
                            "distinct_sums_cap", cap)
    h = len(items) // 2
    left: dict[int, tuple[int, int]] = {}
    for s, p, m in _signed_sums(items[:h]):
        if s == 0 and (p or m):
            return tuple(_mask_indices(p)), tuple(_mask_indices(m))
        left.setdefault(s, (p, m))
    for s, p, m in _signed_sums(items[h:]):
        if not (p or m):
            continue
        hit = left.get(-s)
        if hit is not None:
            lp, lm = hit
            return (tuple(_mask_indices(lp) + _mask_indices(p, h)),
                    tuple(_mask_indices(lm) + _mask_indices(m, h)))
    return None


def distinct_subset_sums(a: Sequence[int], cap: int = DISTINCT_SUMS_CAP) -> bool:
    return find_sum_collision(a, cap) is None


def subset_sums_dp(a: Sequence[int]) -> set[int]:
    """All reachable subset sums by value-indexed DP; small magnitudes only."""
    reach = {0}
    for v in _ints(a):
        reach |= {s + v for s in reach}
    return reach
