"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed with
capture disabled) or directly with ``python tests/test_acceptance.py``.
"""

import contextlib
import io
import itertools
import json
import math
import os
import sys
import time
from fractions import Fraction

import mpmath
import pytest

from erdos278.cli import TIMING_KEYS, run_cli
from erdos278.core import PrimeFamily, product_one_minus_inverse
from erdos278.density import eq1_density, realize_partition, sieve_uncovered_density
from erdos278.errors import PrecisionError
from erdos278.hardlab import (
    check_condition_a,
    generate_hard_instance,
    verify_chvatal_conditions,
)
from erdos278.interval import PrecisionPolicy, certified_floor_log_ratio
from erdos278.knapsack import solve_branch_and_bound
from erdos278.partition import min_sum_partition, partition_bruteforce
from erdos278.residues import residue_extrema

sys.path.insert(0, os.path.dirname(__file__))
from conftest import primes_from  # noqa: E402

FIRST_12 = primes_from(2, 12)


@pytest.fixture
def criterion(request):
    """Context manager printing one PASS/FAIL line for the wrapped checks."""
    capman = request.config.pluginmanager.getplugin("capturemanager")

    @contextlib.contextmanager
    def run(number, title):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({time.perf_counter() - t0:.2f} s)"
            if capman is not None:
                with capman.global_and_fixture_disabled():
                    print("\n" + line)
            else:
                print(line)

    return run


def cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(argv, out, err)
    return code, out.getvalue(), err.getvalue()


# 1 ------------------------------------------------------------------------

def test_criterion_1_eq1_concordance(criterion):
    with criterion(1, "two-part closed form equals sieve on all 81 splits of {2,5,7,11}"):
        t0 = time.perf_counter()
        checked = 0
        for labels in itertools.product((0, 1, 2), repeat=4):
            p1 = [p for p, l in zip((2, 5, 7, 11), labels) if l == 1]
            p2 = [p for p, l in zip((2, 5, 7, 11), labels) if l == 2]
            family = PrimeFamily(3, True, tuple(p1 + p2))
            system = realize_partition(family, [p1, p2])
            assert system.moduli[0] == 3 and sorted(system.moduli[1:]) == sorted(3 * p for p in p1 + p2)
            assert eq1_density(p1, p2) == sieve_uncovered_density(system).density
            checked += 1
        assert checked == 81
        assert time.perf_counter() - t0 < 1.0


# 2 ------------------------------------------------------------------------

def test_criterion_2_exhaustive_optimum(criterion):
    with criterion(2, "optimize 3 6 15 = 13/30, worst 3 6 15 = 2/3"):
        t0 = time.perf_counter()
        code, out, _ = cli(["optimize", "3", "6", "15", "--json"])
        assert code == 0 and json.loads(out)["results"]["density"] == "13/30"
        code, out, _ = cli(["worst", "3", "6", "15", "--json"])
        assert code == 0 and json.loads(out)["results"]["density"] == "2/3"
        assert time.perf_counter() - t0 < 1.0


# 3 ------------------------------------------------------------------------

def simpson_catalog():
    """Fixed catalog of moduli lists with product at most 10**5."""
    shapes = [(2, range(2, 41)), (3, range(2, 17)), (4, range(2, 10)), (5, range(2, 7))]
    out = []
    for length, values in shapes:
        for moduli in itertools.combinations_with_replacement(values, length):
            if math.prod(moduli) <= 10**5:
                out.append(list(moduli))
    return out


def test_criterion_3_simpson(criterion):
    with criterion(3, "max over residue tuples attained at all-equal residues"):
        catalog = simpson_catalog()
        assert len(catalog) >= 200
        bad = [m for m in catalog if not residue_extrema(m).max_at_equal_residues]
        assert bad == [], bad[:5]


# 4 ------------------------------------------------------------------------

def test_criterion_4_partition_vs_bruteforce(criterion):
    with criterion(4, "partition optimizer equals brute force, |P| <= 10 of first 12 primes, k in {2,3}"):
        t0 = time.perf_counter()
        count = 0
        for m in range(11):
            for ps in itertools.combinations(FIRST_12, m):
                for k in (2, 3):
                    fast = min_sum_partition(ps, k)
                    slow = partition_bruteforce(ps, k)
                    assert fast.value == slow.value, (ps, k)
                    assert fast.partition == slow.partition, (ps, k)
                    count += 1
        assert count == 2 * (2**12 - 13)
        assert time.perf_counter() - t0 < 60.0


# 5 ------------------------------------------------------------------------

def test_criterion_5_identities(criterion):
    with criterion(5, "product, square-difference, sqrt and argmin identities for |P| <= 12"):
        for mask in range(1 << 12):
            ps = [p for i, p in enumerate(FIRST_12) if mask >> i & 1]
            m = len(ps)
            total = product_one_minus_inverse(ps)
            d = math.prod(ps)
            tn = math.prod(p - 1 for p in ps)
            # part products scaled by d: X = prod_{P1}(p-1) * prod_{P2} p, exact integers
            num = [1] * (1 << m)
            den = [1] * (1 << m)
            for s in range(1, 1 << m):
                low = (s & -s).bit_length() - 1
                num[s] = num[s & (s - 1)] * (ps[low] - 1)
                den[s] = den[s & (s - 1)] * ps[low]
            full = (1 << m) - 1
            best_sum = best_diff = None
            arg_sum, arg_diff = set(), set()
            for s in range(1 << m):
                x = num[s] * den[full ^ s]
                y = num[full ^ s] * den[s]
                assert x * y == tn * d
                assert (x + y) ** 2 - (x - y) ** 2 == 4 * tn * d
                assert min(x, y) ** 2 <= tn * d
                key = min(s, full ^ s)
                if best_sum is None or x + y < best_sum:
                    best_sum, arg_sum = x + y, {key}
                elif x + y == best_sum:
                    arg_sum.add(key)
                diff = abs(x - y)
                if best_diff is None or diff < best_diff:
                    best_diff, arg_diff = diff, {key}
                elif diff == best_diff:
                    arg_diff.add(key)
            assert arg_sum == arg_diff
            best = min_sum_partition(ps, 2)
            assert best.value == Fraction(best_sum, d)
            assert best.smaller_product ** 2 <= total
            x, y = best.part_products
            assert x * y == total and (x + y) ** 2 - (x - y) ** 2 == 4 * total


# 6 ------------------------------------------------------------------------

def hard_prime_sets():
    sets = [[101, 103, 107, 109]]
    block = primes_from(211, 7)  # 211, ..., 241
    assert block[-1] == 241
    sets += [block[:n] for n in range(2, 8)]
    sets.append(primes_from(211, 8))
    return sets


def test_criterion_6_hard_instance_soundness(criterion):
    with criterion(6, "hard instances for {101..109} and {211..241} verify all-true"):
        mpmath.mp.prec = 400
        for ps in hard_prime_sets():
            inst = generate_hard_instance(ps)
            n = len(ps)
            assert inst.report is not None and inst.report.all_ok, ps
            assert inst.a[0] < 3 * inst.a[-1] and inst.ratio_below_three()
            assert inst.weights_times_x_at_least(4 * n)
            assert inst.x > 4 * n / inst.epsilon.eps_lower
            for p in ps:  # independent check of w x >= 4n
                assert inst.x * mpmath.log(mpmath.mpf(p) / (p - 1)) >= 4 * n


# 7 ------------------------------------------------------------------------

def test_criterion_7_verifier(criterion):
    with criterion(7, "verifier examples and condition (a) vs direct enumeration"):
        assert verify_chvatal_conditions([2, 3, 7]).all_ok
        for a in ([1, 2, 4], [2, 3]):
            r = verify_chvatal_conditions(a)
            assert (r.a_ok, r.b_ok, r.c_ok, r.d_ok) == (True, True, True, False)
        import random
        rng = random.Random(278)
        for trial in range(600):
            n = trial % 12 + 1
            a = [rng.randint(1, 40) for _ in range(n)]
            if trial % 4 == 0:
                a[rng.randrange(n)] = sum(a) - rng.randint(0, 5)
            total = sum(a)
            direct = all(
                2 * sum(a[i] for i in sub) < total
                for size in range(n + 1) if 10 * size <= n
                for sub in itertools.combinations(range(n), size)
            )
            assert (check_condition_a(a) is None) == direct, a


# 8 ------------------------------------------------------------------------

def test_criterion_8_hardness(criterion):
    with criterion(8, "branch-and-bound nodes >= 2^floor(n/10), increasing in n = 10, 14, 18"):
        nodes = []
        for n in (10, 14, 18):
            t0 = time.perf_counter()
            inst = generate_hard_instance(primes_from(211, n))
            assert inst.report.all_ok
            res = solve_branch_and_bound(inst.a, inst.half_capacity)
            assert res.nodes_expanded >= 2 ** (n // 10)
            assert time.perf_counter() - t0 <= 600
            nodes.append(res.nodes_expanded)
        assert nodes == sorted(nodes) and len(set(nodes)) == 3, nodes


# 9 ------------------------------------------------------------------------

def test_criterion_9_precision_safety(criterion):
    with criterion(9, "low precision cap on an adversarial x raises a precision error"):
        # a continued-fraction denominator of ln 2 puts x*ln 2 next to an integer
        mpmath.mp.prec = 200
        ln2 = mpmath.log(2)
        h0, h1, v = 0, 1, ln2
        x = None
        for _ in range(90):
            q = int(mpmath.floor(v))
            h0, h1 = h1, q * h1 + h0
            v = 1 / (v - q)
            if h1 > 10**20:
                x = h1
                break
        assert x is not None
        with pytest.raises(PrecisionError):
            certified_floor_log_ratio(2, x, PrecisionPolicy(start_bits=8, max_bits=32))
        with pytest.raises(PrecisionError):
            certified_floor_log_ratio(3, 2**200 + 1, PrecisionPolicy(max_bits=64))
        assert certified_floor_log_ratio(2, x) == int(mpmath.floor(x * ln2))


# 10 -----------------------------------------------------------------------

def _strip(report_text, as_json):
    if as_json:
        def drop(o):
            if isinstance(o, dict):
                return {k: drop(v) for k, v in o.items() if k not in TIMING_KEYS}
            if isinstance(o, list):
                return [drop(v) for v in o]
            return o
        return json.dumps(drop(json.loads(report_text)), sort_keys=True)
    return "\n".join(l for l in report_text.splitlines()
                     if not any(l.split(":")[0].endswith(k) for k in TIMING_KEYS))


def test_criterion_10_determinism(criterion, tmp_path):
    with criterion(10, "every CLI command twice gives byte-identical reports"):
        sys_file = tmp_path / "sys.json"
        sys_file.write_text(json.dumps({"congruences": [{"a": 0, "n": 3}, {"a": 1, "n": 6}, {"a": 2, "n": 15}]}))
        inst_file = tmp_path / "inst.json"
        assert cli(["generate-hard", "--primes", "101", "103", "107", "109", "-o", str(inst_file)])[0] == 0
        commands = [
            ["density", str(sys_file)],
            ["optimize", "3", "6", "15"],
            ["worst", "3", "6", "15"],
            ["family", "--q", "3", "--standalone", "--primes", "2", "5", "7", "--cross-check"],
            ["partition", "--primes", "2", "3", "5", "7", "11", "--parts", "3", "--bruteforce"],
            ["log-form", "--primes", "2", "3", "5"],
            ["generate-hard", "--primes", "211", "223", "227", "229", "233", "239"],
            ["verify", str(inst_file)],
            ["solve", str(inst_file)],
            ["bench", "--sizes", "6", "8", "--control"],
        ]
        for argv in commands:
            for as_json in (False, True):
                full = argv + (["--json"] if as_json else [])
                (c1, o1, _), (c2, o2, _) = cli(full), cli(full)
                assert c1 == c2 == 0, full
                if argv[0] == "bench":
                    assert _strip(o1, as_json) == _strip(o2, as_json), full
                else:
                    assert o1 == o2, full
                if as_json:
                    assert json.loads(o1)["command"] == argv[0]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
