"""Command-line interface.

Exit codes: 0 success, 1 validation or structure error, 2 a resource cap
(sieve, enumeration, search, precision, node budget) was hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .core import (
    CongruenceSystem,
    PrimeFamily,
    format_rational,
    is_prime,
    validate_q_family,
)
from .density import realize_partition, sieve_uncovered_density
from .errors import ResourceError, ValidationError
from .hardlab import (
    generate_hard_instance,
    load_values,
    verify_chvatal_conditions,
)
from .interval import PrecisionPolicy
from .knapsack import solve_branch_and_bound
from .partition import min_sum_partition, partition_bruteforce, to_knapsack_log_form
from .residues import optimize_residues_exhaustive, optimize_structured_family, worst_case_density

REPORT_VERSION = 1

CAP_ENV = {
    "sieve_cap": "ERDOS278_SIEVE_CAP",
    "enum_cap": "ERDOS278_ENUM_CAP",
    "search_cap": "ERDOS278_SEARCH_CAP",
    "precision_cap": "ERDOS278_PRECISION_CAP",
    "node_budget": "ERDOS278_NODE_BUDGET",
}


def _caps(args) -> dict:
    caps = {}
    for name, env in CAP_ENV.items():
        value = getattr(args, name, None)
        if value is None and os.environ.get(env):
            try:
                value = int(os.environ[env])
            except ValueError:
                raise ValidationError(f"{env} must be an integer") from None
        caps[name] = value
    return caps


def _digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return data


def _policy(caps) -> PrecisionPolicy:
    if caps["precision_cap"] is None:
        return PrecisionPolicy()
    return PrecisionPolicy(max_bits=caps["precision_cap"])


# ---------------------------------------------------------------------------
# subcommands; each returns (input echo, results)
# ---------------------------------------------------------------------------

def cmd_density(args, caps):
    data = _read_json(args.system)
    system = CongruenceSystem.from_json(data)
    res = sieve_uncovered_density(system, caps["sieve_cap"])
    return system.to_json(), res.to_json()


def cmd_optimize(args, caps):
    res = optimize_residues_exhaustive(args.moduli, caps["enum_cap"], caps["sieve_cap"])
    return {"moduli": args.moduli}, res.to_json()


def cmd_worst(args, caps):
    res = worst_case_density(args.moduli, caps["sieve_cap"])
    return {"moduli": args.moduli}, res.to_json()


def cmd_family(args, caps):
    if args.file:
        family = PrimeFamily.from_json(_read_json(args.file))
    elif args.moduli:
        if args.q is None:
            raise ValidationError("--moduli needs --q")
        family = validate_q_family(args.moduli, args.q)
    else:
        if args.q is None or args.primes is None:
            raise ValidationError("family needs --q and --primes (or --moduli / --file)")
        family = PrimeFamily(args.q, args.standalone, tuple(args.primes))
    partition, density = optimize_structured_family(family, caps["search_cap"])
    system = realize_partition(family, partition)
    results = {
        "family": family.to_json(),
        "moduli": list(family.moduli),
        "parts": family.parts,
        "partition": partition.to_json(),
        "density": format_rational(density),
        "system": system.to_json(),
    }
    if args.cross_check:
        sieve = sieve_uncovered_density(system, caps["sieve_cap"])
        exhaustive = optimize_residues_exhaustive(list(family.moduli), caps["enum_cap"],
                                                  caps["sieve_cap"])
        results["cross_check"] = {
            "sieve_density": format_rational(sieve.density),
            "exhaustive_density": format_rational(exhaustive.density),
            "agree": sieve.density == density == exhaustive.density,
        }
    return family.to_json(), results


def cmd_partition(args, caps):
    best = min_sum_partition(args.primes, args.parts, caps["search_cap"])
    results = best.to_json()
    if args.bruteforce:
        brute = partition_bruteforce(args.primes, args.parts)
        results["bruteforce_value"] = format_rational(brute.value)
        results["bruteforce_agrees"] = brute.partition == best.partition and brute.value == best.value
    return {"primes": args.primes, "parts": args.parts}, results


def cmd_log_form(args, caps):
    inst = to_knapsack_log_form(args.primes, args.bits)
    results = inst.to_json()
    results["exact_choice"] = list(inst.solve_exact())
    return {"primes": args.primes, "bits": args.bits}, results


def cmd_generate_hard(args, caps):
    inst = generate_hard_instance(args.primes, x=args.x, policy=_policy(caps),
                                  eps_cap=args.eps_cap)
    record = inst.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(record, fh, indent=2, sort_keys=True)
            fh.write("\n")
    results = dict(record)
    results["ratio_below_three"] = inst.ratio_below_three()
    results["weights_times_x_at_least_4n"] = inst.weights_times_x_at_least(4 * inst.n)
    if inst.x_supplied:
        results["warning"] = "x supplied by user; x > 4n/eps not certified"
    return {"primes": args.primes, "x": None if args.x is None else str(args.x)}, results


def cmd_verify(args, caps):
    data = _read_json(args.instance)
    a = load_values(data)
    report = verify_chvatal_conditions(a)
    return {"a": [str(v) for v in a]}, {"n": len(a), **report.to_json(), "all_ok": report.all_ok}


def cmd_solve(args, caps):
    data = _read_json(args.instance)
    a = load_values(data)
    if args.capacity == "half":
        capacity = sum(a) // 2
    else:
        try:
            capacity = int(args.capacity)
        except ValueError:
            raise ValidationError(f"--capacity must be 'half' or an integer, got {args.capacity!r}") from None
    res = solve_branch_and_bound(a, capacity, caps["node_budget"])
    return ({"a": [str(v) for v in a], "capacity": str(capacity)},
            {"n": len(a), "capacity": str(capacity), **res.to_json()})


def _primes_from(start: int, count: int) -> list[int]:
    out = []
    p = max(2, start)
    while len(out) < count:
        if is_prime(p):
            out.append(p)
        p += 1
    return out


def cmd_bench(args, caps):
    records = []
    for n in args.sizes:
        primes = _primes_from(args.start_prime, n)
        inst = generate_hard_instance(primes, policy=_policy(caps), eps_cap=args.eps_cap,
                                      verify=False)
        runs = [("hard", list(inst.a))]
        if args.control:
            runs.append(("control", list(range(1, n + 1))))
        for kind, a in runs:
            t0 = time.perf_counter()
            res = solve_branch_and_bound(a, sum(a) // 2, caps["node_budget"])
            records.append({
                "kind": kind,
                "n": n,
                "nodes_expanded": res.nodes_expanded,
                "wall_seconds": round(time.perf_counter() - t0, 6),
                "instance_digest": _digest([str(v) for v in a]),
            })
    return {"sizes": args.sizes, "start_prime": args.start_prime}, {"runs": records}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

TIMING_KEYS = {"wall_seconds"}


def build_report(command: str, argv: list[str], echo, results, caps) -> dict:
    return {
        "format_version": REPORT_VERSION,
        "command": command,
        "argv": argv,
        "input_digest": _digest(echo),
        "results": results,
        "caps": {k: v for k, v in caps.items() if v is not None},
    }


def _text_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _text_lines(v, f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list) and obj and all(isinstance(v, dict) for v in obj):
        for i, v in enumerate(obj):
            yield from _text_lines(v, f"{prefix}[{i}]")
    else:
        yield f"{prefix}: {obj if isinstance(obj, str) else json.dumps(obj)}"


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, indent=2, sort_keys=True)
    return "\n".join(_text_lines(report))


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--sieve-cap", type=_positive, help="max period of the residue sieve")
    common.add_argument("--enum-cap", type=_positive, help="max number of residue tuples")
    common.add_argument("--search-cap", type=_positive, help="max primes for the partition search")
    common.add_argument("--precision-cap", type=_positive, help="max fractional bits for certified floors")
    common.add_argument("--node-budget", type=_positive, help="max branch-and-bound nodes")

    parser = argparse.ArgumentParser(
        prog="erdos278",
        description="Uncovered densities of congruence systems, prime partitions and hard subset-sum instances.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", parents=[common], help="uncovered density of a congruence system file")
    p.add_argument("system")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("optimize", parents=[common], help="exhaustive minimum over residue choices")
    p.add_argument("moduli", nargs="+", type=_positive)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("worst", parents=[common], help="density with all residues equal")
    p.add_argument("moduli", nargs="+", type=_positive)
    p.set_defaults(func=cmd_worst)

    p = sub.add_parser("family", parents=[common], help="optimum for a pairwise-gcd-q prime family")
    p.add_argument("--q", type=_positive)
    p.add_argument("--standalone", action="store_true")
    p.add_argument("--primes", nargs="+", type=_positive)
    p.add_argument("--moduli", nargs="+", type=_positive, help="derive the family from moduli")
    p.add_argument("--file", help="family JSON file")
    p.add_argument("--cross-check", action="store_true",
                   help="confirm against the sieve and the exhaustive optimizer")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("partition", parents=[common], help="minimum partition value")
    p.add_argument("--primes", nargs="*", type=_positive, default=[])
    p.add_argument("--parts", type=_positive, required=True)
    p.add_argument("--bruteforce", action="store_true", help="also run the brute-force oracle")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("log-form", parents=[common], help="certified knapsack log weights")
    p.add_argument("--primes", nargs="+", type=_positive, required=True)
    p.add_argument("--bits", type=_positive, default=64)
    p.set_defaults(func=cmd_log_form)

    p = sub.add_parser("generate-hard", parents=[common], help="build a hard subset-sum instance")
    p.add_argument("--primes", nargs="+", type=_positive, required=True)
    p.add_argument("--x", type=_positive, help="use this x instead of the certified 4n/eps bound")
    p.add_argument("--eps-cap", type=_positive, default=18)
    p.add_argument("-o", "--output", help="also write the instance record to this file")
    p.set_defaults(func=cmd_generate_hard)

    p = sub.add_parser("verify", parents=[common], help="check conditions (a)-(d) on an instance file")
    p.add_argument("instance")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", parents=[common], help="branch and bound on an instance file")
    p.add_argument("instance")
    p.add_argument("--capacity", default="half")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", parents=[common], help="node counts on generated instances")
    p.add_argument("--sizes", nargs="+", type=_positive, required=True)
    p.add_argument("--start-prime", type=_positive, default=211)
    p.add_argument("--eps-cap", type=_positive, default=18)
    p.add_argument("--control", action="store_true", help="also run a_i = i controls")
    p.set_defaults(func=cmd_bench)
    return parser


def run_cli(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        caps = _caps(args)
        echo, results = args.func(args, caps)
    except ResourceError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=err)
        return 1
    report = build_report(args.command, argv, echo, results, caps)
    print(render(report, args.json), file=out)
    return 0


def main() -> None:
    sys.exit(run_cli())
