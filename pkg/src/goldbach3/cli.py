"""Command-line surface wrapping the library operations.

Subcommands: sieve, count, singular, delta, sweep, arcs, expsum, selftest.
Exit codes are a stable contract: 0 success, 2 validation, 3 table bounds,
4 sweep budget, 5 arc overlap.  With --format=json every subcommand prints
one JSON object {command, inputs, outputs, timing, versions}; --out writes
a deterministic payload file (rows for row-shaped commands), which never
contains timing so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np
import scipy

from . import __version__
from .arcs import (
    analytic_major_measure,
    build_partition,
    major_measure,
    minor_statistics,
)
from .arith import chebyshev_theta, sieve_primes, Progression
from .exceptions import ArcOverlapError, BudgetExceededError, TableTooSmallError
from .expsum import (
    J_integral,
    WeightSpec,
    coefficient_extract,
    coefficient_extract_count,
    eval_K,
    eval_S,
    kernel_coefficients,
)
from .repcount import count_convolution, count_direct, pair_correlation, triple
from .reports import rows_to_csv_bytes, serialize_sweep_report
from .selftest import run_selftest
from .singular import main_term, singular_series_product, singular_series_qsum
from .sweeps import SweepConfig, sweep_E, sweep_Estar

ENV_LIMIT = "GOLDBACH_TABLE_LIMIT"

PRESET_NAMES = ("zero", "unit", "alternating")


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=int, default=None,
                        help=f"sieve table limit (default: ${ENV_LIMIT} or the target N)")
    common.add_argument("--format", choices=("plain", "csv", "json"), default="plain",
                        help="stdout format (default plain)")
    common.add_argument("--out", default=None, help="write the payload to this file")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads for sweeps (--threads=1 is the serial path)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="goldbach3",
        description="Circle-method computations for three-prime sums in progressions",
    )
    parser.add_argument("--version", action="version", version=f"goldbach3 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", parents=[common], help="build a prime table and summarize it")

    p = sub.add_parser("count", parents=[common], help="weighted three-prime representation count")
    p.add_argument("N", type=int)
    p.add_argument("progression", type=int, nargs=6, metavar=("K_L"),
                   help="k1 l1 k2 l2 k3 l3")
    p.add_argument("--method", choices=("direct", "fft", "grid"), default="fft")

    p = sub.add_parser("singular", parents=[common], help="singular series by both routes")
    p.add_argument("N", type=int)
    p.add_argument("progression", type=int, nargs=6, metavar=("K_L"))
    p.add_argument("--qmax", type=int, default=2000)
    p.add_argument("--pmax", type=int, default=2000)

    p = sub.add_parser("delta", parents=[common], help="error term R - M for one or more targets")
    p.add_argument("N", help="target, or comma-separated targets for a series")
    p.add_argument("progression", type=int, nargs=6, metavar=("K_L"))
    p.add_argument("--qmax", type=int, default=2000)
    p.add_argument("--pmax", type=int, default=2000)

    p = sub.add_parser("sweep", parents=[common], help="averaged error sums E / E*")
    p.add_argument("--mode", choices=("E", "Estar"), default="E")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--H1", type=int, required=True)
    p.add_argument("--H2", type=int, required=True)
    p.add_argument("--H3", type=int, required=True)
    p.add_argument("--lambda", dest="lam", default=None,
                   help="weights for Estar: preset name (zero, unit, alternating, "
                        "single:K) or a file of `k value` lines")
    p.add_argument("--l3", type=int, default=1, help="fixed third residue for Estar")
    p.add_argument("--qmax", type=int, default=2000)
    p.add_argument("--pmax", type=int, default=2000)
    p.add_argument("--budget", type=int, default=10**6,
                   help="refuse sweeps beyond this many (k,l)-cells")

    p = sub.add_parser("arcs", parents=[common], help="Farey dissection and minor-arc statistics")
    p.add_argument("N", type=int)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--tau", type=float, default=None, help="default N/Q")
    p.add_argument("--stats", action="store_true", help="also compute K statistics on the grid")
    p.add_argument("--lambda", dest="lam", default="unit")
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--l3", type=int, default=1)
    p.add_argument("--T", type=int, default=None, help="grid size (default 2N+1)")

    p = sub.add_parser("expsum", parents=[common], help="exponential sums and kernel integrals")
    p.add_argument("N", type=int, nargs="?", default=None)
    p.add_argument("--mode", choices=("S", "K", "kernel", "J", "pairs"), default="S")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--lambda", dest="lam", default="unit")
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--l3", type=int, default=1)
    p.add_argument("--H", type=float, default=50.0, help="kernel height for kernel/J modes")
    p.add_argument("--hmax", type=int, default=None)
    p.add_argument("--n", type=int, default=0, help="frequency for J mode")
    p.add_argument("--n-lo", type=int, default=0)
    p.add_argument("--n-hi", type=int, default=10)

    p = sub.add_parser("selftest", parents=[common], help="run the built-in oracle checks")

    return parser


def _table_limit(args, needed: int | None):
    if args.limit is not None:
        return args.limit
    env = os.environ.get(ENV_LIMIT)
    if env is not None:
        return int(env)
    if needed is None:
        raise ValueError(f"--limit (or ${ENV_LIMIT}) is required for this command")
    return needed


def _weights(spec: str, k_max: int, l3: int) -> WeightSpec:
    if spec in PRESET_NAMES or spec.startswith("single:"):
        return WeightSpec.from_preset(spec, k_max, l3)
    return WeightSpec.from_file(spec, l3)


def _cmd_sieve(args):
    limit = _table_limit(args, None)
    table = sieve_primes(limit)
    outputs = {
        "limit": limit,
        "prime_count": int(table.primes.size),
        "theta": chebyshev_theta(limit, Progression(1, 0), table),
        "largest_prime": int(table.primes[-1]),
    }
    return {"limit": limit}, outputs


def _cmd_count(args):
    N = args.N
    inst = triple(N, *args.progression)
    table = sieve_primes(max(_table_limit(args, N), 2))
    if args.method == "direct":
        wc = count_direct(inst, table)
        value, solutions = wc.value, wc.solutions
    elif args.method == "fft":
        wc = count_convolution(inst, table)
        value, solutions = wc.value, wc.solutions
    else:
        value = coefficient_extract(N, inst, table)
        solutions = coefficient_extract_count(N, inst, table)
    outputs = {
        "value": value,
        "solutions": solutions,
        "method": args.method,
        "even_target": N % 2 == 0,
    }
    if solutions == 0:
        outputs["note"] = "no representations (congruence obstruction or tiny target)"
    return {"N": N, "progressions": args.progression, "method": args.method}, outputs


def _cmd_singular(args):
    N = args.N
    inst = triple(N, *args.progression)
    qs = singular_series_qsum(inst, args.qmax)
    pr = singular_series_product(inst, args.pmax)
    outputs = {
        "qsum": qs.value,
        "product": pr.value,
        "abs_difference": abs(qs.value - pr.value),
        "qsum_tail": qs.tail_estimate,
        "product_tail": pr.tail_estimate,
        "main_term": main_term(inst, pr),
    }
    inputs = {"N": N, "progressions": args.progression,
              "qmax": args.qmax, "pmax": args.pmax}
    return inputs, outputs


def _cmd_delta(args):
    from .sweeps import delta as delta_fn

    targets = [int(x) for x in str(args.N).split(",")]
    limit = _table_limit(args, max(targets))
    table = sieve_primes(limit)
    rows = []
    for N in targets:
        inst = triple(N, *args.progression)
        d = delta_fn(inst, table, q_max=args.qmax, p_max=args.pmax)
        rows.append({
            "N": N, "R": d.R, "M": d.M, "delta": d.delta,
            "abs_ratio": d.relative,
        })
    inputs = {"N": targets, "progressions": args.progression,
              "qmax": args.qmax, "pmax": args.pmax}
    if len(rows) == 1:
        return inputs, dict(rows[0])
    return inputs, {"rows": rows}


def _cmd_sweep(args):
    N = args.N
    table = sieve_primes(_table_limit(args, N))
    lam = None
    if args.mode == "Estar":
        if args.lam is None:
            raise ValueError("Estar mode requires --lambda")
        lam = _weights(args.lam, args.H3, args.l3)
    cfg = SweepConfig(
        N=N, H1=args.H1, H2=args.H2, H3=args.H3, mode=args.mode,
        lam=lam, l3=args.l3 if args.mode == "Estar" else None,
        q_max=args.qmax, p_max=args.pmax, budget=args.budget,
    )
    runner = sweep_E if args.mode == "E" else sweep_Estar
    report = runner(cfg, table, threads=max(1, args.threads))
    payload_fmt = "json" if args.format == "json" else "csv"
    out_path = args.out
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(serialize_sweep_report(report, payload_fmt))
    inputs = {"N": N, "mode": args.mode, "caps": [args.H1, args.H2, args.H3],
              "lambda": args.lam, "qmax": args.qmax, "pmax": args.pmax,
              "budget": args.budget, "threads": args.threads}
    outputs = {
        "aggregate": report.aggregate,
        "rows_written": len(report.rows),
        "cells": report.metadata["estimated_cells"],
        "out": out_path,
    }
    return inputs, outputs


def _cmd_arcs(args):
    N = args.N
    tau = args.tau if args.tau is not None else N / args.Q
    partition = build_partition(N, args.Q, tau)
    outputs = {
        "arc_count": len(partition.arcs),
        "measure": major_measure(partition),
        "measure_analytic": analytic_major_measure(args.Q, tau),
        "Q": args.Q,
        "tau": tau,
    }
    if args.stats:
        table = sieve_primes(_table_limit(args, N))
        w = _weights(args.lam, args.kmax, args.l3)
        stats = minor_statistics(N, w, partition, args.T or 2 * N + 1, table)
        outputs.update(
            sup_minor=stats.sup_minor, l2_full=stats.l2_full, l2_minor=stats.l2_minor
        )
    inputs = {"N": N, "Q": args.Q, "tau": tau, "stats": args.stats}
    return inputs, outputs


def _cmd_expsum(args):
    mode = args.mode
    if mode in ("S", "K", "pairs") and args.N is None:
        raise ValueError(f"expsum mode {mode} needs a target N")
    inputs = {"mode": mode}
    if mode == "S":
        table = sieve_primes(_table_limit(args, args.N))
        val = eval_S(args.alpha, args.N, Progression(args.k, args.l), table)
        inputs.update(N=args.N, alpha=args.alpha, k=args.k, l=args.l)
        outputs = {"real": val.real, "imag": val.imag, "abs": abs(val)}
    elif mode == "K":
        table = sieve_primes(_table_limit(args, args.N))
        w = _weights(args.lam, args.kmax, args.l3)
        val = eval_K(args.alpha, args.N, w, table)
        inputs.update(N=args.N, alpha=args.alpha, kmax=args.kmax, l3=args.l3)
        outputs = {"real": val.real, "imag": val.imag, "abs": abs(val)}
    elif mode == "kernel":
        kc = kernel_coefficients(args.H, args.hmax)
        inputs.update(H=args.H, hmax=kc.h_max)
        outputs = {
            "c0": kc.coeff(0),
            "envelope_ok": kc.envelope_ok,
            "rows": [{"h": h, "c": float(kc.values[h])} for h in range(kc.h_max + 1)],
        }
    elif mode == "J":
        val = J_integral(args.n, args.k, args.H)
        kc = kernel_coefficients(args.H, max(1, abs(args.n) // args.k + 1))
        predicted = kc.coeff(-args.n // args.k) if args.n % args.k == 0 else 0.0
        inputs.update(n=args.n, k=args.k, H=args.H)
        outputs = {"J": val, "predicted": predicted, "abs_error": abs(val - predicted)}
    else:  # pairs
        table = sieve_primes(_table_limit(args, args.N))
        w = pair_correlation(args.N, Progression(args.k, args.l), args.n_lo, args.n_hi, table)
        inputs.update(N=args.N, k=args.k, l=args.l, n_lo=args.n_lo, n_hi=args.n_hi)
        outputs = {"rows": [{"n": n, "w": w[n]} for n in sorted(w)]}
    return inputs, outputs


def _cmd_selftest(args):
    results = run_selftest(seed=args.seed)
    ok = all(passed for _, passed, _ in results)
    outputs = {
        "passed": ok,
        "rows": [{"check": name, "ok": passed, "detail": detail}
                 for name, passed, detail in results],
    }
    return {"seed": args.seed}, outputs


DISPATCH = {
    "sieve": _cmd_sieve,
    "count": _cmd_count,
    "singular": _cmd_singular,
    "delta": _cmd_delta,
    "sweep": _cmd_sweep,
    "arcs": _cmd_arcs,
    "expsum": _cmd_expsum,
    "selftest": _cmd_selftest,
}


def _versions() -> dict:
    return {
        "goldbach3": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": sys.version.split()[0],
    }


def _emit_plain(outputs: dict) -> None:
    rows = outputs.get("rows")
    for key, value in outputs.items():
        if key != "rows":
            print(f"{key}: {value}")
    if rows is not None:
        for row in rows:
            if isinstance(row, dict):
                print("  " + "  ".join(f"{k}={v}" for k, v in row.items()))
            else:
                print("  " + "  ".join(str(v) for v in row))


def _emit_csv(outputs: dict) -> bytes:
    rows = outputs.get("rows")
    if rows and isinstance(rows[0], dict):
        columns = list(rows[0].keys())
        data = [[row[c] for c in columns] for row in rows]
        return rows_to_csv_bytes(columns, data)
    scalars = {k: v for k, v in outputs.items() if k != "rows"}
    return rows_to_csv_bytes(list(scalars.keys()), [list(scalars.values())])


def _write_out(path: str, args, outputs: dict) -> None:
    # sweep writes its own deterministic report; everything else dumps
    # the outputs payload (rows when present) without timing or versions
    if args.command == "sweep":
        return
    if args.format == "json":
        payload = json.dumps(outputs, indent=2) + "\n"
        data = payload.encode("utf-8")
    else:
        data = _emit_csv(outputs)
    with open(path, "wb") as fh:
        fh.write(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        inputs, outputs = DISPATCH[args.command](args)
    except ArcOverlapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except TableTooSmallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - t0

    if args.format == "json":
        report = {
            "command": args.command,
            "inputs": inputs,
            "outputs": outputs,
            "timing": {"seconds": elapsed},
            "versions": _versions(),
        }
        print(json.dumps(report, indent=2))
    elif args.format == "csv":
        sys.stdout.write(_emit_csv(outputs).decode("utf-8"))
    else:
        _emit_plain(outputs)
        print(f"(elapsed {elapsed:.3f}s)")
    if args.out:
        _write_out(args.out, args, outputs)

    if args.command == "selftest" and not outputs["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
