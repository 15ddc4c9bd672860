"""Built-in oracle checks behind the `selftest` CLI subcommand.

Each check pits an implementation path against an independent reference
at small scale and reports one pass/fail line.  The random draws are
seeded so a given seed reproduces exactly.
"""

from __future__ import annotations

import math
import random

import numpy as np

from .arcs import analytic_major_measure, build_partition, major_measure
from .arith import Progression, moebius, sieve_primes
from .expsum import J_integral, coefficient_extract, eval_S_grid, kernel_coefficients
from .repcount import count_convolution, count_direct, triple
from .reports import serialize_sweep_report
from .singular import gauss_sum_G, singular_series_product, singular_series_qsum
from .sweeps import SweepConfig, sweep_E

__all__ = ["run_selftest"]


def _random_instance(rng: random.Random, n_max: int, k_max: int):
    N = rng.randrange(20, n_max)
    progs = []
    for _ in range(3):
        k = rng.randrange(1, k_max + 1)
        l = rng.choice([l for l in range(k) if math.gcd(k, l) == 1])
        progs.append((k, l))
    (k1, l1), (k2, l2), (k3, l3) = progs
    return triple(N, k1, l1, k2, l2, k3, l3)


def run_selftest(seed: int = 0) -> list[tuple[str, bool, str]]:
    rng = random.Random(seed)
    table = sieve_primes(4000)
    results = []

    worst = 0.0
    ok = True
    for _ in range(5):
        inst = _random_instance(rng, 600, 8)
        d = count_direct(inst, table)
        c = count_convolution(inst, table)
        g = coefficient_extract(inst.N, inst, table)
        err = max(abs(c.value - d.value), abs(g - d.value)) / max(abs(d.value), 1.0)
        worst = max(worst, err)
        ok &= err < 1e-6 and c.solutions == d.solutions
    results.append(("count-paths-agree", ok, f"max rel err {worst:.2e}"))

    worst = 0.0
    for _ in range(2):
        inst = _random_instance(rng, 2000, 6)
        if inst.N % 2 == 0:
            inst = triple(inst.N + 1, *[x for p in inst.progs for x in (p.k, p.l)])
        qs = singular_series_qsum(inst, 300)
        pr = singular_series_product(inst, 300)
        worst = max(worst, abs(qs.value - pr.value) / max(pr.value, 1.0))
    results.append(("singular-cross-check", worst < 1e-3, f"max diff {worst:.2e}"))

    worst = 0.0
    for q in range(1, 41):
        a = rng.choice([a for a in range(1, q + 1) if math.gcd(a, q) == 1])
        worst = max(worst, abs(gauss_sum_G(a, q, Progression(1, 0)) - moebius(q)))
    results.append(("ramanujan-reduction", worst < 1e-10, f"max |G - mu| {worst:.2e}"))

    worst = 0.0
    for _ in range(5):
        Q = rng.randrange(1, 9)
        tau = 2 * Q * Q + rng.uniform(1.0, 50.0)
        part = build_partition(1000, Q, tau)
        worst = max(worst, abs(major_measure(part) - analytic_major_measure(Q, tau)))
    results.append(("arc-measure", worst < 1e-12, f"max |diff| {worst:.2e}"))

    N = 1500
    prog = Progression(3, 2)
    grid = eval_S_grid(N, prog, table, 2 * N + 1)
    l2 = float(np.sum(np.abs(grid) ** 2)) / (2 * N + 1)
    p = table.primes_in_progression(N, prog)
    coeff = float(np.sum(np.log(p.astype(np.float64)) ** 2))
    err = abs(l2 - coeff) / coeff
    results.append(("grid-parseval", err < 1e-9, f"rel err {err:.2e}"))

    kc = kernel_coefficients(25.0, h_max=12)
    c0_err = abs(kc.coeff(0) - (2.0 + 2.0 * math.log(12.5)))
    j_hit = abs(J_integral(-6, 3, 25.0) - kc.coeff(2))
    j_miss = abs(J_integral(7, 3, 25.0))
    ok = c0_err < 1e-9 and j_hit < 1e-6 and j_miss < 1e-6
    results.append(
        ("kernel-identities", ok, f"c0 {c0_err:.1e}, J hit {j_hit:.1e}, J miss {j_miss:.1e}")
    )

    cfg = SweepConfig(N=501, H1=2, H2=2, H3=2)
    r1 = serialize_sweep_report(sweep_E(cfg, table), "json")
    r2 = serialize_sweep_report(sweep_E(cfg, table), "json")
    results.append(("sweep-determinism", r1 == r2, f"{len(r1)} bytes"))

    return results
