"""Acceptance suite: one test per exit criterion, each printing a verdict line.

Every tolerance is pinned here, not calibrated elsewhere.  Oracles are the
independent routes: direct enumeration for counts, exact local densities
for the singular series, closed forms for kernel integrals, and analytic
formulas for arc measures.
"""

import math
import random
import statistics
import time

import numpy as np

from goldbach3 import (
    Progression,
    SweepConfig,
    WeightSpec,
    analytic_major_measure,
    build_partition,
    classical_ternary_qsum,
    classical_ternary_series,
    classify_grid,
    coefficient_extract,
    coefficient_extract_count,
    count_convolution,
    count_direct,
    delta,
    eval_K_grid,
    eval_S_grid,
    kernel_coefficients,
    J_integral,
    local_density_factor,
    padic_valuation,
    singular_series_product,
    singular_series_qsum,
    sweep_E,
    sweep_Estar,
    triple,
    weight_coefficients,
)
from goldbach3.reports import serialize_sweep_report
from conftest import random_instance

from test_sweeps import brute_force_E, brute_force_Estar


def verdict(tag: str, ok: bool, detail: str) -> None:
    print(f"[acceptance {tag}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"{tag}: {detail}"


def test_01_counting_oracle_equivalence(table_small):
    t0 = time.perf_counter()
    rng = random.Random(10)
    worst = 0.0
    counts_exact = True
    for _ in range(30):
        inst = random_instance(rng, 50, 2000, 12)
        d = count_direct(inst, table_small)
        c = count_convolution(inst, table_small)
        g = coefficient_extract(inst.N, inst, table_small)
        gc = coefficient_extract_count(inst.N, inst, table_small)
        scale = max(abs(d.value), 1.0)
        worst = max(worst, abs(c.value - d.value) / scale, abs(g - d.value) / scale)
        counts_exact &= (c.solutions == d.solutions) and (gc == d.solutions)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and counts_exact and elapsed < 30.0
    verdict(
        "1",
        ok,
        f"three counting routes, 30 instances: max rel err {worst:.2e}, "
        f"counts exact={counts_exact}, {elapsed:.1f}s",
    )


def test_02_singular_series_cross_check():
    t0 = time.perf_counter()
    rng = random.Random(20)
    worst_pair = 0.0
    for _ in range(30):
        inst = random_instance(rng, 1001, 10**5, 20, odd=True)
        qs = singular_series_qsum(inst, 2000)
        pr = singular_series_product(inst, 2000)
        worst_pair = max(worst_pair, abs(qs.value - pr.value) / max(pr.value, 1.0))
    # unit moduli: each route against the classical object at the same
    # truncation (series partial sum for the q-route, Euler product for the
    # density route); cross-form comparisons mix truncation tails
    worst_classical = 0.0
    for _ in range(10):
        N = rng.randrange(1001, 10**5) | 1
        inst = triple(N, 1, 0, 1, 0, 1, 0)
        worst_classical = max(
            worst_classical,
            abs(singular_series_qsum(inst, 2000).value - classical_ternary_qsum(N, 2000)),
            abs(singular_series_product(inst, 2000).value - classical_ternary_series(N, 2000)),
        )
    elapsed = time.perf_counter() - t0
    ok = worst_pair <= 1e-3 and worst_classical <= 1e-6 and elapsed < 60.0
    verdict(
        "2",
        ok,
        f"qsum vs product {worst_pair:.2e} (tol 1e-3), vs classical at equal "
        f"truncation {worst_classical:.2e} (tol 1e-6), {elapsed:.1f}s",
    )


def test_03_local_density_stabilization():
    rng = random.Random(30)
    primes = [p for p in range(2, 51) if all(p % d for d in range(2, p))]
    checked = 0
    for _ in range(20):
        inst = random_instance(rng, 100, 10**5, 20)
        for p in primes:
            t = max(padic_valuation(prog.k, p) for prog in inst.progs) + 1
            assert local_density_factor(inst, p, t) == local_density_factor(inst, p, t + 1)
            checked += 1
    verdict("3", True, f"sigma_p(t) = sigma_p(t+1) exactly for {checked} (instance, p) pairs")


def test_04_asymptotic_trend(table_big):
    t0 = time.perf_counter()
    results = {}
    for ks, ls in (((1, 1, 1), (0, 0, 0)), ((3, 4, 5), (1, 1, 1))):
        medians = []
        for scale in (10**4, 10**5, 10**6):
            start = scale + 1 if scale % 2 == 0 else scale
            targets = [start + 2 * j for j in range(5)]
            ratios = [
                delta(
                    triple(N, ks[0], ls[0], ks[1], ls[1], ks[2], ls[2]), table_big
                ).relative
                for N in targets
            ]
            medians.append(statistics.median(ratios))
        results[ks] = medians
    elapsed = time.perf_counter() - t0
    ok = elapsed < 300.0
    for ks, med in results.items():
        ok &= med[0] > med[1] > med[2] and med[2] < 0.15
    verdict(
        "4",
        ok,
        "median |delta|/M decreasing and < 0.15 at 1e6: "
        + "; ".join(f"k={ks}: {[f'{m:.4f}' for m in m3]}" for ks, m3 in results.items())
        + f", {elapsed:.0f}s",
    )


def test_05_grid_parseval_identities(table_10k):
    worst = 0.0
    for N in (2000, 10**4):
        T = 2 * N + 1
        for k, l in ((1, 0), (7, 3), (12, 5)):
            prog = Progression(k, l)
            grid = eval_S_grid(N, prog, table_10k, T)
            p = table_10k.primes_in_progression(N, prog)
            coeff = float(np.sum(np.log(p.astype(float)) ** 2))
            worst = max(worst, abs(float(np.sum(np.abs(grid) ** 2)) / T - coeff) / coeff)
        for preset, kmax, l3 in (("alternating", 30, 1), ("unit", 12, 5)):
            w = WeightSpec.from_preset(preset, kmax, l3)
            grid = eval_K_grid(N, w, table_10k, T)
            _, c = weight_coefficients(N, w, table_10k)
            coeff = float(np.dot(c, c))
            worst = max(worst, abs(float(np.sum(np.abs(grid) ** 2)) / T - coeff) / coeff)
    verdict("5", worst <= 1e-8, f"grid L2 vs coefficient sums: max rel err {worst:.2e}")


def test_06_kernel_and_J_identities():
    H = 50.0
    kc = kernel_coefficients(H)  # default h_max = 10 H
    c0_err = abs(kc.coeff(0) - (2.0 + 2.0 * math.log(H / 2.0)))
    worst_J = 0.0
    for n in range(-40, 41):
        for k in range(1, 9):
            predicted = kc.coeff(-n // k) if n % k == 0 else 0.0
            worst_J = max(worst_J, abs(J_integral(n, k, H) - predicted))
    ok = c0_err <= 1e-9 and worst_J <= 1e-6 and kc.envelope_ok
    verdict(
        "6",
        ok,
        f"J vs kernel prediction {worst_J:.2e} (tol 1e-6), c(0) err {c0_err:.2e} "
        f"(tol 1e-9), envelope over h <= {kc.h_max}: {kc.envelope_ok}",
    )


def test_07_arc_dissection():
    rng = random.Random(70)
    worst = 0.0
    for _ in range(20):
        Q = rng.randrange(1, 80)
        tau = 2 * Q * Q * rng.uniform(1.001, 8.0)
        part = build_partition(2000, Q, tau)
        worst = max(worst, abs(major_measure_local(part) - analytic_major_measure(Q, tau)))
        spans = [(a.center - a.radius, a.center + a.radius) for a in part.arcs]
        assert all(hi1 < lo2 for (_, hi1), (lo2, _) in zip(spans, spans[1:]))
        labels = classify_grid(part, 4001)
        assert int((labels >= 0).sum() + (labels < 0).sum()) == 4001
    verdict("7", worst <= 1e-12, f"measure vs analytic formula: max err {worst:.2e}")


def major_measure_local(part):
    from goldbach3 import major_measure

    return major_measure(part)


def test_08_sweep_against_brute_force(table_10k):
    N, caps, p_max = 5001, (4, 4, 4), 300
    cfg = SweepConfig(N=N, H1=4, H2=4, H3=4, p_max=p_max)
    rep = sweep_E(cfg, table_10k)
    bf = brute_force_E(N, caps, p_max, table_10k)
    e_err = abs(rep.aggregate - bf) / bf

    lam = WeightSpec.from_preset("alternating", 4, 1)
    cfg_star = SweepConfig(N=N, H1=4, H2=4, H3=4, mode="Estar", lam=lam, p_max=p_max)
    rep_star = sweep_Estar(cfg_star, table_10k)
    bf_star = brute_force_Estar(N, caps, lam, p_max, table_10k)
    star_err = abs(rep_star.aggregate - bf_star) / max(bf_star, 1.0)

    e_by_pair = {}
    for row in rep.rows:
        e_by_pair[(row.k1, row.k2)] = e_by_pair.get((row.k1, row.k2), 0.0) + abs(row.delta)
    dominated = all(
        abs(row.delta_sum) <= e_by_pair[(row.k1, row.k2)] + 1e-9 for row in rep_star.rows
    )

    rerun = serialize_sweep_report(sweep_E(cfg, table_10k), "csv")
    threaded = serialize_sweep_report(sweep_E(cfg, table_10k, threads=2), "csv")
    identical = rerun == serialize_sweep_report(rep, "csv") == threaded

    ok = e_err <= 1e-6 and star_err <= 1e-6 and dominated and identical
    verdict(
        "8",
        ok,
        f"E err {e_err:.2e}, E* err {star_err:.2e} (tol 1e-6), "
        f"E* <= E termwise: {dominated}, byte-identical reruns: {identical}",
    )


def test_09_performance_floor(table_big):
    t0 = time.perf_counter()
    wc = count_convolution(triple(10**6 + 3, 1, 0, 1, 0, 1, 0), table_big)
    t_count = time.perf_counter() - t0
    assert wc.solutions > 0

    cfg = SweepConfig(N=10**5 + 3, H1=5, H2=5, H3=5)  # 10^3 (k,l)-cells
    t0 = time.perf_counter()
    rep = sweep_E(cfg, table_big, threads=2)
    t_sweep = time.perf_counter() - t0
    assert rep.metadata["estimated_cells"] == 1000

    ok = t_count <= 10.0 and t_sweep <= 300.0
    verdict(
        "9",
        ok,
        f"R at N=1e6 in {t_count:.2f}s (cap 10s); 1000-cell sweep at N=1e5 "
        f"in {t_sweep:.2f}s (cap 300s)",
    )
