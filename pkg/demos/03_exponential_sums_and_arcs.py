#!/usr/bin/env python3
"""Exponential sums over primes, the Farey dissection, and kernel integrals.

Shows S(alpha) spiking at rationals with small denominator, the major-arc
dissection capturing those spikes, grid identities that turn integrals
into exact finite sums, and the sawtooth-kernel integral J(n, k)
collapsing onto Fourier coefficients.
"""

import numpy as np

from goldbach3 import (
    J_integral,
    Progression,
    WeightSpec,
    build_partition,
    classify,
    eval_S,
    kernel_coefficients,
    major_measure,
    minor_statistics,
    sieve_primes,
)


def main():
    N = 20_000
    table = sieve_primes(N)
    prog = Progression(1, 0)

    print("=== |S(alpha)| is large only near rationals a/q with small q ===")
    for alpha, label in ((0.0, "0"), (0.5, "1/2"), (1 / 3, "1/3"),
                         (0.2501, "near 1/4"), (0.6180339887, "golden ratio")):
        print(f"  |S({label:>12})| = {abs(eval_S(alpha, N, prog, table)):>12.1f}")

    print("\n=== the Farey dissection separates those neighborhoods ===")
    part = build_partition(N, 8, N / 8)
    print(f"  Q=8, tau=N/8: {len(part.arcs)} arcs, major measure "
          f"{major_measure(part):.6f} of the circle")
    for alpha, label in ((0.5, "1/2"), (0.6180339887, "golden ratio")):
        arc = classify(alpha, part)
        where = f"major arc around {arc.a}/{arc.q}" if arc else "minor set"
        print(f"  {label} lies in the {where}")

    print("\n=== grid statistics of the weighted sum K over the minor set ===")
    w = WeightSpec.from_preset("alternating", 25, 1)
    stats = minor_statistics(N, w, part, 2 * N + 1, table)
    print(f"  sup over minor grid points of |K| : {stats.sup_minor:.1f}")
    print(f"  (1/T) sum |K|^2, full circle      : {stats.l2_full:.1f}")
    print(f"  same, minor points only           : {stats.l2_minor:.1f}")
    print("  the full-circle L2 is checked internally against the exact")
    print("  coefficient-side sum of log(p)^2 weights (Parseval on the grid)")

    print("\n=== the kernel min(H, 1/||gamma||) and the integral J(n, k) ===")
    H = 40.0
    kc = kernel_coefficients(H, h_max=12)
    print(f"  c(0) = {kc.coeff(0):.9f} (closed form 2 + 2 log(H/2) = "
          f"{2 + 2 * np.log(H / 2):.9f})")
    for n, k in ((6, 3), (7, 3), (0, 1), (-8, 4)):
        j = J_integral(n, k, H)
        pred = kc.coeff(-n // k) if n % k == 0 else 0.0
        print(f"  J({n:>2}, {k}) = {j:>12.9f}   prediction {pred:>12.9f}")
    print("  k | n picks out c(-n/k); everything else integrates to zero")


if __name__ == "__main__":
    main()
