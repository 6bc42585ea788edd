#!/usr/bin/env python3
"""Commutator ranks across truncation schedules, versus degree data.

For scalar rational inner functions the self-commutator rank of the
first compressed shift equals the z2-degree whenever the z1-degree is at
most one, and is infinite otherwise.  The sweep estimates the rank at a
schedule of windows and grades the trend: STABLE when the last three
levels agree, DIVERGENT when every step grows.
"""

from bidisklab import BiPoly, builtin, from_scalar, rank_sweep, scalar_z2n

SCHEDULE = [(6, 6), (8, 8), (10, 10)]

cases = [
    builtin("scalar_z1z2"),
    from_scalar(BiPoly.monomial(0, 2), BiPoly.one(), "z2^2"),
    from_scalar(BiPoly.monomial(1, 2), BiPoly.one(), "z1z2^2"),
    scalar_z2n(3),
    builtin("scalar_stable4"),
    builtin("hadamard_z1z2"),
    builtin("diag_z1z2_1"),
]

print(f"{'label':16s} {'deg':8s} {'det_deg':8s} {'ranks':14s} verdict")
for theta in cases:
    rep = rank_sweep(theta, SCHEDULE)
    ranks = ",".join(str(lv.rank) for lv in rep.levels)
    print(f"{theta.label:16s} {str(rep.deg):8s} {str(rep.det_deg):8s} "
          f"{ranks:14s} {rep.verdict.value} -> {rep.stabilized_rank}")

print()
print("degree (2,1) forces divergence:")
rep = rank_sweep(builtin("hadamard_deg21"), [(4, 4), (6, 6), (8, 8)])
print(f"  ranks {[lv.rank for lv in rep.levels]}: {rep.verdict.value}")

print()
print("boundary-singular denominator: the sweep still lands on rank 1 but")
print("carries a warning, because the truncation tails decay only slowly:")
rep = rank_sweep(builtin("scalar_favorite"), [(8, 8), (11, 11), (14, 14)])
print(f"  ranks {[lv.rank for lv in rep.levels]}: {rep.verdict.value} "
      f"-> {rep.stabilized_rank}, warnings {list(rep.warnings)}")
