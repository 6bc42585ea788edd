#!/usr/bin/env python3
"""Batch exploration of the rank-degree conjecture, and a surprise.

The conjecture under test: the self-commutator of the first compressed
shift has rank n exactly when deg1 Theta <= 1 and deg2 det Theta = n.
Diagonal and conjugated families confirm it.  Generic products of
one-variable factors do not: misaligning the factor frames splits the
commutator spectrum into {c^2, s^2} for a rotation parameter c, giving a
stable rank of 2 against a predicted 1.  The harness flags these as
VIOLATION_CANDIDATE records rather than smoothing them over.
"""

import tempfile
from pathlib import Path

import numpy as np

from bidisklab import (
    BiPoly,
    MatPoly,
    RationalInnerMatrix,
    conjecture_report,
    generate_family,
    rank_sweep,
    run_batch,
    verify_inner_exact,
)

SCHEDULE = [(4, 4), (6, 6), (8, 8)]

print("== families where the prediction holds ==")
for kind in ("diagonal", "conjugated"):
    family = generate_family(kind, 10, d=2, seed=42)
    with tempfile.TemporaryDirectory() as td:
        summary = run_batch(family, SCHEDULE, out_dir=td)
    print(f"  {kind:11s}: {summary.verdict_counts}")

print("\n== generic products ==")
family = generate_family("product", 10, d=2, seed=42)
with tempfile.TemporaryDirectory() as td:
    summary = run_batch(family, SCHEDULE, out_dir=td)
print(f"  product    : {summary.verdict_counts}")

print("\n== the mechanism, in its cleanest form ==")
c, s = 0.6, 0.8
z1 = BiPoly.monomial(1, 0)
z2 = BiPoly.monomial(0, 1)
Q = MatPoly([[c * (z1 * z2), -s * z1], [s * z2, c * BiPoly.one()]])
theta = RationalInnerMatrix(2, Q, BiPoly.one(), "rotated_product")
assert verify_inner_exact(theta).passed
rec = conjecture_report(theta, SCHEDULE)
sig = rec.report.levels[-1].sigmas[:3]
print(f"  Theta = diag(z1,1) . rotation(c={c}) . diag(z2,1)")
print(f"  deg = {rec.deg}, deg2 det = {rec.det_deg[1]} -> predicted rank "
      f"{rec.predicted_rank}")
print(f"  measured singular values {np.round(sig, 4)} -> stable rank "
      f"{rec.report.stabilized_rank}  [{rec.verdict}]")
print(f"  the values are exactly (s^2, c^2) = ({s*s:.4f}, {c*c:.4f})")

print("\n  aligning the factors (c = 1 or c = 0) collapses the rank to 1:")
for cc in (1.0, 0.0):
    ss = float(np.sqrt(1 - cc * cc))
    Q = MatPoly([[cc * (z1 * z2), (-ss) * z1], [ss * z2, cc * BiPoly.one()]])
    th = RationalInnerMatrix(2, Q, BiPoly.one(), f"aligned(c={cc})")
    rep = rank_sweep(th, SCHEDULE)
    print(f"    c={cc}: stable rank {rep.stabilized_rank}")
