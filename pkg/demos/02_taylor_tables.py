#!/usr/bin/env python3
"""Taylor expansion of rational inner functions and truncation quality.

The recursion behind `expand` is exact whenever the denominator does not
vanish at the origin, so the only question is how fast the coefficients
decay: polynomial functions terminate (FINITE), denominators with no
torus zeros give geometric tails, and boundary-singular denominators
decay so slowly that every truncation-based statement downstream needs a
warning label.
"""

import numpy as np

from bidisklab import builtin, coefficient_energy, expand, tail_diagnostic

for name in ("hadamard_z1z2", "scalar_stable4", "scalar_favorite"):
    theta = builtin(name)
    table = expand(theta, 40, 40)
    diag = tail_diagnostic(table)
    frames = table.frame_norms()
    print(f"== {name} ==")
    print(f"  decay class    : {diag.decay_class.value}"
          f" (fitted frame ratio {diag.fitted_ratio:.3f})")
    print(f"  tail norm      : {table.tail_norm:.3e}")
    print(f"  frame norms    : k=5 {frames[5]:.2e}  k=20 {frames[20]:.2e}"
          f"  k=40 {frames[40]:.2e}")
    energy = coefficient_energy(table)
    print(f"  coefficient mass within the block: {energy:.6f} (Parseval <= d = {theta.d})")
    print()

print("low-order coefficients of the boundary-singular example:")
t = expand(builtin("scalar_favorite"), 3, 3)
with np.printoptions(precision=4, suppress=True):
    print(t.coeffs[:, :, 0, 0].real)
