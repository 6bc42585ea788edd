#!/usr/bin/env python3
"""Invariant subspaces, wandering quotients, and the two-kernel identity.

Inside the model space sits a maximal z1-invariant subspace; its
orthogonal complement is invariant the other way.  Quotienting each by
one more shift leaves finite-dimensional "wandering" spaces whose
dimensions match the determinant degrees of the function, and whose
orthonormal bases reconstruct the positive kernels K1, K2 splitting

    I - Theta(z) Theta(w)* = (1 - z1 conj(w1)) K2 + (1 - z2 conj(w2)) K1.
"""

import numpy as np

from bidisklab import agler_kernel_residual, agler_spaces, builtin, injectivity_margin

rng = np.random.default_rng(7)


def disk_point(rmax=0.6):
    return tuple(rmax * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
                 for _ in range(2))


pairs = [(disk_point(), disk_point()) for _ in range(20)]

print(f"{'label':16s} {'det_deg':8s} {'dims':8s} {'residual':10s} margin")
for name in ("scalar_z1z2", "hadamard_z1z2", "hadamard_deg21",
             "diag_z1z2_1", "scalar_stable4"):
    theta = builtin(name)
    spaces = agler_spaces(theta, 10, 10)
    dims = (spaces.hkmax1.dim, spaces.hkmin2.dim)
    residual = agler_kernel_residual(theta, spaces, pairs)
    margin = injectivity_margin(theta, spaces)
    print(f"{name:16s} {str(theta.det_deg):8s} {str(dims):8s} "
          f"{residual:.2e}  {margin:.3f}")

print()
print("the dimensions read (deg2 det, deg1 det); the margin is the smallest")
print("singular value of the self-commutator restricted to the z1-wandering")
print("space, bounded away from zero exactly as the finite-rank theory demands.")
