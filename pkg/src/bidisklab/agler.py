"""Canonical shift-invariant subspaces and Agler kernel data.

Inside a truncated model space the maximal z1-invariant subspace is the
common null space of the maps f -> Theta*(z1^k f); its orthogonal
complement is the minimal z2-type summand.  Quotienting each by one more
shift yields the finite-dimensional "wandering" spaces whose dimensions,
for rational inner functions, equal the determinant degrees, and whose
orthonormal bases reproduce the Agler kernels in the decomposition

    I - Theta(z) Theta(w)* = (1 - z1 conj(w1)) K2 + (1 - z2 conj(w2)) K1.

The module also evaluates the closed-form commutator action on the
reproducing kernels of the two summands next to the direct matrix
computation, so the two routes can be compared numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d, fftconvolve

from .inner import RationalInnerMatrix
from .modelspace import (
    ModelWorkspace,
    OpMatrix,
    Subspace,
    TruncGrid,
    backward_shift,
    commutator,
    compressed_shift,
    probe_model_basis,
    shift_mult,
)
from .taylor import DecayClass, expand
from .tolerances import RANK_ABS_TOL, RANK_REL_TOL, TRUNC_NOISE_SLACK


@dataclass(frozen=True)
class AglerSpaces:
    """Invariant subspaces and wandering quotients of a truncated model space."""

    smax1: Subspace
    smin2: Subspace
    hkmax1: Subspace
    hkmin2: Subspace
    K_depth: int
    model: Subspace


def _null_vectors(G: np.ndarray, noise_floor: float = 0.0) -> np.ndarray:
    """Orthonormal right null vectors of G at the shared rank tolerance."""
    s = G.shape[1]
    if s == 0:
        return np.zeros((0, 0), dtype=complex)
    _, sig, Vh = np.linalg.svd(G, full_matrices=True)
    thr = max(RANK_ABS_TOL, noise_floor)
    if sig.size:
        thr = max(thr, RANK_REL_TOL * sig[0])
    rank = int(np.sum(sig > thr))
    return Vh[rank:].conj().T


def _basis_defect(theta: RationalInnerMatrix, basis: Subspace) -> float:
    """Largest Theta*-residual of the basis columns (truncation noise scale)."""
    G = _invariance_block(theta, basis, 0)
    if G.size == 0:
        return 0.0
    return float(np.linalg.norm(G, axis=0).max())


def _invariance_block(theta: RationalInnerMatrix, basis: Subspace,
                      K_depth: int) -> np.ndarray:
    """Stacked coefficients of Theta*(z1^k phi) for k = 0..K_depth.

    The k-th map only adds output rows below z1-degree zero of the k = 0
    map, so a single cross-correlation per column and component yields
    every constraint; the returned block has one row per coefficient of
    the deepest map and one column per basis vector.
    """
    grid = basis.grid
    A, B, d = grid.A, grid.B, grid.d
    table = expand(theta, A + K_depth, B)
    W = table.coeffs
    Wrev = np.conj(W)[::-1, ::-1]
    At, Bt = table.A, table.B
    s = basis.dim
    rows = (A + K_depth + 1) * (B + 1) * d
    G = np.empty((rows, s), dtype=complex)
    for col in range(s):
        phi = basis.basis[:, col].reshape(A + 1, B + 1, d)
        blocks = []
        for i in range(d):
            acc = None
            for j in range(d):
                c = fftconvolve(phi[:, :, j], Wrev[:, :, j, i])
                acc = c if acc is None else acc + c
            # acc[s_idx, t] = sum_{c,e} conj(W[c,e][j,i]) phi_j[s_idx - At + c, t - Bt + e]
            blocks.append(acc[At - K_depth: At + A + 1, Bt: Bt + B + 1])
        G[:, col] = np.stack(blocks, axis=-1).ravel()
    return G


def compute_smax1(theta: RationalInnerMatrix, basis: Subspace,
                  K_depth: int) -> Subspace:
    """Maximal z1-invariant subspace of the truncated model space.

    Returns the combinations f of basis columns with Theta*(z1^k f) = 0
    for k = 0..K_depth, orthonormal in the ambient grid.  For slowly
    decaying expansions the zero test is widened by the measured basis
    truncation defect.
    """
    if K_depth < 1:
        raise ValueError("invariance depth must be at least 1")
    G = _invariance_block(theta, basis, K_depth)
    floor = _noise_floor(theta, basis)
    null = _null_vectors(G, floor)
    return Subspace(basis.grid, basis.basis @ null,
                    f"smax1({theta.label})", basis.workspace)


def _noise_floor(theta: RationalInnerMatrix, basis: Subspace) -> float:
    ws = basis.workspace
    finite = ws is not None and ws.decay.decay_class is DecayClass.FINITE
    if finite:
        return 0.0
    return TRUNC_NOISE_SLACK * _basis_defect(theta, basis)


def compute_smin2(theta: RationalInnerMatrix, basis: Subspace,
                  smax1: Subspace) -> Subspace:
    """Orthogonal complement of the invariant subspace inside the model basis."""
    X = basis.coords(smax1.basis)
    if X.shape[1] == 0:
        comp = basis.basis
    else:
        U, _, _ = np.linalg.svd(X, full_matrices=True)
        comp = basis.basis @ U[:, smax1.dim:]
    return Subspace(basis.grid, comp, f"smin2({theta.label})", basis.workspace)


# For slowly converging expansions the shift Gram matrix of an invariant
# subspace splits into a bulk near its top singular value and wandering
# directions at least this factor below it; the gap is wide (measured
# >= 15x on the boundary-singular cases), so the fraction is not delicate.
_WANDER_GAP_FRACTION = 0.3


def _wandering(theta: RationalInnerMatrix, space: Subspace, j: int,
               exact: bool) -> Subspace:
    """space minus z_j times space, via the shift Gram matrix null space."""
    if space.dim == 0:
        return Subspace(space.grid, space.basis[:, :0], space.label + "-wandering",
                        space.workspace)
    shifted = shift_mult(space.basis, space.grid, j)
    G = shifted.conj().T @ space.basis
    floor = 0.0
    if not exact:
        sig_max = float(np.linalg.norm(G, 2)) if G.size else 0.0
        floor = _WANDER_GAP_FRACTION * sig_max
    null = _null_vectors(G, floor)
    return Subspace(space.grid, space.basis @ null,
                    f"wandering{j}({theta.label})", space.workspace)


def agler_spaces(theta: RationalInnerMatrix, A: int, B: int,
                 pad: tuple[int, int] | None = None,
                 K_depth: int | None = None) -> AglerSpaces:
    """Compute the invariant subspaces and wandering quotients at (A, B).

    The model space is spanned by the projections of the (A, B) monomials
    but represented with degree headroom, so the invariant-subspace tests
    are not polluted by window-edge chopping.  K_depth defaults to A:
    deeper z1-powers leave the degree window, so further constraints are
    vacuous at this truncation.
    """
    basis = probe_model_basis(theta, A, B, pad)
    K_depth = A if K_depth is None else K_depth
    smax1 = compute_smax1(theta, basis, K_depth)
    smin2 = compute_smin2(theta, basis, smax1)
    ws = basis.workspace
    exact = ws is not None and ws.decay.decay_class is DecayClass.FINITE
    hkmax1 = _wandering(theta, smax1, 1, exact)
    hkmin2 = _wandering(theta, smin2, 2, exact)
    return AglerSpaces(smax1, smin2, hkmax1, hkmin2, K_depth, basis)


def kernel_space_dims(theta: RationalInnerMatrix,
                      spaces: AglerSpaces) -> tuple[int, int]:
    """Dimensions of the two wandering quotients.

    For rational inner Theta at sufficient truncation these match the
    determinant degrees (deg2 det, deg1 det).
    """
    return spaces.hkmax1.dim, spaces.hkmin2.dim


# ----------------------------------------------------------------------
# kernel evaluation
# ----------------------------------------------------------------------

def eval_columns(cols: np.ndarray, grid: TruncGrid, z) -> np.ndarray:
    """Evaluate flat coefficient columns as C^d-valued polynomials at z."""
    z1, z2 = z
    box = cols.reshape(grid.A + 1, grid.B + 1, grid.d, -1)
    pw1 = np.asarray(z1, dtype=complex) ** np.arange(grid.A + 1)
    pw2 = np.asarray(z2, dtype=complex) ** np.arange(grid.B + 1)
    return np.einsum("a,b,abdn->dn", pw1, pw2, box)


def _kernel_matrix(space: Subspace, z, w) -> np.ndarray:
    """sum_i phi_i(z) phi_i(w)* over the columns of the space."""
    Ez = eval_columns(space.basis, space.grid, z)
    Ew = eval_columns(space.basis, space.grid, w)
    return Ez @ Ew.conj().T


def agler_kernel_residual(theta: RationalInnerMatrix, spaces: AglerSpaces,
                          sample_pairs) -> float:
    """Max defect of the two-kernel decomposition over sample point pairs.

    Reconstructs K1 from the z1-wandering basis and K2 from the
    z2-wandering basis and measures

        || I - Theta(z) Theta(w)* - (1 - z1 conj(w1)) K2 - (1 - z2 conj(w2)) K1 ||_F.

    Sample coordinates should stay well inside the bidisk (modulus at most
    0.7); truncated bases lose accuracy toward the boundary.
    """
    d = theta.d
    eye = np.eye(d)
    worst = 0.0
    for z, w in sample_pairs:
        K1 = _kernel_matrix(spaces.hkmax1, z, w)
        K2 = _kernel_matrix(spaces.hkmin2, z, w)
        lhs = eye - theta(*z) @ theta(*w).conj().T
        rhs = (1 - z[0] * np.conj(w[0])) * K2 + (1 - z[1] * np.conj(w[1])) * K1
        worst = max(worst, float(np.linalg.norm(lhs - rhs, "fro")))
    return worst


# ----------------------------------------------------------------------
# commutator action on the summand reproducing kernels
# ----------------------------------------------------------------------

def _series_inverse(c: np.ndarray, n: int) -> np.ndarray:
    """Power series of 1 / c(z2) through degree n - 1 (c[0] != 0)."""
    c = np.asarray(c, dtype=complex)
    out = np.zeros(n, dtype=complex)
    out[0] = 1.0 / c[0]
    for k in range(1, n):
        acc = 0.0
        for j in range(1, min(k, len(c) - 1) + 1):
            acc += c[j] * out[k - j]
        out[k] = -acc / c[0]
    return out


def _den_polys(theta: RationalInnerMatrix, cols: np.ndarray, grid: TruncGrid):
    """Clear the denominator of numerical columns: f_i = p * phi_i.

    Returns the boxes of the f_i on a grid enlarged by the degree of p.
    """
    dp1, dp2 = theta.p.deg1, theta.p.deg2
    big = TruncGrid(grid.A + dp1, grid.B + dp2, grid.d)
    ncols = cols.shape[1]
    out = np.zeros((big.A + 1, big.B + 1, grid.d, ncols), dtype=complex)
    box = cols.reshape(grid.A + 1, grid.B + 1, grid.d, ncols)
    for k in range(grid.d):
        for i in range(ncols):
            out[:, :, k, i] = convolve2d(box[:, :, k, i], theta.p.coeffs)
    return out, big


@dataclass(frozen=True)
class KernelCommutatorComparison:
    """Formula route versus matrix route for [S*, S] on the summand kernels.

    All four entries are flat coefficient vectors on the model grid; the
    caller compares formula against matrix for each summand.
    """

    formula_invariant: np.ndarray
    matrix_invariant: np.ndarray
    formula_complement: np.ndarray
    matrix_complement: np.ndarray


def commutator_kernel_formula(theta: RationalInnerMatrix, spaces: AglerSpaces,
                              w, e) -> KernelCommutatorComparison:
    """Evaluate [S*_{z1}, S_{z1}] on the summand kernels two ways.

    The formula route expands, for the orthonormal z1-wandering family
    phi_i with cleared numerators f_i = p phi_i,

        [S*, S] K^1_w e = P( sum_i f_i(0, z2)/p(0, z2) * (f_i(w)/p(w))^* e )
        [S*, S] K^2_w e = P( sum_i Tbar1 f_i / p(0, z2) * (Tbar1(f_i/p)(w))^* e ),

    with Tbar1 the backward shift in z1.  The matrix route projects the
    model reproducing kernel at w onto each summand and applies the
    commutator matrix of the compressed shift.  Requires deg1 Theta <= 1,
    the hypothesis of the closed forms.
    """
    if theta.deg[0] > 1:
        raise ValueError("closed-form commutator action requires deg1 Theta <= 1")
    model = spaces.model
    grid = model.grid
    ws = model.workspace or ModelWorkspace(theta, grid)
    e = np.asarray(e, dtype=complex).reshape(theta.d)
    w1, w2 = w

    # matrix route: coordinates of the kernel at w, split by summand
    pw1 = np.conj(w1) ** np.arange(ws.padded.A + 1)
    pw2 = np.conj(w2) ** np.arange(ws.padded.B + 1)
    szego = (pw1[:, None, None] * pw2[None, :, None] * e[None, None, :]).ravel()
    kw = ws.padded.restrict(ws.proj @ szego, grid)
    y = model.coords(kw)
    S = compressed_shift(theta, model, 1).matrix
    comm = S.conj().T @ S - S @ S.conj().T  # [S*, S]
    Xmax = model.coords(spaces.smax1.basis)
    Xmin = model.coords(spaces.smin2.basis)
    y1 = Xmax @ (Xmax.conj().T @ y)
    y2 = Xmin @ (Xmin.conj().T @ y)
    matrix1 = model.basis @ (comm @ y1)
    matrix2 = model.basis @ (comm @ y2)

    # formula route
    phi = spaces.hkmax1
    if phi.dim == 0:
        zero = np.zeros(grid.dim, dtype=complex)
        return KernelCommutatorComparison(zero, matrix1, zero.copy(), matrix2)
    fbox, fgrid = _den_polys(theta, phi.basis, grid)
    pw = complex(theta.p(w1, w2))
    fvals = eval_columns(fbox.reshape(-1, phi.dim), fgrid, (w1, w2))
    weights1 = (fvals / pw).conj().T @ e  # (f_i(w)/p(w))^* e
    p0 = theta.p.coeffs[0, :]
    inv0 = _series_inverse(p0, ws.padded.B + 1)

    # sum_i w1_i f_i(0, z2), then divide by p(0, z2)
    g1 = np.einsum("bdn,n->bd", fbox[0], weights1)
    num1 = np.zeros((ws.padded.B + 1, theta.d), dtype=complex)
    for k in range(theta.d):
        conv = np.convolve(g1[:, k], inv0)
        num1[:, k] = conv[: ws.padded.B + 1]
    vec1 = np.zeros((ws.padded.A + 1, ws.padded.B + 1, theta.d), dtype=complex)
    vec1[0] = num1
    formula1 = ws.padded.restrict(ws.proj @ vec1.ravel(), grid)

    # backward z1-shift of the phi columns, evaluated at w, and of the f_i
    tphi = backward_shift(phi.basis, grid, 1)
    tvals = eval_columns(tphi, grid, (w1, w2))
    weights2 = tvals.conj().T @ e
    tf = fbox[1:]  # backward shift of the cleared numerators
    g2 = np.einsum("abdn,n->abd", tf, weights2)
    vec2 = np.zeros((ws.padded.A + 1, ws.padded.B + 1, theta.d), dtype=complex)
    amax = min(g2.shape[0], ws.padded.A + 1)
    for k in range(theta.d):
        for a in range(amax):
            conv = np.convolve(g2[a, :, k], inv0)
            vec2[a, :, k] = conv[: ws.padded.B + 1]
    formula2 = ws.padded.restrict(ws.proj @ vec2.ravel(), grid)

    return KernelCommutatorComparison(formula1, matrix1, formula2, matrix2)


def injectivity_margin(theta: RationalInnerMatrix, spaces: AglerSpaces,
                       C: OpMatrix | None = None) -> float:
    """Smallest singular value of the commutator on the z1-wandering space.

    A positive margin witnesses that the self-commutator has no kernel
    inside the wandering quotient; returns +inf when that space is trivial.
    """
    if spaces.hkmax1.dim == 0:
        return float("inf")
    if C is None:
        C = commutator(compressed_shift(theta, spaces.model, 1))
    X = spaces.model.coords(spaces.hkmax1.basis)
    M = C.matrix @ X
    sig = np.linalg.svd(M, compute_uv=False)
    return float(sig[-1])
