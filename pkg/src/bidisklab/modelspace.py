"""Truncated vector Hardy-space machinery.

Functions on the bidisk with d components are coordinatized on a finite
degree box: index (a, b, k) with z1-degree a <= A, z2-degree b <= B and
component k maps to a flat position lexicographically.  On that box the
module builds the multiplication operator of an inner function (block
Toeplitz in both degree indices), its adjoint, the induced projection
onto the truncated model space, orthonormal model-space bases, compressed
shifts, self-commutators, and numerical rank estimates swept over a
truncation schedule.

Truncation is the artifact here, not an afterthought: every operator is
computed with degree headroom ("pad") so that one variable multiplication
plus one application of the function never spills over the edge, and rank
estimates are read off after compressing back to the nominal window,
which keeps edge reflections away from the reported singular values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg

from .inner import RationalInnerMatrix
from .taylor import DecayClass, TaylorTable, expand, tail_diagnostic
from .tolerances import (
    BASIS_ORTHO_TOL,
    COMMUTATOR_HERM_TOL,
    RANK_ABS_TOL,
    RANK_REL_TOL,
    TRUNC_NOISE_SLACK,
)


@dataclass(frozen=True)
class TruncGrid:
    """Degree box [0..A] x [0..B] with d vector components, flat-indexed."""

    A: int
    B: int
    d: int

    @property
    def dim(self) -> int:
        return self.d * (self.A + 1) * (self.B + 1)

    def flat(self, a: int, b: int, k: int) -> int:
        if not (0 <= a <= self.A and 0 <= b <= self.B and 0 <= k < self.d):
            raise IndexError("grid index out of range")
        return (a * (self.B + 1) + b) * self.d + k

    def unflat(self, idx: int) -> tuple[int, int, int]:
        k = idx % self.d
        ab = idx // self.d
        return ab // (self.B + 1), ab % (self.B + 1), k

    def as_box(self, vec: np.ndarray) -> np.ndarray:
        """View a flat vector (or stack of columns) as a degree box."""
        if vec.ndim == 1:
            return vec.reshape(self.A + 1, self.B + 1, self.d)
        return vec.reshape(self.A + 1, self.B + 1, self.d, vec.shape[1])

    def indices_in(self, big: "TruncGrid") -> np.ndarray:
        """Flat indices inside `big` of this grid's lattice points."""
        if big.A < self.A or big.B < self.B or big.d != self.d:
            raise ValueError("target grid does not contain this grid")
        a = np.arange(self.A + 1)[:, None, None]
        b = np.arange(self.B + 1)[None, :, None]
        k = np.arange(self.d)[None, None, :]
        return ((a * (big.B + 1) + b) * self.d + k).ravel()

    def embed(self, vec: np.ndarray, big: "TruncGrid") -> np.ndarray:
        out_shape = (big.dim,) + vec.shape[1:]
        out = np.zeros(out_shape, dtype=complex)
        out[self.indices_in(big)] = vec
        return out

    def restrict(self, vec: np.ndarray, small: "TruncGrid") -> np.ndarray:
        return vec[small.indices_in(self)]


def shift_mult(vec: np.ndarray, grid: TruncGrid, j: int) -> np.ndarray:
    """Multiply by z_j on the grid; degrees that overflow are dropped."""
    box = grid.as_box(vec.copy())
    out = np.zeros_like(box)
    if j == 1:
        out[1:] = box[:-1]
    elif j == 2:
        out[:, 1:] = box[:, :-1]
    else:
        raise ValueError("variable index must be 1 or 2")
    return out.reshape(vec.shape)


def backward_shift(vec: np.ndarray, grid: TruncGrid, j: int) -> np.ndarray:
    """Drop the degree-zero slice in z_j and divide by z_j."""
    box = grid.as_box(vec.copy())
    out = np.zeros_like(box)
    if j == 1:
        out[:-1] = box[1:]
    elif j == 2:
        out[:, :-1] = box[:, 1:]
    else:
        raise ValueError("variable index must be 1 or 2")
    return out.reshape(vec.shape)


@dataclass(frozen=True)
class Subspace:
    """Column-orthonormal basis of a subspace of a truncated grid."""

    grid: TruncGrid
    basis: np.ndarray  # (grid.dim, dim) with orthonormal columns
    label: str = ""
    workspace: "ModelWorkspace | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.basis.shape[0] != self.grid.dim:
            raise ValueError("basis rows disagree with the grid dimension")
        if self.basis.shape[1]:
            gram = self.basis.conj().T @ self.basis
            defect = np.linalg.norm(gram - np.eye(self.basis.shape[1]), "fro")
            if defect > BASIS_ORTHO_TOL:
                raise ValueError(f"basis columns not orthonormal (defect {defect:.2e})")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def coords(self, vec: np.ndarray) -> np.ndarray:
        return self.basis.conj().T @ vec

    def project(self, vec: np.ndarray) -> np.ndarray:
        return self.basis @ self.coords(vec)


@dataclass(frozen=True)
class OpMatrix:
    """Matrix of an operator between subspace bases."""

    matrix: np.ndarray
    domain: Subspace
    codomain: Subspace

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError("matrix shape disagrees with its subspaces")


# ----------------------------------------------------------------------
# block-Toeplitz multiplication operators
# ----------------------------------------------------------------------

def analytic_mult(table: TaylorTable, grid: TruncGrid) -> np.ndarray:
    """Dense matrix of multiplication by Theta on the grid.

    Block Toeplitz in both degree indices; output degrees beyond the grid
    are discarded.  The Taylor cutoffs must cover the grid.
    """
    if table.A < grid.A or table.B < grid.B or table.d != grid.d:
        raise ValueError("Taylor table does not cover the grid")
    A, B, d = grid.A, grid.B, grid.d
    n = grid.dim
    M = np.zeros((n, n), dtype=complex)
    norms = np.linalg.norm(table.coeffs[: A + 1, : B + 1], axis=(2, 3))
    kd = np.arange(d)
    for c, e in zip(*np.nonzero(norms > 0.0)):
        blk = table.coeffs[c, e]
        a = np.arange(A + 1 - c)[:, None]
        b = np.arange(B + 1 - e)[None, :]
        src = (a * (B + 1) + b) * d
        dst = ((a + c) * (B + 1) + (b + e)) * d
        rows = dst[:, :, None, None] + kd[None, None, :, None]
        cols = src[:, :, None, None] + kd[None, None, None, :]
        M[rows, cols] += blk[None, None, :, :]
    return M


def adjoint_mult(table: TaylorTable, grid: TruncGrid) -> np.ndarray:
    """Matrix of the adjoint multiplication operator on the grid.

    Equals the conjugate transpose of ``analytic_mult`` on the same grid;
    restricting the padded-grid construction gives the identical block,
    which the test suite checks as a property.
    """
    return analytic_mult(table, grid).conj().T


def project_model(table: TaylorTable, grid: TruncGrid, f: np.ndarray) -> np.ndarray:
    """Apply the truncated model-space projection f - Theta (Theta* f)."""
    M = analytic_mult(table, grid)
    return f - M @ (M.conj().T @ f)


# ----------------------------------------------------------------------
# workspace: padded grids shared by the operator constructions
# ----------------------------------------------------------------------

def default_pad(theta: RationalInnerMatrix) -> tuple[int, int]:
    """Degree headroom (m1 + 2, m2 + 2) so z_j then Theta never overflow."""
    m1, m2 = theta.deg
    return m1 + 2, m2 + 2


class ModelWorkspace:
    """Shared truncation machinery for one (Theta, grid, pad) triple.

    Holds the padded grid, the Taylor table on it, the multiplication
    matrix and the truncated model projection.  Everything downstream
    (bases, shifts, invariant subspaces, kernel evaluations) reuses these.
    """

    def __init__(self, theta: RationalInnerMatrix, grid: TruncGrid,
                 pad: tuple[int, int] | None = None):
        if grid.d != theta.d:
            raise ValueError("grid dimension disagrees with Theta")
        self.theta = theta
        self.grid = grid
        self.pad = tuple(pad) if pad is not None else default_pad(theta)
        if self.pad[0] < 1 or self.pad[1] < 1:
            raise ValueError("pad must be at least (1, 1)")
        self.padded = TruncGrid(grid.A + self.pad[0], grid.B + self.pad[1], grid.d)
        self.table = expand(theta, self.padded.A, self.padded.B)
        self.decay = tail_diagnostic(self.table)
        self.mult = analytic_mult(self.table, self.padded)
        self.proj = np.eye(self.padded.dim) - self.mult @ self.mult.conj().T

    def model_columns(self, probe: TruncGrid) -> np.ndarray:
        """Projections of the probe monomials, restricted to the working grid.

        Columns are P e_m for every lattice point m of `probe`, computed on
        the padded grid and cut back to the working grid's support.
        """
        cols, _ = self.model_columns_with_defect(probe)
        return cols

    def model_columns_with_defect(self, probe: TruncGrid):
        """Restricted probe projections plus the largest chopped-off mass.

        The defect (max column norm outside the working grid) measures the
        truncation noise the restriction introduces; it vanishes for
        polynomial Theta whenever the pad covers the Taylor support.
        """
        idx_probe = probe.indices_in(self.padded)
        cols = self.proj[:, idx_probe]
        outside = np.ones(self.padded.dim, dtype=bool)
        outside[self.grid.indices_in(self.padded)] = False
        defect = 0.0
        if outside.any() and cols.size:
            defect = float(np.linalg.norm(cols[outside], axis=0).max())
        return cols[self.grid.indices_in(self.padded)], defect

    def project_grid_vec(self, vec: np.ndarray) -> np.ndarray:
        """Project a working-grid vector, staying on the working grid."""
        v = self.grid.embed(vec, self.padded)
        return self.padded.restrict(self.proj @ v, self.grid)


def _orth_columns(cols: np.ndarray, tol_rel: float = RANK_REL_TOL) -> np.ndarray:
    """Rank-revealing orthonormalization (pivoted QR) of a column family."""
    n = cols.shape[0]
    if cols.size == 0:
        return np.zeros((n, 0), dtype=complex)
    Q, R, _ = scipy.linalg.qr(cols, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] <= RANK_ABS_TOL:
        return np.zeros((n, 0), dtype=complex)
    r = int(np.sum(diag > tol_rel * diag[0]))
    return np.ascontiguousarray(Q[:, :r])


def model_basis(theta: RationalInnerMatrix, grid: TruncGrid,
                pad: tuple[int, int] | None = None) -> Subspace:
    """Orthonormal basis of the truncated model space on `grid`.

    Projects every monomial basis vector on the padded grid, restricts to
    the nominal grid, and orthonormalizes with a rank-revealing pivoted QR.
    """
    ws = ModelWorkspace(theta, grid, pad)
    cols = ws.model_columns(grid)
    basis = _orth_columns(cols)
    return Subspace(grid, basis, f"model({theta.label})", ws)


def probe_model_basis(theta: RationalInnerMatrix, A: int, B: int,
                      pad: tuple[int, int] | None = None) -> Subspace:
    """Model-space span of the (A, B) monomial projections, with headroom.

    Unlike ``model_basis`` the returned vectors live on a working grid
    padded beyond (A, B), so for polynomial Theta nothing is chopped and
    the span sits exactly inside the model space; the span itself is still
    indexed by the nominal window.  This is the basis of choice when
    invariant-subspace structure is read off the truncation.
    """
    pad = pad if pad is not None else default_pad(theta)
    work = TruncGrid(A + pad[0], B + pad[1], theta.d)
    ws = ModelWorkspace(theta, work, pad)
    idx = TruncGrid(A, B, theta.d).indices_in(ws.padded)
    cols = ws.proj[:, idx][work.indices_in(ws.padded)]
    basis = _orth_columns(cols)
    return Subspace(work, basis, f"model({theta.label})@({A},{B})", ws)


def _workspace_for(theta: RationalInnerMatrix, basis: Subspace) -> ModelWorkspace:
    if basis.workspace is not None and basis.workspace.theta is theta:
        return basis.workspace
    return ModelWorkspace(theta, basis.grid)


def compressed_shift(theta: RationalInnerMatrix, basis: Subspace, j: int) -> OpMatrix:
    """Matrix of the compressed shift: project z_j times each basis column.

    Entries are <P(z_j phi_beta), phi_alpha>, evaluated on the padded grid
    so the multiplication never overflows before projecting.
    """
    if j not in (1, 2):
        raise ValueError("variable index must be 1 or 2")
    ws = _workspace_for(theta, basis)
    if ws.pad[j - 1] < 1:
        raise ValueError("pad too small for a shift in this variable")
    Bp = basis.grid.embed(basis.basis, ws.padded)
    W = ws.proj @ shift_mult(Bp, ws.padded, j)
    S = Bp.conj().T @ W
    return OpMatrix(S, basis, basis)


def commutator(S: OpMatrix) -> OpMatrix:
    """Self-commutator S S* - S* S of a square operator matrix."""
    M = S.matrix
    if M.shape[0] != M.shape[1]:
        raise ValueError("commutator needs a square operator")
    C = M @ M.conj().T - M.conj().T @ M
    herm_defect = np.linalg.norm(C - C.conj().T, "fro")
    if herm_defect > COMMUTATOR_HERM_TOL:
        raise AssertionError(f"commutator lost hermiticity ({herm_defect:.2e})")
    return OpMatrix(C, S.domain, S.domain)


def numerical_rank(C, tol_rel: float = RANK_REL_TOL,
                   tol_abs: float = RANK_ABS_TOL) -> tuple[int, np.ndarray]:
    """Count singular values above both a relative and an absolute floor."""
    M = C.matrix if isinstance(C, OpMatrix) else np.asarray(C)
    if M.size == 0:
        return 0, np.zeros(0)
    sig = np.linalg.svd(M, compute_uv=False)
    if sig[0] <= 0.0:
        return 0, sig
    rank = int(np.sum((sig > tol_rel * sig[0]) & (sig > tol_abs)))
    return rank, sig


# ----------------------------------------------------------------------
# rank sweeps over truncation schedules
# ----------------------------------------------------------------------

class SweepVerdict(Enum):
    STABLE = "STABLE"
    DIVERGENT = "DIVERGENT"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class RankLevel:
    A: int
    B: int
    dim_model: int
    sigmas: np.ndarray
    rank: int


@dataclass(frozen=True)
class RankReport:
    label: str
    deg: tuple[int, int]
    det_deg: tuple[int, int]
    levels: tuple[RankLevel, ...]
    stabilized_rank: int | None
    verdict: SweepVerdict
    warnings: tuple[str, ...]


# Polynomial tail ratios stabilize slowly; fitting shallower than this
# depth mistakes slow decay for geometric decay.
DECAY_PROBE_DEPTH = 40


def decay_class(theta: RationalInnerMatrix, schedule=None) -> DecayClass:
    """Decay class of Theta's expansion, probed at a trustworthy depth."""
    depth_a = depth_b = DECAY_PROBE_DEPTH
    if schedule:
        depth_a = max(depth_a, schedule[-1][0] + 2)
        depth_b = max(depth_b, schedule[-1][1] + 2)
    return tail_diagnostic(expand(theta, depth_a, depth_b)).decay_class


def _validate_schedule(schedule) -> list[tuple[int, int]]:
    sched = [(int(a), int(b)) for a, b in schedule]
    if len(sched) < 3:
        raise ValueError("schedule needs at least three levels")
    for (a0, b0), (a1, b1) in zip(sched, sched[1:]):
        if a1 <= a0 or b1 <= b0:
            raise ValueError("schedule must increase strictly in both coordinates")
    return sched


def rank_at_level(theta: RationalInnerMatrix, A: int, B: int,
                  pad: tuple[int, int] | None = None,
                  tol_rel: float = RANK_REL_TOL,
                  tol_abs: float = RANK_ABS_TOL) -> RankLevel:
    """Commutator rank estimate at one nominal truncation level.

    The shift and its commutator are computed on a working grid with
    `pad` extra degrees, then compressed onto the span of the projected
    monomials of the nominal (A, B) window before reading singular
    values; the compression keeps truncation-edge reflections out of the
    estimate.  For non-polynomial Theta an additional absolute floor
    proportional to the Taylor tail norm discounts truncation noise.
    """
    pad = pad if pad is not None else default_pad(theta)
    work = TruncGrid(A + pad[0], B + pad[1], theta.d)
    basis = model_basis(theta, work, pad)
    ws = basis.workspace
    S = compressed_shift(theta, basis, 1)
    C = commutator(S)
    probe_cols, defect = ws.model_columns_with_defect(TruncGrid(A, B, theta.d))
    X = _orth_columns(basis.coords(probe_cols))
    CX = X.conj().T @ C.matrix @ X
    floor = tol_abs
    if ws.decay.decay_class is not DecayClass.FINITE:
        floor = max(floor, TRUNC_NOISE_SLACK * defect)
    rank, sig = numerical_rank(CX, tol_rel, floor)
    return RankLevel(A, B, X.shape[1], sig, rank)


def rank_sweep(theta: RationalInnerMatrix, schedule,
               pad: tuple[int, int] | None = None,
               tol_rel: float = RANK_REL_TOL,
               tol_abs: float = RANK_ABS_TOL) -> RankReport:
    """Sweep commutator rank estimates across a truncation schedule.

    STABLE requires the last three levels to agree; ranks strictly
    increasing across every level mean DIVERGENT; anything else is
    INCONCLUSIVE.  A SLOW Taylor decay is surfaced as a warning since the
    estimates then carry substantial truncation noise.
    """
    sched = _validate_schedule(schedule)
    levels = [rank_at_level(theta, A, B, pad, tol_rel, tol_abs) for A, B in sched]
    ranks = [lv.rank for lv in levels]
    if ranks[-1] == ranks[-2] == ranks[-3]:
        verdict, stabilized = SweepVerdict.STABLE, ranks[-1]
    elif all(r1 > r0 for r0, r1 in zip(ranks, ranks[1:])):
        verdict, stabilized = SweepVerdict.DIVERGENT, None
    else:
        verdict, stabilized = SweepVerdict.INCONCLUSIVE, None
    warnings: list[str] = []
    if decay_class(theta, schedule=sched) is DecayClass.SLOW:
        warnings.append("SLOW_TAYLOR_DECAY")
    return RankReport(theta.label, theta.deg, theta.det_deg, tuple(levels),
                      stabilized, verdict, tuple(warnings))
