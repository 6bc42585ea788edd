"""Matrix-valued rational inner functions on the bidisk.

A function here is a square matrix of rational functions written over a
single scalar denominator, Theta = Q / p, with Q a polynomial matrix and
p a polynomial that does not vanish at the origin.  Theta is *inner* when
its boundary values on the torus are unitary; in coefficient form that is
the exact Laurent identity

    Q(z) Q~(1/z) = Q~(1/z) Q(z) = p(z) conj-p(1/z) I,

where ~ conjugates coefficients.  Constructors in this module validate
that identity eagerly, so everything downstream may assume innerness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .polynomials import (
    BiPoly,
    LaurentBiPoly,
    MatPoly,
    PolyDivisionError,
    mat_determinant,
    mul_star,
    poly_divexact,
    reduce_fraction,
    reflect,
)
from .tolerances import INNER_EXACT_TOL, UNITARY_TOL


class InnerFunctionError(ValueError):
    """A constructed candidate failed the innerness validation."""


@dataclass(frozen=True)
class InnerCheck:
    """Outcome of an innerness verification."""

    passed: bool
    residual: float
    method: str


@dataclass(frozen=True)
class RationalInnerMatrix:
    """Theta = Q / p with cached degree data.

    Instances built through the module constructors are verified inner.
    Building one directly skips validation; that is intentional so the
    verification routines and the CLI can inspect failing candidates.
    """

    d: int
    Q: MatPoly
    p: BiPoly
    label: str = ""

    def __post_init__(self):
        if self.Q.d != self.d:
            raise ValueError("numerator size disagrees with d")
        if abs(self.p(0.0, 0.0)) <= 1e-14:
            raise ValueError("denominator must not vanish at the origin")

    @cached_property
    def deg(self) -> tuple[int, int]:
        return degree(self)

    @cached_property
    def det_deg(self) -> tuple[int, int]:
        return det_degree(self)

    def __call__(self, z1, z2) -> np.ndarray:
        return self.Q(z1, z2) / self.p(z1, z2)

    def __repr__(self) -> str:
        name = self.label or "<unnamed>"
        return f"RationalInnerMatrix(d={self.d}, label={name!r}, deg={self.deg})"


# ----------------------------------------------------------------------
# verification
# ----------------------------------------------------------------------

def _laurent_defect(theta: RationalInnerMatrix) -> float:
    """Max coefficient modulus of QQ* - pp* I and Q*Q - pp* I."""
    Q, p, d = theta.Q, theta.p, theta.d
    pp = mul_star(p, p)
    worst = 0.0
    for i in range(d):
        for j in range(d):
            left = LaurentBiPoly.zero()
            right = LaurentBiPoly.zero()
            for k in range(d):
                # (Q Q*)_{ij} = sum_k Q_ik conj(Q_jk)(1/z)
                left = left + mul_star(Q[i, k], Q[j, k])
                # (Q* Q)_{ij} = sum_k conj(Q_ki)(1/z) Q_kj
                right = right + mul_star(Q[k, j], Q[k, i])
            if i == j:
                left = left - pp
                right = right - pp
            worst = max(worst, left.max_abs(), right.max_abs())
    return worst


def verify_inner_exact(theta: RationalInnerMatrix) -> InnerCheck:
    """Exact Laurent-coefficient innerness check.

    Returns a report rather than raising: failing candidates are data, not
    errors, for the verification surface.
    """
    residual = _laurent_defect(theta)
    return InnerCheck(residual <= INNER_EXACT_TOL, residual, "exact")


def verify_inner_grid(theta: RationalInnerMatrix, N: int) -> InnerCheck:
    """Innerness residual sampled on the N x N uniform torus grid.

    Uses the division-free form || Q Q* - |p|^2 I ||_F / (1 + |p|^2) so
    boundary zeros of p cannot blow the quotient up.
    """
    if N < 2:
        raise ValueError("grid size must be at least 2")
    tau = np.exp(2j * np.pi * np.arange(N) / N)
    T1, T2 = np.meshgrid(tau, tau, indexing="ij")
    d = theta.d
    Qv = np.empty((N, N, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            Qv[:, :, i, j] = theta.Q[i, j](T1, T2)
    pv = theta.p(T1, T2)
    G = Qv @ np.conj(np.swapaxes(Qv, -1, -2))
    G -= (np.abs(pv) ** 2)[:, :, None, None] * np.eye(d)
    res = np.linalg.norm(G, axis=(-2, -1)) / (1.0 + np.abs(pv) ** 2)
    worst = float(res.max())
    return InnerCheck(worst <= 1e-9, worst, f"grid{N}")


def _require_inner(theta: RationalInnerMatrix) -> RationalInnerMatrix:
    check = verify_inner_exact(theta)
    if not check.passed:
        raise InnerFunctionError(
            f"candidate {theta.label or '<unnamed>'} is not inner: "
            f"Laurent residual {check.residual:.3e}")
    return theta


# ----------------------------------------------------------------------
# degrees
# ----------------------------------------------------------------------

def degree(theta: RationalInnerMatrix) -> tuple[int, int]:
    """Entrywise degree pair (m1, m2).

    Each entry Q_ij / p is put in reduced form first, and the degree of a
    scalar rational function is the max of its numerator and denominator
    degrees per variable; the matrix degree is the entrywise maximum.
    """
    m1 = m2 = 0
    for i in range(theta.d):
        for j in range(theta.d):
            q = theta.Q[i, j]
            if q.is_zero:
                continue
            if theta.p.is_constant:
                num, den = q, theta.p
            else:
                num, den = reduce_fraction(q, theta.p)
            m1 = max(m1, num.deg1, den.deg1)
            m2 = max(m2, num.deg2, den.deg2)
    return m1, m2


def det_degree(theta: RationalInnerMatrix) -> tuple[int, int]:
    """Degree pair of the scalar rational inner function det Theta.

    Computes det Q exactly and reduces det Q / p^d one denominator copy at
    a time: whole copies cancel by exact division, stray common factors by
    small GCDs.  Working copy by copy keeps every polynomial division at
    the degree of p itself, which floats handle far more reliably than a
    single GCD against p^d.  A slice-oracle disagreement inside a
    reduction surfaces as a GcdSliceWarning.
    """
    num = mat_determinant(theta.Q)
    if theta.p.is_constant:
        return num.deg1, num.deg2
    remaining = theta.d
    while remaining > 0:
        try:
            num = poly_divexact(num, theta.p)
        except PolyDivisionError:
            break
        remaining -= 1
    den_deg1 = den_deg2 = 0
    for used in range(remaining):
        num, part = reduce_fraction(num, theta.p)
        den_deg1 += part.deg1
        den_deg2 += part.deg2
        if part.deg1 == theta.p.deg1 and part.deg2 == theta.p.deg2:
            rest = remaining - used - 1
            den_deg1 += rest * theta.p.deg1
            den_deg2 += rest * theta.p.deg2
            break
    return max(num.deg1, den_deg1), max(num.deg2, den_deg2)


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------

def from_scalar(q: BiPoly, p: BiPoly, label: str = "") -> RationalInnerMatrix:
    """Scalar inner function q / p (validated, reduced to lowest terms)."""
    qr, pr = reduce_fraction(q, p)
    theta = RationalInnerMatrix(1, MatPoly.from_scalar(qr), pr, label)
    return _require_inner(theta)


def from_stable_poly(p: BiPoly, m: int | None = None, n: int | None = None,
                     label: str = "") -> RationalInnerMatrix:
    """Scalar inner function reflect(p) / p for a stable polynomial p.

    The reflection degrees default to the degrees of p.  Stability (no
    zeros on the closed bidisk, boundary zeros allowed) is the caller's
    responsibility; the Laurent identity below holds for any p, and an
    unstable p shows up downstream as a divergent Taylor expansion.
    """
    m = p.deg1 if m is None else m
    n = p.deg2 if n is None else n
    q = reflect(p, m, n)
    if not label:
        label = "stable_poly_inner"
    return from_scalar(q, p, label)


def diagonal(scalars, label: str = "") -> RationalInnerMatrix:
    """Diagonal matrix inner function from scalar inner functions.

    The common denominator is the product of the (already reduced) scalar
    denominators and each numerator is scaled by the complementary factor.
    """
    scalars = list(scalars)
    if not scalars:
        raise ValueError("need at least one scalar inner function")
    if any(t.d != 1 for t in scalars):
        raise ValueError("diagonal entries must be scalar inner functions")
    d = len(scalars)
    p = BiPoly.one()
    for t in scalars:
        p = p * t.p
    entries = []
    for i in range(d):
        qi = scalars[i].Q[0, 0]
        for j, t in enumerate(scalars):
            if j != i:
                qi = qi * t.p
        entries.append(qi)
    theta = RationalInnerMatrix(d, MatPoly.diag(entries), p,
                                label or "diagonal")
    return _require_inner(theta)


def _one_var_defect(F: MatPoly) -> float:
    """Innerness defect of a polynomial one-variable matrix factor."""
    d = F.d
    worst = 0.0
    for i in range(d):
        for j in range(d):
            acc = LaurentBiPoly.zero()
            for k in range(d):
                acc = acc + mul_star(F[i, k], F[j, k])
            if i == j:
                acc = acc - LaurentBiPoly.from_terms([(0, 0, 1.0)])
            worst = max(worst, acc.max_abs())
    return worst


def product_one_var(factors, label: str = "") -> RationalInnerMatrix:
    """Product of alternating one-variable polynomial inner factors.

    ``factors`` is a sequence of (Phi, Psi) pairs of MatPoly values, Phi
    depending on z1 only and Psi on z2 only.  Each factor must itself be
    unitary-valued on the circle; the product is then inner with trivial
    denominator.
    """
    factors = list(factors)
    d = None
    Q = None
    for idx, (phi, psi) in enumerate(factors):
        if phi.deg2 != 0:
            raise InnerFunctionError(f"factor {idx}: Phi must depend on z1 only")
        if psi.deg1 != 0:
            raise InnerFunctionError(f"factor {idx}: Psi must depend on z2 only")
        for name, F in (("Phi", phi), ("Psi", psi)):
            defect = _one_var_defect(F)
            if defect > INNER_EXACT_TOL:
                raise InnerFunctionError(
                    f"factor {idx}: {name} is not inner (defect {defect:.3e})")
        if d is None:
            d = phi.d
        if phi.d != d or psi.d != d:
            raise ValueError("factor sizes disagree")
        step = phi @ psi
        Q = step if Q is None else Q @ step
    if Q is None:
        raise ValueError("need at least one factor")
    theta = RationalInnerMatrix(d, Q, BiPoly.one(), label or "product")
    return _require_inner(theta)


def unitary_conjugate(theta: RationalInnerMatrix, U, V,
                      label: str = "") -> RationalInnerMatrix:
    """U Theta V for constant unitary U and V (degree and rank invariants)."""
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    for name, W in (("U", U), ("V", V)):
        if W.shape != (theta.d, theta.d):
            raise ValueError(f"{name} has the wrong shape")
        defect = np.linalg.norm(W @ W.conj().T - np.eye(theta.d), "fro")
        if defect > UNITARY_TOL:
            raise ValueError(f"{name} is not unitary (defect {defect:.3e})")
    Q = theta.Q.left_mul(U).right_mul(V)
    out = RationalInnerMatrix(theta.d, Q, theta.p,
                              label or f"conjugated({theta.label})")
    return _require_inner(out)


def swap_variables(theta: RationalInnerMatrix) -> RationalInnerMatrix:
    """Theta with the two disk variables exchanged."""
    return RationalInnerMatrix(theta.d, theta.Q.swap_vars(), theta.p.swap_vars(),
                               f"swap({theta.label})" if theta.label else "")


# ----------------------------------------------------------------------
# builtin examples
# ----------------------------------------------------------------------

def _z1() -> BiPoly:
    return BiPoly.monomial(1, 0)


def _z2() -> BiPoly:
    return BiPoly.monomial(0, 1)


def _builtin_diag_z1z2_1() -> RationalInnerMatrix:
    Q = MatPoly.diag([_z1() * _z2(), BiPoly.one()])
    return _require_inner(RationalInnerMatrix(2, Q, BiPoly.one(), "diag_z1z2_1"))


def _builtin_hadamard_z1z2() -> RationalInnerMatrix:
    s = _z1() + _z2()
    t = _z1() - _z2()
    Q = MatPoly([[0.5 * s, 0.5 * t], [0.5 * t, 0.5 * s]])
    return _require_inner(RationalInnerMatrix(2, Q, BiPoly.one(), "hadamard_z1z2"))


def _builtin_hadamard_deg21() -> RationalInnerMatrix:
    s = _z1() + _z2()
    t = _z1() - _z2()
    Q = MatPoly([[0.5 * (_z1() * s), 0.5 * (_z1() * t)],
                 [0.5 * t, 0.5 * s]])
    return _require_inner(RationalInnerMatrix(2, Q, BiPoly.one(), "hadamard_deg21"))


def _builtin_scalar_z1z2() -> RationalInnerMatrix:
    return from_scalar(_z1() * _z2(), BiPoly.one(), "scalar_z1z2")


def _builtin_scalar_favorite() -> RationalInnerMatrix:
    p = BiPoly.from_terms([(0, 0, 2), (1, 0, -1), (0, 1, -1)])
    return from_stable_poly(p, 1, 1, "scalar_favorite")


def _builtin_scalar_stable4() -> RationalInnerMatrix:
    p = BiPoly.from_terms([(0, 0, 4), (1, 0, -1), (0, 1, -1)])
    return from_stable_poly(p, 1, 1, "scalar_stable4")


def scalar_z2n(n: int) -> RationalInnerMatrix:
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    return from_scalar(BiPoly.monomial(0, n), BiPoly.one(), f"scalar_z2n({n})")


_BUILTINS = {
    "diag_z1z2_1": (_builtin_diag_z1z2_1,
                    "diag(z1*z2, 1); rank bound 2 is not attained"),
    "hadamard_z1z2": (_builtin_hadamard_z1z2,
                      "(1/2)[[z1+z2, z1-z2], [z1-z2, z1+z2]]"),
    "hadamard_deg21": (_builtin_hadamard_deg21,
                       "degree (2,1) variant with z1-scaled top row"),
    "scalar_z1z2": (_builtin_scalar_z1z2, "theta = z1*z2"),
    "scalar_favorite": (_builtin_scalar_favorite,
                        "(2 z1 z2 - z1 - z2)/(2 - z1 - z2); boundary singular"),
    "scalar_stable4": (_builtin_scalar_stable4,
                       "(4 z1 z2 - z1 - z2)/(4 - z1 - z2); smooth on the torus"),
}


def builtin_names() -> list[str]:
    return sorted(_BUILTINS) + ["scalar_z2n(k)"]


def builtin_descriptions() -> dict[str, str]:
    out = {name: desc for name, (_, desc) in sorted(_BUILTINS.items())}
    out["scalar_z2n(k)"] = "theta = z2**k for a nonnegative integer k"
    return out


def builtin(name: str) -> RationalInnerMatrix:
    """Return a named builtin inner function.

    Accepts the parameterized family as ``scalar_z2n(<k>)``.
    """
    name = name.strip()
    if name in _BUILTINS:
        return _BUILTINS[name][0]()
    if name.startswith("scalar_z2n(") and name.endswith(")"):
        try:
            n = int(name[len("scalar_z2n("):-1])
        except ValueError:
            raise KeyError(f"bad exponent in {name!r}") from None
        return scalar_z2n(n)
    raise KeyError(f"unknown builtin {name!r}; available: {', '.join(builtin_names())}")
