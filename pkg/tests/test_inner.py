import numpy as np
import pytest

from bidisklab import inner
from bidisklab.inner import (
    InnerFunctionError,
    RationalInnerMatrix,
    builtin,
    builtin_names,
    degree,
    det_degree,
    diagonal,
    from_scalar,
    from_stable_poly,
    product_one_var,
    scalar_z2n,
    swap_variables,
    unitary_conjugate,
    verify_inner_exact,
    verify_inner_grid,
)
from bidisklab.polynomials import BiPoly, MatPoly

z1 = BiPoly.monomial(1, 0)
z2 = BiPoly.monomial(0, 1)
one = BiPoly.one()


def all_builtins():
    names = [n for n in builtin_names() if "(" not in n] + ["scalar_z2n(3)"]
    return [builtin(n) for n in names]


def rand_unitary(rng, d):
    Q, R = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


# -- verification ------------------------------------------------------

def test_builtins_pass_exact_check():
    for th in all_builtins():
        check = verify_inner_exact(th)
        assert check.passed, th.label
        assert check.residual < 1e-12, th.label


def test_identity_passes_with_zero_residual():
    th = RationalInnerMatrix(2, MatPoly.identity(2), one, "I")
    check = verify_inner_exact(th)
    assert check.passed and check.residual == 0.0


def test_non_inner_fails_exact():
    Q = MatPoly([[one + z1, BiPoly.zero()], [BiPoly.zero(), one]])
    th = RationalInnerMatrix(2, Q, one, "bad")
    check = verify_inner_exact(th)
    # at tau = (1, 1) the product has a diagonal entry 4 instead of 1
    assert not check.passed
    assert check.residual >= 1.0


def test_grid_check_matches_exact_on_builtins():
    for th in all_builtins():
        ge = verify_inner_exact(th)
        gg = verify_inner_grid(th, 16)
        assert ge.passed == gg.passed, th.label
        assert gg.residual < 1e-12


def test_grid_check_flags_non_inner():
    Q = MatPoly([[one + z1, BiPoly.zero()], [BiPoly.zero(), one]])
    th = RationalInnerMatrix(2, Q, one, "bad")
    check = verify_inner_grid(th, 16)
    assert not check.passed
    assert check.residual >= 1.0  # attained near tau1 = 1


def test_grid_check_needs_two_points():
    with pytest.raises(ValueError):
        verify_inner_grid(builtin("scalar_z1z2"), 1)


def test_grid_check_dense_grid_on_deg21():
    assert verify_inner_grid(builtin("hadamard_deg21"), 64).residual <= 1e-12


def test_diag_z1z2_grid_small():
    th = diagonal([builtin("scalar_z1z2"), scalar_z2n(0)])
    assert verify_inner_grid(th, 8).residual < 1e-12


# -- degrees -----------------------------------------------------------

def test_degree_builtins():
    assert builtin("hadamard_z1z2").deg == (1, 1)
    assert builtin("hadamard_deg21").deg == (2, 1)
    assert scalar_z2n(3).deg == (0, 3)
    th = RationalInnerMatrix(2, MatPoly.identity(2), one, "I")
    assert degree(th) == (0, 0)


def test_det_degree_builtins():
    assert builtin("hadamard_z1z2").det_deg[1] == 1
    assert builtin("diag_z1z2_1").det_deg == (1, 1)
    th = RationalInnerMatrix(3, MatPoly.identity(3), one, "I")
    assert det_degree(th) == (0, 0)


def test_det_degree_deg21():
    # det Q = z1^2 z2 exactly
    assert builtin("hadamard_deg21").det_deg == (2, 1)


def test_det_degree_repeated_denominator():
    fav = builtin("scalar_favorite")
    th = diagonal([fav, fav], "fafa")
    assert th.det_deg == (2, 2)


# -- constructors ------------------------------------------------------

def test_from_scalar_monomial():
    th = from_scalar(z1 * z2, one, "m")
    assert th.d == 1 and th.deg == (1, 1)


def test_from_scalar_rejects_non_inner():
    with pytest.raises(InnerFunctionError):
        from_scalar(one + z1, one)


def test_from_stable_poly_four():
    p = BiPoly.from_terms([(0, 0, 4), (1, 0, -1), (0, 1, -1)])
    th = from_stable_poly(p, 1, 1)
    assert verify_inner_exact(th).residual < 1e-12
    expected = BiPoly.from_terms([(1, 1, 4), (0, 1, -1), (1, 0, -1)])
    assert th.Q[0, 0] == expected


def test_from_stable_poly_boundary_singular():
    p = BiPoly.from_terms([(0, 0, 2), (1, 0, -1), (0, 1, -1)])
    th = from_stable_poly(p, 1, 1)
    assert verify_inner_exact(th).passed
    # boundary zero at tau = (1, 1): both numerator and denominator vanish
    assert abs(th.p(1.0, 1.0)) < 1e-14


def test_diagonal_matches_builtin():
    th = diagonal([builtin("scalar_z1z2"), scalar_z2n(0)])
    ref = builtin("diag_z1z2_1")
    for i in range(2):
        for j in range(2):
            assert th.Q[i, j] == ref.Q[i, j]


def test_diagonal_scalar_multiple():
    th = diagonal([scalar_z2n(1), scalar_z2n(1)])
    assert th.deg == (0, 1)
    assert th.det_deg == (0, 2)


def test_diagonal_mixed_degrees():
    th = diagonal([builtin("scalar_z1z2"), scalar_z2n(2)])
    assert th.deg == (1, 2)
    assert th.det_deg == (1, 3)


def test_product_single_pair():
    rng = np.random.default_rng(0)
    U = rand_unitary(rng, 2)
    V = rand_unitary(rng, 2)
    phi = MatPoly.diag([z1, one]).left_mul(U).right_mul(V)
    psi = MatPoly.identity(2)
    th = product_one_var([(phi, psi)], "single")
    assert th.deg == (1, 0)
    assert verify_inner_exact(th).passed


def test_product_identity_factors():
    th = product_one_var([(MatPoly.identity(2), MatPoly.identity(2))])
    assert th.deg == (0, 0)


def test_product_scalar_shifts():
    th = product_one_var([(MatPoly.diag([z1, z1]), MatPoly.diag([z2, z2]))])
    assert th.deg == (1, 1)
    assert th.det_deg == (2, 2)


def test_product_rejects_mixed_variable_factor():
    with pytest.raises(InnerFunctionError):
        product_one_var([(MatPoly.diag([z1 * z2, one]), MatPoly.identity(2))])


def test_product_rejects_non_inner_factor():
    bad = MatPoly.diag([one + z1, one])
    with pytest.raises(InnerFunctionError):
        product_one_var([(bad, MatPoly.identity(2))])


def test_builtin_unknown_name():
    with pytest.raises(KeyError):
        builtin("nope")


def test_builtin_z2n_parsing():
    assert builtin("scalar_z2n(3)").deg == (0, 3)
    with pytest.raises(KeyError):
        builtin("scalar_z2n(x)")


# -- symmetries --------------------------------------------------------

def test_swap_symmetric_function():
    th = builtin("scalar_z1z2")
    sw = swap_variables(th)
    assert sw.Q[0, 0] == th.Q[0, 0]


def test_swap_monomial():
    sw = swap_variables(scalar_z2n(2))
    assert sw.deg == (2, 0)


def test_swap_reverses_degree():
    for th in all_builtins():
        assert swap_variables(th).deg == th.deg[::-1]


def test_unitary_conjugate_identity():
    th = builtin("hadamard_z1z2")
    cc = unitary_conjugate(th, np.eye(2), np.eye(2))
    for i in range(2):
        for j in range(2):
            assert cc.Q[i, j] == th.Q[i, j]


def test_unitary_conjugate_sign_flip():
    th = builtin("hadamard_z1z2")
    D = np.diag([1.0, -1.0])
    cc = unitary_conjugate(th, D, D)
    assert verify_inner_exact(cc).passed
    assert cc.deg == th.deg


def test_unitary_conjugate_preserves_det_degree():
    rng = np.random.default_rng(12)
    th = builtin("diag_z1z2_1")
    cc = unitary_conjugate(th, rand_unitary(rng, 2), rand_unitary(rng, 2))
    assert verify_inner_exact(cc).passed
    assert cc.det_deg == th.det_deg


def test_unitary_conjugate_rejects_non_unitary():
    th = builtin("hadamard_z1z2")
    with pytest.raises(ValueError):
        unitary_conjugate(th, np.diag([1.0, 2.0]), np.eye(2))


def test_det_degree_bound_on_random_families():
    rng = np.random.default_rng(4)
    for _ in range(5):
        scalars = [from_scalar(BiPoly.monomial(int(rng.integers(0, 2)),
                                               int(rng.integers(0, 3))), one)
                   for _ in range(2)]
        th = diagonal(scalars)
        m2 = th.deg[1]
        assert th.det_deg[1] <= th.d * m2


def test_origin_denominator_rejected():
    with pytest.raises(ValueError):
        RationalInnerMatrix(1, MatPoly.from_scalar(z1), z2, "pole")
