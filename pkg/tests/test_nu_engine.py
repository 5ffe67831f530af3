import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from nubound import nu_engine as nu


def angular_problem(Msq, Dbar=0.0):
    return nu.NUProblem(Polynomial([1, -2]), Polynomial([0, 2, -2]),
                        Polynomial([-Dbar, Msq + Dbar, -Msq]), (0, 1))


def test_k_candidates_zero_params():
    assert sorted(nu.k_candidates(angular_problem(4.0))) == pytest.approx([2.0, 2.5])


def test_every_branch_makes_q_a_perfect_square():
    p = angular_problem(7.3, Dbar=1.1)
    for k in nu.k_candidates(p):
        for br in nu.pi_branches(p, k):
            assert nu.perfect_square_defect(p, br) < 1e-10


def test_dirichlet_branch_of_zero_params():
    p = angular_problem(4.0)
    brs = [b for k in nu.k_candidates(p) for b in nu.pi_branches(p, k)]
    good = [b for b in brs if nu.admissible(b, nu.AdmissibilityPolicy.DIRICHLET)]
    assert len(good) == 1
    b = good[0]
    assert b.tau_prime == pytest.approx(-6)
    assert b.phi_exponents == pytest.approx((0.5, 0.5))
    assert b.rho_exponents == pytest.approx((0.5, 0.5))
    assert nu.lambda_n(p, b, 0) == pytest.approx(b.lam)


@pytest.mark.parametrize("n,expected", [(0, 4.0), (1, 16.0), (2, 36.0)])
def test_solve_spectral_angular(n, expected):
    eigs = nu.solve_spectral(angular_problem, n, nu.AdmissibilityPolicy.DIRICHLET, (0, 200))
    assert len(eigs) == 1
    e = eigs[0]
    assert e.spectral_value == pytest.approx(expected, abs=1e-9)
    assert e.family.kind == "jacobi"
    t = np.linspace(0.01, 0.99, 99)
    assert nu.eigen_residual(e, t) < 1e-8


def test_poschl_teller():
    eigs = nu.solve_spectral(lambda s: angular_problem(s, 2.0), 0, nu.AdmissibilityPolicy.DIRICHLET, (0, 100))
    assert eigs[0].spectral_value == pytest.approx(9.0, abs=1e-9)
    assert eigs[0].family.params == pytest.approx((1.5, 0.5))


def test_default_policy_admits_more_families():
    eigs = nu.solve_spectral(angular_problem, 1, nu.AdmissibilityPolicy.DEFAULT, (0, 100))
    assert [e.spectral_value for e in eigs] == pytest.approx([4.0, 9.0, 16.0])


def test_laguerre_hydrogen():
    def p_of(E):
        return nu.NUProblem(Polynomial([0]), Polynomial([0, 1]), Polynomial([0, 2, E]), (0, math.inf))
    for n in range(3):
        (e,) = nu.solve_spectral(p_of, n, nu.AdmissibilityPolicy.DIRICHLET, (-1.01, -1e-6), panels=256)
        assert e.spectral_value == pytest.approx(-1 / (n + 1) ** 2, rel=1e-10)
        assert e.family.kind == "laguerre"


def test_hermite_oscillator():
    # u'' + (E - x^2) u = 0 on the line
    def p_of(E):
        return nu.NUProblem(Polynomial([0]), Polynomial([1]), Polynomial([E, 0, -1]), (-math.inf, math.inf))
    vals = [nu.solve_spectral(p_of, n, s_range=(0, 12))[0].spectral_value for n in range(3)]
    assert vals == pytest.approx([1, 3, 5])


def test_no_root_reported():
    with pytest.raises(nu.NUError, match="no root"):
        nu.solve_spectral(angular_problem, 0, nu.AdmissibilityPolicy.DIRICHLET, (5, 10))


def test_problem_validation():
    with pytest.raises((ValueError, nu.NUError)):
        nu.NUProblem(Polynomial([0, 0, 0, 1]), Polynomial([0, 1]), Polynomial([1]), (0, 1))


def test_nu_function_derivatives_match_finite_differences():
    (e,) = nu.solve_spectral(lambda s: angular_problem(s, 1.3), 2, nu.AdmissibilityPolicy.DIRICHLET, (0, 300))
    f = nu.NUFunction(e)
    t = np.linspace(0.2, 0.8, 7)
    h = 1e-5
    u, u1, u2 = f.derivatives(t)
    assert np.allclose(u1, (f(t + h) - f(t - h)) / (2 * h), rtol=1e-6, atol=1e-8)
    assert np.allclose(u2, (f(t + h) - 2 * u + f(t - h)) / h**2, rtol=1e-4, atol=1e-5)
