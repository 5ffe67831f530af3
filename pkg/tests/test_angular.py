import math

import numpy as np
import pytest

from nubound import angular as A
from nubound import nu_engine as nu
from nubound.model import BarredParams
from nubound.oracle import angular_oracle, quad

ZERO = BarredParams()


def test_transform_coeff_examples():
    c = A.transform_coeffs(ZERO, 4)
    assert (c.alpha, c.beta, c.gamma) == (-4, 4, 0) and c.mu1 == 1 and c.mu2 == 1
    c = A.transform_coeffs(BarredParams(Dbar=2), 0)
    assert (c.alpha, c.beta, c.gamma) == (0, 2, -2) and c.mu1 == 3 and c.mu2 == 1
    c = A.transform_coeffs(BarredParams(Bbar=1), 0)
    assert (c.alpha, c.beta, c.gamma) == (-1, 2, -1)
    assert c.mu1 == pytest.approx(math.sqrt(5)) and c.mu2 == 1


def test_transform_coeffs_reproduce_the_substitution():
    """(M^2 - W(phi)) sin^2 cos^2 must equal alpha t^2 + beta t + gamma at t = sin^2."""
    bp = BarredParams(0.7, 1.1, 0.4, 2.3, 0.9)
    Msq = 13.7
    c = A.transform_coeffs(bp, Msq)
    phi = np.linspace(0.1, 1.4, 9)
    t = np.sin(phi) ** 2
    s2, c2 = np.sin(phi) ** 2, np.cos(phi) ** 2
    W = (bp.Dbar + bp.Bbar * c2) / s2 + (bp.Fbar + bp.Cbar * s2) / c2 + bp.Gbar / (s2 * c2)
    assert np.allclose((Msq - W) * t * (1 - t), c.alpha * t**2 + c.beta * t + c.gamma, rtol=1e-12)


def test_mu_combinations():
    c = A.transform_coeffs(BarredParams(0.5, 1.0, 0.25, 0.75, 0.1), 9.0)
    assert c.mu1 == pytest.approx(math.sqrt(1 + 4 * (0.5 + 0.25 + 0.1)))
    assert c.mu2 == pytest.approx(math.sqrt(1 + 4 * (1.0 + 0.75 + 0.1)))


def test_paper_coeff_examples():
    c = A.paper_coeffs(ZERO, 4)
    assert (c.alpha, c.beta, c.gamma) == (-4, 4, 0)
    c = A.paper_coeffs(BarredParams(Bbar=1), 0)
    assert (c.alpha, c.beta, c.gamma) == (1, 0, -1)
    c = A.paper_coeffs(BarredParams(Dbar=2), 0)
    assert (c.alpha, c.beta, c.gamma) == (0, -2, -2)


def test_published_msq_formula_values():
    assert A.m_squared_paper(ZERO, 0) == 3
    assert A.m_squared_paper(ZERO, 1) == 13
    assert A.m_squared_paper(BarredParams(Dbar=2), 0) == pytest.approx(7)
    with pytest.raises(ValueError):
        A.m_squared_paper(ZERO, -1)


@pytest.mark.parametrize("n0,expected", [(0, 4), (1, 16), (2, 36)])
def test_engine_zero_params(n0, expected):
    sols = A.m_squared_nu(ZERO, n0)
    assert len(sols) == 1 and sols[0].Msq == pytest.approx(expected, abs=1e-9)
    assert sols[0].method == "nu" and sols[0].branch is not None


def test_engine_matches_oracle_for_G():
    bp = BarredParams(Gbar=2)
    assert A.solve_angular(bp, 0).Msq == pytest.approx(angular_oracle(bp, 1)[0], abs=1e-6)


def test_wavefunction_zero_params():
    sol = A.solve_angular(ZERO, 0)
    Phi = A.angular_wavefunction(sol)
    phi = np.linspace(0.01, math.pi / 2 - 0.01, 101)
    # proportional to sin 2phi, peak at pi/4
    ratio = Phi(phi) / np.sin(2 * phi)
    assert np.allclose(ratio, ratio[0], rtol=1e-12)
    assert Phi(math.pi / 4) == pytest.approx(np.max(Phi(phi)), rel=1e-12)
    assert quad(lambda x: Phi(x) ** 2, 0, math.pi / 2) == pytest.approx(1, abs=1e-10)


def test_wavefunction_residuals():
    assert A.angular_residual(A.solve_angular(BarredParams(Dbar=2), 0),
                              A.angular_wavefunction(A.solve_angular(BarredParams(Dbar=2), 0))) <= 1e-8
    bp = BarredParams(2.1, 0.3, 1.7, 0.9, 2.6)
    for n0 in range(3):
        sol = A.solve_angular(bp, n0)
        assert A.angular_residual(sol, A.angular_wavefunction(sol)) <= 1e-8


def test_residual_of_trial_functions():
    f = nu.ExplicitFunction(lambda p: np.sin(2 * p), lambda p: 2 * np.cos(2 * p), lambda p: -4 * np.sin(2 * p))
    assert A.angular_residual(A.AngularSolution(0, 4.0, "oracle", ZERO), f) <= 1e-12
    assert A.angular_residual(A.AngularSolution(0, 3.0, "paper", ZERO), f) == pytest.approx(1, rel=1e-3)


def test_orthogonality():
    bp = BarredParams(0.4, 1.2, 0.8, 0.2, 1.5)
    fs = [A.angular_wavefunction(A.solve_angular(bp, n)) for n in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            ip = quad(lambda x: fs[i](x) * fs[j](x), 0, math.pi / 2, epsabs=1e-13)
            assert abs(ip) <= 1e-8


def test_exchange_symmetry():
    bp = BarredParams(0.3, 1.9, 0.7, 2.2, 0.5)
    sw = BarredParams(bp.Cbar, bp.Bbar, bp.Fbar, bp.Dbar, bp.Gbar)
    for n0 in range(2):
        assert A.solve_angular(bp, n0).Msq == pytest.approx(A.solve_angular(sw, n0).Msq, rel=1e-10)


def test_derivatives_match_finite_differences():
    sol = A.solve_angular(BarredParams(0.5, 0.5, 0.2, 0.1, 0.3), 2)
    Phi = A.angular_wavefunction(sol)
    x = np.linspace(0.2, 1.3, 9)
    h = 1e-5
    f, f1, f2 = Phi.derivatives(x)
    assert np.allclose(f1, (Phi(x + h) - Phi(x - h)) / (2 * h), rtol=1e-6, atol=1e-8)
    assert np.allclose(f2, (Phi(x + h) - 2 * f + Phi(x - h)) / h**2, rtol=1e-4, atol=1e-4)


def test_even_extension():
    Phi = A.angular_wavefunction(A.solve_angular(BarredParams(Bbar=0.5, Fbar=1.0), 1))
    x = np.linspace(0.1, 1.4, 7)
    for img in (math.pi - x, math.pi + x, 2 * math.pi - x):
        assert np.allclose(Phi(img), Phi(x), rtol=1e-10, atol=1e-14)


def test_wavefunction_requires_engine_solution():
    with pytest.raises(ValueError):
        A.angular_wavefunction(A.AngularSolution(0, 3.0, "paper", ZERO))
