"""Angle equation on (0, pi/2) in the variable t = sin^2(phi).

Three routes to the separation constant M^2 are provided:

* ``m_squared_paper`` evaluates the published closed form verbatim,
* ``m_squared_nu`` quantizes through the generic NU engine,
* the finite-difference oracle lives in :mod:`nubound.oracle`.

Only NU-derived solutions are turned into wavefunctions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from . import nu_engine as nu
from .model import BarredParams
from .oracle import angular_potential, quad

HALF_PI = math.pi / 2


def _sqrt_or_nan(x: float) -> float:
    return math.sqrt(x) if x >= 0 else float("nan")


@dataclass(frozen=True)
class AngularCoeffs:
    alpha: float
    beta: float
    gamma: float

    @property
    def beta1(self) -> float:
        return -4.0 * self.gamma

    @property
    def beta2(self) -> float:
        return -4.0 * (self.gamma + self.alpha + self.beta)

    @property
    def mu1(self) -> float:
        return _sqrt_or_nan(1.0 + self.beta1)

    @property
    def mu2(self) -> float:
        return _sqrt_or_nan(1.0 + self.beta2)

    @property
    def delta(self) -> float:
        """Exponent parameter as printed with the published wavefunction."""
        return 1.0 + (self.mu1 + self.mu2) / 4.0


def transform_coeffs(bp: BarredParams, Msq: float) -> AngularCoeffs:
    """Coefficients of sigma_tilde = alpha t^2 + beta t + gamma from expanding
    (M^2 - W) t (1 - t) with t = sin^2(phi)."""
    return AngularCoeffs(
        alpha=-(Msq + bp.Bbar + bp.Cbar),
        beta=Msq + bp.Dbar + 2.0 * bp.Bbar - bp.Fbar,
        gamma=-(bp.Bbar + bp.Dbar + bp.Gbar),
    )


def paper_coeffs(bp: BarredParams, Msq: float) -> AngularCoeffs:
    """The alpha, beta, gamma exactly as printed (kept for the discrepancy report)."""
    return AngularCoeffs(
        alpha=-Msq + bp.Bbar - bp.Cbar,
        beta=Msq - bp.Dbar - bp.Fbar,
        gamma=-(bp.Bbar + bp.Dbar + bp.Gbar),
    )


def paper_k_quadratic(c: AngularCoeffs) -> tuple[float, float, float]:
    """Coefficients (1, b, c) of the printed quadratic for k."""
    b = -c.beta - 2.0 * c.gamma - 0.5
    cc = 0.25 * (c.beta**2 + 2.0 * c.beta + c.alpha + 4.0 * c.gamma * (1.0 - c.alpha))
    return 1.0, b, cc


def paper_k_roots(c: AngularCoeffs) -> tuple[float, float]:
    """Printed double roots (k1, k2) = centre -/+ sqrt(...)/4."""
    centre = c.gamma + c.beta / 2.0 + 0.25
    rad = (1.0 - 4.0 * c.gamma) * (1.0 - 4.0 * (c.gamma + c.alpha + c.beta))
    half = 0.25 * _sqrt_or_nan(rad)
    return centre - half, centre + half


def paper_pi_polys(c: AngularCoeffs) -> dict[str, Polynomial]:
    """The four printed pi(t) polynomials (pi_1..pi_4)."""
    s1 = _sqrt_or_nan(1.0 - 4.0 * c.gamma)
    s2 = _sqrt_or_nan(1.0 - 4.0 * (c.gamma + c.alpha + c.beta))
    base = Polynomial([0.5, -1.0])
    inner12 = Polynomial([-s1, s1 - s2])
    inner34 = Polynomial([-s1, s1 + s2])
    return {
        "pi1": base + inner12 / 4, "pi2": base - inner12 / 4,
        "pi3": base + inner34 / 4, "pi4": base - inner34 / 4,
    }


def m_squared_paper(bp: BarredParams, n0: int) -> float:
    """Published closed form for M^2, evaluated verbatim."""
    if n0 < 0:
        raise ValueError("n0 must be >= 0")
    r1 = 1.0 + 4.0 * (bp.Bbar + bp.Dbar + bp.Gbar)
    r2 = 1.0 + 4.0 * (bp.Cbar + bp.Fbar + bp.Gbar)
    if r1 < 0 or r2 < 0:
        raise ValueError("negative radicand in the published M^2 formula")
    m = 2 * n0 + 1
    return ((bp.Dbar + bp.Fbar + 2.0 * (bp.Bbar + bp.Gbar))
            + 0.5 * (-1.0 + math.sqrt(r1 * r2))
            + (m * (m + 0.5 * (math.sqrt(r1) + math.sqrt(r2))) + 1.0))


def angular_problem(bp: BarredParams):
    """M^2 -> NUProblem for the transformed angle equation."""
    tau_tilde = Polynomial([1.0, -2.0])
    sigma = Polynomial([0.0, 2.0, -2.0])

    def p_of(Msq: float) -> nu.NUProblem:
        c = transform_coeffs(bp, Msq)
        return nu.NUProblem(tau_tilde, sigma, Polynomial([c.gamma, c.beta, c.alpha]), (0.0, 1.0))

    return p_of


def spectral_bracket(bp: BarredParams, n0: int) -> tuple[float, float]:
    return 0.0, (4 * n0 + 10 + bp.total) ** 2


@dataclass(frozen=True)
class AngularSolution:
    n0: int
    Msq: float
    method: str  # "paper" | "nu" | "oracle"
    params: BarredParams
    eigen: Optional[nu.NUEigen] = None
    norm_const: float = float("nan")

    @property
    def branch(self) -> Optional[nu.NUBranch]:
        return self.eigen.branch if self.eigen is not None else None

    @property
    def M(self) -> float:
        return math.sqrt(self.Msq) if self.Msq >= 0 else float("nan")


def m_squared_nu(bp: BarredParams, n0: int,
                 policy: nu.AdmissibilityPolicy = nu.AdmissibilityPolicy.DIRICHLET) -> list[AngularSolution]:
    eigs = nu.solve_spectral(angular_problem(bp), n0, policy, spectral_bracket(bp, n0))
    return [AngularSolution(n0, e.spectral_value, "nu", bp, eigen=e) for e in eigs]


def solve_angular(bp: BarredParams, n0: int) -> AngularSolution:
    """The Dirichlet-family NU solution with its normalization constant filled in."""
    sols = m_squared_nu(bp, n0)
    if len(sols) != 1:
        raise nu.NUError(f"expected one Dirichlet solution for n0={n0}, got {len(sols)}")
    return normalized(sols[0])


class AngularWavefunction:
    """Phi(phi) = norm * sin^(2 e0) cos^(2 e1) y_n(sin^2 phi).

    The t-factors t^e0 (1-t)^e1 are rewritten in phi so that derivatives near
    the axes do not suffer from cancellation in 1 - sin^2.  Using |sin| and
    |cos| makes the function even about every multiple of pi/2, which is the
    reflective extension to the full circle.
    """

    def __init__(self, eigen: nu.NUEigen, norm: float = 1.0):
        br = eigen.branch
        if br.phi_poly.degree() > 0 or abs(br.phi_poly.coef[0]) > 0:
            raise ValueError("angular branch with an exponential factor is not supported")
        self.eigen = eigen
        self.e0, self.e1 = br.phi_exponents
        self.norm = norm

    def derivatives(self, phi):
        phi = np.asarray(phi, dtype=float)
        s, c = np.abs(np.sin(phi)), np.abs(np.cos(phi))
        sgn = np.sign(np.sin(phi) * np.cos(phi))
        t = s * s
        fam, n = self.eigen.family, self.eigen.n
        y, y1, y2 = (fam.evaluate(n, t, k) for k in range(3))
        # derivatives of y(t(phi)) with t' = sin 2phi, t'' = 2 cos 2phi
        dt = np.sin(2 * phi)
        ddt = 2 * np.cos(2 * phi)
        p1 = y1 * dt
        p2 = y2 * dt * dt + y1 * ddt
        a, b = 2 * self.e0, 2 * self.e1
        with np.errstate(divide="ignore", invalid="ignore"):
            g = s**a * c**b
            # log-derivatives of |sin|^a |cos|^b (odd in the sign of sin*cos)
            l1 = sgn * (a * c / s - b * s / c)
            l2 = -a / (s * s) - b / (c * c)
            f = g * y
            f1 = g * (l1 * y + p1)
            f2 = g * ((l1 * l1 + l2) * y + 2 * l1 * p1 + p2)
        on_axis = (s == 0) | (c == 0)
        if np.any(on_axis):
            f1 = np.where(on_axis, 0.0, f1)
            f2 = np.where(on_axis, np.nan, f2)
        return self.norm * f, self.norm * f1, self.norm * f2

    def __call__(self, phi):
        v = self.derivatives(phi)[0]
        return v[()] if np.ndim(v) == 0 else v

    def from_sin_cos(self, s, c):
        """Value from |sin phi| and |cos phi| directly (exact zeros on the axes)."""
        s, c = np.abs(np.asarray(s, dtype=float)), np.abs(np.asarray(c, dtype=float))
        y = self.eigen.family.evaluate(self.eigen.n, s * s)
        return self.norm * s ** (2 * self.e0) * c ** (2 * self.e1) * y


def _norm_const(eigen: nu.NUEigen) -> float:
    f = AngularWavefunction(eigen)
    integral = quad(lambda x: float(f(x)) ** 2, 0.0, HALF_PI)
    return 1.0 / math.sqrt(integral)


def normalized(sol: AngularSolution) -> AngularSolution:
    if sol.eigen is None:
        raise ValueError("only NU-derived solutions carry wavefunctions")
    return AngularSolution(sol.n0, sol.Msq, sol.method, sol.params, sol.eigen, _norm_const(sol.eigen))


def angular_wavefunction(sol: AngularSolution) -> AngularWavefunction:
    if sol.method != "nu" or sol.eigen is None:
        raise ValueError("wavefunctions are only built from NU-derived solutions")
    norm = sol.norm_const if math.isfinite(sol.norm_const) else _norm_const(sol.eigen)
    return AngularWavefunction(sol.eigen, norm)


def angular_residual(sol: AngularSolution, Phi, npts: int = 500) -> float:
    """max |Phi'' + (M^2 - W) Phi| / max |Phi| over interior points of (0, pi/2).

    ``Phi`` is anything with a ``derivatives(phi) -> (f, f', f'')`` method.
    """
    phi = np.linspace(0.0, HALF_PI, npts + 2)[1:-1]
    f, _, f2 = Phi.derivatives(phi)
    res = f2 + (sol.Msq - angular_potential(sol.params, phi)) * f
    return float(np.max(np.abs(res)) / np.max(np.abs(f)))


def paper_angular_exponent(bp: BarredParams, Msq: float) -> float:
    """Per-factor exponent delta/2 of [t(1-t)] in the printed wavefunction."""
    return transform_coeffs(bp, Msq).delta / 2.0
