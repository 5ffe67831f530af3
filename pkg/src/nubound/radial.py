"""Radial equations for the two families.

HRS (Coulomb type):   U'' + (Et - L0/r - L/r^2) U = 0
RSO (oscillator):     U'' + (Et - A r^2 - G/r^2) U = 0

where Et = (2m/hbar^2)(E - offset).  Each family has a verbatim evaluation
of the published energy formula (``*_paper``) and a closed form from the
standard Frobenius/NU treatment (``*_derived``).  Wavefunctions are only
built from the derived forms; ``*_paper`` wavefunction variants exist so the
published exponents can be residual-tested.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from . import nu_engine as nu
from . import specfun
from .model import Family, KratzerParams, OscParams, PhysConst, SeparationData
from .oracle import quad, radial_potential

#: envelope level at which the box edge is placed for HRS states
TAIL_LEVEL = 1e-14


class RadialError(ValueError):
    pass


@dataclass(frozen=True)
class NoBoundState:
    """The radial problem has no normalizable state (repulsive Coulomb tail)."""

    family: Family
    n: int
    reason: str


@dataclass(frozen=True)
class RadialSolution:
    family: Family
    n: int
    energy: float
    Etilde: float
    method: str  # "paper" | "derived" | "oracle"
    sd: Optional[SeparationData] = field(default=None, repr=False)
    exponent: float = float("nan")  # small-r power of U
    decay: float = float("nan")  # kappa_b (HRS) or sqrt(Atilde) (RSO)
    r_max: float = float("nan")
    norm_const: float = float("nan")


RadialOutcome = Union[RadialSolution, NoBoundState]


def _scale(sd: SeparationData, pc: Optional[PhysConst]) -> float:
    return pc.scale if pc is not None else sd.scale


# ------------------------------------------------------------------ energies

def hrs_energy_paper(kp: KratzerParams, Msq: float, n1: int, pc: PhysConst = PhysConst()) -> float:
    """Published Kratzer-type energy, second (De, re) line, verbatim."""
    if n1 < 0:
        raise ValueError("n1 must be >= 0")
    s = pc.scale
    rad = s * kp.De * kp.re**2 + Msq
    if rad < 0:
        raise RadialError(f"negative radicand {rad:g} in the published HRS energy")
    return kp.De - s * kp.De**2 * kp.re**2 / ((n1 + 0.5) + 0.5 * math.sqrt(rad)) ** 2


def hrs_energy_paper_lambda_form(sd: SeparationData, n1: int, pc: Optional[PhysConst] = None) -> float:
    """Published Kratzer-type energy, first (Lambda) line, verbatim."""
    if 1 + 4 * sd.Lambda < 0:
        raise RadialError("negative radicand 1 + 4 Lambda")
    s = _scale(sd, pc)
    return sd.offset - (sd.Lambda0**2 / (4 * s)) / ((n1 + 0.5) + 0.5 * math.sqrt(1 + 4 * sd.Lambda)) ** 2


def hrs_etilde_derived(sd: SeparationData, n1: int) -> float:
    if sd.Lambda0 >= 0:
        raise RadialError("Lambda0 >= 0: no bound state")
    if sd.Lambda < -0.25:
        raise RadialError("Lambda < -1/4: fall to the centre")
    return -(sd.Lambda0**2 / 4.0) / ((n1 + 0.5) + 0.5 * math.sqrt(1 + 4 * sd.Lambda)) ** 2


def hrs_energy_derived(sd: SeparationData, n1: int, pc: Optional[PhysConst] = None) -> Union[float, NoBoundState]:
    """E = offset + Et/scale with Et = -(L0^2/4) [(n+1/2) + sqrt(1+4L)/2]^-2."""
    if n1 < 0:
        raise ValueError("n1 must be >= 0")
    if sd.Lambda0 >= 0:
        return NoBoundState(Family.HRS, n1, "Lambda0 >= 0 (repulsive Coulomb term)")
    return sd.offset + hrs_etilde_derived(sd, n1) / _scale(sd, pc)


def rso_energy_paper(op: OscParams, Msq: float, n2: int, pc: PhysConst = PhysConst()) -> float:
    """Published oscillator energy, second (kappa, r0) line, verbatim."""
    if n2 < 0:
        raise ValueError("n2 must be >= 0")
    m, hb = pc.mass, pc.hbar
    rad = m * op.kappa * op.r0**4 / (4 * hb**2) + Msq
    if rad < 0:
        raise RadialError(f"negative radicand {rad:g} in the published RSO energy")
    return op.kappa * op.r0**2 / 8 - 0.5 * hb * math.sqrt(op.kappa / m) * ((2 * n2 + 1) + math.sqrt(rad))


def rso_energy_paper_gamma_form(sd: SeparationData, n2: int, pc: PhysConst = PhysConst()) -> float:
    """Published oscillator energy, first (Gamma) line, with omega = sqrt(Atilde)."""
    if 1 + 4 * sd.Gamma < 0:
        raise RadialError("negative radicand 1 + 4 Gamma")
    omega = math.sqrt(sd.Atilde)
    return sd.offset - pc.hbar * omega * ((2 * n2 + 1) + 0.5 * math.sqrt(1 + 4 * sd.Gamma))


def rso_etilde_derived(sd: SeparationData, n2: int) -> float:
    if not sd.Atilde > 0:
        raise RadialError("Atilde must be positive")
    if sd.Gamma < -0.25:
        raise RadialError("Gamma < -1/4: fall to the centre")
    return math.sqrt(sd.Atilde) * ((4 * n2 + 2) + math.sqrt(1 + 4 * sd.Gamma))


def rso_energy_derived(sd: SeparationData, V0: Optional[float], n2: int,
                       pc: Optional[PhysConst] = None) -> float:
    """E = V0 + Et/scale with Et = sqrt(A) [(4n+2) + sqrt(1+4G)]."""
    if n2 < 0:
        raise ValueError("n2 must be >= 0")
    offset = sd.offset if V0 is None else V0
    return offset + rso_etilde_derived(sd, n2) / _scale(sd, pc)


# --------------------------------------------------------------- exponents

def hrs_small_r_exponent(sd: SeparationData) -> float:
    return 0.5 * (1 + math.sqrt(1 + 4 * sd.Lambda))


def rso_small_r_exponent(sd: SeparationData) -> float:
    return 0.5 * (1 + math.sqrt(1 + 4 * sd.Gamma))


def rso_laguerre_index(sd: SeparationData) -> float:
    return 0.5 * math.sqrt(1 + 4 * sd.Gamma)


def paper_hrs_exponent(sd: SeparationData) -> float:
    """Printed small-r power p of the HRS radial function."""
    return 1 + 2 * math.sqrt(1 + 4 * sd.Lambda)


# ------------------------------------------------------------------ box size

def _envelope_edge(power: float, kappa: float, level: float = TAIL_LEVEL) -> float:
    """Smallest r beyond the peak where r^power e^{-kappa r} is ``level`` of its peak."""
    r_pk = power / kappa if power > 0 else 1.0 / kappa
    log_pk = power * math.log(r_pk) - kappa * r_pk

    def g(r):
        return power * math.log(r) - kappa * r - log_pk - math.log(level)

    hi = 2 * r_pk + 1.0 / kappa
    while g(hi) > 0:
        hi *= 2
    return brentq(g, r_pk, hi)


def hrs_r_max(sd: SeparationData, n1: int, re: float = 0.0) -> float:
    """40 max(re, 1/kappa_b), widened until the envelope has decayed to 1e-14."""
    kb = math.sqrt(-hrs_etilde_derived(sd, n1))
    base = 40.0 * max(re, 1.0 / kb)
    return max(base, _envelope_edge(n1 + hrs_small_r_exponent(sd), kb))


def rso_r_max(sd: SeparationData, n2: int) -> float:
    return 12.0 * sd.Atilde ** -0.25 * math.sqrt(2 * n2 + rso_laguerre_index(sd) + 2)


# ------------------------------------------------------------ wavefunctions

class RadialWavefunction:
    """U(r) = norm * r^a exp(-b r^c) L_n^(alpha)(g r^c), c in {1, 2}, with
    analytic first and second derivatives."""

    def __init__(self, n: int, a: float, b: float, c: int, alpha: float, g: float, norm: float = 1.0):
        if c not in (1, 2):
            raise ValueError("only c = 1 or c = 2 are supported")
        self.n, self.a, self.b, self.c, self.alpha, self.g = n, a, b, c, alpha, g
        self.norm = norm

    def derivatives(self, r):
        r = np.asarray(r, dtype=float)
        n, a, b, c, al, g = self.n, self.a, self.b, self.c, self.alpha, self.g
        x = g * r**c
        L = specfun.laguerre(n, al, x)
        L1 = specfun.laguerre_deriv(n, al, x, 1)
        L2 = specfun.laguerre_deriv(n, al, x, 2)
        with np.errstate(all="ignore"):
            if c == 1:
                x1, x2 = g + 0.0 * r, 0.0 * r
                l1 = a / r - b
                l2 = -a / r**2
            else:
                x1, x2 = 2 * g * r, 2 * g + 0.0 * r
                l1 = a / r - 2 * b * r
                l2 = -a / r**2 - 2 * b
            p1 = L1 * x1
            p2 = L2 * x1 * x1 + L1 * x2
            env = np.exp(a * np.log(r) - b * r**c)
            u = env * L
            u1 = env * (l1 * L + p1)
            u2 = env * ((l1 * l1 + l2) * L + 2 * l1 * p1 + p2)
        return self.norm * u, self.norm * u1, self.norm * u2

    def __call__(self, r):
        v = self.derivatives(r)[0]
        return v[()] if np.ndim(v) == 0 else v

    @property
    def peak_guess(self) -> float:
        if self.c == 1:
            return (self.a + self.n) / self.b
        return math.sqrt((self.a + 2 * self.n) / (2 * self.b))


def _normalize(U: RadialWavefunction, r_max: float) -> float:
    pk = min(U.peak_guess, 0.5 * r_max)
    val = quad(lambda r: float(U(r)) ** 2, 0.0, r_max, points=[pk])
    if not (val > 0 and math.isfinite(val)):
        raise RadialError("radial function is not normalizable on (0, r_max)")
    return 1.0 / math.sqrt(val)


def solve_hrs(sd: SeparationData, n1: int, pc: Optional[PhysConst] = None,
              re: float = 0.0, r_max: Optional[float] = None) -> RadialOutcome:
    """Derived HRS state with normalization on (0, r_max)."""
    if sd.family is not Family.HRS:
        raise ValueError("separation data is not for the HRS family")
    if sd.Lambda0 >= 0:
        return NoBoundState(Family.HRS, n1, "Lambda0 >= 0 (repulsive Coulomb term)")
    Et = hrs_etilde_derived(sd, n1)
    s1 = hrs_small_r_exponent(sd)
    kb = math.sqrt(-Et)
    rm = r_max if r_max is not None else hrs_r_max(sd, n1, re)
    U = RadialWavefunction(n1, s1, kb, 1, 2 * s1 - 1, 2 * kb)
    return RadialSolution(Family.HRS, n1, sd.offset + Et / _scale(sd, pc), Et, "derived", sd,
                          exponent=s1, decay=kb, r_max=rm, norm_const=_normalize(U, rm))


def solve_rso(sd: SeparationData, n2: int, pc: Optional[PhysConst] = None,
              r_max: Optional[float] = None) -> RadialSolution:
    if sd.family is not Family.RSO:
        raise ValueError("separation data is not for the RSO family")
    Et = rso_etilde_derived(sd, n2)
    s = rso_small_r_exponent(sd)
    w = math.sqrt(sd.Atilde)
    rm = r_max if r_max is not None else rso_r_max(sd, n2)
    U = RadialWavefunction(n2, s, 0.5 * w, 2, rso_laguerre_index(sd), w)
    return RadialSolution(Family.RSO, n2, sd.offset + Et / _scale(sd, pc), Et, "derived", sd,
                          exponent=s, decay=w, r_max=rm, norm_const=_normalize(U, rm))


def radial_wavefunction(sol: RadialSolution) -> RadialWavefunction:
    if sol.method != "derived" or sol.sd is None:
        raise ValueError("wavefunctions are only built from derived solutions")
    sd = sol.sd
    if sol.family is Family.HRS:
        U = RadialWavefunction(sol.n, sol.exponent, sol.decay, 1, 2 * sol.exponent - 1, 2 * sol.decay)
    else:
        U = RadialWavefunction(sol.n, sol.exponent, 0.5 * sol.decay, 2, rso_laguerre_index(sd), sol.decay)
    U.norm = sol.norm_const if math.isfinite(sol.norm_const) else _normalize(U, sol.r_max)
    return U


def hrs_wavefunction(sd: SeparationData, n1: int, pc: Optional[PhysConst] = None) -> RadialWavefunction:
    sol = solve_hrs(sd, n1, pc)
    if isinstance(sol, NoBoundState):
        raise RadialError(sol.reason)
    return radial_wavefunction(sol)


def rso_wavefunction(sd: SeparationData, V0: Optional[float], n2: int,
                     pc: Optional[PhysConst] = None) -> RadialWavefunction:
    return radial_wavefunction(solve_rso(sd, n2, pc))


def hrs_wavefunction_paper(sd: SeparationData, n1: int) -> RadialWavefunction:
    """Printed form r^p exp(-kappa_b r) L_n^p(r), unnormalized."""
    kb = math.sqrt(-hrs_etilde_derived(sd, n1))
    p = paper_hrs_exponent(sd)
    return RadialWavefunction(n1, p, kb, 1, p, 1.0)


def rso_wavefunction_paper(sd: SeparationData, n2: int) -> RadialWavefunction:
    """Printed form s^(zeta/4) exp(-sqrt(A) s/2) L_n^q(s) with s = r^2, unnormalized."""
    zeta = 1 + math.sqrt(1 + 4 * sd.Gamma)
    return RadialWavefunction(n2, zeta / 2, 0.5 * math.sqrt(sd.Atilde), 2, (zeta - 1) / 2, 1.0)


def radial_residual(system: Family, sd: SeparationData, Etilde: float, U,
                    r_max: float, npts: int = 500) -> float:
    """max |U'' + (Et - W) U| / max |U| on log-spaced points in (0, r_max)."""
    system = Family(system)
    if system is not sd.family:
        raise ValueError("separation data does not match the requested system")
    r = np.geomspace(1e-4 * r_max, r_max, npts)
    f, _, f2 = U.derivatives(r)
    res = f2 + (Etilde - radial_potential(sd, r)) * f
    return float(np.max(np.abs(res)) / np.max(np.abs(f)))


# --------------------------------------------------------- NU cross-check

def hrs_problem(sd: SeparationData):
    """Et -> NUProblem for the HRS equation in r (sigma = r)."""
    def p_of(Et: float) -> nu.NUProblem:
        return nu.NUProblem(Polynomial([0.0]), Polynomial([0.0, 1.0]),
                            Polynomial([-sd.Lambda, -sd.Lambda0, Et]), (0.0, math.inf))
    return p_of


def rso_problem(sd: SeparationData):
    """Et -> NUProblem for the RSO equation in z = r^2 (sigma = 2z)."""
    def p_of(Et: float) -> nu.NUProblem:
        return nu.NUProblem(Polynomial([1.0]), Polynomial([0.0, 2.0]),
                            Polynomial([-sd.Gamma, Et, -sd.Atilde]), (0.0, math.inf))
    return p_of


def etilde_nu(sd: SeparationData, n: int) -> float:
    """Scaled energy from the generic NU engine (independent of the closed forms).

    U must vanish at r = 0, so the strict (Dirichlet) admissibility policy is used.
    """
    if sd.family is Family.HRS:
        if sd.Lambda0 >= 0:
            raise RadialError("Lambda0 >= 0: no bound state")
        top = sd.Lambda0**2 / (2 * n + 1) ** 2
        eigs = nu.solve_spectral(hrs_problem(sd), n, nu.AdmissibilityPolicy.DIRICHLET,
                                s_range=(-1.01 * top, -1e-9 * top), panels=256)
    else:
        top = math.sqrt(sd.Atilde) * (4 * n + 4 + 2 * math.sqrt(1 + 4 * max(sd.Gamma, 0.0))) * 1.5
        eigs = nu.solve_spectral(rso_problem(sd), n, nu.AdmissibilityPolicy.DIRICHLET, s_range=(0.0, top))
    if len(eigs) != 1:
        raise nu.NUError(f"expected one admissible radial solution, got {len(eigs)}")
    return eigs[0].spectral_value
