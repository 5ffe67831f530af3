"""Complete 2D states Psi(r, phi) = r^(-1/2) U(r) Phi(phi).

Phi is built on (0, pi/2) and extended to the full circle evenly across every
axis, so the angular integral over (0, 2pi) is four times the quadrant value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.polynomial.legendre import leggauss

from .angular import AngularSolution, AngularWavefunction, angular_wavefunction
from .model import PotentialSpec, eval_polar
from .radial import RadialSolution, RadialWavefunction, radial_wavefunction

#: (0, pi/2) -> (0, 2pi) even extension
ANGULAR_MULTIPLICITY = 4


@dataclass(frozen=True)
class GridFunction:
    axes: tuple
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(len(a) for a in self.axes)
        if self.values.shape != shape:
            raise ValueError(f"values shape {self.values.shape} does not match axes {shape}")


@dataclass
class FullState:
    spec: PotentialSpec
    angular: AngularSolution
    radial: RadialSolution
    norm: float
    Phi: AngularWavefunction = field(repr=False)
    U: RadialWavefunction = field(repr=False)

    @property
    def r_max(self) -> float:
        return self.radial.r_max

    @property
    def energy(self) -> float:
        return self.radial.energy

    def radial_part(self, r):
        """R(r) = r^(-1/2) U(r) and its first two derivatives."""
        r = np.asarray(r, dtype=float)
        u, u1, u2 = self.U.derivatives(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            R = u / np.sqrt(r)
            R1 = u1 / np.sqrt(r) - 0.5 * u / r**1.5
            R2 = u2 / np.sqrt(r) - u1 / r**1.5 + 0.75 * u / r**2.5
        # R -> 0 at the origin because the small-r power of U exceeds 1/2
        R = np.where(r == 0, 0.0, R)
        return R, R1, R2

    def psi(self, r, phi):
        r, phi = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))
        return self.norm * self.radial_part(r)[0] * self.Phi(phi)

    def meta(self) -> dict[str, Any]:
        return {"family": self.spec.family.value, "n0": self.angular.n0, "nr": self.radial.n,
                "Msq": self.angular.Msq, "energy": self.radial.energy,
                "angular_method": self.angular.method, "radial_method": self.radial.method}


def _gauss_panels(a: float, b: float, panels: int, order: int):
    x, w = leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def norm_2d(state: FullState, panels: int = 64, order: int = 20, norm: float = 1.0) -> float:
    """Integral of Psi^2 r dr dphi over (0, r_max) x (0, 2pi) by tensor Gauss-Legendre."""
    rn, rw = _gauss_panels(0.0, state.r_max, panels, order)
    pn, pw = _gauss_panels(0.0, 2 * math.pi, 4 * panels, order)
    R = state.radial_part(rn)[0]
    P = state.Phi(pn)
    return float(norm**2 * np.sum(rw * R**2 * rn) * np.sum(pw * P**2))


def assemble(spec: PotentialSpec, angular_sol: AngularSolution, radial_sol: RadialSolution) -> FullState:
    if angular_sol.method != "nu" or radial_sol.method != "derived":
        raise ValueError("only engine-derived angular and derived radial solutions can be assembled")
    if radial_sol.sd is None or radial_sol.sd.family is not spec.family:
        raise ValueError("radial solution does not belong to this potential family")
    m_rad = radial_sol.sd.Msq
    if not abs(m_rad - angular_sol.Msq) <= 1e-12 * (1 + abs(angular_sol.Msq)):
        raise ValueError(f"mismatched Msq: angular {angular_sol.Msq!r}, radial {m_rad!r}")
    state = FullState(spec, angular_sol, radial_sol, 1.0,
                      angular_wavefunction(angular_sol), radial_wavefunction(radial_sol))
    state.norm = 1.0 / math.sqrt(norm_2d(state))
    return state


def eval_polar_grid(state: FullState, rs, phis) -> GridFunction:
    rs = np.asarray(rs, dtype=float)
    phis = np.asarray(phis, dtype=float)
    vals = state.psi(rs[:, None], phis[None, :])
    return GridFunction((rs, phis), vals, {**state.meta(), "coords": "polar"})


def psi_cartesian(state: FullState, x, y):
    """Psi(x, y) with the angular factor taken from |y|/r and |x|/r directly."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    r = np.hypot(x, y)
    safe = np.where(r == 0, 1.0, r)
    ang = state.Phi.from_sin_cos(y / safe, x / safe)
    return state.norm * state.radial_part(r)[0] * np.where(r == 0, 0.0, ang)


def eval_cartesian_grid(state: FullState, xs, ys) -> GridFunction:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    vals = psi_cartesian(state, xs[:, None], ys[None, :])
    return GridFunction((xs, ys), vals, {**state.meta(), "coords": "cartesian"})


def hamiltonian_residual(state: FullState, nr: int = 100, nphi: int = 100) -> float:
    """max |Psi_rr + Psi_r/r + Psi_phiphi/r^2 + (2m/hbar^2)(E - V) Psi| / max |Psi|
    on an nr x nphi interior grid of (0, r_max) x (0, 2pi)."""
    r = np.linspace(0.0, state.r_max, nr + 2)[1:-1]
    phi = np.linspace(0.0, 2 * math.pi, nphi + 2)[1:-1]
    R, R1, R2 = state.radial_part(r)
    P, _, P2 = state.Phi.derivatives(phi)
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    V = eval_polar(state.spec, rr, pp)
    scale = state.spec.consts.scale
    psi = R[:, None] * P[None, :]
    lap = (R2 + R1 / r)[:, None] * P[None, :] + (R / r**2)[:, None] * P2[None, :]
    res = lap + scale * (state.energy - V) * psi
    return float(np.max(np.abs(res)) / np.max(np.abs(psi)))


@dataclass(frozen=True)
class AngularMomentumReport:
    M: float
    residual_norm: float
    relative_residual: float
    expectation_real: float
    expectation_imag: float


def angular_momentum_residual(f, df, M: float, hbar: float = 1.0, npts: int = 4096) -> tuple[float, float, complex]:
    """For an angular function f on (0, 2pi): ||-i hbar f' - hbar M f||, ||f|| and
    <f| -i hbar d/dphi |f>, by the periodic midpoint rule (nodes avoid the axes,
    where the even extension has a kink)."""
    w = 2 * math.pi / npts
    phi = w * (np.arange(npts) + 0.5)
    fv = np.asarray(f(phi), dtype=complex)
    dv = np.asarray(df(phi), dtype=complex)
    lf = -1j * hbar * dv
    res = math.sqrt(w * np.sum(np.abs(lf - hbar * M * fv) ** 2))
    nrm = math.sqrt(w * np.sum(np.abs(fv) ** 2))
    expect = w * np.sum(np.conj(fv) * lf) / nrm**2
    return res, nrm, complex(expect)


def angular_momentum_check(state: FullState, npts: int = 4096) -> AngularMomentumReport:
    """Tests whether the real state is an eigenfunction of -i hbar d/dphi with
    eigenvalue hbar M.  The radial factor is common to both sides, so the 2D
    residual reduces to the angular one scaled by the radial norm."""
    hbar = state.spec.consts.hbar
    M = state.angular.M

    def f(phi):
        return state.Phi.derivatives(phi)[0]

    def df(phi):
        return state.Phi.derivatives(phi)[1]

    res, nrm, expect = angular_momentum_residual(f, df, M, hbar, npts)
    # include the radial norm so the figure refers to the full Psi
    rn, rw = _gauss_panels(0.0, state.r_max, 64, 20)
    rad = state.norm * math.sqrt(float(np.sum(rw * state.radial_part(rn)[0] ** 2 * rn)))
    rel = res / (hbar * M * nrm) if M > 0 else res / nrm
    return AngularMomentumReport(M, res * rad, rel, expect.real, expect.imag)
