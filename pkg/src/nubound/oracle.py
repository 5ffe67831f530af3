"""Independent numerical ground truth for the separated equations.

Second-order finite differences on a uniform grid with Dirichlet ends give a
symmetric tridiagonal operator; its lowest eigenvalues come from
Sturm-sequence counting plus bisection, and two grids are combined by
Richardson extrapolation.  Nothing here imports the NU engine or the
closed-form modules.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy import integrate
from scipy.linalg import solve_banded

from .model import BarredParams, Family, SeparationData

DEFAULT_N = 4000


class OracleError(RuntimeError):
    pass


class DomainTooSmallError(OracleError):
    """Eigenvector has not decayed at the box edge; enlarge r_max."""


class QuadratureError(OracleError):
    pass


@dataclass(frozen=True)
class FDGrid:
    a: float
    b: float
    N: int

    def __post_init__(self):
        if self.N < 64:
            raise ValueError(f"FDGrid needs N >= 64 interior points, got {self.N}")
        if not self.b > self.a:
            raise ValueError("FDGrid needs b > a")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.N + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(1, self.N + 1)


@dataclass(frozen=True)
class TridiagonalOp:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=float)
        e = np.ascontiguousarray(self.offdiag, dtype=float)
        if e.shape != (max(len(d) - 1, 0),):
            raise ValueError("offdiag must have length len(diag) - 1")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @classmethod
    def from_potential(cls, grid: FDGrid, W: np.ndarray) -> "TridiagonalOp":
        """-d^2/dx^2 + W with Dirichlet ends."""
        h2 = grid.h**2
        return cls(2.0 / h2 + np.asarray(W, dtype=float), np.full(grid.N - 1, -1.0 / h2))


@njit(cache=True)
def _sturm_count(d, e2, x):
    """Number of eigenvalues strictly below x (LDL^T inertia)."""
    count = 0
    q = d[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        if q == 0.0:
            q = 1e-300
        q = d[i] - x - e2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect_lowest(d, e2, count, lo, hi):
    out = np.empty(count)
    for k in range(count):
        a = lo
        b = hi
        for _ in range(400):
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            if _sturm_count(d, e2, mid) > k:
                b = mid
            else:
                a = mid
        out[k] = 0.5 * (a + b)
        lo = a
    return out


def eigen_lowest(op: TridiagonalOp, count: int) -> list[float]:
    """The ``count`` smallest eigenvalues, bisected to machine resolution."""
    n = len(op.diag)
    if count < 1 or count > n:
        raise ValueError(f"count must be in 1..{n}, got {count}")
    e = op.offdiag
    ae = np.abs(e)
    rad = np.zeros(n)
    rad[:-1] += ae
    rad[1:] += ae
    lo = float(np.min(op.diag - rad))
    hi = float(np.max(op.diag + rad))
    pad = 1e-12 * max(1.0, abs(lo), abs(hi))
    vals = _bisect_lowest(op.diag, e * e, count, lo - pad, hi + pad)
    return [float(v) for v in vals]


def eigenvector(op: TridiagonalOp, lam: float, iters: int = 3) -> np.ndarray:
    """Unit eigenvector for an (accurate) eigenvalue by inverse iteration."""
    n = len(op.diag)
    shift = lam + 1e-10 * max(1.0, abs(lam))
    ab = np.zeros((3, n))
    ab[0, 1:] = op.offdiag
    ab[1] = op.diag - shift
    ab[2, :-1] = op.offdiag
    v = np.ones(n) / math.sqrt(n)
    for _ in range(iters):
        v = solve_banded((1, 1), ab, v, check_finite=False)
        v /= np.linalg.norm(v)
    return v


def richardson(coarse: float, fine: float, h_coarse: float, h_fine: float, order: int = 2) -> float:
    rc, rf = h_coarse**order, h_fine**order
    return (fine * rc - coarse * rf) / (rc - rf)


def _two_grid(a, b, W_fn, count, N, richardson_on, tail_check=None):
    results = []
    for n_pts in ((N, 2 * N) if richardson_on else (N,)):
        grid = FDGrid(a, b, n_pts)
        op = TridiagonalOp.from_potential(grid, W_fn(grid.nodes))
        vals = eigen_lowest(op, count)
        results.append((grid.h, vals, op))
    if tail_check is not None:
        _, vals, op = results[-1]
        tail_check(op, vals)
    if not richardson_on:
        return results[0][1]
    (hc, vc, _), (hf, vf, _) = results
    return [richardson(c, f, hc, hf) for c, f in zip(vc, vf)]


def angular_potential(bp: BarredParams, phi):
    """Bracket of the angle equation: -Phi'' + W Phi = M^2 Phi."""
    s2 = np.sin(phi) ** 2
    c2 = np.cos(phi) ** 2
    return ((bp.Dbar + bp.Bbar * c2) / s2 + (bp.Fbar + bp.Cbar * s2) / c2
            + bp.Gbar / (s2 * c2))


def angular_oracle(bp: BarredParams, count: int, N: int = DEFAULT_N,
                   richardson_on: bool = True) -> list[float]:
    """Lowest M^2 of the angle equation on (0, pi/2), Dirichlet at both ends."""
    if not 1 <= count <= 10:
        raise ValueError("angular_oracle supports 1 <= count <= 10")
    if count > N // 4:
        raise ValueError("count must not exceed N/4")
    return _two_grid(0.0, math.pi / 2, lambda x: angular_potential(bp, x), count, N, richardson_on)


def radial_potential(sd: SeparationData, r):
    if sd.family is Family.HRS:
        return sd.Lambda0 / r + sd.Lambda / r**2
    return sd.Atilde * r**2 + sd.Gamma / r**2


def radial_oracle(system: Family, sd: SeparationData, count: int, N: int = DEFAULT_N,
                  r_max: float = 50.0, check_tail: bool = True,
                  richardson_on: bool = True, tail_tol: float = 1e-8) -> list[float]:
    """Lowest scaled energies Etilde of the radial equation on (0, r_max)."""
    system = Family(system)
    if system is not sd.family:
        raise ValueError(f"separation data is for {sd.family.value}, not {system.value}")
    if count > N // 4:
        raise ValueError("count must not exceed N/4")

    def tails(op, vals):
        for lam in vals:
            v = eigenvector(op, lam)
            rel = abs(v[-1]) / np.max(np.abs(v))
            if rel > tail_tol:
                raise DomainTooSmallError(
                    f"eigenvector for Etilde={lam:.6g} has tail {rel:.2e} at r_max={r_max:g}")

    return _two_grid(0.0, r_max, lambda r: radial_potential(sd, r), count, N, richardson_on,
                     tails if check_tail else None)


def quad(f, a: float, b: float, points=None, epsrel: float = 1e-12, epsabs: float = 0.0) -> float:
    """Adaptive quadrature; raises when QUADPACK reports non-convergence."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            kw = {"points": points} if points is not None and math.isfinite(a) and math.isfinite(b) else {}
            val, _ = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=500, **kw)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc)) from exc
    return float(val)
