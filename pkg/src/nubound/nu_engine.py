"""Generic Nikiforov-Uvarov machinery for hypergeometric-type equations

    u'' + (tau_tilde / sigma) u' + (sigma_tilde / sigma^2) u = 0

with deg tau_tilde <= 1 and deg sigma, deg sigma_tilde <= 2.

The engine never relies on a hand-factored square root: the admissible
``k`` are the values that make

    Q(t; k) = ((sigma' - tau_tilde) / 2)^2 + k sigma - sigma_tilde

a perfect square in ``t`` (vanishing discriminant), and ``pi`` is
``(sigma' - tau_tilde)/2 +- sqrt(Q)`` with ``sqrt(Q)`` reduced to an exact
linear polynomial.  Quantization is ``lambda = k + pi'`` equal to
``lambda_n = -n tau' - n (n - 1) sigma'' / 2``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from . import specfun

log = logging.getLogger(__name__)

_TOL = 1e-10


class NUError(RuntimeError):
    """The NU procedure could not produce an admissible solution."""


class AdmissibilityPolicy(Enum):
    #: strictly positive phi-exponent where the equation is singular, >= 0 elsewhere
    DEFAULT = "default"
    #: strictly positive phi-exponent at every finite root of sigma
    DIRICHLET = "dirichlet"


def _poly(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    return Polynomial(np.atleast_1d(np.asarray(p, dtype=float)))


def _coef(p: Polynomial, n: int = 3) -> np.ndarray:
    c = np.zeros(n)
    pc = p.coef[:n]
    c[: len(pc)] = pc
    return c


def _degree(p: Polynomial, tol: float = 0.0) -> int:
    c = p.coef
    scale = max(1.0, float(np.max(np.abs(c)))) if len(c) else 1.0
    for i in range(len(c) - 1, -1, -1):
        if abs(c[i]) > tol * scale:
            return i
    return 0


@dataclass(frozen=True)
class NUProblem:
    tau_tilde: Polynomial
    sigma: Polynomial
    sigma_tilde: Polynomial
    domain: tuple[float, float]

    def __post_init__(self):
        for name, maxdeg in (("tau_tilde", 1), ("sigma", 2), ("sigma_tilde", 2)):
            p = _poly(getattr(self, name))
            object.__setattr__(self, name, p)
            if _degree(p, 1e-15) > maxdeg:
                raise ValueError(f"{name} must have degree <= {maxdeg}")
        t0, t1 = self.domain
        if not t0 < t1:
            raise ValueError(f"empty domain {self.domain}")
        lo = t0 if math.isfinite(t0) else min(t1, 0.0) - 10.0
        hi = t1 if math.isfinite(t1) else max(t0, 0.0) + 10.0
        probe = np.linspace(lo, hi, 9)[1:-1]
        if np.any(self.sigma(probe) <= 0):
            raise ValueError("sigma must be positive on the open domain")

    @property
    def sigma_roots(self) -> tuple[float, ...]:
        """Real roots of sigma, sorted (empty for constant sigma)."""
        deg = _degree(self.sigma, 1e-15)
        if deg == 0:
            return ()
        c = _coef(self.sigma)
        if deg == 1:
            return (-c[0] / c[1],)
        disc = c[1] ** 2 - 4 * c[2] * c[0]
        if disc <= 0:
            raise ValueError("quadratic sigma must have two distinct real roots")
        sq = math.sqrt(disc)
        r = sorted(((-c[1] - sq) / (2 * c[2]), (-c[1] + sq) / (2 * c[2])))
        return tuple(r)

    def q_coefficients(self, k: float) -> np.ndarray:
        """(c, b, a) of Q(t; k) = a t^2 + b t + c."""
        half = (self.sigma.deriv() - self.tau_tilde) / 2
        return _coef(half * half + k * self.sigma - self.sigma_tilde)

    def residual_scale(self) -> float:
        c = np.concatenate([_coef(self.tau_tilde), _coef(self.sigma), _coef(self.sigma_tilde)])
        return max(1.0, float(np.max(np.abs(c))))


@dataclass(frozen=True)
class PolynomialFamily:
    """Classical family of y_n with the affine argument map x = scale * t + shift."""

    kind: str  # "jacobi" | "laguerre" | "hermite"
    params: tuple[float, ...]
    scale: float
    shift: float

    def evaluate(self, n: int, t, deriv: int = 0):
        x = self.scale * np.asarray(t, dtype=float) + self.shift
        if self.kind == "jacobi":
            a, b = self.params
            v = specfun.jacobi(n, a, b, x) if deriv == 0 else specfun.jacobi_deriv(n, a, b, x, deriv)
        elif self.kind == "laguerre":
            (a,) = self.params
            x = np.maximum(x, 0.0)
            v = specfun.laguerre(n, a, x) if deriv == 0 else specfun.laguerre_deriv(n, a, x, deriv)
        else:
            v = specfun.hermite(n, x) if deriv == 0 else specfun.hermite_deriv(n, x, deriv)
        return np.asarray(v) * self.scale**deriv


@dataclass(frozen=True)
class NUBranch:
    k: float
    pi: Polynomial
    tau: Polynomial
    tau_prime: float
    lam: float
    #: exponents of |t - t0| and |t1 - t| in phi; missing endpoints carry 0
    phi_exponents: tuple[float, float]
    #: polynomial g with phi = |t-t0|^e0 |t1-t|^e1 exp(g(t))
    phi_poly: Polynomial
    rho_exponents: tuple[float, float]
    rho_poly: Polynomial
    #: endpoints where sigma_tilde does not vanish (double pole in the equation)
    singular: tuple[bool, bool]
    #: number of finite roots of sigma (2 Jacobi, 1 Laguerre, 0 Hermite)
    n_roots: int = 2
    label: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class NUEigen:
    n: int
    spectral_value: float
    branch: NUBranch
    family: PolynomialFamily
    problem: NUProblem = field(repr=False)


# ---------------------------------------------------------------- k and pi

def _signed_k_roots(p: NUProblem) -> Optional[tuple[float, float]]:
    """(k_-, k_+) zeroing the discriminant of Q in t; None if complex."""
    c0 = p.q_coefficients(0.0)
    c1 = p.q_coefficients(1.0) - c0  # k-slopes of (c, b, a)
    (cc, bc, ac), (cs, bs, as_) = c0, c1
    # disc(k) = (bc + k bs)^2 - 4 (ac + k as)(cc + k cs)
    A = bs * bs - 4 * as_ * cs
    B = 2 * bc * bs - 4 * (ac * cs + cc * as_)
    C = bc * bc - 4 * ac * cc
    scale = max(abs(A), abs(B), abs(C), 1e-300)
    if abs(A) <= 1e-14 * scale:
        if abs(B) <= 1e-14 * scale:
            return None
        k = -C / B
        return (k, k)
    d = B * B - 4 * A * C
    if d < -1e-12 * max(B * B, abs(4 * A * C), 1e-300):
        log.debug("no real k: discriminant of the k-quadratic is %g", d)
        return None
    sq = math.sqrt(max(d, 0.0))
    # larger-magnitude root first, then Vieta, for accuracy
    q = -0.5 * (B + math.copysign(sq, B)) if B != 0 else -0.5 * sq
    if q == 0:
        return (0.0, 0.0)
    r1, r2 = q / A, C / q
    lo, hi = sorted((r1, r2))
    return (lo, hi)


def k_candidates(p: NUProblem) -> list[float]:
    roots = _signed_k_roots(p)
    if roots is None:
        log.warning("k_candidates: no real k makes Q(t;k) a perfect square")
        return []
    ks = []
    for k in roots:
        if _sqrt_q(p, k) is None:
            continue
        if not any(abs(k - other) <= 1e-12 * max(1.0, abs(k)) for other in ks):
            ks.append(k)
    return ks


def _sqrt_q(p: NUProblem, k: float) -> Optional[Polynomial]:
    c, b, a = p.q_coefficients(k)
    scale = max(1.0, abs(a), abs(b), abs(c))
    if a > 1e-12 * scale:
        ra = math.sqrt(a)
        return Polynomial([b / (2 * ra), ra])
    if abs(a) <= 1e-12 * scale and abs(b) <= 1e-9 * scale and c >= -1e-12 * scale:
        return Polynomial([math.sqrt(max(c, 0.0))])
    return None


def _log_integral(num: Polynomial, sigma: Polynomial, roots) -> tuple[tuple[float, float], Polynomial]:
    """Integrate num / sigma as e0 ln|t-t0| + e1 ln|t1-t| + g(t)."""
    ds = sigma.deriv()
    if len(roots) == 2:
        e0 = float(num(roots[0]) / ds(roots[0]))
        e1 = float(num(roots[1]) / ds(roots[1]))
        quot, _ = divmod(num, sigma)
        return (e0, e1), quot.integ()
    if len(roots) == 1:
        s1 = _coef(sigma)[1]
        quot, rem = divmod(num, sigma)
        return (float(rem(roots[0]) / s1), 0.0), quot.integ()
    s0 = _coef(sigma)[0]
    return (0.0, 0.0), (num / s0).integ()


def _make_branch(p: NUProblem, k: float, sq: Polynomial, sign: int, label) -> NUBranch:
    pi = (p.sigma.deriv() - p.tau_tilde) / 2 + sign * sq
    pi = Polynomial(_coef(pi, 2))
    tau = p.tau_tilde + 2 * pi
    tau_prime = float(_coef(tau, 2)[1])
    lam = k + float(_coef(pi, 2)[1])
    roots = p.sigma_roots
    phi_e, phi_g = _log_integral(pi, p.sigma, roots)
    rho_e, rho_g = _log_integral(tau - p.sigma.deriv(), p.sigma, roots)
    scale = p.residual_scale()
    singular = tuple(bool(i < len(roots) and abs(p.sigma_tilde(roots[i])) > 1e-12 * scale)
                     for i in range(2))
    return NUBranch(k=k, pi=pi, tau=tau, tau_prime=tau_prime, lam=lam,
                    phi_exponents=phi_e, phi_poly=phi_g, rho_exponents=rho_e, rho_poly=rho_g,
                    singular=singular, n_roots=len(roots), label=label)


def pi_branches(p: NUProblem, k: float) -> list[NUBranch]:
    sq = _sqrt_q(p, k)
    if sq is None:
        raise NUError(f"Q(t; k={k}) is not a real perfect square")
    out = [_make_branch(p, k, sq, +1, (0, 0))]
    if np.any(np.abs(_coef(sq, 2)) > 0):
        out.append(_make_branch(p, k, sq, -1, (0, 1)))
    return out


def _branch_by_label(p: NUProblem, label) -> Optional[NUBranch]:
    roots = _signed_k_roots(p)
    if roots is None:
        return None
    k = roots[label[0]]
    sq = _sqrt_q(p, k)
    if sq is None:
        return None
    return _make_branch(p, k, sq, +1 if label[1] == 0 else -1, label)


def perfect_square_defect(p: NUProblem, branch: NUBranch, npts: int = 201) -> float:
    """max |Q(t;k) - (pi - (sigma' - tau_tilde)/2)^2| over the domain."""
    t0, t1 = p.domain
    lo = t0 if math.isfinite(t0) else -10.0
    hi = t1 if math.isfinite(t1) else lo + 20.0
    t = np.linspace(lo, hi, npts)
    half = (p.sigma.deriv() - p.tau_tilde) / 2
    c, b, a = p.q_coefficients(branch.k)
    q = a * t * t + b * t + c
    s = branch.pi(t) - half(t)
    return float(np.max(np.abs(q - s * s)))


# ------------------------------------------------------------ admissibility

def admissible(branch: NUBranch, policy: AdmissibilityPolicy = AdmissibilityPolicy.DEFAULT,
               tol: float = 1e-12) -> bool:
    if not branch.tau_prime < 0:
        return False
    for i in range(branch.n_roots):
        e = branch.phi_exponents[i]
        strict = policy is AdmissibilityPolicy.DIRICHLET or branch.singular[i]
        if strict and not e > tol:
            return False
        if not strict and e < -tol:
            return False
    g = _coef(branch.phi_poly)
    deg = _degree(branch.phi_poly, 1e-14)
    if deg >= 1 and not g[deg] < 0:
        return False
    return True


def lambda_n(p: NUProblem, branch: NUBranch, n: int) -> float:
    sigma_pp = float(_coef(p.sigma)[2] * 2)
    return -n * branch.tau_prime - n * (n - 1) / 2.0 * sigma_pp


# ------------------------------------------------------- factors and family

def phi_rho_factors(p: NUProblem, branch: NUBranch):
    """phi exponents, rho exponents and the classical family of y_n."""
    roots = p.sigma_roots
    w0, w1 = branch.rho_exponents
    if len(roots) == 2:
        if w0 <= -1 or w1 <= -1:
            raise NUError(f"weight exponents {branch.rho_exponents} are not integrable")
        t0, t1 = roots
        fam = PolynomialFamily("jacobi", (w0, w1), -2.0 / (t1 - t0), 1.0 + 2.0 * t0 / (t1 - t0))
    elif len(roots) == 1:
        if w0 <= -1:
            raise NUError(f"weight exponent {w0} is not integrable")
        h1 = _coef(branch.rho_poly)[1]
        if not h1 < 0:
            raise NUError("Laguerre weight does not decay")
        fam = PolynomialFamily("laguerre", (w0,), -h1, h1 * roots[0])
    else:
        h = _coef(branch.rho_poly)
        if not h[2] < 0:
            raise NUError("Hermite weight does not decay")
        a = math.sqrt(-h[2])
        fam = PolynomialFamily("hermite", (), a, -h[1] / (2 * a))
    return branch.phi_exponents, branch.rho_exponents, fam


# ------------------------------------------------------------ quantization

def _polish(f, a, b):
    return brentq(f, a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)


def solve_spectral(p_of: Callable[[float], NUProblem], n: int,
                   policy: AdmissibilityPolicy = AdmissibilityPolicy.DEFAULT,
                   s_range: tuple[float, float] = (0.0, 100.0), panels: int = 64) -> list[NUEigen]:
    """Solve lambda(s) = lambda_n(s) for the spectral parameter s on every branch.

    Branches are tracked by label (which k root, which sign of sqrt Q) so that
    each label defines a continuous function of s.  Roots are bracketed on a
    uniform scan of ``s_range`` and polished with Brent's method; only
    branches admissible at the root are kept.
    """
    s_lo, s_hi = s_range
    grid = np.linspace(s_lo, s_hi, panels + 1)
    found: list[NUEigen] = []
    any_root = False

    for label in ((0, 0), (0, 1), (1, 0), (1, 1)):
        def f(s, label=label):
            p = p_of(s)
            br = _branch_by_label(p, label)
            if br is None:
                return float("nan")
            return br.lam - lambda_n(p, br, n)

        vals = np.array([f(s) for s in grid])
        roots = []
        for i in range(panels):
            fa, fb = vals[i], vals[i + 1]
            if not (np.isfinite(fa) and np.isfinite(fb)):
                continue
            if fa == 0.0:
                roots.append(grid[i])
            elif fa * fb < 0:
                roots.append(_polish(f, grid[i], grid[i + 1]))
        if vals[-1] == 0.0:
            roots.append(grid[-1])

        for s in roots:
            any_root = True
            p = p_of(s)
            br = _branch_by_label(p, label)
            if not admissible(br, policy):
                continue
            if abs(br.lam - lambda_n(p, br, n)) > 1e-9 * max(1.0, abs(br.lam)):
                continue
            try:
                _, _, fam = phi_rho_factors(p, br)
            except NUError as exc:
                log.debug("branch %s at s=%g rejected: %s", label, s, exc)
                continue
            if any(abs(s - e.spectral_value) <= 1e-9 * max(1.0, abs(s)) for e in found):
                continue
            found.append(NUEigen(n=n, spectral_value=float(s), branch=br, family=fam, problem=p))

    if not found:
        raise NUError("no root in bracket" if not any_root else "no admissible branch")
    found.sort(key=lambda e: e.spectral_value)
    return found


# --------------------------------------------------------------- solutions

class NUFunction:
    """u(t) = phi(t) y_n(t) for an NU eigen-solution, with analytic t-derivatives."""

    def __init__(self, eig: NUEigen):
        self.eig = eig
        roots = eig.problem.sigma_roots
        self.t0 = roots[0] if len(roots) >= 1 else None
        self.t1 = roots[1] if len(roots) == 2 else None

    def _log_phi_derivs(self, t):
        br = self.eig.branch
        e0, e1 = br.phi_exponents
        g = br.phi_poly
        logv = g(t) + 0.0 * t
        d1 = g.deriv()(t) + 0.0 * t
        d2 = g.deriv(2)(t) + 0.0 * t
        if self.t0 is not None:
            u = t - self.t0
            with np.errstate(divide="ignore"):
                logv = logv + e0 * np.log(np.abs(u))
            d1 = d1 + e0 / u
            d2 = d2 - e0 / u**2
        if self.t1 is not None:
            w = self.t1 - t
            with np.errstate(divide="ignore"):
                logv = logv + e1 * np.log(np.abs(w))
            d1 = d1 - e1 / w
            d2 = d2 - e1 / w**2
        return logv, d1, d2

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        logv, l1, l2 = self._log_phi_derivs(t)
        phi = np.exp(logv)
        fam, n = self.eig.family, self.eig.n
        y = fam.evaluate(n, t)
        y1 = fam.evaluate(n, t, 1)
        y2 = fam.evaluate(n, t, 2)
        u = phi * y
        u1 = phi * (l1 * y + y1)
        u2 = phi * ((l1 * l1 + l2) * y + 2 * l1 * y1 + y2)
        return u, u1, u2

    def __call__(self, t):
        return self.derivatives(t)[0]


def eigen_residual(eig: NUEigen, t) -> float:
    """max |u'' + tau_tilde/sigma u' + sigma_tilde/sigma^2 u| / max|u| on the points t."""
    p = eig.problem
    u, u1, u2 = NUFunction(eig).derivatives(t)
    s = p.sigma(t)
    res = u2 + p.tau_tilde(t) / s * u1 + p.sigma_tilde(t) / s**2 * u
    return float(np.max(np.abs(res)) / np.max(np.abs(u)))


class ExplicitFunction:
    """Wraps user-supplied f, f', f'' so hand-written trial functions can be
    passed wherever a ``derivatives`` method is expected."""

    def __init__(self, f, d1, d2):
        self.f, self.d1, self.d2 = f, d1, d2

    def derivatives(self, x):
        x = np.asarray(x, dtype=float)
        return self.f(x) + 0.0 * x, self.d1(x) + 0.0 * x, self.d2(x) + 0.0 * x

    def __call__(self, x):
        return self.derivatives(x)[0]
