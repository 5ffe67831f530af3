"""Potential families, physical constants and parameter conversions.

Two families are supported:

* ``HRS`` -- modified Kratzer (pseudo-Coulomb) core plus the ring-shaped
  noncentral barrier,
* ``RSO`` -- pseudoharmonic core plus the same noncentral barrier.

The noncentral barrier is

    (1/r^2) [B cot^2 phi + C tan^2 phi + D csc^2 phi + F sec^2 phi
             + G sec^2 phi csc^2 phi]

and every strength enters the separated equations through the barred
(``2 m / hbar^2`` scaled) values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

#: |sin| or |cos| below this is treated as sitting on a coordinate axis.
AXIS_EPS = 1e-12


class DomainError(ValueError):
    """Potential evaluated at a point where one of its terms is singular."""


class Family(str, Enum):
    HRS = "hrs"
    RSO = "rso"


@dataclass(frozen=True)
class PhysConst:
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and self.hbar > 0):
            raise ValueError(f"mass and hbar must be positive, got {self.mass}, {self.hbar}")

    @property
    def scale(self) -> float:
        """The factor 2 m / hbar^2 that turns energies into inverse lengths squared."""
        return 2.0 * self.mass / self.hbar**2


@dataclass(frozen=True)
class NoncentralParams:
    B: float = 0.0
    C: float = 0.0
    D: float = 0.0
    F: float = 0.0
    G: float = 0.0

    def __post_init__(self):
        for name in "BCDFG":
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"noncentral strength {name} must be finite and >= 0, got {v}")

    @property
    def is_central(self) -> bool:
        return not any((self.B, self.C, self.D, self.F, self.G))


@dataclass(frozen=True)
class BarredParams:
    Bbar: float = 0.0
    Cbar: float = 0.0
    Dbar: float = 0.0
    Fbar: float = 0.0
    Gbar: float = 0.0

    def __post_init__(self):
        for name in ("Bbar", "Cbar", "Dbar", "Fbar", "Gbar"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    @property
    def total(self) -> float:
        return self.Bbar + self.Cbar + self.Dbar + self.Fbar + self.Gbar


def barred_params(nc: NoncentralParams, pc: PhysConst = PhysConst()) -> BarredParams:
    s = pc.scale
    return BarredParams(s * nc.B, s * nc.C, s * nc.D, s * nc.F, s * nc.G)


@dataclass(frozen=True)
class KratzerParams:
    """Modified Kratzer core ``De (1 - re/r)^2``.

    The Coulomb coefficient ``kappa1`` is stored negative (attractive) so that
    the radial problem has bound states.  ``attractive=False`` flips it, which
    is only useful for exercising the no-bound-state path.
    """

    De: float
    re: float
    attractive: bool = True

    def __post_init__(self):
        if not (self.De > 0 and self.re > 0):
            raise ValueError(f"De and re must be positive, got De={self.De}, re={self.re}")

    @property
    def kappa0(self) -> float:
        return self.De

    @property
    def kappa1_magnitude(self) -> float:
        return 2.0 * self.De * self.re

    @property
    def kappa1(self) -> float:
        return -self.kappa1_magnitude if self.attractive else self.kappa1_magnitude

    @property
    def kappa2(self) -> float:
        return self.De * self.re**2

    @property
    def B0(self) -> float:
        return math.sqrt(self.De)

    @property
    def A0(self) -> float:
        # signed so that (A0/r + B0)^2 expands to kappa0 + kappa1/r + kappa2/r^2
        return self.kappa1 / (2.0 * self.B0)


def kratzer_constants(De: float, re: float) -> tuple[float, float, float]:
    kp = KratzerParams(De, re)
    return kp.kappa0, kp.kappa1, kp.kappa2


@dataclass(frozen=True)
class OscParams:
    """Pseudoharmonic core ``(A1 r + B1/r)^2 = V0 + A1^2 r^2 + B1^2 / r^2``."""

    kappa: float
    r0: float

    def __post_init__(self):
        if not (self.kappa > 0 and self.r0 > 0):
            raise ValueError(f"kappa and r0 must be positive, got kappa={self.kappa}, r0={self.r0}")

    @property
    def A1(self) -> float:
        return math.sqrt(self.kappa / 8.0)

    @property
    def B1(self) -> float:
        return math.sqrt(self.kappa / 8.0) * self.r0**2

    @property
    def V0(self) -> float:
        return self.kappa * self.r0**2 / 4.0

    def omega(self, pc: PhysConst = PhysConst()) -> float:
        return math.sqrt(pc.scale * self.A1**2)


def osc_constants(kappa: float, r0: float) -> OscParams:
    return OscParams(kappa, r0)


Central = Union[KratzerParams, OscParams]


@dataclass(frozen=True)
class PotentialSpec:
    family: Family
    central: Central
    noncentral: NoncentralParams = NoncentralParams()
    consts: PhysConst = PhysConst()

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        expected = KratzerParams if family is Family.HRS else OscParams
        if not isinstance(self.central, expected):
            raise ValueError(f"{family.value} needs {expected.__name__}, got {type(self.central).__name__}")

    @classmethod
    def hrs(cls, De, re, nc=NoncentralParams(), pc=PhysConst(), attractive=True):
        return cls(Family.HRS, KratzerParams(De, re, attractive), nc, pc)

    @classmethod
    def rso(cls, kappa, r0, nc=NoncentralParams(), pc=PhysConst()):
        return cls(Family.RSO, OscParams(kappa, r0), nc, pc)

    @property
    def barred(self) -> BarredParams:
        return barred_params(self.noncentral, self.consts)

    @property
    def energy_offset(self) -> float:
        """Constant part of the central potential (kappa0 or V0)."""
        if self.family is Family.HRS:
            return self.central.kappa0
        return self.central.V0


def _central_radial(spec: PotentialSpec, r):
    c = spec.central
    if spec.family is Family.HRS:
        return (c.A0 / r + c.B0) ** 2
    return (c.A1 * r + c.B1 / r) ** 2


def eval_cartesian(spec: PotentialSpec, x, y):
    """V(x, y) in the rectangular form.

    The noncentral bracket is evaluated term by term (``B x^2 / (y^2 r^2)``,
    ``D / y^2`` and so on) so that a term with zero strength never produces
    ``0 / 0`` on an axis.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nc = spec.noncentral
    r2 = x * x + y * y
    on_x_axis = np.abs(y) < AXIS_EPS * np.maximum(1.0, np.sqrt(r2))
    on_y_axis = np.abs(x) < AXIS_EPS * np.maximum(1.0, np.sqrt(r2))
    if np.any(r2 == 0):
        raise DomainError("potential is singular at the origin")
    if (nc.B or nc.D or nc.G) and np.any(on_x_axis):
        raise DomainError("B, D or G term is singular on the x axis (y = 0)")
    if (nc.C or nc.F or nc.G) and np.any(on_y_axis):
        raise DomainError("C, F or G term is singular on the y axis (x = 0)")
    with np.errstate(divide="ignore", invalid="ignore"):
        v = _central_radial(spec, np.sqrt(r2))
        if nc.B:
            v = v + nc.B * x * x / (y * y * r2)
        if nc.C:
            v = v + nc.C * y * y / (x * x * r2)
        if nc.D:
            v = v + nc.D / (y * y)
        if nc.F:
            v = v + nc.F / (x * x)
        if nc.G:
            v = v + nc.G * r2 / (x * x * y * y)
    return v[()] if v.ndim == 0 else v


def eval_polar(spec: PotentialSpec, r, phi):
    """V(r, phi) in the plane-polar form."""
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r must be positive")
    nc = spec.noncentral
    if (nc.B or nc.D or nc.G) and np.any(np.abs(np.sin(phi)) < AXIS_EPS):
        raise DomainError("cot^2 / csc^2 term is singular at phi = 0 mod pi")
    if (nc.C or nc.F or nc.G) and np.any(np.abs(np.cos(phi)) < AXIS_EPS):
        raise DomainError("tan^2 / sec^2 term is singular at phi = pi/2 mod pi")
    c = spec.central
    if spec.family is Family.HRS:
        v = c.kappa0 + c.kappa1 / r + c.kappa2 / r**2
    else:
        v = c.V0 + c.A1**2 * r**2 + c.B1**2 / r**2
    with np.errstate(divide="ignore", invalid="ignore"):
        s2 = np.sin(phi) ** 2
        c2 = np.cos(phi) ** 2
        ang = 0.0
        if nc.B:
            ang = ang + nc.B * c2 / s2
        if nc.C:
            ang = ang + nc.C * s2 / c2
        if nc.D:
            ang = ang + nc.D / s2
        if nc.F:
            ang = ang + nc.F / c2
        if nc.G:
            ang = ang + nc.G / (s2 * c2)
        v = v + ang / r**2
    v = np.asarray(v)
    return v[()] if v.ndim == 0 else v


@dataclass(frozen=True)
class SeparationData:
    """Constants of the separated radial equation for a given M^2.

    For HRS only ``Lambda0`` and ``Lambda`` are meaningful, for RSO only
    ``Atilde`` and ``Gamma``; the others are ``None``.  ``offset`` is the
    constant part of the central potential (kappa0 or V0) and ``scale`` is
    ``2 m / hbar^2``, so ``E = offset + Etilde / scale``.
    """

    family: Family
    Msq: float
    Lambda0: Optional[float] = None
    Lambda: Optional[float] = None
    Atilde: Optional[float] = None
    Gamma: Optional[float] = None
    offset: float = 0.0
    scale: float = 2.0

    @classmethod
    def hrs_direct(cls, Lambda0, Lambda, kappa0=0.0, pc=PhysConst()):
        return cls(Family.HRS, Msq=float("nan"), Lambda0=Lambda0, Lambda=Lambda,
                   offset=kappa0, scale=pc.scale)

    @classmethod
    def rso_direct(cls, Atilde, Gamma, V0=0.0, pc=PhysConst()):
        return cls(Family.RSO, Msq=float("nan"), Atilde=Atilde, Gamma=Gamma,
                   offset=V0, scale=pc.scale)


def separation_data(spec: PotentialSpec, Msq: float) -> SeparationData:
    s = spec.consts.scale
    c = spec.central
    if spec.family is Family.HRS:
        return SeparationData(
            Family.HRS, Msq,
            Lambda0=s * c.kappa1,
            Lambda=s * c.kappa2 + Msq - 0.25,
            offset=c.kappa0, scale=s,
        )
    return SeparationData(
        Family.RSO, Msq,
        Atilde=s * c.A1**2,
        Gamma=s * c.B1**2 + Msq - 0.25,
        offset=c.V0, scale=s,
    )
