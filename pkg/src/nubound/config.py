"""Run configuration: a line-based ``key = value`` file.

Blank lines and ``#`` comments are ignored.  Unknown or repeated keys are
errors that cite the line number.  Tolerances are overridable through keys
starting with ``tol_``.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .model import Family, NoncentralParams, PhysConst, PotentialSpec

DEFAULT_TOLERANCES = {
    "tol_eigen": 1e-4,  # relative, nu/derived vs oracle
    "tol_residual": 1e-7,  # scaled ODE and 2D residuals
    "tol_norm": 1e-8,  # 2D normalization
}

_FLOAT_KEYS = {"mass", "hbar", "De", "re", "kappa", "r0", "B", "C", "D", "F", "G", "r_max_override"}
_INT_KEYS = {"n0_max", "nr_max", "oracle_N"}
_STR_KEYS = {"family", "coulomb"}
_KNOWN = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS | set(DEFAULT_TOLERANCES)

_REQUIRED = {Family.HRS: ("De", "re"), Family.RSO: ("kappa", "r0")}
_FOREIGN = {Family.HRS: ("kappa", "r0"), Family.RSO: ("De", "re", "coulomb")}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    family: Family
    mass: float = 1.0
    hbar: float = 1.0
    De: Optional[float] = None
    re: Optional[float] = None
    kappa: Optional[float] = None
    r0: Optional[float] = None
    B: float = 0.0
    C: float = 0.0
    D: float = 0.0
    F: float = 0.0
    G: float = 0.0
    n0_max: int = 0
    nr_max: int = 0
    oracle_N: int = 4000
    r_max_override: Optional[float] = None
    coulomb: str = "attractive"
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    sha256: str = ""

    @property
    def consts(self) -> PhysConst:
        return PhysConst(self.mass, self.hbar)

    @property
    def noncentral(self) -> NoncentralParams:
        return NoncentralParams(self.B, self.C, self.D, self.F, self.G)

    def potential(self) -> PotentialSpec:
        if self.family is Family.HRS:
            return PotentialSpec.hrs(self.De, self.re, self.noncentral, self.consts,
                                     attractive=self.coulomb == "attractive")
        return PotentialSpec.rso(self.kappa, self.r0, self.noncentral, self.consts)


def _convert(key: str, raw: str, lineno: int):
    if key in _STR_KEYS:
        return raw.lower()
    try:
        if key in _INT_KEYS:
            return int(raw)
        v = float(raw)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects a number, got {raw!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"line {lineno}: {key} must be finite")
    return v


def parse_config_text(text: str) -> RunConfig:
    values: dict = {}
    where: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = (s.strip() for s in body.split("=", 1))
        if key not in _KNOWN:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {where[key]})")
        if not raw:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        values[key] = _convert(key, raw, lineno)
        where[key] = lineno

    def fail(key, msg):
        loc = f"line {where[key]}: " if key in where else ""
        raise ConfigError(f"{loc}{msg}")

    if "family" not in values:
        raise ConfigError("missing required key 'family'")
    try:
        family = Family(values["family"])
    except ValueError:
        fail("family", f"family must be 'hrs' or 'rso', got {values['family']!r}")
    for key in _REQUIRED[family]:
        if key not in values:
            raise ConfigError(f"missing required key {key!r} for family {family.value}")
    for key in _FOREIGN[family]:
        if key in values:
            fail(key, f"key {key!r} does not apply to family {family.value}")
    for key in ("mass", "hbar", "De", "re", "kappa", "r0", "r_max_override"):
        if key in values and not values[key] > 0:
            fail(key, f"{key} must be positive, got {values[key]}")
    for key in "BCDFG":
        if key in values and values[key] < 0:
            fail(key, f"{key} must be nonnegative, got {values[key]}")
    # the angular oracle resolves at most ten levels
    for key, top in (("n0_max", 9), ("nr_max", 20)):
        if key in values and not 0 <= values[key] <= top:
            fail(key, f"{key} must be in 0..{top}, got {values[key]}")
    if "oracle_N" in values and values["oracle_N"] < 64:
        fail("oracle_N", f"oracle_N must be >= 64, got {values['oracle_N']}")
    if "coulomb" in values and values["coulomb"] not in ("attractive", "repulsive"):
        fail("coulomb", f"coulomb must be 'attractive' or 'repulsive', got {values['coulomb']!r}")
    tols = dict(DEFAULT_TOLERANCES)
    for key in DEFAULT_TOLERANCES:
        if key in values:
            if not values[key] > 0:
                fail(key, f"{key} must be positive")
            tols[key] = values.pop(key)
    values["family"] = family
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return RunConfig(tolerances=tols, sha256=digest, **values)


def parse_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config_text(text)
