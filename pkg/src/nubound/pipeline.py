"""Spectrum tables, wavefunction grids and the three-way verification run.

Provenance is kept separate by construction: published-formula values are
computed and reported, but nothing downstream reads them.  The engine path
(NU angular + derived radial) and the oracle path (finite differences for
both equations, the radial one fed with the oracle M^2) never share numbers.
"""
from __future__ import annotations

import io
import math
from typing import Optional

import numpy as np
import yaml

from . import angular as A
from . import assembly as S
from . import oracle as O
from . import radial as R
from .config import RunConfig
from .model import Family, PotentialSpec, separation_data

SPECTRUM_COLUMNS = ("n0", "nr", "Msq_paper", "Msq_nu", "E_paper", "E_derived")
REPORT_VERSION = 1


def fmt(x) -> str:
    """17 significant digits, locale independent."""
    if x is None:
        return "nan"
    return "%.17g" % (float(x) + 0.0)  # no negative zero


def _num(x) -> Optional[float]:
    if x is None:
        return None
    x = float(x) + 0.0  # no negative zero in reports
    return x if math.isfinite(x) else None


def _paper_msq(spec: PotentialSpec, n0: int) -> Optional[float]:
    try:
        return A.m_squared_paper(spec.barred, n0)
    except ValueError:
        return None


def _paper_energy(spec: PotentialSpec, Msq: Optional[float], nr: int) -> Optional[float]:
    if Msq is None:
        return None
    try:
        if spec.family is Family.HRS:
            return R.hrs_energy_paper(spec.central, Msq, nr, spec.consts)
        return R.rso_energy_paper(spec.central, Msq, nr, spec.consts)
    except ValueError:
        return None


def _radial_solution(cfg: RunConfig, spec: PotentialSpec, sd, nr: int):
    if spec.family is Family.HRS:
        return R.solve_hrs(sd, nr, spec.consts, re=cfg.re, r_max=cfg.r_max_override)
    return R.solve_rso(sd, nr, spec.consts, r_max=cfg.r_max_override)


def _derived_energy(spec: PotentialSpec, sd, nr: int) -> Optional[float]:
    if spec.family is Family.HRS:
        e = R.hrs_energy_derived(sd, nr, spec.consts)
        return None if isinstance(e, R.NoBoundState) else e
    return R.rso_energy_derived(sd, None, nr, spec.consts)


# ------------------------------------------------------------------ spectrum

def spectrum_rows(cfg: RunConfig) -> list[dict]:
    spec = cfg.potential()
    rows = []
    for n0 in range(cfg.n0_max + 1):
        msq_p = _paper_msq(spec, n0)
        msq_nu = A.solve_angular(spec.barred, n0).Msq
        sd = separation_data(spec, msq_nu)
        for nr in range(cfg.nr_max + 1):
            rows.append({"n0": n0, "nr": nr, "Msq_paper": msq_p, "Msq_nu": msq_nu,
                         "E_paper": _paper_energy(spec, msq_p, nr),
                         "E_derived": _derived_energy(spec, sd, nr)})
    return rows


def write_spectrum_csv(rows: list[dict], fh) -> None:
    fh.write(",".join(SPECTRUM_COLUMNS) + "\n")
    for row in sorted(rows, key=lambda r: (r["n0"], r["nr"])):
        cells = [str(row["n0"]), str(row["nr"])] + [fmt(row[k]) for k in SPECTRUM_COLUMNS[2:]]
        fh.write(",".join(cells) + "\n")


# ------------------------------------------------------------- wavefunction

def build_state(cfg: RunConfig, n0: int, nr: int) -> S.FullState:
    spec = cfg.potential()
    ang = A.solve_angular(spec.barred, n0)
    sd = separation_data(spec, ang.Msq)
    rad = _radial_solution(cfg, spec, sd, nr)
    if isinstance(rad, R.NoBoundState):
        raise R.RadialError(f"no bound state: {rad.reason}")
    return S.assemble(spec, ang, rad)


def wavefunction_grid(cfg: RunConfig, n0: int, nr: int, shape=(50, 72),
                      cartesian: bool = False) -> S.GridFunction:
    state = build_state(cfg, n0, nr)
    n1, n2 = shape
    if cartesian:
        half = state.r_max / math.sqrt(2.0)
        xs = np.linspace(-half, half, n1)
        ys = np.linspace(-half, half, n2)
        return S.eval_cartesian_grid(state, xs, ys)
    rs = np.linspace(0.0, state.r_max, n1)
    phis = np.linspace(0.0, 2 * math.pi, n2, endpoint=False)
    return S.eval_polar_grid(state, rs, phis)


def write_grid_csv(gf: S.GridFunction, fh) -> None:
    names = ("x", "y") if gf.meta.get("coords") == "cartesian" else ("r", "phi")
    fh.write(f"{names[0]},{names[1]},psi\n")
    a, b = gf.axes
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            fh.write(f"{fmt(u)},{fmt(v)},{fmt(gf.values[i, j])}\n")


# ------------------------------------------------------------------- verify

def _radial_box(cfg: RunConfig, spec: PotentialSpec, sd) -> float:
    if cfg.r_max_override is not None:
        return cfg.r_max_override
    if spec.family is Family.RSO:
        return R.rso_r_max(sd, cfg.nr_max)
    if sd.Lambda0 >= 0:
        return 40.0 * max(cfg.re, 1.0)
    return R.hrs_r_max(sd, cfg.nr_max, cfg.re)


def _rel_ok(a, b, tol) -> bool:
    return a is not None and b is not None and abs(a - b) <= tol * (1 + abs(b))


def run_verify(cfg: RunConfig) -> dict:
    spec = cfg.potential()
    bp = spec.barred
    tol = cfg.tolerances
    s = spec.consts.scale
    failures: list[str] = []

    msq_oracle = O.angular_oracle(bp, cfg.n0_max + 1, cfg.oracle_N)
    states = []
    msq_nu = []
    for n0 in range(cfg.n0_max + 1):
        # engine path
        ang = A.solve_angular(bp, n0)
        msq_nu.append(ang.Msq)
        res_ang = A.angular_residual(ang, A.angular_wavefunction(ang))
        sd = separation_data(spec, ang.Msq)
        # oracle path
        sd_or = separation_data(spec, msq_oracle[n0])
        r_box = _radial_box(cfg, spec, sd_or)
        bound = spec.family is Family.RSO or sd.Lambda0 < 0
        e_or = O.radial_oracle(spec.family, sd_or, cfg.nr_max + 1, cfg.oracle_N, r_max=r_box,
                               check_tail=bound)
        # published-formula path (report only)
        msq_p = _paper_msq(spec, n0)

        ok_ang = _rel_ok(ang.Msq, msq_oracle[n0], tol["tol_eigen"]) and res_ang <= tol["tol_residual"]
        if not ok_ang:
            failures.append(f"angular n0={n0}")
        for nr in range(cfg.nr_max + 1):
            row = {"n0": n0, "nr": nr,
                   "Msq_paper": _num(msq_p), "Msq_nu": _num(ang.Msq), "Msq_oracle": _num(msq_oracle[n0])}
            E_oracle = sd_or.offset + e_or[nr] / s
            E_paper = _paper_energy(spec, msq_p, nr)
            E_paper_same = _paper_energy(spec, ang.Msq, nr)
            rad = _radial_solution(cfg, spec, sd, nr)
            if isinstance(rad, R.NoBoundState):
                # absence is confirmed when the oracle finds nothing below the offset
                ok = e_or[nr] >= 0
                row.update({"bound_state": False, "reason": rad.reason,
                            "E_paper": _num(E_paper), "E_derived": None, "E_oracle": _num(E_oracle),
                            "oracle_Etilde": _num(e_or[nr]), "pass": bool(ok and ok_ang)})
            else:
                U = R.radial_wavefunction(rad)
                system = spec.family
                res_rad = R.radial_residual(system, sd, rad.Etilde, U, rad.r_max)
                state = S.assemble(spec, ang, rad)
                res_2d = S.hamiltonian_residual(state)
                norm = S.norm_2d(state, norm=state.norm)
                lz = S.angular_momentum_check(state)
                ok = (_rel_ok(rad.energy, E_oracle, tol["tol_eigen"])
                      and res_rad <= tol["tol_residual"] and res_2d <= tol["tol_residual"]
                      and abs(norm - 1) <= tol["tol_norm"])
                row.update({
                    "bound_state": True,
                    "E_paper": _num(E_paper), "E_derived": _num(rad.energy), "E_oracle": _num(E_oracle),
                    "residual_angular": _num(res_ang), "residual_radial": _num(res_rad),
                    "residual_2d": _num(res_2d), "norm_2d": _num(norm),
                    "angular_momentum": {"M": _num(lz.M), "residual_norm": _num(lz.residual_norm),
                                         "relative_residual": _num(lz.relative_residual),
                                         "expectation": _num(lz.expectation_real)},
                    "pass": bool(ok and ok_ang),
                })
                row["deltas"] = {
                    "Msq_paper_minus_nu": _num(None if msq_p is None else msq_p - ang.Msq),
                    "Msq_nu_minus_oracle": _num(ang.Msq - msq_oracle[n0]),
                    "E_paper_minus_derived": _num(None if E_paper is None else E_paper - rad.energy),
                    "E_derived_minus_oracle": _num(rad.energy - E_oracle),
                    "E_paper_at_Msq_nu_minus_derived": _num(
                        None if E_paper_same is None else E_paper_same - rad.energy),
                }
                row["formula_checks"] = _formula_checks(spec, sd, nr, rad.energy, E_paper_same)
            if not row["pass"]:
                failures.append(f"state n0={n0} nr={nr}")
            states.append(row)

    return {
        "report": "nubound verify",
        "version": REPORT_VERSION,
        "status": "PASS" if not failures else "FAIL",
        "failures": failures,
        "metadata": {
            "config_sha256": cfg.sha256,
            "family": spec.family.value,
            "tolerances": {k: float(v) for k, v in sorted(tol.items())},
            "oracle_N": cfg.oracle_N,
            "oracle_richardson_grids": [cfg.oracle_N, 2 * cfg.oracle_N],
            "n0_max": cfg.n0_max,
            "nr_max": cfg.nr_max,
            "mass": cfg.mass,
            "hbar": cfg.hbar,
        },
        "angular_coefficients": _coeff_report(spec, msq_nu),
        "states": states,
    }


def _coeff_report(spec: PotentialSpec, msq_values) -> list[dict]:
    out = []
    for n0, msq in enumerate(msq_values):
        d = A.transform_coeffs(spec.barred, msq)
        p = A.paper_coeffs(spec.barred, msq)
        out.append({"n0": n0, "Msq": _num(msq),
                    "expanded": {"alpha": _num(d.alpha), "beta": _num(d.beta), "gamma": _num(d.gamma)},
                    "printed": {"alpha": _num(p.alpha), "beta": _num(p.beta), "gamma": _num(p.gamma)},
                    "mu1": _num(d.mu1), "mu2": _num(d.mu2)})
    return out


def _formula_checks(spec: PotentialSpec, sd, nr: int, E_derived: float, E_paper_same) -> dict:
    pc = spec.consts
    if spec.family is Family.HRS:
        lam = R.hrs_energy_paper_lambda_form(sd, nr, pc)
        return {"E_paper_lambda_form": _num(lam),
                "lambda_form_minus_derived": _num(lam - E_derived)}
    op = spec.central
    gam = R.rso_energy_paper_gamma_form(sd, nr, pc)
    sign_flip = None
    if E_paper_same is not None:
        # printed line 2 = kappa r0^2/8 - (E_derived - V0) when both use the same M^2
        sign_flip = (E_derived - op.V0) + (E_paper_same - op.kappa * op.r0**2 / 8)
    return {"E_paper_gamma_form": _num(gam),
            "sign_flip_relation_defect": _num(sign_flip),
            "printed_constant_minus_V0": _num(op.kappa * op.r0**2 / 8 - op.V0)}


def dump_report(report: dict) -> str:
    buf = io.StringIO()
    yaml.safe_dump(report, buf, sort_keys=False, default_flow_style=False, width=100)
    return buf.getvalue()
