import math

import numpy as np
import pytest

from nubound.model import (BarredParams, DomainError, Family, KratzerParams, NoncentralParams, OscParams,
                           PhysConst, PotentialSpec, SeparationData, barred_params, eval_cartesian,
                           eval_polar, kratzer_constants, osc_constants, separation_data)


def test_barred_scaling():
    assert barred_params(NoncentralParams()) == BarredParams()
    assert barred_params(NoncentralParams(D=2)).Dbar == 4
    assert barred_params(NoncentralParams(B=0.5), PhysConst(mass=2)).Bbar == 2


def test_kratzer_constants():
    assert kratzer_constants(4, 1) == (4, -8, 4)
    assert kratzer_constants(2, 3) == (2, -12, 18)
    k0, k1, k2 = kratzer_constants(1, 1e-9)
    assert k0 == 1 and abs(k1) < 1e-8 and k2 < 1e-17


def test_kratzer_square_expansion():
    kp = KratzerParams(3.0, 1.7)
    r = np.linspace(0.3, 5, 9)
    assert np.allclose((kp.A0 / r + kp.B0) ** 2, kp.kappa0 + kp.kappa1 / r + kp.kappa2 / r**2)
    assert KratzerParams(3.0, 1.7, attractive=False).kappa1 > 0


def test_osc_constants():
    op = osc_constants(8, 1)
    assert (op.A1, op.B1, op.V0) == pytest.approx((1, 1, 2))
    op = osc_constants(8, 2)
    assert (op.A1, op.B1, op.V0) == pytest.approx((1, 4, 8))
    op = osc_constants(4, 1)
    assert op.omega() == pytest.approx(1) and op.V0 == pytest.approx(1)


@pytest.mark.parametrize("bad", [lambda: KratzerParams(-1, 1), lambda: KratzerParams(1, 0),
                                 lambda: OscParams(0, 1), lambda: NoncentralParams(B=-1),
                                 lambda: PhysConst(mass=0), lambda: BarredParams(Gbar=float("nan"))])
def test_parameter_validation(bad):
    with pytest.raises(ValueError):
        bad()


def test_family_mismatch_rejected():
    with pytest.raises(ValueError):
        PotentialSpec(Family.HRS, OscParams(1, 1))


def test_eval_examples():
    hrs = PotentialSpec.hrs(4, 1)
    assert eval_cartesian(hrs, 1.0, 1.0) == pytest.approx((2 - 2 / math.sqrt(2)) ** 2)
    assert eval_polar(hrs, math.sqrt(2), math.pi / 4) == pytest.approx(0.3431457, abs=1e-7)
    rso = PotentialSpec.rso(8, 1)
    assert eval_cartesian(rso, 3.0, 4.0) == pytest.approx(27.04)
    d1 = PotentialSpec.hrs(4, 1, NoncentralParams(D=1))
    assert eval_polar(d1, 1.0, math.pi / 2) == pytest.approx(eval_polar(hrs, 1.0, math.pi / 2) + 1)
    g1 = PotentialSpec.hrs(4, 1, NoncentralParams(G=1))
    assert eval_polar(g1, 2.0, math.pi / 4) == pytest.approx(eval_polar(hrs, 2.0, math.pi / 4) + 1)
    # zero-strength limit of the RSO core
    tiny = PotentialSpec.rso(1e-12, 1e-3)
    assert eval_cartesian(tiny, 1.0, 2.0) == pytest.approx(0.0, abs=1e-12)


def test_cartesian_and_polar_agree():
    spec = PotentialSpec.rso(3, 1.2, NoncentralParams(0.3, 0.4, 0.5, 0.6, 0.7), PhysConst(1.5, 0.8))
    rng = np.random.default_rng(0)
    r = rng.uniform(0.2, 4, 50)
    phi = rng.uniform(0.05, 1.5, 50) + rng.integers(0, 4, 50) * math.pi / 2
    assert np.allclose(eval_cartesian(spec, r * np.cos(phi), r * np.sin(phi)), eval_polar(spec, r, phi),
                       rtol=1e-12)


def test_axis_singularities():
    spec = PotentialSpec.hrs(4, 1, NoncentralParams(B=1))
    with pytest.raises(DomainError):
        eval_cartesian(spec, 1.0, 0.0)
    with pytest.raises(DomainError):
        eval_polar(spec, 1.0, 0.0)
    # C has no singularity on the x axis
    assert np.isfinite(eval_cartesian(PotentialSpec.hrs(4, 1, NoncentralParams(C=1)), 1.0, 0.0))
    with pytest.raises(DomainError):
        eval_cartesian(PotentialSpec.hrs(4, 1, NoncentralParams(F=1)), 0.0, 1.0)
    with pytest.raises(DomainError):
        eval_cartesian(PotentialSpec.hrs(4, 1), 0.0, 0.0)
    with pytest.raises(DomainError):
        eval_polar(PotentialSpec.hrs(4, 1), 0.0, 1.0)


def test_separation_data_examples():
    sd = separation_data(PotentialSpec.hrs(4, 1), 4)
    assert sd.Lambda == pytest.approx(11.75) and sd.Lambda0 == pytest.approx(-16)
    sd = separation_data(PotentialSpec.rso(4, 1), 3)
    assert sd.Atilde == pytest.approx(1) and sd.Gamma == pytest.approx(3.75)
    sd = separation_data(PotentialSpec.hrs(1, 1e-9), 0.25)
    assert sd.Lambda == pytest.approx(0, abs=1e-12)
    d = SeparationData.hrs_direct(-2, 0)
    assert d.family is Family.HRS and d.scale == 2 and d.offset == 0
