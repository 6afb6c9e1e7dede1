from fractions import Fraction

import numpy as np
import pytest

from nullgs import fixtures as fx
from nullgs.classify import COTTON_YORK, FrameTensor, synthetic_cy, synthetic_weyl, synthetic_weyl_multi
from nullgs.errors import DimensionTooSmall, ZeroOmega
from nullgs.frame import frame_point
from nullgs.poly import Poly
from nullgs.verdict import (ConformalData, conformal_rescale, cotton_york_agreement, cotton_york_alt,
                            cy_conformal_check, cy_required, gs_verdict, multi_verdict, tensor_verdict,
                            theorem_k)


def test_cotton_york_routes_agree(odd_fixture, even_fixture):
    for f in (odd_fixture, even_fixture):
        fp = frame_point(f.chart, f.frame, f.points[0])
        assert cotton_york_agreement(fp) < 1e-10


def test_cotton_york_alt_needs_five_dimensions(rng):
    f = fx.random_fixture(4, 2, rng)
    fp = frame_point(f.chart, f.frame, f.points[0])
    with pytest.raises(DimensionTooSmall):
        cotton_york_alt(fp)


def test_theorem_k_and_cy_requirements():
    assert theorem_k(Fraction(-1), 0) is None
    assert theorem_k(Fraction(3), 0) == 2
    assert theorem_k(Fraction(5), 1) == 4
    assert cy_required(1, 0, True) == Fraction(1, 2)
    assert cy_required(1, 0, False) == Fraction(-1, 2)
    assert cy_required(2, 1, True) == 1 and cy_required(2, 1, False) == 0


@pytest.mark.parametrize("k,m,eps", [(0, 3, 0), (1, 3, 0), (2, 4, 0), (0, 2, 1), (3, 3, 1), (4, 2, 1)])
def test_generic_synthetic_forces_zero_gamma(k, m, eps, rng):
    W = synthetic_weyl(k, m, eps, rng)
    A = synthetic_cy(cy_required(k, eps, True), m, eps, rng)
    v = tensor_verdict(W, A)
    assert v.status == "integrability forced"
    assert v.generic and v.hypotheses and v.consistent
    assert {s["case"][-1] for s in v.systems} == ({"K"} if not eps else {"K", "L", "M"})


def test_cy_too_low_means_hypotheses_not_met(rng):
    W = synthetic_weyl(1, 3, 0, rng)
    A = synthetic_cy(Fraction(-1, 2), 3, 0, rng)
    v = tensor_verdict(W, A)
    assert v.status == "hypotheses not met" and not v.hypotheses


def test_non_special_weyl(rng):
    v = tensor_verdict(synthetic_weyl(-1, 3, 0, rng), None, assume_cy=True)
    assert v.status.startswith("Weyl not algebraically special")


def test_zero_weyl_is_vacuous():
    v = tensor_verdict(FrameTensor(np.zeros((7,) * 4), 3, 1), None, assume_cy=True)
    assert v.status == "conformally flat; theorems vacuous"


def test_multi_structure_verdicts(rng):
    S, E = (1, 2, 3), ()
    W = synthetic_weyl_multi(0, 3, 1, rng, [S, E])
    out = multi_verdict(W, None, [S, E], assume_cy=True)
    assert [v.status for v in out] == ["integrability forced"] * 2


@pytest.mark.parametrize("n", [5, 6, 7])
def test_pp_wave_pipeline_consistent(n):
    f = fx.pp_wave(n, count=2)
    v = gs_verdict(f.chart, f.frame, None, f.points)
    assert v.consistent
    assert v.involutive["N"] and v.involutive["N_perp"]
    assert v.weyl.level >= -1 - f.chart.epsilon
    names = {i.name for i in v.implications}
    assert {"integrability_condition", "weyl_level_implies_cy_level",
            "weyl_level_and_integrable_imply_cy_level"} <= names


def test_flat_pipeline_is_vacuous():
    f = fx.flat(6)
    v = gs_verdict(f.chart, f.frame, None, f.points)
    assert v.status == "conformally flat; theorems vacuous"


def test_conformal_law_on_random_metric(rng):
    f = fx.random_fixture(6, 2, rng)
    for om in fx.conformal_factors(6).values():
        rep = cy_conformal_check(f.chart, ConformalData(om), f.points)
        assert rep.cy_residual < 1e-9 and rep.weyl_residual < 1e-9


def test_conformal_invariance_on_pp_wave():
    f = fx.pp_wave(6, count=2)
    for om in fx.conformal_factors(6).values():
        rep = cy_conformal_check(f.chart, ConformalData(om), f.points, f.frame)
        assert rep.invariant, rep.as_dict()


def test_zero_omega_rejected():
    chart = fx.flat(5).chart
    om = Poly.var(5, 0)
    with pytest.raises(ZeroOmega):
        conformal_rescale(chart, ConformalData(om), [np.zeros(5)])
    with pytest.raises(ZeroOmega):
        ConformalData(om).upsilon(np.zeros(5))


def test_verdict_serializes(rng):
    W = synthetic_weyl(2, 2, 1, rng)
    A = synthetic_cy(1, 2, 1, rng)
    d = tensor_verdict(W, A).as_dict()
    assert d["weyl_level"] == "2" and d["cy_level"] is not None
    assert A.symmetry_class == COTTON_YORK
