import numpy as np
import pytest

from nullgs.bianchi import (FAMILY_NAMES, Operands, bianchi_residuals_at, families_for, family,
                            family_residual, mutant_residual, parse_family, parse_term, pick_mutants,
                            residual_scale)
from nullgs.bianchi_data import FAMILIES, SIGN_VARIANTS
from nullgs.frame import frame_point


@pytest.fixture(scope="module")
def odd_point(odd_fixture):
    return frame_point(odd_fixture.chart, odd_fixture.frame, odd_fixture.points[0])


@pytest.fixture(scope="module")
def even_point(even_fixture):
    return frame_point(even_fixture.chart, even_fixture.frame, even_fixture.points[0])


def test_family_counts():
    assert len(FAMILY_NAMES) == 20
    assert len(families_for(1)) == 20
    even = families_for(0)
    assert set(even) < set(FAMILY_NAMES)
    assert all(not family(n).has_zero_index for n in even)


def test_parse_term_shapes():
    t = parse_term("-2 G([m~ | [k~ ^ s) C(l~] | s | n~ r~])")
    assert t.coef == -2
    assert [f.name for f in t.factors] == ["G", "C"]
    assert t.has("G") and not t.has("A")


def test_every_family_parses():
    for name in FAMILY_NAMES:
        fam = family(name)
        assert fam.letters and len(fam.letters) == len(fam.kinds)
        assert fam.lhs and fam.rhs


def test_residuals_small_odd(odd_point):
    rep = bianchi_residuals_at(odd_point)
    assert set(rep.residuals) == set(FAMILY_NAMES)
    assert rep.max_relative < 1e-9, rep.residuals


def test_residuals_small_even(even_point):
    rep = bianchi_residuals_at(even_point)
    assert set(rep.residuals) == set(families_for(0))
    assert rep.max_relative < 1e-9, rep.residuals


@pytest.mark.parametrize("name", sorted(SIGN_VARIANTS))
def test_sign_variants_break_identity(name, odd_point):
    idx, text = SIGN_VARIANTS[name]
    lhs, rhs = FAMILIES[name]
    rhs = list(rhs)
    rhs[idx] = text
    bad = parse_family(name, lhs, rhs)
    ops = Operands.from_frame_point(odd_point)
    good_r = np.abs(family_residual(family(name), ops)).max()
    bad_r = np.abs(family_residual(bad, ops)).max()
    scale = residual_scale(odd_point)
    assert good_r < 1e-9 * scale
    assert bad_r > 1e-3 * scale


def test_mutant_suite_detects_every_family(odd_point):
    ops = Operands.from_frame_point(odd_point)
    picks = pick_mutants(ops)
    assert len(picks) == 20
    for name, i in picks.items():
        assert mutant_residual(odd_point, name, i) > 1e-3, name
