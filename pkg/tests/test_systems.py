import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullgs.classify import FrameTensor, synthetic_cy, synthetic_weyl
from nullgs.config import DEFAULT_TOL
from nullgs.errors import ClassMismatch, SplitViolation
from nullgs.systems import (CASES, SplitReport, assemble_system, case, degenerate_column_weyl,
                            det_split_check, display_blocks, expected_size, extract_rows, layout,
                            require_split, solve_trivial, stages_for, symbolic_system)

SIZES = {0: (3, 4), 1: (2, 3)}
ALL = [(key, m) for key, c in CASES.items() for m in SIZES[c.epsilon]]


def draw(key, m, rng):
    c = CASES[key]
    return synthetic_weyl(c.k, m, c.epsilon, rng)


def test_case_table():
    assert len(CASES) == 18
    assert [c.stage for c in stages_for(0, 1)] == ["K"]
    assert [c.stage for c in stages_for(1, 3)] == ["K", "L", "M"]
    assert case(1, 4, "M").key == "odd-k4-M"
    with pytest.raises(KeyError):
        case(0, 3, "K")
    assert case(0, 2, "K").cy_level == 1.5 and case(1, 2, "L").cy_level == 1


@pytest.mark.parametrize("key,m", ALL)
def test_layout_sizes(key, m):
    lay = layout(key, m)
    assert lay.size == expected_size(lay.spec.stage, m)
    rows = sorted(r for b in lay.blocks for r in b.rows)
    assert rows == list(range(lay.size))


def test_layout_rejects_small_m():
    with pytest.raises(ValueError):
        layout("even-k0-K", 2)


@pytest.mark.parametrize("key,m", ALL)
def test_builders_agree_and_blocks_match_display(key, m, rng):
    W = draw(key, m, rng)
    sym = symbolic_system(key, m)
    Mi = sym.matrix(W.entries)
    Mii = extract_rows(key, m, W.entries)
    assert np.abs(Mi - Mii).max() <= 1e-10 * W.norm()
    lay = layout(key, m)
    for b, disp in zip(lay.blocks, display_blocks(lay, W.entries)):
        assert np.allclose(Mi[np.ix_(b.rows, b.rows)], disp, atol=1e-12)


@pytest.mark.parametrize("key,m", ALL)
def test_generic_draw_is_nonsingular(key, m, rng):
    S = assemble_system(draw(key, m, rng), key, assume_cy=True)
    rep = solve_trivial(S.matrix)
    assert rep.nonsingular and rep.kernel_dim == 0 and rep.solution_norm == 0


@pytest.mark.parametrize("key,m", ALL)
def test_degenerate_column_is_singular(key, m, rng):
    W, col = degenerate_column_weyl(draw(key, m, rng), key)
    W.validate()
    S = assemble_system(W, key, assume_cy=True)
    assert np.abs(S.matrix[:, col]).max() == 0
    assert not solve_trivial(S.matrix).nonsingular


@pytest.mark.parametrize("key,m", ALL)
def test_det_split(key, m):
    rep = det_split_check(key, m, trials=3, rng=np.random.default_rng(1))
    assert rep.passed, rep.as_dict()


def test_require_split_raises():
    bad = SplitReport("even-k0-K", 3, 1, 1, 1, 1.0, 1.0, 1, False)
    with pytest.raises(SplitViolation):
        require_split(bad)


def test_block_determinants_multiply_to_d(rng):
    S = assemble_system(draw("even-k1-K", 4, rng), "even-k1-K", assume_cy=True)
    assert np.isclose(np.prod(S.diag_values), S.D_value)
    assert S.size == 24 and len(S.unknown_order) == 24


def test_class_checks(rng):
    W = synthetic_weyl(0, 3, 0, rng)
    with pytest.raises(ClassMismatch):
        assemble_system(W, "even-k1-K", assume_cy=True)
    with pytest.raises(ClassMismatch):
        assemble_system(W, "even-k0-K")
    with pytest.raises(ClassMismatch):
        assemble_system(W, "odd-k0-K", assume_cy=True)
    low = synthetic_cy(-1.5, 3, 0, rng)
    with pytest.raises(ClassMismatch):
        assemble_system(W, "even-k0-K", low)
    ok = synthetic_cy(-0.5, 3, 0, rng)
    assert assemble_system(W, "even-k0-K", ok).size == 9


def test_solve_trivial_reports():
    assert solve_trivial(np.eye(3)).ratio == 1.0
    rep = solve_trivial(np.diag([1.0, 1.0, 0.0]))
    assert not rep.nonsingular and rep.kernel_dim == 1


def _t(m, a):
    return m + a - 1


@given(st.integers(0, 2 ** 31 - 1))
def test_six_dimensional_k1_triple_block(seed):
    # det K_123 = 9 C_{2~3~32~} C_{3~1~13~} C_{1~2~21~} at m = 3
    m = 3
    W = synthetic_weyl(1, m, 0, np.random.default_rng(seed))
    C = W.entries
    S = assemble_system(W, "even-k1-K", assume_cy=True)
    blk = [B for b, B in zip(S.blocks, S.diag_blocks) if len(b.rows) == 3][0]
    t = lambda a: _t(m, a)
    x = lambda a: a - 1
    expect = 9 * C[t(2), t(3), x(3), t(2)] * C[t(3), t(1), x(1), t(3)] * C[t(1), t(2), x(2), t(1)]
    assert abs(np.linalg.det(blk) - expect) <= 1e-9 * abs(expect)


@given(st.integers(0, 2 ** 31 - 1), st.sampled_from([(3, 0, "even-k2-K"), (4, 0, "even-k2-K"),
                                                     (3, 1, "odd-k4-K")]))
def test_k2_triple_block_product(seed, case_):
    m, eps, key = case_
    W = synthetic_weyl(4 if eps else 2, m, eps, np.random.default_rng(seed))
    C = W.entries
    S = assemble_system(W, key, assume_cy=True)
    t = lambda a: _t(m, a)
    for b, B in zip(S.blocks, S.diag_blocks):
        if len(b.rows) != 3:
            continue
        mu, nu, la = b.index
        expect = (C[t(mu), t(nu), t(mu), t(nu)] * C[t(nu), t(la), t(nu), t(la)]
                  * C[t(la), t(mu), t(la), t(mu)])
        assert abs(np.linalg.det(B) - expect) <= 1e-9 * abs(expect)


def test_sparse_map_is_cached():
    assert symbolic_system("odd-k0-L", 2) is symbolic_system("odd-k0-L", 2)


def test_zero_weyl_gives_zero_matrix():
    W = FrameTensor(np.zeros((6,) * 4), 3, 0)
    S = assemble_system(W, "even-k2-K", assume_cy=True)
    assert not S.matrix.any()
    assert not solve_trivial(S.matrix, DEFAULT_TOL).nonsingular
