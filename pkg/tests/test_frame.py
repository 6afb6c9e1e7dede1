import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullgs import fixtures as fx
from nullgs.chart import jet_at
from nullgs.errors import LabelMismatch
from nullgs.frame import (FrameLabel, Kind, RationalFrame, adapted_frame_jet, all_structures, eta,
                          frame_point, involutivity_check, label_of, nabla_weyl_from_gamma,
                          pointwise_null_frame, relabel_for, relabel_tensor, validate_frame)
from nullgs.poly import Poly


def test_labels_roundtrip():
    for m in (2, 3, 4):
        for pos in range(2 * m + 1):
            lab = label_of(pos, m)
            assert lab.position(m) == pos
            assert FrameLabel.parse(str(lab)) == lab
    with pytest.raises(LabelMismatch):
        FrameLabel.parse("q3")
    with pytest.raises(ValueError):
        FrameLabel(Kind.U, 0)


def test_eta_is_split_null_form():
    e = eta(3, 1)
    assert np.allclose(e, e.T)
    assert sorted(np.round(np.linalg.eigvalsh(e), 9)) == [-1, -1, -1, 1, 1, 1, 1]


@given(st.integers(4, 9), st.integers(0, 2 ** 31 - 1))
def test_pointwise_null_frame(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    g = A @ A.T + n * np.eye(n)
    E = pointwise_null_frame(g, n % 2)
    assert np.allclose(E.T @ g @ E, eta(n // 2, n % 2), atol=1e-9)


def test_adapted_jet_keeps_pairing_to_first_order(even_fixture):
    chart, frame = even_fixture.chart, even_fixture.frame
    x0 = even_fixture.points[0]
    h = 1e-5
    e = eta(chart.m, chart.epsilon)
    for p in range(chart.n):
        x = x0.copy()
        x[p] += h
        E, _ = frame.jet(x)
        # pairing error is second order in the displacement
        assert np.abs(E.T @ chart.eval_g(x) @ E - e).max() < 1e-7


def test_connection_is_metric(odd_fixture):
    fp = frame_point(odd_fixture.chart, odd_fixture.frame, odd_fixture.points[0])
    G = fp.gamma
    assert np.abs(G + G.transpose(0, 2, 1)).max() < 1e-10 * max(1.0, np.abs(G).max())


@pytest.mark.parametrize("name", ["odd_fixture", "even_fixture"])
def test_weyl_derivative_two_routes(name, request):
    f = request.getfixturevalue(name)
    fp = frame_point(f.chart, f.frame, f.points[0])
    alt = nabla_weyl_from_gamma(fp)
    scale = np.abs(fp.nabla_weyl).max()
    assert np.abs(alt - fp.nabla_weyl).max() < 1e-9 * scale


def test_validate_frame_rejects_wrong_dimension():
    chart = fx.flat(6).chart
    frame = fx.coordinate_frame(5)
    with pytest.raises(LabelMismatch):
        validate_frame(chart, frame, [np.zeros(6)])


def test_validate_frame_flags_bad_pairing():
    n = 6
    num = [[Poly.const(n, 2.0 if i == j else 0.0) for i in range(n)] for j in (3, 4, 5, 0, 1, 2)]
    v = validate_frame(fx.flat(n).chart, RationalFrame(num), [np.zeros(n)])
    assert not v.passed


def test_all_structures_count():
    for m in range(1, 5):
        S = all_structures(m)
        assert len(S) == 2 ** m and len(set(S)) == 2 ** m


@given(st.integers(2, 4), st.integers(0, 1), st.data())
def test_relabel_is_an_involution(m, eps, data):
    M = data.draw(st.sets(st.integers(1, m)))
    perm = relabel_for(M, m, eps)
    assert np.array_equal(perm[perm], np.arange(2 * m + eps))
    e = eta(m, eps)
    assert np.array_equal(relabel_tensor(e, perm), e)


def test_relabel_rejects_bad_subset():
    with pytest.raises(ValueError):
        relabel_for({4}, 3, 0)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_ppwave_structures_involutive(n):
    f = fx.pp_wave(n, count=2)
    assert validate_frame(f.chart, f.frame, f.points).passed
    inv = involutivity_check(f.chart, f.frame, range(1, f.chart.m + 1), f.points)
    assert inv.N_involutive and inv.N_perp_involutive
    assert max(inv.gamma_residual + inv.bracket_residual) == 0


def test_generic_frame_structure_not_involutive(even_fixture):
    inv = involutivity_check(even_fixture.chart, even_fixture.frame, {1, 2, 3}, even_fixture.points)
    assert not inv.integrable


def test_adapted_jet_without_twist_is_deterministic(rng):
    chart = fx.random_fixture(5, 2, rng).chart
    jet = jet_at(chart, np.full(5, 0.1))
    a, b = adapted_frame_jet(jet), adapted_frame_jet(jet)
    assert np.array_equal(a.dE0, b.dE0)
