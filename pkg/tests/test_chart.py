import itertools
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullgs.chart import (ChartMetric, curvature_at, curvature_residuals, flat_metric, jet_at,
                          random_metric)
from nullgs.errors import DegenerateMetric
from nullgs.poly import Poly

sp = pytest.importorskip("sympy")

POINT = [0.3, -0.2, 0.1, 0.25, -0.15]


@lru_cache(maxsize=None)
def sympy_oracle():
    """Riemann, Ricci and Cotton-York of a small 5d metric, computed symbolically."""
    n = 5
    X = sp.symbols(f"x0:{n}")
    G = sp.zeros(n)
    G[0, 2] = G[2, 0] = G[1, 3] = G[3, 1] = G[4, 4] = 1
    G[0, 0] = X[1] ** 2 + X[2] * X[3]
    G[1, 1] = X[0] * X[4]
    G[0, 1] = G[1, 0] = X[3] ** 2 / 3
    G[4, 4] = 1 + X[0] * X[1] / 2
    Gi = G.inv()
    Gam = [[[sp.simplify(sum(Gi[a, e] * (sp.diff(G[e, b], X[c]) + sp.diff(G[e, c], X[b])
                                          - sp.diff(G[b, c], X[e])) for e in range(n)) / 2)
             for c in range(n)] for b in range(n)] for a in range(n)]
    R = sp.MutableDenseNDimArray.zeros(n, n, n, n)
    for a, b, c, d in itertools.product(range(n), repeat=4):
        R[a, b, c, d] = (sp.diff(Gam[a][d][b], X[c]) - sp.diff(Gam[a][c][b], X[d])
                         + sum(Gam[a][c][f] * Gam[f][d][b] - Gam[a][d][f] * Gam[f][c][b] for f in range(n)))
    Ric = sp.Matrix(n, n, lambda b, d: sum(R[a, b, a, d] for a in range(n)))
    S = sum(Gi[b, d] * Ric[b, d] for b in range(n) for d in range(n))
    P = (Ric - S * G / (2 * (n - 1))) / (n - 2)
    # nabla_c P_ab
    nP = [[[sp.diff(P[a, b], X[c]) - sum(Gam[e][c][a] * P[e, b] + Gam[e][c][b] * P[a, e] for e in range(n))
            for c in range(n)] for b in range(n)] for a in range(n)]
    sub = dict(zip(X, POINT))
    num = lambda e: complex(sp.N(e.subs(sub)))
    Rl = np.array([[[[num(sum(G[a, e] * R[e, b, c, d] for e in range(n))) for d in range(n)]
                     for c in range(n)] for b in range(n)] for a in range(n)])
    ric = np.array([[num(Ric[b, d]) for d in range(n)] for b in range(n)])
    nPv = np.array([[[num(nP[a][b][c]) for c in range(n)] for b in range(n)] for a in range(n)])

    def to_poly(e):
        e = sp.expand(e)
        if e == 0:
            return Poly.zero(n)
        return Poly(n, {m: complex(c) for m, c in sp.Poly(e, *X).terms()})

    chart = ChartMetric.from_rows([[to_poly(G[a, b]) for b in range(n)] for a in range(n)])
    return chart, Rl, ric, nPv


def test_riemann_against_symbolic_oracle():
    chart, Rl, ric, _ = sympy_oracle()
    c = curvature_at(jet_at(chart, POINT))
    # stored convention: riemann[a,b,c,d] = R_abdc with R^a_bcd = d_c Gam^a_db - ...
    assert np.allclose(c.riemann, Rl.transpose(0, 1, 3, 2), atol=1e-12)
    assert np.allclose(c.ricci, ric, atol=1e-12)


def test_cotton_york_against_symbolic_oracle():
    chart, _, _, nP = sympy_oracle()
    c = curvature_at(jet_at(chart, POINT))
    # A_xyz = nabla_y P_zx - nabla_z P_yx
    A = np.einsum("zxy->xyz", nP) - np.einsum("yxz->xyz", nP)
    assert np.allclose(c.cotton_york, A, atol=1e-12)


def test_flat_metric_has_zero_curvature():
    for n in (4, 5, 6, 7):
        c = curvature_at(jet_at(flat_metric(n), np.full(n, 0.1)))
        assert np.abs(c.riemann).max() == 0
        assert np.abs(c.cotton_york).max() == 0


def test_dimension_and_symmetry_validation():
    with pytest.raises(ValueError):
        flat_metric(3)
    g = flat_metric(4)
    rows = [list(r) for r in g.g]
    rows[0][1] = Poly.const(4, 2.0)
    with pytest.raises(ValueError):
        ChartMetric.from_rows(rows)


def test_degenerate_metric_detected():
    n = 4
    z = Poly.zero(n)
    rows = [[z] * n for _ in range(n)]
    rows[0][2] = rows[2][0] = Poly.var(n, 0)
    rows[1][3] = rows[3][1] = Poly.const(n, 1.0)
    with pytest.raises(DegenerateMetric):
        jet_at(ChartMetric.from_rows(rows), np.zeros(n))


def test_metric_json_roundtrip(rng):
    g = random_metric(5, 2, rng)
    assert ChartMetric.from_json(g.to_json()).g == g.g


@given(st.integers(5, 7), st.integers(0, 2 ** 31 - 1))
def test_curvature_identities_hold(n, seed):
    rng = np.random.default_rng(seed)
    chart = random_metric(n, 3, rng)
    x = 0.3 * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
    jet = jet_at(chart, x)
    res = curvature_residuals(curvature_at(jet), jet.ginv)
    assert max(res.values()) < 1e-8, res


def test_conformal_scaling_of_weyl(rng):
    # C_abcd scales with the metric: C[w g] = w C[g] (all lowered)
    chart = random_metric(6, 2, rng)
    w = Poly.const(6, 1.0) + Poly.var(6, 1) * 0.4
    x = np.full(6, 0.2 + 0.1j)
    c0 = curvature_at(jet_at(chart, x))
    c1 = curvature_at(jet_at(chart.scaled(w), x))
    assert np.allclose(c1.weyl, w(x) * c0.weyl, rtol=1e-9, atol=1e-12)
