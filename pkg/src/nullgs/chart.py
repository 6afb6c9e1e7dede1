"""Curvature of polynomial metrics at a point.

Index conventions (all coordinate arrays):

* ``dg[c, a, b] = d_c g_ab``; higher derivative axes are prepended the same way.
* ``chr[a, b, c] = Gamma^a_{bc}`` (Christoffel symbols of the second kind).
* ``riemann[x, y, z, w] = g(R(d_x, d_y) d_z, d_w)`` with
  ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``.
* ``ricci[y, z] = g^{xw} riemann[x, y, z, w]``.
* The splitting used is
  ``R = C - g(X,Z)P(Y,W) + g(X,W)P(Y,Z) + g(Y,Z)P(X,W) - g(Y,W)P(X,Z)``.
  Contracting X with W gives ``ricci = (n-2) P + J g`` and
  ``scalar = 2(n-1) J``, so ``P = (ricci - scalar g / (2(n-1))) / (n-2)``.
* ``cotton_york[x, y, z] = (nabla_y P)(z, x) - (nabla_z P)(y, x)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateMetric, SymmetryViolation
from .poly import Poly, derivative_stack, random_poly


@dataclass(frozen=True)
class ChartMetric:
    g: tuple[tuple[Poly, ...], ...]
    epsilon: int
    coords: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.g)
        if not 4 <= n <= 9:
            raise ValueError(f"dimension {n} outside 4..9")
        if self.epsilon not in (0, 1) or (n - self.epsilon) % 2:
            raise ValueError("epsilon inconsistent with dimension")
        for a in range(n):
            if len(self.g[a]) != n:
                raise ValueError("metric must be square")
            for b in range(a):
                if self.g[a][b] != self.g[b][a]:
                    raise ValueError("metric is not symmetric")
        if not self.coords:
            object.__setattr__(self, "coords", tuple(f"x{i}" for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.g)

    @property
    def m(self) -> int:
        return (self.n - self.epsilon) // 2

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Poly]], coords: Sequence[str] | None = None) -> "ChartMetric":
        n = len(rows)
        return cls(tuple(tuple(r) for r in rows), n % 2, tuple(coords or ()))

    def flat_polys(self) -> list[Poly]:
        return [self.g[a][b] for a in range(self.n) for b in range(self.n)]

    def eval_g(self, point) -> np.ndarray:
        v = derivative_stack(self.flat_polys(), point, 0)[0]
        return v.reshape(self.n, self.n)

    def scaled(self, factor: Poly) -> "ChartMetric":
        rows = [[factor * self.g[a][b] for b in range(self.n)] for a in range(self.n)]
        return ChartMetric(tuple(tuple(r) for r in rows), self.epsilon, self.coords)

    # metric file: n x n upper-triangular list of Poly JSON objects
    def to_json(self) -> dict:
        upper = [[self.g[a][b].to_json(self.coords) for b in range(a, self.n)] for a in range(self.n)]
        return {"coords": list(self.coords), "metric": upper}

    @classmethod
    def from_json(cls, obj) -> "ChartMetric":
        upper = obj["metric"]
        n = len(upper)
        rows = [[None] * n for _ in range(n)]
        for a in range(n):
            if len(upper[a]) != n - a:
                raise ValueError("metric rows must be upper-triangular")
            for j, entry in enumerate(upper[a]):
                b = a + j
                p = Poly.from_json(entry)
                rows[a][b] = rows[b][a] = p
        coords = obj.get("coords") or [f"x{i}" for i in range(n)]
        return cls.from_rows(rows, coords)


def flat_metric(n: int) -> ChartMetric:
    """``2 sum du^mu dv^mu (+ dz^2)`` in coordinates ``u1..um, v1..vm, (z)``."""
    m = n // 2
    z = Poly.zero(n)
    rows = [[z] * n for _ in range(n)]
    for mu in range(m):
        rows[mu][m + mu] = rows[m + mu][mu] = Poly.const(n, 1.0)
    if n % 2:
        rows[n - 1][n - 1] = Poly.const(n, 1.0)
    coords = [f"u{i + 1}" for i in range(m)] + [f"v{i + 1}" for i in range(m)] + (["z"] if n % 2 else [])
    return ChartMetric.from_rows(rows, coords)


def random_metric(n: int, degree: int, rng: np.random.Generator, amplitude: float = 0.3) -> ChartMetric:
    """Flat metric plus a random symmetric polynomial perturbation."""
    base = flat_metric(n)
    rows = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            p = base.g[a][b] + random_poly(n, degree, rng, amplitude / n, min_degree=1)
            rows[a][b] = rows[b][a] = p
    return ChartMetric.from_rows(rows, base.coords)


@dataclass(frozen=True)
class CoordJet:
    point: np.ndarray
    g0: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray
    dddg: np.ndarray
    ginv: np.ndarray
    dginv: np.ndarray
    ddginv: np.ndarray

    @property
    def n(self) -> int:
        return self.g0.shape[0]


def jet_at(chart: ChartMetric, point, degeneracy: float = 1e-8) -> CoordJet:
    n = chart.n
    x = np.asarray(point, dtype=complex)
    v, d1, d2, d3 = derivative_stack(chart.flat_polys(), x, 3)
    g0 = v.reshape(n, n)
    dg = d1.reshape(n, n, n)
    ddg = d2.reshape(n, n, n, n)
    dddg = d3.reshape(n, n, n, n, n)
    scale = np.abs(g0).max()
    if scale == 0 or abs(np.linalg.det(g0)) <= degeneracy * scale**n:
        raise DegenerateMetric(f"|det g| below floor at {x}")
    ginv = np.linalg.inv(g0)
    # d(g^-1) = -g^-1 dg g^-1
    dginv = -np.einsum("ij,cjk,kl->cil", ginv, dg, ginv)
    ddginv = (
        -np.einsum("dij,cjk,kl->dcil", dginv, dg, ginv)
        - np.einsum("ij,dcjk,kl->dcil", ginv, ddg, ginv)
        - np.einsum("ij,cjk,dkl->dcil", ginv, dg, dginv)
    )
    return CoordJet(x, g0, dg, ddg, dddg, ginv, dginv, ddginv)


@dataclass(frozen=True)
class CurvatureAtPoint:
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: complex
    rho: np.ndarray
    weyl: np.ndarray
    cotton_york: np.ndarray
    # extras used by frame-level code
    christoffel: np.ndarray = field(repr=False, default=None)
    d_weyl: np.ndarray = field(repr=False, default=None)
    nabla_weyl: np.ndarray = field(repr=False, default=None)


def _christoffel_stack(jet: CoordJet):
    """Gamma^a_bc with first and second coordinate derivatives."""
    dg, ddg, dddg = jet.dg, jet.ddg, jet.dddg
    # first kind: G1[d,b,c] = 1/2 (d_b g_dc + d_c g_db - d_d g_bc)
    g1 = 0.5 * (np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg)
    dg1 = 0.5 * (np.einsum("ebdc->edbc", ddg) + np.einsum("ecdb->edbc", ddg) - ddg)
    ddg1 = 0.5 * (np.einsum("febdc->fedbc", dddg) + np.einsum("fecdb->fedbc", dddg) - dddg)
    gi, dgi, ddgi = jet.ginv, jet.dginv, jet.ddginv
    chr_ = np.einsum("ad,dbc->abc", gi, g1)
    dchr = np.einsum("ead,dbc->eabc", dgi, g1) + np.einsum("ad,edbc->eabc", gi, dg1)
    ddchr = (
        np.einsum("fead,dbc->feabc", ddgi, g1)
        + np.einsum("ead,fdbc->feabc", dgi, dg1)
        + np.einsum("fad,edbc->feabc", dgi, dg1)
        + np.einsum("ad,fedbc->feabc", gi, ddg1)
    )
    return chr_, dchr, ddchr


def _riemann_stack(jet: CoordJet, chr_, dchr, ddchr):
    # R^a_{bcd} = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb
    rup = (
        np.einsum("cadb->abcd", dchr)
        - np.einsum("dacb->abcd", dchr)
        + np.einsum("ace,edb->abcd", chr_, chr_)
        - np.einsum("ade,ecb->abcd", chr_, chr_)
    )
    drup = (
        np.einsum("fcadb->fabcd", ddchr)
        - np.einsum("fdacb->fabcd", ddchr)
        + np.einsum("face,edb->fabcd", dchr, chr_)
        + np.einsum("ace,fedb->fabcd", chr_, dchr)
        - np.einsum("fade,ecb->fabcd", dchr, chr_)
        - np.einsum("ade,fecb->fabcd", chr_, dchr)
    )
    # all-lowered ordering R(x=c, y=d, z=b, w)
    riem = np.einsum("wa,abcd->cdbw", jet.g0, rup)
    driem = np.einsum("fwa,abcd->fcdbw", jet.dg, rup) + np.einsum("wa,fabcd->fcdbw", jet.g0, drup)
    return riem, driem


def riemann_at(jet: CoordJet) -> np.ndarray:
    chr_, dchr, ddchr = _christoffel_stack(jet)
    return _riemann_stack(jet, chr_, dchr, ddchr)[0]


def _kulkarni(g: np.ndarray, p: np.ndarray) -> np.ndarray:
    """-g(X,Z)P(Y,W) + g(X,W)P(Y,Z) + g(Y,Z)P(X,W) - g(Y,W)P(X,Z)."""
    return (
        -np.einsum("xz,yw->xyzw", g, p)
        + np.einsum("xw,yz->xyzw", g, p)
        + np.einsum("yz,xw->xyzw", g, p)
        - np.einsum("yw,xz->xyzw", g, p)
    )


def _rho_from(ginv, g, riem):
    n = g.shape[0]
    ric = np.einsum("xw,xyzw->yz", ginv, riem)
    scal = np.einsum("yz,yz->", ginv, ric)
    rho = (ric - scal / (2 * (n - 1)) * g) / (n - 2)
    return ric, scal, rho


def _max(a) -> float:
    return float(np.abs(a).max()) if np.size(a) else 0.0


def rho_weyl_at(jet: CoordJet, riemann: np.ndarray, rel: float = 1e-10, floor: float = 1e-12):
    n = jet.n
    if n < 4:
        raise ValueError("splitting needs n >= 4")
    _, _, rho = _rho_from(jet.ginv, jet.g0, riemann)
    weyl = riemann - _kulkarni(jet.g0, rho)
    trace = np.einsum("xw,xyzw->yz", jet.ginv, weyl)
    if _max(trace) > rel * max(_max(weyl), _max(riemann)) + floor:
        raise SymmetryViolation(f"Weyl trace {_max(trace):.3e} not small")
    return rho, weyl


def curvature_at(jet: CoordJet) -> CurvatureAtPoint:
    """Full curvature record including derivative data for frame work."""
    n = jet.n
    g, gi = jet.g0, jet.ginv
    chr_, dchr, ddchr = _christoffel_stack(jet)
    riem, driem = _riemann_stack(jet, chr_, dchr, ddchr)
    ric, scal, rho = _rho_from(gi, g, riem)
    weyl = riem - _kulkarni(g, rho)
    dric = np.einsum("fxw,xyzw->fyz", jet.dginv, riem) + np.einsum("xw,fxyzw->fyz", gi, driem)
    dscal = np.einsum("fyz,yz->f", jet.dginv, ric) + np.einsum("yz,fyz->f", gi, dric)
    c = 1.0 / (2 * (n - 1))
    drho = (dric - c * (dscal[:, None, None] * g[None] + scal * jet.dg)) / (n - 2)
    dkn = np.stack([_kulkarni(jet.dg[f], rho) + _kulkarni(g, drho[f]) for f in range(n)])
    dweyl = driem - dkn
    # nabla_d P_ab
    nrho = drho - np.einsum("eda,eb->dab", chr_, rho) - np.einsum("edb,ae->dab", chr_, rho)
    cy = np.einsum("yzx->xyz", nrho) - np.einsum("zyx->xyz", nrho)
    nweyl = (
        dweyl
        - np.einsum("efx,eyzw->fxyzw", chr_, weyl)
        - np.einsum("efy,xezw->fxyzw", chr_, weyl)
        - np.einsum("efz,xyew->fxyzw", chr_, weyl)
        - np.einsum("efw,xyze->fxyzw", chr_, weyl)
    )
    return CurvatureAtPoint(riem, ric, complex(scal), rho, weyl, cy, chr_, dweyl, nweyl)


def cotton_york_at(jet: CoordJet) -> np.ndarray:
    return curvature_at(jet).cotton_york


def curvature_residuals(curv: CurvatureAtPoint, ginv: np.ndarray) -> dict[str, float]:
    """Relative residuals of every algebraic identity the curvature must satisfy."""
    R, C, A = curv.riemann, curv.weyl, curv.cotton_york
    sR, sC, sA = _max(R) or 1.0, _max(C) or 1.0, _max(A) or 1.0
    out = {
        "riemann_antisym_12": _max(R + R.transpose(1, 0, 2, 3)) / sR,
        "riemann_antisym_34": _max(R + R.transpose(0, 1, 3, 2)) / sR,
        "riemann_pair_swap": _max(R - R.transpose(2, 3, 0, 1)) / sR,
        "riemann_bianchi1": _max(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)) / sR,
        "weyl_trace": max(
            _max(np.einsum("ac,abcd->bd", ginv, C)),
            _max(np.einsum("ad,abcd->bc", ginv, C)),
        ) / sC,
        "cy_antisym": _max(A + A.transpose(0, 2, 1)) / sA,
        "cy_cyclic": _max(A + A.transpose(1, 2, 0) + A.transpose(2, 0, 1)) / sA,
        "cy_trace": max(_max(np.einsum("ab,abc->c", ginv, A)), _max(np.einsum("ac,abc->b", ginv, A))) / sA,
    }
    return out
