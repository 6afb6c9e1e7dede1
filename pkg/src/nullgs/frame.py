"""Null frames, connection coefficients and canonical null structures.

Frame labels are ordered ``x1..xm, t1..tm, z0`` (``t`` marks the tilde
vectors), so frame index ``mu-1`` is Unprimed(mu), ``m+mu-1`` is Tilde(mu)
and ``2m`` is Zero.  In this order the canonical metric ``eta`` has
``eta[mu, m+mu] = 1`` and ``eta[2m, 2m] = 1`` and is its own inverse.

Connection coefficients are ``gamma[a, b, c] = g(nabla_{xi_a} xi_b, xi_c)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .chart import ChartMetric, CurvatureAtPoint, curvature_at, jet_at
from .errors import (DegenerateMetric, EvaluationFailure, LabelMismatch,
                     OracleDisagreement)
from .poly import Poly, derivative_stack


class Kind(Enum):
    U = "x"
    T = "t"
    Z = "z"


@dataclass(frozen=True, order=True)
class FrameLabel:
    kind: Kind
    index: int = 0

    def __post_init__(self):
        if self.kind is Kind.Z and self.index != 0:
            raise ValueError("Zero label carries no index")
        if self.kind is not Kind.Z and self.index < 1:
            raise ValueError("indices start at 1")

    def __str__(self):
        return f"{self.kind.value}{self.index}"

    @classmethod
    def parse(cls, s: str) -> "FrameLabel":
        s = s.strip()
        if s == "z0":
            return cls(Kind.Z)
        kinds = {"x": Kind.U, "t": Kind.T}
        if not s or s[0] not in kinds:
            raise LabelMismatch(f"bad label {s!r}")
        return cls(kinds[s[0]], int(s[1:]))

    def position(self, m: int) -> int:
        if self.kind is Kind.U:
            return self.index - 1
        if self.kind is Kind.T:
            return m + self.index - 1
        return 2 * m


def canonical_labels(m: int, epsilon: int) -> list[FrameLabel]:
    labs = [FrameLabel(Kind.U, i) for i in range(1, m + 1)]
    labs += [FrameLabel(Kind.T, i) for i in range(1, m + 1)]
    if epsilon:
        labs.append(FrameLabel(Kind.Z))
    return labs


def label_of(pos: int, m: int) -> FrameLabel:
    if pos < m:
        return FrameLabel(Kind.U, pos + 1)
    if pos < 2 * m:
        return FrameLabel(Kind.T, pos - m + 1)
    return FrameLabel(Kind.Z)


def eta(m: int, epsilon: int) -> np.ndarray:
    N = 2 * m + epsilon
    e = np.zeros((N, N))
    for mu in range(m):
        e[mu, m + mu] = e[m + mu, mu] = 1.0
    if epsilon:
        e[2 * m, 2 * m] = 1.0
    return e


def _check_labels(labels: Sequence[FrameLabel], m: int, epsilon: int):
    if list(labels) != canonical_labels(m, epsilon):
        raise LabelMismatch(f"labels {[str(l) for l in labels]} do not match (m={m}, eps={epsilon})")


class FrameField:
    """Base class: subclasses provide ``jet(point) -> (E, dE)``.

    ``E[i, a]`` is the coordinate component i of frame vector a and
    ``dE[p, i, a] = d_p E[i, a]``.
    """

    n: int
    m: int
    epsilon: int
    labels: tuple[FrameLabel, ...]

    def jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError


class RationalFrame(FrameField):
    """Frame vectors with components ``num / den`` (both :class:`Poly`)."""

    def __init__(self, num: Sequence[Sequence[Poly]], den: Sequence[Sequence[Poly]] | None = None,
                 labels: Sequence[FrameLabel] | None = None):
        self.N = len(num)
        self.n = num[0][0].n
        if self.N != self.n:
            raise LabelMismatch("frame must have one vector per dimension")
        self.epsilon = self.n % 2
        self.m = self.n // 2
        one = Poly.const(self.n, 1.0)
        self.num = [list(v) for v in num]
        self.den = [list(v) for v in den] if den is not None else [[one] * self.n for _ in num]
        self.labels = tuple(labels) if labels is not None else tuple(canonical_labels(self.m, self.epsilon))
        _check_labels(self.labels, self.m, self.epsilon)

    def jet(self, point):
        n = self.n
        flat = [self.num[a][i] for a in range(n) for i in range(n)]
        flat += [self.den[a][i] for a in range(n) for i in range(n)]
        v, d1 = derivative_stack(flat, point, 1)
        nv, dv = v[: n * n].reshape(n, n), v[n * n:].reshape(n, n)
        nd1, dd1 = d1[:, : n * n].reshape(n, n, n), d1[:, n * n:].reshape(n, n, n)
        if np.any(np.abs(dv) == 0):
            raise EvaluationFailure("frame denominator vanishes at point")
        E = (nv / dv).T
        dE = ((nd1 * dv - nv * dd1) / dv**2).transpose(0, 2, 1)
        return E, dE

    def to_json(self, coords=None) -> dict:
        vecs = [[{"num": self.num[a][i].to_json(coords), "den": self.den[a][i].to_json(coords)}
                 for i in range(self.n)] for a in range(self.n)]
        return {"labels": [str(l) for l in self.labels], "vectors": vecs}

    @classmethod
    def from_json(cls, obj) -> "RationalFrame":
        vecs = obj["vectors"]
        num = [[Poly.from_json(c["num"]) for c in v] for v in vecs]
        den = [[Poly.from_json(c["den"]) for c in v] for v in vecs]
        labels = [FrameLabel.parse(s) for s in obj["labels"]] if "labels" in obj else None
        return cls(num, den, labels)


class CoframeFrame(FrameField):
    """Frame dual to a polynomial coframe ``theta[a][i]`` (row a is the 1-form theta^a)."""

    def __init__(self, theta: Sequence[Sequence[Poly]], labels: Sequence[FrameLabel] | None = None):
        self.theta = [list(r) for r in theta]
        self.n = len(theta)
        self.epsilon = self.n % 2
        self.m = self.n // 2
        self.labels = tuple(labels) if labels is not None else tuple(canonical_labels(self.m, self.epsilon))
        _check_labels(self.labels, self.m, self.epsilon)

    def jet(self, point):
        n = self.n
        v, d1 = derivative_stack([p for r in self.theta for p in r], point, 1)
        th = v.reshape(n, n)
        dth = d1.reshape(n, n, n)
        if abs(np.linalg.det(th)) < 1e-12:
            raise EvaluationFailure("coframe is singular at point")
        E = np.linalg.inv(th)
        dE = -np.einsum("ia,pab,bj->pij", E, dth, E)
        return E, dE

    def metric(self) -> ChartMetric:
        """``g = theta^T eta theta`` as exact polynomials."""
        n = self.n
        et = eta(self.m, self.epsilon)
        rows = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                acc = Poly.zero(n)
                for a in range(n):
                    for b in range(n):
                        if et[a, b]:
                            acc = acc + self.theta[a][i] * self.theta[b][j]
                rows[i][j] = rows[j][i] = acc
        return ChartMetric.from_rows(rows)

    def to_json(self, coords=None) -> dict:
        return {"labels": [str(l) for l in self.labels],
                "coframe": [[p.to_json(coords) for p in r] for r in self.theta]}

    @classmethod
    def from_json(cls, obj) -> "CoframeFrame":
        theta = [[Poly.from_json(p) for p in r] for r in obj["coframe"]]
        labels = [FrameLabel.parse(s) for s in obj["labels"]] if "labels" in obj else None
        return cls(theta, labels)


class RescaledFrame(FrameField):
    """``xi / omega`` for a polynomial ``omega``: null for the metric ``omega^2 g``."""

    def __init__(self, base: FrameField, omega: Poly):
        self.base, self.omega = base, omega
        self.n, self.m, self.epsilon, self.labels = base.n, base.m, base.epsilon, base.labels

    def jet(self, point):
        E, dE = self.base.jet(point)
        v, d1 = derivative_stack([self.omega], point, 1)
        w, dw = v[0], d1[:, 0]
        if w == 0:
            raise EvaluationFailure("conformal factor vanishes at point")
        return E / w, dE / w - np.einsum("p,ia->pia", dw, E) / w**2


def frame_from_json(obj) -> FrameField:
    if "coframe" in obj:
        return CoframeFrame.from_json(obj)
    return RationalFrame.from_json(obj)


class JetFrame(FrameField):
    """Affine frame field ``E(x) = E0 + sum_p (x - x0)_p dE[p]`` around ``x0``.

    Built by :func:`adapted_frame_jet`; it is null-normalized at ``x0`` to
    first order, which is all that identities involving first derivatives of
    the frame see.
    """

    def __init__(self, x0, E0, dE):
        self.x0 = np.asarray(x0, dtype=complex)
        self.E0 = np.asarray(E0)
        self.dE0 = np.asarray(dE)
        self.n = self.E0.shape[0]
        self.epsilon = self.n % 2
        self.m = self.n // 2
        self.labels = tuple(canonical_labels(self.m, self.epsilon))

    def jet(self, point):
        dx = np.asarray(point, dtype=complex) - self.x0
        return self.E0 + np.einsum("p,pia->ia", dx, self.dE0), self.dE0


def pointwise_null_frame(g0: np.ndarray, epsilon: int, tol: float = 1e-10) -> np.ndarray:
    """Columns form a frame with ``E^T g0 E = eta`` (complex bilinear, no conjugation)."""
    g0 = np.asarray(g0, dtype=complex)
    n = g0.shape[0]
    if g0.shape != (n, n) or np.abs(g0 - g0.T).max() > tol * max(1.0, np.abs(g0).max()):
        raise DegenerateMetric("g0 must be square and symmetric")
    m = (n - epsilon) // 2
    if 2 * m + epsilon != n:
        raise DegenerateMetric("epsilon inconsistent with size")
    scale = np.abs(g0).max()
    if scale == 0 or abs(np.linalg.det(g0)) <= 1e-8 * scale**n:
        raise DegenerateMetric("g0 is degenerate")
    et = eta(m, epsilon)
    if np.abs(g0 - et).max() <= 1e-14:
        return np.eye(n, dtype=complex)
    # orthonormal basis by bilinear Gram-Schmidt with largest-norm pivoting
    cand = [np.eye(n, dtype=complex)[:, i] for i in range(n)]
    basis: list[np.ndarray] = []
    for _ in range(n):
        proj = []
        for v in cand:
            w = v.copy()
            for b in basis:
                w = w - (b @ g0 @ v) * b
            proj.append(w)
        norms = [abs(w @ g0 @ w) for w in proj]
        k = int(np.argmax(norms))
        w = proj[k]
        drop = k
        if norms[k] < 1e-6 * scale:
            best = (-1.0, None, None)
            for i, j in itertools.combinations(range(len(proj)), 2):
                s = proj[i] + proj[j]
                val = abs(s @ g0 @ s)
                if val > best[0]:
                    best = (val, s, i)
            _, w, drop = best
        w = w / np.sqrt(w @ g0 @ w)
        basis.append(w)
        cand.pop(drop)
    F = np.stack(basis, axis=1)
    E = np.zeros((n, n), dtype=complex)
    r = 1 / np.sqrt(2)
    for mu in range(m):
        e1, e2 = F[:, 2 * mu], F[:, 2 * mu + 1]
        E[:, mu] = r * (e1 - 1j * e2)
        E[:, m + mu] = r * (e1 + 1j * e2)
    if epsilon:
        E[:, 2 * m] = F[:, n - 1]
    return E


def adapted_frame_jet(jet, rng: np.random.Generator | None = None, twist: float = 0.5) -> JetFrame:
    """Affine frame normalized to first order at the jet point.

    ``dE_p = -1/2 g^-1 (d_p g) E + E Omega_p`` with ``Omega_p`` in so(eta)
    keeps ``E^T g E = eta`` to first order; random ``Omega_p`` avoids
    accidental alignment of the frame with the coordinates.
    """
    n = jet.n
    eps = n % 2
    m = n // 2
    E0 = pointwise_null_frame(jet.g0, eps)
    et = eta(m, eps)
    dE = -0.5 * np.einsum("ij,pjk,ka->pia", jet.ginv, jet.dg, E0)
    if rng is not None and twist:
        for p in range(n):
            S = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            S = twist * (S - S.T) / 2
            omega = et @ S  # eta Omega antisymmetric
            dE[p] = dE[p] + E0 @ omega
    return JetFrame(jet.point, E0, dE)


@dataclass(frozen=True)
class ConnectionCoeffs:
    values: np.ndarray
    m: int
    epsilon: int

    def __getitem__(self, key) -> complex:
        a, b, c = (FrameLabel.parse(k) if isinstance(k, str) else k for k in key)
        return complex(self.values[a.position(self.m), b.position(self.m), c.position(self.m)])

    def metricity_residual(self) -> float:
        v = self.values
        return float(np.abs(v + v.transpose(0, 2, 1)).max())


@dataclass(frozen=True)
class FramePoint:
    """Frame-level data at one point."""

    point: np.ndarray
    E: np.ndarray
    dE: np.ndarray
    eta: np.ndarray
    gamma: np.ndarray       # Gamma_abc
    gamma_up: np.ndarray    # Gamma_ab^c
    weyl: np.ndarray        # C_abcd
    d_weyl: np.ndarray      # xi_a (C_bcde)
    nabla_weyl: np.ndarray  # (nabla_a C)_bcde from the coordinate route
    cotton_york: np.ndarray
    rho: np.ndarray
    brackets: np.ndarray    # g(xi_c, [xi_a, xi_b]) as [a, b, c]
    curvature: CurvatureAtPoint
    pairing: np.ndarray     # E^T g E


def to_frame(t: np.ndarray, E: np.ndarray) -> np.ndarray:
    out = t
    for _ in range(t.ndim):
        out = np.tensordot(out, E, axes=([0], [0]))
    return out


def frame_point(chart: ChartMetric, frame: FrameField, point) -> FramePoint:
    jet = jet_at(chart, point)
    curv = curvature_at(jet)
    E, dE = frame.jet(point)
    g = jet.g0
    m, eps = chart.m, chart.epsilon
    et = eta(m, eps)
    pairing = E.T @ g @ E
    # Gamma_abc = E^p_a (d_p E^i_b + Chr^i_pk E^k_b) g_ij E^j_c
    cov = dE + np.einsum("ipk,kb->pib", curv.christoffel, E, optimize=True)
    gamma = np.einsum("pa,pib,ij,jc->abc", E, cov, g, E, optimize=True)
    gamma_up = np.einsum("abd,dc->abc", gamma, et, optimize=True)
    C = curv.weyl
    weyl = to_frame(C, E)
    # d_p of the frame-component field, then contract with E^p_a
    dW = (
        np.einsum("pijkl,ia,jb,kc,ld->pabcd", curv.d_weyl, E, E, E, E, optimize=True)
        + np.einsum("ijkl,pia,jb,kc,ld->pabcd", C, dE, E, E, E, optimize=True)
        + np.einsum("ijkl,ia,pjb,kc,ld->pabcd", C, E, dE, E, E, optimize=True)
        + np.einsum("ijkl,ia,jb,pkc,ld->pabcd", C, E, E, dE, E, optimize=True)
        + np.einsum("ijkl,ia,jb,kc,pld->pabcd", C, E, E, E, dE, optimize=True)
    )
    d_weyl = np.einsum("pe,pabcd->eabcd", E, dW, optimize=True)
    nabla_weyl = to_frame(curv.nabla_weyl, E)
    cy = to_frame(curv.cotton_york, E)
    rho = to_frame(curv.rho, E)
    br = np.einsum("pa,pib->iab", E, dE, optimize=True) - np.einsum("pb,pia->iab", E, dE, optimize=True)
    brackets = np.einsum("iab,ij,jc->abc", br, g, E, optimize=True)
    return FramePoint(np.asarray(point, dtype=complex), E, dE, et, gamma, gamma_up, weyl, d_weyl,
                      nabla_weyl, cy, rho, brackets, curv, pairing)


def nabla_weyl_from_gamma(fp: FramePoint) -> np.ndarray:
    """``(nabla_a C)_bcde`` from directional derivatives and connection coefficients."""
    G, C = fp.gamma_up, fp.weyl
    return (
        fp.d_weyl
        - np.einsum("abf,fcde->abcde", G, C)
        - np.einsum("acf,bfde->abcde", G, C)
        - np.einsum("adf,bcfe->abcde", G, C)
        - np.einsum("aef,bcdf->abcde", G, C)
    )


@dataclass(frozen=True)
class FrameValidation:
    residual: float
    scale: float
    passed: bool
    points: tuple


def validate_frame(chart: ChartMetric, frame: FrameField, sample_points, tol: float = 1e-7) -> FrameValidation:
    _check_labels(frame.labels, chart.m, chart.epsilon)
    if frame.n != chart.n:
        raise LabelMismatch("frame dimension differs from chart")
    et = eta(chart.m, chart.epsilon)
    worst, scale = 0.0, 1.0
    pts = []
    for x in sample_points:
        E, _ = frame.jet(x)
        if not np.all(np.isfinite(E)):
            raise EvaluationFailure("frame not finite at point")
        P = E.T @ chart.eval_g(x) @ E
        worst = max(worst, float(np.abs(P - et).max()))
        pts.append(tuple(np.asarray(x, dtype=complex)))
    return FrameValidation(worst, scale, worst < tol * scale, tuple(pts))


def connection_coeffs(chart: ChartMetric, frame: FrameField, point) -> ConnectionCoeffs:
    fp = frame_point(chart, frame, point)
    return ConnectionCoeffs(fp.gamma, chart.m, chart.epsilon)


def all_structures(m: int) -> list[frozenset[int]]:
    """The 2^m subsets M of {1..m}."""
    return [frozenset(c) for k in range(m + 1) for c in itertools.combinations(range(1, m + 1), k)]


def relabel_for(M: Iterable[int], m: int, epsilon: int) -> np.ndarray:
    """Position permutation swapping mu <-> mu~ for every mu outside M.

    A tensor relabeled for N_M is ``T[np.ix_(perm, perm, ...)]``; the
    unprimed slots then span N_M.
    """
    M = set(M)
    if not M <= set(range(1, m + 1)):
        raise ValueError("M must be a subset of 1..m")
    perm = np.arange(2 * m + epsilon)
    for mu in range(1, m + 1):
        if mu not in M:
            perm[mu - 1], perm[m + mu - 1] = m + mu - 1, mu - 1
    return perm


def relabel_tensor(t: np.ndarray, perm: np.ndarray) -> np.ndarray:
    return t[np.ix_(*([perm] * t.ndim))]


@dataclass(frozen=True)
class InvolutivityVerdict:
    N_involutive: bool
    N_perp_involutive: bool
    gamma_residual: tuple[float, float]
    bracket_residual: tuple[float, float]
    points: tuple

    @property
    def integrable(self) -> bool:
        return self.N_involutive and self.N_perp_involutive


def _gamma_test(G: np.ndarray, m: int, eps: int) -> tuple[float, float]:
    U = slice(0, m)
    core = np.abs(G[U, U, U]).max()
    if not eps:
        return core, core
    z = 2 * m
    g_km0 = G[U, U, z]
    g_0mn = G[z, U, U]
    n_res = max(core, np.abs(g_km0 - g_km0.T).max())
    p_res = max(core, np.abs(g_0mn + g_km0).max())
    return float(n_res), float(p_res)


def _bracket_test(B: np.ndarray, m: int, eps: int) -> tuple[float, float]:
    # B[a, b, c] = g(xi_c, [xi_a, xi_b])
    perp = list(range(m)) + ([2 * m] if eps else [])
    U = list(range(m))
    n_res = np.abs(B[np.ix_(U, U, perp)]).max()
    p_res = np.abs(B[np.ix_(perp, perp, U)]).max()
    return float(n_res), float(p_res)


def involutivity_check(chart: ChartMetric, frame: FrameField, M: Iterable[int], points,
                       tol: float = 1e-7) -> InvolutivityVerdict:
    m, eps = chart.m, chart.epsilon
    perm = relabel_for(M, m, eps)
    g_res = [0.0, 0.0]
    b_res = [0.0, 0.0]
    g_scale = b_scale = 1.0
    pts = []
    for x in points:
        fp = frame_point(chart, frame, x)
        G = relabel_tensor(fp.gamma, perm)
        B = relabel_tensor(fp.brackets, perm)
        g_scale = max(g_scale, float(np.abs(G).max()))
        b_scale = max(b_scale, float(np.abs(B).max()))
        gr, br = _gamma_test(G, m, eps), _bracket_test(B, m, eps)
        g_res = [max(a, b) for a, b in zip(g_res, gr)]
        b_res = [max(a, b) for a, b in zip(b_res, br)]
        pts.append(tuple(np.asarray(x, dtype=complex)))
    gv = [r < tol * g_scale for r in g_res]
    bv = [r < tol * b_scale for r in b_res]
    if gv != bv:
        raise OracleDisagreement(
            f"connection test {gv} vs bracket test {bv} (residuals {g_res}, {b_res})")
    return InvolutivityVerdict(gv[0], gv[1], tuple(g_res), tuple(b_res), tuple(pts))
