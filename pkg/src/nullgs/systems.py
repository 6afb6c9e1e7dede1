"""Linear systems on connection coefficients forced by the Bianchi identity.

For a Weyl tensor in class ``k`` and a Cotton-York tensor in the matching
class, selected component Bianchi equations become homogeneous linear
equations on the connection components that obstruct integrability of N_S.
Each case fixes a stage (K: Gamma_kmn, L: Gamma_mn0, M: Gamma_0mn), the
equation picks, the ordering of unknowns and the diagonal blocks.

Two builders produce the matrix:

* builder (i) expands the reduced per-case equations symbolically into a
  sparse linear map from Weyl components to matrix entries;
* builder (ii) extracts connection coefficients from the full component
  families with an einsum evaluator and checks that every other connection
  component drops out under the class substitution.

Rows are scaled so the diagonal blocks coincide with the tabulated block
formulas (``single_display``/``block_display``).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .bianchi import DUMMY, Operands, family, gamma_coefficients, non_gamma_value, parse_term
from .classify import (COTTON_YORK, WEYL, FrameTensor, class_mask, filtration_level,
                       multi_weights)
from .config import DEFAULT_TOL, Tolerances
from .errors import BuilderDisagreement, ClassMismatch, SplitViolation
from .frame import eta, label_of

Assign = dict  # free letter -> 1-based value


# --- case table --------------------------------------------------------------------

@dataclass(frozen=True)
class CaseSpec:
    epsilon: int
    k: int
    stage: str
    family: str
    reduced: tuple[str, ...]
    single_row: Callable[[int, tuple], Assign]
    block_rows: Callable[[int, tuple], list[Assign]] | None
    single_display: Callable[[np.ndarray, int, tuple], complex]
    block_display: Callable[[np.ndarray, int, tuple], np.ndarray] | None
    single_scale: float = 1.0
    block_scales: tuple[float, ...] = ()
    note: str = ""

    @property
    def key(self) -> str:
        return f"{'odd' if self.epsilon else 'even'}-k{self.k}-{self.stage}"

    @property
    def cy_level(self):
        from fractions import Fraction
        return Fraction(self.k) - (1 if self.epsilon else Fraction(1, 2))

    def min_m(self) -> int:
        return 2 if self.epsilon else 3


def _acc(m: int):
    x = lambda mu: mu - 1
    t = lambda mu: m + mu - 1
    return x, t, 2 * m


def _asg(**kw) -> Assign:
    return dict(kw)


def _ref(m: int, mu: int) -> int:
    """The partner index used by the 'pick m of them' rows: m, or m-1 for mu = m."""
    return m - 1 if mu == m else m


# K stage, type B3a (k = 0 in both parities)
def _k0_single(m, i):
    ka, rh = i
    return _asg(m=rh, n=ka, r=rh, k=rh, l=ka)


def _k0_rows(m, i):
    mu, nu, la = i
    return [_asg(m=a, n=b, r=a, k=a, l=c) for a, b, c in ((mu, nu, la), (nu, la, mu), (la, mu, nu))]


def _k0_single_disp(C, m, i):
    x, t, _ = _acc(m)
    ka, rh = i
    # the row hitting Gamma_{kk r} carries K_{r k}
    k_, r_ = rh, ka
    return C[x(k_), t(k_), x(k_), t(k_)] + C[t(k_), t(r_), x(k_), x(r_)] + C[x(r_), t(r_), x(k_), t(k_)]


def _k0_block_disp(C, m, i):
    x, t, _ = _acc(m)
    mu, nu, la = i
    return np.array([
        [C[t(mu), t(la), x(mu), x(la)] + C[x(mu), t(nu), x(nu), t(mu)],
         C[x(la), t(la), x(mu), t(mu)] + C[x(mu), t(mu), x(mu), t(mu)] + C[t(mu), t(la), x(mu), x(la)], 0],
        [0, C[t(nu), t(mu), x(nu), x(mu)] + C[x(nu), t(la), x(la), t(nu)],
         C[x(mu), t(mu), x(nu), t(nu)] + C[x(nu), t(nu), x(nu), t(nu)] + C[t(nu), t(mu), x(nu), x(mu)]],
        [C[x(nu), t(nu), x(la), t(la)] + C[x(la), t(la), x(la), t(la)] + C[t(la), t(nu), x(la), x(nu)], 0,
         C[t(la), t(nu), x(la), x(nu)] + C[x(la), t(mu), x(mu), t(la)]],
    ])


# K stage, type B1a (even k = 1, odd k = 2)
def _k1_single(m, i):
    ka, rh = i
    return _asg(m=rh, n=ka, r=ka, k=ka, l=ka)


def _k1_rows(m, i):
    mu, nu, ka = i
    return [_asg(m=a, n=b, r=b, k=c, l=b) for a, b, c in ((mu, nu, ka), (nu, ka, mu), (ka, mu, nu))]


def _k1_single_disp(C, m, i):
    x, t, _ = _acc(m)
    ka, rh = i
    return C[t(ka), t(rh), x(rh), t(ka)]


def _k1_block_disp(C, m, i):
    x, t, _ = _acc(m)
    mu, nu, ka = i
    return np.array([
        [C[t(nu), t(ka), x(ka), t(nu)], C[t(nu), t(mu), t(nu), x(mu)] - C[t(nu), t(ka), t(nu), x(ka)], 0],
        [0, C[t(ka), t(mu), x(mu), t(ka)], C[t(ka), t(nu), t(ka), x(nu)] - C[t(ka), t(mu), t(ka), x(mu)]],
        [C[t(mu), t(ka), t(mu), x(ka)] - C[t(mu), t(nu), t(mu), x(nu)], 0, C[t(mu), t(nu), x(nu), t(mu)]],
    ])


# K stage, type B-1a (even k = 2, odd k = 4)
def _k2_single(m, i):
    ka, rh = i
    return _asg(m=rh, n=ka, r=ka, k=ka, l=ka)


def _k2_rows(m, i):
    mu, nu, la = i
    # the row for Gamma_{abc} is the pick (b, a, c)
    return [_asg(m=b, n=a, r=a, k=a, l=c) for a, b, c in ((mu, nu, la), (nu, la, mu), (la, mu, nu))]


def _k2_single_disp(C, m, i):
    x, t, _ = _acc(m)
    ka, rh = i
    return C[t(ka), t(rh), t(ka), t(rh)]


def _k2_block_disp(C, m, i):
    x, t, _ = _acc(m)
    mu, nu, la = i
    return np.diag([C[t(mu), t(nu), t(mu), t(nu)], C[t(nu), t(la), t(nu), t(la)], C[t(la), t(mu), t(la), t(mu)]])


# odd K stage, type B2b (k = 1)
def _ok1_single(m, i):
    ka, rh = i
    return _asg(m=rh, n=ka, k=rh, l=ka)


def _ok1_rows(m, i):
    mu, nu, la = i
    return [_asg(m=a, n=b, k=a, l=c) for a, b, c in ((mu, nu, la), (nu, la, mu), (la, mu, nu))]


def _ok1_single_disp(C, m, i):
    x, t, z = _acc(m)
    ka, rh = i
    return C[z, t(ka), x(rh), t(ka)]


def _ok1_block_disp(C, m, i):
    x, t, z = _acc(m)
    mu, nu, la = i
    a, b, c = C[z, t(la), x(mu), t(la)], C[z, t(mu), x(nu), t(mu)], C[z, t(nu), x(la), t(nu)]
    return np.array([[a, a, 0], [0, b, b], [c, 0, c]])


# odd K stage, type B0d (k = 3)
def _ok3_single(m, i):
    ka, rh = i
    return _asg(m=rh, n=ka, r=rh, k=ka)


def _ok3_rows(m, i):
    mu, nu, ka = i
    return [_asg(m=a, n=b, r=a, k=c) for a, b, c in ((mu, nu, ka), (nu, ka, mu), (ka, mu, nu))]


def _ok3_single_disp(C, m, i):
    x, t, z = _acc(m)
    ka, rh = i
    return C[t(rh), t(ka), t(ka), z]


def _ok3_block_disp(C, m, i):
    x, t, z = _acc(m)
    mu, nu, ka = i
    a, b, c = C[t(mu), t(ka), t(ka), z], C[t(nu), t(mu), t(mu), z], C[t(ka), t(nu), t(nu), z]
    return np.array([[a, a, 0], [0, b, b], [c, 0, c]])


# L stages: singles Gamma_{mu mu 0}, pairs (Gamma_{mu nu 0}, -Gamma_{nu mu 0})
def _l0_single(m, i):
    (mu,) = i
    nu = _ref(m, mu)
    return _asg(m=mu, n=nu, r=nu, k=mu)


def _l0_rows(m, i):
    mu, nu = i
    return [_asg(m=mu, n=nu, r=mu, k=mu), _asg(m=nu, n=mu, r=nu, k=nu)]


def _l0_single_disp(C, m, i):
    x, t, _ = _acc(m)
    (mu,) = i
    nu = _ref(m, mu)
    return C[x(mu), t(mu), x(nu), t(nu)]


def _l0_block_disp(C, m, i):
    x, t, z = _acc(m)
    mu, nu = i
    return np.array([
        [C[x(mu), t(nu), x(nu), t(mu)] + C[t(mu), z, x(mu), z], C[x(mu), t(mu), x(mu), t(mu)] + C[t(mu), z, x(mu), z]],
        [C[x(nu), t(nu), x(nu), t(nu)] + C[t(nu), z, x(nu), z], C[x(nu), t(mu), x(mu), t(nu)] + C[t(nu), z, x(nu), z]],
    ])


def _l1_single(m, i):
    (mu,) = i
    nu = _ref(m, mu)
    return _asg(m=mu, n=nu, r=nu, k=mu, l=nu)


def _l1_rows(m, i):
    mu, nu = i
    return [_asg(m=mu, n=nu, r=mu, k=mu, l=mu), _asg(m=nu, n=mu, r=nu, k=nu, l=nu)]


def _l1_single_disp(C, m, i):
    x, t, z = _acc(m)
    (mu,) = i
    nu = _ref(m, mu)
    return C[t(nu), z, x(nu), t(nu)]


def _l1_block_disp(C, m, i):
    x, t, z = _acc(m)
    mu, nu = i
    a, b = C[t(mu), z, x(mu), t(mu)], C[t(nu), z, x(nu), t(nu)]
    return np.array([[a, 2 * a], [2 * b, b]])


def _l2_single(m, i):
    (mu,) = i
    nu = _ref(m, mu)
    return _asg(m=mu, n=nu, r=mu, k=nu)


def _l2_rows(m, i):
    mu, nu = i
    return [_asg(m=mu, n=nu, r=mu, k=mu), _asg(m=nu, n=mu, r=nu, k=nu)]


def _l2_single_disp(C, m, i):
    x, t, _ = _acc(m)
    (mu,) = i
    nu = _ref(m, mu)
    return -C[x(nu), t(mu), t(nu), t(mu)]


def _l2_block_disp(C, m, i):
    x, t, _ = _acc(m)
    mu, nu = i
    return np.diag([C[x(mu), t(nu), t(mu), t(nu)], -C[x(nu), t(mu), t(nu), t(mu)]])


# k = 3: the single equation type -Gamma_{r l 0} C_{k~ 0 m~ n~}, fixed (k, m, n) = (1, 1, 2)
def _l3_single(m, i):
    (mu,) = i
    return _asg(m=1, n=2, r=mu, k=1, l=mu)


def _l3_rows(m, i):
    mu, nu = i
    return [_asg(m=1, n=2, r=mu, k=1, l=nu), _asg(m=1, n=2, r=nu, k=1, l=mu)]


def _l3_single_disp(C, m, i):
    x, t, z = _acc(m)
    return -C[t(1), z, t(1), t(2)]


def _l3_block_disp(C, m, i):
    x, t, z = _acc(m)
    c = C[t(1), z, t(1), t(2)]
    return np.diag([-c, c])


def _l4_single(m, i):
    (nu,) = i
    mu = _ref(m, nu)
    return _asg(m=mu, n=nu, r=nu, k=mu)


def _l4_rows(m, i):
    mu, nu = i
    return [_asg(m=mu, n=nu, r=mu, k=mu), _asg(m=nu, n=mu, r=nu, k=nu)]


def _l4_single_disp(C, m, i):
    x, t, _ = _acc(m)
    (nu,) = i
    mu = _ref(m, nu)
    return C[t(mu), t(nu), t(mu), t(nu)]


def _l4_block_disp(C, m, i):
    x, t, _ = _acc(m)
    mu, nu = i
    return np.diag([C[t(mu), t(nu), t(mu), t(nu)], -C[t(nu), t(mu), t(nu), t(mu)]])


# M stages: one unknown Gamma_{0 mu nu} per mu < nu
def _m_disp(fn):
    def disp(C, m, i):
        x, t, z = _acc(m)
        return fn(C, x, t, z, *i)
    return disp


_M0 = _m_disp(lambda C, x, t, z, mu, nu: C[x(nu), t(nu), x(mu), t(mu)] + C[t(mu), t(nu), x(mu), x(nu)]
              + C[x(mu), t(mu), x(mu), t(mu)])
_M1 = _m_disp(lambda C, x, t, z, mu, nu: C[z, t(nu), x(mu), t(nu)])
_M2 = _m_disp(lambda C, x, t, z, mu, nu: C[x(mu), t(mu), t(mu), t(nu)] + C[x(nu), t(nu), t(mu), t(nu)])
_M3 = _m_disp(lambda C, x, t, z, mu, nu: -C[t(mu), t(nu), t(nu), z])
_M4 = _m_disp(lambda C, x, t, z, mu, nu: -C[t(mu), t(nu), t(mu), t(nu)])

R_B3A = ("+2 g(r~ [k) A(l] m n)",
         "+2 G([m n] ^ s~) C(r~ s~ k l)",
         "+4 G([m | [k ^ s~) C(l] | s~ | n] r~)")
R_B1A_EVEN = ("-2 g([m | l~) A(k | n] r~)",
              "+1 g(r~ k) A(l~ m n)",
              "+2 G([m n] ^ s~) C(r~ s~ k l~)",
              "+2 G([m | k ^ s~) C(l~ s~ | n] r~)")
R_BM1A_EVEN = ("-2 g([m~ | l) A(k~ | n~] r)",
               "+1 g(r k~) A(l m~ n~)",
               "-1 G(r l ^ s~) C(k~ s~ m~ n~)")
R_B2A = ("+1 g(r~ k) A(0 m n)",
         "+2 G([m n] ^ s~) C(r~ s~ k 0)",
         "+2 G([m n] ^ 0) C(r~ 0 k 0)",
         "+2 G([m | k ^ s~) C(0 s~ | n] r~)",
         "-2 G([m | 0 ^ s~) C(k s~ | n] r~)")
R_B2B_K0 = ("+2 g([m | l~) A(k | n] 0)",
            "+2 G([m n] ^ s~) C(0 s~ k l~)",
            "+2 G(0 [m ^ s~) C(n] s~ k l~)",
            "+2 G([n | 0 | ^ s~) C(m] s~ k l~)",
            "+2 G([m | k ^ s~) C(l~ s~ | n] 0)",
            "+2 G([m | k ^ 0) C(l~ 0 | n] 0)",
            "+1 G(0 k ^ s~) C(l~ s~ m n)")
R_B2B_K1 = ("+2 g([m | l~) A(k | n] 0)",
            "+2 G([m n] ^ s~) C(0 s~ k l~)",
            "+2 G([m | k ^ s~) C(l~ s~ | n] 0)")
R_B1A_ODD = ("-2 g([m | l~) A(k | n] r~)",
             "+1 g(r~ k) A(l~ m n)",
             "+2 G([m n] ^ s~) C(r~ s~ k l~)",
             "+2 G([m n] ^ 0) C(r~ 0 k l~)",
             "+2 G([m | k ^ s~) C(l~ s~ | n] r~)",
             "+2 G([m | k ^ 0) C(l~ 0 | n] r~)")
R_B1B = ("+1 g(n~ k) A(0 0 m)",
         "-1 A(k m n~)",
         "+1 G(0 m ^ s~) C(n~ s~ k 0)",
         "-1 G(m 0 ^ s~) C(n~ s~ k 0)",
         "+1 G(m k ^ s~) C(0 s~ n~ 0)",
         "-1 G(m 0 ^ s~) C(k s~ n~ 0)",
         "+1 G(0 k ^ s~) C(0 s~ m n~)")
R_B0A = ("+2 g([m~ | k) A(0 | n~] r)",
         "-1 G(r 0 ^ s~) C(k s~ m~ n~)",
         "-1 G(r k ^ s~) C(0 s~ m~ n~)")
R_B0B = ("+4 g([m~ | [k) A(l] | n~] 0)",
         "+2 G(0 [k ^ s~) C(l] s~ m~ n~)")
R_B0D = ("+2 g([m | k~) A(0 | n] r~)",
         "+2 G([m n] ^ s~) C(r~ s~ k~ 0)")
R_BM1A_ODD = ("-2 g([m~ | l) A(k~ | n~] r)",
              "+1 g(r k~) A(l m~ n~)",
              "-1 G(r l ^ s~) C(k~ s~ m~ n~)",
              "-1 G(r l ^ 0) C(k~ 0 m~ n~)")
R_BM1B = ("+1 g(n k~) A(0 0 m~)",
          "-1 A(k~ m~ n)",
          "+1 G(n 0 ^ s~) C(m~ s~ k~ 0)",
          "-1 G(0 n ^ s~) C(m~ s~ k~ 0)",
          "-1 G(n 0 ^ s~) C(k~ s~ 0 m~)")
R_BM2A = ("+1 g(r k~) A(0 m~ n~)",
          "-1 G(r 0 ^ s~) C(k~ s~ m~ n~)")
R_BM2B = ("+2 g([m~ | l) A(k~ | n~] 0)",
          "-1 G(0 l ^ s~) C(k~ s~ m~ n~)")


def _case(eps, k, stage, fam, reduced, single, rows, sdisp, bdisp, sscale=1.0, bscales=(), note=""):
    return CaseSpec(eps, k, stage, fam, reduced, single, rows, sdisp, bdisp, sscale, tuple(bscales), note)


def _build_cases() -> dict[str, CaseSpec]:
    cs = [
        _case(0, 0, "K", "B3a", R_B3A, _k0_single, _k0_rows, _k0_single_disp, _k0_block_disp),
        _case(0, 1, "K", "B1a", R_B1A_EVEN, _k1_single, _k1_rows, _k1_single_disp, _k1_block_disp, -1),
        _case(0, 2, "K", "B-1a", R_BM1A_EVEN, _k2_single, _k2_rows, _k2_single_disp, _k2_block_disp, 1, (-1, -1, -1)),
        _case(1, 0, "K", "B3a", R_B3A, _k0_single, _k0_rows, _k0_single_disp, _k0_block_disp),
        _case(1, 0, "L", "B2a", R_B2A, _l0_single, _l0_rows, _l0_single_disp, _l0_block_disp, 1, (1, -1)),
        _case(1, 0, "M", "B2b", R_B2B_K0, lambda m, i: _asg(m=i[0], n=i[1], k=i[0], l=i[0]), None, _M0, None),
        _case(1, 1, "K", "B2b", R_B2B_K1, _ok1_single, _ok1_rows, _ok1_single_disp, _ok1_block_disp),
        _case(1, 1, "L", "B1a", R_B1A_ODD, _l1_single, _l1_rows, _l1_single_disp, _l1_block_disp, 1, (1, -1)),
        _case(1, 1, "M", "B1b", R_B1B, lambda m, i: _asg(m=i[0], n=i[1], k=i[0]), None, _M1, None),
        _case(1, 2, "K", "B1a", R_B1A_EVEN, _k1_single, _k1_rows, _k1_single_disp, _k1_block_disp, -1),
        _case(1, 2, "L", "B0a", R_B0A, _l2_single, _l2_rows, _l2_single_disp, _l2_block_disp),
        _case(1, 2, "M", "B0b", R_B0B, lambda m, i: _asg(m=i[0], n=i[1], k=i[0], l=i[1]), None, _M2, None),
        _case(1, 3, "K", "B0d", R_B0D, _ok3_single, _ok3_rows, _ok3_single_disp, _ok3_block_disp),
        _case(1, 3, "L", "B-1a", R_BM1A_ODD, _l3_single, _l3_rows, _l3_single_disp, _l3_block_disp),
        _case(1, 3, "M", "B-1b", R_BM1B, lambda m, i: _asg(m=i[0], n=i[0], k=i[1]), None, _M3, None),
        _case(1, 4, "K", "B-1a", R_BM1A_EVEN, _k2_single, _k2_rows, _k2_single_disp, _k2_block_disp, 1, (-1, -1, -1)),
        _case(1, 4, "L", "B-2a", R_BM2A, _l4_single, _l4_rows, _l4_single_disp, _l4_block_disp),
        _case(1, 4, "M", "B-2b", R_BM2B, lambda m, i: _asg(m=i[0], n=i[1], k=i[0], l=i[0]), None, _M4, None),
    ]
    return {c.key: c for c in cs}


CASES = _build_cases()


def case(epsilon: int, k: int, stage: str) -> CaseSpec:
    key = f"{'odd' if epsilon else 'even'}-k{k}-{stage}"
    if key not in CASES:
        raise KeyError(f"no system for {key}")
    return CASES[key]


def stages_for(epsilon: int, k: int) -> list[CaseSpec]:
    return [c for c in CASES.values() if c.epsilon == epsilon and c.k == k]


# --- layout -------------------------------------------------------------------------

@dataclass(frozen=True)
class Unknown:
    idx: tuple[int, int, int]
    sign: int = 1

    def label(self, m: int) -> str:
        body = ",".join(str(label_of(a, m)) for a in self.idx)
        return ("-" if self.sign < 0 else "") + f"G[{body}]"


@dataclass(frozen=True)
class Block:
    name: str
    index: tuple[int, ...]
    rows: tuple[int, ...]


@dataclass(frozen=True)
class Layout:
    spec: CaseSpec
    m: int
    unknowns: tuple[Unknown, ...]
    assigns: tuple[Assign, ...]
    scales: tuple[float, ...]
    blocks: tuple[Block, ...]

    @property
    def size(self) -> int:
        return len(self.unknowns)


def expected_size(stage: str, m: int) -> int:
    return {"K": m * m * (m - 1) // 2, "L": m * m, "M": m * (m - 1) // 2}[stage]


@lru_cache(maxsize=None)
def layout(key: str, m: int) -> Layout:
    spec = CASES[key]
    if m < spec.min_m():
        raise ValueError(f"{key} needs m >= {spec.min_m()}")
    z = 2 * m
    U, A, S, B = [], [], [], []
    if spec.stage == "K":
        singles = [(a, b) for a in range(1, m + 1) for b in range(1, m + 1) if a != b]
        for ka, rh in singles:
            B.append(Block(f"K_{ka}{rh}", (ka, rh), (len(U),)))
            U.append(Unknown((ka - 1, ka - 1, rh - 1)))
            A.append(spec.single_row(m, (ka, rh)))
            S.append(spec.single_scale)
        for mu, nu, la in itertools.combinations(range(1, m + 1), 3):
            B.append(Block(f"K_{mu}{nu}{la}", (mu, nu, la), tuple(range(len(U), len(U) + 3))))
            for (a, b, c), asg, sc in zip(((mu, nu, la), (nu, la, mu), (la, mu, nu)),
                                          spec.block_rows(m, (mu, nu, la)), spec.block_scales or (1, 1, 1)):
                U.append(Unknown((a - 1, b - 1, c - 1)))
                A.append(asg)
                S.append(sc)
    elif spec.stage == "L":
        for mu in range(1, m + 1):
            B.append(Block(f"L_{mu}", (mu,), (len(U),)))
            U.append(Unknown((mu - 1, mu - 1, z)))
            A.append(spec.single_row(m, (mu,)))
            S.append(spec.single_scale)
        for mu, nu in itertools.combinations(range(1, m + 1), 2):
            B.append(Block(f"L_{mu}{nu}", (mu, nu), (len(U), len(U) + 1)))
            U.append(Unknown((mu - 1, nu - 1, z)))
            U.append(Unknown((nu - 1, mu - 1, z), -1))
            A.extend(spec.block_rows(m, (mu, nu)))
            S.extend(spec.block_scales or (1, 1))
    else:
        for mu, nu in itertools.combinations(range(1, m + 1), 2):
            B.append(Block(f"M_{mu}{nu}", (mu, nu), (len(U),)))
            U.append(Unknown((z, mu - 1, nu - 1)))
            A.append(spec.single_row(m, (mu, nu)))
            S.append(spec.single_scale)
    lay = Layout(spec, m, tuple(U), tuple(A), tuple(float(s) for s in S), tuple(B))
    if lay.size != expected_size(spec.stage, m):
        raise AssertionError("layout size mismatch")
    return lay


def earlier_mask(stage: str, m: int, epsilon: int) -> np.ndarray:
    """Connection components solved at earlier stages (dropped from rows)."""
    N = 2 * m + epsilon
    mask = np.zeros((N, N, N), dtype=bool)
    U = slice(0, m)
    if stage in ("L", "M"):
        mask[U, U, U] = True
    if stage == "M":
        z = 2 * m
        mask[U, U, z] = mask[U, z, U] = True
    return mask


def _column_map(lay: Layout, epsilon: int) -> dict[tuple[int, int, int], tuple[int, int]]:
    cols = {}
    for j, u in enumerate(lay.unknowns):
        a, b, c = u.idx
        cols[(a, b, c)] = (j, u.sign)
        cols[(a, c, b)] = (j, -u.sign)
    return cols


# --- builder (i): symbolic expansion of the reduced equations ---------------------

def _pair(c: int, m: int) -> int:
    if c < m:
        return c + m
    if c < 2 * m:
        return c - m
    return c


def _pos(slot, env, m) -> int:
    if slot.is_zero:
        return 2 * m
    v = env[("T" if slot.tilde else "S")] if slot.letter == DUMMY else env[slot.letter]
    return m + v - 1 if slot.tilde else v - 1


def _skew_assignments(groups, assign: Assign):
    out = [(1.0, dict(assign))]
    for grp in reversed(groups):
        nxt = []
        k = len(grp)
        for w, a in out:
            vals = [a[c] for c in grp]
            for perm in itertools.permutations(range(k)):
                sign = np.linalg.det(np.eye(k)[list(perm)])
                b = dict(a)
                for c, p in zip(grp, perm):
                    b[c] = vals[p]
                nxt.append((w * sign / math.factorial(k), b))
        out = nxt
    return out


def expand_term(term, assign: Assign, m: int, epsilon: int):
    """Symbolic expansion of one connection term at fixed free letters.

    Returns ``[(weight, gamma_index, weyl_index), ...]`` with all connection
    indices lowered.
    """
    if not term.has("G") or (not epsilon and term.has_zero()):
        return []
    e = eta(m, epsilon)
    dummies = sorted({("T" if s.tilde else "S") for f in term.factors for s in f.slots if s.letter == DUMMY})
    out = []
    for w, a in _skew_assignments(term.groups, assign):
        for vals in itertools.product(range(1, m + 1), repeat=len(dummies)):
            env = dict(a)
            env.update(zip(dummies, vals))
            weight = term.coef * w
            gidx = cidx = None
            for f in term.factors:
                pos = tuple(_pos(s, env, m) for s in f.slots)
                if f.name == "G":
                    gidx = (pos[0], pos[1], _pair(pos[2], m))
                elif f.name == "C":
                    cidx = pos
                elif f.name == "g":
                    weight *= e[pos]
                else:
                    raise ValueError(f"unexpected factor {f.name} next to a connection term")
            if weight:
                out.append((weight, gidx, cidx))
    return out


@dataclass(frozen=True)
class SymbolicSystem:
    """Matrix entries and leftover connection terms as sparse maps of C."""

    layout: Layout
    epsilon: int
    entries: sp.csr_matrix   # (n*n, N**4)
    leftover: sp.csr_matrix  # (n*N**3, N**4): coefficients of non-unknown Gammas

    def matrix(self, C: np.ndarray) -> np.ndarray:
        n = self.layout.size
        return (self.entries @ np.asarray(C).ravel()).reshape(n, n)

    def leftover_max(self, C: np.ndarray) -> float:
        v = self.leftover @ np.asarray(C).ravel()
        return float(np.abs(v).max()) if v.size else 0.0


@lru_cache(maxsize=None)
def symbolic_system(key: str, m: int) -> SymbolicSystem:
    lay = layout(key, m)
    spec = lay.spec
    eps = spec.epsilon
    N = 2 * m + eps
    n = lay.size
    cols = _column_map(lay, eps)
    early = earlier_mask(spec.stage, m, eps)
    terms = [parse_term(t) for t in spec.reduced]
    rows_e, cols_e, vals_e = [], [], []
    rows_l, cols_l, vals_l = [], [], []
    flat = lambda idx: int(np.ravel_multi_index(idx, (N,) * len(idx)))
    for i, (asg, sc) in enumerate(zip(lay.assigns, lay.scales)):
        for t in terms:
            for w, g, c in expand_term(t, asg, m, eps):
                if g[1] == g[2] or early[g]:
                    continue
                if g in cols:
                    j, s = cols[g]
                    rows_e.append(i * n + j)
                    vals_e.append(sc * s * w)
                else:
                    # canonical antisymmetric representative b < c
                    a, b, cc = g
                    s = 1
                    if b > cc:
                        b, cc, s = cc, b, -1
                    rows_l.append(i * N ** 3 + flat((a, b, cc)))
                    vals_l.append(s * w)
                    cols_l.append(flat(c))
                    continue
                cols_e.append(flat(c))
    E = sp.csr_matrix((vals_e, (rows_e, cols_e)), shape=(n * n, N ** 4))
    L = sp.csr_matrix((vals_l, (rows_l, cols_l)), shape=(n * N ** 3, N ** 4))
    E.sum_duplicates()
    L.sum_duplicates()
    return SymbolicSystem(lay, eps, E, L)


# --- builder (ii): extraction from the full component families ----------------------

def extract_rows(key: str, m: int, C: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Matrix from the appendix families with Weyl ``C`` (class already checked)."""
    lay = layout(key, m)
    spec = lay.spec
    eps = spec.epsilon
    N = 2 * m + eps
    fam = family(spec.family)
    ops = Operands(m, eps, np.asarray(C, dtype=complex), np.zeros((N, N, N)), eta(m, eps), np.zeros((N, N, N)))
    coef = -gamma_coefficients(fam.rhs, ops, fam.letters)
    early = earlier_mask(spec.stage, m, eps)
    n = lay.size
    M = np.zeros((n, n), dtype=complex)
    scale = max(float(np.abs(C).max()), 1e-300)
    for i, (asg, sc) in enumerate(zip(lay.assigns, lay.scales)):
        idx = tuple(asg[c] - 1 if c in asg else 0 for c in fam.letters)
        missing = [c for c in fam.letters if c not in asg]
        if missing:
            raise ValueError(f"row assignment misses letters {missing}")
        row = coef[idx]
        anti = row - row.transpose(0, 2, 1)
        used = np.zeros((N, N, N), dtype=bool)
        for j, u in enumerate(lay.unknowns):
            M[i, j] = sc * u.sign * anti[u.idx]
            a, b, c = u.idx
            used[a, b, c] = used[a, c, b] = True
        rest = np.where(used | early, 0, anti)
        if np.abs(rest).max() > tol * scale * 10:
            a, b, c = np.unravel_index(np.abs(rest).argmax(), rest.shape)
            raise BuilderDisagreement(
                f"{key}: row {i} involves G[{label_of(a, m)},{label_of(b, m)},{label_of(c, m)}] "
                f"with coefficient {abs(rest[a, b, c]):.3e}")
    return M


# --- assembled systems ---------------------------------------------------------------

@dataclass
class GsSystem:
    key: str
    m: int
    matrix: np.ndarray
    unknown_order: list[str]
    blocks: list[Block]
    diag_blocks: list[np.ndarray]
    diag_values: list[complex]
    det_value: complex
    D_value: complex
    builder_gap: float

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def summary(self) -> dict:
        return {"case": self.key, "m": self.m, "size": self.size,
                "det": [self.det_value.real, self.det_value.imag],
                "D": [self.D_value.real, self.D_value.imag],
                "builder_gap": self.builder_gap}


def diag_blocks(lay: Layout, M: np.ndarray) -> list[np.ndarray]:
    return [M[np.ix_(b.rows, b.rows)] for b in lay.blocks]


def display_blocks(lay: Layout, C: np.ndarray) -> list[np.ndarray]:
    """The tabulated block formulas evaluated on ``C``."""
    spec = lay.spec
    out = []
    for b in lay.blocks:
        if len(b.rows) == 1:
            out.append(np.array([[spec.single_display(C, lay.m, b.index)]]))
        else:
            out.append(np.asarray(spec.block_display(C, lay.m, b.index), dtype=complex))
    return out


def _require_class(weyl: FrameTensor, spec: CaseSpec, cy: FrameTensor | None, assume_cy: bool,
                   tol: Tolerances):
    if weyl.symmetry_class != WEYL or weyl.epsilon != spec.epsilon:
        raise ClassMismatch("Weyl tensor of the wrong kind or parity")
    rep = filtration_level(weyl, None, tol)
    if rep.level < spec.k:
        raise ClassMismatch(f"Weyl level {rep.level} below required {spec.k} for {spec.key}")
    if cy is None:
        if not assume_cy:
            raise ClassMismatch("no Cotton-York tensor given to certify the dropped terms")
        return
    if cy.symmetry_class != COTTON_YORK:
        raise ClassMismatch("Cotton-York tensor of the wrong kind")
    crep = filtration_level(cy, None, tol)
    if crep.level < spec.cy_level:
        raise ClassMismatch(f"Cotton-York level {crep.level} below required {spec.cy_level}")


def assemble_system(weyl: FrameTensor, key: str, cy: FrameTensor | None = None, *,
                    assume_cy: bool = False, tol: Tolerances = DEFAULT_TOL) -> GsSystem:
    spec = CASES[key]
    m = weyl.m
    _require_class(weyl, spec, cy, assume_cy, tol)
    C = weyl.entries
    sym = symbolic_system(key, m)
    Mi = sym.matrix(C)
    scale = max(weyl.norm(), tol.abs_floor)
    if sym.leftover_max(C) > tol.builder * scale:
        raise BuilderDisagreement(f"{key}: reduced equations keep non-unknown connection terms")
    Mii = extract_rows(key, m, C, tol.builder)
    gap = float(np.abs(Mi - Mii).max()) / scale
    if gap > tol.builder:
        raise BuilderDisagreement(f"{key}: builders differ by {gap:.3e} (relative)")
    if cy is not None:
        _check_cy_terms(spec, sym.layout, weyl, cy, tol)
    lay = sym.layout
    blocks = diag_blocks(lay, Mi)
    vals = [complex(np.linalg.det(b)) for b in blocks]
    return GsSystem(key, m, Mi, [u.label(m) for u in lay.unknowns], list(lay.blocks), blocks, vals,
                    complex(np.linalg.det(Mi)), complex(np.prod(vals)), gap)


def _check_cy_terms(spec: CaseSpec, lay: Layout, weyl: FrameTensor, cy: FrameTensor, tol: Tolerances):
    m, eps = lay.m, spec.epsilon
    N = 2 * m + eps
    fam = family(spec.family)
    ops = Operands(m, eps, weyl.entries, np.zeros((N, N, N)), eta(m, eps), cy.entries)
    vals = non_gamma_value([parse_term(t) for t in spec.reduced], ops, fam.letters)
    worst = max(abs(vals[tuple(a[c] - 1 for c in fam.letters)]) for a in lay.assigns)
    if worst > tol.builder * max(cy.norm(), tol.abs_floor) * 10:
        raise ClassMismatch(f"{spec.key}: Cotton-York terms do not vanish ({worst:.3e})")


# --- kernel and determinant structure ---------------------------------------------

@dataclass(frozen=True)
class KernelReport:
    sigma_min: float
    sigma_max: float
    ratio: float
    nonsingular: bool
    kernel_dim: int
    condition: float
    solution_norm: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def solve_trivial(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> KernelReport:
    s = np.linalg.svd(np.asarray(M), compute_uv=False)
    smax, smin = float(s[0]), float(s[-1])
    ratio = smin / smax if smax > 0 else 0.0
    nonsing = ratio > tol.singular
    kdim = int((s <= tol.singular * smax).sum()) if smax > 0 else len(s)
    sol = np.linalg.solve(M, np.zeros(M.shape[0])) if nonsing else None
    return KernelReport(smin, smax, ratio, nonsing, kdim, smax / smin if smin > 0 else math.inf,
                        float(np.abs(sol).max()) if sol is not None else math.nan)


def _orbit_rep(idx: tuple[int, int, int, int]):
    """Canonical representative of a component under pair antisymmetry and swap."""
    a, b, c, d = idx
    if a == b or c == d:
        return None, 0
    s = 1
    if a > b:
        a, b, s = b, a, -s
    if c > d:
        c, d, s = d, c, -s
    if (a, b) > (c, d):
        a, b, c, d = c, d, a, b
    return (a, b, c, d), s


@lru_cache(maxsize=None)
def orbit_map(m: int, epsilon: int):
    """Sparse (N**4, n_orbits) map from orbit values to a symmetric symbol array."""
    N = 2 * m + epsilon
    reps, rows, cols, vals = {}, [], [], []
    for idx in itertools.product(range(N), repeat=4):
        rep, s = _orbit_rep(idx)
        if rep is None:
            continue
        j = reps.setdefault(rep, len(reps))
        rows.append(int(np.ravel_multi_index(idx, (N,) * 4)))
        cols.append(j)
        vals.append(s)
    O = sp.csr_matrix((vals, (rows, cols)), shape=(N ** 4, len(reps)))
    return O, tuple(reps)


@dataclass
class SplitReport:
    key: str
    m: int
    n_f: int
    n_g: int
    overlap: int
    blockdiag_rel: float
    g0_rel: float
    trials: int
    passed: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def symbol_split(key: str, m: int):
    """Orbit symbols in diagonal blocks (f) and off-block entries (g)."""
    sym = symbolic_system(key, m)
    lay = sym.layout
    eps = lay.spec.epsilon
    O, reps = orbit_map(m, eps)
    T = (sym.entries @ O).tocsr()
    allowed = np.array([class_mask(4, m, eps, lay.spec.k)[r] for r in reps])
    T = T @ sp.diags(allowed.astype(float))
    n = lay.size
    in_block = np.zeros((n, n), dtype=bool)
    for b in lay.blocks:
        in_block[np.ix_(b.rows, b.rows)] = True
    Tc = T.tocoo()
    nz = np.abs(Tc.data) > 1e-12
    rows, cols = Tc.row[nz], Tc.col[nz]
    f = set(cols[in_block.ravel()[rows]])
    g = set(cols[~in_block.ravel()[rows]])
    return T.tocsr(), in_block, sorted(f), sorted(g)


def det_split_check(key: str, m: int, trials: int = 5, rng: np.random.Generator | None = None,
                    tol: Tolerances = DEFAULT_TOL) -> SplitReport:
    """Determinant split det = G + D with G vanishing when off-block symbols vanish."""
    rng = rng or np.random.default_rng(0)
    T, in_block, f, g = symbol_split(key, m)
    lay = layout(key, m)
    n = lay.size
    overlap = len(set(f) & set(g))
    n_orb = T.shape[1]
    worst_bd = worst_g0 = 0.0
    for _ in range(trials):
        fv = np.zeros(n_orb, dtype=complex)
        gv = np.zeros(n_orb, dtype=complex)
        fv[f] = rng.standard_normal(len(f)) + 1j * rng.standard_normal(len(f))
        gonly = sorted(set(g) - set(f))
        gv[gonly] = rng.standard_normal(len(gonly)) + 1j * rng.standard_normal(len(gonly))
        M0 = (T @ fv).reshape(n, n)
        D = np.prod([np.linalg.det(M0[np.ix_(b.rows, b.rows)]) for b in lay.blocks])
        d0 = np.linalg.det(M0)
        worst_bd = max(worst_bd, abs(d0 - D) / max(abs(D), 1e-300))
        # det(f, t g) is a polynomial of degree <= n in t; its constant term is
        # the mean over n+1 roots of unity
        Mg = (T @ gv).reshape(n, n)
        ts = np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))
        dets = np.array([np.linalg.det(M0 + t * Mg) for t in ts])
        c0 = dets.mean()
        scale = max(np.abs(dets).max(), abs(D))
        worst_g0 = max(worst_g0, abs(c0 - D) / scale)
    passed = overlap == 0 and worst_bd < tol.det_split and worst_g0 < tol.det_split
    rep = SplitReport(key, m, len(f), len(g), overlap, worst_bd, worst_g0, trials, passed)
    return rep


def require_split(rep: SplitReport):
    if not rep.passed:
        raise SplitViolation(f"{rep.key} (m={rep.m}): {rep.as_dict()}")
    return rep


# --- synthetic inputs ------------------------------------------------------------------

def degenerate_column_weyl(weyl: FrameTensor, key: str) -> tuple[FrameTensor, int]:
    """Further degenerate ``weyl`` so one unknown's column vanishes identically.

    Every Weyl component feeding the chosen column is removed together with its
    whole torus weight space, which keeps the result a Weyl tensor.  The column
    with the fewest feeding weight spaces is used.
    """
    sym = symbolic_system(key, weyl.m)
    n = sym.layout.size
    N = weyl.N
    Ec = sym.entries.tocoo()
    mw = multi_weights(4, weyl.m, weyl.epsilon).reshape(N ** 4, weyl.m)
    feeds: dict[int, set] = {}
    for r, c, v in zip(Ec.row, Ec.col, Ec.data):
        if abs(v) > 1e-12 and weyl.entries.ravel()[c] != 0:
            feeds.setdefault(r % n, set()).add(tuple(mw[c]))
    j = min(range(n), key=lambda c: (len(feeds.get(c, ())), c))
    kill = feeds.get(j, set())
    W = weyl.entries.copy()
    flat_w = [tuple(x) for x in mw]
    mask = np.array([w in kill for w in flat_w]).reshape(W.shape)
    W[mask] = 0
    return FrameTensor(W, weyl.m, weyl.epsilon, WEYL), j
