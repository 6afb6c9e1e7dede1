"""Sparse multivariate polynomials with complex coefficients.

A :class:`Poly` maps exponent tuples to nonzero complex coefficients.  All
arithmetic and differentiation is exact up to complex float arithmetic on
the coefficients.  :func:`derivative_stack` evaluates many polynomials and
their partial derivatives up to third order at a point in one vectorized
pass, which is what the curvature code actually calls.
"""
from __future__ import annotations

import itertools
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

Exps = tuple[int, ...]


class Poly:
    __slots__ = ("n", "_c")

    def __init__(self, n: int, coeffs: Mapping[Exps, complex] | None = None):
        self.n = int(n)
        c: dict[Exps, complex] = {}
        for e, v in (coeffs or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != self.n or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for n={self.n}")
            v = complex(v)
            if v != 0:
                c[e] = c.get(e, 0) + v
                if c[e] == 0:
                    del c[e]
        self._c = c

    # construction helpers
    @classmethod
    def const(cls, n: int, value: complex) -> "Poly":
        return cls(n, {(0,) * n: value})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1.0})

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n)

    @property
    def coeffs(self) -> Mapping[Exps, complex]:
        return MappingProxyType(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        return max((sum(e) for e in self._c), default=-1)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._c)
        for e, v in other._c.items():
            out[e] = out.get(e, 0) + v
        return Poly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = complex(other)
            return Poly(self.n, {e: v * other for e, v in self._c.items()})
        other = self._coerce(other)
        out: dict[Exps, complex] = {}
        for (e1, v1), (e2, v2) in itertools.product(self._c.items(), other._c.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + v1 * v2
        return Poly(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.n, 1.0)
        for _ in range(int(k)):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.n, other)
        return self.n == other.n and self._c == other._c

    def __hash__(self):
        return hash((self.n, frozenset(self._c.items())))

    def __repr__(self):
        if not self._c:
            return "Poly(0)"
        parts = []
        for e, v in sorted(self._c.items()):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"({v:g})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def diff(self, coord: int) -> "Poly":
        if not 0 <= coord < self.n:
            raise ValueError(f"coord {coord} out of range for n={self.n}")
        out = {}
        for e, v in self._c.items():
            k = e[coord]
            if k:
                e2 = list(e)
                e2[coord] = k - 1
                out[tuple(e2)] = v * k
        return Poly(self.n, out)

    def __call__(self, point: Sequence[complex]) -> complex:
        x = np.asarray(point, dtype=complex)
        total = 0j
        for e, v in self._c.items():
            total += v * np.prod(x ** np.asarray(e))
        return complex(total)

    # serialization: {"coords": [...], "terms": [{"exps": [...], "re": x, "im": y}]}
    def to_json(self, coords: Sequence[str] | None = None) -> dict:
        coords = list(coords) if coords is not None else [f"x{i}" for i in range(self.n)]
        terms = [
            {"exps": list(e), "re": float(v.real), "im": float(v.imag)}
            for e, v in sorted(self._c.items())
        ]
        return {"coords": coords, "terms": terms}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Poly":
        n = len(obj["coords"])
        coeffs: dict[Exps, complex] = {}
        for t in obj["terms"]:
            e = tuple(t["exps"])
            coeffs[e] = coeffs.get(e, 0) + complex(t.get("re", 0.0), t.get("im", 0.0))
        return cls(n, coeffs)


def random_poly(n: int, degree: int, rng: np.random.Generator, amplitude: float = 1.0,
                min_degree: int = 0) -> Poly:
    """Dense random polynomial, coefficients drawn uniformly in the complex disc."""
    coeffs = {}
    for d in range(min_degree, degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            r = amplitude * np.sqrt(rng.uniform())
            phi = rng.uniform(0, 2 * np.pi)
            coeffs[tuple(e)] = r * np.exp(1j * phi)
    return Poly(n, coeffs)


def _falling(e: np.ndarray, k: int) -> np.ndarray:
    out = np.ones_like(e, dtype=float)
    for j in range(k):
        out = out * (e - j)
    return out


def derivative_stack(polys: Sequence[Poly], point: Sequence[complex], order: int) -> list[np.ndarray]:
    """Values and partial derivatives of ``polys`` at ``point``.

    Returns ``[v, d1, d2, ...]`` up to ``order`` where ``dk`` has shape
    ``(k * (n,)) + (P,)``, derivative axes first.  Mixed partials are filled
    symmetrically.  Zero polynomials give bitwise-zero entries.
    """
    polys = list(polys)
    P = len(polys)
    if P == 0:
        raise ValueError("empty polynomial list")
    n = polys[0].n
    x = np.asarray(point, dtype=complex)
    if x.shape != (n,):
        raise ValueError("point has wrong dimension")
    exps, coefs, owner = [], [], []
    for idx, p in enumerate(polys):
        if p.n != n:
            raise ValueError("mixed dimensions")
        for e, v in p.coeffs.items():
            exps.append(e)
            coefs.append(v)
            owner.append(idx)
    out = [np.zeros((n,) * k + (P,), dtype=complex) for k in range(order + 1)]
    if not exps:
        return out
    E = np.asarray(exps, dtype=int)
    c = np.asarray(coefs, dtype=complex)
    own = np.asarray(owner, dtype=int)
    maxd = int(E.max())
    # xpow[i, j] = x_i ** j, with 0**0 = 1
    xpow = np.ones((n, maxd + 1), dtype=complex)
    for j in range(1, maxd + 1):
        xpow[:, j] = xpow[:, j - 1] * x
    cols = np.arange(n)
    for k in range(order + 1):
        for combo in itertools.combinations_with_replacement(range(n), k):
            a = np.bincount(np.asarray(combo, dtype=int), minlength=n) if k else np.zeros(n, int)
            shifted = E - a
            ok = (shifted >= 0).all(axis=1)
            if not ok.any():
                continue
            fac = np.ones(len(c))
            for i in np.nonzero(a)[0]:
                fac = fac * _falling(E[:, i], int(a[i]))
            sh = np.clip(shifted, 0, None)
            mono = np.prod(xpow[cols[None, :], sh], axis=1)
            vals = np.where(ok, c * fac * mono, 0)
            acc = np.zeros(P, dtype=complex)
            np.add.at(acc, own, vals)
            for perm in set(itertools.permutations(combo)):
                out[k][perm] = acc
    return out
