"""Weight-graded classification of Weyl-type and Cotton-York-type frame tensors.

Frame indices carry weights: in even dimension unprimed indices weigh +1/2 and
tilde indices -1/2; in odd dimension +1, -1 and 0 for the zero index.  A
component's weight sum ``s`` decides which filtration piece it lives in: a
tensor is a member at level ``k`` when every component with ``s >= 1 - k``
vanishes.  Levels are therefore ``-max{s : component nonzero}``.

The Weyl space splits into weight spaces for the full torus acting on each
null pair separately, so masking a Weyl tensor by any (multi-)grading keeps it
inside the Weyl space.  The synthetic generators below rely on this.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .chart import _kulkarni
from .config import DEFAULT_TOL, Tolerances
from .errors import InvalidRealIndex, SchemaError, SymmetryViolation
from .frame import FrameLabel, Kind, eta, label_of, relabel_for, relabel_tensor

WEYL, COTTON_YORK, GENERAL = "Weyl", "CottonYork", "General"


# --- weights -----------------------------------------------------------------

def index_weight(label: FrameLabel, epsilon: int) -> Fraction:
    if label.kind is Kind.Z:
        if not epsilon:
            raise ValueError("zero index only exists in odd dimension")
        return Fraction(0)
    unit = Fraction(1) if epsilon else Fraction(1, 2)
    return unit if label.kind is Kind.U else -unit


def weight_vector(m: int, epsilon: int) -> np.ndarray:
    unit = 1.0 if epsilon else 0.5
    w = np.concatenate([np.full(m, unit), np.full(m, -unit)])
    return np.concatenate([w, [0.0]]) if epsilon else w


@lru_cache(maxsize=None)
def weight_sums(rank: int, m: int, epsilon: int) -> np.ndarray:
    """``s[i1, ..., ir]`` = sum of index weights, as a read-only array."""
    w = weight_vector(m, epsilon)
    s = np.zeros((len(w),) * rank)
    for ax in range(rank):
        shape = [1] * rank
        shape[ax] = len(w)
        s = s + w.reshape(shape)
    s.setflags(write=False)
    return s


@lru_cache(maxsize=None)
def multi_weights(rank: int, m: int, epsilon: int) -> np.ndarray:
    """Torus weights per null pair: shape ``(N,)*rank + (m,)``."""
    N = 2 * m + epsilon
    w = np.zeros((N, m), dtype=int)
    for mu in range(m):
        w[mu, mu] = 1
        w[m + mu, mu] = -1
    out = np.zeros((N,) * rank + (m,), dtype=int)
    for ax in range(rank):
        shape = [1] * rank + [m]
        shape[ax] = N
        out = out + w.reshape(shape)
    out.setflags(write=False)
    return out


def level_range(rank: int, epsilon: int) -> tuple[Fraction, Fraction]:
    """(lowest, top) filtration level; top is the zero section."""
    if rank == 4:
        return (Fraction(-4), Fraction(5)) if epsilon else (Fraction(-2), Fraction(3))
    if epsilon:
        return Fraction(-3), Fraction(4)
    return Fraction(-3, 2), Fraction(5, 2)


# --- frame tensors -------------------------------------------------------------

def _weyl_orbit(idx: tuple[int, ...]):
    a, b, c, d = idx
    for (p, q, r, s), sign in (((a, b, c, d), 1), ((b, a, c, d), -1), ((a, b, d, c), -1), ((b, a, d, c), 1)):
        yield (p, q, r, s), sign
        yield (r, s, p, q), sign


def _cy_orbit(idx: tuple[int, ...]):
    a, b, c = idx
    yield (a, b, c), 1
    yield (a, c, b), -1


@dataclass(frozen=True)
class FrameTensor:
    """Dense frame-component array with a declared symmetry class."""

    entries: np.ndarray
    m: int
    epsilon: int
    symmetry_class: str = WEYL

    def __post_init__(self):
        N = 2 * self.m + self.epsilon
        arr = np.asarray(self.entries, dtype=complex)
        if arr.ndim not in (3, 4) or arr.shape != (N,) * arr.ndim:
            raise SchemaError(f"array shape {arr.shape} does not match N={N}")
        if self.symmetry_class == WEYL and arr.ndim != 4 or self.symmetry_class == COTTON_YORK and arr.ndim != 3:
            raise SchemaError(f"rank {arr.ndim} does not fit class {self.symmetry_class}")
        object.__setattr__(self, "entries", arr)

    @property
    def rank(self) -> int:
        return self.entries.ndim

    @property
    def N(self) -> int:
        return 2 * self.m + self.epsilon

    def norm(self) -> float:
        return float(np.abs(self.entries).max()) if self.entries.size else 0.0

    def relabeled(self, M: Iterable[int]) -> "FrameTensor":
        perm = relabel_for(M, self.m, self.epsilon)
        return FrameTensor(relabel_tensor(self.entries, perm), self.m, self.epsilon, self.symmetry_class)

    def invariant_residuals(self) -> dict[str, float]:
        return (weyl_residuals if self.symmetry_class == WEYL else cy_residuals)(self.entries, self.m, self.epsilon)

    def validate(self, tol: Tolerances = DEFAULT_TOL) -> "FrameTensor":
        if self.symmetry_class == GENERAL:
            return self
        bound = tol.rel * self.norm() + tol.abs_floor
        bad = {k: v for k, v in self.invariant_residuals().items() if v > bound}
        if bad:
            raise SymmetryViolation(f"{self.symmetry_class} invariants fail: {bad}")
        return self

    # JSON: independent entries only, completed by symmetry on load
    def to_json(self) -> dict:
        seen, entries = set(), []
        orbit = _weyl_orbit if self.symmetry_class == WEYL else _cy_orbit
        for idx in itertools.product(range(self.N), repeat=self.rank):
            if idx in seen:
                continue
            seen.update(j for j, _ in orbit(idx))
            v = self.entries[idx]
            if v != 0:
                entries.append({"idx": [str(label_of(i, self.m)) for i in idx],
                                "re": float(v.real), "im": float(v.imag)})
        return {"rank": self.rank, "m": self.m, "epsilon": self.epsilon,
                "class": self.symmetry_class, "entries": entries}

    @classmethod
    def from_json(cls, obj: dict, tol: Tolerances = DEFAULT_TOL) -> "FrameTensor":
        try:
            rank, m, eps = int(obj["rank"]), int(obj["m"]), int(obj["epsilon"])
            klass = obj.get("class", WEYL if rank == 4 else COTTON_YORK)
            N = 2 * m + eps
            arr = np.zeros((N,) * rank, dtype=complex)
            orbit = _weyl_orbit if klass == WEYL else _cy_orbit
            for e in obj["entries"]:
                idx = tuple(FrameLabel.parse(s).position(m) for s in e["idx"])
                if len(idx) != rank or max(idx) >= N:
                    raise SchemaError(f"bad index {e['idx']}")
                v = complex(e.get("re", 0.0), e.get("im", 0.0))
                for j, sign in orbit(idx):
                    arr[j] = sign * v
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed frame tensor: {exc}") from exc
        return cls(arr, m, eps, klass).validate(tol)


def weyl_residuals(C: np.ndarray, m: int, epsilon: int) -> dict[str, float]:
    e = eta(m, epsilon)
    mx = lambda a: float(np.abs(a).max())
    return {
        "antisym_12": mx(C + C.transpose(1, 0, 2, 3)),
        "antisym_34": mx(C + C.transpose(0, 1, 3, 2)),
        "pair_swap": mx(C - C.transpose(2, 3, 0, 1)),
        "cyclic": mx(C + C.transpose(1, 2, 0, 3) + C.transpose(2, 0, 1, 3)),
        "trace": mx(np.einsum("ac,abcd->bd", e, C)),
    }


def cy_residuals(A: np.ndarray, m: int, epsilon: int) -> dict[str, float]:
    e = eta(m, epsilon)
    mx = lambda a: float(np.abs(a).max())
    return {
        "antisym_23": mx(A + A.transpose(0, 2, 1)),
        "cyclic": mx(A + A.transpose(1, 2, 0) + A.transpose(2, 0, 1)),
        "trace": mx(np.einsum("ab,abc->c", e, A)),
    }


def symmetry_project(raw: np.ndarray, m: int, epsilon: int) -> FrameTensor:
    """Orthogonal projection of a rank-4 array onto the Weyl space."""
    T = np.asarray(raw, dtype=complex)
    T = (T - T.transpose(1, 0, 2, 3)) / 2
    T = (T - T.transpose(0, 1, 3, 2)) / 2
    T = (T + T.transpose(2, 3, 0, 1)) / 2
    alt = np.zeros_like(T)
    for p in itertools.permutations(range(4)):
        sign = np.linalg.det(np.eye(4)[list(p)])
        alt = alt + sign * T.transpose(p)
    T = T - alt / 24
    # remove the trace part; eta is a real involution so this stays orthogonal
    e = eta(m, epsilon)
    n = 2 * m + epsilon
    ric = np.einsum("xw,xyzw->yz", e, T)
    scal = np.einsum("yz,yz->", e, ric)
    rho = (ric - scal / (2 * (n - 1)) * e) / (n - 2)
    W = T - _kulkarni(e, rho)
    return FrameTensor(W, m, epsilon, WEYL)


def cy_project(raw: np.ndarray, m: int, epsilon: int) -> FrameTensor:
    """Orthogonal projection onto trace-free, cyclic, (2,3)-skew rank-3 arrays."""
    T = np.asarray(raw, dtype=complex)
    T = (T - T.transpose(0, 2, 1)) / 2
    T = T - (T + T.transpose(1, 2, 0) + T.transpose(2, 0, 1)) / 3
    e = eta(m, epsilon)
    n = 2 * m + epsilon
    # trace part is eta_ab v_c - eta_ac v_b, whose own trace is (n - 1) v
    v = np.einsum("ab,abc->c", e, T) / (n - 1)
    T = T - (np.einsum("ab,c->abc", e, v) - np.einsum("ac,b->abc", e, v))
    return FrameTensor(T, m, epsilon, COTTON_YORK)


@lru_cache(maxsize=None)
def weyl_basis(m: int, epsilon: int) -> np.ndarray:
    """Orthonormal basis of the Weyl space as rows of a (dim, N**4) array."""
    N = 2 * m + epsilon
    n = N
    dim = n * (n + 1) * (n + 2) * (n - 3) // 12
    rng = np.random.default_rng(12345)
    X = np.stack([symmetry_project(rng.standard_normal((N,) * 4), m, epsilon).entries.real.ravel()
                  for _ in range(dim + 20)])
    u, s, vt = np.linalg.svd(X, full_matrices=False)
    rank = int((s > 1e-9 * s[0]).sum())
    if rank != dim:
        raise SymmetryViolation(f"Weyl space rank {rank}, expected {dim}")
    out = vt[:rank]
    out.setflags(write=False)
    return out


# --- filtration levels -------------------------------------------------------------

@dataclass(frozen=True)
class FiltrationReport:
    level: Fraction
    grading_profile: dict[Fraction, float]
    structure: frozenset[int]
    symmetry_class: str
    norm: float
    threshold: float
    marginal: tuple[Fraction, ...] = ()
    warnings: tuple[str, ...] = ()

    def member(self, level) -> bool:
        return Fraction(level) <= self.level

    def as_dict(self) -> dict:
        return {
            "level": str(self.level),
            "structure": sorted(self.structure),
            "class": self.symmetry_class,
            "norm": self.norm,
            "threshold": self.threshold,
            "grading_profile": {str(k): v for k, v in sorted(self.grading_profile.items())},
            "marginal": [str(s) for s in self.marginal],
            "warnings": list(self.warnings),
        }


def grading_profile(t: np.ndarray, m: int, epsilon: int) -> dict[Fraction, float]:
    s = weight_sums(t.ndim, m, epsilon)
    out = {}
    for val in np.unique(s):
        mask = s == val
        out[Fraction(val).limit_denominator(2)] = float(np.abs(t[mask]).max())
    return out


def filtration_level(t: FrameTensor, M: Iterable[int] | None = None, tol: Tolerances = DEFAULT_TOL) -> FiltrationReport:
    if t.symmetry_class not in (WEYL, COTTON_YORK):
        raise SymmetryViolation("classification needs a Weyl or Cotton-York tensor")
    t.validate(tol)
    M = frozenset(range(1, t.m + 1) if M is None else M)
    rel = t.relabeled(M)
    profile = grading_profile(rel.entries, t.m, t.epsilon)
    norm = t.norm()
    thr = tol.rel * norm + tol.abs_floor
    low, top = level_range(t.rank, t.epsilon)
    nonzero = [s for s, v in profile.items() if v >= thr]
    level = top if not nonzero else max(low, -max(nonzero))
    f = tol.marginal_factor
    marginal = tuple(s for s, v in sorted(profile.items()) if thr / f <= v < thr * f)
    warns = ()
    if t.epsilon == 0 and t.m == 2:
        warns = ("four dimensions: self-dual/anti-self-dual refinement not implemented",)
    report = FiltrationReport(level, profile, M, t.symmetry_class, norm, thr, marginal, warns)
    # membership must be monotone in the level
    lv = low
    while lv <= top:
        if report.member(lv) and not all(v < thr for s, v in profile.items() if s >= 1 - lv):
            raise SymmetryViolation("non-monotone membership")
        lv += 1
    return report


def mask_grading(t: np.ndarray, m: int, epsilon: int, keep) -> np.ndarray:
    """Zero every component whose weight sum fails ``keep(s)``."""
    s = weight_sums(t.ndim, m, epsilon)
    return np.where(np.vectorize(keep)(s), t, 0)


def class_mask(rank: int, m: int, epsilon: int, level) -> np.ndarray:
    """Boolean array, True where a member at ``level`` may be nonzero."""
    return weight_sums(rank, m, epsilon) < 1 - float(level)


# --- explicit component lists ------------------------------------------------------

# kind patterns, U unprimed, T tilde, Z zero; generators modulo Weyl symmetries
LISTED_EVEN = {
    0: ("UUUU", "UUUT"),
    1: ("UTUT",),
    2: ("TTUT",),
}
LISTED_ODD = {
    0: ("UUUU", "UUUT", "UUUZ", "UTUZ"),
    1: ("UTUT",),
    2: ("UTTZ",),
    3: ("TTUT",),
    4: ("TZTT",),
}
_KIND_W = {"U": 1, "T": -1, "Z": 0}


def pattern_weight(pattern: str, epsilon: int) -> Fraction:
    unit = Fraction(1) if epsilon else Fraction(1, 2)
    return sum((_KIND_W[c] * unit for c in pattern), Fraction(0))


def _all_patterns(rank: int, epsilon: int) -> list[str]:
    kinds = "UTZ" if epsilon else "UT"
    return ["".join(p) for p in itertools.product(kinds, repeat=rank)]


@dataclass(frozen=True)
class DegeneracyConditions:
    k: int
    epsilon: int
    listed: tuple[str, ...]
    rule: tuple[str, ...]
    source: str  # "listed" when explicit generators exist, else "weight rule"

    def render(self) -> list[str]:
        return [render_pattern(p) for p in self.listed]


def render_pattern(p: str) -> str:
    letters = "μνκλ"
    out, i = [], 0
    for c in p:
        if c == "Z":
            out.append("0")
        else:
            out.append(letters[i] + ("̃" if c == "T" else ""))
            i += 1
    return "C_{" + "".join(out) + "}"


def degeneracy_conditions(k: int, epsilon: int) -> DegeneracyConditions:
    low, top = level_range(4, epsilon)
    if not low <= k <= top:
        raise ValueError(f"level {k} outside [{low}, {top}]")
    rule = tuple(p for p in _all_patterns(4, epsilon) if pattern_weight(p, epsilon) >= 1 - k)
    table = LISTED_ODD if epsilon else LISTED_EVEN
    if 0 <= k < top:
        listed = tuple(p for j in sorted(table) if j <= k for p in table[j])
        return DegeneracyConditions(k, epsilon, listed, rule, "listed")
    return DegeneracyConditions(k, epsilon, rule, rule, "weight rule")


def _pattern_mask(patterns: Sequence[str], m: int, epsilon: int) -> np.ndarray:
    N = 2 * m + epsilon
    kind = np.array(["U"] * m + ["T"] * m + (["Z"] if epsilon else []))
    mask = np.zeros((N,) * 4, dtype=bool)
    for p in patterns:
        sel = [kind == c for c in p]
        mask |= np.einsum("a,b,c,d->abcd", *sel).astype(bool)
    return mask


def vanishing_dimension(patterns: Sequence[str], m: int, epsilon: int) -> int:
    """Dimension of the Weyl subspace on which all listed components vanish."""
    B = weyl_basis(m, epsilon)
    mask = _pattern_mask(patterns, m, epsilon).ravel()
    if not mask.any():
        return B.shape[0]
    sub = B[:, mask]
    s = np.linalg.svd(sub, compute_uv=False)
    rank = int((s > 1e-9 * max(s[0], 1.0)).sum())
    return B.shape[0] - rank


def cross_check(k: int, epsilon: int, m: int) -> dict:
    """Listed generators versus the weight rule, as Weyl subspaces."""
    dc = degeneracy_conditions(k, epsilon)
    d_list = vanishing_dimension(dc.listed, m, epsilon)
    d_rule = vanishing_dimension(dc.rule, m, epsilon)
    contained = all(pattern_weight(p, epsilon) >= 1 - k for p in dc.listed)
    # weight-rule dimension also equals the count of Weyl directions with s < 1-k
    B = weyl_basis(m, epsilon)
    keep = class_mask(4, m, epsilon, k).ravel()
    d_grade = int(np.linalg.matrix_rank(B[:, keep], tol=1e-9)) if keep.any() else 0
    return {"k": k, "epsilon": epsilon, "m": m, "dim_listed": d_list, "dim_rule": d_rule,
            "dim_graded": d_grade, "listed_within_rule": contained,
            "agree": contained and d_list == d_rule == d_grade}


# --- reality ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignatureInfo:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 2:
            raise ValueError("invalid signature")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def epsilon(self) -> int:
        return self.n % 2

    @property
    def m(self) -> int:
        return self.n // 2


def real_index_allowed(sig: SignatureInfo) -> set[int]:
    lo = min(sig.p, sig.q)
    if sig.epsilon:
        return set(range(lo + 1))
    return {r for r in range(lo + 1) if r % 2 == lo % 2}


@dataclass(frozen=True)
class ConjugationAction:
    """Complex conjugation on frame labels: conj(xi_a) = sign[a] * xi_{perm[a]}."""

    sig: SignatureInfo
    r: int
    s: int
    perm: np.ndarray
    sign: np.ndarray

    def matrix(self) -> np.ndarray:
        N = len(self.perm)
        S = np.zeros((N, N))
        for a in range(N):
            S[self.perm[a], a] = self.sign[a]
        return S

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Antilinear action on frame-component vectors."""
        return self.matrix() @ np.conj(v)

    def table(self) -> list[tuple[str, str]]:
        m = self.sig.m
        return [(str(label_of(a, m)), ("-" if self.sign[a] < 0 else "") + str(label_of(self.perm[a], m)))
                for a in range(len(self.perm))]


def conjugation_action(sig: SignatureInfo, r: int) -> ConjugationAction:
    if r not in real_index_allowed(sig):
        raise InvalidRealIndex(f"r={r} not allowed for signature ({sig.p},{sig.q})")
    p, q = max(sig.p, sig.q), min(sig.p, sig.q)
    m, eps = sig.m, sig.epsilon
    if not eps:
        s = (p + r) // 2
        z_sign = 1
    elif (r - q) % 2:
        s, z_sign = (p + r) // 2, -1
    else:
        s, z_sign = (p + r - 1) // 2, 1
    N = 2 * m + eps
    perm = np.arange(N)
    sign = np.ones(N)
    for mu in range(r + 1, m + 1):
        a, b = mu - 1, m + mu - 1
        perm[a], perm[b] = b, a
        if mu > s:
            sign[a] = sign[b] = -1
    if eps:
        sign[2 * m] = z_sign
    return ConjugationAction(sig, r, s, perm, sign)


def conjugation_checks(act: ConjugationAction) -> dict[str, object]:
    """Involution, metric preservation and the signature of the real slice."""
    S = act.matrix()
    m, eps = act.sig.m, act.sig.epsilon
    e = eta(m, eps)
    N = len(act.perm)
    # real slice: v = S conj(v); write v = x + i y and solve the real system
    Z = np.zeros((N, N))
    R = np.block([[S - np.eye(N), Z], [Z, -S - np.eye(N)]])
    _, sv, vt = np.linalg.svd(R)
    null = vt[np.sum(sv > 1e-10):]
    V = null[:, :N] + 1j * null[:, N:]
    G = V @ e @ V.T
    ev = np.linalg.eigvalsh((G + G.conj().T).real / 2)
    sig = (int((ev > 1e-9).sum()), int((ev < -1e-9).sum()))
    Nspan = np.eye(N)[:, :m]
    conjN = S @ Nspan
    r_meas = 2 * m - np.linalg.matrix_rank(np.hstack([Nspan, conjN]))
    return {
        "involution": bool(np.allclose(S @ S, np.eye(N))),
        "metric_preserving": bool(np.allclose(S.T @ e @ S, e)),
        "real_signature": sig,
        "signature_ok": sorted(sig) == sorted((act.sig.p, act.sig.q)),
        "real_index": int(r_meas),
    }


def conjugate_structure(act: ConjugationAction, M: Iterable[int]) -> frozenset[int]:
    m = act.sig.m
    M = set(M)
    span = {mu - 1 for mu in M} | {m + nu - 1 for nu in range(1, m + 1) if nu not in M}
    image = {int(act.perm[a]) for a in span}
    out = frozenset(a + 1 for a in image if a < m)
    expect = {mu - 1 for mu in out} | {m + nu - 1 for nu in range(1, m + 1) if nu not in out}
    if image != expect:
        raise InvalidRealIndex("conjugate of a canonical structure is not canonical")
    return out


def quotient_structures(sig: SignatureInfo, r: int) -> list[tuple[frozenset[int], int]]:
    """One representative per conjugation orbit of B_S, with the orbit size."""
    from .frame import all_structures

    act = conjugation_action(sig, r)
    seen, out = set(), []
    for M in all_structures(sig.m):
        if M in seen:
            continue
        orbit = {M, conjugate_structure(act, M)}
        seen |= orbit
        out.append((M, len(orbit)))
    return out


# --- synthetic tensors -------------------------------------------------------------

def random_complex(shape, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def synthetic_weyl(k, m: int, epsilon: int, rng: np.random.Generator,
                   M: Iterable[int] | None = None) -> FrameTensor:
    """Random Weyl tensor of level exactly ``k`` w.r.t. N_M (probability one)."""
    N = 2 * m + epsilon
    W = symmetry_project(random_complex((N,) * 4, rng), m, epsilon).entries
    M = frozenset(range(1, m + 1) if M is None else M)
    perm = relabel_for(M, m, epsilon)
    inv = np.argsort(perm)
    Wr = relabel_tensor(W, perm)
    Wr = np.where(class_mask(4, m, epsilon, k), Wr, 0)
    return FrameTensor(relabel_tensor(Wr, inv), m, epsilon, WEYL)


def synthetic_weyl_multi(k, m: int, epsilon: int, rng: np.random.Generator,
                         structures: Iterable[Iterable[int]]) -> FrameTensor:
    """Random Weyl tensor in class ``k`` with respect to every listed structure.

    Each class mask is a selection of torus weight spaces, so applying them in
    turn keeps the Weyl symmetries.
    """
    N = 2 * m + epsilon
    W = symmetry_project(random_complex((N,) * 4, rng), m, epsilon).entries
    for M in structures:
        perm = relabel_for(frozenset(M), m, epsilon)
        Wr = np.where(class_mask(4, m, epsilon, k), relabel_tensor(W, perm), 0)
        W = relabel_tensor(Wr, np.argsort(perm))
    return FrameTensor(W, m, epsilon, WEYL)


def synthetic_cy_multi(level, m: int, epsilon: int, rng: np.random.Generator,
                       structures: Iterable[Iterable[int]]) -> FrameTensor:
    N = 2 * m + epsilon
    A = cy_project(random_complex((N,) * 3, rng), m, epsilon).entries
    for M in structures:
        perm = relabel_for(frozenset(M), m, epsilon)
        Ar = np.where(class_mask(3, m, epsilon, level), relabel_tensor(A, perm), 0)
        A = relabel_tensor(Ar, np.argsort(perm))
    return FrameTensor(A, m, epsilon, COTTON_YORK)


def synthetic_cy(level, m: int, epsilon: int, rng: np.random.Generator,
                 M: Iterable[int] | None = None) -> FrameTensor:
    N = 2 * m + epsilon
    A = cy_project(random_complex((N,) * 3, rng), m, epsilon).entries
    M = frozenset(range(1, m + 1) if M is None else M)
    perm = relabel_for(M, m, epsilon)
    Ar = np.where(class_mask(3, m, epsilon, level), relabel_tensor(A, perm), 0)
    return FrameTensor(relabel_tensor(Ar, np.argsort(perm)), m, epsilon, COTTON_YORK)


def multi_grade_mask(t: np.ndarray, m: int, epsilon: int, keep) -> np.ndarray:
    """Zero components whose per-pair torus weight vector fails ``keep(w)``."""
    w = multi_weights(t.ndim, m, epsilon)
    flat = w.reshape(-1, m)
    ok = np.array([bool(keep(tuple(x))) for x in flat]).reshape(t.shape)
    return np.where(ok, t, 0)
