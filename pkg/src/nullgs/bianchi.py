"""Parser and evaluator for the component Bianchi families.

Terms are evaluated with numpy einsum over sliced frame arrays.  Free
letters become output axes of length m (their value 1..m); a letter used in
an unprimed slot picks frame index ``mu-1`` and in a tilde slot ``m+mu-1``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bianchi_data import FAMILIES
from .errors import EvaluationFailure
from .frame import FramePoint, frame_point

FREE = "mnrkl"
DUMMY = "s"


@dataclass(frozen=True)
class Slot:
    letter: str  # one of FREE, DUMMY or "0"
    tilde: bool = False
    upper: bool = False

    @property
    def is_zero(self) -> bool:
        return self.letter == "0"

    def __str__(self):
        return self.letter + ("~" if self.tilde else "")


@dataclass(frozen=True)
class Factor:
    name: str  # d, C, G, g, A
    slots: tuple[Slot, ...]


@dataclass(frozen=True)
class Term:
    coef: int
    factors: tuple[Factor, ...]
    groups: tuple[tuple[str, ...], ...]
    text: str

    def has_zero(self) -> bool:
        return any(s.is_zero for f in self.factors for s in f.slots)

    def free_letters(self) -> list[str]:
        seen = []
        for f in self.factors:
            for s in f.slots:
                if s.letter in FREE and s.letter not in seen:
                    seen.append(s.letter)
        return seen

    def has(self, name: str) -> bool:
        return any(f.name == name for f in self.factors)


def _split_factors(text: str):
    i = 0
    out = []
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = text.index("(", i)
        k = text.index(")", j)
        out.append((text[i:j].strip(), text[j + 1:k]))
        i = k + 1
    return out


@lru_cache(maxsize=None)
def parse_term(text: str) -> Term:
    head, _, rest = text.strip().partition(" ")
    coef = int(head)
    factors = []
    # token stream for bracket analysis: ("open",), ("close",), ("bar",), ("idx", letter, kind)
    stream = []
    for name, body in _split_factors(rest):
        slots = []
        upper = False
        for tok in body.split():
            if tok == "|":
                stream.append(("bar",))
                continue
            if tok == "^":
                upper = True
                continue
            while tok.startswith("["):
                stream.append(("open",))
                tok = tok[1:]
            closes = len(tok) - len(tok.rstrip("]"))
            tok = tok.rstrip("]")
            tilde = tok.endswith("~")
            letter = tok.rstrip("~")
            if letter not in FREE + DUMMY + "0":
                raise ValueError(f"bad index {tok!r} in {text!r}")
            slots.append(Slot(letter, tilde, upper))
            stream.append(("idx", letter, tilde))
            stream.extend([("close",)] * closes)
        factors.append(Factor(name, tuple(slots)))
    # merge derivative with the following Weyl factor
    merged = []
    for f in factors:
        if merged and merged[-1].name == "d" and f.name == "C":
            merged[-1] = Factor("dC", merged[-1].slots + f.slots)
        else:
            merged.append(f)
    return Term(coef, tuple(merged), _groups(stream, text), text)


def _groups(stream, text) -> tuple[tuple[str, ...], ...]:
    """Skew groups: letters at a group's own depth outside its paired bars."""
    groups = []
    stack = []  # each entry: list of (position, event) at this depth
    for pos, ev in enumerate(stream):
        if ev[0] == "open":
            stack.append([])
        elif ev[0] == "close":
            if not stack:
                raise ValueError(f"unbalanced brackets in {text!r}")
            groups.append(stack.pop())
        elif stack:
            stack[-1].append(ev)
    if stack:
        raise ValueError(f"unbalanced brackets in {text!r}")
    out = []
    for events in groups:
        nbars = sum(1 for e in events if e[0] == "bar")
        usable = nbars - nbars % 2
        seen_bars = 0
        excluded = False
        members = []
        kinds = set()
        for e in events:
            if e[0] == "bar":
                if seen_bars < usable:
                    excluded = not excluded
                seen_bars += 1
                continue
            _, letter, tilde = e
            if excluded or letter not in FREE:
                continue
            members.append(letter)
            kinds.add(tilde)
        if len(kinds) > 1:
            raise ValueError(f"mixed-kind skew group in {text!r}")
        if len(members) > 1:
            out.append(tuple(members))
    return tuple(out)


@dataclass(frozen=True)
class Family:
    name: str
    lhs: tuple[Term, ...]
    rhs: tuple[Term, ...]
    letters: tuple[str, ...]
    kinds: tuple[bool, ...]

    @property
    def has_zero_index(self) -> bool:
        return any(s.is_zero for t in self.lhs[:1] for f in t.factors for s in f.slots)


def _family_letters(lhs: tuple[Term, ...]):
    letters, kinds = [], []
    for f in lhs[0].factors:
        for s in f.slots:
            if s.letter in FREE and s.letter not in letters:
                letters.append(s.letter)
                kinds.append(s.tilde)
    return tuple(letters), tuple(kinds)


def parse_family(name: str, lhs, rhs) -> Family:
    L = tuple(parse_term(t) for t in lhs)
    R = tuple(parse_term(t) for t in rhs)
    letters, kinds = _family_letters(L)
    return Family(name, L, R, letters, kinds)


@lru_cache(maxsize=None)
def family(name: str) -> Family:
    lhs, rhs = FAMILIES[name]
    return parse_family(name, lhs, rhs)


FAMILY_NAMES = tuple(FAMILIES)


def families_for(epsilon: int) -> list[str]:
    if epsilon:
        return list(FAMILY_NAMES)
    return [n for n in FAMILY_NAMES if not family(n).has_zero_index]


@dataclass
class Operands:
    """Frame arrays a term can reference."""

    m: int
    epsilon: int
    C: np.ndarray
    Gup: np.ndarray
    g: np.ndarray
    A: np.ndarray
    dC: np.ndarray | None = None

    @classmethod
    def from_frame_point(cls, fp: FramePoint) -> "Operands":
        m = fp.E.shape[0] // 2
        eps = fp.E.shape[0] % 2
        return cls(m, eps, fp.weyl, fp.gamma_up, fp.eta, fp.cotton_york, fp.d_weyl)

    def array(self, name: str) -> np.ndarray:
        arr = {"C": self.C, "G": self.Gup, "g": self.g, "A": self.A, "dC": self.dC}[name]
        if arr is None:
            raise EvaluationFailure(f"operand {name} not available")
        return arr


_CHARS = {"S": "S", "T": "U"}


def _slot_index(s: Slot, m: int):
    if s.is_zero:
        return 2 * m
    return slice(m, 2 * m) if s.tilde else slice(0, m)


def _slot_char(s: Slot) -> str:
    if s.letter == DUMMY:
        return "T" if s.tilde else "S"
    return s.letter


def eval_term(term: Term, ops: Operands, letters: tuple[str, ...], open_gamma: bool = False) -> np.ndarray:
    """Value of one term as an array over ``letters`` (each axis length m).

    With ``open_gamma`` the connection factor is replaced by a delta so the
    result carries three trailing axes: the coefficient of ``Gup[i, j, k]``.
    """
    m = ops.m
    N = 2 * m + ops.epsilon
    operands, subs = [], []
    extra = ""
    for f in term.factors:
        if f.name == "G" and open_gamma:
            base = np.einsum("ai,bj,ck->abcijk", np.eye(N), np.eye(N), np.eye(N))
            extra = "xyz"
        else:
            base = ops.array(f.name)
        idx = tuple(_slot_index(s, m) for s in f.slots)
        arr = base[idx]
        sub = "".join(_slot_char(s) for s in f.slots if not s.is_zero)
        if f.name == "G" and open_gamma:
            sub += "xyz"
        operands.append(arr)
        subs.append(sub)
    present = [c for c in letters if any(c in s for s in subs)]
    expr = ",".join(subs) + "->" + "".join(present) + extra
    val = term.coef * np.einsum(expr, *operands, optimize=len(operands) > 2)
    # broadcast any free letter the term does not carry
    for pos, c in enumerate(letters):
        if c not in present:
            val = np.expand_dims(val, pos)
    shape = (m,) * len(letters) + ((N,) * 3 if extra else ())
    val = np.broadcast_to(val, shape)
    for grp in term.groups:
        val = _skew(val, letters, grp)
    return np.asarray(val)


def _skew(val: np.ndarray, letters, grp) -> np.ndarray:
    axes = [letters.index(c) for c in grp]
    k = len(axes)
    out = np.zeros_like(val)
    for perm in itertools.permutations(range(k)):
        sign = _perm_sign(perm)
        order = list(range(val.ndim))
        for src, dst in zip(axes, perm):
            order[src] = axes[dst]
        out = out + sign * np.transpose(val, order)
    return out / math.factorial(k)


def _perm_sign(p) -> int:
    p = list(p)
    s = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def active_terms(terms, epsilon: int):
    return [t for t in terms if epsilon or not t.has_zero()]


def family_residual(fam: Family, ops: Operands, flip: int | None = None) -> np.ndarray:
    """``sum(lhs) - sum(rhs)``; ``flip`` negates the rhs term with that index."""
    res = 0
    for t in active_terms(fam.lhs, ops.epsilon):
        res = res + eval_term(t, ops, fam.letters)
    for i, t in enumerate(fam.rhs):
        if not ops.epsilon and t.has_zero():
            continue
        v = eval_term(t, ops, fam.letters)
        res = res - (-v if flip == i else v)
    return np.asarray(res)


@dataclass(frozen=True)
class BianchiResidualReport:
    residuals: dict[str, float]
    scale: float
    epsilon: int

    @property
    def max_relative(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0


def residual_scale(fp: FramePoint) -> float:
    return float(np.abs(fp.nabla_weyl).max() + np.abs(fp.cotton_york).max())


def bianchi_residuals_at(fp: FramePoint) -> BianchiResidualReport:
    ops = Operands.from_frame_point(fp)
    scale = residual_scale(fp)
    denom = scale if scale > 0 else 1.0
    out = {}
    for name in families_for(ops.epsilon):
        r = family_residual(family(name), ops)
        out[name] = float(np.abs(r).max()) / denom if r.size else 0.0
    return BianchiResidualReport(out, scale, ops.epsilon)


def bianchi_residuals(chart, frame, point) -> BianchiResidualReport:
    return bianchi_residuals_at(frame_point(chart, frame, point))


# mutation suite -----------------------------------------------------------

def gamma_terms(fam: Family, epsilon: int) -> list[int]:
    return [i for i, t in enumerate(fam.rhs) if t.has("G") and (epsilon or not t.has_zero())]


def pick_mutants(ops: Operands) -> dict[str, int]:
    """Per family, the connection term with the largest contribution on ``ops``."""
    out = {}
    for name in families_for(ops.epsilon):
        fam = family(name)
        best, best_i = -1.0, None
        for i in gamma_terms(fam, ops.epsilon):
            v = float(np.abs(eval_term(fam.rhs[i], ops, fam.letters)).max())
            if v > best:
                best, best_i = v, i
        if best_i is not None and best > 0:
            out[name] = best_i
    return out


def mutant_residual(fp: FramePoint, name: str, term_index: int) -> float:
    ops = Operands.from_frame_point(fp)
    r = family_residual(family(name), ops, flip=term_index)
    scale = residual_scale(fp) or 1.0
    return float(np.abs(r).max()) / scale


# coefficient extraction ---------------------------------------------------

def gamma_coefficients(terms, ops: Operands, letters) -> np.ndarray:
    """Coefficient of each ``Gamma[a, b, c]`` (all lowered) in ``sum(terms)``.

    Terms without a connection factor are ignored.  Result shape is
    ``(m,)*len(letters) + (N, N, N)``.
    """
    m, N = ops.m, 2 * ops.m + ops.epsilon
    acc = np.zeros((m,) * len(letters) + (N, N, N), dtype=complex)
    for t in terms:
        if not t.has("G") or (not ops.epsilon and t.has_zero()):
            continue
        acc = acc + eval_term(t, ops, letters, open_gamma=True)
    # Gup[a,b,c] = Gamma[a,b,d] eta[d,c]
    return np.einsum("...abc,dc->...abd", acc, ops.g)


def non_gamma_value(terms, ops: Operands, letters) -> np.ndarray:
    m = ops.m
    acc = np.zeros((m,) * len(letters), dtype=complex)
    for t in terms:
        if t.has("G") or (not ops.epsilon and t.has_zero()):
            continue
        acc = acc + eval_term(t, ops, letters)
    return acc
