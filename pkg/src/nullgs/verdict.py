"""Theorem pipelines: Cotton-York from the Weyl divergence, verdicts, conformal checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .chart import ChartMetric, curvature_at, jet_at
from .classify import (COTTON_YORK, WEYL, FiltrationReport, FrameTensor, filtration_level,
                       level_range)
from .config import DEFAULT_TOL, Tolerances
from .errors import ClassMismatch, DimensionTooSmall, ZeroOmega
from .frame import (FrameField, FramePoint, RescaledFrame, frame_point, involutivity_check,
                    nabla_weyl_from_gamma)
from .poly import Poly
from .systems import assemble_system, solve_trivial, stages_for


# --- Cotton-York from the divergence of the Weyl tensor ----------------------------

def cotton_york_alt(fp: FramePoint) -> np.ndarray:
    """Frame components of A from ``eta^{ea} (nabla_e C)_{abcd} = (3 - n) A_{bcd}``.

    ``nabla C`` is assembled from directional derivatives of the frame
    components and the connection coefficients.
    """
    n = fp.E.shape[0]
    if n < 5:
        raise DimensionTooSmall(f"divergence formula needs n >= 5, got {n}")
    div = np.einsum("ea,eabcd->bcd", fp.eta, nabla_weyl_from_gamma(fp))
    return div / (3 - n)


def cotton_york_agreement(fp: FramePoint, floor: float = 1e-12) -> float:
    """Relative gap between the Rho-derivative route and the divergence route."""
    alt = cotton_york_alt(fp)
    scale = max(float(np.abs(fp.cotton_york).max()), float(np.abs(nabla_weyl_from_gamma(fp)).max()), floor)
    return float(np.abs(alt - fp.cotton_york).max()) / scale


# --- verdicts ----------------------------------------------------------------------

@dataclass
class Implication:
    name: str
    applicable: bool
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "applicable": self.applicable, "pass": self.passed, "detail": self.detail}


@dataclass
class StructureVerdict:
    structure: tuple[int, ...]
    weyl: FiltrationReport
    cy: FiltrationReport | None
    involutive: dict | None
    systems: list[dict] = field(default_factory=list)
    implications: list[Implication] = field(default_factory=list)
    status: str = ""
    generic: bool = False
    hypotheses: bool = False

    @property
    def consistent(self) -> bool:
        return all(i.passed for i in self.implications if i.applicable)

    def as_dict(self) -> dict:
        return {
            "structure": list(self.structure),
            "weyl_level": str(self.weyl.level),
            "cy_level": None if self.cy is None else str(self.cy.level),
            "weyl_profile": {str(k): v for k, v in self.weyl.grading_profile.items()},
            "system": self.systems,
            "involutive": self.involutive,
            "implications": [i.as_dict() for i in self.implications],
            "generic": self.generic,
            "hypotheses": self.hypotheses,
            "status": self.status,
        }


def theorem_k(weyl_level, epsilon: int) -> int | None:
    """Largest case index the theorems cover for a given Weyl level (None below 0)."""
    if weyl_level < 0:
        return None
    return int(min(weyl_level, 4 if epsilon else 2))


def cy_required(k: int, epsilon: int, integrable: bool) -> Fraction:
    """CY level guaranteed by the propositions (``integrable`` selects the stronger one)."""
    if epsilon:
        return Fraction(k - (1 if integrable else 2))
    return Fraction(k) - (Fraction(1, 2) if integrable else Fraction(3, 2))


def _system_report(weyl: FrameTensor, cy: FrameTensor | None, k: int, tol: Tolerances,
                   assume_cy: bool = False, gamma: np.ndarray | None = None) -> list[dict]:
    out = []
    for spec in stages_for(weyl.epsilon, k):
        try:
            sys = assemble_system(weyl, spec.key, cy, assume_cy=assume_cy, tol=tol)
        except ClassMismatch as e:
            out.append({"case": spec.key, "assembled": False, "reason": str(e)})
            continue
        rep = solve_trivial(sys.matrix, tol)
        entry = {"case": spec.key, "assembled": True, "size": sys.size,
                 "sigma_min": rep.sigma_min, "sigma_max": rep.sigma_max,
                 "nonsingular": rep.nonsingular, "kernel_dim": rep.kernel_dim,
                 "condition": rep.condition,
                 "det": [sys.det_value.real, sys.det_value.imag],
                 "D": [sys.D_value.real, sys.D_value.imag],
                 "min_block": float(min(abs(v) for v in sys.diag_values)),
                 "builder_gap": sys.builder_gap}
        if gamma is not None:
            from .systems import layout
            lay = layout(spec.key, weyl.m)
            x = np.array([u.sign * gamma[u.idx] for u in lay.unknowns])
            entry["gamma_unknowns_max"] = float(np.abs(x).max())
        out.append(entry)
    return out


def _levels(weyl: FrameTensor, cy: FrameTensor | None, M, tol):
    wr = filtration_level(weyl, M, tol)
    cr = filtration_level(cy, M, tol) if cy is not None else None
    return wr, cr


def tensor_verdict(weyl: FrameTensor, cy: FrameTensor | None, M: Iterable[int] | None = None,
                   tol: Tolerances = DEFAULT_TOL, assume_cy: bool = False) -> StructureVerdict:
    """Algebraic part of the pipeline for frame tensors given directly.

    Everything is relabeled so N_M is spanned by the unprimed vectors; the
    assembled systems then decide whether the connection components that
    obstruct integrability are forced to vanish.
    """
    m, eps = weyl.m, weyl.epsilon
    M = tuple(sorted(range(1, m + 1) if M is None else M))
    wr, cr = _levels(weyl, cy, M, tol)
    v = StructureVerdict(M, wr, cr, None)
    top = level_range(4, eps)[1]
    if wr.level >= top:
        v.status = "conformally flat; theorems vacuous"
        return v
    k = theorem_k(wr.level, eps)
    if k is None:
        v.status = "Weyl not algebraically special for this structure"
        return v
    W = weyl.relabeled(M)
    A = cy.relabeled(M) if cy is not None else None
    v.systems = _system_report(W, A, k, tol, assume_cy)
    hyp_cy = assume_cy or (cr is not None and cr.level >= cy_required(k, eps, True))
    v.generic = bool(v.systems) and all(s.get("assembled") and s["nonsingular"] for s in v.systems)
    # with the hypotheses met and every system nonsingular, the homogeneous
    # systems only admit the zero solution
    v.implications.append(Implication(
        "forced_zero_gamma", hyp_cy and v.generic, True,
        "systems nonsingular" if v.generic else "some system singular or not assembled"))
    if cr is not None:
        need = cy_required(k, eps, False)
        v.implications.append(Implication(
            "weyl_level_implies_cy_level", True, cr.level >= need,
            f"CY level {cr.level} >= {need}"))
    v.hypotheses = hyp_cy
    if not hyp_cy:
        v.status = "hypotheses not met"
    elif not v.generic:
        v.status = "hypotheses met; Weyl not generic"
    else:
        v.status = "integrability forced"
    return v


def gs_verdict(chart: ChartMetric, frame: FrameField, M: Iterable[int] | None, points: Sequence,
               tol: Tolerances = DEFAULT_TOL) -> StructureVerdict:
    """Full pipeline at sample points for one canonical structure.

    Levels are the minimum over points; the implication instances are
    checked against the observed involutivity of N_M.
    """
    m, eps = chart.m, chart.epsilon
    M = tuple(sorted(range(1, m + 1) if M is None else M))
    verdicts = []
    for x in points:
        fp = frame_point(chart, frame, x)
        W = FrameTensor(fp.weyl, m, eps, WEYL)
        A = FrameTensor(fp.cotton_york, m, eps, COTTON_YORK)
        sv = tensor_verdict(W, A, M, tol)
        sv.systems = [dict(s, point=[[z.real, z.imag] for z in np.asarray(x)]) for s in sv.systems]
        verdicts.append(sv)
    worst = min(verdicts, key=lambda s: (s.weyl.level, s.cy.level))
    inv = involutivity_check(chart, frame, M, points, tol.frame)
    integrable = inv.integrable
    v = StructureVerdict(M, worst.weyl, worst.cy,
                         {"N": inv.N_involutive, "N_perp": inv.N_perp_involutive,
                          "gamma_test": list(inv.gamma_residual), "bracket_test": list(inv.bracket_residual)})
    v.systems = [s for sv in verdicts for s in sv.systems]
    top = level_range(4, eps)[1]
    flat = worst.weyl.level >= top
    wl, cl = worst.weyl.level, worst.cy.level
    if chart.n > 4:
        v.implications.append(Implication(
            "integrability_condition", integrable, (wl >= -1 - eps) if integrable else True,
            f"Weyl level {wl} >= {-1 - eps}"))
    k = theorem_k(wl, eps)
    if k is not None:
        need = cy_required(k, eps, False)
        v.implications.append(Implication("weyl_level_implies_cy_level", True, cl >= need, f"CY level {cl} >= {need}"))
        need_i = cy_required(k, eps, True)
        v.implications.append(Implication("weyl_level_and_integrable_imply_cy_level", integrable,
                                          (cl >= need_i) if integrable else True,
                                          f"CY level {cl} >= {need_i}"))
    if flat:
        v.status = "conformally flat; theorems vacuous"
    else:
        hyp = all(sv.hypotheses for sv in verdicts)
        v.generic = all(sv.generic for sv in verdicts)
        v.hypotheses = hyp
        v.implications.append(Implication(
            "hypotheses_and_generic_imply_integrable", hyp and v.generic, integrable if hyp and v.generic else True,
            "hypotheses met, systems nonsingular" if hyp and v.generic
            else ("Weyl not generic" if hyp else "hypotheses not met")))
        v.status = "consistent" if v.consistent else "INCONSISTENT"
    return v


def multi_verdict(weyl: FrameTensor, cy: FrameTensor | None, structures: Iterable[Iterable[int]],
                  tol: Tolerances = DEFAULT_TOL, assume_cy: bool = False) -> list[StructureVerdict]:
    """The tensor pipeline repeated over several canonical structures."""
    return [tensor_verdict(weyl, cy, M, tol, assume_cy) for M in structures]


# --- conformal rescaling ---------------------------------------------------------------

@dataclass(frozen=True)
class ConformalData:
    omega: Poly

    def value(self, x) -> complex:
        return self.omega(x)

    def upsilon(self, x) -> np.ndarray:
        """``d log omega`` at ``x`` in coordinate components."""
        w = self.omega(x)
        if w == 0:
            raise ZeroOmega("conformal factor vanishes at point")
        return np.array([self.omega.diff(i)(x) for i in range(self.omega.n)]) / w


def conformal_rescale(chart: ChartMetric, data: ConformalData, points: Sequence = ()) -> ChartMetric:
    for x in points:
        if abs(data.value(x)) == 0:
            raise ZeroOmega(f"conformal factor vanishes at {x}")
    return chart.scaled(data.omega * data.omega)


@dataclass
class ConformalReport:
    cy_residual: float
    weyl_residual: float
    levels_before: list
    levels_after: list
    cy_levels_before: list
    cy_levels_after: list
    involutive_before: list
    involutive_after: list
    cy_preserved: bool

    @property
    def invariant(self) -> bool:
        return (self.levels_before == self.levels_after and self.involutive_before == self.involutive_after
                and self.cy_preserved)

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["invariant"] = self.invariant
        return d


def cy_conformal_check(chart: ChartMetric, data: ConformalData, points: Sequence, frame: FrameField | None = None,
                       structures: Iterable[Iterable[int]] | None = None,
                       tol: Tolerances = DEFAULT_TOL) -> ConformalReport:
    """``A^ = A - C(Upsilon, ., ., .)`` at each point, plus invariance of levels.

    Levels and involutivity for the rescaled chart use the renormalized frame
    ``xi / omega``.
    """
    hat = conformal_rescale(chart, data, points)
    worst_a = worst_c = 0.0
    for x in points:
        c0 = curvature_at(jet_at(chart, x))
        c1 = curvature_at(jet_at(hat, x))
        ginv = np.linalg.inv(chart.eval_g(x))
        ups = ginv @ data.upsilon(x)
        pred = c0.cotton_york - np.einsum("d,dabc->abc", ups, c0.weyl)
        sa = max(float(np.abs(c1.cotton_york).max()), float(np.abs(pred).max()), tol.abs_floor)
        worst_a = max(worst_a, float(np.abs(c1.cotton_york - pred).max()) / sa)
        w2 = data.value(x) ** 2
        sc = max(float(np.abs(c1.weyl).max()), tol.abs_floor)
        worst_c = max(worst_c, float(np.abs(c1.weyl - w2 * c0.weyl).max()) / sc)
    lb, la, cb, ca, ib, ia = [], [], [], [], [], []
    preserved = True
    if frame is not None:
        m, eps = chart.m, chart.epsilon
        rframe = RescaledFrame(frame, data.omega)
        structures = list(structures) if structures is not None else [tuple(range(1, m + 1))]
        for M in structures:
            for x in points:
                f0, f1 = frame_point(chart, frame, x), frame_point(hat, rframe, x)
                w0, w1 = (FrameTensor(f.weyl, m, eps, WEYL) for f in (f0, f1))
                a0, a1 = (FrameTensor(f.cotton_york, m, eps, COTTON_YORK) for f in (f0, f1))
                l0, l1 = filtration_level(w0, M, tol).level, filtration_level(w1, M, tol).level
                k0, k1 = filtration_level(a0, M, tol).level, filtration_level(a1, M, tol).level
                lb.append(str(l0))
                la.append(str(l1))
                cb.append(str(k0))
                ca.append(str(k1))
                # whenever the Weyl level guarantees a CY level, rescaling keeps it
                k = theorem_k(l0, eps)
                if k is not None:
                    need = cy_required(k, eps, True)
                    if k0 >= need and k1 < need:
                        preserved = False
            ib.append(involutivity_check(chart, frame, M, points, tol.frame).integrable)
            ia.append(involutivity_check(hat, rframe, M, points, tol.frame).integrable)
    return ConformalReport(worst_a, worst_c, lb, la, cb, ca, ib, ia, preserved)
