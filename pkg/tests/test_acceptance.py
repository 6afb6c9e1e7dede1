"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the terminal summary.
"""
import json
import time
from itertools import combinations
from pathlib import Path

import numpy as np

from nullgs import fixtures as fx
from nullgs.bianchi import Operands, bianchi_residuals_at, families_for, mutant_residual, pick_mutants
from nullgs.chart import curvature_at, curvature_residuals, jet_at
from nullgs.classify import (SignatureInfo, conjugate_structure, conjugation_action, conjugation_checks,
                             cross_check, degeneracy_conditions, level_range,
                             quotient_structures, real_index_allowed, synthetic_weyl,
                             synthetic_weyl_multi)
from nullgs.cli import run_scenario
from nullgs.config import CorpusConfig
from nullgs.frame import frame_point, involutivity_check, validate_frame
from nullgs.systems import (CASES, assemble_system, degenerate_column_weyl, det_split_check,
                            extract_rows, solve_trivial, symbolic_system)
from nullgs.verdict import (ConformalData, cotton_york_agreement, cy_conformal_check, gs_verdict,
                            tensor_verdict)

SCEN = Path(__file__).resolve().parents[1] / "scenarios"
RESULTS: list[str] = []
_CORPUS = {}


def verdict(n, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}  {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def corpus():
    if "fixtures" not in _CORPUS:
        _CORPUS["fixtures"] = fx.corpus(CorpusConfig())
    return _CORPUS["fixtures"]


def frame_points():
    if "points" not in _CORPUS:
        _CORPUS["points"] = [frame_point(f.chart, f.frame, f.points[0]) for f in corpus()]
    return _CORPUS["points"]


def test_criterion_01_curvature_identities():
    t0 = time.perf_counter()
    fixtures = corpus()
    worst = 0.0
    for f in fixtures:
        jet = jet_at(f.chart, f.points[0])
        res = curvature_residuals(curvature_at(jet), jet.ginv)
        worst = max(worst, max(res.values()))
    dt = time.perf_counter() - t0
    dims = sorted({f.chart.n for f in fixtures})
    ok = len(fixtures) == 100 and dims == [5, 6, 7] and worst < 1e-8 and dt < 60
    verdict(1, "curvature identities", ok,
            f"{len(fixtures)} metrics n={dims}, worst relative {worst:.2e} (< 1e-8), {dt:.1f}s (< 60s)")


def test_criterion_02_bianchi_families_and_mutants():
    t0 = time.perf_counter()
    worst_odd = worst_even = 0.0
    n_odd = n_even = 0
    for fp in frame_points():
        rep = bianchi_residuals_at(fp)
        if rep.epsilon:
            assert set(rep.residuals) == set(families_for(1))
            worst_odd, n_odd = max(worst_odd, rep.max_relative), n_odd + 1
        else:
            worst_even, n_even = max(worst_even, rep.max_relative), n_even + 1
    fp7 = next(fp for fp in frame_points() if fp.E.shape[0] == 7)
    picks = pick_mutants(Operands.from_frame_point(fp7))
    detected = {name: mutant_residual(fp7, name, i) for name, i in picks.items()}
    caught = sum(v > 1e-3 for v in detected.values())
    dt = time.perf_counter() - t0
    ok = (worst_odd < 1e-7 and worst_even < 1e-7 and len(picks) == 20 and caught == 20 and dt < 120)
    verdict(2, "Bianchi families", ok,
            f"odd {n_odd} pts worst {worst_odd:.2e}, even {n_even} pts worst {worst_even:.2e} (< 1e-7); "
            f"mutants detected {caught}/{len(picks)} (min {min(detected.values()):.2e} > 1e-3); {dt:.1f}s")


def test_criterion_03_cotton_york_dual_route():
    worst = max(cotton_york_agreement(fp) for fp in frame_points())
    names = []
    for path in sorted(SCEN.glob("*.json")):
        obj = json.loads(path.read_text())
        if obj["mode"] != "chart":
            continue
        obj["tasks"] = ["bianchi"]
        rep = run_scenario(obj, SCEN)
        gap = rep["tasks"]["bianchi"]["cotton_york_dual_route"]
        if gap is not None:
            names.append(obj["id"])
            worst = max(worst, gap)
    verdict(3, "Cotton-York two routes", worst < 1e-7,
            f"corpus + scenarios {names}: worst relative gap {worst:.2e} (< 1e-7)")


EXPECTED_EVEN = {
    0: ["C_{μνκλ}", "C_{μνκλ̃}"],
    1: ["C_{μνκλ}", "C_{μνκλ̃}", "C_{μν̃κλ̃}"],
    2: ["C_{μνκλ}", "C_{μνκλ̃}", "C_{μν̃κλ̃}", "C_{μ̃ν̃κλ̃}"],
}
EXPECTED_ODD = {
    0: ["C_{μνκλ}", "C_{μνκλ̃}", "C_{μνκ0}", "C_{μν̃κ0}"],
    1: ["C_{μνκλ}", "C_{μνκλ̃}", "C_{μνκ0}", "C_{μν̃κ0}", "C_{μν̃κλ̃}"],
    2: ["C_{μνκλ}", "C_{μνκλ̃}", "C_{μνκ0}", "C_{μν̃κ0}", "C_{μν̃κλ̃}", "C_{μν̃κ̃0}"],
    3: ["C_{μνκλ}", "C_{μνκλ̃}", "C_{μνκ0}", "C_{μν̃κ0}", "C_{μν̃κλ̃}", "C_{μν̃κ̃0}", "C_{μ̃ν̃κλ̃}"],
    4: ["C_{μνκλ}", "C_{μνκλ̃}", "C_{μνκ0}", "C_{μν̃κ0}", "C_{μν̃κλ̃}", "C_{μν̃κ̃0}", "C_{μ̃ν̃κλ̃}",
        "C_{μ̃0ν̃κ̃}"],
}


def test_criterion_04_classification_ground_truth():
    checks = fails = 0
    for eps in (0, 1):
        low, top = level_range(4, eps)
        for m in (2, 3, 4):
            for k in range(int(low), int(top) + 1):
                checks += 1
                fails += not cross_check(k, eps, m)["agree"]
    lists_ok = (all(degeneracy_conditions(k, 0).render() == v for k, v in EXPECTED_EVEN.items())
                and all(degeneracy_conditions(k, 1).render() == v for k, v in EXPECTED_ODD.items()))
    verdict(4, "classification", fails == 0 and lists_ok,
            f"{checks - fails}/{checks} (k, parity, m) weight-rule checks agree; explicit lists verbatim: {lists_ok}")


def test_criterion_05_pp_wave():
    details, ok = [], True
    for n in (5, 6, 7):
        f = fx.pp_wave(n, count=3)
        eps = f.chart.epsilon
        inv = involutivity_check(f.chart, f.frame, range(1, f.chart.m + 1), f.points)
        v = gs_verdict(f.chart, f.frame, None, f.points)
        props = [i for i in v.implications if i.name.startswith("weyl_level")]
        good = (validate_frame(f.chart, f.frame, f.points).passed and inv.N_involutive
                and inv.N_perp_involutive and v.weyl.level >= -1 - eps and v.consistent
                and props and all(i.passed for i in props))
        ok &= bool(good)
        details.append(f"n={n} involutive={inv.integrable} weyl={v.weyl.level} cy={v.cy.level} "
                       f"implications {sum(i.passed for i in v.implications)}/{len(v.implications)}")
    verdict(5, "pp-wave integrability", ok, "; ".join(details))


def _combos():
    return [(key, m) for key, c in CASES.items() for m in ((2, 3) if c.epsilon else (3, 4))]


def test_criterion_06_system_integrity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    gap = 0.0
    for key, m in _combos():
        c = CASES[key]
        sym = symbolic_system(key, m)
        for _ in range(20):
            W = synthetic_weyl(c.k, m, c.epsilon, rng)
            Mi = sym.matrix(W.entries)
            gap = max(gap, float(np.abs(Mi - extract_rows(key, m, W.entries)).max()) / W.norm())
    split = [det_split_check(key, m, trials=3, rng=rng) for key, m in _combos()]
    split_ok = all(r.passed for r in split)
    combos = _combos()
    good = 0
    for i in range(100):
        key, m = combos[i % len(combos)]
        c = CASES[key]
        rep = solve_trivial(assemble_system(synthetic_weyl(c.k, m, c.epsilon, rng), key, assume_cy=True).matrix)
        good += rep.nonsingular and rep.kernel_dim == 0
    singular = 0
    for key, m in combos:
        c = CASES[key]
        W, _ = degenerate_column_weyl(synthetic_weyl(c.k, m, c.epsilon, rng), key)
        singular += not solve_trivial(assemble_system(W, key, assume_cy=True).matrix).nonsingular
    dt = time.perf_counter() - t0
    ok = gap < 1e-10 and split_ok and good >= 95 and singular == len(combos) and dt < 300
    verdict(6, "linear system integrity", ok,
            f"builder gap {gap:.1e} over {20 * len(combos)} draws (< 1e-10); det split "
            f"{sum(r.passed for r in split)}/{len(split)}; nonsingular {good}/100 (>= 95); "
            f"degenerate singular {singular}/{len(combos)}; {dt:.0f}s (< 300s)")


def test_criterion_07_determinant_formulas():
    rng = np.random.default_rng(7)
    worst_prod = worst_nine = 0.0
    for m, eps, key, k in ((3, 0, "even-k2-K", 2), (4, 0, "even-k2-K", 2)):
        t = lambda a: m + a - 1
        for _ in range(10):
            W = synthetic_weyl(k, m, eps, rng)
            C = W.entries
            S = assemble_system(W, key, assume_cy=True)
            for b, B in zip(S.blocks, S.diag_blocks):
                if len(b.rows) == 3:
                    mu, nu, la = b.index
                    e = C[t(mu), t(nu), t(mu), t(nu)] * C[t(nu), t(la), t(nu), t(la)] * C[t(la), t(mu), t(la), t(mu)]
                    worst_prod = max(worst_prod, abs(np.linalg.det(B) - e) / abs(e))
    m = 3
    t = lambda a: m + a - 1
    x = lambda a: a - 1
    for _ in range(20):
        W = synthetic_weyl(1, m, 0, rng)
        C = W.entries
        S = assemble_system(W, "even-k1-K", assume_cy=True)
        B = [B for b, B in zip(S.blocks, S.diag_blocks) if len(b.rows) == 3][0]
        e = 9 * C[t(2), t(3), x(3), t(2)] * C[t(3), t(1), x(1), t(3)] * C[t(1), t(2), x(2), t(1)]
        worst_nine = max(worst_nine, abs(np.linalg.det(B) - e) / abs(e))
    ok = worst_prod < 1e-9 and worst_nine < 1e-9
    verdict(7, "determinant formulas", ok,
            f"k=2 product rel {worst_prod:.1e}, six-dim k=1 det = 9CCC rel {worst_nine:.1e} (< 1e-9)")


def test_criterion_08_conformal():
    rng = np.random.default_rng(8)
    worst = 0.0
    for n in (5, 6, 7):
        f = fx.random_fixture(n, 3, rng)
        for om in fx.conformal_factors(n).values():
            worst = max(worst, cy_conformal_check(f.chart, ConformalData(om), f.points).cy_residual)
    inv, total = 0, 0
    for n in (6, 7):
        f = fx.pp_wave(n, count=2)
        for om in fx.conformal_factors(n).values():
            rep = cy_conformal_check(f.chart, ConformalData(om), f.points, f.frame)
            total += 1
            inv += rep.invariant
    ok = worst < 1e-7 and inv == total == 6
    verdict(8, "conformal rescaling", ok,
            f"A^ = A - C(Upsilon) worst rel {worst:.1e} (< 1e-7); invariant under omega {inv}/{total}")


def test_criterion_09_reality():
    sigs = [(p, n - p) for n in range(2, 10) for p in range(n + 1)]
    rule_ok, act_ok = 0, True
    for p, q in sigs:
        lo = min(p, q)
        expect = set(range(lo + 1)) if (p + q) % 2 else {r for r in range(lo + 1) if (r - lo) % 2 == 0}
        sig = SignatureInfo(p, q)
        rule_ok += real_index_allowed(sig) == expect
        for r in expect:
            chk = conjugation_checks(conjugation_action(sig, r))
            act_ok &= chk["involution"] and chk["metric_preserving"] and chk["signature_ok"] and chk["real_index"] == r
    orbit_ok, orbit_cases = True, 0
    for p, q in sigs:
        sig = SignatureInfo(p, q)
        if not 2 <= sig.m <= 4:
            continue
        for r in real_index_allowed(sig):
            act = conjugation_action(sig, r)
            all_M = [frozenset(c) for k in range(sig.m + 1) for c in combinations(range(1, sig.m + 1), k)]
            brute = len({frozenset({M, conjugate_structure(act, M)}) for M in all_M})
            orbit_cases += 1
            orbit_ok &= brute == len(quotient_structures(sig, r))
    ok = rule_ok == len(sigs) and act_ok and orbit_ok
    verdict(9, "reality", ok,
            f"allowed r matches rule for {rule_ok}/{len(sigs)} signatures n<=9; actions involutive and "
            f"metric-preserving: {act_ok}; orbit counts over {orbit_cases} (signature, r) cases: {orbit_ok}")


def test_criterion_10_multi_structure():
    rng = np.random.default_rng(10)
    details, ok = [], True
    for m, eps in ((3, 0), (4, 0), (2, 1), (3, 1)):
        S, E = tuple(range(1, m + 1)), ()
        sig = SignatureInfo(2 * m + eps, 0)
        act = conjugation_action(sig, 0)
        conj = conjugate_structure(act, S) == frozenset(E)
        W = synthetic_weyl_multi(0, m, eps, rng, [S, E])
        vs = [tensor_verdict(W, None, M, assume_cy=True) for M in (S, E)]
        good = conj and all(v.status == "integrability forced" and v.generic
                            and all(s["nonsingular"] and s["kernel_dim"] == 0 for s in v.systems)
                            and any(i.name == "forced_zero_gamma" and i.applicable and i.passed
                                    for i in v.implications) for v in vs)
        ok &= bool(good)
        smin = min(s["sigma_min"] / s["sigma_max"] for v in vs for s in v.systems)
        details.append(f"n={2 * m + eps} conjugate={conj} min sigma ratio {smin:.1e}")
    verdict(10, "multi-structure", ok, "; ".join(details))
