"""Command line entry point: scenarios in, JSON and text reports out."""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click
import jsonschema
import numpy as np

from . import fixtures as fx
from .bianchi import bianchi_residuals_at, families_for
from .chart import ChartMetric, curvature_residuals
from .classify import (COTTON_YORK, WEYL, FrameTensor, SignatureInfo, conjugation_action,
                       conjugation_checks, filtration_level, level_range, quotient_structures,
                       real_index_allowed, synthetic_cy, synthetic_cy_multi,
                       synthetic_weyl, synthetic_weyl_multi)
from .config import DEFAULT_TOL, Tolerances
from .errors import FileError, NullGSError, SchemaError
from .frame import (FrameField, all_structures, adapted_frame_jet, frame_from_json, frame_point,
                    validate_frame)
from .chart import jet_at
from .poly import Poly
from .verdict import ConformalData, cotton_york_agreement, cy_conformal_check, gs_verdict, tensor_verdict

TASKS = ("classify", "bianchi", "gs", "conformal", "reality")
DERIVATIVE_TASKS = {"bianchi", "conformal"}

_FIXTURE = {
    "type": "object",
    "required": ["family"],
    "properties": {
        "family": {"enum": ["Flat", "PpWave", "RandomPolyMetric", "SyntheticWeyl", "SyntheticCY"]},
        "n": {"type": "integer", "minimum": 4, "maximum": 9},
        "m": {"type": "integer", "minimum": 2},
        "epsilon": {"enum": [0, 1]},
        "k": {"type": ["integer", "string"]},
        "level": {"type": ["integer", "string"]},
        "degree": {"type": "integer", "minimum": 0},
        "amplitude": {"type": "number"},
        "seed": {"type": "integer"},
        "H": {"type": "object"},
        "degenerate_for": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
    },
}

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["id", "mode", "tasks"],
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "mode": {"enum": ["chart", "tensor"]},
        "metric": {"type": "string"},
        "frame": {"type": "string"},
        "fixture": _FIXTURE,
        "weyl": {"type": ["string", "object"]},
        "cotton_york": {"type": ["string", "object"]},
        "assume_cy": {"type": "boolean"},
        "structures": {"oneOf": [{"enum": ["all", "quotient"]},
                                 {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}]},
        "signature": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "real_index": {"type": "integer"},
        "points": {"type": "object", "properties": {"count": {"type": "integer", "minimum": 1},
                                                    "seed": {"type": "integer"}}},
        "tasks": {"type": "array", "items": {"enum": list(TASKS)}, "minItems": 1},
        "tolerances": {"type": "object"},
        "omega": {"type": "array", "items": {"type": ["object", "string"]}},
    },
}


# --- serialization helpers ---------------------------------------------------------

def _plain(obj):
    """JSON-ready copy: complex -> [re, im], Fraction -> str, numpy -> python."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_plain(report), indent=2, sort_keys=True)


def _read_json(base: Path, ref):
    if isinstance(ref, dict):
        return ref
    path = (base / ref) if not Path(ref).is_absolute() else Path(ref)
    if not path.exists():
        raise FileError(f"missing file {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: {e}") from e


# --- scenario model ----------------------------------------------------------------

@dataclass
class Scenario:
    id: str
    mode: str
    tasks: tuple[str, ...]
    tol: Tolerances
    seed: int
    count: int
    raw: dict
    base: Path

    @classmethod
    def load(cls, obj: dict, base: Path = Path("."), tol_override: float | None = None,
             seed_override: int | None = None) -> "Scenario":
        try:
            jsonschema.validate(obj, SCENARIO_SCHEMA)
        except jsonschema.ValidationError as e:
            raise SchemaError(f"scenario: {e.message}") from e
        tasks = tuple(obj["tasks"])
        if obj["mode"] == "tensor" and DERIVATIVE_TASKS & set(tasks):
            raise SchemaError(f"tensor mode cannot run {sorted(DERIVATIVE_TASKS & set(tasks))}")
        if obj["mode"] == "chart" and "metric" not in obj and "fixture" not in obj:
            raise SchemaError("chart mode needs a metric file or a fixture")
        if obj["mode"] == "tensor" and "weyl" not in obj and "fixture" not in obj:
            raise SchemaError("tensor mode needs a Weyl tensor or a synthetic fixture")
        try:
            tol = DEFAULT_TOL.with_overrides(**obj.get("tolerances", {}))
        except TypeError as e:
            raise SchemaError(f"unknown tolerance: {e}") from e
        if tol_override is not None:
            tol = tol.with_overrides(rel=tol_override)
        pts = obj.get("points", {})
        seed = seed_override if seed_override is not None else int(pts.get("seed", 0))
        return cls(obj["id"], obj["mode"], tasks, tol, seed, int(pts.get("count", 3)), obj, base)

    # chart mode inputs
    def chart_and_frames(self) -> tuple[ChartMetric, list[tuple[FrameField, list]]]:
        rng = np.random.default_rng(self.seed)
        fix = self.raw.get("fixture")
        frame = None
        if fix is not None:
            chart, frame, pts = _chart_fixture(fix, self.count, self.seed)
        else:
            chart = ChartMetric.from_json(_read_json(self.base, self.raw["metric"]))
            pts = fx.sample_points(chart.n, self.count, rng)
        if "frame" in self.raw:
            frame = frame_from_json(_read_json(self.base, self.raw["frame"]))
        if frame is not None:
            return chart, [(frame, list(pts))]
        # no global frame: a first-order adapted frame at every point
        return chart, [(adapted_frame_jet(jet_at(chart, x)), [x]) for x in pts]

    def tensors(self) -> tuple[FrameTensor, FrameTensor | None]:
        fix = self.raw.get("fixture")
        if "weyl" in self.raw:
            W = FrameTensor.from_json(_read_json(self.base, self.raw["weyl"]), self.tol)
        else:
            if fix["family"] != "SyntheticWeyl":
                raise SchemaError("tensor mode fixture must be SyntheticWeyl")
            W = synthetic_fixture(fix)
        A = None
        if "cotton_york" in self.raw:
            A = FrameTensor.from_json(_read_json(self.base, self.raw["cotton_york"]), self.tol)
        return W, A

    def structures(self, m: int) -> list[tuple[int, ...]]:
        s = self.raw.get("structures", [list(range(1, m + 1))])
        if s == "all":
            return [tuple(sorted(M)) for M in all_structures(m)]
        if s == "quotient":
            sig = self.signature()
            return [tuple(sorted(M)) for M, _ in quotient_structures(sig, self.real_index(sig))]
        out = []
        for M in s:
            if not set(M) <= set(range(1, m + 1)):
                raise SchemaError(f"structure {M} not a subset of 1..{m}")
            out.append(tuple(sorted(M)))
        return out

    def signature(self) -> SignatureInfo:
        if "signature" not in self.raw:
            raise SchemaError("quotient structures and reality need a signature")
        p, q = self.raw["signature"]
        return SignatureInfo(p, q)

    def real_index(self, sig: SignatureInfo) -> int:
        return int(self.raw.get("real_index", min(real_index_allowed(sig))))


def _chart_fixture(spec: dict, count: int, seed: int):
    fam = spec["family"]
    s = int(spec.get("seed", seed))
    if fam == "Flat":
        f = fx.flat(int(spec.get("n", 6)), count, s)
    elif fam == "PpWave":
        H = Poly.from_json(spec["H"]) if "H" in spec else None
        f = fx.pp_wave(int(spec.get("n", 6)), H, count, s)
    elif fam == "RandomPolyMetric":
        f = fx.random_fixture(int(spec.get("n", 5)), int(spec.get("degree", 3)), np.random.default_rng(s),
                              float(spec.get("amplitude", 0.3)))
    else:
        raise SchemaError(f"{fam} is not a chart fixture")
    return f.chart, f.frame, f.points


def synthetic_fixture(spec: dict) -> FrameTensor:
    fam = spec["family"]
    rng = np.random.default_rng(int(spec.get("seed", 0)))
    m, eps = int(spec.get("m", 3)), int(spec.get("epsilon", 0))
    multi = spec.get("degenerate_for")
    if fam == "SyntheticWeyl":
        k = Fraction(spec.get("k", 0))
        if multi is not None:
            return synthetic_weyl_multi(k, m, eps, rng, multi)
        return synthetic_weyl(k, m, eps, rng)
    if fam == "SyntheticCY":
        level = Fraction(spec.get("level", 0))
        if multi is not None:
            return synthetic_cy_multi(level, m, eps, rng, multi)
        return synthetic_cy(level, m, eps, rng)
    raise SchemaError(f"{fam} is not a tensor fixture")


# --- tasks ---------------------------------------------------------------------------

def _weyl_is_zero(levels) -> bool:
    return all(l["weyl"]["level"] == l["top"] for l in levels)


def task_classify(sc: Scenario) -> dict:
    out = {"structures": []}
    if sc.mode == "tensor":
        W, A = sc.tensors()
        for M in sc.structures(W.m):
            wr = filtration_level(W, M, sc.tol)
            entry = {"structure": M, "weyl": wr.as_dict()}
            if A is not None:
                entry["cotton_york"] = filtration_level(A, M, sc.tol).as_dict()
            entry["conformally_flat"] = wr.level >= level_range(4, W.epsilon)[1]
            out["structures"].append(entry)
        return out
    chart, groups = sc.chart_and_frames()
    m, eps = chart.m, chart.epsilon
    top = level_range(4, eps)[1]
    out["frame_residual"] = max(validate_frame(chart, f, pts, sc.tol.frame).residual for f, pts in groups)
    curv = []
    for f, pts in groups:
        for x in pts:
            fp = frame_point(chart, f, x)
            curv.append((fp, curvature_residuals(fp.curvature, np.linalg.inv(chart.eval_g(x)))))
    out["curvature_residuals"] = {k: max(r[k] for _, r in curv) for k in curv[0][1]}
    for M in sc.structures(m):
        wr = min((filtration_level(FrameTensor(fp.weyl, m, eps, WEYL), M, sc.tol) for fp, _ in curv),
                 key=lambda r: r.level)
        cr = min((filtration_level(FrameTensor(fp.cotton_york, m, eps, COTTON_YORK), M, sc.tol) for fp, _ in curv),
                 key=lambda r: r.level)
        out["structures"].append({"structure": M, "weyl": wr.as_dict(), "cotton_york": cr.as_dict(),
                                  "conformally_flat": wr.level >= top})
    if all(s["conformally_flat"] for s in out["structures"]):
        out["summary"] = "conformally flat"
    return out


def task_bianchi(sc: Scenario) -> dict:
    chart, groups = sc.chart_and_frames()
    worst: dict[str, float] = {}
    cy_gap = 0.0
    for f, pts in groups:
        for x in pts:
            fp = frame_point(chart, f, x)
            rep = bianchi_residuals_at(fp)
            for k, v in rep.residuals.items():
                worst[k] = max(worst.get(k, 0.0), v)
            if chart.n >= 5:
                cy_gap = max(cy_gap, cotton_york_agreement(fp))
    return {"families": worst, "evaluated": families_for(chart.epsilon),
            "max_relative": max(worst.values()) if worst else 0.0,
            "pass": all(v < sc.tol.bianchi for v in worst.values()),
            "cotton_york_dual_route": cy_gap if chart.n >= 5 else None}


def task_gs(sc: Scenario) -> dict:
    out = {"structures": []}
    if sc.mode == "tensor":
        W, A = sc.tensors()
        assume = bool(sc.raw.get("assume_cy", False))
        for M in sc.structures(W.m):
            out["structures"].append(tensor_verdict(W, A, M, sc.tol, assume_cy=assume).as_dict())
        return out
    chart, groups = sc.chart_and_frames()
    for M in sc.structures(chart.m):
        for f, pts in groups:
            out["structures"].append(gs_verdict(chart, f, M, pts, sc.tol).as_dict())
    return out


def _omegas(sc: Scenario, n: int) -> dict[str, Poly]:
    bundled = fx.conformal_factors(n)
    if "omega" not in sc.raw:
        return bundled
    out = {}
    for i, o in enumerate(sc.raw["omega"]):
        if isinstance(o, str):
            if o not in bundled:
                raise SchemaError(f"unknown conformal factor {o}")
            out[o] = bundled[o]
        else:
            out[f"omega{i}"] = Poly.from_json(o)
    return out


def task_conformal(sc: Scenario) -> dict:
    chart, groups = sc.chart_and_frames()
    structs = sc.structures(chart.m)
    out = {}
    for name, om in _omegas(sc, chart.n).items():
        reps = [cy_conformal_check(chart, ConformalData(om), pts, f, structs, sc.tol) for f, pts in groups]
        out[name] = {
            "cy_residual": max(r.cy_residual for r in reps),
            "weyl_residual": max(r.weyl_residual for r in reps),
            "invariant": all(r.invariant for r in reps),
            "levels_before": [l for r in reps for l in r.levels_before],
            "levels_after": [l for r in reps for l in r.levels_after],
            "involutive_before": [l for r in reps for l in r.involutive_before],
            "involutive_after": [l for r in reps for l in r.involutive_after],
        }
    return out


def reality_report(sig: SignatureInfo, r: int | None = None) -> dict:
    allowed = sorted(real_index_allowed(sig))
    rs = allowed if r is None else [r]
    out = {"signature": [sig.p, sig.q], "allowed_real_indices": allowed, "actions": []}
    for ri in rs:
        act = conjugation_action(sig, ri)
        out["actions"].append({
            "r": ri,
            "table": act.table(),
            "checks": conjugation_checks(act),
            "orbits": [{"structure": sorted(M), "size": k} for M, k in quotient_structures(sig, ri)],
        })
    return out


def task_reality(sc: Scenario) -> dict:
    sig = sc.signature()
    return reality_report(sig, sc.raw.get("real_index"))


TASK_FUNCS = {"classify": task_classify, "bianchi": task_bianchi, "gs": task_gs,
              "conformal": task_conformal, "reality": task_reality}


def run_scenario(obj: dict, base: Path = Path("."), tasks=None, tol: float | None = None,
                 seed: int | None = None) -> dict:
    sc = Scenario.load(obj, base, tol, seed)
    chosen = [t for t in sc.tasks if tasks is None or t in tasks]
    report = {"scenario": sc.id, "mode": sc.mode, "seed": sc.seed, "tolerances": sc.tol.as_dict(),
              "tasks": {}}
    for t in chosen:
        try:
            report["tasks"][t] = TASK_FUNCS[t](sc)
        except NullGSError as e:
            raise type(e)(f"scenario {sc.id}, task {t}: {e}") from e
    return _plain(report)


# --- text rendering ------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def render_text(report: dict) -> str:
    lines = [f"scenario {report.get('scenario', '-')}  seed {report.get('seed', '-')}"]
    for name, body in report.get("tasks", {}).items():
        lines.append(f"[{name}]")
        if name in ("classify", "gs"):
            for s in body.get("structures", []):
                w = s.get("weyl") if isinstance(s.get("weyl"), dict) else None
                level = w["level"] if w else s.get("weyl_level")
                prof = w["grading_profile"] if w else s.get("weyl_profile", {})
                lines.append(f"  N_{{{','.join(map(str, s['structure']))}}}  weyl level {level}"
                             + (f"  cy level {s['cotton_york']['level']}" if "cotton_york" in s else "")
                             + (f"  cy level {s['cy_level']}" if "cy_level" in s else "")
                             + (f"  status: {s['status']}" if "status" in s else ""))
                lines.append("    s : max|C|  " + "  ".join(f"{k}:{_fmt(v)}" for k, v in
                                                        sorted(prof.items(), key=lambda kv: Fraction(kv[0]))))
                for imp in s.get("implications", []):
                    flag = "PASS" if imp["pass"] else "FAIL"
                    lines.append(f"    {imp['name']:<40} {'applies' if imp['applicable'] else 'n/a':<8} {flag}")
            if "summary" in body:
                lines.append(f"  {body['summary']}")
        elif name == "bianchi":
            for fam, v in sorted(body["families"].items()):
                lines.append(f"  {fam:<6} {_fmt(v)}")
            lines.append(f"  pass: {body['pass']}")
        elif name == "conformal":
            for om, r in body.items():
                lines.append(f"  {om:<8} cy {_fmt(r['cy_residual'])}  weyl {_fmt(r['weyl_residual'])}"
                             f"  invariant {r['invariant']}")
        elif name == "reality":
            lines.extend(_reality_lines(body))
    return "\n".join(lines) + "\n"


def _reality_lines(body: dict) -> list[str]:
    lines = [f"  signature {tuple(body['signature'])}  allowed r: {body['allowed_real_indices']}"]
    for a in body["actions"]:
        lines.append(f"  r = {a['r']}: " + ", ".join(f"{x}->{y}" for x, y in a["table"]))
        c = a["checks"]
        lines.append(f"    involution {c['involution']}  metric {c['metric_preserving']}"
                     f"  real slice {tuple(c['real_signature'])}  measured r {c['real_index']}")
        lines.append("    orbits: " + "  ".join(f"{{{','.join(map(str, o['structure']))}}}x{o['size']}"
                                                for o in a["orbits"]))
    return lines


def emit(report: dict, out: str | None, fmt: str, stem: str):
    text = dumps(report) + "\n" if fmt == "json" else render_text(report)
    if out is None:
        click.echo(text, nl=False)
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / f"{stem}.json").write_text(dumps(report) + "\n")
    (d / f"{stem}.txt").write_text(render_text(report))


# --- click wiring ------------------------------------------------------------------------

def _common(f):
    f = click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")(f)
    f = click.option("--out", type=click.Path(file_okay=False), default=None)(f)
    f = click.option("--seed", type=int, default=None)(f)
    f = click.option("--tol", type=float, default=None, help="relative tolerance override")(f)
    return f


def _scenario_verb(name: str, tasks):
    @click.option("--scenario", "scenario", type=click.Path(dir_okay=False), required=True)
    @_common
    def verb(scenario, tol, seed, out, fmt):
        path = Path(scenario)
        if not path.exists():
            raise FileError(f"missing scenario {path}")
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: {e}") from e
        report = run_scenario(obj, path.parent, tasks, tol, seed)
        emit(report, out, fmt, f"{report['scenario']}")

    verb.__name__ = name
    return verb


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except NullGSError as e:
            click.echo(f"error: {type(e).__name__}: {e}", err=True)
            sys.exit(2)


@click.group(cls=_Group)
def main():
    """Null structures, Weyl classification and Goldberg-Sachs systems."""


main.command("run", help="Run every task listed in a scenario.")(_scenario_verb("run", None))
main.command("classify", help="Weyl and Cotton-York filtration levels.")(_scenario_verb("classify", {"classify"}))
main.command("verdict", help="Assemble the linear systems and check the implications.")(
    _scenario_verb("verdict", {"gs"}))
main.command("bianchi", help="Component Bianchi residuals.")(_scenario_verb("bianchi", {"bianchi"}))
main.command("conformal", help="Conformal rescaling checks.")(_scenario_verb("conformal", {"conformal"}))


@main.command("reality", help="Allowed real indices, conjugation tables and structure orbits.")
@click.option("--signature", required=True, help="p,q")
@click.option("--r", "r", type=int, default=None)
@_common
def reality_cmd(signature, r, tol, seed, out, fmt):
    try:
        p, q = (int(v) for v in signature.split(","))
    except ValueError as e:
        raise SchemaError("signature must be 'p,q'") from e
    rep = _plain({"seed": seed, "tolerances": DEFAULT_TOL.as_dict(), "tasks": {"reality": reality_report(
        SignatureInfo(p, q), r)}, "scenario": f"reality_{p}_{q}"})
    emit(rep, out, fmt, rep["scenario"])


@main.command("gen", help="Write a fixture (metric, frame or frame tensor) as JSON.")
@click.option("--family", type=click.Choice(["Flat", "PpWave", "RandomPolyMetric", "SyntheticWeyl", "SyntheticCY"]),
              required=True)
@click.option("--n", type=int, default=6)
@click.option("--m", type=int, default=3)
@click.option("--epsilon", type=int, default=0)
@click.option("--k", default="0", help="Weyl class (SyntheticWeyl)")
@click.option("--level", default="0", help="Cotton-York level (SyntheticCY)")
@click.option("--degree", type=int, default=3)
@click.option("--amplitude", type=float, default=0.3)
@_common
def gen_cmd(family, n, m, epsilon, k, level, degree, amplitude, tol, seed, out, fmt):
    files = generate_fixture({"family": family, "n": n, "m": m, "epsilon": epsilon, "k": k, "level": level,
                              "degree": degree, "amplitude": amplitude, "seed": seed or 0})
    if out is None:
        click.echo(dumps(files))
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    for name, obj in files.items():
        (d / name).write_text(dumps(obj) + "\n")
        click.echo(str(d / name))


def generate_fixture(spec: dict) -> dict[str, dict]:
    """File name -> JSON object for one fixture spec."""
    jsonschema.validate(spec, _FIXTURE)
    fam = spec["family"]
    if fam in ("SyntheticWeyl", "SyntheticCY"):
        t = synthetic_fixture(spec)
        t.validate()
        stem = "weyl" if fam == "SyntheticWeyl" else "cotton_york"
        return {f"{stem}.json": t.to_json()}
    chart, frame, _ = _chart_fixture(spec, 1, int(spec.get("seed", 0)))
    out = {"metric.json": chart.to_json()}
    if hasattr(frame, "to_json"):
        out["frame.json"] = frame.to_json(list(chart.coords))
    return out


if __name__ == "__main__":
    main()
