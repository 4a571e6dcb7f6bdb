"""Command-line front end: scenario configuration, report aggregation, and
CSV/plot-data emission.

Design rules:
  * verdict-vs-contract separation — a criterion that mathematically FAILS
    is a *successful* computation; only raised contract errors flip the
    exit code to 1, and configuration problems exit 2;
  * deterministic output — floats are printed with 17 significant digits,
    keys in fixed order, complex numbers as [re, im] pairs, and no
    timestamps, so identical scenarios produce byte-identical reports;
  * every report embeds a sha256 hash of its scenario and the certification
    status of every quantity it prints.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .dynamics import all_criteria
from .errors import ErrorBudgetExceeded, ShiftLabError
from .operator import (
    beta_bounds,
    build_matrix,
    decompose_compact,
    matrix_to_csv,
    matrix_to_json,
    p_norm_estimate,
    rank_one_perturb_orbit,
)
from .orbit import iterate_adjoint, limit_point_demo, supercyclic_vanishing_check
from .presets import PRESET_NAMES, get_preset
from .sequences import (
    SequenceTriple,
    radius_of_disc,
    triple_from_json,
    triple_to_json,
    validate_triple,
)
from .space import (
    SpaceConfig,
    coeff_functional_kn,
    monomial_norm,
)

__all__ = ["Scenario", "run", "main", "TASK_IDS"]


# ---------------------------------------------------------------------------
# deterministic JSON
# ---------------------------------------------------------------------------

def _fnum(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    """Fixed-format JSON: 17-significant-digit floats, complex as [re, im],
    dict keys in insertion order, two-space indentation."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fnum(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return f"[{_fnum(z.real)}, {_fnum(z.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [dumps_canonical(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {dumps_canonical(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

TASK_IDS = (
    "space-info",
    "matrix",
    "norm",
    "decompose",
    "dynamics",
    "orbit-run",
    "orbit-demo",
    "rank-one",
    "vanishing",
)


@dataclass(frozen=True)
class Scenario:
    """One reproducible unit of work: a triple (inline or preset), a space
    configuration, an ordered task list, optional task parameters, and the
    output destination.  Unknown task ids are rejected here, before any
    computation starts."""

    triple: SequenceTriple
    space: SpaceConfig
    tasks: tuple[str, ...]
    params: dict = field(default_factory=dict)
    preset: str | None = None
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        unknown = [t for t in self.tasks if t not in TASK_IDS]
        if unknown:
            raise ValueError(
                f"unknown task ids {unknown}; available: {', '.join(TASK_IDS)}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.format!r}")

    def describe(self) -> dict:
        d = {
            "triple": (self.preset if self.preset
                       else triple_to_json(self.triple)),
            "space": {
                "p": self.space.p if isinstance(self.space.p, str)
                else float(self.space.p),
                "N": self.space.N,
                "J": self.space.J,
                "tol": self.space.tol,
            },
            "tasks": list(self.tasks),
        }
        if self.params:
            d["params"] = {k: self.params[k] for k in sorted(self.params)}
        return d

    def hash(self) -> str:
        return hashlib.sha256(
            dumps_canonical(self.describe()).encode()).hexdigest()


def scenario_from_json(doc: dict) -> Scenario:
    if "preset" in doc:
        preset = str(doc["preset"])
        triple = get_preset(preset)
    elif "triple" in doc:
        preset = None
        triple = triple_from_json(doc["triple"])
        validate_triple(triple)
    else:
        raise ValueError("scenario needs a 'preset' name or an inline 'triple'")
    sp = doc.get("space", {})
    space = SpaceConfig(p=sp.get("p", 2.0), N=int(sp.get("N", 256)),
                        J=int(sp.get("J", 128)), tol=float(sp.get("tol", 1e-12)))
    tasks = tuple(str(t) for t in doc.get("tasks", []))
    out = doc.get("output", {})
    return Scenario(triple=triple, space=space, tasks=tasks,
                    params=dict(doc.get("params", {})), preset=preset,
                    out=out.get("path"), format=out.get("format", "json"))


# ---------------------------------------------------------------------------
# task implementations (each returns a JSON-ready dict)
# ---------------------------------------------------------------------------

def _qty(value, cert, bound=None) -> dict:
    d = {"value": value, "cert": cert}
    if bound is not None:
        d["bound"] = bound
    return d


def _task_space_info(sc: Scenario) -> dict:
    R, rcert = radius_of_disc(sc.triple.a, sc.triple.b)
    rows = []
    for n in range(8):
        try:
            val, cert = monomial_norm(sc.triple, n, sc.space)
            rows.append({"n": n, "norm": val, "cert": cert.kind,
                         "in_space": math.isfinite(val)})
        except ShiftLabError as exc:
            rows.append({"n": n, "norm": None, "cert": "NOT_CERTIFIED",
                         "in_space": None, "note": str(exc)})
    return {
        "radius": _qty(R, rcert.kind),
        "monomial_norms": rows,
        "polynomials_in_space": all(
            r.get("in_space") is True for r in rows),
    }


def _task_matrix(sc: Scenario) -> dict:
    nu = int(sc.params.get("nu", 1))
    M = build_matrix(sc.triple, nu, sc.space)
    return matrix_to_json(M)


def _task_norm(sc: Scenario) -> dict:
    bb = beta_bounds(sc.triple, sc.space)
    best = bb.best_bound()
    out = {
        "band_sup_max": bb.beta1,
        "subband_sum": bb.beta2,
        # best_bound() only ever combines certified routes, so a finite
        # value is certified regardless of which route produced it
        "certified_bound": _qty(
            best, "CERTIFIED" if math.isfinite(best) else "INCONCLUSIVE"),
        "triangle_bound": bb.bound,
        "alpha_sup": _qty(bb.alpha_sup.value, bb.alpha_sup.cert),
        "c_sup": _qty(bb.c_sup.value, bb.c_sup.cert),
    }
    if not sc.space.is_c0 and math.isfinite(float(sc.space.p)):
        M = build_matrix(sc.triple, 1, sc.space)
        lo, up = p_norm_estimate(M, sc.space)
        out["lower_estimate"] = _qty(lo, "NUMERIC")
        out["upper_estimate"] = _qty(up, "CERTIFIED")
    return out


def _task_decompose(sc: Scenario) -> dict:
    d = decompose_compact(sc.triple, sc.space)
    return {
        "bounded_verdict": d.bounded_verdict,
        "compact_verdict": d.compact_verdict,
        "c_evidence": d.c_evidence,
        "essential_radii": {
            "inner": _qty(d.essential_radii[0], "NUMERIC"),
            "outer": _qty(d.essential_radii[1], "NUMERIC"),
        },
        "radii_windows": {
            str(m): list(v) for m, v in sorted(d.radii_windows.items())
        },
        "band_norms": list(d.band_norms),
    }


def _task_dynamics(sc: Scenario) -> dict:
    reports = all_criteria(sc.triple, sc.space)
    conclusions = sorted({r.conclusion for r in reports})
    return {
        "criteria": [r.to_json() for r in reports],
        "conclusions": conclusions,
    }


def _task_orbit_run(sc: Scenario) -> dict:
    n = int(sc.params.get("kn", 2))
    steps = int(sc.params.get("steps", n + 1))
    u = coeff_functional_kn(sc.triple, n, N=max(n + 2, 8))
    rec = iterate_adjoint(sc.triple, u, steps, sc.space,
                          initial_label=f"coefficient functional {n}")
    return rec.to_json()


def _task_orbit_demo(sc: Scenario) -> dict:
    z = sc.params.get("z", 0.5)
    lam = sc.params.get("lambda", 1.0)
    steps = int(sc.params.get("steps", 20))
    budget = sc.params.get("budget_tol", 0.05)
    z = complex(z[0], z[1]) if isinstance(z, (list, tuple)) else complex(z)
    lam = (complex(lam[0], lam[1]) if isinstance(lam, (list, tuple))
           else complex(lam))
    # the demo needs a dual window large enough for its certified entry
    # budget (boundary-functional tails decay like N^(-1/2)); grow the
    # window geometrically from the configured size until the gate passes
    n = sc.space.N
    while True:
        cfg = replace(sc.space, N=n)
        try:
            rec = limit_point_demo(sc.triple, z, lam, steps, cfg,
                                   budget_tol=float(budget))
            break
        except ErrorBudgetExceeded:
            if n >= 1_000_000:
                raise
            n = min(2 * n, 1_000_000)
    return rec.to_json()


def _task_rank_one(sc: Scenario) -> dict:
    lam = sc.params.get("lambda", 1.0)
    lam = (complex(lam[0], lam[1]) if isinstance(lam, (list, tuple))
           else complex(lam))
    steps = int(sc.params.get("steps", 2))
    size = int(sc.params.get("size", max(steps + 2, 8)))
    x = np.zeros(size, dtype=complex)
    x[0] = 1.0
    closed, oracle = rank_one_perturb_orbit(lam, x, steps)
    dev = float(np.max(np.abs(closed - oracle)))
    return {
        "lambda": lam,
        "steps": steps,
        "closed_form": closed,
        "matrix_power": oracle,
        "max_deviation": _qty(dev, "CERTIFIED" if dev <= 1e-12 else "NUMERIC"),
    }


def _task_vanishing(sc: Scenario) -> dict:
    nu_max = int(sc.params.get("nu_max", 16))
    return supercyclic_vanishing_check(sc.triple, nu_max, sc.space).to_json()


_TASK_FNS = {
    "space-info": _task_space_info,
    "matrix": _task_matrix,
    "norm": _task_norm,
    "decompose": _task_decompose,
    "dynamics": _task_dynamics,
    "orbit-run": _task_orbit_run,
    "orbit-demo": _task_orbit_demo,
    "rank-one": _task_rank_one,
    "vanishing": _task_vanishing,
}


# ---------------------------------------------------------------------------
# CSV / plot-data emission
# ---------------------------------------------------------------------------

def _csv_num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, complex):
        return f"{format(x.real, '.17g')}+{format(x.imag, '.17g')}j"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _orbit_csv(result: dict) -> str:
    lines = ["step,norm,distance,error_budget"]
    for row in result["steps"]:
        lines.append(",".join(_csv_num(row[k])
                              for k in ("step", "norm", "distance",
                                        "error_budget")))
    return "\n".join(lines) + "\n"


def _orbit_plot(result: dict) -> str:
    lines = ["x,y"]
    for row in result["steps"]:
        y = row["distance"] if row["distance"] is not None else row["norm"]
        lines.append(f"{row['step']},{_csv_num(y)}")
    return "\n".join(lines) + "\n"


def _dynamics_csv(result: dict) -> str:
    lines = ["criterion_id,verdict,implication"]
    for rep in result["criteria"]:
        impl = rep["implication"].replace('"', "'")
        lines.append(f"{rep['criterion_id']},{rep['verdict']},\"{impl}\"")
    return "\n".join(lines) + "\n"


def _dynamics_plot(result: dict) -> str:
    # liminf-by-power scans when a criterion carries them
    lines = ["x,y"]
    for rep in result["criteria"]:
        q = rep["quantities"]
        for key in sorted(q):
            if key.startswith("liminf_nu"):
                lines.append(f"{int(key[len('liminf_nu'):])},"
                             f"{_csv_num(q[key]['value'])}")
        if len(lines) > 1:
            break
    return "\n".join(lines) + "\n"


def _space_csv(result: dict) -> str:
    lines = ["n,norm,cert"]
    for r in result["monomial_norms"]:
        lines.append(f"{r['n']},{_csv_num(r['norm'])},{r['cert']}")
    return "\n".join(lines) + "\n"


def _matrix_csv(result: dict) -> str:
    N, nu = result["N"], result["nu"]
    lines = ["i,j,re,im"]
    for j in range(N):
        for i in range(j + nu, N):
            re, im = result["entries"][i * N + j]
            if re != 0.0 or im != 0.0:
                lines.append(f"{i},{j},{format(re, '.17g')},"
                             f"{format(im, '.17g')}")
    return "\n".join(lines) + "\n"


def _to_csv_sections(report: dict) -> str:
    parts = []
    for entry in report["tasks"]:
        tid, status = entry["task"], entry["status"]
        parts.append(f"# task: {tid} ({status})")
        if status != "ok":
            parts.append(f"# error: {entry['error']}")
            continue
        res = entry["result"]
        if tid in ("orbit-run", "orbit-demo"):
            parts.append(_orbit_csv(res))
            parts.append(f"# plot: {tid}")
            parts.append(_orbit_plot(res))
        elif tid == "dynamics":
            parts.append(_dynamics_csv(res))
            plot = _dynamics_plot(res)
            if plot.count("\n") > 1:
                parts.append(f"# plot: {tid}")
                parts.append(plot)
        elif tid == "matrix":
            parts.append(_matrix_csv(res))
        elif tid == "space-info":
            parts.append(_space_csv(res))
        else:
            parts.append(dumps_canonical(res))
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# running scenarios
# ---------------------------------------------------------------------------

def run(scenario: Scenario) -> tuple[dict, int]:
    """Execute the scenario's tasks in declaration order.  The exit code is
    0 iff every task completed without a contract error; mathematical
    verdicts (HOLDS/FAILS/...) never affect it."""
    entries = []
    code = 0
    for tid in scenario.tasks:
        fn = _TASK_FNS[tid]
        try:
            result = fn(scenario)
            entries.append({"task": tid, "status": "ok", "result": result})
        except ShiftLabError as exc:
            entries.append({"task": tid, "status": "error",
                            "error": f"{type(exc).__name__}: {exc}"})
            code = 1
    report = {
        "version": __version__,
        "scenario": scenario.describe(),
        "scenario_hash": scenario.hash(),
        "tasks": entries,
    }
    return report, code


def _emit(report: dict, scenario: Scenario) -> None:
    if scenario.format == "csv":
        text = _to_csv_sections(report)
    else:
        text = dumps_canonical(report) + "\n"
    if scenario.out:
        with open(scenario.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parse_complex(s: str) -> complex:
    try:
        return complex(s.strip().replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex {s!r}") from exc


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--preset", choices=PRESET_NAMES,
                    help="named example triple")
    sp.add_argument("--triple", metavar="FILE",
                    help="path to a triple JSON file")
    sp.add_argument("--p", default="2.0",
                    help="space exponent in [1, inf), or 'c0'")
    sp.add_argument("--size", type=int, default=256, metavar="N",
                    help="matrix truncation size")
    sp.add_argument("--series-cap", type=int, default=128, metavar="J",
                    help="series/window cap")
    sp.add_argument("--tol", type=float, default=1e-12,
                    help="certification tolerance")
    sp.add_argument("--out", help="output path (stdout when omitted)")
    sp.add_argument("--format", choices=("json", "csv"), default="json")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shiftlab",
        description=("Certified finite truncations of weighted forward "
                     "shifts on tridiagonal analytic sequence spaces."))
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", help="space-level information")
    ssub = sp.add_subparsers(dest="sub", required=True)
    info = ssub.add_parser("info", help="radius, monomial norms, membership")
    _add_common(info)

    op = sub.add_parser("operator", help="matrix, norm, and decomposition")
    osub = op.add_subparsers(dest="sub", required=True)
    for name, hlp in (("matrix", "truncated matrix entries"),
                      ("norm", "certified norm bounds"),
                      ("decompose", "shift-plus-remainder decomposition")):
        x = osub.add_parser(name, help=hlp)
        _add_common(x)
        if name == "matrix":
            x.add_argument("--nu", type=int, default=1, help="operator power")

    dyn = sub.add_parser("dynamics", help="dynamics criteria")
    dsub = dyn.add_subparsers(dest="sub", required=True)
    chk = dsub.add_parser("check", help="run the full criterion battery")
    _add_common(chk)

    orb = sub.add_parser("orbit", help="adjoint orbits")
    orsub = orb.add_subparsers(dest="sub", required=True)
    orun = orsub.add_parser("run", help="orbit of a coefficient functional")
    _add_common(orun)
    orun.add_argument("--kn", type=int, default=2,
                      help="coefficient functional index")
    orun.add_argument("--steps", type=int, default=None)
    odemo = orsub.add_parser("demo", help="norm limit-point demonstration")
    _add_common(odemo)
    odemo.add_argument("--z", type=_parse_complex, default=complex(0.5))
    odemo.add_argument("--lambda", dest="lam", type=_parse_complex,
                       default=complex(1.0))
    odemo.add_argument("--steps", type=int, default=20)
    odemo.add_argument("--budget-tol", type=float, default=0.05)

    dm = sub.add_parser("demo", help="bundled demonstrations")
    dmsub = dm.add_subparsers(dest="sub", required=True)
    r1 = dmsub.add_parser("rank-one",
                          help="backward shift plus rank-one orbit")
    _add_common(r1)
    r1.add_argument("--lambda", dest="lam", type=_parse_complex,
                    default=complex(1.0))
    r1.add_argument("--steps", type=int, default=2)

    rn = sub.add_parser("run", help="run a scenario")
    _add_common(rn)
    rn.add_argument("--scenario", metavar="FILE",
                    help="scenario JSON file")
    rn.add_argument("--tasks", default="",
                    help="comma-separated task ids (with --preset/--triple)")
    return ap


def _space_from_args(args) -> SpaceConfig:
    p = args.p if isinstance(args.p, str) and args.p.lower() == "c0" \
        else float(args.p)
    return SpaceConfig(p=p, N=args.size, J=args.series_cap, tol=args.tol)


def _triple_from_args(args) -> tuple[SequenceTriple, str | None]:
    if getattr(args, "preset", None):
        return get_preset(args.preset), args.preset
    if getattr(args, "triple", None):
        with open(args.triple) as fh:
            doc = json.load(fh)
        triple = triple_from_json(doc)
        validate_triple(triple)
        return triple, None
    raise ValueError("a triple is required: pass --preset or --triple FILE")


def _scenario_from_args(args, tasks: tuple[str, ...],
                        params: dict) -> Scenario:
    triple, preset = _triple_from_args(args)
    return Scenario(triple=triple, space=_space_from_args(args), tasks=tasks,
                    params=params, preset=preset, out=args.out,
                    format=args.format)


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        if args.command == "run":
            if args.scenario:
                with open(args.scenario) as fh:
                    doc = json.load(fh)
                scenario = scenario_from_json(doc)
                if args.out:
                    scenario = Scenario(
                        triple=scenario.triple, space=scenario.space,
                        tasks=scenario.tasks, params=scenario.params,
                        preset=scenario.preset, out=args.out,
                        format=args.format)
            else:
                tasks = tuple(t.strip() for t in args.tasks.split(",")
                              if t.strip())
                scenario = _scenario_from_args(args, tasks, {})
        elif args.command == "space":
            scenario = _scenario_from_args(args, ("space-info",), {})
        elif args.command == "operator":
            tid = {"matrix": "matrix", "norm": "norm",
                   "decompose": "decompose"}[args.sub]
            params = {"nu": args.nu} if args.sub == "matrix" else {}
            scenario = _scenario_from_args(args, (tid,), params)
        elif args.command == "dynamics":
            scenario = _scenario_from_args(args, ("dynamics",), {})
        elif args.command == "orbit":
            if args.sub == "run":
                params = {"kn": args.kn}
                if args.steps is not None:
                    params["steps"] = args.steps
                scenario = _scenario_from_args(args, ("orbit-run",), params)
            else:
                params = {"z": [args.z.real, args.z.imag],
                          "lambda": [args.lam.real, args.lam.imag],
                          "steps": args.steps,
                          "budget_tol": args.budget_tol}
                scenario = _scenario_from_args(args, ("orbit-demo",), params)
        elif args.command == "demo":
            params = {"lambda": [args.lam.real, args.lam.imag],
                      "steps": args.steps}
            # the rank-one orbit never reads the triple; default it so the
            # subcommand works bare
            if not getattr(args, "preset", None) and \
                    not getattr(args, "triple", None):
                args.preset = "EX-TRIDIAG"
            scenario = _scenario_from_args(args, ("rank-one",), params)
        else:  # pragma: no cover - argparse enforces the choices
            raise ValueError(f"unknown command {args.command!r}")
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2

    report, code = run(scenario)
    _emit(report, scenario)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
