"""Command line front end.

Exit codes: 0 success, 2 bad input, 3 polystability undetermined for some
instance, 4 numerical failure.  Every report is deterministic for a fixed
``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import math
import sys
from pathlib import Path

import numpy as np

from . import io, projective, symmetric_space, toral, verify
from .errors import GitkitError, InputError, ValidationError
from .flow import FlowOptions, dominant_weight, integrate_flow, lojasiewicz_fit
from .lie_core import AlgebraVector
from .stability import ClassifyOptions, _pmap, classify, kempf_ness_ray_profile, kempf_uniqueness_audit
from .torus_geometry import extract_weights, moment_polytope

EXIT_OK, EXIT_INPUT, EXIT_UNDETERMINED, EXIT_NUMERICAL = 0, 2, 3, 4
DIRECTION_TOL = 1e-4
RAY_RADII = (1.0, 10.0, 100.0, 1000.0)


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # subparsers repeat the globals with suppressed defaults so they may
    # appear on either side of the subcommand
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="seed for all sampling")
    parser.add_argument("--hbar", type=float, default=d(None), help="override the instance hbar")
    parser.add_argument("--tol-grad", type=float, default=d(None), help="flow stopping threshold on |grad f|")
    parser.add_argument("--tol-class", type=float, default=d(None), help="threshold on |mu| at the limit")
    parser.add_argument("--format", choices=("json", "csv"), default=d("json"))
    parser.add_argument("--output", "-o", default=d(None), help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gitkit", description="Stability of points under compact group actions.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_options(p, suppress=True)
        return p

    p = add("classify", "stability class of each instance")
    p.add_argument("paths", nargs="+")

    p = add("flow", "integrate the gradient flow of |mu|^2 / 2")
    p.add_argument("path")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--dump-every", type=int, default=1)
    p.add_argument("--csv", dest="csv_path", default=None, help="write the trajectory CSV here")

    p = add("weight", "weight of the instance along an algebra element")
    p.add_argument("path")
    p.add_argument("--xi", required=True, help="comma separated algebra coordinates")
    p.add_argument("--mode", choices=("exact", "simulated"), default="exact")

    p = add("polytope", "moment polytope of a torus instance")
    p.add_argument("path")

    p = add("kempf", "Kempf-Ness ray profile and uniqueness of the dominant direction")
    p.add_argument("path")
    p.add_argument("--starts", type=int, default=5)

    p = add("constants", "alpha or beta constants")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--alpha", type=int)
    grp.add_argument("--beta", type=int)

    p = add("geom", "geometry of G^c/G on a list of group elements")
    p.add_argument("op", choices=("distance", "midpoint", "circumcenter"))
    p.add_argument("path")

    p = add("verify", "seeded verification suite")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--only", nargs="+", default=None, metavar="CHECK")
    return parser


# ---------------------------------------------------------------------------
# helpers


def _classify_options(args) -> ClassifyOptions:
    kw = {}
    if args.tol_grad is not None:
        kw["tol_grad"] = args.tol_grad
    if args.tol_class is not None:
        kw["tol_class"] = args.tol_class
    if getattr(args, "t_max", None) is not None:
        kw["t_max"] = args.t_max
    return ClassifyOptions(**kw)


def _flow_options(args) -> FlowOptions:
    opts = _classify_options(args)
    return FlowOptions(tol_grad=opts.tol_grad, t_max=opts.t_max)


def _load(args, path: str) -> io.Instance:
    if args.hbar is not None and not (args.hbar > 0 and math.isfinite(args.hbar)):
        raise ValidationError("--hbar must be positive and finite")
    return io.load_instance(path, args.hbar)


def _require_json(args, command: str) -> None:
    if args.format != "json":
        raise ValidationError(f"{command} only supports --format json")


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values, dtype=float).ravel()]


def _rows_csv(header: list, rows: list) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> tuple[str, int]:
    instances = [_load(args, p) for p in args.paths]
    opts = _classify_options(args)

    def one(inst):
        try:
            verdict = classify(inst.point, inst.group, opts)
        except InputError:
            raise
        except GitkitError as exc:
            return {"instance": inst.name, "error": f"{type(exc).__name__}: {exc}"}
        out = verdict.to_json()
        out["instance"] = inst.name
        return out

    results = _pmap(one, instances)
    if any("error" in r for r in results):
        code = EXIT_NUMERICAL
    elif any(r["class"] == "semistable_polystability_undetermined" for r in results):
        code = EXIT_UNDETERMINED
    else:
        code = EXIT_OK
    if args.format == "csv":
        rows = [[r["instance"], r.get("class", ""), repr(r["m"]) if "m" in r else "", r.get("error", "")] for r in results]
        return _rows_csv(["instance", "class", "m", "error"], rows), code
    return "".join(io.dumps(r) + "\n" for r in results), code


def _exact_m(inst: io.Instance) -> float | None:
    if not inst.group.is_diagonal:
        return None
    return float(moment_polytope(extract_weights(inst.group, inst.point)).m)


def cmd_flow(args) -> tuple[str, int]:
    inst = _load(args, args.path)
    if args.dump_every < 1:
        raise ValidationError("--dump-every must be positive")
    fopts = _flow_options(args)
    traj = integrate_flow(inst.point, inst.group, fopts)
    if args.format == "csv":
        return io.trajectory_csv(traj, args.dump_every), EXIT_OK
    if args.csv_path:
        Path(args.csv_path).write_text(io.trajectory_csv(traj, args.dump_every))
    opts = _classify_options(args)
    m_limit = float(traj.mu_norms[-1])
    m_exact = _exact_m(inst)
    m = m_exact if m_exact is not None else m_limit
    summary = {
        "instance": inst.name,
        "converged": bool(traj.converged),
        "t_end": float(traj.t_end),
        "samples": len(traj.times),
        "m": m,
        "m_limit": m_limit,
        "m_exact": m_exact,
        "unstable": m_limit > opts.tol_class,
        "xi_inf": None,
        "xi_unit": None,
        "weight": None,
        "abs(|xi_inf|-m)<=1e-4": None,
    }
    if summary["unstable"]:
        xi_inf, unit = dominant_weight(traj, opts.tol_class)
        w = projective.mu_weight(inst.point, xi_inf).weight
        summary.update(
            {
                "xi_inf": _floats(xi_inf.coords),
                "xi_unit": _floats(unit.coords),
                "weight": float(w),
                "abs(|xi_inf|-m)<=1e-4": bool(abs(xi_inf.norm() - m) <= DIRECTION_TOL),
            }
        )
    try:
        summary["lojasiewicz"] = lojasiewicz_fit(traj).as_dict()
    except GitkitError as exc:
        summary["lojasiewicz"] = {"flag": "unavailable", "reason": str(exc)}
    return io.dumps(summary) + "\n", EXIT_OK


def cmd_weight(args) -> tuple[str, int]:
    _require_json(args, "weight")
    inst = _load(args, args.path)
    try:
        coords = [float(c) for c in args.xi.split(",")]
    except ValueError as exc:
        raise ValidationError(f"--xi must be comma separated numbers: {exc}") from exc
    if len(coords) != inst.group.d:
        raise ValidationError(f"--xi has {len(coords)} coordinates but the algebra has dimension {inst.group.d}")
    xi = AlgebraVector(inst.group, np.array(coords))
    if not xi.norm() > 0:
        raise ValidationError("--xi must be nonzero")
    rep = projective.mu_weight(inst.point, xi, mode=args.mode)
    out = {
        "instance": inst.name,
        "mode": rep.mode,
        "weight": float(rep.weight),
        "lambda_max": float(rep.lambda_max),
        "quantized": rep.quantized,
        "ambiguous": bool(rep.ambiguous),
    }
    return io.dumps(out) + "\n", EXIT_OK


def cmd_polytope(args) -> tuple[str, int]:
    _require_json(args, "polytope")
    inst = _load(args, args.path)
    if not inst.group.is_diagonal:
        raise ValidationError("polytope needs a torus instance")
    out = moment_polytope(extract_weights(inst.group, inst.point)).to_json()
    out["instance"] = inst.name
    return io.dumps(out) + "\n", EXIT_OK


def cmd_kempf(args) -> tuple[str, int]:
    _require_json(args, "kempf")
    inst = _load(args, args.path)
    if args.starts < 1:
        raise ValidationError("--starts must be positive")
    fopts = _flow_options(args)
    traj = integrate_flow(inst.point, inst.group, fopts)
    _, unit = dominant_weight(traj, _classify_options(args).tol_class)
    profile = kempf_ness_ray_profile(inst.point, inst.group, unit, RAY_RADII)
    audit = kempf_uniqueness_audit(inst.point, inst.group, n_starts=args.starts, seed=args.seed, flow_opts=fopts)
    out = {
        "instance": inst.name,
        "xi_unit": _floats(unit.coords),
        "weight": float(projective.mu_weight(inst.point, unit).weight),
        "radii": list(RAY_RADII),
        "profile": [float(v) for v in profile],
        "uniqueness": audit.to_json(),
    }
    return io.dumps(out) + "\n", EXIT_OK


def cmd_constants(args) -> tuple[str, int]:
    res = toral.alpha_constants(args.alpha) if args.alpha is not None else toral.beta_constants(args.beta)
    if args.format == "csv":
        return "".join("%.17g\n" % v for v in res.values), EXIT_OK
    return "[" + ", ".join("%.17g" % v for v in res.values) + "]\n", EXIT_OK


def cmd_geom(args) -> tuple[str, int]:
    _require_json(args, "geom")
    group, elems = io.elements_from_dict(io.load_json(args.path))
    points = [symmetric_space.canonical_point(g) for g in elems]
    if args.op in ("distance", "midpoint") and len(points) != 2:
        raise ValidationError(f"{args.op} needs exactly two elements")
    if args.op == "distance":
        out = {"distance": symmetric_space.distance(*points)}
    elif args.op == "midpoint":
        mid = symmetric_space.midpoint(*points)
        out = {"eta": _floats(mid.eta.coords), "representative": io.encode_matrix(mid.rep)}
    else:
        center, radius = symmetric_space.circumcenter(points)
        worst = symmetric_space.circumcenter_certificate(center, points, seed=args.seed)
        out = {
            "eta": _floats(center.eta.coords),
            "representative": io.encode_matrix(center.rep),
            "radius": float(radius),
            "certificate_worst_decrease": float(worst),
        }
    out["op"] = args.op
    return io.dumps(out) + "\n", EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    _require_json(args, "verify")
    if args.samples is not None and args.samples < 1:
        raise ValidationError("--samples must be positive")
    report = verify.run_suite(args.samples, args.seed, args.only)
    return io.dumps(report) + "\n", EXIT_OK if report["passed"] else 1


COMMANDS = {
    "classify": cmd_classify,
    "flow": cmd_flow,
    "weight": cmd_weight,
    "polytope": cmd_polytope,
    "kempf": cmd_kempf,
    "constants": cmd_constants,
    "geom": cmd_geom,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GitkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
