"""``cnsmorph`` command line.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
input error, 3 numerical failure.  ``--json -`` writes the report to stdout
and the human-readable summary to stderr.  ``CNSMORPH_SEED`` overrides the default
seed of ``verify``.
"""

import argparse
import contextlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .. import symcone
from ..classify import (
    AffineHoloMap,
    Signature,
    Verdict,
    classify_affine,
    holomorphy_probe,
    k_subharmonic_on_grid,
    lattice,
    thm44_check,
)
from ..cxcalc import DEFAULT_STEP, FDScheme, Holomorphy, complex_hessian, cr_residuals
from ..cxlinalg import herm_eigs
from ..errors import DomainError, ExpressionError, NumericalError
from ..symcone import ConeSpec, Membership
from . import report as rpt
from .expr import map_field, scalar_field

SEED_ENV = "CNSMORPH_SEED"
DEFAULT_GRID = "lattice:0.5:3"

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- argument helpers ----------------------------------------------------------


def _floats(text):
    try:
        return np.array([float(t) for t in text.split(",") if t.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _json_arg(text):
    """Inline JSON, or the path of a file holding it."""
    stripped = text.strip()
    if stripped.startswith("["):
        source = stripped
    else:
        path = Path(text)
        if not path.is_file():
            raise UsageError(f"{text!r} is neither inline JSON nor a readable file")
        source = path.read_text()
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}")


def _point(text, N):
    """A point as JSON ``[[re, im], ...]`` or comma-separated real parts."""
    if text.strip().startswith("["):
        z = rpt.decode_complex(_json_arg(text))
    else:
        z = _floats(text).astype(complex)
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size != N:
        raise UsageError(f"point has {z.size} coordinates, expected {N}")
    return z


def parse_grid(spec, N):
    """``lattice:RADIUS:POINTS_PER_AXIS`` over the ``2N`` real coordinates."""
    parts = spec.split(":")
    if len(parts) != 3 or parts[0] != "lattice":
        raise UsageError(f"grid spec must look like lattice:RADIUS:POINTS, got {spec!r}")
    try:
        radius, count = float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad grid spec {spec!r}")
    if radius <= 0 or count < 1:
        raise UsageError("grid radius must be positive and points per axis at least 1")
    return lattice(radius, count, N)


def _scheme(args):
    return FDScheme(h=args.h, order=args.order)


# --- commands ------------------------------------------------------------------


def cmd_sigma(args):
    x = args.vec
    if not 1 <= args.k <= x.size:
        raise UsageError(f"--k must be between 1 and {x.size}")
    s = symcone.sigmas(x, args.k)
    print(f"sigma_{args.k} = {float(s[-1])!r}")
    print("sigmas:", ", ".join(repr(float(v)) for v in s))
    return EXIT_OK, {"sigma": s[-1], "sigmas": s}


def cmd_cone(args):
    x = args.vec
    res = symcone.cone_member(x, ConeSpec(args.k, x.size, args.tol))
    print(f"Lambda({args.k}, {x.size}): {res.verdict.value} (margin {res.margin!r})")
    print("sigmas:", ", ".join(repr(float(v)) for v in res.sigmas))
    code = EXIT_NEGATIVE if res.verdict is Membership.OUTSIDE else EXIT_OK
    return code, {"verdict": res.verdict, "sigmas": res.sigmas, "margin": res.margin}


def cmd_hessian(args):
    u = scalar_field(args.expr, args.dim)
    z = _point(args.at, args.dim)
    H = complex_hessian(u, z, _scheme(args))
    lam = herm_eigs(H)[0]
    print("complex Hessian:")
    for row in H:
        print("  " + "  ".join(f"{v.real:+.10g}{v.imag:+.10g}i" for v in row))
    print("spectrum:", ", ".join(f"{v:.12g}" for v in lam))
    return EXIT_OK, {"hessian": H, "spectrum": lam, "sigmas": symcone.sigmas(lam, args.dim)}


def cmd_classify_fn(args):
    u = scalar_field(args.expr, args.dim)
    if not 1 <= args.k <= args.dim:
        raise UsageError(f"--k must be between 1 and {args.dim}")
    rep = k_subharmonic_on_grid(u, parse_grid(args.grid, args.dim), args.k, _scheme(args))
    print(f"{args.k}-subharmonic on grid: {rep.verdict.value}")
    print(f"worst sigma margin {rep.worst_margin!r} at {rep.worst_point}")
    print(f"evaluated {rep.evaluated} points, skipped {rep.skipped}")
    code = EXIT_NEGATIVE if rep.verdict is Membership.OUTSIDE else EXIT_OK
    return code, {
        "verdict": rep.verdict,
        "worst_margin": rep.worst_margin,
        "worst_point": rep.worst_point,
        "sigmas": rep.worst_sigmas,
        "evaluated": rep.evaluated,
        "skipped": rep.skipped,
    }


def _witness_dict(w):
    return {
        "H": w.H,
        "center": w.center,
        "point": w.point,
        "level": w.level,
        "margin": w.margin,
        "phi_spectrum": w.phi_spectrum,
        "composed_spectrum": w.composed_spectrum,
        "origin": w.origin,
    }


def cmd_classify_map(args):
    A = rpt.decode_complex(_json_arg(args.matrix))
    if A.ndim != 2:
        raise UsageError("matrix must be an array of rows of [re, im] pairs")
    w0 = None if args.offset is None else rpt.decode_complex(_json_arg(args.offset)).reshape(-1)
    fmap = AffineHoloMap(A, w0, args.conjugated)
    v = classify_affine(fmap, Signature(args.m, args.n, fmap.M, fmap.N), tol=args.tol)
    label = f"{v.verdict}({v.c!r})" if v.verdict == Verdict.PROJECTION else v.verdict
    print(f"({args.m}, {args.n})-morphism test, branch {v.branch}: {label}")
    print("singular values:", ", ".join(f"{s:.12g}" for s in v.singular_values), f"(rank {v.rank})")
    if v.witness is not None:
        w = v.witness
        print(f"witness: phi spectrum {np.round(w.phi_spectrum, 12).tolist()}")
        print(f"  composed spectrum {np.round(w.composed_spectrum, 12).tolist()}, sigma_{w.level} < 0 by {w.margin:.6g}")
    code = EXIT_NEGATIVE if v.verdict == Verdict.NOT_MORPHISM else EXIT_OK
    return code, {
        "verdict": v.verdict,
        "c": v.c,
        "branch": v.branch,
        "singular_values": v.singular_values,
        "rank": v.rank,
        "details": v.details,
        "witness": None if v.witness is None else _witness_dict(v.witness),
    }


def cmd_probe_map(args):
    if len(args.dims) != 2:
        raise UsageError("--dims takes N,M")
    N, M = args.dims
    F = map_field(args.exprs, N)
    if F.M != M:
        raise UsageError(f"{F.M} component expressions given, --dims says M={M}")
    grid = parse_grid(args.grid, N)
    cr = cr_residuals(F, grid, _scheme(args))
    pr = holomorphy_probe(F, grid, _scheme(args))
    print(f"Cauchy-Riemann: {cr.kind} (max |df/dzbar| {cr.max_dzbar:.3g}, max |df/dz| {cr.max_dz:.3g})")
    for k, v in pr.residuals.items():
        print(f"  {k:20s} {v:.3g}{'  FAIL' if k in pr.failing else ''}")
    code = EXIT_OK if cr.kind != Holomorphy.NEITHER else EXIT_NEGATIVE
    return code, {
        "verdict": cr.kind,
        "cr": {"max_dzbar": cr.max_dzbar, "max_dz": cr.max_dz, "mixed_product": cr.mixed_product, "tolerance": cr.tolerance},
        "residuals": pr.residuals,
        "failing": list(pr.failing),
    }


def cmd_thm44(args):
    s = args.singvals
    r = args.rank if args.rank is not None else s.size
    variant = {"printed": "as_printed", "derived": "derived_correct"}[args.variant]
    res = thm44_check(s, r, variant)
    both = {res.variant: (res.lhs, res.rhs), res.other["variant"]: (res.other["lhs"], res.other["rhs"])}
    for name in ("derived_correct", "as_printed"):
        lhs, rhs = both[name]
        mark = "*" if name == variant else " "
        print(f"{mark} {name:16s} lhs = {lhs!r}  rhs = {rhs!r}")
    print(f"equal singular values: {res.equal_branch}; condition holds: {res.holds}")
    return (EXIT_OK if res.holds else EXIT_NEGATIVE), {
        "verdict": "holds" if res.holds else "fails",
        "variant": res.variant,
        "identity_holds": res.identity_holds,
        "equal_branch": res.equal_branch,
        "sides": {k: list(v) for k, v in both.items()},
    }


def cmd_verify(args):
    from ..harness import run_paper_suite

    rep = run_paper_suite(seed=args.seed, tolerance_scale=args.tolerance_scale, workers=args.workers)
    for item in rep.items:
        line = f"{'PASS' if item.passed else 'FAIL'}  {item.name:24s} {item.runtime:6.2f}s"
        if item.attribution:
            line += f"  [{item.attribution}]"
        print(line)
    print(f"suite {'passed' if rep.passed else 'FAILED'} in {rep.runtime:.1f}s (seed {rep.seed})")
    out = rep.as_dict()
    out["verdict"] = "pass" if rep.passed else "fail"
    return (EXIT_OK if rep.passed else EXIT_NEGATIVE), out


# --- parser ------------------------------------------------------------------------


def _add_fd(p):
    p.add_argument("--h", type=float, default=DEFAULT_STEP, help="finite-difference step")
    p.add_argument("--order", type=int, choices=(2, 4), default=2, help="finite-difference order")


def build_parser():
    parser = argparse.ArgumentParser(prog="cnsmorph", description="k-subharmonic functions and morphisms between them")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=fn)
        p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
        return p

    p = command("sigma", cmd_sigma, "elementary symmetric polynomials of a vector")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--vec", type=_floats, required=True, help="comma-separated reals (use --vec=-1,2 for a leading minus)")

    p = command("cone", cmd_cone, "membership in Lambda(k, N)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--vec", type=_floats, required=True)
    p.add_argument("--tol", type=float, default=symcone.DEFAULT_TOLERANCE)

    p = command("hessian", cmd_hessian, "complex Hessian of an expression at a point")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--expr", required=True)
    p.add_argument("--at", required=True, help="point: JSON [[re, im], ...] or comma-separated reals")
    _add_fd(p)

    p = command("classify-fn", cmd_classify_fn, "k-subharmonicity of an expression over a grid")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--expr", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--grid", default=DEFAULT_GRID)
    _add_fd(p)

    p = command("classify-map", cmd_classify_map, "(m, n)-morphism test for an affine map")
    p.add_argument("--matrix", required=True, help="JSON rows of [re, im] pairs, inline or a file path")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--offset", help="JSON list of [re, im] pairs, inline or a file path")
    p.add_argument("--conjugated", action="store_true", help="the map is z -> A conj(z) + w0")
    p.add_argument("--tol", type=float, default=1e-8)

    p = command("probe-map", cmd_probe_map, "holomorphy probes for a map given by expressions")
    p.add_argument("--exprs", required=True, help="component expressions separated by ';'")
    p.add_argument("--dims", type=_ints, required=True, help="N,M")
    p.add_argument("--grid", default=DEFAULT_GRID)
    _add_fd(p)

    p = command("thm44", cmd_thm44, "singular-value condition for (2, 1)-morphisms")
    p.add_argument("--singvals", type=_floats, required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--variant", choices=("printed", "derived"), default="derived")

    p = command("verify", cmd_verify, "run the regression suite")
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV} or 0)")
    p.add_argument("--tolerance-scale", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("replay", help="re-run the command echoed in a report and compare")
    p.add_argument("report", help="report file ('-' for stdin)")
    p.set_defaults(func=None)
    return parser


def _config(args):
    return {k: v for k, v in vars(args).items() if k not in ("func", "json", "command")}


def _execute(argv):
    """Parse and run one command; returns ``(code, report)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "replay":
        return _replay(args.report)
    if args.command == "verify" and args.seed is None:
        args.seed = int(os.environ.get(SEED_ENV, "0"))
    echo = _strip_json(argv)
    t0 = time.perf_counter()
    # with the report on stdout, the human summary moves to stderr
    with contextlib.redirect_stdout(sys.stderr) if args.json == "-" else contextlib.nullcontext():
        code, result = args.func(args)
    report = rpt.make_report(args.command, echo, _config(args), result, code, time.perf_counter() - t0)
    if args.json:
        text = rpt.dumps(report)
        if args.json == "-":
            print(text)
        else:
            Path(args.json).write_text(text + "\n")
    return code, report


def _strip_json(argv):
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--json":
            skip = True
            continue
        if a.startswith("--json="):
            continue
        out.append(a)
    return out


def _replay(path):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        old = json.loads(text)
        argv = old["command"]["argv"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"not a report: {exc}")
    code, new = _execute(argv)
    same = rpt.strip_volatile(old) == rpt.strip_volatile(json.loads(rpt.dumps(new)))
    print("replay: identical" if same else "replay: DIFFERS")
    return (EXIT_OK if same else EXIT_NEGATIVE), new


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code, _ = _execute(argv)
        return code
    except (UsageError, ExpressionError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
