"""Command-line interface: parse manifold files, run analyses, emit exact reports.

Exit codes: 0 success, 2 mathematical verdict with a caveat (a cap or
sample budget was exhausted before the question was settled), 1 error.
Reports are JSON-serializable with every exact value rendered as a
rational string; re-running with the same seed reproduces the report
byte-identically apart from the timing field.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .linalg import PointSampler
from .manifold import ManifoldError, mark_point, validate
from .mparse import (
    ManifoldSyntaxError,
    load_fixture,
    parse_manifold_file,
    parse_point_spec,
)
from .nondeg import degeneracy_witness, k_nondegeneracy_at, levi_number
from .poly import PolyError
from .scalars import format_gaussian
from .segre import segre_chain
from .jetdet import counterexample_pair, determination_test

FIXTURES = ("heis2", "plane", "prod3", "st0", "st3")
SEED_ENV = "CRWB_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "").strip()
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise SystemExit(f"error: {SEED_ENV} must be an integer, got {raw!r}")
    return 0


def _load(source: str):
    if os.path.exists(source):
        return parse_manifold_file(source)
    stem = os.path.splitext(os.path.basename(source))[0].lower()
    if stem in FIXTURES:
        return load_fixture(stem)
    raise FileNotFoundError(f"no such manifold file or fixture: {source}")


def _resolve_point(mf, M, spec):
    """--point accepts 'origin', an index into the file's point blocks, or
    an inline 'z0 = ... ; s0 = ...' block."""
    if spec is None or spec == "origin":
        return [0] * M.n, [0] * M.d
    if ";" in spec or "=" in spec:
        z0, s0 = parse_point_spec(spec, 1, M.n, M.d)
        return z0, s0
    idx = int(spec)
    if not 1 <= idx <= len(mf.points):
        raise ManifoldError(
            f"point index {idx} out of range (file has {len(mf.points)} point blocks)"
        )
    return mf.points[idx - 1]


def _fmt(v):
    """Render exact scalars as rational strings for the report."""
    from .scalars import _coerce

    return format_gaussian(_coerce(v))


def _point_payload(z0, s0):
    return {"z0": [_fmt(v) for v in z0], "s0": [_fmt(v) for v in s0]}


# -- command implementations --------------------------------------------------------


def cmd_validate(mf, M, args):
    info = validate(M)
    return info, 0


def cmd_analyze(mf, M, args):
    z0, s0 = _resolve_point(mf, M, args.point)
    p = mark_point(M, z0, s0)
    krep = k_nondegeneracy_at(p, kmax=args.kmax)
    lrep = levi_number(M, kmax=args.kmax, seed=args.seed)
    chain = segre_chain(p, jmax=args.jmax, sampler=PointSampler(args.seed))
    report = {
        "point": _point_payload(z0, s0),
        "k_at_point": krep.k,
        "span_dims": krep.span_dims,
        "levi": lrep.levi,
        "levi_verdict": lrep.verdict,
        "segre_dims": chain.dims,
        "j0": chain.j0,
        "minimal_at_point": chain.minimal,
        "orbit_dims": [chain.orbit_codim_dimension, chain.orbit_real_dimension]
        if chain.stabilized
        else None,
    }
    caveat = (
        lrep.verdict == "inconclusive"
        or not chain.stabilized
        or (krep.k is None and lrep.verdict != "degenerate")
    )
    return report, (2 if caveat else 0)


def cmd_segre(mf, M, args):
    z0, s0 = _resolve_point(mf, M, args.point)
    p = mark_point(M, z0, s0)
    chain = segre_chain(
        p, jmax=args.jmax, D=args.out_degree, sampler=PointSampler(args.seed)
    )
    report = {
        "point": _point_payload(z0, s0),
        "dims": chain.dims,
        "j0": chain.j0,
        "stabilized": chain.stabilized,
        "minimal": chain.minimal,
        "orbit_dims": [chain.orbit_codim_dimension, chain.orbit_real_dimension]
        if chain.stabilized
        else None,
        "truncation_degree": chain.D,
    }
    return report, (0 if chain.stabilized else 2)


def cmd_hol_dim(mf, M, args):
    from .fields import hol_jet_basis

    D_coef = args.degree if args.degree is not None else 2
    basis, dim = hol_jet_basis(M, D_coef, D_out=args.out_degree)
    report = {
        "coefficient_degree": D_coef,
        "out_degree": args.out_degree,
        "dimension": dim,
        "basis": [repr(f) for f in basis],
    }
    return report, 0


def cmd_witness(mf, M, args):
    D = args.degree if args.degree is not None else 2
    fields = degeneracy_witness(M, D, D_out=args.out_degree)
    report = {
        "coefficient_degree": D,
        "found": bool(fields),
        "witnesses": [repr(f) for f in fields],
    }
    return report, 0


def cmd_jet_determination(mf, M, args):
    z0, s0 = _resolve_point(mf, M, args.point)
    p = mark_point(M, z0, s0)
    K_max = args.K if args.K is not None else 6
    verdict = determination_test(
        M, point=p, K_max=K_max, kmax=args.kmax, seed=args.seed
    )
    report = {
        "point": _point_payload(z0, s0),
        "status": verdict.status,
        "levi": verdict.levi,
        "K_norm": verdict.K_norm,
        "K_max": verdict.K_max,
        "freedom_per_degree": {str(k): v for k, v in verdict.freedom_per_degree.items()},
        "joint_freedom": verdict.joint_freedom,
        "unique": verdict.unique,
        "details": {k: v for k, v in verdict.details.items()},
    }
    return report, (0 if verdict.status == "ok" else 2)


def cmd_counterexample(mf, M, args):
    z0, s0 = _resolve_point(mf, M, args.point)
    p = mark_point(M, z0, s0)
    K = args.K if args.K is not None else 2
    pair = counterexample_pair(M, K, point=p)
    if pair is None:
        return {"K": K, "found": False, "pair": None}, 0
    report = {
        "K": K,
        "found": True,
        "pair": {
            "F": [str(c) for c in pair.F.components],
            "G": [str(c) for c in pair.G.components],
            "agree_through": pair.agree_through,
            "differ_at": pair.differ_at,
            "multiplier": str(pair.h),
            "exponent": pair.exponent,
        },
    }
    return report, 0


COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "segre": cmd_segre,
    "hol-dim": cmd_hol_dim,
    "witness": cmd_witness,
    "jet-determination": cmd_jet_determination,
    "counterexample": cmd_counterexample,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="crwb",
        description="Exact CR-geometry workbench for polynomial generic submanifolds",
    )
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("manifold", help="manifold file path or fixture name")
    ap.add_argument("--degree", type=int, default=None, help="coefficient degree cap")
    ap.add_argument("--out-degree", type=int, default=None, dest="out_degree",
                    help="output/matching degree cap")
    ap.add_argument("--kmax", type=int, default=12, help="nondegeneracy search cap")
    ap.add_argument("--jmax", type=int, default=None, help="Segre chain length cap")
    ap.add_argument("--seed", type=int, default=None, help="sampling seed")
    ap.add_argument("--point", default=None,
                    help="'origin', a 1-based file point index, or 'z0 = ... ; s0 = ...'")
    ap.add_argument("--K", type=int, default=None, help="jet order")
    ap.add_argument("--json", action="store_true", help="emit the JSON report")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = default_seed()
    t0 = time.monotonic()
    try:
        mf = _load(args.manifold)
        M = mf.to_manifold()
        body, code = COMMANDS[args.command](mf, M, args)
    except (ManifoldSyntaxError, ManifoldError, PolyError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = {
        "command": args.command,
        "manifold": mf.name,
        "config": {
            "degree": args.degree,
            "out_degree": args.out_degree,
            "kmax": args.kmax,
            "jmax": args.jmax,
            "seed": args.seed,
            "point": args.point,
            "K": args.K,
        },
        "result": body,
        "exit_code": code,
        "timing_ms": int((time.monotonic() - t0) * 1000),
    }
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        _print_human(report)
    return code


def _print_human(report):
    print(f"{report['command']} {report['manifold']}")
    for key, val in sorted(report["result"].items()):
        print(f"  {key}: {val}")


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
