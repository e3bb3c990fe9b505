"""Command-line front end.

Subcommands: ``score`` (metrics on a point-cloud file), ``generate``
(synthetic clouds) and ``validate`` (the essential-property harness).
JSON goes to stdout; ``--pretty`` adds a readable table on stderr.
Exit codes: 0 success, 2 usage or input error, 3 IsoScore regression.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import harness, io
from .baselines import IdConfig, metric_report
from .core import FAMILIES, METRICS, IsoScoreError, SyntheticSpec
from .score import isoscore
from .synthgen import generate

EXIT_OK, EXIT_USAGE, EXIT_REGRESSION = 0, 2, 3
RANDOMIZED = ("avg_cos_sim", "id_score")
FAMILY_ALIASES = {"meatball": "skewered_meatball", "corr2d": "gaussian_corr2d"}


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _fail(kind: str, message: str) -> int:
    json.dump({"error": kind, "message": message}, sys.stderr)
    sys.stderr.write("\n")
    return EXIT_USAGE


def _metrics(values: list[str]) -> list[str]:
    chosen = []
    for v in values:
        for m in v.split(","):
            m = m.strip()
            if m == "all":
                chosen.extend(METRICS)
            elif m in METRICS:
                chosen.append(m)
            else:
                raise UsageError(f"unknown metric {m!r}; choose from {', '.join(METRICS)} or all")
    return [m for m in METRICS if m in chosen]


def cmd_score(args) -> int:
    metrics = _metrics(args.metric or ["isoscore"])
    needs_seed = [m for m in metrics if m in RANDOMIZED]
    if needs_seed and args.seed is None:
        raise UsageError(f"--seed is required for {', '.join(needs_seed)}")
    X = io.read_cloud(args.input, args.format, header=args.header)
    id_cfg = IdConfig(k_min=args.id_kmin, k_max=args.id_kmax, seed=args.seed)

    reports = {}
    spectrum = None
    for m in metrics:
        if m == "isoscore":
            res = isoscore(X)
            spectrum = res.variance_vector
            diag = res.to_dict() if args.verbose else {"dims_utilized": res.dims_utilized, "defect": res.defect}
            reports[m] = {"metric": m, "value": res.score, "config": {}, "diagnostics": diag}
            continue
        rep = metric_report(
            m,
            X,
            seed=args.seed,
            pairs=args.pairs,
            k=args.k,
            id_config=id_cfg,
            partition_basis=args.partition_basis,
            verbose=args.verbose,
            spectrum=spectrum if m == "varex" else None,
        )
        reports[m] = rep.to_dict()

    _emit({"input": str(args.input), "n": X.n, "count": X.count,
           "scores": {m: r["value"] for m, r in reports.items()}, "reports": reports})
    if args.pretty:
        for m, r in reports.items():
            print(f"{m:<12} {r['value']:.6f}", file=sys.stderr)
    return EXIT_OK


def _spec_from_args(args) -> SyntheticSpec:
    family = FAMILY_ALIASES.get(args.family, args.family)
    if family == "skewered_meatball":
        if args.line is None or args.ball is None:
            raise UsageError("meatball needs --line and --ball")
        return SyntheticSpec(family, 3, (args.line, args.ball), args.seed, rotation_deg=args.rotate)
    if args.count is None:
        raise UsageError("--count is required")
    n = args.n if args.n is not None else 2
    kw = {}
    if family == "gaussian_diag":
        kw = {"mean": args.mean, "cov_diag": args.var}
    elif family == "gaussian_corr2d":
        kw = {"corr": args.corr}
    elif family == "ink":
        if args.k is None:
            raise UsageError("ink needs --k")
        kw = {"k": args.k}
    return SyntheticSpec(family, n, args.count, args.seed, rotation_deg=args.rotate, **kw)


def cmd_generate(args) -> int:
    spec = _spec_from_args(args)
    X = generate(spec)
    fmt = io.write_cloud(X, args.out, args.format)
    sidecar = f"{args.out}.json"
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump({"spec": spec.to_dict(), "format": fmt, "n": X.n, "count": X.count}, fh, indent=2)
        fh.write("\n")
    _emit({"out": str(args.out), "sidecar": sidecar, "format": fmt, "n": X.n, "count": X.count})
    return EXIT_OK


def cmd_validate(args) -> int:
    selection = [t for v in (args.tests or list(harness.MATRIX_ROWS)) for t in v.split(",") if t]
    overrides = {"seed": args.seed, "workers": args.workers}
    if args.count is not None:
        overrides["count"] = args.count
    cfg = harness.HarnessConfig.for_scale(args.scale, **overrides)
    try:
        ids = harness.expand_tests(selection)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    outcomes = harness.run_tests(ids, cfg)
    report = harness.write_report(outcomes, cfg, args.out)
    _emit(
        {
            "out": os.path.abspath(args.out),
            "matrix": report["matrix"],
            "cells_matching": report["cells_matching"],
            "cells_total": report["cells_total"],
            "isoscore_column_pass": report["isoscore_column_pass"],
            "scores": {o.test_id: o.scores for o in outcomes},
        }
    )
    if args.pretty:
        print(harness.format_matrix(report["matrix"], harness.REFERENCE_MATRIX), file=sys.stderr)
    return EXIT_OK if report["isoscore_column_pass"] else EXIT_REGRESSION


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 2 with the structured message
        self.print_usage(sys.stderr)
        raise SystemExit(_fail("usage", message))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="isoscore", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("score", help="score a point-cloud file")
    s.add_argument("--input", required=True)
    s.add_argument("--format", choices=io.FORMATS, default="auto")
    s.add_argument("--header", action="store_true", help="skip the first CSV line")
    s.add_argument("--metric", action="append", help="metric name, comma list or 'all' (repeatable)")
    s.add_argument("--seed", type=int)
    s.add_argument("--pairs", type=int, default=100_000)
    s.add_argument("--k", type=int, help="VarEx component count")
    s.add_argument("--id-kmin", type=int, default=5)
    s.add_argument("--id-kmax", type=int, default=20)
    s.add_argument("--partition-basis", choices=("columns", "rows"), default="columns")
    s.add_argument("--verbose", action="store_true")
    s.add_argument("--pretty", action="store_true")
    s.set_defaults(func=cmd_score)

    g = sub.add_parser("generate", help="sample a synthetic point cloud")
    g.add_argument("--family", required=True, choices=sorted(set(FAMILIES) | set(FAMILY_ALIASES)))
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--count", type=int)
    g.add_argument("--line", type=int)
    g.add_argument("--ball", type=int)
    g.add_argument("--mean", type=float, default=0.0)
    g.add_argument("--var", type=float, default=1.0, help="common variance for gaussian_diag")
    g.add_argument("--corr", type=float, default=0.0)
    g.add_argument("--rotate", type=float, help="rotate by this many degrees in the first coordinate plane")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--format", choices=io.FORMATS, default="auto", help="auto: binary for .bin, else CSV")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", help="run the essential-property harness")
    v.add_argument("--scale", choices=("desk", "paper"), default="desk")
    v.add_argument("--tests", action="append", help="rows 1-6, comma separated (repeatable)")
    v.add_argument("--out", default="validation_out")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, help="override points per cloud")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--pretty", action="store_true")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", str(exc))
    except IsoScoreError as exc:
        return _fail(type(exc).__name__, str(exc))
    except (OSError, ValueError) as exc:
        return _fail(type(exc).__name__, str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
