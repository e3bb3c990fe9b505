"""Run the six essential-property experiments and print the pass/fail matrix.

    python scripts/run_validation.py --scale desk --out runs/desk --workers 4
"""

import argparse
import json

from isoscore import harness


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--scale", choices=("desk", "paper"), default="desk")
    p.add_argument("--out", default="runs/desk")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--partition-basis", choices=("rows", "columns"), default="rows")
    args = p.parse_args()

    cfg = harness.HarnessConfig.for_scale(
        args.scale, seed=args.seed, workers=args.workers, partition_basis=args.partition_basis
    )
    outcomes = harness.run_tests(harness.MATRIX_ROWS, cfg)
    report = harness.write_report(outcomes, cfg, args.out)
    print(harness.format_matrix(report["matrix"], harness.REFERENCE_MATRIX))
    print(f"\n{report['cells_matching']}/{report['cells_total']} cells match the reference (* = mismatch)")
    for o in outcomes:
        for m, (ok, why) in o.verdicts.items():
            if not ok:
                print(f"  test {o.test_id:<3} {m:<12} {why}")
    print(json.dumps({"out": args.out, "isoscore_column_pass": report["isoscore_column_pass"]}))


if __name__ == "__main__":
    main()
