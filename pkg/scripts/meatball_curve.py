"""Score every metric on the skewered meatball as the ball grows around a fixed line.

Writes a CSV of (ball_count, metric, score) and prints where each metric crosses 0.5.

    python scripts/meatball_curve.py --line 1000 --out meatball.csv
"""

import argparse
import csv

from isoscore import harness
from isoscore.core import METRICS
from isoscore.synthgen import skewered_meatball


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--line", type=int, default=1000)
    p.add_argument("--balls", default="0,250,500,750,1000,1250,1500,2000,3000,5000,10000,20000,50000")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--partition-basis", choices=("rows", "columns"), default="columns")
    p.add_argument("--out", default="meatball.csv")
    args = p.parse_args()

    balls = [int(b) for b in args.balls.split(",")]
    cfg = harness.HarnessConfig(seed=args.seed, partition_basis=args.partition_basis, line_count=args.line)
    series = {m: [] for m in METRICS}
    for b in balls:
        X = skewered_meatball(args.line, b, harness.derive_seed(args.seed, 7, b))
        for m, v in harness.score_all(X, cfg, harness.derive_seed(args.seed, 7, b, 1)).items():
            series[m].append(v)

    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ball_count", "metric", "score"])
        for m in METRICS:
            w.writerows((b, m, repr(v)) for b, v in zip(balls, series[m]))
    for m in METRICS:
        x = harness.crossing_point(balls, series[m])
        print(f"{m:<12} crosses 0.5 at ball_count = {x if x is None else round(x)}")


if __name__ == "__main__":
    main()
