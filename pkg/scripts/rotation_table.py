"""All five metrics on a correlated 2-D Gaussian, its 120/240 degree rotations and its PCA reorientation.

    python scripts/rotation_table.py --count 100000 --seed 42
"""

import argparse

from isoscore.baselines import metric_report
from isoscore.core import METRICS
from isoscore.linalg import pca_reorient, rotate2d_embedded
from isoscore.synthgen import sample_correlated_2d


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--corr", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=42)
    args = p.parse_args()

    X = sample_correlated_2d(args.corr, args.count, args.seed)
    variants = {
        "X": X,
        "X^120": rotate2d_embedded(X, 120),
        "X^240": rotate2d_embedded(X, 240),
        "X^PCA": pca_reorient(X),
    }
    print(f"{'metric':<20}" + "".join(f"{v:>10}" for v in variants))
    rows = [(m, {}) for m in METRICS] + [("partition (rows)", {"partition_basis": "rows"})]
    for label, extra in rows:
        m = label.split()[0]
        vals = [metric_report(m, V, seed=args.seed, **extra).value for V in variants.values()]
        print(f"{label:<20}" + "".join(f"{v:>10.3f}" for v in vals))


if __name__ == "__main__":
    main()
