"""Regenerate the bundled 10000 x 32 fixture cloud and its golden scores.

Run from the repository root:  python scripts/make_fixture.py
"""

import json
import os

import numpy as np

from isoscore import io
from isoscore.baselines import metric_report
from isoscore.core import METRICS, SyntheticSpec
from isoscore.synthgen import generate

HERE = os.path.join(os.path.dirname(__file__), "..", "tests", "data")
SPEC = SyntheticSpec(
    "gaussian_diag",
    n=32,
    count=10_000,
    seed=20240601,
    mean=0.5,
    cov_diag=tuple(float(v) for v in np.geomspace(4.0, 0.05, 32)),
)
METRIC_SEED = 7


def golden_scores(X) -> dict:
    return {m: metric_report(m, X, seed=METRIC_SEED).value for m in METRICS}


def main():
    X = generate(SPEC)
    io.write_binary(X, os.path.join(HERE, "fixture_10000x32.bin"))
    out = {"spec": SPEC.to_dict(), "metric_seed": METRIC_SEED, "scores": golden_scores(X)}
    with open(os.path.join(HERE, "fixture_10000x32.golden.json"), "w") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    print(json.dumps(out["scores"], indent=2))


if __name__ == "__main__":
    main()
