import json

import numpy as np
import pytest

from isoscore.core import (
    BadFamilyError,
    BadKError,
    DimensionTooSmallError,
    MetricReport,
    NonFiniteError,
    ParseError,
    PointCloud,
    SyntheticSpec,
    TestOutcome,
    TooFewPointsError,
    validate_point_cloud,
)


def test_validate_wraps_and_freezes():
    X = validate_point_cloud([[0, 0], [1, 1], [2, 2]])
    assert isinstance(X, PointCloud)
    assert (X.n, X.count, X.N, len(X)) == (2, 3, 3, 3)
    assert X.data.dtype == np.float64
    with pytest.raises(ValueError):
        X.data[0, 0] = 5.0
    assert validate_point_cloud(X) is X


def test_validate_copies_input():
    a = np.ones((3, 2))
    X = validate_point_cloud(a)
    a[0, 0] = 7
    assert X.data[0, 0] == 1


@pytest.mark.parametrize(
    "data, err",
    [
        ([[1.0, np.nan], [0.0, 0.0]], NonFiniteError),
        ([[1.0, np.inf], [0.0, 0.0]], NonFiniteError),
        ([[1.0, 2.0]], TooFewPointsError),
        ([[1.0], [2.0]], DimensionTooSmallError),
        ([1.0, 2.0, 3.0], DimensionTooSmallError),
    ],
)
def test_validate_rejects(data, err):
    with pytest.raises(err):
        validate_point_cloud(data)


def test_coincident_points_are_structurally_valid():
    assert validate_point_cloud(np.ones((5, 3))).count == 5


def test_metric_report_checks():
    r = MetricReport("varex", 1.5, {"k": 2})
    assert json.loads(json.dumps(r.to_dict()))["config"] == {"k": 2}
    with pytest.raises(ValueError):
        MetricReport("nope", 1.0)
    with pytest.raises(ValueError):
        MetricReport("isoscore", float("nan"))


def test_synthetic_spec_validation():
    s = SyntheticSpec("gaussian_diag", 3, 10, seed=1, mean=2.0, cov_diag=[1, 2, 3])
    np.testing.assert_array_equal(s.mean_vector(), [2, 2, 2])
    np.testing.assert_array_equal(s.cov_vector(), [1, 2, 3])
    assert json.dumps(s.to_dict())
    with pytest.raises(BadFamilyError):
        SyntheticSpec("cauchy", 3, 10, seed=1)
    with pytest.raises(BadKError):
        SyntheticSpec("ink", 3, 10, seed=1, k=4)
    with pytest.raises(BadKError):
        SyntheticSpec("ink", 3, 10, seed=1)
    with pytest.raises(ValueError):
        SyntheticSpec("gaussian_diag", 3, 10, seed=1, cov_diag=-1.0)


def test_outcome_alignment_and_serialisation():
    o = TestOutcome("1", "mu", [0, 1], {"isoscore": [1.0, 1.0]}, {"isoscore": (True, None)})
    d = o.to_dict()
    assert d["verdicts"]["isoscore"] == {"pass": True, "violated": None}
    assert d["sweep_parameter"] == {"name": "mu", "values": [0, 1]}
    with pytest.raises(ValueError):
        TestOutcome("1", "mu", [0, 1], {"isoscore": [1.0]}, {})


def test_parse_error_carries_line():
    e = ParseError("bad", line=2)
    assert e.line == 2 and "line 2" in str(e)
