import numpy as np
import pytest
from scipy import stats

from isoscore.core import BadCorrelationError, BadFamilyError, BadKError, EmptyError, SyntheticSpec
from isoscore.synthgen import (
    box_muller,
    generate,
    make_rng,
    sample_correlated_2d,
    sample_ink,
    sample_isotropic_nongaussian,
    skewered_meatball,
)


def test_box_muller_is_standard_normal():
    z = box_muller(make_rng(0), (200_001,))
    assert abs(z.mean()) < 0.01 and abs(z.var() - 1) < 0.01
    assert stats.kstest(z, "norm").pvalue > 0.01
    assert z.shape == (200_001,)


def test_bitwise_reproducible():
    spec = SyntheticSpec("gaussian_diag", 4, 1000, seed=9, mean=1.0, cov_diag=[1, 2, 3, 4])
    np.testing.assert_array_equal(generate(spec).data, generate(spec).data)
    other = SyntheticSpec("gaussian_diag", 4, 1000, seed=10)
    assert not np.array_equal(generate(spec).data, generate(other).data)


def test_diag_gaussian_moments():
    spec = SyntheticSpec("gaussian_diag", 3, 200_000, seed=1, mean=[1, -2, 5], cov_diag=[1, 4, 0])
    a = generate(spec).data
    np.testing.assert_allclose(a.mean(axis=0), [1, -2, 5], atol=0.02)
    np.testing.assert_allclose(a.var(axis=0), [1, 4, 0], rtol=0.02, atol=1e-15)
    assert np.all(a[:, 2] == 5.0)


def test_ink_uses_exactly_k_axes():
    a = sample_ink(9, 5, 1000, 2).data
    assert np.all(a[:, 5:] == 0) and np.all(a[:, :5] != 0)
    with pytest.raises(BadKError):
        sample_ink(9, 0, 10, 2)
    with pytest.raises(BadKError):
        sample_ink(9, 10, 10, 2)


def test_correlated_2d():
    a = sample_correlated_2d(0.8, 200_000, 3).data
    np.testing.assert_allclose(np.cov(a.T), [[1, 0.8], [0.8, 1]], atol=0.01)
    assert sample_correlated_2d(0.5, 10, 3, embed_n=5).n == 5
    for bad in (1.0, -1.0, 1.5):
        with pytest.raises(BadCorrelationError):
            sample_correlated_2d(bad, 10, 3)


def test_meatball_layout():
    a = skewered_meatball(1000, 50_000, 4).data
    line = a[:1000]
    np.testing.assert_array_equal(line[:, 0], line[:, 1])
    np.testing.assert_array_equal(line[:, 0], line[:, 2])
    assert np.abs(line).max() <= np.sqrt(3)
    assert line[:, 0].var() == pytest.approx(1.0, abs=0.1)
    np.testing.assert_allclose(np.cov(a[1000:].T), np.eye(3), atol=0.03)
    assert skewered_meatball(1000, 0, 4).count == 1000
    with pytest.raises(EmptyError):
        skewered_meatball(1, 0, 4)


@pytest.mark.parametrize(
    "family, mean, var",
    [("uniform", 0, 1 / 3), ("poisson", 4, 4), ("student_t", 0, 5 / 3), ("chi_square", 3, 6)],
)
def test_nongaussian_families(family, mean, var):
    a = sample_isotropic_nongaussian(family, 3, 200_000, 5).data
    np.testing.assert_allclose(a.mean(axis=0), mean, atol=0.05 * max(1, mean))
    np.testing.assert_allclose(a.var(axis=0), var, rtol=0.08)


def test_generate_dispatch_and_rotation():
    spec = SyntheticSpec("gaussian_corr2d", 2, 1000, seed=1, corr=0.3)
    base = generate(spec).data
    rot = generate(SyntheticSpec("gaussian_corr2d", 2, 1000, seed=1, corr=0.3, rotation_deg=90)).data
    np.testing.assert_allclose(rot, base @ [[0, 1], [-1, 0]], atol=1e-12)
    assert generate(SyntheticSpec("skewered_meatball", 3, (10, 20), seed=1)).count == 30
    assert generate(SyntheticSpec("ink", 5, 10, seed=1, k=2)).n == 5
    assert generate(SyntheticSpec("poisson", 4, 10, seed=1)).n == 4
    with pytest.raises(BadFamilyError):
        sample_isotropic_nongaussian("gaussian_diag", 2, 10, 1)
