import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from isoscore.core import BadMagicError, NonFiniteError, ParseError
from isoscore.io import (
    HEADER,
    MAGIC,
    detect_format,
    read_binary,
    read_cloud,
    read_csv,
    write_binary,
    write_cloud,
    write_csv,
)


def test_csv_basic(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("0,0\n1,1\n2,2\n")
    X = read_csv(p)
    np.testing.assert_array_equal(X.data, [[0, 0], [1, 1], [2, 2]])


def test_csv_header_and_blank_lines(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("x,y\n1, 2\n\n3,4\n")
    np.testing.assert_array_equal(read_csv(p, header=True).data, [[1, 2], [3, 4]])
    with pytest.raises(ParseError) as e:
        read_csv(p)
    assert e.value.line == 1


@pytest.mark.parametrize(
    "text, line", [("1,2\n3\n", 2), ("1,2\n3,4\n5,a\n", 3), ("1,2\n3,4,5\n", 2), ("", None)]
)
def test_csv_errors(tmp_path, text, line):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(ParseError) as e:
        read_csv(p)
    assert e.value.line == line


def test_csv_nonfinite(tmp_path):
    p = tmp_path / "nan.csv"
    p.write_text("1,nan\n2,3\n")
    with pytest.raises(NonFiniteError):
        read_csv(p)


def test_binary_layout(tmp_path):
    p = tmp_path / "a.bin"
    a = np.arange(12, dtype=float).reshape(4, 3)
    write_binary(a, p)
    raw = p.read_bytes()
    assert raw[:6] == MAGIC
    assert HEADER.unpack(raw[: HEADER.size])[1:] == (3, 4)
    assert len(raw) == HEADER.size + 8 * 12
    np.testing.assert_array_equal(np.frombuffer(raw[HEADER.size :], "<f8"), a.ravel())
    np.testing.assert_array_equal(read_binary(p).data, a)


def test_binary_errors(tmp_path):
    p = tmp_path / "x.bin"
    p.write_bytes(b"NOTPC1" + bytes(20))
    with pytest.raises(BadMagicError):
        read_binary(p)
    write_binary(np.ones((3, 2)), p)
    p.write_bytes(p.read_bytes()[:-8])
    with pytest.raises(ParseError):
        read_binary(p)


def test_auto_detection(tmp_path):
    a = np.array([[1.5, 2.0], [3.0, -4.25]])
    b, c = tmp_path / "a.bin", tmp_path / "a.txt"
    assert write_cloud(a, b) == "binary" and write_cloud(a, c) == "csv"
    assert detect_format(b) == "binary" and detect_format(c) == "csv"
    np.testing.assert_array_equal(read_cloud(b).data, read_cloud(c).data)
    with pytest.raises(ValueError):
        read_cloud(b, "hdf5")


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(arrays(np.float64, st.tuples(st.integers(2, 6), st.integers(2, 5)), elements=finite))
def test_round_trip_is_exact(tmp_path_factory, a):
    d = tmp_path_factory.mktemp("rt")
    write_csv(a, d / "a.csv")
    X = read_csv(d / "a.csv")
    write_binary(X, d / "a.bin")
    write_csv(read_binary(d / "a.bin"), d / "b.csv")
    np.testing.assert_array_equal(read_csv(d / "b.csv").data, a)
