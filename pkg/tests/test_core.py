import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matmulkit import (
    DimensionError,
    Matrix,
    MatrixView,
    OpCounter,
    block_add,
    max_abs_diff,
    pad_to_pow2,
    quadrants,
    read_matrix,
    unpad,
    write_matrix,
)
from matmulkit.core import matrix_to_text

from conftest import int_matrix


def test_matrix_shape_and_indexing():
    m = Matrix(np.arange(6).reshape(2, 3))
    assert (m.rows, m.cols) == (2, 3)
    assert m[1, 2] == 5
    m[0, 0] = 9
    assert m[0, 0] == 9


def test_matrix_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        Matrix(np.arange(4))
    with pytest.raises(DimensionError):
        Matrix(np.zeros((0, 3)))


def test_view_reads_through_to_source():
    m = Matrix(np.arange(16).reshape(4, 4))
    v = MatrixView(m, 1, 2, 2, 2)
    for i in range(2):
        for j in range(2):
            assert v[i, j] == m[1 + i, 2 + j]
    v[0, 0] = 99
    assert m[1, 2] == 99


def test_view_must_fit_in_source():
    m = Matrix(np.zeros((4, 4)))
    with pytest.raises(DimensionError):
        MatrixView(m, 2, 2, 3, 1)
    with pytest.raises(DimensionError):
        MatrixView(m, 0, 0, 5, 1)


def test_quadrants_smallest_even_split():
    m = Matrix(np.array([[1, 2], [3, 4]]))
    tl, tr, bl, br = quadrants(m.view())
    assert tl[0, 0] == 1 and tr[0, 0] == 2 and bl[0, 0] == 3 and br[0, 0] == 4


def test_quadrants_identity_block_structure():
    m = Matrix(np.eye(4))
    tl, tr, bl, br = quadrants(m.view())
    assert np.array_equal(tl.arr, np.eye(2))
    assert np.array_equal(br.arr, np.eye(2))
    assert not tr.arr.any() and not bl.arr.any()


def test_quadrants_6x6_tile_exactly():
    m = Matrix(np.arange(36).reshape(6, 6))
    tl, tr, bl, br = quadrants(m.view())
    for i in range(3):
        for j in range(3):
            assert tl[i, j] == m[i, j]
            assert tr[i, j] == m[i, j + 3]
            assert bl[i, j] == m[i + 3, j]
            assert br[i, j] == m[i + 3, j + 3]


def test_quadrants_rejects_odd_dimensions():
    with pytest.raises(DimensionError):
        quadrants(Matrix(np.zeros((3, 4))).view())
    with pytest.raises(DimensionError):
        quadrants(Matrix(np.zeros((4, 5))).view())


@given(st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=8))
@settings(max_examples=30, deadline=None)
def test_quadrant_tiling_covers_without_overlap(hr, hc):
    m = Matrix(np.zeros((2 * hr, 2 * hc), dtype=np.int64))
    parts = quadrants(m.view())
    for mark, part in enumerate(parts, start=1):
        part.arr[:, :] = mark
    counts = {mark: int((m.arr == mark).sum()) for mark in (1, 2, 3, 4)}
    assert all(c == hr * hc for c in counts.values())


def test_block_add_direct_arithmetic():
    a = Matrix(np.array([[1, 2], [3, 4]]))
    b = Matrix(np.array([[5, 6], [7, 8]]))
    dst = Matrix.zeros(2, 2, np.int64)
    counter = OpCounter()
    block_add(a, b, dst, 1, counter)
    assert dst.arr.tolist() == [[6, 8], [10, 12]]
    assert counter.adds == 4


def test_block_add_self_subtract_is_zero():
    a = Matrix(np.array([[3, -1], [2, 9]]))
    dst = Matrix.zeros(2, 2, np.int64)
    block_add(a, a, dst, -1)
    assert not dst.arr.any()


def test_block_add_aliased_accumulate():
    a = Matrix(np.array([[1]]))
    b = Matrix(np.array([[2]]))
    block_add(a, b, a, 1)
    assert a[0, 0] == 3


def test_block_add_extent_mismatch():
    with pytest.raises(DimensionError):
        block_add(Matrix(np.zeros((2, 2))), Matrix(np.zeros((2, 3))),
                  Matrix(np.zeros((2, 2))))


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=6),
       st.integers())
@settings(max_examples=30, deadline=None)
def test_block_add_then_subtract_restores(r, c, seed):
    rng = np.random.default_rng(abs(seed) % 2**32)
    dst = int_matrix(rng, r, c)
    other = int_matrix(rng, r, c)
    before = dst.arr.copy()
    block_add(dst, other, dst, 1)
    block_add(dst, other, dst, -1)
    assert np.array_equal(dst.arr, before)


def test_pad_5x3_to_8x8():
    a = Matrix(np.arange(1, 16).reshape(5, 3))
    p = pad_to_pow2(a)
    assert (p.rows, p.cols) == (8, 8)
    assert np.array_equal(p.arr[:5, :3], a.arr)
    assert not p.arr[5:, :].any() and not p.arr[:, 3:].any()


def test_pad_conforming_returns_independent_copy():
    a = Matrix(np.arange(16).reshape(4, 4))
    p = pad_to_pow2(a)
    assert np.array_equal(p.arr, a.arr)
    p[0, 0] = 99
    assert a[0, 0] == 0


def test_pad_1x1():
    p = pad_to_pow2(Matrix(np.array([[7]])))
    assert (p.rows, p.cols) == (1, 1) and p[0, 0] == 7


@given(st.integers(min_value=1, max_value=64), st.integers(min_value=1, max_value=64),
       st.integers())
@settings(max_examples=60, deadline=None)
def test_padding_round_trip(rows, cols, seed):
    rng = np.random.default_rng(abs(seed) % 2**32)
    a = int_matrix(rng, rows, cols)
    back = unpad(pad_to_pow2(a), a.rows, a.cols)
    assert back == a


def test_unpad_block_and_full_extent():
    c = Matrix(np.arange(64).reshape(8, 8))
    top = unpad(c, 5, 3)
    assert np.array_equal(top.arr, c.arr[:5, :3])
    assert unpad(c, 8, 8) == c


def test_unpad_rejects_oversize():
    with pytest.raises(DimensionError):
        unpad(Matrix(np.zeros((4, 4))), 5, 2)


def test_max_abs_diff_examples():
    a = Matrix(np.array([[1.0]]))
    assert max_abs_diff(a, a) == 0.0
    assert max_abs_diff(a, Matrix(np.array([[1.5]]))) == 0.5
    with pytest.raises(DimensionError):
        max_abs_diff(a, Matrix(np.zeros((2, 1))))


def test_max_abs_diff_matches_elementwise_loop(rng):
    a = Matrix(rng.uniform(-5, 5, (6, 4)))
    b = Matrix(rng.uniform(-5, 5, (6, 4)))
    expected = 0.0
    for i in range(6):
        for j in range(4):
            expected = max(expected, abs(float(a[i, j]) - float(b[i, j])))
    assert max_abs_diff(a, b) == expected


def test_text_format_int_round_trip():
    a = Matrix(np.array([[1, -2, 30], [400, 5, -6]], dtype=np.int64))
    text = matrix_to_text(a)
    assert text.splitlines()[0] == "2 3"
    back = read_matrix(io.StringIO(text))
    assert back == a and back.arr.dtype == np.int64


def test_text_format_real_round_trip_17_digits():
    a = Matrix(np.array([[1 / 3, np.pi], [-2.5e-17, 1e300]]))
    back = read_matrix(io.StringIO(matrix_to_text(a)))
    assert np.array_equal(back.arr, a.arr)
    assert back.arr.dtype == np.float64


def test_text_format_write_read_file(tmp_path):
    path = tmp_path / "m.txt"
    a = Matrix(np.array([[9, 8], [7, 6]], dtype=np.int64))
    write_matrix(a, str(path))
    assert read_matrix(str(path)) == a


@pytest.mark.parametrize("text", [
    "", "2", "2 2\n1 2 3", "2 2\n1 2 3 4 5", "x 2\n1 2", "1 1\nfoo", "0 2\n",
])
def test_text_format_rejects_malformed(text):
    with pytest.raises(ValueError):
        read_matrix(io.StringIO(text))
