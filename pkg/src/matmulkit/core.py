"""Dense matrices, non-copying quadrant views, block arithmetic, and padding.

Storage is a row-major contiguous numpy array; the scalar type is whatever
dtype the array carries (the test suite exercises int64 and float64).
Views are numpy slices of the owning array, so writing through a view writes
the source and quadrant access never copies.
"""

from __future__ import annotations

import io

import numpy as np

from .counters import OpCounter


class DimensionError(ValueError):
    """Operand extents do not satisfy an operation's contract."""


class AliasError(ValueError):
    """Operands alias each other where the contract forbids it."""


class Matrix:
    """A dense rows x cols matrix owning its storage."""

    __slots__ = ("arr",)

    def __init__(self, arr: np.ndarray):
        a = np.asarray(arr)
        if a.ndim != 2:
            raise DimensionError(f"matrix data must be 2-D, got {a.ndim}-D")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionError(f"matrix extents must be positive, got {a.shape}")
        self.arr = np.ascontiguousarray(a)

    @classmethod
    def zeros(cls, rows: int, cols: int, dtype=np.float64) -> "Matrix":
        return cls(np.zeros((rows, cols), dtype=dtype))

    @classmethod
    def from_rows(cls, rows, dtype=None) -> "Matrix":
        return cls(np.array(rows, dtype=dtype))

    @property
    def rows(self) -> int:
        return self.arr.shape[0]

    @property
    def cols(self) -> int:
        return self.arr.shape[1]

    def view(self) -> "MatrixView":
        """Full-extent writable window over this matrix."""
        return MatrixView(self, 0, 0, self.rows, self.cols)

    def copy(self) -> "Matrix":
        return Matrix(self.arr.copy())

    def __getitem__(self, idx):
        return self.arr[idx]

    def __setitem__(self, idx, value):
        self.arr[idx] = value

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.arr.shape == other.arr.shape and bool(np.all(self.arr == other.arr))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, dtype={self.arr.dtype})"


class MatrixView:
    """Non-owning rectangular window into a Matrix.

    Element (i, j) of the view is element (row_off + i, col_off + j) of the
    source. The window must lie fully inside the source.
    """

    __slots__ = ("source", "row_off", "col_off", "arr")

    def __init__(self, source: Matrix, row_off: int, col_off: int, rows: int, cols: int):
        if row_off < 0 or col_off < 0 or rows < 1 or cols < 1:
            raise DimensionError("view offsets must be >= 0 and extents >= 1")
        if row_off + rows > source.rows or col_off + cols > source.cols:
            raise DimensionError(
                f"view {rows}x{cols}@({row_off},{col_off}) exceeds "
                f"source {source.rows}x{source.cols}"
            )
        self.source = source
        self.row_off = row_off
        self.col_off = col_off
        self.arr = source.arr[row_off:row_off + rows, col_off:col_off + cols]

    @property
    def rows(self) -> int:
        return self.arr.shape[0]

    @property
    def cols(self) -> int:
        return self.arr.shape[1]

    def subview(self, row_off: int, col_off: int, rows: int, cols: int) -> "MatrixView":
        """Window within this window; offsets stay root-relative."""
        if row_off + rows > self.rows or col_off + cols > self.cols:
            raise DimensionError("subview exceeds parent view")
        return MatrixView(self.source, self.row_off + row_off, self.col_off + col_off, rows, cols)

    def to_matrix(self) -> Matrix:
        return Matrix(self.arr.copy())

    def __getitem__(self, idx):
        return self.arr[idx]

    def __setitem__(self, idx, value):
        self.arr[idx] = value

    def __repr__(self) -> str:
        return (f"MatrixView({self.rows}x{self.cols}@"
                f"({self.row_off},{self.col_off}) of {self.source!r})")


def as_view(m) -> MatrixView:
    """Accept a Matrix or MatrixView wherever a window is needed."""
    if isinstance(m, MatrixView):
        return m
    if isinstance(m, Matrix):
        return m.view()
    raise TypeError(f"expected Matrix or MatrixView, got {type(m).__name__}")


def quadrants(m: MatrixView) -> tuple[MatrixView, MatrixView, MatrixView, MatrixView]:
    """Split an even-dimensioned view into (top-left, top-right, bottom-left,
    bottom-right) quadrant views that tile it exactly."""
    m = as_view(m)
    if m.rows % 2 or m.cols % 2:
        raise DimensionError(f"quadrants need even extents, got {m.rows}x{m.cols}")
    hr, hc = m.rows // 2, m.cols // 2
    return (
        m.subview(0, 0, hr, hc),
        m.subview(0, hc, hr, hc),
        m.subview(hr, 0, hr, hc),
        m.subview(hr, hc, hr, hc),
    )


def block_add(a: MatrixView, b: MatrixView, dst: MatrixView, sign: int = 1,
              counter: OpCounter | None = None) -> None:
    """dst = a + sign*b elementwise; dst may alias a or b exactly."""
    a, b, dst = as_view(a), as_view(b), as_view(dst)
    if not (a.rows == b.rows == dst.rows and a.cols == b.cols == dst.cols):
        raise DimensionError(
            f"block_add extents differ: {a.rows}x{a.cols}, {b.rows}x{b.cols}, "
            f"{dst.rows}x{dst.cols}"
        )
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if sign == 1:
        np.add(a.arr, b.arr, out=dst.arr)
    else:
        np.subtract(a.arr, b.arr, out=dst.arr)
    if counter is not None:
        counter.adds += a.rows * a.cols


def next_pow2(n: int) -> int:
    """Smallest power of two >= n (and >= 1)."""
    if n <= 1:
        return 1
    return 1 << (n - 1).bit_length()


def pad_to_pow2(a: Matrix) -> Matrix:
    """Zero-pad to a square power-of-two order holding ``a`` in the top-left.

    Already-conforming matrices come back as an independent copy.
    """
    m = next_pow2(max(a.rows, a.cols))
    if a.rows == a.cols == m:
        return a.copy()
    out = np.zeros((m, m), dtype=a.arr.dtype)
    out[:a.rows, :a.cols] = a.arr
    return Matrix(out)


def unpad(c: Matrix, rows: int, cols: int) -> Matrix:
    """Top-left rows x cols block of ``c`` as a new matrix."""
    if rows > c.rows or cols > c.cols:
        raise DimensionError(
            f"cannot take {rows}x{cols} from {c.rows}x{c.cols}"
        )
    return Matrix(c.arr[:rows, :cols].copy())


def max_abs_diff(a, b) -> float:
    """Largest absolute elementwise difference between two equal-shape matrices."""
    a, b = as_view(a), as_view(b)
    if a.rows != b.rows or a.cols != b.cols:
        raise DimensionError(
            f"extent mismatch: {a.rows}x{a.cols} vs {b.rows}x{b.cols}"
        )
    d = np.abs(a.arr.astype(np.float64, copy=False) - b.arr.astype(np.float64, copy=False))
    return float(d.max())


def views_overlap(a: MatrixView, b: MatrixView) -> bool:
    return np.shares_memory(a.arr, b.arr)


# --- text matrix format -------------------------------------------------
#
# First line: "rows cols". Then rows lines of cols whitespace-separated
# scalars. Integer matrices are written in full precision, reals with 17
# significant digits.

def write_matrix(m: Matrix, f) -> None:
    close = False
    if isinstance(f, (str, bytes)):
        f = open(f, "w")
        close = True
    try:
        f.write(f"{m.rows} {m.cols}\n")
        is_int = np.issubdtype(m.arr.dtype, np.integer)
        for row in m.arr:
            if is_int:
                f.write(" ".join(str(int(x)) for x in row) + "\n")
            else:
                f.write(" ".join(f"{float(x):.17g}" for x in row) + "\n")
    finally:
        if close:
            f.close()


def matrix_to_text(m: Matrix) -> str:
    buf = io.StringIO()
    write_matrix(m, buf)
    return buf.getvalue()


def read_matrix(f) -> Matrix:
    """Parse the text format; integer-only files load as int64, else float64."""
    close = False
    if isinstance(f, (str, bytes)):
        f = open(f, "r")
        close = True
    try:
        text = f.read()
    finally:
        if close:
            f.close()
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("matrix file is missing the 'rows cols' header")
    try:
        rows, cols = int(tokens[0]), int(tokens[1])
    except ValueError as e:
        raise ValueError(f"bad matrix header {tokens[:2]!r}") from e
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix extents must be positive, got {rows}x{cols}")
    body = tokens[2:]
    if len(body) != rows * cols:
        raise ValueError(
            f"expected {rows * cols} values for a {rows}x{cols} matrix, got {len(body)}"
        )
    try:
        values = [int(t) for t in body]
        dtype = np.int64
    except ValueError:
        try:
            values = [float(t) for t in body]
        except ValueError as e:
            raise ValueError("matrix file contains a non-numeric value") from e
        dtype = np.float64
    return Matrix(np.array(values, dtype=dtype).reshape(rows, cols))
