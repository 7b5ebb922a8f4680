"""The four multiplication algorithms: naive, Strassen, and the two
Strassen-Winograd forms, each parameterized by a base-case policy.

Every divide-and-conquer kernel is described once as a per-level step table
(block sums, recursive products, output combinations). One interpreter runs
the tables on numpy quadrant views; the same tables feed the straight-line
base-kernel generator and the closed-form cost model, so counts, unrolled
kernels, and the recursion can never drift apart.

Temporaries in these kernels are deliberately allocated fresh per call (one
buffer per block sum, product, and intermediate combination) and released at
call exit; the memory-lean variants live in schedules.py.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AliasError, DimensionError, as_view
from .counters import OpCounter
from .microkernels import generate_straightline


@dataclass(frozen=True)
class BasePolicy:
    """Where a divide-and-conquer kernel stops recursing.

    kind "scalar": recurse down to 1x1 scalar products.
    kind "unrolled": switch to the straight-line base kernel at ``order``.
    kind "naive-cutoff": switch to the naive method at order <= ``threshold``.
    """

    kind: str
    order: int = 1
    threshold: int = 12

    def __post_init__(self):
        if self.kind not in ("scalar", "unrolled", "naive-cutoff"):
            raise ValueError(f"unknown base policy kind {self.kind!r}")
        if self.kind == "unrolled" and self.order not in (1, 2, 4, 8):
            raise ValueError(f"unrolled order must be 1, 2, 4, or 8, got {self.order}")
        if self.kind == "naive-cutoff" and self.threshold < 1:
            raise ValueError(f"cutoff threshold must be >= 1, got {self.threshold}")

    @classmethod
    def scalar_only(cls) -> "BasePolicy":
        return cls("scalar")

    @classmethod
    def unrolled_up_to(cls, order: int) -> "BasePolicy":
        return cls("unrolled", order=order)

    @classmethod
    def naive_cutoff(cls, threshold: int = 12) -> "BasePolicy":
        return cls("naive-cutoff", threshold=threshold)


SCALAR_ONLY = BasePolicy.scalar_only()

# Step tables. Each row is (op, dst, lhs, rhs) with op in {add, sub, mul};
# dst names starting with C are quadrants of the output, everything else not
# named A*/B*/C* is a per-call temporary.

STRASSEN_STEPS = (
    ("add", "SA1", "A11", "A22"),
    ("add", "SB1", "B11", "B22"),
    ("mul", "P1", "SA1", "SB1"),
    ("add", "SA2", "A21", "A22"),
    ("mul", "P2", "SA2", "B11"),
    ("sub", "SB3", "B12", "B22"),
    ("mul", "P3", "A11", "SB3"),
    ("sub", "SB4", "B21", "B11"),
    ("mul", "P4", "A22", "SB4"),
    ("add", "SA5", "A11", "A12"),
    ("mul", "P5", "SA5", "B22"),
    ("sub", "SA6", "A21", "A11"),
    ("add", "SB6", "B11", "B12"),
    ("mul", "P6", "SA6", "SB6"),
    ("sub", "SA7", "A12", "A22"),
    ("add", "SB7", "B21", "B22"),
    ("mul", "P7", "SA7", "SB7"),
    ("add", "C11", "P1", "P4"),
    ("sub", "C11", "C11", "P5"),
    ("add", "C11", "C11", "P7"),
    ("add", "C12", "P3", "P5"),
    ("add", "C21", "P2", "P4"),
    ("add", "C22", "P1", "P3"),
    ("sub", "C22", "C22", "P2"),
    ("add", "C22", "C22", "P6"),
)

# Block form of the Winograd variant: eight sums, seven products, seven
# combinations; the four corner combinations land directly in C.
WINOGRAD_BLOCK_STEPS = (
    ("add", "S1", "A21", "A22"),
    ("sub", "S2", "S1", "A11"),
    ("sub", "S3", "A11", "A21"),
    ("sub", "T1", "B12", "B11"),
    ("sub", "T2", "B22", "T1"),
    ("sub", "T3", "B22", "B12"),
    ("sub", "S4", "A12", "S2"),
    ("sub", "T4", "T2", "B21"),
    ("mul", "P1", "A11", "B11"),
    ("mul", "P2", "A12", "B21"),
    ("mul", "P3", "S4", "B22"),
    ("mul", "P4", "A22", "T4"),
    ("mul", "P5", "S1", "T1"),
    ("mul", "P6", "S2", "T2"),
    ("mul", "P7", "S3", "T3"),
    ("add", "C11", "P1", "P2"),
    ("add", "U2", "P1", "P6"),
    ("add", "U3", "U2", "P7"),
    ("add", "U4", "U2", "P5"),
    ("add", "C12", "U4", "P3"),
    ("sub", "C21", "U3", "P4"),
    ("add", "C22", "U3", "P5"),
)

# Knuth's arrangement of the Winograd variant. With the left operand split
# into quadrants (A11 A12 / A21 A22) and the right into (B11 B12 / B21 B22):
#   u = (A21-A11)(B12-B22), v = (A21+A22)(B12-B11),
#   w = A11*B11 + (A21+A22-A11)(B11+B22-B12),
#   C11 = A11*B11 + A12*B21, C12 = w + v + (A11+A12-A21-A22)*B22,
#   C21 = w + u + A22*(B21+B12-B11-B22), C22 = w + u + v.
# The first product (A11*B11) is computed once and reused.
WINOGRAD_KNUTH_STEPS = (
    ("add", "SCD", "A21", "A22"),
    ("sub", "SCDA", "SCD", "A11"),
    ("sub", "TCD", "B12", "B22"),
    ("sub", "TADC", "B11", "TCD"),
    ("sub", "SCA", "A21", "A11"),
    ("sub", "TCA", "B12", "B11"),
    ("add", "SAB", "A11", "A12"),
    ("sub", "SABCD", "SAB", "SCD"),
    ("sub", "TBCAD", "B21", "TADC"),
    ("mul", "M1", "A11", "B11"),
    ("mul", "M2", "A12", "B21"),
    ("mul", "MU", "SCA", "TCD"),
    ("mul", "MV", "SCD", "TCA"),
    ("mul", "MW", "SCDA", "TADC"),
    ("mul", "M6", "SABCD", "B22"),
    ("mul", "M7", "A22", "TBCAD"),
    ("add", "W", "M1", "MW"),
    ("add", "WU", "W", "MU"),
    ("add", "C11", "M1", "M2"),
    ("add", "C12", "W", "MV"),
    ("add", "C12", "C12", "M6"),
    ("add", "C21", "WU", "M7"),
    ("add", "C22", "WU", "MV"),
)

# Variant with the first product recomputed for C11 (an extra recursive call
# per level), for benchmark parity with implementations that do so.
assert WINOGRAD_KNUTH_STEPS[18] == ("add", "C11", "M1", "M2")
WINOGRAD_KNUTH_8CALL_STEPS = WINOGRAD_KNUTH_STEPS[:18] + (
    ("mul", "M1B", "A11", "B11"),
    ("add", "C11", "M1B", "M2"),
) + WINOGRAD_KNUTH_STEPS[19:]

_C_QUADS = frozenset({"C11", "C12", "C21", "C22"})
_INPUT_QUADS = frozenset({"A11", "A12", "A21", "A22", "B11", "B12", "B21", "B22"})


class KernelDef:
    """One divide-and-conquer kernel: its step table plus derived data."""

    def __init__(self, name: str, steps):
        self.name = name
        self.steps = tuple(steps)
        self.adds_per_level = sum(1 for op, *_ in self.steps if op != "mul")
        self.muls_per_level = sum(1 for op, *_ in self.steps if op == "mul")
        self.temp_names = tuple(dict.fromkeys(
            dst for _, dst, _, _ in self.steps
            if dst not in _C_QUADS and dst not in _INPUT_QUADS
        ))
        self._micro: dict[int, object] = {}

    def micro(self, order: int):
        fn = self._micro.get(order)
        if fn is None:
            fn = generate_straightline(self.steps, order, f"{self.name}_{order}x{order}".replace("-", "_"))
            self._micro[order] = fn
        return fn


KERNEL_DEFS = {
    "strassen": KernelDef("strassen", STRASSEN_STEPS),
    "winograd-block": KernelDef("winograd-block", WINOGRAD_BLOCK_STEPS),
    "winograd-knuth": KernelDef("winograd-knuth", WINOGRAD_KNUTH_STEPS),
    "winograd-knuth-8call": KernelDef("winograd-knuth-8call", WINOGRAD_KNUTH_8CALL_STEPS),
}

# Execution detail, not semantics: recursion below this order runs the
# generated straight-line kernel instead of call-per-level interpretation.
# Counts are unaffected (the cost model tallies what the literal recursion
# does); set to 1 to force fully literal recursion.
DEFAULT_MICRO_ORDER = 8

_MODEL_CACHE: dict = {}


def model_cost(kernel: str, policy: BasePolicy, n: int) -> tuple[int, int, int, int]:
    """(mults, adds, buffer events, peak live aux elements) of one kernel run.

    Models the literal sequential recursion: each call allocates one h x h
    buffer per temporary in table order and frees them all at exit; leaf
    behavior follows the policy.
    """
    return _model_cost(KERNEL_DEFS[kernel], policy, n)


def _model_cost(kdef: KernelDef, policy: BasePolicy, n: int) -> tuple[int, int, int, int]:
    key = (kdef.name, policy, n)
    hit = _MODEL_CACHE.get(key)
    if hit is not None:
        return hit
    if n == 1:
        res = (1, 0, 0, 0)
    elif policy.kind == "naive-cutoff" and n <= policy.threshold:
        res = (n * n * n, n * n * (n - 1), 0, 0)
    elif policy.kind == "unrolled" and n <= policy.order:
        m, a, _, _ = _model_cost(kdef, SCALAR_ONLY, n)
        res = (m, a, 0, 0)
    else:
        h = n // 2
        cm, ca, cb, cp = _model_cost(kdef, policy, h)
        hh = h * h
        live = 0
        peak = 0
        seen = set()
        for op, dst, _, _ in kdef.steps:
            if dst not in _C_QUADS and dst not in seen:
                seen.add(dst)
                live += hh
                if live > peak:
                    peak = live
            if op == "mul" and live + cp > peak:
                peak = live + cp
        calls = kdef.muls_per_level
        res = (
            calls * cm,
            calls * ca + kdef.adds_per_level * hh,
            calls * cb + len(kdef.temp_names),
            peak,
        )
    _MODEL_CACHE[key] = res
    return res


def run_micro(fn, a: np.ndarray, b: np.ndarray, c: np.ndarray, n: int) -> None:
    fa = [x for row in a.tolist() for x in row]
    fb = [x for row in b.tolist() for x in row]
    c[:, :] = np.asarray(fn(fa, fb), dtype=c.dtype).reshape(n, n)


def _naive_arrays(a: np.ndarray, b: np.ndarray, c: np.ndarray, counter: OpCounter) -> None:
    m, n = a.shape
    _, k = b.shape
    if c.dtype == np.result_type(a, b):
        np.matmul(a, b, out=c)
    else:
        c[:, :] = a @ b
    counter.mults += m * n * k
    counter.adds += m * k * (n - 1) if n >= 1 else 0


def _dc(kdef: KernelDef, a, b, c, n: int, policy: BasePolicy,
        counter: OpCounter, micro_order: int) -> None:
    if n == 1:
        c[0, 0] = a[0, 0] * b[0, 0]
        counter.mults += 1
        return
    kind = policy.kind
    if kind == "naive-cutoff" and n <= policy.threshold:
        _naive_arrays(a, b, c, counter)
        return
    if kind == "unrolled" and n <= policy.order:
        run_micro(kdef.micro(n), a, b, c, n)
        m, ad, _, _ = _model_cost(kdef, SCALAR_ONLY, n)
        counter.absorb(m, ad, 0, 0)
        return
    if kind == "scalar" and n <= micro_order:
        run_micro(kdef.micro(n), a, b, c, n)
        counter.absorb(*_model_cost(kdef, SCALAR_ONLY, n))
        return
    h = n // 2
    env = {
        "A11": a[:h, :h], "A12": a[:h, h:], "A21": a[h:, :h], "A22": a[h:, h:],
        "B11": b[:h, :h], "B12": b[:h, h:], "B21": b[h:, :h], "B22": b[h:, h:],
        "C11": c[:h, :h], "C12": c[:h, h:], "C21": c[h:, :h], "C22": c[h:, h:],
    }
    dtype = np.result_type(a, b)
    hh = h * h
    temps = 0
    adds_local = 0
    for op, dst, x, y in kdef.steps:
        lhs = env[x]
        rhs = env[y]
        d = env.get(dst)
        if d is None:
            d = env[dst] = np.empty((h, h), dtype=dtype)
            counter.alloc(hh)
            temps += 1
        if op == "add":
            np.add(lhs, rhs, out=d)
            adds_local += 1
        elif op == "sub":
            np.subtract(lhs, rhs, out=d)
            adds_local += 1
        else:
            _dc(kdef, lhs, rhs, d, h, policy, counter, micro_order)
    counter.adds += adds_local * hh
    counter.free(temps * hh)


def _check_square_pow2(a, b, c):
    n = a.rows
    if not (a.rows == a.cols == b.rows == b.cols == c.rows == c.cols):
        raise DimensionError(
            f"operands must be square of one order, got {a.rows}x{a.cols}, "
            f"{b.rows}x{b.cols}, {c.rows}x{c.cols}"
        )
    if n & (n - 1):
        raise DimensionError(f"order {n} is not a power of two; pad inputs first")
    return n


def _check_dst_disjoint(a, b, c):
    if np.shares_memory(c.arr, a.arr) or np.shares_memory(c.arr, b.arr):
        raise AliasError("output view must not alias an input view")


def _run_dc(kernel: str, a, b, c, policy, counter, micro_order) -> OpCounter:
    a, b, c = as_view(a), as_view(b), as_view(c)
    n = _check_square_pow2(a, b, c)
    _check_dst_disjoint(a, b, c)
    if policy is None:
        policy = SCALAR_ONLY
    if counter is None:
        counter = OpCounter()
    if micro_order is None:
        micro_order = DEFAULT_MICRO_ORDER
    micro_order = max(1, min(micro_order, 8))
    _dc(KERNEL_DEFS[kernel], a.arr, b.arr, c.arr, n, policy, counter, micro_order)
    return counter


def naive_mul(a, b, c, counter: OpCounter | None = None) -> OpCounter:
    """c = a x b by the direct triple-loop method (vectorized execution).

    Counts m*n*k multiplications and m*k*(n-1) additions: each output entry
    is a sum of n products whose first term initializes the accumulator.
    """
    a, b, c = as_view(a), as_view(b), as_view(c)
    if a.cols != b.rows:
        raise DimensionError(f"inner dimensions differ: {a.cols} vs {b.rows}")
    if c.rows != a.rows or c.cols != b.cols:
        raise DimensionError(
            f"output must be {a.rows}x{b.cols}, got {c.rows}x{c.cols}"
        )
    _check_dst_disjoint(a, b, c)
    if counter is None:
        counter = OpCounter()
    _naive_arrays(a.arr, b.arr, c.arr, counter)
    return counter


def strassen_mul(a, b, c, policy: BasePolicy | None = None,
                 counter: OpCounter | None = None,
                 micro_order: int | None = None) -> OpCounter:
    """c = a x b with seven recursive products and eighteen block additions
    per level."""
    return _run_dc("strassen", a, b, c, policy, counter, micro_order)


def winograd_block_mul(a, b, c, policy: BasePolicy | None = None,
                       counter: OpCounter | None = None,
                       micro_order: int | None = None) -> OpCounter:
    """c = a x b via the 22-operation block form of the Winograd variant
    (seven products, fifteen block additions per level)."""
    return _run_dc("winograd-block", a, b, c, policy, counter, micro_order)


def winograd_knuth_mul(a, b, c, policy: BasePolicy | None = None,
                       counter: OpCounter | None = None,
                       micro_order: int | None = None,
                       recompute_first_product: bool = False) -> OpCounter:
    """c = a x b via Knuth's u/v/w arrangement of the Winograd variant.

    The first block product is shared between two uses, giving seven
    recursive calls per level; ``recompute_first_product`` restores the
    eight-call behavior of implementations that evaluate it twice.
    """
    kernel = "winograd-knuth-8call" if recompute_first_product else "winograd-knuth"
    return _run_dc(kernel, a, b, c, policy, counter, micro_order)


def unrolled_base(a, b, c, order: int, counter: OpCounter | None = None) -> OpCounter:
    """Fully unrolled block-Winograd product at order 2, 4, or 8.

    Same results and operation counts as winograd_block_mul recursing to
    scalars, with the recursion expanded into straight-line code.
    """
    if order not in (2, 4, 8):
        raise DimensionError(f"unrolled base kernels exist for orders 2, 4, 8; got {order}")
    a, b, c = as_view(a), as_view(b), as_view(c)
    n = _check_square_pow2(a, b, c)
    if n != order:
        raise DimensionError(f"operands are order {n}, expected {order}")
    _check_dst_disjoint(a, b, c)
    if counter is None:
        counter = OpCounter()
    kdef = KERNEL_DEFS["winograd-block"]
    run_micro(kdef.micro(order), a.arr, b.arr, c.arr, order)
    m, ad, _, _ = _model_cost(kdef, SCALAR_ONLY, order)
    counter.absorb(m, ad, 0, 0)
    return counter
