"""Named algorithm variants, the naive/recursive cutoff rule, and the
shape-agnostic multiply driver.

The cutoff rule compares the arithmetic cost of the naive method against one
level of divide-and-conquer: naive wins when m*k*n <= 4*(m*k + k*n + m*n),
which for square matrices means order <= 12. The "mod" variants stop the
recursion at unrolled 8x8 base kernels; the "mod2" variants hand orders
<= 12 to the naive method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DimensionError, Matrix, as_view, next_pow2, unpad
from .counters import OpCounter
from .kernels import (
    BasePolicy,
    naive_mul,
    strassen_mul,
    winograd_block_mul,
    winograd_knuth_mul,
)
from .schedules import in_place_winograd, two_temp_winograd

KERNEL_NAMES = ("naive", "strassen", "winograd-knuth", "winograd-block",
                "two-temp", "in-place")

DEFAULT_CUTOFF = 12
DEFAULT_UNROLL = 8


def cutoff_naive_preferred(m: int, k: int, n: int) -> bool:
    """True when the naive method is the better choice for an m x k times
    k x n product."""
    if m < 1 or k < 1 or n < 1:
        raise ValueError("dimensions must be >= 1")
    return m * k * n <= 4 * (m * k + k * n + m * n)


@dataclass(frozen=True)
class VariantSpec:
    """Kernel choice plus base-case policy plus padding behavior."""

    kernel: str
    base: BasePolicy | None = None
    pad: bool = True

    def __post_init__(self):
        if self.kernel not in KERNEL_NAMES:
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.kernel == "naive":
            if self.base is not None:
                raise ValueError("naive kernel takes no base policy")
            if self.pad:
                raise ValueError("naive kernel does not pad")
        elif self.base is None:
            raise ValueError(f"kernel {self.kernel!r} needs a base policy")


def variant_catalog(cutoff: int = DEFAULT_CUTOFF,
                    unroll: int = DEFAULT_UNROLL) -> list[tuple[str, VariantSpec]]:
    """The fixed list of named presets accepted by the CLI."""
    scalar = BasePolicy.scalar_only()
    unrolled = BasePolicy.unrolled_up_to(unroll)
    mod2 = BasePolicy.naive_cutoff(cutoff)
    return [
        ("naive", VariantSpec("naive", None, pad=False)),
        ("strassen", VariantSpec("strassen", scalar)),
        ("winograd-knuth", VariantSpec("winograd-knuth", scalar)),
        ("winograd-block", VariantSpec("winograd-block", scalar)),
        ("strassen-mod", VariantSpec("strassen", unrolled)),
        ("winograd-mod", VariantSpec("winograd-block", unrolled)),
        ("strassen-mod2", VariantSpec("strassen", mod2)),
        ("winograd-mod2", VariantSpec("winograd-block", mod2)),
        ("two-temp", VariantSpec("two-temp", scalar)),
        ("in-place", VariantSpec("in-place", scalar)),
        ("two-temp-mod", VariantSpec("two-temp", mod2)),
        ("in-place-mod", VariantSpec("in-place", mod2)),
    ]


def preset_names() -> list[str]:
    return [name for name, _ in variant_catalog()]


def get_variant(name: str, cutoff: int = DEFAULT_CUTOFF) -> VariantSpec:
    for preset, spec in variant_catalog(cutoff=cutoff):
        if preset == name:
            return spec
    raise KeyError(f"unknown preset {name!r}; valid presets: {', '.join(preset_names())}")


_KERNEL_FUNCS = {
    "strassen": strassen_mul,
    "winograd-knuth": winograd_knuth_mul,
    "winograd-block": winograd_block_mul,
    "two-temp": two_temp_winograd,
    "in-place": in_place_winograd,
}


def multiply(a: Matrix, b: Matrix, spec: VariantSpec,
             counter: OpCounter | None = None, trace=None) -> Matrix:
    """C = A x B for any compatible shapes, per the given variant.

    Recursive variants pad non-conforming shapes to a square power-of-two
    order and unpad the result. Caller matrices are never mutated: the
    in-place kernel runs on staged copies. Staging buffers are not counted
    as kernel temporaries. ``trace``, for the schedule kernels, receives the
    rendered top-level step sequence.
    """
    av, bv = as_view(a), as_view(b)
    if av.cols != bv.rows:
        raise DimensionError(f"inner dimensions differ: {av.cols} vs {bv.rows}")
    if counter is None:
        counter = OpCounter()
    m, k, n = av.rows, av.cols, bv.cols
    dtype = np.result_type(av.arr, bv.arr)
    if spec.kernel == "naive":
        c = Matrix(np.empty((m, n), dtype=dtype))
        naive_mul(av, bv, c, counter)
        return c
    fn = _KERNEL_FUNCS[spec.kernel]
    kwargs = {}
    if trace is not None and spec.kernel in ("two-temp", "in-place"):
        kwargs["trace"] = trace
    order = max(m, k, n)
    conforming = (m == k == n == next_pow2(order))
    if not conforming and not spec.pad:
        raise DimensionError(
            f"shape ({m}, {k}, {n}) needs padding but the variant does not pad"
        )
    if conforming and spec.kernel != "in-place":
        c = Matrix(np.empty((n, n), dtype=dtype))
        fn(av, bv, c, spec.base, counter, **kwargs)
        return c
    # stage padded (or, for in-place, protective) copies at the common order
    target = next_pow2(order)
    pa = _pad_to_order(av.arr, target)
    pb = _pad_to_order(bv.arr, target)
    c = Matrix(np.empty((target, target), dtype=dtype))
    fn(pa, pb, c, spec.base, counter, **kwargs)
    return unpad(c, m, n)


def _pad_to_order(arr: np.ndarray, order: int) -> Matrix:
    out = np.zeros((order, order), dtype=arr.dtype)
    out[:arr.shape[0], :arr.shape[1]] = arr
    return Matrix(out)
