"""Divide-and-conquer matrix multiplication kernels, memory-lean schedules,
hybrid cutoff variants, operation counting, and a benchmark CLI."""

from .core import (
    AliasError,
    DimensionError,
    Matrix,
    MatrixView,
    block_add,
    max_abs_diff,
    pad_to_pow2,
    quadrants,
    read_matrix,
    unpad,
    write_matrix,
)
from .counters import OpCounter
from .hybrid import (
    VariantSpec,
    cutoff_naive_preferred,
    get_variant,
    multiply,
    preset_names,
    variant_catalog,
)
from .kernels import (
    BasePolicy,
    naive_mul,
    strassen_mul,
    unrolled_base,
    winograd_block_mul,
    winograd_knuth_mul,
)
from .metrics import BenchRecord, bench_run, predicted_buffers, predicted_ops, random_matrix
from .schedules import (
    IN_PLACE_STEPS,
    TWO_TEMP_STEPS,
    LegalityReport,
    ScheduleError,
    ScheduleStep,
    in_place_winograd,
    two_temp_winograd,
    validate_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "AliasError", "BasePolicy", "BenchRecord", "DimensionError",
    "IN_PLACE_STEPS", "LegalityReport", "Matrix", "MatrixView", "OpCounter",
    "ScheduleError", "ScheduleStep", "TWO_TEMP_STEPS", "VariantSpec",
    "bench_run", "block_add", "cutoff_naive_preferred", "get_variant",
    "in_place_winograd", "max_abs_diff", "multiply", "naive_mul",
    "pad_to_pow2", "predicted_buffers", "predicted_ops", "preset_names",
    "quadrants", "random_matrix", "read_matrix", "strassen_mul",
    "two_temp_winograd", "unpad", "unrolled_base", "validate_schedule",
    "variant_catalog", "winograd_block_mul", "winograd_knuth_mul",
    "write_matrix",
]
