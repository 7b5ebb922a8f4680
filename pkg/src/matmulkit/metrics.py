"""Closed-form operation counts, random operand generation, and timed runs.

Counts are modeled, not sampled from the language runtime: they come from
the same recurrences the kernels tally while executing, so a measured
counter and ``predicted_ops`` must agree exactly for every kernel, policy,
and power-of-two order.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from .counters import OpCounter
from .hybrid import DEFAULT_CUTOFF, get_variant, multiply
from .core import Matrix
from .kernels import BasePolicy, SCALAR_ONLY, model_cost
from .schedules import IN_PLACE, TWO_TEMP, schedule_model_cost


class ParameterError(ValueError):
    """Unsupported kernel/policy combination or malformed sweep parameters."""


_KERNEL_IDS = ("naive", "strassen", "winograd-knuth", "winograd-block",
               "two-temp", "in-place")


def _full_cost(kernel: str, policy: BasePolicy | None, order: int) -> tuple[int, int, int, int]:
    if order < 1 or order & (order - 1):
        raise ParameterError(f"order must be a power of two, got {order}")
    if kernel == "naive":
        if policy is not None:
            raise ParameterError("the naive kernel takes no base policy")
        return (order ** 3, order * order * (order - 1), 0, 0)
    if policy is None:
        policy = SCALAR_ONLY
    if kernel in ("strassen", "winograd-knuth", "winograd-block"):
        return model_cost(kernel, policy, order)
    if kernel == "two-temp":
        return schedule_model_cost(TWO_TEMP, policy, order)
    if kernel == "in-place":
        return schedule_model_cost(IN_PLACE, policy, order)
    raise ParameterError(f"unknown kernel {kernel!r}; expected one of {_KERNEL_IDS}")


def predicted_ops(kernel: str, policy: BasePolicy | None, order: int) -> tuple[int, int]:
    """Closed-form (mults, adds) for one multiplication at the given order."""
    m, a, _, _ = _full_cost(kernel, policy, order)
    return m, a


def predicted_buffers(kernel: str, policy: BasePolicy | None, order: int) -> tuple[int, int]:
    """Closed-form (buffer allocation events, peak live aux elements)."""
    _, _, b, p = _full_cost(kernel, policy, order)
    return b, p


def random_matrix(rng: np.random.Generator, rows: int, cols: int,
                  exact: bool = False) -> Matrix:
    """Seeded operand: integers in [-8, 8] when exact, reals in [-1, 1)
    otherwise. The generator is numpy's default PCG64."""
    if exact:
        return Matrix(rng.integers(-8, 9, size=(rows, cols), dtype=np.int64))
    return Matrix(rng.uniform(-1.0, 1.0, size=(rows, cols)))


@dataclass(frozen=True)
class BenchRecord:
    """One benchmark point: a preset at one order."""

    algo: str
    order: int
    reps: int
    min_time: float
    median_time: float
    mults: int
    adds: int
    temp_buffers: int
    peak_live_elements: int
    seed: int

    CSV_HEADER = ("algo,order,reps,min_time_s,median_time_s,"
                  "mults,adds,temp_buffers,peak_live_elements,seed")

    def csv_row(self) -> str:
        return (f"{self.algo},{self.order},{self.reps},{self.min_time:.9f},"
                f"{self.median_time:.9f},{self.mults},{self.adds},"
                f"{self.temp_buffers},{self.peak_live_elements},{self.seed}")


def bench_run(algo: str, orders, reps: int, seed: int, exact: bool = False,
              cutoff: int = DEFAULT_CUTOFF) -> list[BenchRecord]:
    """Time one preset over a sweep of orders with seeded operands.

    Every repetition is instrumented; operation counts must be identical
    across repetitions (they are deterministic) and a mismatch raises.
    """
    if reps < 1:
        raise ParameterError(f"reps must be >= 1, got {reps}")
    spec = get_variant(algo, cutoff=cutoff)
    rng = np.random.default_rng(seed)
    records = []
    for order in orders:
        a = random_matrix(rng, order, order, exact)
        b = random_matrix(rng, order, order, exact)
        times = []
        counters = []
        for _ in range(reps):
            counter = OpCounter()
            t0 = time.perf_counter()
            multiply(a, b, spec, counter)
            times.append(time.perf_counter() - t0)
            counters.append(counter.snapshot())
        if len(set(counters)) != 1:
            raise AssertionError(
                f"non-deterministic op counts for {algo} at order {order}: {counters}"
            )
        mults, adds, bufs, peak = counters[0]
        records.append(BenchRecord(
            algo=algo, order=order, reps=reps,
            min_time=min(times), median_time=statistics.median(times),
            mults=mults, adds=adds, temp_buffers=bufs,
            peak_live_elements=peak, seed=seed,
        ))
    return records
