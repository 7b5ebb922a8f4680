"""Memory-lean orderings of the block-Winograd product, embedded as data.

Two 22-step schedules are built in. The two-temporary schedule stores every
intermediate in one of two scratch buffers X and Y or in a quadrant of C and
leaves the inputs untouched. The in-place schedule stores intermediates in
quadrants of A, B, and C, allocates nothing, and destroys the inputs.

A schedule is a sequence of steps naming the value each one computes and the
storage location it lands in. ``validate_schedule`` checks symbolically that
no step reads a location after the value it needs was overwritten (including
operand clobbering by in-place recursive products); execution interprets the
same tables, so what runs is exactly what was validated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AliasError, DimensionError, as_view
from .counters import OpCounter
from .kernels import (
    SCALAR_ONLY,
    BasePolicy,
    KERNEL_DEFS,
    _model_cost,
    _naive_arrays,
    run_micro,
)

_QUAD_LOCS = ("A11", "A12", "A21", "A22", "B11", "B12", "B21", "B22",
              "C11", "C12", "C21", "C22")
_FINAL_EXPECTED = {"C11": "U1", "C12": "U5", "C21": "U6", "C22": "U7"}
_GARBAGE = "<garbage>"


class ScheduleError(ValueError):
    """Schedule step list is structurally malformed."""


@dataclass(frozen=True)
class ScheduleStep:
    """One block operation: ``symbol = lhs op rhs``, stored at ``store``."""

    index: int
    symbol: str
    op: str        # "+", "-", or "*" (recursive product)
    lhs: str
    rhs: str
    store: str

    def render(self) -> str:
        return f"step {self.index}: {self.symbol} = {self.lhs}{self.op}{self.rhs} -> {self.store}"


def _steps(rows) -> tuple[ScheduleStep, ...]:
    return tuple(ScheduleStep(i + 1, *row) for i, row in enumerate(rows))


# Ordem of operations using two scratch buffers X and Y; inputs read-only.
TWO_TEMP_STEPS = _steps([
    ("S3", "-", "A11", "A21", "X"),
    ("T3", "-", "B22", "B12", "Y"),
    ("P7", "*", "S3", "T3", "C21"),
    ("S1", "+", "A21", "A22", "X"),
    ("T1", "-", "B12", "B11", "Y"),
    ("P5", "*", "S1", "T1", "C22"),
    ("S2", "-", "S1", "A11", "X"),
    ("T2", "-", "B22", "T1", "Y"),
    ("P6", "*", "S2", "T2", "C12"),
    ("S4", "-", "A12", "S2", "X"),
    ("P3", "*", "S4", "B22", "C11"),
    ("P1", "*", "A11", "B11", "X"),
    ("U2", "+", "P1", "P6", "C12"),
    ("U3", "+", "U2", "P7", "C21"),
    ("U4", "+", "U2", "P5", "C12"),
    ("U7", "+", "U3", "P5", "C22"),
    ("U5", "+", "U4", "P3", "C12"),
    ("T4", "-", "T2", "B21", "Y"),
    ("P4", "*", "A22", "T4", "C11"),
    ("U6", "-", "U3", "P4", "C21"),
    ("P2", "*", "A12", "B21", "C11"),
    ("U1", "+", "P1", "P2", "C11"),
])

# Ordem of operations storing every intermediate in A, B, or C; no scratch,
# inputs destroyed.
IN_PLACE_STEPS = _steps([
    ("S3", "-", "A11", "A21", "C11"),
    ("S1", "+", "A21", "A22", "A21"),
    ("T1", "-", "B12", "B11", "C22"),
    ("T3", "-", "B22", "B12", "B12"),
    ("P7", "*", "S3", "T3", "C21"),
    ("S2", "-", "S1", "A11", "C12"),
    ("P1", "*", "A11", "B11", "C11"),
    ("T2", "-", "B22", "T1", "B11"),
    ("P5", "*", "S1", "T1", "A11"),
    ("T4", "-", "T2", "B21", "C22"),
    ("P4", "*", "A22", "T4", "A21"),
    ("S4", "-", "A12", "S2", "A22"),
    ("P6", "*", "S2", "T2", "C22"),
    ("U2", "+", "P1", "P6", "C22"),
    ("P2", "*", "A12", "B21", "C12"),
    ("U1", "+", "P1", "P2", "C11"),
    ("U4", "+", "U2", "P5", "C12"),
    ("U3", "+", "U2", "P7", "C22"),
    ("U6", "-", "U3", "P4", "C21"),
    ("U7", "+", "U3", "P5", "C22"),
    ("P3", "*", "S4", "B22", "A12"),
    ("U5", "+", "U4", "P3", "C12"),
])


@dataclass
class LegalityReport:
    """Outcome of the symbolic dataflow check."""

    ok: bool
    violation_index: int | None = None
    reason: str | None = None
    # per step, locations its operands were read from (for compilation/trace)
    bindings: tuple[tuple[str, str], ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def validate_schedule(steps, products_clobber_operands: bool = False) -> LegalityReport:
    """Symbolically run ``steps`` and check every read sees the value named.

    With ``products_clobber_operands`` the recursive products additionally
    destroy their operand locations, which is the contract the in-place
    recursion needs. Returns a passing report or the first violating step.
    """
    steps = tuple(steps)
    if len(steps) != 22:
        raise ScheduleError(f"expected a complete 22-step schedule, got {len(steps)} steps")
    if [s.index for s in steps] != list(range(1, 23)):
        raise ScheduleError("step indices must run 1..22 in order")
    if sum(1 for s in steps if s.op == "*") != 7:
        raise ScheduleError("schedule must contain exactly 7 recursive products")
    for s in steps:
        if s.op not in ("+", "-", "*"):
            raise ScheduleError(f"step {s.index} has unknown op {s.op!r}")
        if s.store not in _QUAD_LOCS and s.store not in ("X", "Y"):
            raise ScheduleError(f"step {s.index} stores to unknown location {s.store!r}")

    value: dict[str, str] = {loc: loc for loc in _QUAD_LOCS[:8]}
    where: dict[str, str] = dict(value)
    bindings: list[tuple[str, str]] = []

    def fail(step, reason):
        return LegalityReport(False, step.index, f"step {step.index}: {reason}",
                              tuple(bindings))

    for s in steps:
        locs = []
        for arg in (s.lhs, s.rhs):
            loc = where.get(arg)
            if loc is None:
                return fail(s, f"reads {arg} but no location currently holds it")
            locs.append(loc)
        lhs_loc, rhs_loc = locs
        if s.op == "*":
            if s.store in (lhs_loc, rhs_loc):
                return fail(s, f"product output {s.store} aliases an operand")
            if products_clobber_operands:
                for loc in {lhs_loc, rhs_loc}:
                    sym = value[loc]
                    value[loc] = _GARBAGE
                    if where.get(sym) == loc:
                        del where[sym]
        old = value.get(s.store)
        if old is not None and where.get(old) == s.store:
            del where[old]
        value[s.store] = s.symbol
        where[s.symbol] = s.store
        bindings.append((lhs_loc, rhs_loc))

    for loc, sym in _FINAL_EXPECTED.items():
        if value.get(loc) != sym:
            return LegalityReport(False, 22,
                                  f"final state: {loc} holds {value.get(loc)!r}, expected {sym}",
                                  tuple(bindings))
    return LegalityReport(True, bindings=tuple(bindings))


class Schedule:
    """A validated schedule with its compiled execution plan."""

    def __init__(self, name: str, steps: tuple[ScheduleStep, ...],
                 temp_locations: tuple[str, ...], clobbers_inputs: bool):
        self.name = name
        self.steps = steps
        self.temp_locations = temp_locations
        self.clobbers_inputs = clobbers_inputs
        report = validate_schedule(steps, products_clobber_operands=clobbers_inputs)
        if not report.ok:
            raise ScheduleError(f"built-in schedule {name} is illegal: {report.reason}")
        self.plan = tuple(
            (s, lhs_loc, rhs_loc)
            for s, (lhs_loc, rhs_loc) in zip(steps, report.bindings)
        )
        self.adds_per_level = sum(1 for s in steps if s.op != "*")


TWO_TEMP = Schedule("two-temp", TWO_TEMP_STEPS, ("X", "Y"), clobbers_inputs=False)
IN_PLACE = Schedule("in-place", IN_PLACE_STEPS, (), clobbers_inputs=True)

_WINOGRAD = KERNEL_DEFS["winograd-block"]
_SCHED_MODEL_CACHE: dict = {}


def schedule_model_cost(sched: Schedule, policy: BasePolicy, n: int) -> tuple[int, int, int, int]:
    """(mults, adds, buffer events, peak live aux elements) for one run."""
    key = (sched.name, policy, n)
    hit = _SCHED_MODEL_CACHE.get(key)
    if hit is not None:
        return hit
    if n == 1:
        res = (1, 0, 0, 0)
    elif policy.kind == "naive-cutoff" and n <= policy.threshold:
        res = (n * n * n, n * n * (n - 1), 0, 0)
    elif policy.kind == "unrolled" and n <= policy.order:
        m, a, _, _ = _model_cost(_WINOGRAD, SCALAR_ONLY, n)
        res = (m, a, 0, 0)
    else:
        h = n // 2
        hh = h * h
        cm, ca, cb, cp = schedule_model_cost(sched, policy, h)
        live = 0
        peak = 0
        seen = set()
        for s, _, _ in sched.plan:
            if s.store in sched.temp_locations and s.store not in seen:
                seen.add(s.store)
                live += hh
                if live > peak:
                    peak = live
            if s.op == "*" and live + cp > peak:
                peak = live + cp
        res = (7 * cm, 7 * ca + sched.adds_per_level * hh,
               7 * cb + len(sched.temp_locations), peak)
    _SCHED_MODEL_CACHE[key] = res
    return res


def _sched_dc(sched: Schedule, a, b, c, n: int, policy: BasePolicy,
              counter: OpCounter, micro_order: int, trace=None) -> None:
    if n == 1:
        c[0, 0] = a[0, 0] * b[0, 0]
        counter.mults += 1
        return
    kind = policy.kind
    if kind == "naive-cutoff" and n <= policy.threshold:
        _naive_arrays(a, b, c, counter)
        return
    if kind == "unrolled" and n <= policy.order:
        run_micro(_WINOGRAD.micro(n), a, b, c, n)
        m, ad, _, _ = _model_cost(_WINOGRAD, SCALAR_ONLY, n)
        counter.absorb(m, ad, 0, 0)
        return
    if kind == "scalar" and n <= micro_order and trace is None:
        run_micro(_WINOGRAD.micro(n), a, b, c, n)
        counter.absorb(*schedule_model_cost(sched, SCALAR_ONLY, n))
        return
    h = n // 2
    hh = h * h
    env = {
        "A11": a[:h, :h], "A12": a[:h, h:], "A21": a[h:, :h], "A22": a[h:, h:],
        "B11": b[:h, :h], "B12": b[:h, h:], "B21": b[h:, :h], "B22": b[h:, h:],
        "C11": c[:h, :h], "C12": c[:h, h:], "C21": c[h:, :h], "C22": c[h:, h:],
    }
    dtype = np.result_type(a, b)
    temps = 0
    adds_local = 0
    for s, lhs_loc, rhs_loc in sched.plan:
        if trace is not None:
            trace(s.render())
        lhs = env[lhs_loc]
        rhs = env[rhs_loc]
        d = env.get(s.store)
        if d is None:
            d = env[s.store] = np.empty((h, h), dtype=dtype)
            counter.alloc(hh)
            temps += 1
        if s.op == "+":
            np.add(lhs, rhs, out=d)
            adds_local += 1
        elif s.op == "-":
            np.subtract(lhs, rhs, out=d)
            adds_local += 1
        else:
            _sched_dc(sched, lhs, rhs, d, h, policy, counter, micro_order)
    counter.adds += adds_local * hh
    counter.free(temps * hh)


def _run_schedule(sched: Schedule, a, b, c, policy, counter, micro_order, trace):
    a, b, c = as_view(a), as_view(b), as_view(c)
    n = a.rows
    if not (a.rows == a.cols == b.rows == b.cols == c.rows == c.cols):
        raise DimensionError(
            f"operands must be square of one order, got {a.rows}x{a.cols}, "
            f"{b.rows}x{b.cols}, {c.rows}x{c.cols}"
        )
    if n & (n - 1):
        raise DimensionError(f"order {n} is not a power of two; pad inputs first")
    if np.shares_memory(c.arr, a.arr) or np.shares_memory(c.arr, b.arr):
        raise AliasError("output view must not alias an input view")
    if sched.clobbers_inputs and np.shares_memory(a.arr, b.arr):
        raise AliasError("in-place schedule requires mutually disjoint operands")
    if policy is None:
        policy = SCALAR_ONLY
    if counter is None:
        counter = OpCounter()
    if micro_order is None:
        micro_order = 8
    micro_order = max(1, min(micro_order, 8))
    aa, bb = a.arr, b.arr
    if not sched.clobbers_inputs:
        # read-only windows; any write through them is a bug and raises
        aa = aa.view()
        aa.flags.writeable = False
        bb = bb.view()
        bb.flags.writeable = False
    _sched_dc(sched, aa, bb, c.arr, n, policy, counter, micro_order, trace)
    return counter


def two_temp_winograd(a, b, c, policy: BasePolicy | None = None,
                      counter: OpCounter | None = None,
                      micro_order: int | None = None, trace=None) -> OpCounter:
    """c = a x b with exactly two scratch buffers per recursion level.

    Inputs are left untouched; the counter records two buffer allocation
    events per non-base call. ``trace`` receives the rendered text of each
    top-level step when given.
    """
    return _run_schedule(TWO_TEMP, a, b, c, policy, counter, micro_order, trace)


def in_place_winograd(a, b, c, policy: BasePolicy | None = None,
                      counter: OpCounter | None = None,
                      micro_order: int | None = None, trace=None) -> OpCounter:
    """c = a x b with zero auxiliary buffers.

    Every intermediate is stored in a quadrant of a, b, or c; on return the
    contents of a and b are unspecified. Operands must be writable and
    mutually disjoint.
    """
    return _run_schedule(IN_PLACE, a, b, c, policy, counter, micro_order, trace)
