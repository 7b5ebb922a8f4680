import numpy as np
import pytest

from matmulkit import (
    AliasError,
    BasePolicy,
    DimensionError,
    Matrix,
    OpCounter,
    ScheduleError,
    ScheduleStep,
    in_place_winograd,
    naive_mul,
    two_temp_winograd,
    validate_schedule,
    winograd_block_mul,
)
from matmulkit.schedules import IN_PLACE_STEPS, TWO_TEMP_STEPS

from conftest import int_matrix, loop_matmul

A2 = Matrix(np.array([[1, 2], [3, 4]], dtype=np.int64))
B2 = Matrix(np.array([[5, 6], [7, 8]], dtype=np.int64))
PRODUCT2 = [[19, 22], [43, 50]]


def reindex(rows):
    return tuple(ScheduleStep(i + 1, s.symbol, s.op, s.lhs, s.rhs, s.store)
                 for i, s in enumerate(rows))


def swapped(steps, i, j):
    rows = list(steps)
    rows[i - 1], rows[j - 1] = rows[j - 1], rows[i - 1]
    return reindex(rows)


def tree_walk_nonbase_calls(n, policy):
    """Independent recursion-tree count of calls that execute the schedule."""
    if n == 1:
        return 0
    if policy.kind == "naive-cutoff" and n <= policy.threshold:
        return 0
    if policy.kind == "unrolled" and n <= policy.order:
        return 0
    return 1 + 7 * tree_walk_nonbase_calls(n // 2, policy)


# --- legality -----------------------------------------------------------

def test_builtin_two_temp_schedule_is_legal():
    assert validate_schedule(TWO_TEMP_STEPS).ok


def test_builtin_in_place_schedule_is_legal():
    assert validate_schedule(IN_PLACE_STEPS).ok
    # and stays legal when recursive products destroy their operands
    assert validate_schedule(IN_PLACE_STEPS, products_clobber_operands=True).ok


def test_swapping_steps_7_and_9_breaks_in_place_schedule():
    mutated = swapped(IN_PLACE_STEPS, 7, 9)
    report = validate_schedule(mutated)
    assert not report.ok
    # the relocated first product now reads A11 after it was overwritten
    assert report.violation_index == 9
    assert "A11" in report.reason
    assert not validate_schedule(mutated, products_clobber_operands=True).ok


def test_dependency_breaking_transpositions_fail():
    # two-temp: S1 overwrites X before P7 consumes S3
    report = validate_schedule(swapped(TWO_TEMP_STEPS, 3, 4))
    assert not report.ok and report.violation_index == 4
    # in-place: T2 would read T1 after T4 replaced it in C22
    report = validate_schedule(swapped(IN_PLACE_STEPS, 8, 10))
    assert not report.ok


def test_order_preserving_legality_of_all_single_swaps():
    # every adjacent transposition either keeps the dataflow legal or is
    # reported; none may pass while breaking a read-after-write dependency
    for steps, clobber in ((TWO_TEMP_STEPS, False), (IN_PLACE_STEPS, True)):
        for i in range(1, 22):
            mutated = swapped(steps, i, i + 1)
            report = validate_schedule(mutated, products_clobber_operands=clobber)
            if report.ok:
                values = {}
                for s in mutated:
                    values[s.store] = s.symbol
                assert values["C11"] == "U1" and values["C12"] == "U5"


def test_validate_rejects_malformed_lists():
    with pytest.raises(ScheduleError):
        validate_schedule(TWO_TEMP_STEPS[:21])
    no_product = reindex([
        ScheduleStep(0, s.symbol, "+" if s.op == "*" else s.op, s.lhs, s.rhs, s.store)
        for s in TWO_TEMP_STEPS
    ])
    with pytest.raises(ScheduleError):
        validate_schedule(no_product)


# --- two-temp execution ---------------------------------------------------

def test_two_temp_order2_product_and_buffers():
    c = Matrix.zeros(2, 2, np.int64)
    counter = two_temp_winograd(A2, B2, c)
    assert c.arr.tolist() == PRODUCT2
    assert counter.temp_buffers == 2
    assert counter.mults == 7 and counter.adds == 15


def test_two_temp_order1_no_buffers():
    c = Matrix.zeros(1, 1, np.int64)
    counter = two_temp_winograd(Matrix(np.array([[6]])), Matrix(np.array([[7]])), c)
    assert c[0, 0] == 42 and counter.temp_buffers == 0


@pytest.mark.parametrize("order", [4, 8, 16, 32, 64, 128])
def test_two_temp_matches_naive_and_preserves_inputs(rng, order):
    a, b = int_matrix(rng, order, order), int_matrix(rng, order, order)
    snap_a, snap_b = a.arr.copy(), b.arr.copy()
    want = Matrix.zeros(order, order, np.int64)
    naive_mul(a, b, want)
    c = Matrix.zeros(order, order, np.int64)
    counter = two_temp_winograd(a, b, c)
    assert c == want
    assert np.array_equal(a.arr, snap_a) and np.array_equal(b.arr, snap_b)
    k = order.bit_length() - 1
    assert counter.temp_buffers == 2 * (7 ** k - 1) // 6
    assert counter.peak_live_elements <= (2 * order * order) / 3


@pytest.mark.parametrize("policy", [
    BasePolicy.scalar_only(),
    BasePolicy.unrolled_up_to(8),
    BasePolicy.naive_cutoff(12),
])
def test_two_temp_buffer_events_match_tree_walk(rng, policy):
    for order in (2, 8, 32, 64):
        a, b = int_matrix(rng, order, order), int_matrix(rng, order, order)
        c = Matrix.zeros(order, order, np.int64)
        counter = two_temp_winograd(a, b, c, policy=policy)
        assert counter.temp_buffers == 2 * tree_walk_nonbase_calls(order, policy)


def test_two_temp_rejects_aliased_output():
    with pytest.raises(AliasError):
        two_temp_winograd(A2, B2, A2)


# --- in-place execution ---------------------------------------------------

def test_in_place_order2_zero_buffers():
    a, b = A2.copy(), B2.copy()
    c = Matrix.zeros(2, 2, np.int64)
    counter = in_place_winograd(a, b, c, micro_order=1)
    assert c.arr.tolist() == PRODUCT2
    assert counter.temp_buffers == 0 and counter.peak_live_elements == 0


def test_in_place_order1_leaves_inputs_alone():
    a, b = Matrix(np.array([[5]])), Matrix(np.array([[9]]))
    c = Matrix.zeros(1, 1, np.int64)
    in_place_winograd(a, b, c)
    assert c[0, 0] == 45 and a[0, 0] == 5 and b[0, 0] == 9


@pytest.mark.parametrize("order", [4, 8, 16, 32, 64, 128])
def test_in_place_matches_naive_on_saved_copies(rng, order):
    a, b = int_matrix(rng, order, order), int_matrix(rng, order, order)
    want = loop_matmul(a, b) if order <= 16 else None
    ref = Matrix.zeros(order, order, np.int64)
    naive_mul(Matrix(a.arr.copy()), Matrix(b.arr.copy()), ref)
    c = Matrix.zeros(order, order, np.int64)
    counter = in_place_winograd(a, b, c)  # clobbers a, b
    assert c == ref
    if want is not None:
        assert c == want
    assert counter.temp_buffers == 0 and counter.peak_live_elements == 0


def test_in_place_actually_clobbers_inputs(rng):
    a, b = int_matrix(rng, 16, 16), int_matrix(rng, 16, 16)
    snap_a = a.arr.copy()
    c = Matrix.zeros(16, 16, np.int64)
    in_place_winograd(a, b, c, micro_order=1)
    assert not np.array_equal(a.arr, snap_a)


def test_in_place_rejects_any_aliasing(rng):
    a = int_matrix(rng, 4, 4)
    c = Matrix.zeros(4, 4, np.int64)
    with pytest.raises(AliasError):
        in_place_winograd(a, a, c)
    with pytest.raises(AliasError):
        in_place_winograd(a, int_matrix(rng, 4, 4), a)


# --- shared behavior ------------------------------------------------------

def test_schedules_count_like_block_winograd(rng):
    for order in (2, 8, 32):
        a, b = int_matrix(rng, order, order), int_matrix(rng, order, order)
        ref = OpCounter()
        winograd_block_mul(a, b, Matrix.zeros(order, order, np.int64), counter=ref)
        tt = OpCounter()
        two_temp_winograd(a, b, Matrix.zeros(order, order, np.int64), counter=tt)
        ip = OpCounter()
        in_place_winograd(a.copy(), b.copy(), Matrix.zeros(order, order, np.int64), counter=ip)
        assert (tt.mults, tt.adds) == (ref.mults, ref.adds)
        assert (ip.mults, ip.adds) == (ref.mults, ref.adds)


def test_schedule_micro_dispatch_matches_literal_counters(rng):
    for order in (2, 8, 32):
        a, b = int_matrix(rng, order, order), int_matrix(rng, order, order)
        fast = OpCounter()
        c1 = Matrix.zeros(order, order, np.int64)
        two_temp_winograd(a, b, c1, counter=fast, micro_order=8)
        slow = OpCounter()
        c2 = Matrix.zeros(order, order, np.int64)
        two_temp_winograd(a, b, c2, counter=slow, micro_order=1)
        assert np.array_equal(c1.arr, c2.arr)
        assert fast.snapshot() == slow.snapshot()


def test_schedules_reject_nonconforming_shapes():
    bad = Matrix(np.zeros((6, 6)))
    with pytest.raises(DimensionError):
        two_temp_winograd(bad, bad.copy(), Matrix(np.zeros((6, 6))))
    with pytest.raises(DimensionError):
        in_place_winograd(Matrix(np.zeros((4, 2))), Matrix(np.zeros((4, 4))),
                          Matrix(np.zeros((4, 4))))


def test_trace_renders_table_rows():
    lines = []
    a, b = A2.copy(), B2.copy()
    c = Matrix.zeros(2, 2, np.int64)
    in_place_winograd(a, b, c, trace=lines.append)
    assert len(lines) == 22
    assert lines[6] == "step 7: P1 = A11*B11 -> C11"
    assert lines[0] == "step 1: S3 = A11-A21 -> C11"
    lines = []
    c = Matrix.zeros(2, 2, np.int64)
    two_temp_winograd(A2, B2, c, trace=lines.append)
    assert lines[0] == "step 1: S3 = A11-A21 -> X"
    assert lines[11] == "step 12: P1 = A11*B11 -> X"
