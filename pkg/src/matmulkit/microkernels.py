"""Straight-line base kernels generated from a divide-and-conquer step table.

Each kernel's recursion is described once as a list of block steps
(see kernels.py). Expanding that recursion symbolically down to scalars
yields an unrolled function of pure scalar arithmetic, e.g. the 2x2, 4x4,
and 8x8 base kernels used to stop recursion early. The generated function
performs exactly the scalar operations the literal recursion would, in the
same order, so results are bit-identical for both integer and float inputs.
"""

from __future__ import annotations

from itertools import count

QUADRANT_NAMES = ("A11", "A12", "A21", "A22", "B11", "B12", "B21", "B22",
                  "C11", "C12", "C21", "C22")

_OPS = {"add": "+", "sub": "-"}


def _split(m):
    h = len(m) // 2
    return ([r[:h] for r in m[:h]], [r[h:] for r in m[:h]],
            [r[:h] for r in m[h:]], [r[h:] for r in m[h:]])


def _join(q11, q12, q21, q22):
    top = [r1 + r2 for r1, r2 in zip(q11, q12)]
    bot = [r1 + r2 for r1, r2 in zip(q21, q22)]
    return top + bot


def generate_straightline(steps, order: int, name: str):
    """Unroll ``steps`` recursively at ``order`` into a flat scalar function.

    Returns a function (A, B) -> tuple: A and B are row-major flat sequences
    of order*order scalars, the result is the row-major flat product.
    """
    if order < 2 or order & (order - 1):
        raise ValueError(f"order must be a power of two >= 2, got {order}")
    ticket = count()
    lines: list[str] = []

    def block_op(sym, x, y):
        h = len(x)
        out = []
        for i in range(h):
            row = []
            for j in range(h):
                t = f"t{next(ticket)}"
                lines.append(f"{t} = {x[i][j]} {sym} {y[i][j]}")
                row.append(t)
            out.append(row)
        return out

    def rec(a, b):
        h = len(a)
        if h == 1:
            t = f"t{next(ticket)}"
            lines.append(f"{t} = {a[0][0]} * {b[0][0]}")
            return [[t]]
        a11, a12, a21, a22 = _split(a)
        b11, b12, b21, b22 = _split(b)
        env = {"A11": a11, "A12": a12, "A21": a21, "A22": a22,
               "B11": b11, "B12": b12, "B21": b21, "B22": b22}
        for op, dst, x, y in steps:
            if op == "mul":
                env[dst] = rec(env[x], env[y])
            else:
                env[dst] = block_op(_OPS[op], env[x], env[y])
        return _join(env["C11"], env["C12"], env["C21"], env["C22"])

    n = order
    a_names = [f"a{i}" for i in range(n * n)]
    b_names = [f"b{i}" for i in range(n * n)]
    c = rec([a_names[i * n:(i + 1) * n] for i in range(n)],
            [b_names[i * n:(i + 1) * n] for i in range(n)])
    src = [
        f"def {name}(A, B):",
        "    " + ", ".join(a_names) + " = A",
        "    " + ", ".join(b_names) + " = B",
    ]
    src.extend("    " + ln for ln in lines)
    src.append("    return (" + ", ".join(c[i][j] for i in range(n) for j in range(n)) + ")")
    ns: dict = {}
    exec(compile("\n".join(src), f"<generated {name}>", "exec"), ns)
    return ns[name]
