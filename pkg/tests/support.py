"""Shared fixtures: a fully worked 19-entry packing, op resolvers."""

from __future__ import annotations

from drc.partial_sums_small import PsConfig

# A hand-checked 19-entry sequence with run threshold 4, small enough to
# trace on paper, busy enough to hit every run shape.  Nineteen 16-bit
# fields need a simulated word wider than 64 bits; Python ints make the
# width a free parameter.
DEMO_CONFIG = PsConfig(w=256, delta=2, B=24, F=16, run_gap=4)

DEMO_Z = [5, 1, 4, 7, 1, 1, 6, 5, 1, 1, 2, 2, 1, 3, 5, 10, 5, 10, 2]

DEMO_START = dict(
    sums=[5, 6, 10, 17, 18, 19, 25, 30, 31, 32, 34, 36, 37, 40, 45, 55, 60, 70, 72],
    reps=[5, 17, 25, 30, 45, 55, 60, 70],
    flags=[1, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0],
    counts=[1, 1, 1, 2, 2, 2, 3, 4, 4, 4, 4, 4, 4, 4, 5, 6, 7, 8, 8],
    offsets=[0, 1, 5, 0, 1, 2, 0, 0, 1, 2, 4, 6, 7, 10, 0, 0, 0, 0, 2],
)

# After divide(8, 3): entry 8 (value 5) becomes entries of value 3 and 2,
# and anchor value 30 disappears.
DEMO_AFTER_DIVIDE = dict(
    sums=[5, 6, 10, 17, 18, 19, 25, 28, 30, 31, 32, 34, 36, 37, 40,
          45, 55, 60, 70, 72],
    reps=[5, 17, 25, 45, 55, 60, 70],
    flags=[1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0],
    counts=[1, 1, 1, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3, 4, 5, 6, 7, 7],
    offsets=[0, 1, 5, 0, 1, 2, 0, 3, 5, 6, 7, 9, 11, 12, 15, 0, 0, 0, 0, 2],
)

# Then merge(12): entries 12, 13 (values 2, 2) fuse into value 4.
DEMO_AFTER_MERGE = dict(
    sums=[5, 6, 10, 17, 18, 19, 25, 28, 30, 31, 32, 36, 37, 40,
          45, 55, 60, 70, 72],
    reps=[5, 17, 25, 45, 55, 60, 70],
    flags=[1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0],
    counts=[1, 1, 1, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 4, 5, 6, 7, 7],
    offsets=[0, 1, 5, 0, 1, 2, 0, 3, 5, 6, 7, 11, 12, 15, 0, 0, 0, 0, 2],
)

OP_KINDS = ("sum", "search", "update", "divide", "merge", "insert", "delete")
MUTATOR_KINDS = ("update", "divide", "merge", "insert", "delete")


def resolve_op(kind, a, b, values, *, capacity=None, delta=2):
    """Map raw integers (a, b) onto valid arguments for kind, given the
    current entry values; None when the kind is impossible right now."""
    n = len(values)
    full = capacity is not None and n >= capacity
    if kind == "sum":
        return ("sum", a % n + 1) if n else None
    if kind == "search":
        total = sum(values)
        return ("search", a % total + 1) if total >= 1 else None
    if kind == "update":
        if not n:
            return None
        i = a % n + 1
        lo = -min((1 << delta) - 1, values[i - 1])
        hi = (1 << delta) - 1
        return ("update", i, lo + b % (hi - lo + 1))
    if kind == "divide":
        if not n or full:
            return None
        i = a % n + 1
        return ("divide", i, b % (values[i - 1] + 1))
    if kind == "merge":
        return ("merge", a % (n - 1) + 1) if n >= 2 else None
    if kind == "insert":
        if full:
            return None
        return ("insert", a % (n + 1) + 1, b % (1 << delta))
    if kind == "delete":
        small = [i for i, v in enumerate(values, 1) if v < 1 << delta]
        return ("delete", small[a % len(small)]) if small else None
    raise ValueError(kind)


def apply_op(target, op):
    """Run one resolved op; returns the query answer or None."""
    kind = op[0]
    if kind == "sum":
        return target.sum(op[1])
    if kind == "search":
        return target.search(op[1])
    getattr(target, kind)(*op[1:])
    return None
