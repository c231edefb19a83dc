"""Word-packed dynamic partial sums over a short sequence.

Maintains nonnegative entries Z[1..n], n <= B, under prefix-sum queries
(``sum``, ``search``) and five local edits (``update``, ``divide``,
``merge``, ``insert``, ``delete``).  Instead of storing prefix sums
outright, consecutive sums are grouped into *runs*: a new run starts
wherever one entry exceeds the run gap, each run is anchored by a
representative value, and every sum is kept as a small offset from its
run's anchor.  The offsets, the run-head bitstring, and the per-entry
run counts are bit fields packed into Python ints sized like machine
words, so a whole-suffix shift is one multiply-add and an intra-run
search is one guarded subtraction (SIMD within a register).

>>> ps = PackedSums([5, 1, 4, 7])
>>> ps.sum(4)
17
>>> ps.search(7)
3
>>> ps.update(1, 1)
>>> ps.prefix_sums()
[6, 7, 11, 18]

Anchors drift as edits land between rebuilds, so queries verify their
answers and fall back to an immediate rebuild when a stale anchor
misleads them; the structure is rebuilt from scratch every B edits
regardless.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BadConfig,
    BadSplit,
    DeleteTooLarge,
    DeltaTooLarge,
    IndexOutOfRange,
    NegativeEntry,
    SearchOutOfRange,
    StructureFull,
)


@lru_cache(maxsize=None)
def _ones(field_bits: int, m: int) -> int:
    """Int holding m fields of width field_bits, each with value 1."""
    if m <= 0:
        return 0
    return ((1 << (field_bits * m)) - 1) // ((1 << field_bits) - 1)


def _first_ge(word: int, nfields: int, tau: int, field_bits: int):
    """Smallest field index in word with value >= tau, else None.

    Fields must keep their top (guard) bit clear; tau must satisfy
    1 <= tau < 2**(field_bits-1).  Setting every guard bit and then
    subtracting tau from every field in one word-wide subtraction
    leaves field i's guard bit set exactly when field i >= tau.
    """
    if nfields <= 0:
        return None
    ones = _ones(field_bits, nfields)
    guards = ones << (field_bits - 1)
    z = ((word | guards) - tau * ones) & guards
    if not z:
        return None
    low = z & -z
    return (low.bit_length() - 1) // field_bits


class _Overflow(Exception):
    """Internal: a packed write would not fit its field."""


@dataclass(frozen=True)
class PsConfig:
    """Packing geometry for one PackedSums instance.

    w       simulated machine word width in bits (budget check only;
            the arithmetic itself runs on Python ints of any size)
    delta   update/insert arguments satisfy |d| < 2**delta
    B       capacity, and the rebuild period, of the structure
    F       bit width of one packed field (1 guard + 1 sign-ish bias bit
            + room for the largest offset plus drift)
    run_gap override for the run-splitting threshold; defaults to
            B * 2**delta and may only be lowered
    """

    w: int = 64
    delta: int = 2
    B: int = 8
    F: int = 16
    run_gap: int | None = None

    def __post_init__(self):
        if self.B < 1:
            raise BadConfig("B must be at least 1")
        if self.delta < 1:
            raise BadConfig("delta must be at least 1")
        if self.B * self.F > 2 * self.w:
            raise BadConfig(f"{self.B} fields of {self.F} bits exceed two "
                            f"{self.w}-bit words")
        # Worst-case |offset|: canonical span (B-1)*gap plus drift from B
        # delta-bounded edits and divide-time anchor reuse; 2*B^2*2^delta
        # bounds both with room to spare.
        if self.bias <= 2 * self.B * self.B * (1 << self.delta):
            raise BadConfig(f"F={self.F} too narrow for B={self.B}, "
                            f"delta={self.delta}")
        if self.run_gap is not None and not 0 <= self.run_gap <= self.B << self.delta:
            raise BadConfig("run_gap must lie in [0, B * 2**delta]")

    @property
    def gap(self) -> int:
        return self.run_gap if self.run_gap is not None else self.B << self.delta

    @property
    def bias(self) -> int:
        return 1 << (self.F - 2)

    @property
    def guard(self) -> int:
        return 1 << (self.F - 1)

    @property
    def field_mask(self) -> int:
        return (1 << self.F) - 1


DEFAULT_CONFIG = PsConfig()


class PackedSums:
    """Dynamic partial sums over at most cfg.B nonnegative entries.

    Public state mirrors made available for tests and debugging:
    ``representatives`` (run anchor values), ``offsets`` (per-entry
    distance from its anchor), ``run_flags`` (run-head bits), and
    ``run_prefix_counts`` (how many run heads at or before each entry).
    """

    __slots__ = ("cfg", "_n", "_reps", "_u", "_bits", "_c",
                 "ops_since_rebuild", "rebuilds", "search_fallbacks")

    def __init__(self, values=(), *, config: PsConfig | None = None):
        self.cfg = config if config is not None else DEFAULT_CONFIG
        vals = [int(v) for v in values]
        for v in vals:
            if v < 0:
                raise NegativeEntry(f"entry value {v} is negative")
        if len(vals) > self.cfg.B:
            raise StructureFull(f"{len(vals)} entries exceed capacity {self.cfg.B}")
        self.rebuilds = 0
        self.search_fallbacks = 0
        self._load(vals)

    # ---------------------------------------------------------------- loading

    def _load(self, vals):
        """Canonical packing of the given values: greedy runs, fresh anchors."""
        cfg = self.cfg
        F, bias, gap = cfg.F, cfg.bias, cfg.gap
        self._n = len(vals)
        self._reps = []
        u = bits = c = 0
        y = rep = run = 0
        for p, z in enumerate(vals):
            y += z
            if p == 0 or z > gap:
                run += 1
                rep = y
                self._reps.append(y)
                bits |= 1 << p
            u |= (y - rep + bias) << (F * p)
            c |= run << (F * p)
        self._u, self._bits, self._c = u, bits, c
        self.ops_since_rebuild = 0

    def rebuild(self) -> None:
        """Repack from scratch: recompute runs, anchors, offsets, counts."""
        self._full_rebuild()

    def _full_rebuild(self):
        self._load(self.values())
        self.rebuilds += 1

    # ---------------------------------------------------------------- queries

    def __len__(self) -> int:
        return self._n

    def __repr__(self) -> str:
        return f"PackedSums({self.values()!r})"

    @property
    def total(self) -> int:
        return self._sum(self._n)

    def sum(self, i: int) -> int:
        """Y[i] = Z[1] + ... + Z[i]."""
        if not 1 <= i <= self._n:
            raise IndexOutOfRange(f"sum index {i} outside [1, {self._n}]")
        return self._sum(i)

    def _sum(self, i: int) -> int:
        if i == 0:
            return 0
        cfg = self.cfg
        p = (i - 1) * cfg.F
        q = (self._c >> p) & cfg.field_mask
        return self._reps[q - 1] + ((self._u >> p) & cfg.field_mask) - cfg.bias

    def search(self, t: int) -> int:
        """Smallest i with sum(i) >= t, for 1 <= t <= total."""
        if self._n == 0 or not 1 <= t <= self.total:
            raise SearchOutOfRange(f"search target {t} outside [1, total]")
        j = self._search(t)
        if j is None:
            # A stale anchor pushed the answer outside the inspected runs;
            # repacking makes the three-run window argument exact.
            self.search_fallbacks += 1
            self._full_rebuild()
            j = self._search(t)
            if j is None:
                raise AssertionError("search window missed on a fresh packing")
        return j

    def _search(self, t: int):
        # Candidate runs: the one holding the successor anchor of t plus
        # its two neighbors.  Answers are verified before being trusted.
        r0 = bisect_left(self._reps, t)
        nruns = len(self._reps)
        for r in range(max(1, r0), min(nruns, r0 + 2) + 1):
            j = self._search_run(r, t)
            if j is not None and self._sum(j) >= t and self._sum(j - 1) < t:
                return j
        return None

    def _search_run(self, r: int, t: int):
        """Candidate index within run r, by one packed comparison."""
        cfg = self.cfg
        F = cfg.F
        s0 = _first_ge(self._c, self._n, r, F)
        if s0 is None:
            return None
        nxt = _first_ge(self._c, self._n, r + 1, F)
        e0 = self._n - 1 if nxt is None else nxt - 1
        tau = t - self._reps[r - 1] + cfg.bias
        if tau <= 1:
            return s0 + 1
        if tau >= cfg.guard:
            return None
        m = e0 - s0 + 1
        word = (self._u >> (F * s0)) & ((1 << (F * m)) - 1)
        k = _first_ge(word, m, tau, F)
        return None if k is None else s0 + k + 1

    def values(self) -> list:
        """Current entry values Z[1..n]."""
        out = []
        prev = 0
        for i in range(1, self._n + 1):
            y = self._sum(i)
            out.append(y - prev)
            prev = y
        return out

    def prefix_sums(self) -> list:
        return [self._sum(i) for i in range(1, self._n + 1)]

    @property
    def representatives(self) -> list:
        return list(self._reps)

    @property
    def offsets(self) -> list:
        bias, F, mask = self.cfg.bias, self.cfg.F, self.cfg.field_mask
        return [((self._u >> (F * p)) & mask) - bias for p in range(self._n)]

    @property
    def run_flags(self) -> list:
        return [(self._bits >> p) & 1 for p in range(self._n)]

    @property
    def run_prefix_counts(self) -> list:
        F, mask = self.cfg.F, self.cfg.field_mask
        return [(self._c >> (F * p)) & mask for p in range(self._n)]

    # ---------------------------------------------------- packed word surgery

    def _u_field(self, p):
        return (self._u >> (self.cfg.F * p)) & self.cfg.field_mask

    def _u_set(self, p, raw):
        cfg = self.cfg
        if not 0 < raw < cfg.guard:
            raise _Overflow
        sh = cfg.F * p
        self._u = (self._u & ~(cfg.field_mask << sh)) | (raw << sh)

    def _range_add(self, lo, hi, d):
        """Add d to biased offset fields lo..hi (slots, inclusive)."""
        if d == 0 or lo > hi:
            return
        cfg = self.cfg
        F, mask, guard = cfg.F, cfg.field_mask, cfg.guard
        u = self._u
        for p in range(lo, hi + 1):
            if not 0 < ((u >> (F * p)) & mask) + d < guard:
                raise _Overflow
        pattern = _ones(F, hi - lo + 1) << (F * lo)
        # Fields stay strictly inside (0, guard), so no carry crosses them.
        self._u = u + d * pattern if d > 0 else u - (-d) * pattern

    def _c_field(self, p):
        return (self._c >> (self.cfg.F * p)) & self.cfg.field_mask

    def _c_range_add(self, lo, hi, d):
        if lo > hi:
            return
        F = self.cfg.F
        pattern = _ones(F, hi - lo + 1) << (F * lo)
        self._c = self._c + pattern if d > 0 else self._c - pattern

    def _set_bit(self, p, b):
        if (self._bits >> p) & 1 == b:
            return
        if b:
            self._bits |= 1 << p
            self._c_range_add(p, self._n - 1, +1)
        else:
            self._bits &= ~(1 << p)
            self._c_range_add(p, self._n - 1, -1)

    def _slot_insert(self, p, raw, start):
        """Insert a slot at p; start=True marks it a run head."""
        cfg = self.cfg
        if not 0 < raw < cfg.guard:
            raise _Overflow
        F, sh = cfg.F, cfg.F * p
        low_mask = (1 << sh) - 1
        self._u = (self._u & low_mask) | (raw << sh) | ((self._u >> sh) << (sh + F))
        cprev = self._c_field(p - 1) if p else 0
        self._c = (self._c & low_mask) | (cprev << sh) | ((self._c >> sh) << (sh + F))
        bit_low = self._bits & ((1 << p) - 1)
        self._bits = bit_low | ((self._bits >> p) << (p + 1))
        self._n += 1
        if start:
            self._set_bit(p, 1)

    def _slot_remove(self, p):
        if (self._bits >> p) & 1:
            self._set_bit(p, 0)
        cfg = self.cfg
        F, sh = cfg.F, cfg.F * p
        low_mask = (1 << sh) - 1
        self._u = (self._u & low_mask) | ((self._u >> (sh + F)) << sh)
        self._c = (self._c & low_mask) | ((self._c >> (sh + F)) << sh)
        bit_low = self._bits & ((1 << p) - 1)
        self._bits = bit_low | ((self._bits >> (p + 1)) << p)
        self._n -= 1

    def _run_end_slot(self, q):
        nxt = _first_ge(self._c, self._n, q + 1, self.cfg.F)
        return self._n - 1 if nxt is None else nxt - 1

    # --------------------------------------------------------------- mutators

    def _finish(self):
        """Post-edit bookkeeping: drift check, periodic repack."""
        self.ops_since_rebuild += 1
        if self.ops_since_rebuild >= self.cfg.B or not self._sound():
            self._full_rebuild()

    def _sound(self):
        """Anchors strictly increasing, every offset field in bounds."""
        reps = self._reps
        for k in range(len(reps) - 1):
            if reps[k] >= reps[k + 1]:
                return False
        F, mask, guard = self.cfg.F, self.cfg.field_mask, self.cfg.guard
        u = self._u
        for p in range(self._n):
            if not 0 < ((u >> (F * p)) & mask) < guard:
                return False
        return True

    def update(self, i: int, d: int) -> None:
        """Z[i] += d; shifts every later prefix sum by d."""
        if not 1 <= i <= self._n:
            raise IndexOutOfRange(f"update index {i} outside [1, {self._n}]")
        if abs(d) >= 1 << self.cfg.delta:
            raise DeltaTooLarge(f"|{d}| >= 2**{self.cfg.delta}")
        if self._sum(i) - self._sum(i - 1) + d < 0:
            raise NegativeEntry(f"entry {i} would fall below zero")
        vals = self.values()
        try:
            p = i - 1
            q = self._c_field(p)
            self._range_add(p, self._run_end_slot(q), d)
            for k in range(q, len(self._reps)):
                self._reps[k] += d
        except _Overflow:
            vals[i - 1] += d
            self._load(vals)
            self.rebuilds += 1
            return
        self._finish()

    def divide(self, i: int, t: int) -> None:
        """Split entry i of value v into consecutive entries (t, v - t)."""
        if not 1 <= i <= self._n:
            raise IndexOutOfRange(f"divide index {i} outside [1, {self._n}]")
        v = self._sum(i) - self._sum(i - 1)
        if not 0 <= t <= v:
            raise BadSplit(f"split point {t} outside [0, {v}]")
        if self._n >= self.cfg.B:
            raise StructureFull(f"capacity {self.cfg.B} reached")
        vals = self.values()
        try:
            self._divide_fast(i, t, v)
        except _Overflow:
            vals[i - 1:i] = [t, v - t]
            self._load(vals)
            self.rebuilds += 1
            return
        self._finish()

    def _divide_fast(self, i, t, v):
        cfg = self.cfg
        bias, gap = cfg.bias, cfg.gap
        p = i - 1
        q = self._c_field(p)
        rep_q = self._reps[q - 1]
        u_raw = self._u_field(p)
        e0 = self._run_end_slot(q)
        y_i = self._sum(i)
        y_new = y_i - v + t
        cut_left = i == 1 or t > gap       # head bit the new entry i needs
        cut_mid = v - t > gap              # head bit the new entry i+1 needs
        if (self._bits >> p) & 1:
            if cut_left and cut_mid:
                self._reps[q - 1] = y_new
                self._u_set(p, bias)
                self._reps.insert(q, y_i)
                self._slot_insert(p + 1, bias, True)
                self._range_add(p + 2, e0 + 1, rep_q - y_i)
            elif cut_left:
                self._reps[q - 1] = y_new
                self._u_set(p, bias)
                self._slot_insert(p + 1, y_i - y_new + bias, False)
                self._range_add(p + 2, e0 + 1, rep_q - y_new)
            elif cut_mid:
                # i loses its head bit and joins the previous run; the old
                # run keeps index q, re-anchored at the new entry i+1.
                rep_prev = self._reps[q - 2]
                self._set_bit(p, 0)
                self._u_set(p, y_new - rep_prev + bias)
                self._reps[q - 1] = y_i
                self._slot_insert(p + 1, bias, True)
                self._range_add(p + 2, e0 + 1, rep_q - y_i)
            else:
                # whole old run q folds into run q-1, its anchor disappears
                rep_prev = self._reps[q - 2]
                self._set_bit(p, 0)
                self._u_set(p, y_new - rep_prev + bias)
                self._reps.pop(q - 1)
                self._slot_insert(p + 1, y_i - rep_prev + bias, False)
                self._range_add(p + 2, e0 + 1, rep_q - rep_prev)
        else:
            if not cut_left and not cut_mid:
                self._u_set(p, y_new - rep_q + bias)
                self._slot_insert(p + 1, u_raw, False)
            elif cut_left and not cut_mid:
                self._reps.insert(q, y_new)
                self._u_set(p, bias)
                self._set_bit(p, 1)
                self._slot_insert(p + 1, y_i - y_new + bias, False)
                self._range_add(p + 2, e0 + 1, rep_q - y_new)
            elif not cut_left and cut_mid:
                self._reps.insert(q, y_i)
                self._u_set(p, y_new - rep_q + bias)
                self._slot_insert(p + 1, bias, True)
                self._range_add(p + 2, e0 + 1, rep_q - y_i)
            else:
                self._reps.insert(q, y_new)
                self._reps.insert(q + 1, y_i)
                self._u_set(p, bias)
                self._set_bit(p, 1)
                self._slot_insert(p + 1, bias, True)
                self._range_add(p + 2, e0 + 1, rep_q - y_i)

    def merge(self, i: int) -> None:
        """Fuse entries i and i+1 into one entry of their summed value."""
        if not 1 <= i < self._n:
            raise IndexOutOfRange(f"merge index {i} outside [1, {self._n - 1}]")
        p = i - 1
        b1 = (self._bits >> p) & 1
        b2 = (self._bits >> (p + 1)) & 1
        if b1 and b2:
            # i was a singleton run; the merged entry inherits i+1's head
            q = self._c_field(p)
            self._reps.pop(q - 1)
            self._slot_remove(p)
        elif b1:
            # keep i's head bit, adopt i+1's offset (same anchor, Y[i+1])
            self._u_set(p, self._u_field(p + 1))
            self._slot_remove(p + 1)
        else:
            # i sat mid-run: dropping its slot leaves i+1's field in place
            self._slot_remove(p)
        self._finish()

    def insert(self, i: int, d: int) -> None:
        """Insert a new entry of value d at position i (old i shifts right)."""
        if not 0 <= d < 1 << self.cfg.delta:
            raise DeltaTooLarge(f"insert value {d} outside [0, 2**{self.cfg.delta})")
        if self._n >= self.cfg.B:
            raise StructureFull(f"capacity {self.cfg.B} reached")
        if not 1 <= i <= self._n + 1:
            raise IndexOutOfRange(f"insert index {i} outside [1, {self._n + 1}]")
        if self._n == 0:
            self._load([d])
            self.ops_since_rebuild = 1
            return
        if i <= self._n:
            self.divide(i, 0)
            self.update(i, d)
        else:
            last = self._sum(self._n) - self._sum(self._n - 1)
            self.divide(self._n, last)
            # divide already grew the sequence; the fresh zero is the tail
            self.update(self._n, d)

    def delete(self, i: int) -> None:
        """Remove entry i; its value must fit one delta-bounded update."""
        if not 1 <= i <= self._n:
            raise IndexOutOfRange(f"delete index {i} outside [1, {self._n}]")
        v = self._sum(i) - self._sum(i - 1)
        if v >= 1 << self.cfg.delta:
            raise DeleteTooLarge(f"entry value {v} >= 2**{self.cfg.delta}")
        self.update(i, -v)
        if self._n == 1:
            self._load([])
        elif i < self._n:
            self.merge(i)
        else:
            self.merge(i - 1)

    # -------------------------------------------------------------- validation

    def validate(self) -> None:
        """Full structural self-check; raises AssertionError on any breach."""
        n = self._n
        cfg = self.cfg
        assert self._u >> (cfg.F * n) == 0, "stray offset bits past count"
        assert self._c >> (cfg.F * n) == 0, "stray count bits past count"
        assert self._bits >> n == 0, "stray head bits past count"
        assert len(self._reps) == bin(self._bits).count("1"), "anchor/head mismatch"
        if n:
            assert self._bits & 1, "first entry must head a run"
        heads = 0
        for p in range(n):
            heads += (self._bits >> p) & 1
            assert self._c_field(p) == heads, f"run count wrong at slot {p}"
            assert 0 < self._u_field(p) < cfg.guard, f"offset field {p} out of range"
        for k in range(len(self._reps) - 1):
            assert self._reps[k] < self._reps[k + 1], "anchors not increasing"
        prev = 0
        for i in range(1, n + 1):
            y = self._sum(i)
            assert y >= prev, "prefix sums must be nondecreasing"
            prev = y
        assert self.ops_since_rebuild < cfg.B, "rebuild counter overdue"
