"""Compressed single-string engine against plain-string oracles."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drc.cover_engine import CompressedString, compress
from drc.errors import CharNotInReference, IndexOutOfRange, InvalidBlock
from drc.oracles import (
    naive_decompress,
    naive_greedy_cover,
    naive_maximality_check,
)
from drc.ref_index import build_index

BANANA = build_index(b"banana")

CONCAT_BUDGET = 8
ST_BUDGET = 10


def decompressed(cs: CompressedString) -> bytes:
    return cs.extract(1, len(cs)) if len(cs) else b""


def assert_coherent(cs: CompressedString, expected: bytes) -> None:
    """Contents, structure, maximality, and the greedy-size bound."""
    cs.check()
    assert decompressed(cs) == expected
    blocks = cs.blocks()
    assert naive_decompress(cs.index.data, blocks) == expected
    assert naive_maximality_check(cs.index.data, blocks)
    if expected:
        greedy = naive_greedy_cover(cs.index.data, expected)
        assert cs.block_count <= 2 * len(greedy) - 1


def assert_budgets(cs: CompressedString) -> None:
    assert cs.last_concat_calls <= CONCAT_BUDGET
    assert cs.last_st_ops <= ST_BUDGET


class TestCompress:
    def test_greedy_cover_of_overlapping_text(self):
        cs = compress(BANANA, b"bananaban")
        assert cs.blocks() == [(1, 6), (1, 3)]
        assert len(cs) == 9

    def test_source_equal_to_reference_is_one_block(self):
        cs = compress(BANANA, b"banana")
        assert cs.blocks() == [(1, 6)]

    def test_empty_source(self):
        cs = compress(BANANA, b"")
        assert cs.blocks() == []
        assert len(cs) == 0
        assert decompressed(cs) == b""

    def test_unknown_byte_reports_source_position(self):
        with pytest.raises(CharNotInReference) as exc:
            compress(BANANA, b"banx")
        assert exc.value.position == 4
        assert exc.value.byte == ord("x")

    def test_block_bounds_are_validated(self):
        with pytest.raises(InvalidBlock):
            CompressedString(BANANA, [(1, 7)])
        with pytest.raises(InvalidBlock):
            CompressedString(BANANA, [(0, 3)])


class TestReads:
    def test_access(self):
        cs = compress(BANANA, b"bananaban")
        assert cs.access(8) == ord("a")
        assert bytes(cs.access(i) for i in range(1, 10)) == b"bananaban"
        assert cs.last_st_ops <= 2

    def test_extract_inside_and_across_blocks(self):
        cs = compress(BANANA, b"bananaban")
        assert cs.extract(7, 3) == b"ban"
        assert cs.extract(5, 3) == b"nab"  # spans the block boundary
        assert cs.extract(1, 9) == b"bananaban"
        assert cs.extract(3, 0) == b""

    def test_extract_of_empty_string(self):
        cs = compress(BANANA, b"")
        assert cs.extract(1, 0) == b""

    def test_read_range_errors(self):
        cs = compress(BANANA, b"banana")
        for bad in (0, 7):
            with pytest.raises(IndexOutOfRange):
                cs.access(bad)
        with pytest.raises(IndexOutOfRange):
            cs.extract(5, 3)
        assert cs.extract(7, 0) == b""  # zero-length read just past the end
        with pytest.raises(IndexOutOfRange):
            cs.extract(8, 0)


class TestReplace:
    def test_single_char(self):
        cs = compress(BANANA, b"bananaban")
        cs.replace(7, ord("n"))
        assert_coherent(cs, b"banananan")
        assert_budgets(cs)

    def test_neighbors_remerge(self):
        # undoing the replacement must collapse back to the original cover
        cs = compress(BANANA, b"bananaban")
        cs.replace(7, ord("n"))
        cs.replace(7, ord("b"))
        assert_coherent(cs, b"bananaban")
        assert cs.block_count == 2

    def test_every_position_of_every_char(self):
        src = b"bananaban"
        for i in range(1, len(src) + 1):
            for ch in b"ban":
                cs = compress(BANANA, src)
                cs.replace(i, ch)
                expected = src[: i - 1] + bytes([ch]) + src[i:]
                assert_coherent(cs, expected)
                assert_budgets(cs)

    def test_single_char_string(self):
        cs = compress(BANANA, b"b")
        cs.replace(1, ord("a"))
        assert_coherent(cs, b"a")

    def test_missing_char_leaves_string_intact(self):
        cs = compress(BANANA, b"banana")
        with pytest.raises(CharNotInReference) as exc:
            cs.replace(3, ord("z"))
        assert exc.value.position == 3
        assert_coherent(cs, b"banana")

    def test_position_errors(self):
        cs = compress(BANANA, b"ban")
        for bad in (0, 4):
            with pytest.raises(IndexOutOfRange):
                cs.replace(bad, ord("a"))


class TestInsert:
    def test_middle(self):
        cs = compress(BANANA, b"banna")
        cs.insert(4, ord("a"))
        assert_coherent(cs, b"banana")
        assert cs.block_count == 1
        assert_budgets(cs)

    def test_front_and_append(self):
        cs = compress(BANANA, b"anana")
        cs.insert(1, ord("b"))
        assert_coherent(cs, b"banana")
        cs.insert(7, ord("b"))
        assert_coherent(cs, b"bananab")
        assert_budgets(cs)

    def test_grow_from_empty(self):
        cs = compress(BANANA, b"")
        expected = bytearray()
        for ch in b"banana":
            cs.insert(len(cs) + 1, ch)
            expected.append(ch)
            assert_coherent(cs, bytes(expected))
            assert_budgets(cs)
        assert cs.block_count == 1  # appends keep re-merging into one block

    def test_every_gap(self):
        src = b"nanaba"
        for i in range(1, len(src) + 2):
            for ch in b"an":
                cs = compress(BANANA, src)
                cs.insert(i, ch)
                expected = src[: i - 1] + bytes([ch]) + src[i - 1 :]
                assert_coherent(cs, expected)
                assert_budgets(cs)

    def test_position_errors(self):
        cs = compress(BANANA, b"ban")
        for bad in (0, 5):
            with pytest.raises(IndexOutOfRange):
                cs.insert(bad, ord("a"))
        with pytest.raises(CharNotInReference):
            cs.insert(2, ord("q"))


class TestDelete:
    def test_middle(self):
        cs = compress(BANANA, b"banana")
        cs.delete(4)
        assert_coherent(cs, b"banna")
        assert_budgets(cs)

    def test_every_position(self):
        src = b"bananaban"
        for i in range(1, len(src) + 1):
            cs = compress(BANANA, src)
            cs.delete(i)
            expected = src[: i - 1] + src[i:]
            assert_coherent(cs, expected)
            assert_budgets(cs)

    def test_down_to_empty(self):
        cs = compress(BANANA, b"ban")
        for remaining in (b"an", b"n", b""):
            cs.delete(1)
            assert_coherent(cs, remaining)
        assert cs.block_count == 0
        cs.insert(1, ord("a"))  # still usable after emptying
        assert_coherent(cs, b"a")

    def test_removal_joins_neighbors(self):
        # deleting the inserted char must fuse the halves back together
        cs = compress(BANANA, b"banana")
        cs.insert(4, ord("b"))
        assert_coherent(cs, b"banbana")
        cs.delete(4)
        assert_coherent(cs, b"banana")
        assert cs.block_count == 1

    def test_position_errors(self):
        cs = compress(BANANA, b"ban")
        for bad in (0, 4):
            with pytest.raises(IndexOutOfRange):
                cs.delete(bad)
        empty = compress(BANANA, b"")
        with pytest.raises(IndexOutOfRange):
            empty.delete(1)


class TestInverses:
    def test_insert_then_delete_roundtrip(self):
        src = b"bananaban"
        cs = compress(BANANA, src)
        before = cs.blocks()
        cs.insert(5, ord("n"))
        cs.delete(5)
        assert_coherent(cs, src)
        assert cs.blocks() == before

    def test_replace_roundtrip(self):
        src = b"nabanab"
        cs = compress(BANANA, src)
        before = cs.blocks()
        cs.replace(2, ord("n"))
        cs.replace(2, src[1])
        assert_coherent(cs, src)
        assert cs.blocks() == before


def random_reference(rng: random.Random, r: int, sigma: int) -> bytes:
    return bytes(rng.randrange(sigma) + 97 for _ in range(r))


def random_source(rng: random.Random, ref: bytes, n: int) -> bytes:
    # splice reference chunks so covers have interesting shape
    out = bytearray()
    while len(out) < n:
        s = rng.randrange(len(ref))
        e = min(len(ref), s + rng.randrange(1, 12))
        out += ref[s:e]
    return bytes(out[:n])


def drive(cs: CompressedString, mirror: bytearray, rng: random.Random) -> None:
    """One random op applied to both the engine and the plain mirror."""
    alpha = sorted(set(cs.index.data))
    kind = rng.choice(("replace", "insert", "delete", "access", "extract"))
    if kind == "replace" and mirror:
        i = rng.randrange(1, len(mirror) + 1)
        ch = rng.choice(alpha)
        cs.replace(i, ch)
        mirror[i - 1] = ch
    elif kind == "insert":
        i = rng.randrange(1, len(mirror) + 2)
        ch = rng.choice(alpha)
        cs.insert(i, ch)
        mirror[i - 1 : i - 1] = bytes([ch])
    elif kind == "delete" and mirror:
        i = rng.randrange(1, len(mirror) + 1)
        cs.delete(i)
        del mirror[i - 1]
    elif kind == "access" and mirror:
        i = rng.randrange(1, len(mirror) + 1)
        assert cs.access(i) == mirror[i - 1]
    elif kind == "extract":
        ln = rng.randrange(0, len(mirror) + 1)
        i = rng.randrange(1, len(mirror) - ln + 2)
        assert cs.extract(i, ln) == bytes(mirror[i - 1 : i - 1 + ln])
    assert_budgets(cs)


@pytest.mark.parametrize("seed", range(6))
def test_random_edit_soak(seed):
    rng = random.Random(1000 + seed)
    ref = random_reference(rng, rng.randrange(20, 200), rng.choice((2, 3, 4)))
    idx = build_index(ref)
    src = random_source(rng, ref, rng.randrange(0, 300))
    cs = compress(idx, src)
    mirror = bytearray(src)
    for step in range(400):
        drive(cs, mirror, rng)
        if step % 40 == 0:
            assert_coherent(cs, bytes(mirror))
    assert_coherent(cs, bytes(mirror))


@settings(max_examples=60)
@given(
    ref=st.binary(min_size=1, max_size=24).map(lambda b: bytes(97 + c % 3 for c in b)),
    script=st.lists(
        st.tuples(st.sampled_from("RID"), st.integers(0, 10 ** 6), st.integers(0, 2)),
        max_size=12,
    ),
)
def test_edit_scripts_match_plain_strings(ref, script):
    idx = build_index(ref)
    cs = compress(idx, ref)
    mirror = bytearray(ref)
    for verb, rawpos, charsel in script:
        ch = 97 + charsel
        if ch not in ref:
            continue
        if verb == "I":
            i = rawpos % (len(mirror) + 1) + 1
            cs.insert(i, ch)
            mirror[i - 1 : i - 1] = bytes([ch])
        elif not mirror:
            continue
        elif verb == "R":
            i = rawpos % len(mirror) + 1
            cs.replace(i, ch)
            mirror[i - 1] = ch
        else:
            i = rawpos % len(mirror) + 1
            cs.delete(i)
            del mirror[i - 1]
        assert_budgets(cs)
    assert_coherent(cs, bytes(mirror))
