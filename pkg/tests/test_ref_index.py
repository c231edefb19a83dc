"""Tests for the static reference index."""

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drc.errors import (
    CharNotInReference,
    EmptyReference,
    IndexOutOfRange,
    InvalidBlock,
)
from drc.oracles import (
    naive_longest_match,
    naive_substring_concat,
)
from drc.ref_index import RefIndex, _factorize_py, build_index


BANANA = build_index(b"banana")


class TestBuild:
    def test_banana_suffix_array(self):
        # suffixes a, ana, anana, banana, na, nana
        assert [int(v) + 1 for v in BANANA.suffix_array] == [6, 4, 2, 1, 5, 3]

    def test_unit_reference(self):
        ix = build_index(b"a")
        assert ix.lce(1, 1) == 1
        assert ix.substring_concat((1, 1), (1, 1)) is None
        ix.validate(deep=True)

    def test_empty_reference_rejected(self):
        with pytest.raises(EmptyReference):
            build_index(b"")

    def test_random_references_validate(self):
        rng = random.Random(11)
        for sigma, r in [(2, 40), (3, 101), (4, 257), (26, 64), (256, 200)]:
            data = bytes(rng.randrange(sigma) for _ in range(r))
            build_index(data).validate(deep=True)

    def test_periodic_references_validate(self):
        for data in [b"a" * 50, b"ab" * 30, b"abc" * 17 + b"ab"]:
            build_index(data).validate(deep=True)

    def test_larger_reference_sa_lcp(self):
        rng = random.Random(5)
        data = bytes(rng.randrange(256) for _ in range(10_000))
        build_index(data).validate()


class TestLce:
    def test_banana_pairs(self):
        assert BANANA.lce(2, 4) == 3
        assert BANANA.lce(4, 2) == 3
        for a in range(1, 7):
            assert BANANA.lce(a, a) == 6 - a + 1

    def test_bounds(self):
        with pytest.raises(IndexOutOfRange):
            BANANA.lce(0, 3)
        with pytest.raises(IndexOutOfRange):
            BANANA.lce(1, 7)

    def test_against_scan(self):
        rng = random.Random(3)
        data = bytes(rng.randrange(3) + 97 for _ in range(500))
        ix = build_index(data)
        for _ in range(2000):
            a, b = rng.randint(1, 500), rng.randint(1, 500)
            k = 0
            while a + k <= 500 and b + k <= 500 and data[a + k - 1] == data[b + k - 1]:
                k += 1
            assert ix.lce(a, b) == k


class TestLongestMatch:
    def test_banana_examples(self):
        assert BANANA.longest_match(b"bananaban", 1) == (6, 1)
        assert BANANA.longest_match(b"bananaban", 7) == (3, 1)
        length, w = BANANA.longest_match(b"zzz", 1)
        assert (length, w) == (0, None)

    def test_witness_is_real(self):
        rng = random.Random(9)
        ref = bytes(rng.randrange(4) + 97 for _ in range(300))
        ix = build_index(ref)
        text = bytes(rng.randrange(5) + 97 for _ in range(400))  # 'e' absent
        for start in range(1, 401, 7):
            length, w = ix.longest_match(text, start)
            want_len, _ = naive_longest_match(ref, text, start)
            assert length == want_len
            if length:
                assert ref[w - 1 : w - 1 + length] == text[start - 1 : start - 1 + length]

    def test_start_bounds(self):
        with pytest.raises(IndexOutOfRange):
            BANANA.longest_match(b"abc", 0)
        with pytest.raises(IndexOutOfRange):
            BANANA.longest_match(b"abc", 4)


class TestFactorize:
    def test_banana_cover(self):
        assert BANANA.factorize(b"bananaban") == [(1, 6), (1, 3)]

    def test_empty_text(self):
        assert BANANA.factorize(b"") == []

    def test_absent_byte_position(self):
        with pytest.raises(CharNotInReference) as e:
            BANANA.factorize(b"banxana")
        assert e.value.position == 4 and e.value.byte == ord("x")

    def test_python_kernel_agrees(self):
        rng = random.Random(21)
        ref = bytes(rng.randrange(3) + 97 for _ in range(128))
        ix = build_index(ref)
        text = bytes(rng.randrange(3) + 97 for _ in range(700))
        via_method = ix.factorize(text)
        starts = np.empty(len(text), dtype=np.int64)
        ends = np.empty(len(text), dtype=np.int64)
        nb, bad = _factorize_py(
            np.frombuffer(ref, dtype=np.uint8), ix.suffix_array,
            np.frombuffer(text, dtype=np.uint8), starts, ends,
        )
        assert bad == -1
        assert [(int(starts[k]) + 1, int(ends[k]) + 1) for k in range(nb)] == via_method

    def test_blocks_spell_text_and_are_greedy(self):
        rng = random.Random(2)
        ref = bytes(rng.randrange(4) + 97 for _ in range(256))
        ix = build_index(ref)
        for _ in range(20):
            text = bytes(rng.randrange(4) + 97 for _ in range(rng.randint(0, 500)))
            blocks = ix.factorize(text)
            spelled = b"".join(ref[s - 1 : e] for s, e in blocks)
            assert spelled == text
            pos = 1
            for s, e in blocks:
                want, _ = naive_longest_match(ref, text, pos)
                assert e - s + 1 == want
                pos += want


class TestSubstringConcat:
    def test_banana_examples(self):
        assert BANANA.substring_concat((1, 2), (3, 4)) == 1  # "bana"
        assert BANANA.substring_concat((2, 3), (2, 3)) == 2  # "anan"
        assert BANANA.substring_concat((5, 6), (1, 1)) is None  # "nab"

    def test_invalid_blocks(self):
        with pytest.raises(InvalidBlock):
            BANANA.substring_concat((0, 2), (1, 1))
        with pytest.raises(InvalidBlock):
            BANANA.substring_concat((1, 2), (6, 7))
        with pytest.raises(InvalidBlock):
            BANANA.substring_concat((3, 2), (1, 1))

    def test_answer_is_sound(self):
        rng = random.Random(17)
        ref = bytes(rng.randrange(3) + 97 for _ in range(200))
        ix = build_index(ref)
        for _ in range(3000):
            i = rng.randint(1, 200)
            j = min(200, i + rng.randint(0, 8))
            i2 = rng.randint(1, 200)
            j2 = min(200, i2 + rng.randint(0, 8))
            got = ix.substring_concat((i, j), (i2, j2))
            cat = ref[i - 1 : j] + ref[i2 - 1 : j2]
            if got is not None:
                assert ref[got - 1 : got - 1 + len(cat)] == cat
            else:
                assert ref.find(cat) == -1

    def test_exhaustive_small_alphabets(self):
        # all content-distinct (x, y) pairs up to length 6 on tiny alphabets
        rng = random.Random(4)
        for sigma, r in [(2, 17), (2, 31), (3, 24), (4, 30)]:
            ref = bytes(rng.randrange(sigma) + 97 for _ in range(r))
            ix = build_index(ref)
            intervals = {}
            for i in range(1, r + 1):
                for j in range(i, min(r, i + 5) + 1):
                    intervals.setdefault(ref[i - 1 : j], (i, j))
            items = list(intervals.values())
            for x in items:
                for y in items:
                    got = ix.substring_concat(x, y)
                    want = naive_substring_concat(ref, x, y)
                    cat = ref[x[0] - 1 : x[1]] + ref[y[0] - 1 : y[1]]
                    if want is None:
                        assert got is None, (ref, x, y)
                    else:
                        assert got is not None, (ref, x, y)
                        assert ref[got - 1 : got - 1 + len(cat)] == cat

    def test_full_blocks_and_self(self):
        rng = random.Random(8)
        ref = bytes(rng.randrange(2) + 97 for _ in range(64))
        ix = build_index(ref)
        whole = (1, 64)
        assert ix.substring_concat(whole, whole) is None
        head, tail = (1, 32), (33, 64)
        assert ix.substring_concat(head, tail) == 1


@settings(max_examples=150)
@given(
    ref=st.binary(min_size=1, max_size=40),
    xi=st.integers(0, 10**6), xl=st.integers(0, 6),
    yi=st.integers(0, 10**6), yl=st.integers(0, 6),
)
def test_concat_matches_oracle(ref, xi, xl, yi, yl):
    r = len(ref)
    ix = build_index(ref)
    i = xi % r + 1
    j = min(r, i + xl)
    i2 = yi % r + 1
    j2 = min(r, i2 + yl)
    got = ix.substring_concat((i, j), (i2, j2))
    cat = ref[i - 1 : j] + ref[i2 - 1 : j2]
    if got is None:
        assert ref.find(cat) == -1
    else:
        assert ref[got - 1 : got - 1 + len(cat)] == cat


def test_occurrence_map():
    assert BANANA.occurrence(ord("b")) == 1
    assert BANANA.occurrence(ord("a")) in (2, 4, 6)
    assert BANANA.occurrence(ord("z")) is None
