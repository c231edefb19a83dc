"""A forest of compressed strings supporting split and concatenation.

Each string is a maximal cover of reference blocks, held in a leaf-oriented
AVL tree: leaves are blocks in string order, internal nodes cache the total
character count, leaf count, and height of their subtree.  Position lookups
descend by character counts; split and concatenate are tree split and join.

Joins and cuts expose fresh block adjacencies, so every operation re-checks
the affected boundary pairs against the reference index and merges while a
pair's concatenation still occurs in R.  A boundary already known absent
from R stays absent when its blocks grow, so the re-check never cascades
past the touched window.

Strings are addressed by opaque integer handles; split and concatenate
consume their inputs and hand out fresh handles.  Empty strings are legal
forest members (their tree is empty).
"""

from __future__ import annotations

import math
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import (
    CharNotInReference,
    IndexOutOfRange,
    InvalidBlock,
    SameHandle,
    UnknownHandle,
)
from .ref_index import RefIndex

__all__ = [
    "CoverForest",
    "mc_access", "mc_replace", "mc_insert", "mc_delete",
    "mc_concat", "mc_split",
]

Block = Tuple[int, int]


class _Tree:
    """Leaf (blk set) or internal node (blk None, two children)."""

    __slots__ = ("blk", "left", "right", "height", "nchars", "nleaves")

    def __init__(self, blk: Optional[Block]):
        self.blk = blk
        self.left: Optional[_Tree] = None
        self.right: Optional[_Tree] = None
        self.height = 1
        self.nchars = blk[1] - blk[0] + 1 if blk is not None else 0
        self.nleaves = 1


def _leaf(blk: Block) -> _Tree:
    return _Tree(blk)


def _pull(n: _Tree) -> None:
    l, r = n.left, n.right
    n.height = 1 + max(l.height, r.height)
    n.nchars = l.nchars + r.nchars
    n.nleaves = l.nleaves + r.nleaves


def _branch(a: _Tree, b: _Tree) -> _Tree:
    n = _Tree(None)
    n.left, n.right = a, b
    _pull(n)
    return n


def _rot_right(n: _Tree) -> _Tree:
    p = n.left
    n.left = p.right
    p.right = n
    _pull(n)
    _pull(p)
    return p


def _rot_left(n: _Tree) -> _Tree:
    p = n.right
    n.right = p.left
    p.left = n
    _pull(n)
    _pull(p)
    return p


def _rebalance(n: _Tree) -> _Tree:
    """Fix a balance factor of +-2 left by a join step."""
    _pull(n)
    bf = n.left.height - n.right.height
    if bf > 1:
        if n.left.left.height < n.left.right.height:
            n.left = _rot_left(n.left)
        return _rot_right(n)
    if bf < -1:
        if n.right.right.height < n.right.left.height:
            n.right = _rot_right(n.right)
        return _rot_left(n)
    return n


def _join(a: Optional[_Tree], b: Optional[_Tree]) -> Optional[_Tree]:
    """Concatenate two AVL trees of leaves."""
    if a is None:
        return b
    if b is None:
        return a
    if a.height >= b.height + 2:
        n = _Tree(None)
        n.left, n.right = a.left, _join(a.right, b)
        return _rebalance(n)
    if b.height >= a.height + 2:
        n = _Tree(None)
        n.left, n.right = _join(a, b.left), b.right
        return _rebalance(n)
    return _branch(a, b)


def _split_chars(t: Optional[_Tree], c: int) -> Tuple[Optional[_Tree], Optional[_Tree]]:
    """First c characters, rest; divides the block the cut lands in."""
    if t is None or c == 0:
        return None, t
    if c == t.nchars:
        return t, None
    if t.blk is not None:
        s, _e = t.blk
        return _leaf((s, s + c - 1)), _leaf((s + c, _e))
    if c <= t.left.nchars:
        l, r = _split_chars(t.left, c)
        return l, _join(r, t.right)
    l, r = _split_chars(t.right, c - t.left.nchars)
    return _join(t.left, l), r


def _split_leaves(t: Optional[_Tree], k: int) -> Tuple[Optional[_Tree], Optional[_Tree]]:
    """First k whole leaves, rest."""
    if t is None or k == 0:
        return None, t
    if k == t.nleaves:
        return t, None
    if k <= t.left.nleaves:
        l, r = _split_leaves(t.left, k)
        return l, _join(r, t.right)
    l, r = _split_leaves(t.right, k - t.left.nleaves)
    return _join(t.left, l), r


def _leaves(t: Optional[_Tree]) -> Iterator[Block]:
    if t is None:
        return
    stack = [t]
    while stack:
        n = stack.pop()
        if n.blk is not None:
            yield n.blk
        else:
            stack.append(n.right)
            stack.append(n.left)


def _build(blocks: List[Block]) -> Optional[_Tree]:
    if not blocks:
        return None
    if len(blocks) == 1:
        return _leaf(blocks[0])
    mid = len(blocks) // 2
    return _branch(_build(blocks[:mid]), _build(blocks[mid:]))


def _fixpoint(index: RefIndex, win: List[Block]) -> List[Block]:
    """Merge adjacent pairs of a small block window while their
    concatenation occurs in R.  Every boundary starts dirty."""
    dirty = [True] * (len(win) - 1) if win else []
    while True:
        try:
            k = dirty.index(True)
        except ValueError:
            return win
        dirty[k] = False
        pos = index.substring_concat(win[k], win[k + 1])
        if pos is None:
            continue
        s1, e1 = win[k]
        s2, e2 = win[k + 1]
        win[k] = (pos, pos + (e1 - s1) + (e2 - s2) + 1)
        del win[k + 1]
        del dirty[k]
        if k > 0:
            dirty[k - 1] = True
        if k < len(dirty):
            dirty[k] = True


class CoverForest:
    """Compressed strings over one reference, keyed by integer handles."""

    def __init__(self, index: RefIndex):
        self.index = index
        self._trees: Dict[int, Optional[_Tree]] = {}
        self._next_handle = 1

    # ------------------------------------------------------------------

    def _adopt(self, t: Optional[_Tree]) -> int:
        h = self._next_handle
        self._next_handle += 1
        self._trees[h] = t
        return h

    def _tree(self, h: int) -> Optional[_Tree]:
        try:
            return self._trees[h]
        except KeyError:
            raise UnknownHandle(f"no string with handle {h}") from None

    def add(self, src: bytes) -> int:
        """Compress a new string into the forest."""
        return self._adopt(_build(self.index.factorize(src)))

    def add_blocks(self, blocks: List[Block]) -> int:
        for blk in blocks:
            s, e = blk
            if not 1 <= s <= e <= self.index.r:
                raise InvalidBlock(
                    f"block {blk} outside reference of length {self.index.r}")
        return self._adopt(_build(list(blocks)))

    def handles(self) -> List[int]:
        return sorted(self._trees)

    def length(self, h: int) -> int:
        t = self._tree(h)
        return t.nchars if t is not None else 0

    def block_count(self, h: int) -> int:
        t = self._tree(h)
        return t.nleaves if t is not None else 0

    def blocks(self, h: int) -> List[Block]:
        return list(_leaves(self._tree(h)))

    def decompress(self, h: int) -> bytes:
        data = self.index.data
        return b"".join(data[s - 1 : e] for s, e in _leaves(self._tree(h)))

    # ------------------------------------------------------------------

    def _locate(self, t: _Tree, j: int) -> Tuple[int, int]:
        """(leaf ordinal, offset inside that leaf) for position j."""
        ord_ = 1
        while t.blk is None:
            if j <= t.left.nchars:
                t = t.left
            else:
                j -= t.left.nchars
                ord_ += t.left.nleaves
                t = t.right
        return ord_, j

    def _splice(self, h: int, lo: int, hi: int, edit) -> None:
        """Detach leaves [lo, hi] (1-based ordinals), let ``edit`` rewrite
        that block list, re-merge its boundaries, and reattach."""
        t = self._trees[h]
        a, rest = _split_leaves(t, lo - 1)
        w, b = _split_leaves(rest, hi - lo + 1)
        win = list(_leaves(w))
        edit(win)
        win = _fixpoint(self.index, win)
        self._trees[h] = _join(_join(a, _build(win)), b)

    def access(self, h: int, j: int) -> int:
        """S_h[j] as an int byte."""
        t = self._tree(h)
        n = t.nchars if t is not None else 0
        if not 1 <= j <= n:
            raise IndexOutOfRange(f"position {j} outside [1, {n}]")
        while t.blk is None:
            if j <= t.left.nchars:
                t = t.left
            else:
                j -= t.left.nchars
                t = t.right
        return self.index.data[t.blk[0] + j - 2]

    def replace(self, h: int, j: int, byte: int) -> None:
        t = self._tree(h)
        n = t.nchars if t is not None else 0
        if not 1 <= j <= n:
            raise IndexOutOfRange(f"position {j} outside [1, {n}]")
        occ = self.index.occurrence(byte)
        if occ is None:
            raise CharNotInReference(j, byte)
        l, off = self._locate(t, j)

        def edit(win: List[Block]) -> None:
            k = 0 if l == 1 else 1
            s, e = win[k]
            parts: List[Block] = []
            if off > 1:
                parts.append((s, s + off - 2))
            parts.append((occ, occ))
            if off < e - s + 1:
                parts.append((s + off, e))
            win[k : k + 1] = parts

        self._splice(h, max(1, l - 1), min(t.nleaves, l + 1), edit)

    def insert(self, h: int, j: int, byte: int) -> None:
        """Insert byte before position j of S_h (j = length+1 appends)."""
        t = self._tree(h)
        n = t.nchars if t is not None else 0
        if not 1 <= j <= n + 1:
            raise IndexOutOfRange(f"position {j} outside [1, {n + 1}]")
        occ = self.index.occurrence(byte)
        if occ is None:
            raise CharNotInReference(j, byte)
        if t is None:
            self._trees[h] = _leaf((occ, occ))
            return
        if j == n + 1:
            l, off = t.nleaves, None  # append after the last leaf
        else:
            l, off = self._locate(t, j)

        def edit(win: List[Block]) -> None:
            if off is None:
                win.append((occ, occ))
                return
            k = 0 if l == 1 else 1
            s, e = win[k]
            if off == 1:
                win.insert(k, (occ, occ))
            else:
                win[k : k + 1] = [(s, s + off - 2), (occ, occ), (s + off - 1, e)]

        self._splice(h, max(1, l - 1), min(t.nleaves, l + 1), edit)

    def delete(self, h: int, j: int) -> None:
        t = self._tree(h)
        n = t.nchars if t is not None else 0
        if not 1 <= j <= n:
            raise IndexOutOfRange(f"position {j} outside [1, {n}]")
        l, off = self._locate(t, j)

        def edit(win: List[Block]) -> None:
            k = 0 if l == 1 else 1
            s, e = win[k]
            parts: List[Block] = []
            if off > 1:
                parts.append((s, s + off - 2))
            if off < e - s + 1:
                parts.append((s + off, e))
            win[k : k + 1] = parts

        self._splice(h, max(1, l - 1), min(t.nleaves, l + 1), edit)

    # ------------------------------------------------------------------

    def concat(self, h_a: int, h_b: int) -> int:
        """New string S_a . S_b; both inputs are consumed."""
        if h_a == h_b:
            # resolve the handle first so unknown beats same
            self._tree(h_a)
            raise SameHandle(f"concat needs two distinct strings, got {h_a} twice")
        ta, tb = self._tree(h_a), self._tree(h_b)
        del self._trees[h_a], self._trees[h_b]
        if ta is None or tb is None:
            return self._adopt(ta if tb is None else tb)
        # only the seam pair can merge: its neighbors were maximal and
        # their strings only grow
        la, seam = _split_leaves(ta, ta.nleaves - 1)
        head, rb = _split_leaves(tb, 1)
        win = _fixpoint(self.index, [seam.blk, head.blk])
        return self._adopt(_join(_join(la, _build(win)), rb))

    def split(self, h: int, j: int) -> Tuple[int, int]:
        """Cut S_h into S[1..j-1] and S[j..]; the input is consumed."""
        t = self._tree(h)
        n = t.nchars if t is not None else 0
        if not 1 <= j <= n:
            raise IndexOutOfRange(f"cut point {j} outside [1, {n}]")
        del self._trees[h]
        left, right = _split_chars(t, j - 1)
        left = self._restore_tail(left)
        right = self._restore_head(right)
        return self._adopt(left), self._adopt(right)

    def _restore_tail(self, t: Optional[_Tree]) -> Optional[_Tree]:
        """Re-merge the last block pair after a cut shortened the tail."""
        if t is None or t.nleaves < 2:
            return t
        rest, pair = _split_leaves(t, t.nleaves - 2)
        win = _fixpoint(self.index, list(_leaves(pair)))
        return _join(rest, _build(win))

    def _restore_head(self, t: Optional[_Tree]) -> Optional[_Tree]:
        if t is None or t.nleaves < 2:
            return t
        pair, rest = _split_leaves(t, 2)
        win = _fixpoint(self.index, list(_leaves(pair)))
        return _join(_build(win), rest)

    # ------------------------------------------------------------------

    def validate(self) -> None:
        """Recompute every cached field and check the AVL height bound."""
        for h, t in self._trees.items():
            if t is None:
                continue
            height, nchars, nleaves = self._check_node(t)
            edges = height - 1
            assert edges <= 1.44 * math.log2(nleaves + 1) + 1e-9, \
                f"handle {h}: height {edges} exceeds AVL bound for {nleaves} leaves"

    def _check_node(self, t: _Tree) -> Tuple[int, int, int]:
        if t.blk is not None:
            s, e = t.blk
            assert 1 <= s <= e <= self.index.r
            assert t.height == 1 and t.nleaves == 1 and t.nchars == e - s + 1
            return 1, t.nchars, 1
        hl, cl, ll = self._check_node(t.left)
        hr, cr, lr = self._check_node(t.right)
        assert abs(hl - hr) <= 1, "AVL balance violated"
        assert t.height == 1 + max(hl, hr)
        assert t.nchars == cl + cr and t.nleaves == ll + lr
        return t.height, t.nchars, t.nleaves


# contract-name wrappers

def mc_access(forest: CoverForest, h: int, j: int) -> int:
    return forest.access(h, j)


def mc_replace(forest: CoverForest, h: int, j: int, byte: int) -> None:
    forest.replace(h, j, byte)


def mc_insert(forest: CoverForest, h: int, j: int, byte: int) -> None:
    forest.insert(h, j, byte)


def mc_delete(forest: CoverForest, h: int, j: int) -> None:
    forest.delete(h, j)


def mc_concat(forest: CoverForest, h_a: int, h_b: int) -> int:
    return forest.concat(h_a, h_b)


def mc_split(forest: CoverForest, h: int, j: int) -> Tuple[int, int]:
    return forest.split(h, j)
