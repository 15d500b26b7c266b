"""Arena-backed d-ary trees.

A d-ary tree is a rooted plane tree in which every node has exactly ``d``
children or none.  Nodes live in an indexed arena: three parallel tables
hold the parent id, the child slot occupied in that parent, and the list of
child ids.  Freed slots are recycled through a free list so long-running
growth keeps a compact arena and a constant allocation count per step.

Nodes are addressed in two ways:

* by **id**, an integer index into the arena (cheap, not stable across
  copies that relabel), or
* by **word**, the sequence of child slots on the path from the root, the
  root being the empty word.  Words over the alphabet ``1..d`` are ordered
  lexicographically with the convention that a strict prefix sorts before
  any of its extensions.

Edges are identified with their child node throughout the package, so "the
edge at u" means the edge between ``u`` and its parent; the root names no
edge.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import (
    ArityError,
    MalformedCodeError,
    NotALeafError,
    RootSurgeryError,
    StaleNodeError,
)

Word = Tuple[int, ...]

ROOT_WORD: Word = ()


def lex_compare(w1: Sequence[int], w2: Sequence[int]) -> int:
    """Compare two node words lexicographically.

    Returns -1, 0 or 1.  A strict prefix is strictly smaller than the word
    it prefixes; otherwise the first differing letter decides.  Python's
    tuple comparison implements exactly this order, so the function exists
    mostly to give the convention a name.
    """
    a, b = tuple(w1), tuple(w2)
    if a == b:
        return 0
    return -1 if a < b else 1


def format_word(word: Sequence[int]) -> str:
    """Render a node word as text: ``""`` for the root, ``"21"`` for (2, 1).

    Letters above 9 are joined with dots so the rendering stays unambiguous
    for large arities.
    """
    if any(letter > 9 for letter in word):
        return ".".join(str(letter) for letter in word)
    return "".join(str(letter) for letter in word)


def parse_word(text: str) -> Word:
    """Inverse of :func:`format_word`."""
    if not text:
        return ()
    if "." in text:
        return tuple(int(part) for part in text.split("."))
    return tuple(int(ch) for ch in text)


class DaryTree:
    """Mutable arity-``d`` plane tree in an indexed arena.

    Parameters
    ----------
    d : int
        Arity; every internal node has exactly ``d`` children.  Must be
        at least 2.

    Notes
    -----
    A freshly constructed tree has a single node, the root, which is a
    leaf.  Structural identities maintained at all times for a tree with
    ``n`` internal nodes: ``node_count == d*n + 1``,
    ``leaf_count == (d-1)*n + 1`` and ``edge_count == d*n``.

    Equality compares shape (arity plus preorder code), not arena layout.
    Instances are mutable and therefore unhashable; use
    :meth:`to_preorder_code` as a dictionary key instead.
    """

    __slots__ = ("d", "_parent", "_slot", "_children", "_free", "_root", "_internal")

    def __init__(self, d: int) -> None:
        if d < 2:
            raise ArityError(f"arity must be >= 2, got {d}")
        self.d = d
        self._parent: List[int] = [-1]
        self._slot: List[int] = [0]
        self._children: List[Optional[List[int]]] = [None]
        self._free: List[int] = []
        self._root = 0
        self._internal = 0

    # ------------------------------------------------------------------
    # basic queries

    @property
    def root(self) -> int:
        return self._root

    @property
    def internal_count(self) -> int:
        """Number of internal nodes (``n``)."""
        return self._internal

    @property
    def node_count(self) -> int:
        return self.d * self._internal + 1

    @property
    def leaf_count(self) -> int:
        return (self.d - 1) * self._internal + 1

    @property
    def edge_count(self) -> int:
        return self.d * self._internal

    def is_live(self, u: int) -> bool:
        return 0 <= u < len(self._slot) and self._slot[u] >= 0

    def _check_live(self, u: int) -> None:
        if not self.is_live(u):
            raise StaleNodeError(u)

    def is_leaf(self, u: int) -> bool:
        self._check_live(u)
        return self._children[u] is None

    def is_internal(self, u: int) -> bool:
        return not self.is_leaf(u)

    def parent(self, u: int) -> Optional[int]:
        """Parent id of ``u``, or None for the root."""
        self._check_live(u)
        p = self._parent[u]
        return None if p < 0 else p

    def slot(self, u: int) -> int:
        """Child slot (1..d) that ``u`` occupies in its parent; 0 for the root."""
        self._check_live(u)
        return self._slot[u]

    def children(self, u: int) -> Tuple[int, ...]:
        """Child ids of ``u`` in slot order; empty tuple for a leaf."""
        self._check_live(u)
        kids = self._children[u]
        return () if kids is None else tuple(kids)

    def child(self, u: int, slot: int) -> int:
        """Child of ``u`` in slot ``slot`` (1-based)."""
        self._check_live(u)
        kids = self._children[u]
        if kids is None:
            raise NotALeafError(f"node {u} is a leaf, has no child {slot}")
        if not 1 <= slot <= self.d:
            raise ArityError(f"slot {slot} outside 1..{self.d}")
        return kids[slot - 1]

    # ------------------------------------------------------------------
    # iteration

    def node_ids(self) -> Iterator[int]:
        """Live node ids in arena order (ascending id)."""
        for u, s in enumerate(self._slot):
            if s >= 0:
                yield u

    def nonroot_ids(self) -> Iterator[int]:
        root = self._root
        for u in self.node_ids():
            if u != root:
                yield u

    def leaf_ids(self) -> Iterator[int]:
        for u in self.node_ids():
            if self._children[u] is None:
                yield u

    def internal_ids(self) -> Iterator[int]:
        for u in self.node_ids():
            if self._children[u] is not None:
                yield u

    def nonroot_node_at(self, rank: int) -> int:
        """Node id of the ``rank``-th non-root node in arena order.

        This fixes the rank-to-edge correspondence used by the sampler:
        ranks ``0 .. edge_count-1`` enumerate edges through the child node
        that names each edge.
        """
        if not 0 <= rank < self.edge_count:
            raise IndexError(f"edge rank {rank} outside [0, {self.edge_count})")
        if not self._free and len(self._slot) == self.node_count:
            # compact arena: live ids are exactly 0..node_count-1
            return rank if rank < self._root else rank + 1
        for i, u in enumerate(self.nonroot_ids()):
            if i == rank:
                return u
        raise AssertionError("unreachable: rank checked against edge_count")

    # ------------------------------------------------------------------
    # words

    def node_word(self, u: int) -> Word:
        """Slot path from the root down to ``u``; the root gives ()."""
        self._check_live(u)
        letters = []
        while self._parent[u] >= 0:
            letters.append(self._slot[u])
            u = self._parent[u]
        letters.reverse()
        return tuple(letters)

    def node_at(self, word: Sequence[int]) -> int:
        """Node id found by walking ``word`` from the root."""
        u = self._root
        for letter in word:
            kids = self._children[u]
            if kids is None or not 1 <= letter <= self.d:
                raise KeyError(f"no node at word {tuple(word)!r}")
            u = kids[letter - 1]
        return u

    def depth(self, u: int) -> int:
        return len(self.node_word(u))

    def height(self) -> int:
        """Length of the longest root-to-leaf path."""
        best = 0
        stack = [(self._root, 0)]
        while stack:
            u, h = stack.pop()
            kids = self._children[u]
            if kids is None:
                if h > best:
                    best = h
            else:
                stack.extend((c, h + 1) for c in kids)
        return best

    # ------------------------------------------------------------------
    # surgery

    def _alloc(self, parent: int, slot: int) -> int:
        if self._free:
            u = self._free.pop()
            self._parent[u] = parent
            self._slot[u] = slot
            self._children[u] = None
        else:
            u = len(self._slot)
            self._parent.append(parent)
            self._slot.append(slot)
            self._children.append(None)
        return u

    def expand_leaf(self, leaf: int) -> Tuple[int, ...]:
        """Turn ``leaf`` into an internal node with ``d`` fresh leaf children.

        Returns the new child ids in slot order.
        """
        self._check_live(leaf)
        if self._children[leaf] is not None:
            raise NotALeafError(f"node {leaf} is internal")
        kids = [self._alloc(leaf, s) for s in range(1, self.d + 1)]
        self._children[leaf] = kids
        self._internal += 1
        return tuple(kids)

    def detach_subtree(self, u: int) -> "DaryTree":
        """Remove the subtree rooted at ``u`` and return it as a new tree.

        ``u`` itself stays behind as a leaf of this tree; the returned tree
        is an independent copy of the subtree with ``u`` relabelled to the
        root.  Detaching the root is undefined.
        """
        self._check_live(u)
        if u == self._root:
            raise RootSurgeryError("cannot detach the root")
        sub = DaryTree(self.d)
        # copy the subtree, mapping arena ids here to ids there
        stack = [(u, sub.root)]
        removed_internal = 0
        to_free: List[int] = []
        while stack:
            here, there = stack.pop()
            kids = self._children[here]
            if kids is not None:
                removed_internal += 1
                new_kids = sub.expand_leaf(there)
                stack.extend(zip(kids, new_kids))
            if here != u:
                to_free.append(here)
        for v in to_free:
            self._slot[v] = -1
            self._children[v] = None
            self._free.append(v)
        self._children[u] = None
        self._internal -= removed_internal
        return sub

    def graft(self, leaf: int, sub: "DaryTree") -> None:
        """Replace ``leaf`` by a copy of ``sub``.

        Grafting a single-node tree is a no-op on the node set.  ``sub`` is
        not consumed; its nodes are copied in.
        """
        self._check_live(leaf)
        if sub.d != self.d:
            raise ArityError(f"arity mismatch: {self.d} vs {sub.d}")
        if self._children[leaf] is not None:
            raise NotALeafError(f"node {leaf} is internal")
        stack = [(sub.root, leaf)]
        while stack:
            there, here = stack.pop()
            kids = sub._children[there]
            if kids is not None:
                new_kids = self.expand_leaf(here)
                stack.extend(zip(kids, new_kids))

    # ------------------------------------------------------------------
    # serialization

    def to_preorder_code(self) -> List[int]:
        """Depth-first preorder child counts (each 0 or d)."""
        code = []
        stack = [self._root]
        while stack:
            u = stack.pop()
            kids = self._children[u]
            if kids is None:
                code.append(0)
            else:
                code.append(self.d)
                stack.extend(reversed(kids))
        return code

    @classmethod
    def from_preorder_code(cls, d: int, code: Sequence[int]) -> "DaryTree":
        """Rebuild a tree from its preorder code.

        Raises
        ------
        MalformedCodeError
            If a symbol is neither 0 nor d, the code ends while nodes are
            still pending, or symbols remain after the tree is complete.
        """
        tree = cls(d)
        pending = [tree.root]
        for pos, sym in enumerate(code):
            if not pending:
                raise MalformedCodeError(f"trailing symbol at position {pos}")
            u = pending.pop()
            if sym == d:
                pending.extend(reversed(tree.expand_leaf(u)))
            elif sym != 0:
                raise MalformedCodeError(
                    f"symbol {sym} at position {pos} is neither 0 nor {d}"
                )
        if pending:
            raise MalformedCodeError(f"code ended with {len(pending)} nodes pending")
        return tree

    def code_text(self) -> str:
        """Preorder code as space-separated ASCII decimals."""
        return " ".join(str(s) for s in self.to_preorder_code())

    @classmethod
    def from_code_text(cls, d: int, text: str) -> "DaryTree":
        try:
            code = [int(tok) for tok in text.split()]
        except ValueError as exc:
            raise MalformedCodeError(str(exc)) from None
        return cls.from_preorder_code(d, code)

    # ------------------------------------------------------------------
    # copying, equality, checking

    def copy(self) -> "DaryTree":
        """Deep copy preserving arena ids exactly."""
        dup = DaryTree.__new__(DaryTree)
        dup.d = self.d
        dup._parent = self._parent.copy()
        dup._slot = self._slot.copy()
        dup._children = [None if k is None else k.copy() for k in self._children]
        dup._free = self._free.copy()
        dup._root = self._root
        dup._internal = self._internal
        return dup

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DaryTree):
            return NotImplemented
        return self.d == other.d and self.to_preorder_code() == other.to_preorder_code()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"DaryTree(d={self.d}, internal={self._internal})"

    def validate(self) -> List[str]:
        """Structural self-check; returns a list of violation strings."""
        problems = []
        live = list(self.node_ids())
        roots = [u for u in live if self._parent[u] < 0]
        if roots != [self._root]:
            problems.append(f"root set {roots} != [{self._root}]")
        internal = 0
        for u in live:
            kids = self._children[u]
            if kids is None:
                continue
            internal += 1
            if len(kids) != self.d:
                problems.append(f"node {u} has {len(kids)} children")
                continue
            for s, c in enumerate(kids, start=1):
                if not self.is_live(c):
                    problems.append(f"child {c} of {u} not live")
                elif self._parent[c] != u or self._slot[c] != s:
                    problems.append(f"backlink of child {c} of {u} inconsistent")
        if internal != self._internal:
            problems.append(f"internal_count {self._internal} != counted {internal}")
        if len(live) != self.d * internal + 1:
            problems.append(f"node count {len(live)} != {self.d}*{internal}+1")
        return problems


def new_root_tree(d: int) -> DaryTree:
    """The single-node tree of arity ``d`` (the unique tree with n = 0)."""
    return DaryTree(d)


def from_preorder_code(d: int, code: Sequence[int]) -> DaryTree:
    return DaryTree.from_preorder_code(d, code)
