"""Marked trees and forests.

An edge-marked tree distinguishes d-1 elements of the edge universe
E(t) ∪ {b_0 .. b_{d-2}}: real edges are named by their child node, and the
buds b_i are virtual extra edge slots that make the universe size d*n + d - 1.
A leaf-marked tree distinguishes some of its leaves.  A marked forest is an
ordered d-tuple of leaf-marked trees; its leaf sequence is the walk whose
i-th increment is (marks in tree i) - 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import ArityError, MarkCountError
from .tree import DaryTree, Word, format_word, parse_word
from .walks import LukWalk


@dataclass(frozen=True, order=True)
class Bud:
    """Virtual extra edge slot b_index, index in [0, d-2]."""

    index: int


@dataclass(frozen=True)
class EdgeMark:
    """A real edge, named by its child node id."""

    child: int


MarkTarget = Union[Bud, EdgeMark]

# canonical comparable form of a mark: buds sort before edges, buds by
# index, edges by the lexicographic order of their child word
CanonicalMark = Tuple[int, Union[int, Word]]


def _canonical_mark(tree: DaryTree, mark: MarkTarget) -> CanonicalMark:
    if isinstance(mark, Bud):
        return (0, mark.index)
    return (1, tree.node_word(mark.child))


class EdgeMarkedTree:
    """A tree together with d-1 marks over its edges and buds.

    The mark tuple is kept canonically sorted (buds by index, then edges by
    child word) so two structurally equal objects compare equal regardless
    of construction order.
    """

    __slots__ = ("tree", "marks")

    def __init__(self, tree: DaryTree, marks: Iterable[MarkTarget]) -> None:
        self.tree = tree
        self.marks: Tuple[MarkTarget, ...] = tuple(
            sorted(marks, key=lambda m: _canonical_mark(tree, m))
        )

    @property
    def d(self) -> int:
        return self.tree.d

    @classmethod
    def from_words(
        cls,
        tree: DaryTree,
        bud_indices: Iterable[int] = (),
        edge_words: Iterable[Sequence[int]] = (),
    ) -> "EdgeMarkedTree":
        marks: List[MarkTarget] = [Bud(i) for i in bud_indices]
        marks.extend(EdgeMark(tree.node_at(w)) for w in edge_words)
        return cls(tree, marks)

    def key(self):
        """Hashable canonical identity: (d, code, canonical marks)."""
        return (
            self.d,
            tuple(self.tree.to_preorder_code()),
            tuple(_canonical_mark(self.tree, m) for m in self.marks),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeMarkedTree):
            return NotImplemented
        return self.key() == other.key()

    __hash__ = None  # mutable tree inside; key() is the hashable identity

    def __repr__(self) -> str:
        return f"EdgeMarkedTree(d={self.d}, n={self.tree.internal_count}, marks={len(self.marks)})"


class LeafMarkedTree:
    """A tree with a set of distinguished leaves (any number of them)."""

    __slots__ = ("tree", "marked_leaves")

    def __init__(self, tree: DaryTree, marked_leaves: Iterable[int]) -> None:
        self.tree = tree
        self.marked_leaves: Tuple[int, ...] = tuple(
            sorted(set(marked_leaves), key=tree.node_word)
        )

    @property
    def d(self) -> int:
        return self.tree.d

    @classmethod
    def from_words(
        cls, tree: DaryTree, leaf_words: Iterable[Sequence[int]]
    ) -> "LeafMarkedTree":
        return cls(tree, (tree.node_at(w) for w in leaf_words))

    def mark_words(self) -> Tuple[Word, ...]:
        return tuple(self.tree.node_word(u) for u in self.marked_leaves)

    def key(self):
        return (self.d, tuple(self.tree.to_preorder_code()), self.mark_words())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LeafMarkedTree):
            return NotImplemented
        return self.key() == other.key()

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"LeafMarkedTree(d={self.d}, n={self.tree.internal_count}, "
            f"marks={len(self.marked_leaves)})"
        )


class MarkedForest:
    """Ordered sequence of exactly d leaf-marked trees, positions 0 .. d-1."""

    __slots__ = ("trees",)

    def __init__(self, trees: Sequence[LeafMarkedTree]) -> None:
        self.trees: Tuple[LeafMarkedTree, ...] = tuple(trees)
        if self.trees and any(t.d != len(self.trees) for t in self.trees):
            raise ArityError(
                f"forest of {len(self.trees)} trees with arities "
                f"{[t.d for t in self.trees]}"
            )

    @property
    def d(self) -> int:
        return len(self.trees)

    def total_marks(self) -> int:
        return sum(len(t.marked_leaves) for t in self.trees)

    def key(self):
        return tuple(t.key() for t in self.trees)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MarkedForest):
            return NotImplemented
        return self.key() == other.key()

    __hash__ = None

    def __repr__(self) -> str:
        sizes = [t.tree.internal_count for t in self.trees]
        return f"MarkedForest(d={self.d}, sizes={sizes})"


def leaf_sequence(f: MarkedForest) -> LukWalk:
    """The walk with one increment per forest position: marks - 1."""
    d = f.d
    if f.total_marks() != d - 1:
        raise MarkCountError(
            f"forest carries {f.total_marks()} marks, need {d - 1}"
        )
    return LukWalk.from_increments(
        [len(t.marked_leaves) - 1 for t in f.trees]
    )


def is_excursion_forest(f: MarkedForest) -> bool:
    """True iff the leaf sequence stays nonnegative until its final step."""
    return leaf_sequence(f).is_excursion()


def validate(x: Union[EdgeMarkedTree, LeafMarkedTree, MarkedForest]) -> List[str]:
    """Check the type invariants of a marked object.

    Returns a list of human-readable violations, empty when the object is
    well formed.  Never raises; violations are data.
    """
    problems: List[str] = []
    if isinstance(x, EdgeMarkedTree):
        d = x.d
        if len(x.marks) != d - 1:
            problems.append(f"{len(x.marks)} marks, expected {d - 1}")
        seen = set()
        for m in x.marks:
            c = _canonical_mark(x.tree, m)
            if c in seen:
                problems.append(f"duplicate mark {m}")
            seen.add(c)
            if isinstance(m, Bud):
                if not 0 <= m.index <= d - 2:
                    problems.append(f"bud index {m.index} outside [0, {d - 2}]")
            else:
                if not x.tree.is_live(m.child):
                    problems.append(f"edge child {m.child} not live")
                elif m.child == x.tree.root:
                    problems.append("root names no edge")
        problems.extend(x.tree.validate())
    elif isinstance(x, LeafMarkedTree):
        for u in x.marked_leaves:
            if not x.tree.is_live(u):
                problems.append(f"marked node {u} not live")
            elif not x.tree.is_leaf(u):
                problems.append(f"marked node {u} is internal")
        if len(set(x.marked_leaves)) != len(x.marked_leaves):
            problems.append("duplicate marked leaf")
        problems.extend(x.tree.validate())
    elif isinstance(x, MarkedForest):
        if any(t.d != x.d for t in x.trees):
            problems.append("mixed arities in forest")
        for i, t in enumerate(x.trees):
            problems.extend(f"tree {i}: {p}" for p in validate(t))
    else:
        problems.append(f"unknown object {type(x).__name__}")
    return problems


# ----------------------------------------------------------------------
# debug serialization: {d, code, marks: [{bud: i} | {edge: word}], leaves: [words]}


def edge_marked_to_obj(x: EdgeMarkedTree) -> dict:
    marks = []
    for m in x.marks:
        if isinstance(m, Bud):
            marks.append({"bud": m.index})
        else:
            marks.append({"edge": format_word(x.tree.node_word(m.child))})
    return {"d": x.d, "code": x.tree.code_text(), "marks": marks}


def edge_marked_from_obj(obj: dict) -> EdgeMarkedTree:
    tree = DaryTree.from_code_text(int(obj["d"]), obj["code"])
    marks: List[MarkTarget] = []
    for entry in obj.get("marks", []):
        if "bud" in entry:
            marks.append(Bud(int(entry["bud"])))
        else:
            marks.append(EdgeMark(tree.node_at(parse_word(entry["edge"]))))
    return EdgeMarkedTree(tree, marks)


def leaf_marked_to_obj(x: LeafMarkedTree) -> dict:
    return {
        "d": x.d,
        "code": x.tree.code_text(),
        "leaves": [format_word(w) for w in x.mark_words()],
    }


def leaf_marked_from_obj(obj: dict) -> LeafMarkedTree:
    tree = DaryTree.from_code_text(int(obj["d"]), obj["code"])
    return LeafMarkedTree.from_words(
        tree, [parse_word(s) for s in obj.get("leaves", [])]
    )


def forest_to_obj(f: MarkedForest) -> dict:
    return {"d": f.d, "trees": [leaf_marked_to_obj(t) for t in f.trees]}


def forest_from_obj(obj: dict) -> MarkedForest:
    return MarkedForest([leaf_marked_from_obj(t) for t in obj["trees"]])


def dumps(x) -> str:
    if isinstance(x, EdgeMarkedTree):
        return json.dumps(edge_marked_to_obj(x))
    if isinstance(x, LeafMarkedTree):
        return json.dumps(leaf_marked_to_obj(x))
    if isinstance(x, MarkedForest):
        return json.dumps(forest_to_obj(x))
    raise TypeError(f"cannot serialize {type(x).__name__}")
