"""The growth bijection and its inverse, plus the two binary variants.

``enlarge`` maps a pair (edge-marked tree of size n, letter in 1..d) to a
leaf-marked tree of size n+1; ``reduce`` is its exact inverse.  The map is
built from three stages:

* ``cut`` breaks the marked tree into an ordered forest of d leaf-marked
  trees by repeatedly detaching the subtree under the lexicographically
  largest remaining marked edge; bud marks become root-marked singleton
  positions.  The forest it produces is always excursion type.
* ``rotate`` cyclically shifts the forest positions by the letter.
* ``add_root`` hangs the d forest positions under a fresh root.

Every map here treats its inputs as immutable values: trees are copied
before surgery.  For the amortized O(1) growth loop see the kernel modules;
this module is the reference semantics those kernels are tested against.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from .errors import (
    ArityError,
    CorruptForestError,
    MarkCountError,
    NotExcursionError,
    RootSurgeryError,
)
from .marks import (
    Bud,
    EdgeMark,
    EdgeMarkedTree,
    LeafMarkedTree,
    MarkedForest,
    MarkTarget,
    forest_to_obj,
    is_excursion_forest,
    leaf_marked_to_obj,
    leaf_sequence,
)
from .tree import DaryTree, Word, format_word

# the two binary letters used by the d=2 variants; kept distinct from the
# numeric letters 1..d on purpose
RIGHT = "r"
LEFT = "l"


def _check_letter(d: int, a: int) -> None:
    if not 1 <= a <= d:
        raise ArityError(f"letter {a} outside 1..{d}")


def _split_marks(x: EdgeMarkedTree) -> Tuple[List[int], List[int]]:
    """Bud indices and edge child ids of an edge-marked tree, validated."""
    d = x.d
    if len(x.marks) != d - 1:
        raise MarkCountError(f"{len(x.marks)} marks, need {d - 1}")
    buds, edges = [], []
    for m in x.marks:
        if isinstance(m, Bud):
            if not 0 <= m.index <= d - 2:
                raise MarkCountError(f"bud index {m.index} outside [0, {d - 2}]")
            buds.append(m.index)
        else:
            if m.child == x.tree.root:
                raise MarkCountError("root names no edge")
            edges.append(m.child)
    if len(set(buds)) != len(buds) or len(set(edges)) != len(edges):
        raise MarkCountError("duplicate mark")
    return buds, edges


def cut(x: EdgeMarkedTree, a: int, details: Optional[list] = None):
    """Break an edge-marked tree into an excursion-type marked forest.

    The letter ``a`` is not used; it is passed through so the composition
    with rotate reads naturally.  Returns ``(forest, a)``.

    Bud b_j yields a root-marked singleton at position j.  Then, while
    marked edges remain, the subtree under the lexicographically largest
    one is detached (together with the marked leaves it acquired so far),
    placed at the largest free position, and replaced in the working tree
    by a marked leaf.  The working tree itself takes the smallest free
    position last.
    """
    d = x.d
    buds, edges = _split_marks(x)
    working = x.tree.copy()

    slots: List[Optional[LeafMarkedTree]] = [None] * d
    for j in buds:
        single = DaryTree(d)
        slots[j] = LeafMarkedTree(single, [single.root])
    remaining = sorted(set(range(d)) - set(buds))

    # words are stable while we only detach at lex-larger positions, so one
    # descending sort realizes "largest remaining marked edge" exactly
    order = sorted(edges, key=working.node_word, reverse=True)
    marked: set = set()
    for pos, u in enumerate(order):
        uw = working.node_word(u)
        # no other remaining marked edge may sit strictly below u: its word
        # would extend uw and therefore beat uw in the descending order
        later = order[pos + 1 :]
        assert not any(
            working.node_word(v)[: len(uw)] == uw for v in later
        ), "marked edge strictly below the current lex-max"
        inside = [v for v in marked if working.node_word(v)[: len(uw)] == uw]
        rel = [working.node_word(v)[len(uw) :] for v in inside]
        sub = working.detach_subtree(u)
        target = remaining.pop()  # largest free position
        slots[target] = LeafMarkedTree(sub, [sub.node_at(w) for w in rel])
        marked.difference_update(inside)
        marked.add(u)
        if details is not None:
            details.append(
                {
                    "position": target,
                    "edge": format_word(uw),
                    "remaining": list(remaining),
                }
            )

    slots[remaining[0]] = LeafMarkedTree(working, marked)
    forest = MarkedForest([t for t in slots if t is not None])
    return forest, a


def _is_root_marked_singleton(t: LeafMarkedTree) -> bool:
    return t.tree.internal_count == 0 and len(t.marked_leaves) == 1


def cut_inv(f: MarkedForest, a: int):
    """Reassemble an excursion-type forest into an edge-marked tree.

    Root-marked singleton positions turn back into buds.  The remaining
    trees are merged in increasing position order, each grafted at the
    lexicographically first marked leaf of the tree built so far; that
    leaf's edge becomes a mark and the grafted tree's marks replace it.
    """
    d = f.d
    if f.total_marks() != d - 1:
        raise MarkCountError(f"forest carries {f.total_marks()} marks, need {d - 1}")
    if not is_excursion_forest(f):
        raise NotExcursionError(
            f"leaf sequence {leaf_sequence(f).format()} is not an excursion"
        )

    buds: List[int] = []
    rest: List[Tuple[int, LeafMarkedTree]] = []
    for j, t in enumerate(f.trees):
        if _is_root_marked_singleton(t):
            buds.append(j)
        else:
            rest.append((j, t))

    first = rest[0][1]
    working = first.tree.copy()
    live_marks = set(first.marked_leaves)  # ids valid in the copy
    edge_ids: List[int] = []
    for _, t in rest[1:]:
        if not live_marks:
            raise CorruptForestError("no marked leaf left to plug into")
        u = min(live_marks, key=working.node_word)
        uw = working.node_word(u)
        rel = t.mark_words()
        working.graft(u, t.tree)
        live_marks.remove(u)
        live_marks.update(working.node_at(uw + w) for w in rel)
        edge_ids.append(u)
    if live_marks:
        # counting forces zero leftovers: the grafts consume exactly the
        # marks the non-singleton trees carry beyond the bud marks
        raise CorruptForestError(f"{len(live_marks)} marked leaves left over")

    marks = [Bud(j) for j in buds]
    marks.extend(EdgeMark(u) for u in edge_ids)
    return EdgeMarkedTree(working, marks), a


def rotate(f: MarkedForest, a: int) -> MarkedForest:
    """Shift forest positions: output position i holds input position (i+a) mod d."""
    d = f.d
    _check_letter(d, a)
    return MarkedForest([f.trees[(i + a) % d] for i in range(d)])


def rotate_inv(f: MarkedForest) -> Tuple[MarkedForest, int]:
    """Undo rotate: find the unique shift that restores excursion type.

    Returns ``(excursion-type forest, letter)`` with the letter chosen so
    that ``rotate_inv(rotate(g, a)) == (g, a)`` for excursion-type g: the
    shift r recovered from the leaf sequence maps to letter d - r, with
    r = 0 mapping to d.
    """
    s = leaf_sequence(f)
    r = s.excursion_shift()
    d = f.d
    shifted = MarkedForest([f.trees[(i + r) % d] for i in range(d)])
    return shifted, (d - r if r > 0 else d)


def add_root(f: MarkedForest) -> LeafMarkedTree:
    """Hang the forest under a fresh root; position i becomes child i+1."""
    d = f.d
    out = DaryTree(d)
    kids = out.expand_leaf(out.root)
    mark_words: List[Word] = []
    for i, t in enumerate(f.trees):
        out.graft(kids[i], t.tree)
        mark_words.extend((i + 1,) + w for w in t.mark_words())
    return LeafMarkedTree(out, [out.node_at(w) for w in mark_words])


def add_root_inv(t: LeafMarkedTree) -> MarkedForest:
    """Split a tree at its root into the ordered forest of child subtrees."""
    if t.tree.internal_count < 1:
        raise RootSurgeryError("single-node tree has no root to remove")
    work = t.tree.copy()
    by_child: dict = {}
    for w in t.mark_words():
        by_child.setdefault(w[0], []).append(w[1:])
    parts = []
    for slot, c in enumerate(work.children(work.root), start=1):
        sub = work.detach_subtree(c)
        rel = by_child.get(slot, [])
        parts.append(LeafMarkedTree(sub, [sub.node_at(w) for w in rel]))
    return MarkedForest(parts)


def enlarge(x: EdgeMarkedTree, a: int) -> LeafMarkedTree:
    """Grow by one internal node: add_root . rotate . cut."""
    _check_letter(x.d, a)
    f, a = cut(x, a)
    return add_root(rotate(f, a))


def reduce(t: LeafMarkedTree) -> Tuple[EdgeMarkedTree, int]:
    """Exact inverse of enlarge: cut_inv . rotate_inv . add_root_inv."""
    f = add_root_inv(t)
    g, a = rotate_inv(f)
    return cut_inv(g, a)


def enlarge_trace(x: EdgeMarkedTree, a: int):
    """Run enlarge stage by stage, returning (result, list of frames).

    Each frame records the state after one map, including leaf sequences,
    in plain JSON-ready dictionaries.
    """
    _check_letter(x.d, a)
    steps: list = []
    f, a = cut(x, a, details=steps)
    frames = [
        {
            "map": "cut",
            "forest": forest_to_obj(f),
            "leaf_sequence": leaf_sequence(f).format(),
            "details": steps,
        }
    ]
    g = rotate(f, a)
    frames.append(
        {
            "map": "rotate",
            "letter": a,
            "forest": forest_to_obj(g),
            "leaf_sequence": leaf_sequence(g).format(),
        }
    )
    out = add_root(g)
    frames.append({"map": "add_root", "tree": leaf_marked_to_obj(out)})
    return out, frames


# ----------------------------------------------------------------------
# the two binary growth bijections (d = 2 only)


def _check_binary(x: EdgeMarkedTree, a: str) -> MarkTarget:
    if x.d != 2:
        raise ArityError(f"binary variant needs d=2, got d={x.d}")
    if a not in (RIGHT, LEFT):
        raise ArityError(f"binary letter must be {RIGHT!r} or {LEFT!r}, got {a!r}")
    if len(x.marks) != 1:
        raise MarkCountError(f"{len(x.marks)} marks, need 1")
    return x.marks[0]


def _new_root_over(old: DaryTree, a: str) -> LeafMarkedTree:
    """Shared bud case: fresh root, old tree on one side, marked leaf on the other."""
    out = DaryTree(2)
    kids = out.expand_leaf(out.root)
    if a == RIGHT:
        out.graft(kids[0], old)
        marked = kids[1]
    else:
        out.graft(kids[1], old)
        marked = kids[0]
    return LeafMarkedTree(out, [marked])


def remy_enlarge(x: EdgeMarkedTree, a: str) -> LeafMarkedTree:
    """Grow a binary tree by splitting the marked edge (or adding a root).

    With an edge (u, parent) marked, a new node takes u's place; u hangs
    on one side of it and a fresh marked leaf on the other, side picked by
    the letter.  With the bud marked the same happens above the root.
    """
    mark = _check_binary(x, a)
    if isinstance(mark, Bud):
        return _new_root_over(x.tree, a)
    work = x.tree.copy()
    u = mark.child
    sub = work.detach_subtree(u)
    kids = work.expand_leaf(u)
    if a == RIGHT:
        work.graft(kids[0], sub)
        marked = kids[1]
    else:
        work.graft(kids[1], sub)
        marked = kids[0]
    return LeafMarkedTree(work, [marked])


def third_enlarge(x: EdgeMarkedTree, a: str) -> LeafMarkedTree:
    """The other binary growth map: relocate the marked subtree upward.

    Bud case: same as remy_enlarge.  Edge case (u, p): the subtree at u is
    detached and u stays behind as the marked leaf; a new node v is spliced
    into the edge above p (a new root if p was the root) and the detached
    subtree hangs from v's new child on the side the letter picks.
    """
    mark = _check_binary(x, a)
    if isinstance(mark, Bud):
        return _new_root_over(x.tree, a)
    work = x.tree.copy()
    u = mark.child
    p = work.parent(u)
    uw = work.node_word(u)
    sub = work.detach_subtree(u)  # u stays as the marked leaf
    if p == work.root:
        # new root above p; old tree on the side opposite the carried subtree
        out = DaryTree(2)
        kids = out.expand_leaf(out.root)
        old_slot = 1 if a == RIGHT else 2
        out.graft(kids[old_slot - 1], work)
        out.graft(kids[2 - old_slot], sub)
        return LeafMarkedTree(out, [out.node_at((old_slot,) + uw)])
    pw = work.node_word(p)
    rel = uw[len(pw) :]
    psub = work.detach_subtree(p)
    kids = work.expand_leaf(p)  # p's slot now holds the spliced node v
    old_slot = 1 if a == RIGHT else 2
    work.graft(kids[old_slot - 1], psub)
    work.graft(kids[2 - old_slot], sub)
    return LeafMarkedTree(work, [work.node_at(pw + (old_slot,) + rel)])
