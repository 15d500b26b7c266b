"""Ground truth: exact counting, exhaustive enumeration, verification.

Everything else in the package is checked against this module.  Counting
is exact integer arithmetic; enumeration is exhaustive and canonically
ordered; the verifiers return JSON-ready report dictionaries of the form
{check, params, pass, counterexample?, ...} and never raise on a failed
property, only on misuse (size guard, underpowered statistics).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import bijections
from .errors import SizeGuardError, UnderpoweredTestError
from .marks import (
    Bud,
    EdgeMark,
    EdgeMarkedTree,
    LeafMarkedTree,
    MarkedForest,
    is_excursion_forest,
    leaf_sequence,
)
from .sampler import make_kernel
from .tree import DaryTree
from .walks import enumerate_walks

# each exhaustive run multiplies trees, mark sets and letters; refuse
# beyond this many combined objects unless the caller forces it
MAX_OBJECTS = 10_000_000


def _guard(objects: int, force: bool) -> None:
    if objects > MAX_OBJECTS and not force:
        raise SizeGuardError(
            f"enumeration of {objects} objects exceeds the {MAX_OBJECTS} budget; "
            "pass force=True to override"
        )


def count_trees(d: int, n: int) -> int:
    """Number of d-ary trees with n internal nodes: C(dn+1, n) / (dn+1)."""
    if d < 2 or n < 0:
        raise ValueError(f"need d >= 2 and n >= 0, got d={d}, n={n}")
    top = d * n + 1
    return math.comb(top, n) // top


def mark_set_count(d: int, n: int) -> int:
    """Number of (d-1)-subsets of the size-(dn+d-1) edge and bud universe."""
    return math.comb(d * n + d - 1, d - 1)


def growth_identity_holds(d: int, n: int) -> bool:
    """The exact-count identity behind the bijection, checked as integers.

    Marking d-1 leaves of every size-(n+1) tree counts the same set as
    pairing every edge-marked size-n tree with a letter.
    """
    lhs = math.comb((d - 1) * (n + 1) + 1, d - 1) * count_trees(d, n + 1)
    rhs = d * math.comb(d * n + d - 1, d - 1) * count_trees(d, n)
    return lhs == rhs


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


_CODE_CACHE: Dict[Tuple[int, int], List[Tuple[int, ...]]] = {}


def _codes(d: int, n: int) -> List[Tuple[int, ...]]:
    key = (d, n)
    cached = _CODE_CACHE.get(key)
    if cached is not None:
        return cached
    if n == 0:
        out = [(0,)]
    else:
        out = []
        for comp in _compositions(n - 1, d):
            for parts in product(*(_codes(d, k) for k in comp)):
                code: Tuple[int, ...] = (d,)
                for p in parts:
                    code += p
                out.append(code)
        out.sort()
    _CODE_CACHE[key] = out
    return out


def enumerate_trees(d: int, n: int, force: bool = False) -> List[DaryTree]:
    """All d-ary trees with n internal nodes, in preorder-code order."""
    _guard(count_trees(d, n), force)
    return [DaryTree.from_preorder_code(d, code) for code in _codes(d, n)]


def _mark_universe(tree: DaryTree):
    d = tree.d
    universe = [Bud(i) for i in range(d - 1)]
    universe.extend(EdgeMark(u) for u in tree.nonroot_ids())
    return universe


def enumerate_marked_trees(
    d: int, n: int, force: bool = False
) -> Iterator[EdgeMarkedTree]:
    """All edge-marked trees of size n, grouped by underlying tree."""
    _guard(count_trees(d, n) * mark_set_count(d, n), force)
    for tree in enumerate_trees(d, n, force=force):
        for marks in combinations(_mark_universe(tree), d - 1):
            yield EdgeMarkedTree(tree, marks)


def enumerate_inputs(
    d: int, n: int, force: bool = False
) -> List[Tuple[EdgeMarkedTree, int]]:
    """Every (edge-marked tree, letter) pair of size n, exactly once."""
    _guard(count_trees(d, n) * mark_set_count(d, n) * d, force)
    out = []
    for marked in enumerate_marked_trees(d, n, force=force):
        for a in range(1, d + 1):
            out.append((marked, a))
    return out


def enumerate_leaf_marked(
    d: int, n: int, m: int, force: bool = False
) -> Iterator[LeafMarkedTree]:
    """All size-n trees with m marked leaves."""
    leaves = (d - 1) * n + 1
    _guard(count_trees(d, n) * math.comb(leaves, m), force)
    for tree in enumerate_trees(d, n, force=force):
        for chosen in combinations(sorted(tree.leaf_ids(), key=tree.node_word), m):
            yield LeafMarkedTree(tree, chosen)


def enumerate_forests(d: int, n: int, force: bool = False) -> Iterator[MarkedForest]:
    """All d-tuples of trees with n internal nodes and d-1 marks in total."""
    # loose guard: every forest is counted once via the split below
    _guard(d * math.comb(d * n + d - 1, d - 1) * count_trees(d, n), force)
    for sizes in _compositions(n, d):
        per_position = []
        for k in sizes:
            position_trees = []
            for tree in enumerate_trees(d, k, force=force):
                leaf_list = sorted(tree.leaf_ids(), key=tree.node_word)
                position_trees.append((tree, leaf_list))
            per_position.append(position_trees)
        for picks in product(*per_position):
            leaf_counts = [len(leaves) for _, leaves in picks]
            for marks in _compositions(d - 1, d):
                if any(m > c for m, c in zip(marks, leaf_counts)):
                    continue
                mark_choices = [
                    combinations(leaves, m)
                    for (_, leaves), m in zip(picks, marks)
                ]
                for chosen in product(*mark_choices):
                    yield MarkedForest(
                        [
                            LeafMarkedTree(tree, ids)
                            for (tree, _), ids in zip(picks, chosen)
                        ]
                    )


# ----------------------------------------------------------------------
# verifiers


def verify_enlarge_bijection(d: int, n: int, force: bool = False) -> dict:
    """Exhaustively certify the growth bijection at one size.

    Checks, over every (edge-marked tree, letter) input of size n:

    * the intermediate forest out of the cut stage is excursion type,
    * all images are pairwise distinct,
    * the image count and the per-tree image multiplicity match the counts
      the marking argument predicts,
    * reducing the image returns the exact input.
    """
    params = {"d": d, "n": n}
    expected_mult = math.comb((d - 1) * (n + 1) + 1, d - 1)
    report = {
        "check": "enlarge_bijection",
        "params": params,
        "pass": False,
        "inputs": 0,
        "expected_multiplicity": expected_mult,
        "counterexample": None,
    }
    images = {}
    per_tree: Dict[Tuple[int, ...], int] = {}
    inputs = enumerate_inputs(d, n, force=force)
    report["inputs"] = len(inputs)
    for x, a in inputs:
        forest, _ = bijections.cut(x, a)
        if not is_excursion_forest(forest):
            report["counterexample"] = {
                "kind": "cut_not_excursion",
                "input": _input_obj(x, a),
                "leaf_sequence": leaf_sequence(forest).format(),
            }
            return report
        image = bijections.add_root(bijections.rotate(forest, a))
        key = image.key()
        if key in images:
            report["counterexample"] = {
                "kind": "collision",
                "input": _input_obj(x, a),
                "other_input": images[key],
            }
            return report
        images[key] = _input_obj(x, a)
        code = key[1]
        per_tree[code] = per_tree.get(code, 0) + 1
        back, back_a = bijections.reduce(image)
        if back_a != a or back != x:
            report["counterexample"] = {
                "kind": "round_trip",
                "input": _input_obj(x, a),
                "returned": _input_obj(back, back_a),
            }
            return report
    expected_images = expected_mult * count_trees(d, n + 1)
    report["images"] = len(images)
    report["expected_images"] = expected_images
    if len(images) != expected_images:
        report["counterexample"] = {"kind": "image_count"}
        return report
    bad = {c: m for c, m in per_tree.items() if m != expected_mult}
    if len(per_tree) != count_trees(d, n + 1) or bad:
        report["counterexample"] = {
            "kind": "multiplicity",
            "trees_hit": len(per_tree),
            "off_codes": {str(c): m for c, m in list(bad.items())[:3]},
        }
        return report
    report["pass"] = True
    return report


def _input_obj(x: EdgeMarkedTree, a) -> dict:
    from .marks import edge_marked_to_obj

    obj = edge_marked_to_obj(x)
    obj["letter"] = a
    return obj


def verify_rotation_lemma(m: int, max_increment: int) -> dict:
    """Certify the rotation principle over all capped walks of length m.

    Every rotation class has m pairwise distinct members with exactly one
    excursion among them, and for an excursion the first argmin of the
    r-th rotation sits at m - r.
    """
    report = {
        "check": "rotation_lemma",
        "params": {"m": m, "max_increment": max_increment},
        "pass": False,
        "walks": 0,
        "counterexample": None,
    }
    walks = 0
    for s in enumerate_walks(m, max_increment):
        walks += 1
        rots = [s.rot(r) for r in range(m)]
        distinct = {w.values for w in rots}
        if len(distinct) != m:
            report["counterexample"] = {
                "kind": "class_size",
                "walk": s.format(),
                "distinct": len(distinct),
            }
            report["walks"] = walks
            return report
        excursions = [w for w in rots if w.is_excursion()]
        if len(excursions) != 1:
            report["counterexample"] = {
                "kind": "excursion_count",
                "walk": s.format(),
                "count": len(excursions),
            }
            report["walks"] = walks
            return report
        if s.is_excursion():
            for r in range(m):
                if rots[r].first_argmin() != m - r:
                    report["counterexample"] = {
                        "kind": "argmin",
                        "walk": s.format(),
                        "r": r,
                    }
                    report["walks"] = walks
                    return report
        if s.rot(s.excursion_shift()) not in excursions:
            report["counterexample"] = {"kind": "shift", "walk": s.format()}
            report["walks"] = walks
            return report
    report["walks"] = walks
    report["pass"] = True
    return report


def verify_binary_variants(n: int, force: bool = False) -> dict:
    """Certify both binary growth maps at one size and hunt for a witness.

    Each map must be injective over all (tree, mark, side) inputs of size
    n and hit every single-leaf-marked tree of size n+1 exactly once.  The
    witness records an input where the three growth maps (the general one
    and the two variants) give three pairwise different outputs.
    """
    report = {
        "check": "binary_variants",
        "params": {"n": n},
        "pass": False,
        "counterexample": None,
        "witness": None,
    }
    expected = {t.key() for t in enumerate_leaf_marked(2, n + 1, 1, force=force)}
    report["inputs_per_map"] = 2 * (2 * n + 1) * count_trees(2, n)
    for name, fn in (("remy", bijections.remy_enlarge), ("third", bijections.third_enlarge)):
        seen = {}
        for marked in enumerate_marked_trees(2, n, force=force):
            for side in (bijections.RIGHT, bijections.LEFT):
                out = fn(marked, side)
                key = out.key()
                if key in seen:
                    report["counterexample"] = {
                        "kind": "collision",
                        "map": name,
                        "input": _input_obj(marked, side),
                        "other_input": seen[key],
                    }
                    return report
                seen[key] = _input_obj(marked, side)
        if set(seen) != expected:
            report["counterexample"] = {
                "kind": "image_mismatch",
                "map": name,
                "images": len(seen),
                "expected": len(expected),
            }
            return report
    for marked in enumerate_marked_trees(2, n, force=force):
        for a, side in product((1, 2), (bijections.RIGHT, bijections.LEFT)):
            big = bijections.enlarge(marked, a).key()
            remy = bijections.remy_enlarge(marked, side).key()
            third = bijections.third_enlarge(marked, side).key()
            if big != remy and big != third and remy != third:
                witness = _input_obj(marked, a)
                witness["side"] = side
                report["witness"] = witness
                break
        if report["witness"]:
            break
    report["pass"] = True
    return report


# ----------------------------------------------------------------------
# statistics


def regularized_gamma_q(s: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(s, x) to about 1e-14 relative.

    Series for the lower function when x < s + 1, Lentz's continued
    fraction otherwise; the standard split point keeps both sides fast.
    """
    if s <= 0 or x < 0:
        raise ValueError(f"need s > 0 and x >= 0, got s={s}, x={x}")
    if x == 0:
        return 1.0
    if x < s + 1:
        return 1.0 - _lower_series(s, x)
    return _upper_cf(s, x)


def _lower_series(s: float, x: float) -> float:
    ap = s
    term = 1.0 / s
    total = term
    for _ in range(10000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))


def _upper_cf(s: float, x: float) -> float:
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h


def chi_square_p_value(statistic: float, dof: int) -> float:
    if dof == 0:
        return 1.0
    return regularized_gamma_q(dof / 2.0, statistic / 2.0)


@dataclass(frozen=True)
class ChiSquareReport:
    classes: int
    statistic: float
    dof: int
    p_value: float
    samples: int
    seed: int

    def to_obj(self) -> dict:
        return {
            "classes": self.classes,
            "statistic": self.statistic,
            "dof": self.dof,
            "p_value": self.p_value,
            "samples": self.samples,
            "seed": self.seed,
        }


def chi_square_uniformity(
    d: int,
    n: int,
    samples: int,
    seed: int,
    kernel: Optional[str] = None,
    force: bool = False,
    _histogram=None,
) -> ChiSquareReport:
    """Goodness of fit of the growth chain against the uniform law.

    Grows ``samples`` independent chains to size n with one PRNG stream,
    bins the final shapes by preorder code, and compares against equal
    class masses.  Needs at least 10 samples per class.  ``_histogram``
    lets tests substitute a tampered sampler.
    """
    classes = count_trees(d, n)
    _guard(classes, force)
    if samples < 10 * classes:
        raise UnderpoweredTestError(
            f"{samples} samples for {classes} classes; need at least {10 * classes}"
        )
    if _histogram is None:
        k = make_kernel(d, seed, kernel)
        observed = k.histogram(n, samples)
    else:
        observed = _histogram(d, n, samples, seed)
    class_keys = {bytes(code) for code in _codes(d, n)}
    unknown = sum(c for key, c in observed.items() if key not in class_keys)
    if unknown:
        # shapes outside the enumerated class set mean the sampler is broken
        return ChiSquareReport(classes, math.inf, classes - 1, 0.0, samples, seed)
    expected = samples / classes
    statistic = sum(
        (observed.get(key, 0) - expected) ** 2 / expected for key in class_keys
    )
    dof = classes - 1
    return ChiSquareReport(
        classes, statistic, dof, chi_square_p_value(statistic, dof), samples, seed
    )


def height_stats(d: int, n: int, reps: int, seed: int, kernel: Optional[str] = None) -> dict:
    """Mean, stddev, min and max height over ``reps`` independent chains.

    Descriptive output for eyeballing; no distributional claim is made or
    verified here.
    """
    k = make_kernel(d, seed, kernel)
    heights = []
    for _ in range(reps):
        k.reset()
        k.steps(n)
        heights.append(k.height())
    mean = sum(heights) / len(heights)
    var = sum((h - mean) ** 2 for h in heights) / len(heights)
    return {
        "d": d,
        "n": n,
        "reps": reps,
        "seed": seed,
        "mean": mean,
        "stddev": math.sqrt(var),
        "min": min(heights),
        "max": max(heights),
    }
