"""Uniform growth chains.

Starting from the single-node tree, each step draws a uniform (d-1)-subset
of the edge-plus-bud universe and a uniform letter, applies the growth
bijection, and forgets the marks.  Every tree in the resulting chain is
exactly uniform over the d-ary trees of its size.

The heavy lifting happens in a kernel: the compiled one from
``darygrow._growth_cy`` when available, otherwise the pure-Python twin in
``darygrow._growth_py``.  Set the environment variable DARYGROW_PURE_PYTHON
to any non-empty value to force the fallback.  Both kernels implement the
same observable contract, documented in ``_growth_py``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, List, Tuple

from .errors import ArityError
from .marks import Bud, EdgeMark, MarkTarget
from .tree import DaryTree

_MASK = (1 << 64) - 1


class SplitMix64:
    """The package PRNG: splitmix64, fixed for cross-platform determinism.

    State advances by the 64-bit golden gamma; outputs pass through the
    standard two-round finalizer.  ``draws`` counts raw 64-bit outputs.
    """

    __slots__ = ("state", "draws")

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK
        self.draws = 0

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        self.draws += 1
        return z ^ (z >> 31)

    def uniform_below(self, k: int) -> int:
        """Unbiased uniform integer in [0, k).

        Rejection rule: draws at or above floor(2^64 / k) * k are discarded
        and redrawn.  k = 1 consumes no draw.
        """
        if k < 1:
            raise ValueError("uniform_below needs k >= 1")
        if k == 1:
            return 0
        threshold = ((1 << 64) // k) * k
        while True:
            x = self.next64()
            if x < threshold:
                return x % k


def uniform_below(rng: SplitMix64, k: int) -> int:
    return rng.uniform_below(k)


def sample_mark_set(rng: SplitMix64, tree: DaryTree) -> List[MarkTarget]:
    """Uniform (d-1)-subset of the edges and buds of ``tree``.

    Ranks below the edge count name edges through the tree's own arena
    order of non-root nodes; the top d-1 ranks name the buds.  Duplicate
    ranks are rejected and redrawn, so the subset is exactly uniform.
    """
    d = tree.d
    universe = tree.edge_count + d - 1
    picked: List[int] = []
    while len(picked) < d - 1:
        r = rng.uniform_below(universe)
        if r not in picked:
            picked.append(r)
    marks: List[MarkTarget] = []
    for r in picked:
        if r < tree.edge_count:
            marks.append(EdgeMark(tree.nonroot_node_at(r)))
        else:
            marks.append(Bud(r - tree.edge_count))
    return marks


# ----------------------------------------------------------------------
# kernel selection


def _select_kernel_module():
    if os.environ.get("DARYGROW_PURE_PYTHON"):
        from . import _growth_py

        return _growth_py
    try:
        from . import _growth_cy  # type: ignore[attr-defined]

        return _growth_cy
    except ImportError:
        from . import _growth_py

        return _growth_py


_kernel_module = _select_kernel_module()


def kernel_name() -> str:
    """Which kernel implementation this process selected at import."""
    return _kernel_module.KERNEL_NAME


def make_kernel(d: int, seed: int, kernel: str | None = None):
    """A fresh growth kernel; ``kernel`` forces "python" or "cython"."""
    if kernel is None:
        mod = _kernel_module
    elif kernel == "python":
        from . import _growth_py as mod  # type: ignore[no-redef]
    elif kernel == "cython":
        from . import _growth_cy as mod  # type: ignore[no-redef]
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    return mod.GrowthKernel(d, seed)


@dataclass(frozen=True)
class OpCounters:
    """Cost counters accumulated over a run; all monotone non-decreasing."""

    node_allocations: int = 0
    link_redirections: int = 0
    rng_draws: int = 0
    lex_letters_compared: int = 0


class GrowthState:
    """A growth chain in progress: current tree, step number, PRNG, counters.

    Thin wrapper over a kernel instance.  ``tree`` materializes the current
    shape as a fresh :class:`DaryTree` on each access.
    """

    __slots__ = ("kernel",)

    def __init__(self, d: int, seed: int, kernel: str | None = None) -> None:
        if d < 2:
            raise ArityError(f"arity must be >= 2, got {d}")
        self.kernel = make_kernel(d, seed, kernel)

    @property
    def d(self) -> int:
        return self.kernel.d

    @property
    def step(self) -> int:
        return self.kernel.n

    @property
    def tree(self) -> DaryTree:
        return DaryTree.from_preorder_code(self.kernel.d, self.kernel.preorder_code())

    @property
    def counters(self) -> OpCounters:
        k = self.kernel
        return OpCounters(
            node_allocations=k.node_allocations,
            link_redirections=k.link_redirections,
            rng_draws=k.rng_draws,
            lex_letters_compared=k.lex_letters_compared,
        )


def grow_step(state: GrowthState) -> None:
    """Advance the chain by one internal node; marks are not retained."""
    state.kernel.step()


def grow_to(
    d: int, n: int, seed: int, kernel: str | None = None
) -> Tuple[DaryTree, OpCounters]:
    """Grow a uniform tree with ``n`` internal nodes from the given seed."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    state = GrowthState(d, seed, kernel)
    state.kernel.steps(n)
    return state.tree, state.counters


def chain(d: int, seed: int, kernel: str | None = None) -> Iterator[DaryTree]:
    """Lazy stream of snapshots t_0, t_1, ...; each yield is a fresh copy."""
    state = GrowthState(d, seed, kernel)
    while True:
        yield state.tree
        state.kernel.step()
