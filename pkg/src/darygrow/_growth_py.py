"""Pure-Python growth kernel.

Identical observable behaviour to the compiled kernel in ``_growth_cy``:
same PRNG, same draw order, same arena layout, same counters.  The layout
contract (which also pins cross-implementation determinism, see README):

* the arena is always compact: after k steps the live ids are exactly
  0 .. d*k, the root is d*k, and edge rank r maps to node id r;
* each step allocates exactly d nodes, in this order: one singleton per
  marked bud (ascending bud index), one replacement leaf per marked edge
  (edges processed in descending lexicographic order of their words), and
  the new root last;
* per step the PRNG serves first the d-1 distinct ranks (rejection on the
  top range inside uniform_below; a rank equal to an earlier one in the
  same step is drawn again, earlier ranks are kept), then the letter.

``link_redirections`` counts parent and child pointer writes during
surgery; the per-step count is 2*(marked edges) + 2*d, at most 4*d - 2.
``lex_letters_compared`` counts letter pair comparisons while ordering the
marked edges; the time spent materializing and ordering edge words is
accumulated separately in ``lex_seconds`` because it is the only per-step
cost that is not O(d).
"""

import time

KERNEL_NAME = "python"

_MASK = (1 << 64) - 1


def _compare_words(a, b):
    """Lexicographic compare counting letter comparisons: (sign, compared)."""
    limit = min(len(a), len(b))
    i = 0
    while i < limit:
        if a[i] != b[i]:
            return (-1 if a[i] < b[i] else 1), i + 1
        i += 1
    if len(a) == len(b):
        return 0, i
    return (-1 if len(a) < len(b) else 1), i


def _insertion_sort_desc(keyed):
    """Sort (word, node) pairs by word, largest first; return compare count."""
    compared = 0
    for i in range(1, len(keyed)):
        item = keyed[i]
        j = i - 1
        while j >= 0:
            sign, letters = _compare_words(keyed[j][0], item[0])
            compared += letters
            if sign < 0:
                keyed[j + 1] = keyed[j]
                j -= 1
            else:
                break
        keyed[j + 1] = item
    return compared


class GrowthKernel:
    name = KERNEL_NAME

    def __init__(self, d, seed):
        if d < 2:
            raise ValueError(f"arity must be >= 2, got {d}")
        self.d = d
        self._state = seed & _MASK
        self._leafmark = [-1] * d
        self.reset()
        self.rng_draws = 0

    # ------------------------------------------------------------------
    # PRNG (splitmix64)

    def _next64(self):
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        self.rng_draws += 1
        return z ^ (z >> 31)

    def uniform_below(self, k):
        if k < 1:
            raise ValueError("uniform_below needs k >= 1")
        if k == 1:
            return 0
        threshold = ((1 << 64) // k) * k
        while True:
            x = self._next64()
            if x < threshold:
                return x % k

    def reseed(self, seed):
        self._state = seed & _MASK
        self.rng_draws = 0

    # ------------------------------------------------------------------
    # state

    def reset(self):
        """Back to the single-node tree; counters cleared, PRNG untouched."""
        self.n = 0
        self._parent = [-1]
        self._slot = [0]
        self._child = [-1] * self.d
        self.node_allocations = 0
        self.link_redirections = 0
        self.lex_letters_compared = 0
        self.lex_seconds = 0.0
        self.max_step_redirections = 0

    @property
    def root(self):
        return self.d * self.n

    @property
    def node_count(self):
        return self.d * self.n + 1

    def _alloc_leaf(self):
        v = len(self._parent)
        self._parent.append(-1)
        self._slot.append(0)
        self._child.extend(self._leafmark)
        self.node_allocations += 1
        return v

    def _word(self, u):
        parent, slot = self._parent, self._slot
        letters = []
        while parent[u] >= 0:
            letters.append(slot[u])
            u = parent[u]
        letters.reverse()
        return letters

    def edge_word(self, rank):
        """Root word of the edge's child node for a given rank."""
        if not 0 <= rank < self.d * self.n:
            raise IndexError(f"edge rank {rank} outside [0, {self.d * self.n})")
        return tuple(self._word(rank))

    # ------------------------------------------------------------------
    # one growth step

    def step(self):
        d = self.d
        universe = d * self.n + d - 1
        ranks = []
        while len(ranks) < d - 1:
            r = self.uniform_below(universe)
            if r not in ranks:
                ranks.append(r)
        letter = self.uniform_below(d) + 1
        self._apply(ranks, letter)

    def step_with(self, ranks, letter):
        """Apply one step with externally chosen ranks and letter (test hook)."""
        d = self.d
        universe = d * self.n + d - 1
        ranks = list(ranks)
        if len(ranks) != d - 1 or len(set(ranks)) != d - 1:
            raise ValueError(f"need {d - 1} distinct ranks")
        if any(not 0 <= r < universe for r in ranks):
            raise ValueError(f"rank outside [0, {universe})")
        if not 1 <= letter <= d:
            raise ValueError(f"letter {letter} outside 1..{d}")
        self._apply(ranks, letter)

    def _apply(self, ranks, letter):
        d = self.d
        parent, slot, child = self._parent, self._slot, self._child
        edge_count = d * self.n
        before = self.link_redirections

        buds = sorted(r - edge_count for r in ranks if r >= edge_count)
        edges = [r for r in ranks if r < edge_count]

        pos_root = [-1] * d
        taken = [False] * d
        for i in buds:
            pos_root[i] = self._alloc_leaf()
            taken[i] = True
        remaining = [i for i in range(d) if not taken[i]]

        if len(edges) > 1:
            t0 = time.perf_counter_ns()
            keyed = [(self._word(u), u) for u in edges]
            self.lex_letters_compared += _insertion_sort_desc(keyed)
            edges = [u for _, u in keyed]
            self.lex_seconds += (time.perf_counter_ns() - t0) * 1e-9

        for u in edges:
            v = self._alloc_leaf()
            pu = parent[u]
            child[pu * d + slot[u] - 1] = v
            parent[v] = pu
            slot[v] = slot[u]
            self.link_redirections += 2
            pos_root[remaining.pop()] = u

        pos_root[remaining[0]] = self.root  # working tree, smallest position

        new_root = self._alloc_leaf()
        base = new_root * d
        for i in range(d):
            c = pos_root[(i + letter) % d]
            child[base + i] = c
            parent[c] = new_root
            slot[c] = i + 1
            self.link_redirections += 2
        parent[new_root] = -1
        slot[new_root] = 0
        self.n += 1

        delta = self.link_redirections - before
        if delta > self.max_step_redirections:
            self.max_step_redirections = delta

    def steps(self, k):
        for _ in range(k):
            self.step()

    # ------------------------------------------------------------------
    # inspection

    def preorder_code(self):
        d, child = self.d, self._child
        code = []
        stack = [self.root]
        while stack:
            u = stack.pop()
            base = u * d
            if child[base] < 0:
                code.append(0)
            else:
                code.append(d)
                for j in range(base + d - 1, base - 1, -1):
                    stack.append(child[j])
        return code

    def code_bytes(self):
        return bytes(self.preorder_code())

    def height(self):
        d, child = self.d, self._child
        best = 0
        stack = [(self.root, 0)]
        while stack:
            u, h = stack.pop()
            base = u * d
            if child[base] < 0:
                if h > best:
                    best = h
            else:
                for j in range(base, base + d):
                    stack.append((child[j], h + 1))
        return best

    def histogram(self, n, chains):
        """Shape counts over repeated chains to size n (one PRNG stream)."""
        counts = {}
        for _ in range(chains):
            self.reset()
            self.steps(n)
            key = self.code_bytes()
            counts[key] = counts.get(key, 0) + 1
        return counts
