# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled growth kernel.

Behaviour contract (PRNG, draw order, arena layout, allocation order,
counters) is documented in ``_growth_py``; the two kernels must stay
observably identical.  This one keeps the arena in flat C arrays and times
the lex-ordering phase with the monotonic clock.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize, PyBytes_AS_STRING
from cpython.mem cimport PyMem_Free, PyMem_Malloc, PyMem_Realloc
from libc.stdint cimport int64_t, uint64_t
from posix.time cimport CLOCK_MONOTONIC, clock_gettime, timespec

KERNEL_NAME = "cython"

cdef uint64_t _U64MAX = 18446744073709551615ULL


cdef inline double _now():
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef class GrowthKernel:
    cdef readonly int d
    cdef readonly long n
    cdef readonly long node_allocations
    cdef readonly long link_redirections
    cdef readonly long rng_draws
    cdef readonly long lex_letters_compared
    cdef readonly double lex_seconds
    cdef readonly long max_step_redirections

    cdef uint64_t _state
    cdef long _nodes
    cdef long _cap
    cdef int* _parent
    cdef signed char* _slot
    cdef int* _child
    # per-step scratch, sized by d
    cdef long* _rk
    cdef long* _buds
    cdef long* _edges
    cdef long* _rem
    cdef long* _pos
    cdef signed char* _taken
    # word scratch for the lex phase
    cdef int* _words
    cdef long _words_cap
    cdef long* _woff
    cdef long* _wlen

    def __cinit__(self, int d, seed):
        if d < 2:
            raise ValueError(f"arity must be >= 2, got {d}")
        self.d = d
        self._state = <uint64_t> (int(seed) & 0xFFFFFFFFFFFFFFFF)
        self._cap = 0
        self._words_cap = 0
        self._parent = NULL
        self._slot = NULL
        self._child = NULL
        self._words = NULL
        self._ensure(1024)
        self._rk = <long*> PyMem_Malloc(d * sizeof(long))
        self._buds = <long*> PyMem_Malloc(d * sizeof(long))
        self._edges = <long*> PyMem_Malloc(d * sizeof(long))
        self._rem = <long*> PyMem_Malloc(d * sizeof(long))
        self._pos = <long*> PyMem_Malloc(d * sizeof(long))
        self._taken = <signed char*> PyMem_Malloc(d)
        self._woff = <long*> PyMem_Malloc(d * sizeof(long))
        self._wlen = <long*> PyMem_Malloc(d * sizeof(long))
        if (self._rk == NULL or self._buds == NULL or self._edges == NULL
                or self._rem == NULL or self._pos == NULL or self._taken == NULL
                or self._woff == NULL or self._wlen == NULL):
            raise MemoryError()
        self.reset()
        self.rng_draws = 0

    def __dealloc__(self):
        PyMem_Free(self._parent)
        PyMem_Free(self._slot)
        PyMem_Free(self._child)
        PyMem_Free(self._rk)
        PyMem_Free(self._buds)
        PyMem_Free(self._edges)
        PyMem_Free(self._rem)
        PyMem_Free(self._pos)
        PyMem_Free(self._taken)
        PyMem_Free(self._words)
        PyMem_Free(self._woff)
        PyMem_Free(self._wlen)

    @property
    def name(self):
        return KERNEL_NAME

    @property
    def root(self):
        return self.d * self.n

    @property
    def node_count(self):
        return self.d * self.n + 1

    # ------------------------------------------------------------------
    # memory

    cdef int _ensure(self, long nodes) except -1:
        cdef long cap = self._cap
        if nodes <= cap:
            return 0
        if cap == 0:
            cap = 1024
        while cap < nodes:
            cap *= 2
        self._parent = <int*> PyMem_Realloc(self._parent, cap * sizeof(int))
        self._slot = <signed char*> PyMem_Realloc(self._slot, cap)
        self._child = <int*> PyMem_Realloc(self._child, cap * self.d * sizeof(int))
        if self._parent == NULL or self._slot == NULL or self._child == NULL:
            raise MemoryError()
        self._cap = cap
        return 0

    cdef int _ensure_words(self, long letters) except -1:
        cdef long cap = self._words_cap
        if letters <= cap:
            return 0
        if cap == 0:
            cap = 256
        while cap < letters:
            cap *= 2
        self._words = <int*> PyMem_Realloc(self._words, cap * sizeof(int))
        if self._words == NULL:
            raise MemoryError()
        self._words_cap = cap
        return 0

    # ------------------------------------------------------------------
    # PRNG (splitmix64)

    cdef inline uint64_t _next64(self):
        self._state += <uint64_t> 0x9E3779B97F4A7C15ULL
        cdef uint64_t z = self._state
        z = (z ^ (z >> 30)) * <uint64_t> 0xBF58476D1CE4E5B9ULL
        z = (z ^ (z >> 27)) * <uint64_t> 0x94D049BB133111EBULL
        self.rng_draws += 1
        return z ^ (z >> 31)

    cdef uint64_t _uniform_below(self, uint64_t k):
        # reject draws at or above floor(2^64 / k) * k; k == 1 draws nothing
        cdef uint64_t x, rem, lim
        if k == 1:
            return 0
        rem = (0 - k) % k          # 2^64 mod k in uint64 arithmetic
        lim = _U64MAX - rem        # accept x <= lim
        while True:
            x = self._next64()
            if x <= lim:
                return x % k

    def uniform_below(self, k):
        if k < 1:
            raise ValueError("uniform_below needs k >= 1")
        return self._uniform_below(<uint64_t> k)

    def reseed(self, seed):
        self._state = <uint64_t> (int(seed) & 0xFFFFFFFFFFFFFFFF)
        self.rng_draws = 0

    # ------------------------------------------------------------------
    # state

    def reset(self):
        """Back to the single-node tree; counters cleared, PRNG untouched."""
        self.n = 0
        self._nodes = 1
        self._parent[0] = -1
        self._slot[0] = 0
        self._child[0] = -1
        self.node_allocations = 0
        self.link_redirections = 0
        self.lex_letters_compared = 0
        self.lex_seconds = 0.0
        self.max_step_redirections = 0

    cdef inline long _alloc_leaf(self) except -1:
        cdef long v = self._nodes
        if v >= self._cap:
            self._ensure(v + 1)
        self._parent[v] = -1
        self._slot[v] = 0
        self._child[v * self.d] = -1
        self._nodes += 1
        self.node_allocations += 1
        return v

    # ------------------------------------------------------------------
    # lex ordering of marked edges

    cdef long _depth(self, long u):
        cdef long h = 0
        while self._parent[u] >= 0:
            h += 1
            u = self._parent[u]
        return h

    cdef void _sort_edges_desc(self, long* edges, int ne):
        cdef long total = 0
        cdef int i, j
        cdef long u, w
        for i in range(ne):
            self._wlen[i] = self._depth(edges[i])
            total += self._wlen[i]
        self._ensure_words(total)
        w = 0
        for i in range(ne):
            self._woff[i] = w
            w += self._wlen[i]
            u = edges[i]
            j = 0
            while self._parent[u] >= 0:
                j += 1
                self._words[w - j] = self._slot[u]
                u = self._parent[u]
        # insertion sort, largest word first, counting letter comparisons
        cdef long eu, eo, el
        cdef int sign
        for i in range(1, ne):
            eu = edges[i]
            eo = self._woff[i]
            el = self._wlen[i]
            j = i - 1
            while j >= 0:
                sign = self._cmp_words(self._woff[j], self._wlen[j], eo, el)
                if sign < 0:
                    edges[j + 1] = edges[j]
                    self._woff[j + 1] = self._woff[j]
                    self._wlen[j + 1] = self._wlen[j]
                    j -= 1
                else:
                    break
            edges[j + 1] = eu
            self._woff[j + 1] = eo
            self._wlen[j + 1] = el

    cdef int _cmp_words(self, long ao, long al, long bo, long bl):
        cdef long limit = al if al < bl else bl
        cdef long i = 0
        cdef int* words = self._words
        while i < limit:
            if words[ao + i] != words[bo + i]:
                self.lex_letters_compared += i + 1
                return -1 if words[ao + i] < words[bo + i] else 1
            i += 1
        self.lex_letters_compared += i
        if al == bl:
            return 0
        return -1 if al < bl else 1

    # ------------------------------------------------------------------
    # one growth step

    cdef int _apply(self, long* ranks, int letter) except -1:
        cdef int d = self.d
        cdef long edge_count = d * self.n
        cdef long before = self.link_redirections
        cdef int i, j, nb = 0, ne = 0, nrem = 0
        cdef long r, u, v, pu, c, base, old_root, new_root, delta
        cdef double t0

        for i in range(d - 1):
            r = ranks[i]
            if r >= edge_count:
                self._buds[nb] = r - edge_count
                nb += 1
            else:
                self._edges[ne] = r
                ne += 1
        # buds ascending (insertion sort, tiny)
        for i in range(1, nb):
            r = self._buds[i]
            j = i - 1
            while j >= 0 and self._buds[j] > r:
                self._buds[j + 1] = self._buds[j]
                j -= 1
            self._buds[j + 1] = r

        old_root = d * self.n
        for i in range(d):
            self._taken[i] = 0
        for i in range(nb):
            self._pos[self._buds[i]] = self._alloc_leaf()
            self._taken[self._buds[i]] = 1
        for i in range(d):
            if not self._taken[i]:
                self._rem[nrem] = i
                nrem += 1

        if ne >= 2:
            t0 = _now()
            self._sort_edges_desc(self._edges, ne)
            self.lex_seconds += _now() - t0

        for i in range(ne):
            u = self._edges[i]
            v = self._alloc_leaf()
            pu = self._parent[u]
            self._child[pu * d + self._slot[u] - 1] = v
            self._parent[v] = pu
            self._slot[v] = self._slot[u]
            self.link_redirections += 2
            nrem -= 1
            self._pos[self._rem[nrem]] = u

        self._pos[self._rem[0]] = old_root

        new_root = self._alloc_leaf()
        base = new_root * d
        for i in range(d):
            c = self._pos[(i + letter) % d]
            self._child[base + i] = c
            self._parent[c] = new_root
            self._slot[c] = i + 1
            self.link_redirections += 2
        self._parent[new_root] = -1
        self._slot[new_root] = 0
        self.n += 1

        delta = self.link_redirections - before
        if delta > self.max_step_redirections:
            self.max_step_redirections = delta
        return 0

    def step(self):
        cdef int d = self.d
        cdef long universe = d * self.n + d - 1
        cdef int got = 0, i
        cdef long r
        cdef bint dup
        self._ensure(self._nodes + d)
        while got < d - 1:
            r = <long> self._uniform_below(<uint64_t> universe)
            dup = False
            for i in range(got):
                if self._rk[i] == r:
                    dup = True
                    break
            if not dup:
                self._rk[got] = r
                got += 1
        cdef int letter = <int> self._uniform_below(<uint64_t> d) + 1
        self._apply(self._rk, letter)

    def step_with(self, ranks, letter):
        """Apply one step with externally chosen ranks and letter (test hook)."""
        cdef int d = self.d
        cdef long universe = d * self.n + d - 1
        ranks = list(ranks)
        if len(ranks) != d - 1 or len(set(ranks)) != d - 1:
            raise ValueError(f"need {d - 1} distinct ranks")
        cdef int i
        for i in range(d - 1):
            if not 0 <= ranks[i] < universe:
                raise ValueError(f"rank outside [0, {universe})")
            self._rk[i] = ranks[i]
        if not 1 <= letter <= d:
            raise ValueError(f"letter {letter} outside 1..{d}")
        self._ensure(self._nodes + d)
        self._apply(self._rk, <int> letter)

    def steps(self, k):
        cdef long i, kk = k
        self._ensure(self.d * (self.n + kk) + 1)
        for i in range(kk):
            self.step()

    # ------------------------------------------------------------------
    # inspection

    def edge_word(self, rank):
        """Root word of the edge's child node for a given rank."""
        if not 0 <= rank < self.d * self.n:
            raise IndexError(f"edge rank {rank} outside [0, {self.d * self.n})")
        cdef long u = rank
        letters = []
        while self._parent[u] >= 0:
            letters.append(self._slot[u])
            u = self._parent[u]
        letters.reverse()
        return tuple(letters)

    def preorder_code(self):
        cdef int d = self.d
        cdef long nodes = self._nodes
        cdef long* stack = <long*> PyMem_Malloc(nodes * sizeof(long))
        if stack == NULL:
            raise MemoryError()
        cdef long top = 0, u, base
        cdef int j
        code = []
        stack[0] = self.d * self.n
        top = 1
        try:
            while top:
                top -= 1
                u = stack[top]
                base = u * d
                if self._child[base] < 0:
                    code.append(0)
                else:
                    code.append(d)
                    for j in range(d - 1, -1, -1):
                        stack[top] = self._child[base + j]
                        top += 1
        finally:
            PyMem_Free(stack)
        return code

    def code_bytes(self):
        cdef int d = self.d
        cdef long nodes = self._nodes
        cdef long length = d * self.n + 1
        out = PyBytes_FromStringAndSize(NULL, length)
        cdef char* buf = PyBytes_AS_STRING(out)
        cdef long* stack = <long*> PyMem_Malloc(nodes * sizeof(long))
        if stack == NULL:
            raise MemoryError()
        cdef long top = 1, pos = 0, u, base
        cdef int j
        stack[0] = d * self.n
        try:
            while top:
                top -= 1
                u = stack[top]
                base = u * d
                if self._child[base] < 0:
                    buf[pos] = 0
                    pos += 1
                else:
                    buf[pos] = <char> d
                    pos += 1
                    for j in range(d - 1, -1, -1):
                        stack[top] = self._child[base + j]
                        top += 1
        finally:
            PyMem_Free(stack)
        return out

    def height(self):
        cdef int d = self.d
        cdef long nodes = self._nodes
        # two stacks in one buffer: node and depth
        cdef long* stack = <long*> PyMem_Malloc(2 * nodes * sizeof(long))
        if stack == NULL:
            raise MemoryError()
        cdef long top = 1, u, h, best = 0, base
        cdef int j
        stack[0] = d * self.n
        stack[nodes] = 0
        try:
            while top:
                top -= 1
                u = stack[top]
                h = stack[nodes + top]
                base = u * d
                if self._child[base] < 0:
                    if h > best:
                        best = h
                else:
                    for j in range(d):
                        stack[top] = self._child[base + j]
                        stack[nodes + top] = h + 1
                        top += 1
        finally:
            PyMem_Free(stack)
        return best

    def histogram(self, n, chains):
        """Shape counts over repeated chains to size n (one PRNG stream)."""
        counts = {}
        cdef long i, nn = n, reps = chains
        for i in range(reps):
            self.reset()
            self.steps(nn)
            key = self.code_bytes()
            if key in counts:
                counts[key] += 1
            else:
                counts[key] = 1
        return counts
