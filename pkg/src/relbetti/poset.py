"""Finite posets stored as validated Hasse diagrams.

Elements are canonically reindexed along a stable topological sort, so index
order is always a linear extension; everything downstream (Koszul parent
orders, basis choices, JSON output) leans on that determinism. Covers must be
given as a transitive reduction; redundant covers are rejected rather than
silently dropped because module data is attached per cover.
"""
import heapq
import os

import numpy as np

from .errors import (
    CyclicCovers,
    NotSemilattice,
    RedundantCover,
    SizeBoundExceeded,
)

__all__ = [
    "Poset",
    "from_covers",
    "grid",
    "join",
    "meet_bounded",
    "is_upper_semilattice",
    "sublattice_closure",
    "antichain_poset",
    "min_elements",
    "max_elements",
    "upset_of",
    "CyclicCovers",
    "RedundantCover",
    "SizeBoundExceeded",
    "NotSemilattice",
    "DEFAULT_MAX_ANTICHAINS",
    "DEFAULT_MAX_ELEMENTS",
]

DEFAULT_MAX_ANTICHAINS = 100_000
DEFAULT_MAX_ELEMENTS = 10_000


def antichain_bound(override=None):
    if override is not None:
        return int(override)
    env = os.environ.get("RELBETTI_MAX_ANTICHAINS")
    return int(env) if env else DEFAULT_MAX_ANTICHAINS


class Poset:
    """Immutable finite poset. Query via integer element indices."""

    def __init__(self, names, covers, leq, coords=None, grid_shape=None,
                 semilattice=None):
        # internal constructor: data already canonical and validated
        self.n = len(names)
        self.names = tuple(names)
        self.covers = frozenset(covers)
        leq = np.asarray(leq, dtype=bool)
        leq.setflags(write=False)
        self._leq = leq
        self.coords = tuple(coords) if coords is not None else None
        self.grid_shape = grid_shape
        self._name_to_index = {nm: i for i, nm in enumerate(self.names)}
        par = [[] for _ in range(self.n)]
        chi = [[] for _ in range(self.n)]
        for a, b in sorted(self.covers):
            par[b].append(a)
            chi[a].append(b)
        self._parents = tuple(tuple(sorted(x)) for x in par)
        self._children = tuple(tuple(sorted(x)) for x in chi)
        self._semilattice = semilattice
        self._hash = hash((self.names, self.covers))

    # -- construction ---------------------------------------------------

    @staticmethod
    def from_covers(names, covers, coords=None):
        names = list(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate element names")
        idx = {nm: i for i, nm in enumerate(names)}
        n = len(names)
        pairs = []
        seen = set()
        for a, b in covers:
            ia, ib = idx[a], idx[b]
            if ia == ib:
                raise CyclicCovers(f"self-cover at {a!r}")
            if (ia, ib) in seen:
                raise ValueError(f"duplicate cover {a!r} < {b!r}")
            seen.add((ia, ib))
            pairs.append((ia, ib))

        # stable topological order: Kahn with a min-heap on original index
        indeg = [0] * n
        out = [[] for _ in range(n)]
        for a, b in pairs:
            indeg[b] += 1
            out[a].append(b)
        heap = [i for i in range(n) if indeg[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(order) != n:
            stuck = [names[i] for i in range(n) if i not in set(order)]
            raise CyclicCovers(f"cover digraph has a cycle through {stuck}")
        new_of_old = {old: new for new, old in enumerate(order)}
        names2 = [names[old] for old in order]
        coords2 = [coords[old] for old in order] if coords is not None else None
        pairs2 = sorted((new_of_old[a], new_of_old[b]) for a, b in pairs)

        leq = np.eye(n, dtype=bool)
        ups = [[] for _ in range(n)]
        for a, b in pairs2:
            ups[a].append(b)
        for a in range(n - 1, -1, -1):
            for b in ups[a]:
                leq[a] |= leq[b]
        strict = leq & ~np.eye(n, dtype=bool)
        for a, b in pairs2:
            if bool(np.any(strict[a] & strict[:, b])):
                raise RedundantCover(
                    f"cover {names2[a]!r} < {names2[b]!r} is implied transitively"
                )
        return Poset(names2, pairs2, leq, coords=coords2)

    @staticmethod
    def from_order(names, leq, coords=None):
        """Build from a full order relation; covers = transitive reduction."""
        names = list(names)
        n = len(names)
        leq = np.asarray(leq, dtype=bool)
        if leq.shape != (n, n):
            raise ValueError("order matrix shape mismatch")
        if not np.all(np.diag(leq)):
            raise ValueError("order not reflexive")
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise ValueError("order not antisymmetric")
        closure = (leq.astype(np.float32) @ leq.astype(np.float32)) > 0.5
        if np.any(closure & ~leq):
            raise ValueError("order not transitive")
        strict = leq & ~np.eye(n, dtype=bool)
        two_step = (strict.astype(np.float32) @ strict.astype(np.float32)) > 0.5
        cov = strict & ~two_step
        pairs = [(int(a), int(b)) for a, b in zip(*np.nonzero(cov))]
        return Poset.from_covers(
            names, [(names[a], names[b]) for a, b in pairs], coords=coords
        )

    @staticmethod
    def grid(n, r, max_elements=None):
        if n < 0 or r < 1:
            raise ValueError("grid needs n >= 0, r >= 1")
        bound = DEFAULT_MAX_ELEMENTS if max_elements is None else int(max_elements)
        total = (n + 1) ** r
        if total > bound:
            raise SizeBoundExceeded(f"grid has {total} elements, bound {bound}")
        coords = []

        def gen(prefix):
            if len(prefix) == r:
                coords.append(tuple(prefix))
                return
            for c in range(n + 1):
                gen(prefix + [c])

        gen([])
        # lexicographic coordinate order is a linear extension
        index = {c: i for i, c in enumerate(coords)}
        names = [",".join(str(c) for c in co) for co in coords]
        size = len(coords)
        leq = np.ones((size, size), dtype=bool)
        for k in range(r):
            col = np.array([c[k] for c in coords])
            leq &= col[:, None] <= col[None, :]
        pairs = []
        for i, co in enumerate(coords):
            for k in range(r):
                if co[k] < n:
                    up = list(co)
                    up[k] += 1
                    pairs.append((i, index[tuple(up)]))
        p = Poset(names, sorted(pairs), leq, coords=coords, grid_shape=(n, r),
                  semilattice=True)
        return p

    @staticmethod
    def from_json(obj):
        if "grid" in obj:
            return Poset.grid(int(obj["grid"]["n"]), int(obj["grid"]["r"]))
        return Poset.from_covers(
            list(obj["elements"]), [tuple(c) for c in obj["covers"]]
        )

    def to_json(self):
        if self.grid_shape is not None:
            n, r = self.grid_shape
            return {"grid": {"n": n, "r": r}}
        covers = sorted((self.names[a], self.names[b]) for a, b in self.covers)
        return {
            "elements": list(self.names),
            "covers": [[a, b] for a, b in covers],
        }

    # -- queries --------------------------------------------------------

    def index(self, name):
        return self._name_to_index[name]

    def leq(self, a, b):
        return bool(self._leq[a, b])

    @property
    def leq_matrix(self):
        return self._leq

    def parents(self, a):
        return self._parents[a]

    def children(self, a):
        return self._children[a]

    def up_mask(self, a):
        return self._leq[a]

    def down_mask(self, a):
        return self._leq[:, a]

    def up(self, a):
        return frozenset(int(x) for x in np.nonzero(self._leq[a])[0])

    def down(self, a):
        return frozenset(int(x) for x in np.nonzero(self._leq[:, a])[0])

    def join(self, elements):
        elements = list(elements)
        if not elements:
            raise ValueError("join of the empty set is excluded")
        cand = np.all(self._leq[elements], axis=0)
        hits = np.nonzero(cand)[0]
        if hits.size == 0:
            return None
        b0 = int(hits[0])  # smallest index is the only possible least element
        if bool(np.all(~cand | self._leq[b0])):
            return b0
        return None

    def meet_bounded(self, elements):
        elements = list(elements)
        if not elements:
            raise ValueError("meet of the empty set is excluded")
        cand = np.all(self._leq[:, elements], axis=1)
        hits = np.nonzero(cand)[0]
        if hits.size == 0:
            return None
        b0 = int(hits[-1])  # largest index is the only possible greatest element
        if bool(np.all(~cand | self._leq[:, b0])):
            return b0
        return None

    def is_upper_semilattice(self):
        if self._semilattice is None:
            ok = True
            for a in range(self.n):
                for b in range(a + 1, self.n):
                    if self.join([a, b]) is None:
                        ok = False
                        break
                if not ok:
                    break
            self._semilattice = ok
        return self._semilattice

    def sublattice_closure(self, elements):
        if not self.is_upper_semilattice():
            raise NotSemilattice("sublattice closure needs an upper semilattice")
        closed = set(elements)
        frontier = list(closed)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(closed):
                    j = self.join([a, b])
                    if j not in closed:
                        closed.add(j)
                        nxt.append(j)
            frontier = nxt
        return frozenset(closed)

    def min_elements(self, subset):
        s = list(subset)
        return frozenset(
            a for a in s if not any(b != a and self._leq[b, a] for b in s)
        )

    def max_elements(self, subset):
        s = list(subset)
        return frozenset(
            a for a in s if not any(b != a and self._leq[a, b] for b in s)
        )

    def upset_of(self, subset):
        s = list(subset)
        if not s:
            return frozenset()
        mask = np.any(self._leq[s], axis=0)
        return frozenset(int(x) for x in np.nonzero(mask)[0])

    def is_antichain(self, subset):
        s = list(subset)
        return not any(
            a != b and self._leq[a, b] for a in s for b in s
        )

    def is_upset(self, subset):
        s = set(subset)
        return all(b in s for a in s for b in self.up(a))

    def antichain_list(self, max_antichains=None):
        """All antichains as frozensets, enumeration order; bounded."""
        bound = antichain_bound(max_antichains)
        out = [frozenset()]
        strict_or_rev = self._leq | self._leq.T

        def extend(current, start):
            for e in range(start, self.n):
                if all(not strict_or_rev[x, e] for x in current):
                    nxt = current + [e]
                    out.append(frozenset(nxt))
                    if len(out) > bound:
                        raise SizeBoundExceeded(
                            f"more than {bound} antichains; raise the bound "
                            "via RELBETTI_MAX_ANTICHAINS or max_antichains"
                        )
                    extend(nxt, e + 1)

        extend([], 0)
        return out

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.names == other.names and self.covers == other.covers

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Poset({self.n} elements, {len(self.covers)} covers)"


def from_covers(names, covers, coords=None):
    return Poset.from_covers(names, covers, coords=coords)


def grid(n, r, max_elements=None):
    return Poset.grid(n, r, max_elements=max_elements)


def join(p, elements):
    return p.join(elements)


def meet_bounded(p, elements):
    return p.meet_bounded(elements)


def is_upper_semilattice(p):
    return p.is_upper_semilattice()


def sublattice_closure(p, elements):
    return p.sublattice_closure(elements)


def min_elements(p, subset):
    return p.min_elements(subset)


def max_elements(p, subset):
    return p.max_elements(subset)


def upset_of(p, subset):
    return p.upset_of(subset)


def antichain_name(p, antichain):
    inner = ";".join(p.names[i] for i in sorted(antichain))
    return "{" + inner + "}"


def antichain_poset(p, max_antichains=None):
    """The lattice of antichains of p, ordered by reverse upset containment.

    S <= T iff upset(S) contains upset(T); the empty antichain is the
    maximum. Element order: larger upsets first, ties broken by the sorted
    element tuple, which is a linear extension.
    """
    chains = p.antichain_list(max_antichains)
    ups = [p.upset_of(s) for s in chains]

    def key(i):
        return (-len(ups[i]), tuple(sorted(chains[i])))

    order = sorted(range(len(chains)), key=key)
    chains = [chains[i] for i in order]
    ups = [ups[i] for i in order]
    pos = {s: i for i, s in enumerate(chains)}
    names = [antichain_name(p, s) for s in chains]

    all_elts = frozenset(range(p.n))
    covers = []
    for t, ut in enumerate(ups):
        for v in p.max_elements(all_elts - ut):
            s = p.min_elements(ut | {v})
            covers.append((names[pos[s]], names[t]))
    ap = Poset.from_covers(names, covers)
    # from_covers keeps our order: it is already a linear extension
    assert ap.names == tuple(names)
    ap.antichains = tuple(chains)
    ap.antichain_index = {s: i for i, s in enumerate(chains)}
    ap._semilattice = True  # distributive lattice of upsets
    return ap
