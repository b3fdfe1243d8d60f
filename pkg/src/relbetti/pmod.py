"""Modules over a finite poset with GF(p) coefficients.

A module assigns a finite-dimensional space to every element and a matrix to
every cover relation; composites along longer chains are derived on demand.
Constructors cover the standard families (free modules, indicator modules of
upsets, spreads) plus the staircase demo module used throughout the tests.
"""

from functools import lru_cache

import numpy as np

from relbetti.errors import (
    FunctorialityViolation,
    InvalidSpread,
    PosetMismatch,
)
from relbetti.fieldlin import Matrix, hstack, rank, rref, solve


@lru_cache(maxsize=None)
def cached_zeros(rows, cols, p):
    return Matrix.zeros(rows, cols, p)


@lru_cache(maxsize=None)
def cached_identity(n, p):
    return Matrix.identity(n, p)


class PersistenceModule:
    """Functor from a finite poset to GF(p) vector spaces.

    Data: one dimension per element, one matrix per cover (a, b) of shape
    dims[b] x dims[a]. Maps omitted from the constructor default to zero.
    """

    def __init__(self, poset, p, dims, cover_maps):
        self.poset = poset
        self.p = int(p)
        dims = tuple(int(d) for d in dims)
        if len(dims) != poset.n:
            raise ValueError("need one dimension per poset element")
        if any(d < 0 for d in dims):
            raise ValueError("dimensions must be nonnegative")
        self.dims = dims
        extra = set(cover_maps) - poset.covers
        if extra:
            raise ValueError(f"maps attached to non-covers: {sorted(extra)}")
        maps = {}
        for a, b in sorted(poset.covers):
            m = cover_maps.get((a, b))
            if m is None:
                m = cached_zeros(dims[b], dims[a], self.p)
            if m.p != self.p:
                raise ValueError("cover map modulus differs from module modulus")
            if m.rows != dims[b] or m.cols != dims[a]:
                raise ValueError(
                    f"cover map {poset.names[a]!r} < {poset.names[b]!r} has shape "
                    f"{m.rows}x{m.cols}, expected {dims[b]}x{dims[a]}"
                )
            maps[(a, b)] = m
        self._cover_maps = maps
        self._composites = {}

    def cover_map(self, a, b):
        return self._cover_maps[(a, b)]

    def map(self, a, b):
        """Transition matrix for a <= b along the canonical cover chain."""
        if a == b:
            return cached_identity(self.dims[a], self.p)
        if not self.poset.leq(a, b):
            raise ValueError(
                f"{self.poset.names[a]!r} is not below {self.poset.names[b]!r}"
            )
        got = self._composites.get((a, b))
        if got is None:
            # canonical chain: always step through the smallest child under b
            c = next(c for c in self.poset.children(a) if self.poset.leq(c, b))
            got = self.map(c, b) @ self._cover_maps[(a, c)]
            self._composites[(a, b)] = got
        return got

    def __eq__(self, other):
        if not isinstance(other, PersistenceModule):
            return NotImplemented
        return (
            self.poset == other.poset
            and self.p == other.p
            and self.dims == other.dims
            and self._cover_maps == other._cover_maps
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"PersistenceModule(n={self.poset.n}, p={self.p}, "
            f"total_dim={sum(self.dims)})"
        )

    def to_json(self):
        dims = {
            self.poset.names[i]: d for i, d in enumerate(self.dims) if d > 0
        }
        maps = {}
        for (a, b), m in sorted(self._cover_maps.items()):
            if not m.is_zero():
                key = f"{self.poset.names[a]}<{self.poset.names[b]}"
                maps[key] = m.tolist()
        return {"poset": self.poset.to_json(), "dims": dims, "maps": maps}

    @staticmethod
    def from_json(obj, p):
        from relbetti.poset import Poset

        poset = Poset.from_json(obj["poset"])
        dims = [int(obj.get("dims", {}).get(nm, 0)) for nm in poset.names]
        maps = {}
        for key, rows in obj.get("maps", {}).items():
            na, _, nb = key.partition("<")
            a, b = poset.index(na), poset.index(nb)
            if (a, b) not in poset.covers:
                raise ValueError(f"map key {key!r} is not a cover relation")
            maps[(a, b)] = Matrix(rows, p)
        return PersistenceModule(poset, p, dims, maps)


def validate(m):
    """Check path independence; raises FunctorialityViolation with a witness."""
    poset = m.poset
    for a in range(poset.n):
        for b in range(poset.n):
            if b == a or not poset.leq(a, b):
                continue
            ab = m.map(a, b)
            for c in poset.children(b):
                if m.map(a, c) != m.cover_map(b, c) @ ab:
                    raise FunctorialityViolation(
                        f"composites to {poset.names[c]!r} from "
                        f"{poset.names[a]!r} disagree through {poset.names[b]!r}"
                    )
    return m


class Submodule:
    """A subspace of each value of an ambient module, stable under its maps."""

    def __init__(self, ambient, basis):
        self.ambient = ambient
        self.basis = tuple(basis)
        if len(self.basis) != ambient.poset.n:
            raise ValueError("need one basis matrix per element")
        for i, bm in enumerate(self.basis):
            if bm.rows != ambient.dims[i]:
                raise ValueError(f"basis at element {i} has wrong height")
            if rank(bm) != bm.cols:
                raise ValueError(f"basis at element {i} is not independent")

    def dim(self, a):
        return self.basis[a].cols

    def check_stable(self):
        amb = self.ambient
        for a, b in sorted(amb.poset.covers):
            img = amb.cover_map(a, b) @ self.basis[a]
            if img.cols == 0:
                continue
            joint = hstack([self.basis[b], img], rows=amb.dims[b], p=amb.p)
            if rank(joint) != rank(self.basis[b]):
                raise ValueError(
                    f"submodule not stable along cover ({a}, {b})"
                )
        return self


def zero_module(poset, p):
    return PersistenceModule(poset, p, [0] * poset.n, {})


def free_on(poset, generators, p):
    """Free module on a list of generators (with repetition allowed).

    At each element the alive generators, in list order, index the
    coordinates; transitions are the induced 0/1 selection matrices.
    """
    gens = tuple(int(g) for g in generators)
    alive = []
    for x in range(poset.n):
        alive.append([k for k, g in enumerate(gens) if poset.leq(g, x)])
    dims = [len(a) for a in alive]
    maps = {}
    for a, b in poset.covers:
        rows_at = {k: r for r, k in enumerate(alive[b])}
        arr = np.zeros((dims[b], dims[a]), dtype=np.int64)
        for c, k in enumerate(alive[a]):
            arr[rows_at[k], c] = 1
        maps[(a, b)] = Matrix(arr, p)
    m = PersistenceModule(poset, p, dims, maps)
    m.free_generators = gens
    return m


def free(poset, a, p):
    """The module free on one generator at a: dims 1 on up(a), identities."""
    return free_on(poset, [a], p)


def _indicator(poset, mask, p):
    # 0/1 module: identity transition exactly where both endpoints lie inside
    dims = [1 if mask[i] else 0 for i in range(poset.n)]
    maps = {}
    for a, b in poset.covers:
        if mask[a] and mask[b]:
            maps[(a, b)] = cached_identity(1, p)
    return PersistenceModule(poset, p, dims, maps)


def from_upset(poset, upset, p):
    u = frozenset(upset)
    if not poset.is_upset(u):
        raise ValueError("support is not an upset")
    return _indicator(poset, [i in u for i in range(poset.n)], p)


def constant(poset, p):
    return _indicator(poset, [True] * poset.n, p)


def from_antichain(poset, s, p):
    return from_upset(poset, poset.upset_of(s), p)


def spread(poset, sources, sinks, p):
    """Indicator module of the interval [sources, sinks].

    Support: everything between some source and some sink. The two sets
    must be antichains and mutually bounded, else InvalidSpread.
    """
    s = sorted(set(int(x) for x in sources))
    t = sorted(set(int(x) for x in sinks))
    if not poset.is_antichain(s) or not poset.is_antichain(t):
        raise InvalidSpread("sources and sinks must be antichains")
    for x in s:
        if not any(poset.leq(x, y) for y in t):
            raise InvalidSpread(
                f"source {poset.names[x]!r} is below no sink"
            )
    for y in t:
        if not any(poset.leq(x, y) for x in s):
            raise InvalidSpread(
                f"sink {poset.names[y]!r} is above no source"
            )
    n = poset.n
    above = np.zeros(n, dtype=bool)
    for x in s:
        above |= poset.up_mask(x)
    below = np.zeros(n, dtype=bool)
    for y in t:
        below |= poset.down_mask(y)
    return _indicator(poset, above & below, p)


def direct_sum(poset, p, parts):
    """Blockwise sum of (module, multiplicity) pairs over a shared poset."""
    expanded = []
    for m, mult in parts:
        if m.poset != poset:
            raise PosetMismatch("direct sum needs a shared poset")
        if m.p != p:
            raise ValueError("direct sum needs a shared modulus")
        expanded.extend([m] * int(mult))
    dims = [sum(m.dims[i] for m in expanded) for i in range(poset.n)]
    maps = {}
    for a, b in poset.covers:
        arr = np.zeros((dims[b], dims[a]), dtype=np.int64)
        r = c = 0
        for m in expanded:
            blk = m.cover_map(a, b)
            arr[r:r + blk.rows, c:c + blk.cols] = blk.a
            r += blk.rows
            c += blk.cols
        maps[(a, b)] = Matrix(arr, p)
    return PersistenceModule(poset, p, dims, maps)


def radical(m):
    """Submodule spanned at each element by the images of its cover maps."""
    poset = m.poset
    basis = []
    for a in range(poset.n):
        blocks = [m.cover_map(s, a) for s in poset.parents(a)]
        stacked = hstack(blocks, rows=m.dims[a], p=m.p)
        _, pivots = rref(stacked)
        basis.append(stacked.take_cols(list(pivots)))
    return Submodule(m, basis)


def h0(m):
    """Pointwise dimension of the quotient by the radical."""
    r = radical(m)
    return tuple(m.dims[a] - r.dim(a) for a in range(m.poset.n))


def h0_complement_indices(m, a):
    """Coordinates of standard vectors spanning a complement of rad at a."""
    r = radical(m)
    _, pivots = rref(r.basis[a].transpose())
    return tuple(j for j in range(m.dims[a]) if j not in set(pivots))


def is_filtration(m):
    return all(
        rank(m.cover_map(a, b)) == m.dims[a] for a, b in m.poset.covers
    )


def is_spread(m):
    """Pointwise dimension at most one and full-rank composites."""
    if any(d > 1 for d in m.dims):
        return False
    poset = m.poset
    for a in range(poset.n):
        for b in range(poset.n):
            if a == b or not poset.leq(a, b):
                continue
            if rank(m.map(a, b)) != min(m.dims[a], m.dims[b]):
                return False
    return True


def m0_demo(p=2):
    """Staircase demo module on the 6x6 grid: one generator, 14 cells."""
    from relbetti.poset import grid

    g = grid(5, 2)
    return spread(
        g,
        {g.index("0,0")},
        {g.index("2,3"), g.index("3,1")},
        p,
    )


class BettiDiagram:
    """Multiplicity table keyed by (homological degree, poset element)."""

    def __init__(self, entries):
        cleaned = {}
        for (d, a), mult in entries.items():
            mult = int(mult)
            if mult < 0:
                raise ValueError("multiplicities must be nonnegative")
            if mult:
                cleaned[(int(d), int(a))] = mult
        self.entries = cleaned

    def get(self, d, a):
        return self.entries.get((d, a), 0)

    def degree(self, d):
        return {a: k for (dd, a), k in self.entries.items() if dd == d}

    def total(self, d):
        return sum(self.degree(d).values())

    def max_degree(self):
        return max((d for d, _ in self.entries), default=-1)

    def items(self):
        return sorted(self.entries.items())

    def to_json(self, poset):
        return {
            "betti": [
                {"at": poset.names[a], "d": d, "mult": k}
                for (d, a), k in self.items()
            ]
        }

    def __eq__(self, other):
        if not isinstance(other, BettiDiagram):
            return NotImplemented
        return self.entries == other.entries

    __hash__ = None

    def __repr__(self):
        return f"BettiDiagram({self.entries!r})"
