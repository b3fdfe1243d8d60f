"""Homological algebra relative to a graded collection of modules.

A CollectionFunctor assigns to every element of an index poset a module
over a common base poset, contravariantly: arrows restrict along the index
order.  Two adjoint constructions connect the two worlds.  `nat_module`
collects the natural transformations out of the members into a module over
the index poset; `realization` assembles an index-poset module back into a
base-poset module.  Thinness and flatness of the collection control how
much of standard minimal-resolution theory survives on the relative side,
and the degeneracy check gates the local Koszul shortcut over the index
poset.  `relative_minimal_resolution` is the direct construction the
shortcut is measured against.
"""

import numpy as np

from relbetti.errors import (
    DmaxReached,
    FunctorialityViolation,
    HypothesisNotVerified,
    NotSemilattice,
    NotThin,
)
from relbetti.fieldlin import Matrix, hstack, rref, solve
from relbetti.homalg import (
    NatTransformation,
    betti_koszul,
    identity_nat,
    is_exact,
    kernel,
    minimal_cover,
    nat_basis,
    zero_nat,
)
from relbetti.pmod import (
    BettiDiagram,
    PersistenceModule,
    cached_identity,
    direct_sum,
    free,
    h0,
    zero_module,
)


class CollectionFunctor:
    """Contravariant assignment of base-poset modules to index elements.

    objs[a] is the member at index element a.  arrows[(a, b)], for a cover
    a < b of the index poset, is a NatTransformation objs[b] -> objs[a];
    omitted arrows default to zero.  Composite arrows are derived along
    canonical cover chains and cached; validate() confirms the composites
    are path independent.  `claims` may record externally justified
    thin/flat/degeneracy statuses for builders whose index posets are too
    large to check directly; the property checks themselves (is_thin,
    is_flat, the degeneracy scan) never consult them, though a thinness
    claim is trusted as the degeneracy scan's precondition.
    """

    def __init__(self, domain, index, p, objs, arrows, claims=None):
        objs = list(objs)
        if len(objs) != index.n:
            raise ValueError("need one member per index element")
        for m in objs:
            if m.poset != domain:
                raise ValueError("members must live over the base poset")
            if m.p != p:
                raise ValueError("members must share the collection's modulus")
        arrows = dict(arrows)
        cover_set = set(index.covers)
        for key in arrows:
            if key not in cover_set:
                raise ValueError(f"arrow key {key!r} is not an index cover")
        self.domain = domain
        self.index = index
        self.p = p
        self._objs = objs
        self._arrows = {}
        for a, b in index.covers:
            f = arrows.get((a, b))
            if f is None:
                f = zero_nat(objs[b], objs[a])
            if f.source != objs[b] or f.target != objs[a]:
                raise ValueError(
                    f"arrow for cover {index.names[a]!r} < {index.names[b]!r} "
                    "does not map the upper member to the lower one"
                )
            self._arrows[(a, b)] = f
        self.claims = dict(claims or {})
        self._paths = {}
        self._pairs = {}
        self._degeneracy = None

    def obj(self, a):
        return self._objs[a]

    def member_is_zero(self, a):
        return sum(self._objs[a].dims) == 0

    def arrow(self, a, b):
        return self._arrows[(a, b)]

    def arrow_to(self, a, b):
        """Composite arrow obj(b) -> obj(a) for a <= b in the index."""
        if not self.index.leq(a, b):
            raise ValueError(
                f"{self.index.names[a]!r} is not below {self.index.names[b]!r}"
            )
        if a == b:
            return identity_nat(self._objs[a])
        got = self._paths.get((a, b))
        if got is None:
            c = next(
                c for c in self.index.children(a) if self.index.leq(c, b)
            )
            got = self.arrow(a, c) @ self.arrow_to(c, b)
            self._paths[(a, b)] = got
        return got

    def pair_basis(self, a, b):
        """Chosen basis of the transformations obj(b) -> obj(a), cached."""
        got = self._pairs.get((a, b))
        if got is None:
            got = nat_basis(self._objs[b], self._objs[a])
            self._pairs[(a, b)] = got
        return got

    def validate(self):
        """Check path independence of the composite arrows."""
        index = self.index
        for a in range(index.n):
            for b in range(index.n):
                if b == a or not index.leq(a, b):
                    continue
                ref = self.arrow_to(a, b)
                for c in index.children(a):
                    if not index.leq(c, b):
                        continue
                    if self.arrow(a, c) @ self.arrow_to(c, b) != ref:
                        raise FunctorialityViolation(
                            f"composite arrows from {index.names[b]!r} to "
                            f"{index.names[a]!r} disagree through "
                            f"{index.names[c]!r}"
                        )
        return self

    def __eq__(self, other):
        if not isinstance(other, CollectionFunctor):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.index == other.index
            and self.p == other.p
            and self._objs == other._objs
            and self._arrows == other._arrows
        )

    __hash__ = None

    def __repr__(self):
        nonzero = sum(1 for a in range(self.index.n) if not self.member_is_zero(a))
        return (
            f"CollectionFunctor(index={self.index.n}, members={nonzero}, "
            f"p={self.p})"
        )

    def to_json(self):
        objs = {}
        for a in range(self.index.n):
            if not self.member_is_zero(a):
                objs[self.index.names[a]] = self._objs[a].to_json()
        arrows = {}
        for (a, b), f in sorted(self._arrows.items()):
            if f.is_zero():
                continue
            key = f"{self.index.names[a]}<{self.index.names[b]}"
            comps = {}
            for x in range(self.domain.n):
                c = f.component(x)
                if not c.is_zero():
                    comps[self.domain.names[x]] = c.tolist()
            arrows[key] = comps
        return {
            "p": self.p,
            "I": self.domain.to_json(),
            "J": self.index.to_json(),
            "objs": objs,
            "arrows": arrows,
        }

    @staticmethod
    def from_json(obj):
        from relbetti.poset import Poset

        p = int(obj["p"])
        domain = Poset.from_json(obj["I"])
        index = Poset.from_json(obj["J"])
        objs = []
        for name in index.names:
            mj = obj.get("objs", {}).get(name)
            if mj is None:
                objs.append(zero_module(domain, p))
            else:
                m = PersistenceModule.from_json(mj, p)
                if m.poset != domain:
                    raise ValueError(f"member {name!r} lives over a different poset")
                objs.append(m)
        arrows = {}
        for key, comps in obj.get("arrows", {}).items():
            na, _, nb = key.partition("<")
            a, b = index.index(na), index.index(nb)
            mats = []
            for x in range(domain.n):
                rows = comps.get(domain.names[x])
                if rows is None:
                    mats.append(
                        Matrix.zeros(objs[a].dims[x], objs[b].dims[x], p)
                    )
                else:
                    mats.append(Matrix(rows, p))
            arrows[(a, b)] = NatTransformation(objs[b], objs[a], mats)
        return CollectionFunctor(domain, index, p, objs, arrows)


def _flatten(f):
    """Concatenated entries of all components of a transformation."""
    parts = [f.component(x).a.reshape(-1) for x in range(f.source.poset.n)]
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts)


def _coords(basis, flat_cols, f, p):
    """Coordinates of f in the chosen basis, via its flattened column."""
    vec = Matrix(_flatten(f).reshape(-1, 1), p)
    return solve(flat_cols, vec)


def _flat_columns(basis, p):
    if not basis:
        return Matrix.zeros(0, 0, p)
    cols = np.stack([_flatten(f) for f in basis], axis=1)
    return Matrix(cols, p)


def _nat_module_data(coll, m, member=None):
    """The hom module of m plus the bases realizing its fibers.

    The fiber at a is the space of transformations obj(a) -> m; the
    transition along an index cover precomposes with the arrow.  When m is
    the member at index element `member`, the cached pair bases are reused.
    """
    index = coll.index
    p = coll.p
    if member is None:
        bases = [nat_basis(coll.obj(a), m) for a in range(index.n)]
    else:
        bases = [coll.pair_basis(member, a) for a in range(index.n)]
    flats = [_flat_columns(bas, p) for bas in bases]
    dims = [len(bas) for bas in bases]
    maps = {}
    for a, b in index.covers:
        if dims[b] == 0 or dims[a] == 0:
            maps[(a, b)] = Matrix.zeros(dims[b], dims[a], p)
            continue
        cols = []
        for phi in bases[a]:
            cols.append(_coords(bases[b], flats[b], phi @ coll.arrow(a, b), p))
        maps[(a, b)] = hstack(cols, rows=dims[b], p=p)
    return PersistenceModule(index, p, dims, maps), bases, flats


def nat_module(coll, m):
    """Module over the index poset collecting the maps out of the members.

    The fiber at a has one coordinate per chosen basis transformation
    obj(a) -> m; transitions precompose with the collection's arrows.
    """
    return _nat_module_data(coll, m)[0]


def nat_module_map(coll, f):
    """The map induced on hom modules by postcomposition with f."""
    src, sbases, _ = _nat_module_data(coll, f.source)
    dst, dbases, dflats = _nat_module_data(coll, f.target)
    comps = []
    for a in range(coll.index.n):
        if src.dims[a] == 0 or dst.dims[a] == 0:
            comps.append(Matrix.zeros(dst.dims[a], src.dims[a], coll.p))
            continue
        cols = [
            _coords(dbases[a], dflats[a], f @ phi, coll.p)
            for phi in sbases[a]
        ]
        comps.append(hstack(cols, rows=dst.dims[a], p=coll.p))
    return NatTransformation(src, dst, comps)


def _realized(coll, f):
    """Realize an index module as a base module, with projection data.

    At each base element the realized fiber is the cokernel of the two
    relation maps built from the index covers: one pushes a relation
    summand forward along the index module, the other along the
    collection's arrows.  Returns (module, projections, sections, offsets).
    """
    index = coll.index
    domain = coll.domain
    p = coll.p
    fdims = f.dims
    offsets = []
    totals = []
    for x in range(domain.n):
        offs = [0]
        for a in range(index.n):
            offs.append(offs[-1] + coll.obj(a).dims[x] * fdims[a])
        offsets.append(offs)
        totals.append(offs[-1])
    covers = list(index.covers)
    projs = []
    sects = []
    dims = []
    for x in range(domain.n):
        total = totals[x]
        width = sum(coll.obj(b).dims[x] * fdims[a] for a, b in covers)
        rel = np.zeros((total, width), dtype=np.int64)
        c0 = 0
        for a, b in covers:
            w = coll.obj(b).dims[x] * fdims[a]
            if w:
                up = np.kron(
                    np.eye(coll.obj(b).dims[x], dtype=np.int64),
                    f.cover_map(a, b).a,
                )
                rel[offsets[x][b]:offsets[x][b + 1], c0:c0 + w] += up
                down = np.kron(
                    coll.arrow(a, b).component(x).a,
                    np.eye(fdims[a], dtype=np.int64),
                )
                rel[offsets[x][a]:offsets[x][a + 1], c0:c0 + w] -= down
            c0 += w
        rel = Matrix(rel, p)
        _, pivots = rref(rel)
        image = rel.take_cols(list(pivots))
        _, row_pivots = rref(image.transpose())
        keep = [q for q in range(total) if q not in set(row_pivots)]
        section = cached_identity(total, p).take_cols(keep)
        full = hstack([image, section], rows=total, p=p)
        if full.cols:
            inv = solve(full, cached_identity(total, p))
            proj = inv.take_rows(range(image.cols, total))
        else:
            proj = Matrix.zeros(0, total, p)
        projs.append(proj)
        sects.append(section)
        dims.append(len(keep))
    maps = {}
    for x, y in domain.covers:
        pre = np.zeros((totals[y], totals[x]), dtype=np.int64)
        for a in range(index.n):
            if fdims[a] == 0:
                continue
            block = np.kron(
                coll.obj(a).cover_map(x, y).a,
                np.eye(fdims[a], dtype=np.int64),
            )
            pre[offsets[y][a]:offsets[y][a + 1], offsets[x][a]:offsets[x][a + 1]] = block
        maps[(x, y)] = projs[y] @ Matrix(pre, p) @ sects[x]
    module = PersistenceModule(domain, p, dims, maps)
    return module, projs, sects, offsets


def realization(coll, f):
    """Assemble an index module into a base module along the collection."""
    return _realized(coll, f)[0]


def realization_map(coll, f):
    """The realized map induced by a map of index modules."""
    lsrc, _, ssects, soffs = _realized(coll, f.source)
    ldst, dprojs, _, doffs = _realized(coll, f.target)
    domain = coll.domain
    comps = []
    for x in range(domain.n):
        pre = np.zeros((doffs[x][-1], soffs[x][-1]), dtype=np.int64)
        for a in range(coll.index.n):
            block = np.kron(
                np.eye(coll.obj(a).dims[x], dtype=np.int64),
                f.component(a).a,
            )
            pre[doffs[x][a]:doffs[x][a + 1], soffs[x][a]:soffs[x][a + 1]] = block
        comps.append(dprojs[x] @ Matrix(pre, coll.p) @ ssects[x])
    return NatTransformation(lsrc, ldst, comps)


def unit(coll, a):
    """Unit at a single index element.

    The free index module at a maps into the hom module of the member at
    a; at b above a the generator goes to the composite arrow, written in
    the chosen pair basis.
    """
    index = coll.index
    p = coll.p
    src = free(index, a, p)
    target, bases, flats = _nat_module_data(coll, coll.obj(a), member=a)
    comps = []
    for b in range(index.n):
        if not index.leq(a, b) or target.dims[b] == 0:
            comps.append(Matrix.zeros(target.dims[b], src.dims[b], p))
            continue
        comps.append(_coords(bases[b], flats[b], coll.arrow_to(a, b), p))
    return NatTransformation(src, target, comps)


def unit_map(coll, f):
    """Unit of the adjunction at an arbitrary index module."""
    index = coll.index
    domain = coll.domain
    p = coll.p
    lmod, projs, _, offsets = _realized(coll, f)
    target, bases, flats = _nat_module_data(coll, lmod)
    comps = []
    for a in range(index.n):
        if f.dims[a] == 0 or target.dims[a] == 0:
            comps.append(Matrix.zeros(target.dims[a], f.dims[a], p))
            continue
        cols = []
        for v in range(f.dims[a]):
            parts = []
            for x in range(domain.n):
                ins = np.zeros(
                    (offsets[x][-1], coll.obj(a).dims[x]), dtype=np.int64
                )
                for w in range(coll.obj(a).dims[x]):
                    ins[offsets[x][a] + w * f.dims[a] + v, w] = 1
                parts.append(projs[x] @ Matrix(ins, p))
            cand = NatTransformation(coll.obj(a), lmod, parts)
            cols.append(_coords(bases[a], flats[a], cand, p))
        comps.append(hstack(cols, rows=target.dims[a], p=p))
    return NatTransformation(f, target, comps)


def counit_map(coll, m):
    """Counit of the adjunction: realize the hom module and evaluate."""
    domain = coll.domain
    p = coll.p
    nm, bases, _ = _nat_module_data(coll, m)
    lmod, _, sects, offsets = _realized(coll, nm)
    comps = []
    for x in range(domain.n):
        ev = np.zeros((m.dims[x], offsets[x][-1]), dtype=np.int64)
        for a in range(coll.index.n):
            k = len(bases[a])
            for w in range(coll.obj(a).dims[x]):
                for i, phi in enumerate(bases[a]):
                    col = offsets[x][a] + w * k + i
                    ev[:, col] = phi.component(x).a[:, w]
            # no basis vectors means an empty block
        comps.append(Matrix(ev, p) @ sects[x])
    return NatTransformation(lmod, m, comps)


def is_thin(coll):
    """Check the pairwise characterization of thinness.

    Between members at comparable index elements the transformation space
    must be spanned by the composite arrow; between incomparable ones (in
    either failing direction) it must vanish.  Returns (flag, witness).
    """
    index = coll.index
    for a in range(index.n):
        if coll.member_is_zero(a):
            continue
        for b in range(index.n):
            if coll.member_is_zero(b):
                continue
            bas = coll.pair_basis(a, b)
            if index.leq(a, b):
                if len(bas) > 1:
                    return False, (a, b)
                if len(bas) == 1 and coll.arrow_to(a, b).is_zero():
                    return False, (a, b)
            elif bas:
                return False, (a, b)
    return True, None


def is_flat(coll):
    """Thinness plus one-dimensionality at all comparable nonzero pairs.

    Index elements carrying the zero module impose no condition: the unit
    is only required to be invertible where the members do not vanish.
    """
    thin, witness = is_thin(coll)
    if not thin:
        return False, witness
    index = coll.index
    for a in range(index.n):
        if coll.member_is_zero(a):
            continue
        for b in range(index.n):
            if coll.member_is_zero(b) or not index.leq(a, b):
                continue
            if not coll.pair_basis(a, b):
                return False, (a, b)
    return True, None


def _thin_or_claimed(coll):
    claimed = coll.claims.get("thin")
    if claimed is not None:
        return bool(claimed)
    return is_thin(coll)[0]


def degeneracy_hypothesis(coll):
    """Check the sufficient condition for the index-Koszul shortcut.

    For every index element the generators of the kernel of its unit,
    closed under joins, must land where the collection vanishes.  Returns
    (flag, witness); the result is cached on the collection.

    The scan is only meaningful over a thin collection, so thinness is a
    precondition, not part of the answer: a recorded thinness claim is
    trusted here (the scan itself never consults claims), and without one
    the pairwise check runs first.
    """
    if coll._degeneracy is not None:
        return coll._degeneracy
    claimed_thin = coll.claims.get("thin")
    if claimed_thin is None:
        thin, witness = is_thin(coll)
        if not thin:
            raise NotThin(f"collection is not thin at pair {witness}")
    elif not claimed_thin:
        raise NotThin("collection records that it is not thin")
    index = coll.index
    if not index.is_upper_semilattice():
        raise NotSemilattice("the degeneracy check needs joins in the index")
    result = (True, None)
    for a in range(index.n):
        ker, _ = kernel(unit(coll, a))
        gens = h0(ker)
        supp = [b for b in range(index.n) if gens[b]]
        if not supp:
            continue
        for b in sorted(index.sublattice_closure(supp)):
            if not coll.member_is_zero(b):
                result = (False, (a, b))
                break
        if not result[0]:
            break
    coll._degeneracy = result
    return result


def _degenerate_ok(coll):
    claimed = coll.claims.get("degeneracy")
    if claimed is not None:
        return bool(claimed)
    return degeneracy_hypothesis(coll)[0]


def relative_betti_koszul(coll, m, a, dmax, force=False):
    """Relative multiplicities at a nonzero member via the index Koszul
    complex of the hom module.  Refuses when the degeneracy condition is
    not known to hold, unless forced."""
    if coll.member_is_zero(a):
        raise ValueError(
            f"member at {coll.index.names[a]!r} is zero; no multiplicities there"
        )
    if not force and not _degenerate_ok(coll):
        raise HypothesisNotVerified(
            "degeneracy condition not verified; pass force=True to compute anyway"
        )
    return betti_koszul(nat_module(coll, m), a, dmax)


def relative_betti_diagram(coll, m, dmax, force=False):
    """Full table of relative multiplicities up to dmax.

    Computes the hom module once and runs the local Koszul complex at
    every index element with a nonzero member.  Same verification gate as
    relative_betti_koszul.
    """
    if not force and not _degenerate_ok(coll):
        raise HypothesisNotVerified(
            "degeneracy condition not verified; pass force=True to compute anyway"
        )
    nm = nat_module(coll, m)
    entries = {}
    for a in range(coll.index.n):
        if coll.member_is_zero(a):
            continue
        for d, mult in enumerate(betti_koszul(nm, a, dmax)):
            if mult:
                entries[(d, a)] = mult
    return BettiDiagram(entries)


def _relative_cover(coll, m, nm, bases):
    """Adjoint of the minimal cover of the hom module.

    One summand per generator, realized as a copy of the generating
    member; the component on a summand is the transformation the
    generator's coordinates select.
    """
    index = coll.index
    domain = coll.domain
    p = coll.p
    cov = minimal_cover(nm)
    gens = cov.source.free_generators
    realized = direct_sum(domain, p, [(coll.obj(a), 1) for a in gens])
    picked = []
    for k, a in enumerate(gens):
        alive = [j for j, g in enumerate(gens) if index.leq(g, a)]
        coords = cov.component(a).col(alive.index(k)).a.reshape(-1)
        picked.append((a, coords))
    comps = []
    for x in range(domain.n):
        blocks = []
        for a, coords in picked:
            w = coll.obj(a).dims[x]
            arr = np.zeros((m.dims[x], w), dtype=np.int64)
            for i, c in enumerate(coords):
                if c:
                    arr += int(c) * bases[a][i].component(x).a
            blocks.append(Matrix(arr, p))
        comps.append(hstack(blocks, rows=m.dims[x], p=p))
    g = NatTransformation(realized, m, comps)
    g.relative_generators = gens
    return g


def relative_minimal_cover(coll, m):
    """Minimal cover of m relative to the collection."""
    if not _thin_or_claimed(coll):
        raise NotThin("relative covers need a thin collection")
    nm, bases, _ = _nat_module_data(coll, m)
    return _relative_cover(coll, m, nm, bases)


class RelativeResolution:
    """Chain of realized member sums over a target.

    diffs[0] is the augmentation onto the target, diffs[d] maps the
    degree-d term into the degree-(d-1) term.  Exactness is measured after
    passing to hom modules, so an augmentation need not be onto and a
    target invisible to the collection resolves by the empty chain.
    """

    def __init__(self, target, terms, generators, diffs, minimal, complete):
        self.target = target
        self.terms = list(terms)
        self.generators = [tuple(g) for g in generators]
        self.diffs = list(diffs)
        self.minimal = bool(minimal)
        self.complete = bool(complete)

    @property
    def length(self):
        return max(len(self.terms) - 1, 0)

    def multiplicities(self):
        """Generator counts per (degree, index element) as a diagram."""
        entries = {}
        for d, gens in enumerate(self.generators):
            for a in gens:
                entries[(d, a)] = entries.get((d, a), 0) + 1
        return BettiDiagram(entries)

    def check(self, coll):
        """Validate shapes, vanishing composites, generator support, and
        exactness of the hom-module image of the chain."""
        if len(self.terms) != len(self.diffs) or len(self.terms) != len(
            self.generators
        ):
            raise ValueError("terms, generators, and diffs must align")
        for d, f in enumerate(self.diffs):
            if f.source != self.terms[d]:
                raise ValueError(f"differential {d} has the wrong source")
            want = self.target if d == 0 else self.terms[d - 1]
            if f.target != want:
                raise ValueError(f"differential {d} has the wrong target")
            if d and not (self.diffs[d - 1] @ f).is_zero():
                raise ValueError(f"composite at degree {d} is nonzero")
        for gens in self.generators:
            for a in gens:
                if coll.member_is_zero(a):
                    raise ValueError("generator at a vanishing member")
        if not self.terms:
            if self.complete and sum(nat_module(coll, self.target).dims) > 0:
                raise ValueError("empty chain under a visible target")
            return self
        seq = [nat_module_map(coll, f) for f in reversed(self.diffs)]
        zero = zero_module(coll.index, coll.p)
        seq.append(zero_nat(seq[-1].target, zero))
        if self.complete:
            seq.insert(0, zero_nat(zero, seq[0].source))
        if not is_exact(seq):
            raise ValueError("chain is not exact through hom modules")
        return self

    def __repr__(self):
        state = "complete" if self.complete else "truncated"
        return (
            f"RelativeResolution(length={self.length}, {state}, "
            f"target_dim={sum(self.target.dims)})"
        )


def relative_minimal_resolution(coll, m, dmax):
    """Iterated relative minimal covers of successive kernels (the direct
    construction of the relative multiplicities, degree by degree)."""
    if dmax < 0:
        raise ValueError("dmax must be nonnegative")
    if not _thin_or_claimed(coll):
        raise NotThin("relative resolutions need a thin collection")
    terms = []
    generators = []
    diffs = []
    cur = m
    incl = None
    complete = False
    for _ in range(dmax + 1):
        nm, bases, _ = _nat_module_data(coll, cur)
        if sum(nm.dims) == 0:
            # nothing maps in: the chain so far is already exact through
            # the hom module
            complete = True
            break
        g = _relative_cover(coll, cur, nm, bases)
        terms.append(g.source)
        generators.append(g.relative_generators)
        diffs.append(g if incl is None else incl @ g)
        ker, kincl = kernel(g)
        if sum(ker.dims) == 0:
            complete = True
            break
        cur, incl = ker, kincl
    return RelativeResolution(
        m, terms, generators, diffs, minimal=True, complete=complete
    )


def relative_projective_dimension(coll, m, dmax):
    """Length of the relative minimal resolution; raises when it does not
    terminate within dmax."""
    res = relative_minimal_resolution(coll, m, dmax)
    if not res.complete:
        raise DmaxReached(f"resolution still open after degree {dmax}")
    return res.length


def is_relative_exact(coll, seq):
    """Exactness of a composable sequence, measured through hom modules."""
    return is_exact([nat_module_map(coll, f) for f in seq])
