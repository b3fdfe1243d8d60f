"""Homological algebra for poset modules.

Natural transformations and their solution spaces, kernels and cokernels,
deterministic minimal covers and resolutions, Betti diagrams, and the local
and global Koszul complexes that recompute them.
"""

import itertools

import numpy as np

from relbetti.errors import (
    MeetHypothesisFailed,
    NotSemilattice,
    NotSubfunctor,
)
from relbetti.fieldlin import (
    Matrix,
    hstack,
    homology_dims,
    kernel_basis,
    kron,
    rank,
    rref,
    solve,
)
from relbetti.pmod import (
    BettiDiagram,
    PersistenceModule,
    cached_identity,
    cached_zeros,
    free_on,
    radical,
)


class NatTransformation:
    """A family of matrices source(a) -> target(a), one per element.

    The constructor only checks shapes; naturality is a separate validation
    step (check) because pointwise sections legitimately fail it.
    """

    def __init__(self, source, target, comps):
        if source.poset != target.poset:
            raise ValueError("source and target live on different posets")
        if source.p != target.p:
            raise ValueError("source and target have different moduli")
        self.source = source
        self.target = target
        comps = tuple(comps)
        if len(comps) != source.poset.n:
            raise ValueError("need one component per element")
        for a, c in enumerate(comps):
            if c.rows != target.dims[a] or c.cols != source.dims[a]:
                raise ValueError(
                    f"component at element {a} has shape {c.rows}x{c.cols}, "
                    f"expected {target.dims[a]}x{source.dims[a]}"
                )
            if c.p != source.p:
                raise ValueError("component modulus mismatch")
        self.comps = comps

    def component(self, a):
        return self.comps[a]

    def check(self):
        """Validate naturality against every cover square."""
        for a, b in sorted(self.source.poset.covers):
            left = self.target.cover_map(a, b) @ self.comps[a]
            right = self.comps[b] @ self.source.cover_map(a, b)
            if left != right:
                names = self.source.poset.names
                raise ValueError(
                    f"naturality fails on cover {names[a]!r} < {names[b]!r}"
                )
        return self

    def __matmul__(self, other):
        if not isinstance(other, NatTransformation):
            return NotImplemented
        if self.source is not other.target and self.source != other.target:
            raise ValueError("composition needs matching middle module")
        comps = [
            self.comps[a] @ other.comps[a]
            for a in range(self.source.poset.n)
        ]
        return NatTransformation(other.source, self.target, comps)

    def __eq__(self, other):
        if not isinstance(other, NatTransformation):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.comps == other.comps
        )

    __hash__ = None

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def is_epi(self):
        return all(
            rank(c) == self.target.dims[a] for a, c in enumerate(self.comps)
        )

    def is_mono(self):
        return all(
            rank(c) == self.source.dims[a] for a, c in enumerate(self.comps)
        )

    def __repr__(self):
        return f"NatTransformation({self.source!r} -> {self.target!r})"


def identity_nat(m):
    return NatTransformation(
        m, m, [cached_identity(d, m.p) for d in m.dims]
    )


def zero_nat(source, target):
    return NatTransformation(
        source,
        target,
        [
            cached_zeros(target.dims[a], source.dims[a], source.p)
            for a in range(source.poset.n)
        ],
    )


def free_nat(src, dst, coeffs):
    """Map between free modules given by scalars on generator pairs.

    coeffs[(i, j)] sends the j-th generator of src into the i-th summand of
    dst; a nonzero scalar requires dst's generator to sit below src's.
    """
    poset = src.poset
    gens_s = src.free_generators
    gens_d = dst.free_generators
    for (i, j), c in coeffs.items():
        if c % src.p and not poset.leq(gens_d[i], gens_s[j]):
            raise ValueError(
                f"no map from generator at {poset.names[gens_s[j]]!r} "
                f"into summand at {poset.names[gens_d[i]]!r}"
            )
    comps = []
    for x in range(poset.n):
        alive_s = [j for j, g in enumerate(gens_s) if poset.leq(g, x)]
        alive_d = [i for i, g in enumerate(gens_d) if poset.leq(g, x)]
        arr = np.zeros((len(alive_d), len(alive_s)), dtype=np.int64)
        for r, i in enumerate(alive_d):
            for c_, j in enumerate(alive_s):
                arr[r, c_] = coeffs.get((i, j), 0)
        comps.append(Matrix(arr, src.p))
    return NatTransformation(src, dst, comps)


def nat_basis(f, g):
    """Deterministic basis of the space of natural transformations f -> g.

    Solves the naturality constraints as one sparse block system: per cover
    (a, b) the block row  g(a<b) X_a - X_b f(a<b) = 0  in the row-major
    vectorization of the unknown components.
    """
    poset = f.poset
    if poset != g.poset:
        raise ValueError("modules live on different posets")
    p = f.p
    sizes = [g.dims[a] * f.dims[a] for a in range(poset.n)]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offs[-1])
    if total == 0:
        # no element supports a nonzero component
        return []
    rows = []
    for a, b in sorted(poset.covers):
        height = g.dims[b] * f.dims[a]
        if height == 0 or (not sizes[a] and not sizes[b]):
            # all-zero block rows constrain nothing
            continue
        gcov = g.cover_map(a, b)
        fcov = f.cover_map(a, b)
        block = np.zeros((height, total), dtype=np.int64)
        if sizes[a]:
            left = kron(gcov, cached_identity(f.dims[a], p))
            block[:, offs[a]:offs[a + 1]] = left.a
        if sizes[b]:
            right = kron(cached_identity(g.dims[b], p), fcov.transpose())
            block[:, offs[b]:offs[b + 1]] = (-right.a) % p
        rows.append(block)
    if rows:
        system = Matrix(np.concatenate(rows, axis=0), p)
    else:
        system = Matrix.zeros(0, total, p)
    basis = kernel_basis(system)
    out = []
    for k in range(basis.cols):
        comps = []
        vec = basis.a[:, k]
        for a in range(poset.n):
            chunk = vec[offs[a]:offs[a + 1]]
            comps.append(
                Matrix(chunk.reshape(g.dims[a], f.dims[a]), p)
            )
        out.append(NatTransformation(f, g, comps))
    return out


def kernel(f):
    """Pointwise kernel with induced transitions, plus its inclusion."""
    src = f.source
    poset = src.poset
    bases = [kernel_basis(f.component(a)) for a in range(poset.n)]
    dims = [b.cols for b in bases]
    maps = {}
    for a, b in poset.covers:
        img = src.cover_map(a, b) @ bases[a]
        maps[(a, b)] = solve(bases[b], img)
    mod = PersistenceModule(poset, src.p, dims, maps)
    incl = NatTransformation(mod, src, bases)
    return mod, incl


def image(f):
    """Pointwise image with induced transitions, plus its inclusion."""
    tgt = f.target
    poset = tgt.poset
    bases = []
    for a in range(poset.n):
        c = f.component(a)
        _, pivots = rref(c)
        bases.append(c.take_cols(list(pivots)))
    dims = [b.cols for b in bases]
    maps = {}
    for a, b in poset.covers:
        img = tgt.cover_map(a, b) @ bases[a]
        maps[(a, b)] = solve(bases[b], img)
    mod = PersistenceModule(poset, tgt.p, dims, maps)
    incl = NatTransformation(mod, tgt, bases)
    return mod, incl


def cokernel(f):
    """Pointwise cokernel with induced transitions, plus its projection.

    At each element the image's complement coordinates (non-pivots of the
    transposed image basis) index the quotient; the projection is read off
    the inverse of [image basis | complement standard vectors].
    """
    tgt = f.target
    poset = tgt.poset
    p = tgt.p
    projs = []
    sections = []
    for a in range(poset.n):
        c = f.component(a)
        d = tgt.dims[a]
        _, pivots = rref(c)
        b = c.take_cols(list(pivots))
        _, cpiv = rref(b.transpose())
        comp_idx = [q for q in range(d) if q not in set(cpiv)]
        eq = np.zeros((d, len(comp_idx)), dtype=np.int64)
        for out, q in enumerate(comp_idx):
            eq[q, out] = 1
        eq_m = Matrix(eq, p)
        full = hstack([b, eq_m], rows=d, p=p)
        inv = solve(full, cached_identity(d, p))
        projs.append(inv.take_rows(list(range(b.cols, d))))
        sections.append(eq_m)
    dims = [pr.rows for pr in projs]
    maps = {}
    for a, b_ in poset.covers:
        maps[(a, b_)] = projs[b_] @ tgt.cover_map(a, b_) @ sections[a]
    mod = PersistenceModule(poset, p, dims, maps)
    proj = NatTransformation(tgt, mod, projs)
    return mod, proj


def section_of(f):
    """A pointwise right inverse of an epimorphism (not natural in general)."""
    comps = [
        solve(f.component(a), cached_identity(f.target.dims[a], f.target.p))
        for a in range(f.source.poset.n)
    ]
    return NatTransformation(f.target, f.source, comps)


def _h0_lift_positions(m):
    # per element: standard coordinates spanning a complement of the radical
    rad = radical(m)
    out = []
    for a in range(m.poset.n):
        _, pivots = rref(rad.basis[a].transpose())
        pset = set(pivots)
        out.append([q for q in range(m.dims[a]) if q not in pset])
    return rad, out


def minimal_cover(m):
    """Epimorphism onto m from a free module with one generator per
    complement coordinate of the radical, lifted in place."""
    poset = m.poset
    _, lifts = _h0_lift_positions(m)
    gens = []
    coords = []
    for a in range(poset.n):
        for q in lifts[a]:
            gens.append(a)
            coords.append(q)
    c0 = free_on(poset, gens, m.p)
    comps = []
    for x in range(poset.n):
        cols = []
        for k, (a, q) in enumerate(zip(gens, coords)):
            if poset.leq(a, x):
                cols.append(m.map(a, x).col(q))
        comps.append(hstack(cols, rows=m.dims[x], p=m.p))
    return NatTransformation(c0, m, comps)


class Resolution:
    """Chain of free modules over a target: diffs[0] is the augmentation
    C_0 -> target, diffs[d] maps C_d -> C_{d-1}."""

    def __init__(self, target, terms, diffs, minimal, complete):
        self.target = target
        self.terms = list(terms)
        self.diffs = list(diffs)
        self.minimal = bool(minimal)
        self.complete = bool(complete)

    @property
    def length(self):
        return len(self.terms) - 1

    def multiplicities(self):
        """Generator counts of each term as a diagram; for a minimal
        resolution these are the Betti numbers."""
        entries = {}
        for d, t in enumerate(self.terms):
            for g in t.free_generators:
                entries[(d, g)] = entries.get((d, g), 0) + 1
        return BettiDiagram(entries)

    def check(self):
        poset = self.target.poset
        n = poset.n
        if self.diffs[0].target != self.target:
            raise ValueError("augmentation does not land in the target")
        for d, t in enumerate(self.terms):
            if self.diffs[d].source != t:
                raise ValueError(f"differential {d} does not start at term {d}")
            if d >= 1 and self.diffs[d].target != self.terms[d - 1]:
                raise ValueError(f"differential {d} does not land in term {d - 1}")
        for d in range(len(self.diffs)):
            self.diffs[d].check()
        for d in range(1, len(self.diffs)):
            if not (self.diffs[d - 1] @ self.diffs[d]).is_zero():
                raise ValueError(f"composite of differentials {d - 1},{d} nonzero")
        if not self.diffs[0].is_epi():
            raise ValueError("augmentation is not an epimorphism")
        for d in range(self.length):
            for a in range(n):
                ker = self.terms[d].dims[a] - rank(self.diffs[d].component(a))
                img = rank(self.diffs[d + 1].component(a))
                if ker != img:
                    raise ValueError(
                        f"not exact at term {d}, element {poset.names[a]!r}"
                    )
        if self.complete and not self.diffs[self.length].is_mono():
            raise ValueError("complete resolution has a nonzero top kernel")
        if self.minimal:
            self._check_minimal()
        return self

    def _check_minimal(self):
        n = self.target.poset.n
        for d in range(self.length + 1):
            rad = radical(self.terms[d])
            for a in range(n):
                if d < self.length:
                    img = self.diffs[d + 1].component(a)
                else:
                    img = kernel_basis(self.diffs[d].component(a))
                joint = hstack(
                    [rad.basis[a], img], rows=self.terms[d].dims[a],
                    p=self.target.p,
                )
                if rank(joint) != rank(rad.basis[a]):
                    raise ValueError(
                        f"differential into term {d} misses the radical"
                    )

    def __repr__(self):
        return (
            f"Resolution(length={self.length}, minimal={self.minimal}, "
            f"complete={self.complete})"
        )


def minimal_resolution(m, dmax):
    """Iterated minimal covers of successive kernels, up to degree dmax."""
    if dmax < 0:
        raise ValueError("dmax must be nonnegative")
    terms = []
    diffs = []
    cur = m
    incl = None
    complete = False
    for _ in range(dmax + 1):
        cov = minimal_cover(cur)
        terms.append(cov.source)
        diffs.append(cov if incl is None else incl @ cov)
        ker, kincl = kernel(cov)
        if sum(ker.dims) == 0:
            complete = True
            break
        cur, incl = ker, kincl
    return Resolution(m, terms, diffs, minimal=True, complete=complete)


def betti(m, dmax):
    return minimal_resolution(m, dmax).multiplicities()


def is_exact(seq):
    """Pointwise exactness at the inner terms of a composable sequence."""
    seq = list(seq)
    for i in range(len(seq) - 1):
        if seq[i + 1].source != seq[i].target:
            raise ValueError(f"maps {i} and {i + 1} are not composable")
    for i in range(len(seq) - 1):
        mid = seq[i].target
        for a in range(mid.poset.n):
            img = rank(seq[i].component(a))
            ker = mid.dims[a] - rank(seq[i + 1].component(a))
            if img != ker:
                return False
    return True


class KoszulComplex:
    """Chain complex attached to a base element from its parent meets.

    index_sets[d] lists, per degree, the bounded-below parent subsets (the
    empty subset stands for the base element in degree 0); meets[d] lists
    the corresponding meet elements. diffs[i] maps degree i+1 to degree i.
    """

    def __init__(self, base, dims, diffs, index_sets, meets, p):
        self.base = base
        self.dims = tuple(dims)
        self.diffs = list(diffs)
        self.index_sets = tuple(tuple(s) for s in index_sets)
        self.meets = tuple(tuple(ms) for ms in meets)
        self.p = p

    def homology(self):
        return homology_dims(self.dims, self.diffs, self.p)


def koszul(f, a, parent_order=None):
    """Local Koszul complex of a module at an element.

    Degree d sums the module's values at the meets of the size-d bounded
    below subsets of the parents of a, with alternating-sign differentials
    induced by dropping one parent at a time.
    """
    poset = f.poset
    parents = poset.parents(a)
    if parent_order is None:
        parent_order = parents
    else:
        parent_order = tuple(parent_order)
        if sorted(parent_order) != sorted(parents):
            raise ValueError("parent_order must permute the parents")
    leq = poset.leq_matrix

    index_sets = [((),)]
    meets = [(a,)]
    dims = [f.dims[a]]
    max_d = len(parent_order)
    for d in range(1, max_d + 1):
        subs = []
        mts = []
        for s in itertools.combinations(parent_order, d):
            if not bool(np.any(np.all(leq[:, list(s)], axis=1))):
                continue
            mt = poset.meet_bounded(s)
            if mt is None:
                names = [poset.names[x] for x in s]
                raise MeetHypothesisFailed(
                    f"parents {names} of {poset.names[a]!r} are bounded "
                    "below but have no meet"
                )
            subs.append(s)
            mts.append(mt)
        if not subs:
            break
        index_sets.append(tuple(subs))
        meets.append(tuple(mts))
        dims.append(sum(f.dims[mt] for mt in mts))

    diffs = []
    for d in range(1, len(index_sets)):
        lower_pos = {s: i for i, s in enumerate(index_sets[d - 1])}
        lower_off = np.concatenate(
            [[0], np.cumsum([f.dims[mt] for mt in meets[d - 1]])]
        )
        upper_off = np.concatenate(
            [[0], np.cumsum([f.dims[mt] for mt in meets[d]])]
        )
        arr = np.zeros((dims[d - 1], dims[d]), dtype=np.int64)
        for j, s in enumerate(index_sets[d]):
            mt_s = meets[d][j]
            for i in range(len(s)):
                t = s[:i] + s[i + 1:]
                pos = lower_pos[t]
                mt_t = meets[d - 1][pos]
                block = f.map(mt_s, mt_t)
                if i % 2:
                    block = -block
                arr[
                    lower_off[pos]:lower_off[pos + 1],
                    upper_off[j]:upper_off[j + 1],
                ] = block.a
        diffs.append(Matrix(arr, f.p))
    return KoszulComplex(a, dims, diffs, index_sets, meets, f.p)


def betti_koszul(f, a, dmax):
    """Homology dimensions of the local Koszul complex, padded to dmax."""
    h = koszul(f, a).homology()
    out = list(h[:dmax + 1])
    out.extend([0] * (dmax + 1 - len(out)))
    return out


def global_koszul(f):
    """Free resolution of a subfunctor of the constant module, built from
    joins of subsets of its minimal generators. Not minimal in general."""
    poset = f.poset
    if not poset.is_upper_semilattice():
        raise NotSemilattice("global Koszul needs an upper semilattice")
    if any(d > 1 for d in f.dims):
        raise NotSubfunctor("values must be at most one-dimensional")
    for a, b in sorted(poset.covers):
        if f.dims[a] == 1:
            if f.dims[b] != 1 or f.cover_map(a, b) != cached_identity(1, f.p):
                raise NotSubfunctor(
                    "transitions on the support must be identities"
                )
    supp = [i for i in range(poset.n) if f.dims[i] == 1]
    gens = sorted(poset.min_elements(supp))

    if not gens:
        c0 = free_on(poset, [], f.p)
        return Resolution(
            f, [c0], [zero_nat(c0, f)], minimal=False, complete=True
        )

    terms = []
    subsets = []
    for d in range(len(gens)):
        subs = list(itertools.combinations(gens, d + 1))
        joins = [poset.join(s) for s in subs]
        subsets.append({s: i for i, s in enumerate(subs)})
        terms.append(free_on(poset, joins, f.p))

    aug_comps = []
    for x in range(poset.n):
        cols = [
            f.map(g, x).col(0) for g in terms[0].free_generators
            if poset.leq(g, x)
        ]
        aug_comps.append(hstack(cols, rows=f.dims[x], p=f.p))
    diffs = [NatTransformation(terms[0], f, aug_comps)]

    for d in range(1, len(terms)):
        coeffs = {}
        for s, j in subsets[d].items():
            for i in range(len(s)):
                t = s[:i] + s[i + 1:]
                coeffs[(subsets[d - 1][t], j)] = (-1) ** i
        diffs.append(free_nat(terms[d], terms[d - 1], coeffs))
    return Resolution(f, terms, diffs, minimal=False, complete=True)


def resolution_dot(res):
    """DOT rendering of a resolution: one node per term, labeled by its
    generator multiset."""
    poset = res.target.poset
    lines = ["digraph resolution {", "  rankdir=LR;"]
    lines.append(
        f'  M [shape=box, label="target (total dim {sum(res.target.dims)})"];'
    )
    for d, t in enumerate(res.terms):
        counts = {}
        for g in t.free_generators:
            counts[g] = counts.get(g, 0) + 1
        parts = []
        for g in sorted(counts):
            nm = poset.names[g]
            parts.append(nm if counts[g] == 1 else f"{nm}^{counts[g]}")
        label = " + ".join(parts) if parts else "0"
        lines.append(f'  C{d} [label="C{d} = {label}"];')
        lines.append(f"  C{d} -> {'M' if d == 0 else f'C{d - 1}'};")
    lines.append("}")
    return "\n".join(lines) + "\n"
