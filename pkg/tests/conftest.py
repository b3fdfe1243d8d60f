"""Shared test helpers.

sympy_rank is the independent linear-algebra oracle: sympy's DomainMatrix
over GF(p) knows nothing about our RREF, so agreements are meaningful.
"""
import numpy as np
from sympy import GF
from sympy.polys.matrices import DomainMatrix


def sympy_rank(entries, p):
    a = np.asarray(entries, dtype=np.int64)
    if a.size == 0:
        return 0
    K = GF(p)
    rows = [[K(int(x)) for x in row] for row in a]
    return DomainMatrix(rows, a.shape, K).rank()


def random_matrix(rng, rows, cols, p):
    return rng.integers(0, p, size=(rows, cols))


def random_poset_covers(rng, n):
    """Random DAG on n nodes (edges i->j only for i<j), reduced to covers.

    Returns (names, covers) with the transitive reduction computed by brute
    force, independent of the package's own reduction logic.
    """
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                adj[i, j] = True
    # reflexive-transitive closure by brute force
    leq = adj | np.eye(n, dtype=bool)
    for _ in range(n):
        leq = leq | (leq @ leq)
    covers = []
    for i in range(n):
        for j in range(n):
            if i != j and leq[i, j]:
                between = any(
                    k != i and k != j and leq[i, k] and leq[k, j] for k in range(n)
                )
                if not between:
                    covers.append((i, j))
    names = [f"x{i}" for i in range(n)]
    return names, covers, leq


def random_free_map(rng, poset, p, n_dst, n_src):
    """Random map between random free modules, src -> dst."""
    from relbetti.homalg import free_nat
    from relbetti.pmod import free_on

    gens_dst = sorted(int(g) for g in rng.integers(0, poset.n, n_dst))
    gens_src = sorted(int(g) for g in rng.integers(0, poset.n, n_src))
    dst = free_on(poset, gens_dst, p)
    src = free_on(poset, gens_src, p)
    coeffs = {}
    for i, gd in enumerate(gens_dst):
        for j, gs in enumerate(gens_src):
            if poset.leq(gd, gs):
                c = int(rng.integers(0, p))
                if c:
                    coeffs[(i, j)] = c
    return free_nat(src, dst, coeffs)


def random_module(rng, poset, p, max_gens=3):
    """Random finitely presented module: cokernel of a random free map."""
    from relbetti.homalg import cokernel

    n0 = int(rng.integers(1, max_gens + 1))
    n1 = int(rng.integers(0, max_gens + 1))
    f = random_free_map(rng, poset, p, n0, n1)
    return cokernel(f)[0]


def random_semilattice(rng, ambient, n_seeds=4):
    """Join-closed random subposet of an ambient upper semilattice."""
    from relbetti.poset import Poset

    seeds = {int(x) for x in rng.choice(ambient.n, n_seeds, replace=False)}
    keep = sorted(ambient.sublattice_closure(seeds))
    names = [ambient.names[i] for i in keep]
    leq = ambient.leq_matrix[np.ix_(keep, keep)]
    return Poset.from_order(names, leq)


def longest_chain(poset):
    depth = [0] * poset.n
    for b in range(poset.n):
        for a in poset.parents(b):
            depth[b] = max(depth[b], depth[a] + 1)
    return max(depth, default=0)
