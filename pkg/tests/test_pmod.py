import numpy as np
import pytest

from relbetti.fieldlin import Matrix
from relbetti.poset import from_covers, grid
from relbetti.pmod import (
    BettiDiagram,
    FunctorialityViolation,
    InvalidSpread,
    PersistenceModule,
    PosetMismatch,
    constant,
    direct_sum,
    free,
    free_on,
    from_antichain,
    from_upset,
    h0,
    is_filtration,
    is_spread,
    m0_demo,
    radical,
    spread,
    validate,
    zero_module,
)


def chain(k):
    names = [str(i) for i in range(k)]
    return from_covers(names, [(str(i), str(i + 1)) for i in range(k - 1)])


def diamond():
    return from_covers(
        ["bot", "x", "y", "top"],
        [("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")],
    )


class TestValidate:
    def test_free_ok(self):
        p = diamond()
        validate(free(p, p.index("bot"), 2))

    def test_diamond_sign_mismatch(self):
        p = diamond()
        dims = [1, 1, 1, 1]
        maps = {}
        for a, b in p.covers:
            val = 1
            if p.names[a] == "y" and p.names[b] == "top":
                val = -1
            maps[(a, b)] = Matrix([[val]], 3)
        m = PersistenceModule(p, 3, dims, maps)
        with pytest.raises(FunctorialityViolation):
            validate(m)

    def test_m0_ok(self):
        validate(m0_demo(2))

    def test_shape_mismatch_rejected(self):
        p = chain(2)
        with pytest.raises(ValueError):
            PersistenceModule(p, 2, [1, 1], {(0, 1): Matrix.zeros(2, 1, 2)})


class TestFree:
    def test_middle_of_chain(self):
        p = chain(3)
        m = free(p, p.index("1"), 2)
        assert m.dims == (0, 1, 1)

    def test_global_max(self):
        p = diamond()
        m = free(p, p.index("top"), 2)
        assert m.dims == (0, 0, 0, 1)
        assert m.dims[p.index("top")] == 1

    def test_transitions_identity_inside(self):
        p = chain(3)
        m = free(p, 0, 5)
        assert m.map(0, 2) == Matrix.identity(1, 5)

    def test_free_on_layout(self):
        p = chain(3)
        m = free_on(p, [0, 1, 0], 2)
        assert m.dims == (2, 3, 3)
        assert m.free_generators == (0, 1, 0)
        # generator order preserved in coordinates: at element 1 the alive
        # generators are 0,1,2 in that order
        assert m.map(0, 1).tolist() == [[1, 0], [0, 0], [0, 1]]


class TestIndicatorConstructors:
    def test_empty_upset_is_zero(self):
        p = chain(3)
        m = from_upset(p, frozenset(), 2)
        assert m.dims == (0, 0, 0)

    def test_constant_chain(self):
        p = chain(3)
        m = constant(p, 2)
        assert m.dims == (1, 1, 1)
        assert m.map(0, 2) == Matrix.identity(1, 2)

    def test_from_antichain_is_upset_module(self):
        g = grid(5, 2)
        s = {g.index("0,2"), g.index("1,0")}
        m = from_antichain(g, s, 2)
        expect = from_upset(g, g.upset_of(s), 2)
        assert m == expect

    def test_spread_support(self):
        g = grid(5, 2)
        s = {g.index("0,0")}
        t = {g.index("2,3"), g.index("3,1")}
        m = spread(g, s, t, 2)
        for i in range(g.n):
            x, y = g.coords[i]
            inside = (x <= 2 and y <= 3) or (x <= 3 and y <= 1)
            assert m.dims[i] == (1 if inside else 0)
        validate(m)

    def test_invalid_spread(self):
        g = grid(1, 2)
        with pytest.raises(InvalidSpread):
            spread(g, {g.index("1,0")}, {g.index("0,1")}, 2)


class TestDirectSum:
    def test_empty_is_zero(self):
        p = chain(2)
        m = direct_sum(p, 2, [])
        assert m.dims == (0, 0)

    def test_doubling(self):
        p = chain(2)
        f = free(p, 0, 2)
        m = direct_sum(p, 2, [(f, 2)])
        assert m.dims == (2, 2)

    def test_dims_add(self):
        p = diamond()
        a = free(p, 0, 2)
        b = from_upset(p, p.up(p.index("x")), 2)
        m = direct_sum(p, 2, [(a, 2), (b, 3)])
        for i in range(p.n):
            assert m.dims[i] == 2 * a.dims[i] + 3 * b.dims[i]
        validate(m)

    def test_poset_mismatch(self):
        with pytest.raises(PosetMismatch):
            direct_sum(chain(2), 2, [(free(chain(3), 0, 2), 1)])


class TestRadicalH0:
    def test_radical_of_free(self):
        p = diamond()
        a = p.index("bot")
        r = radical(free(p, a, 2))
        for i in range(p.n):
            expect = 1 if (p.leq(a, i) and i != a) else 0
            assert r.basis[i].cols == expect

    def test_radical_of_zero(self):
        p = chain(2)
        r = radical(zero_module(p, 2))
        assert all(r.basis[i].cols == 0 for i in range(p.n))

    def test_radical_of_m0(self):
        m = m0_demo(2)
        g = m.poset
        r = radical(m)
        origin = g.index("0,0")
        for i in range(g.n):
            expect = m.dims[i] if i != origin else 0
            assert r.basis[i].cols == expect

    def test_radical_stable_under_transitions(self):
        m = m0_demo(2)
        r = radical(m)
        r.check_stable()

    def test_h0_free(self):
        p = diamond()
        a = p.index("x")
        assert h0(free(p, a, 2)) == tuple(
            1 if i == a else 0 for i in range(p.n)
        )

    def test_h0_m0(self):
        m = m0_demo(2)
        g = m.poset
        expect = tuple(1 if i == g.index("0,0") else 0 for i in range(g.n))
        assert h0(m) == expect

    def test_h0_of_free_sum_reads_multiplicities(self):
        p = diamond()
        beta = {0: 2, 2: 1}
        m = direct_sum(p, 2, [(free(p, a, 2), k) for a, k in beta.items()])
        assert h0(m) == tuple(beta.get(i, 0) for i in range(p.n))

    def test_h0_additive(self):
        p = diamond()
        a = free(p, 0, 5)
        b = spread(p, {p.index("x")}, {p.index("x")}, 5)
        s = direct_sum(p, 5, [(a, 1), (b, 2)])
        ha, hb, hs = h0(a), h0(b), h0(s)
        assert hs == tuple(x + 2 * y for x, y in zip(ha, hb))


class TestPredicates:
    def test_free_is_filtration(self):
        p = diamond()
        assert is_filtration(free(p, 0, 2))

    def test_m0_is_spread(self):
        assert is_spread(m0_demo(2))

    def test_rank_drop_not_spread(self):
        p = chain(3)
        m = PersistenceModule(
            p,
            2,
            [1, 1, 1],
            {(0, 1): Matrix([[1]], 2), (1, 2): Matrix.zeros(1, 1, 2)},
        )
        validate(m)
        assert not is_spread(m)

    def test_upset_module_is_filtration(self):
        g = grid(2, 2)
        rng = np.random.default_rng(4)
        for _ in range(10):
            s = {int(x) for x in rng.choice(g.n, 2, replace=False)}
            u = g.upset_of(s)
            m = from_upset(g, u, 2)
            assert is_filtration(m)
            assert all(d <= 1 for d in m.dims)

    def test_spread_reconstruction(self):
        g = grid(2, 2)
        m = spread(g, {g.index("0,0")}, {g.index("1,2"), g.index("2,0")}, 2)
        assert is_spread(m)
        supp = [i for i in range(g.n) if m.dims[i] == 1]
        rebuilt = spread(g, g.min_elements(supp), g.max_elements(supp), 2)
        assert rebuilt.dims == m.dims


class TestM0:
    def test_total_dim(self):
        m = m0_demo(2)
        assert sum(m.dims) == 14

    def test_corner_values(self):
        m = m0_demo(2)
        g = m.poset
        assert m.dims[g.index("0,0")] == 1
        assert m.dims[g.index("4,4")] == 0
        assert m.dims[g.index("3,1")] == 1
        assert m.dims[g.index("3,2")] == 0
        assert m.dims[g.index("2,3")] == 1
        assert m.dims[g.index("0,4")] == 0

    def test_odd_characteristic(self):
        m = m0_demo(5)
        assert m.p == 5
        validate(m)


class TestMapCache:
    def test_path_independence_on_diamond(self):
        p = diamond()
        m = constant(p, 7)
        assert m.map(p.index("bot"), p.index("top")) == Matrix.identity(1, 7)

    def test_identity_at_element(self):
        p = chain(2)
        m = free(p, 0, 2)
        assert m.map(1, 1) == Matrix.identity(1, 2)

    def test_non_comparable_rejected(self):
        p = diamond()
        m = constant(p, 2)
        with pytest.raises(ValueError):
            m.map(p.index("x"), p.index("y"))


class TestBettiDiagram:
    def test_entries_and_equality(self):
        b = BettiDiagram({(0, 3): 1, (1, 5): 2})
        assert b.get(0, 3) == 1
        assert b.get(2, 0) == 0
        assert b == BettiDiagram({(1, 5): 2, (0, 3): 1})
        assert b != BettiDiagram({(0, 3): 1})

    def test_zero_entries_dropped(self):
        b = BettiDiagram({(0, 3): 0, (1, 1): 1})
        assert b == BettiDiagram({(1, 1): 1})
        assert b.max_degree() == 1

    def test_degree_view(self):
        b = BettiDiagram({(0, 3): 1, (0, 5): 2, (1, 5): 1})
        assert b.degree(0) == {3: 1, 5: 2}
        assert b.total(0) == 3
        assert b.total(2) == 0

    def test_json_sorted(self):
        p = chain(3)
        b = BettiDiagram({(1, 2): 1, (0, 0): 1, (1, 0): 3})
        assert b.to_json(p) == {
            "betti": [
                {"at": "0", "d": 0, "mult": 1},
                {"at": "0", "d": 1, "mult": 3},
                {"at": "2", "d": 1, "mult": 1},
            ]
        }

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            BettiDiagram({(0, 0): -1})


class TestModuleJson:
    def test_roundtrip_m0(self):
        m = m0_demo(2)
        j = m.to_json()
        back = PersistenceModule.from_json(j, p=2)
        assert back == m

    def test_omitted_dims_default_zero(self):
        p = chain(2)
        j = {"poset": p.to_json(), "dims": {"1": 1}, "maps": {}}
        m = PersistenceModule.from_json(j, p=2)
        assert m.dims == (0, 1)

    def test_omitted_maps_default_zero(self):
        p = chain(2)
        j = {"poset": p.to_json(), "dims": {"0": 1, "1": 1}, "maps": {}}
        m = PersistenceModule.from_json(j, p=2)
        assert m.cover_map(0, 1).is_zero()
