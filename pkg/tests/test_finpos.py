from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algcompact import finpos as fp
from conftest import brute_monotone_tables, brute_poset_classes, has_least, relation


def diamond(order=(0, 1, 2, 3)):
    # bottom < two middles < top, under an arbitrary relabelling
    b, l, r, t = order
    return fp.from_relation(4, [(b, l), (b, r), (l, t), (r, t)])


# -- validation -----------------------------------------------------------

def test_antisymmetry_violation_is_named():
    leq = np.ones((2, 2), dtype=bool)
    with pytest.raises(fp.PosetError, match="antisymmetry"):
        fp.FinPoset(leq)


def test_reflexivity_and_transitivity_violations_are_named():
    with pytest.raises(fp.PosetError, match="reflexivity"):
        fp.FinPoset(np.zeros((1, 1), dtype=bool))
    leq = np.eye(3, dtype=bool)
    leq[0, 1] = leq[1, 2] = True
    with pytest.raises(fp.PosetError, match="transitivity"):
        fp.FinPoset(leq)


def test_bad_bottom_is_rejected():
    with pytest.raises(fp.PosetError, match="bottom"):
        fp.FinPoset(np.eye(2, dtype=bool), bottom=0)


def test_empty_and_chain_validate():
    assert fp.validate_poset(fp.empty())
    c = fp.chain(3)
    assert fp.validate_poset(c)
    assert c.bottom == 0
    assert fp.empty().bottom is None


def test_literal_roundtrip_keeps_order_and_bottom():
    lit = {"elements": ["a", "b", "c"], "leq": [["a", "b"], ["b", "c"]], "bottom": "a"}
    p = fp.from_literal(lit)
    assert p == fp.chain(3)
    assert fp.from_literal(fp.to_literal(p)) == p
    assert fp.to_literal(p)["leq"] == [["a", "b"], ["b", "c"]]


def test_literal_rejects_cycles_after_closure():
    with pytest.raises(fp.PosetError, match="antisymmetry"):
        fp.from_literal({"elements": ["a", "b"], "leq": [["a", "b"], ["b", "a"]]})


# -- composition ----------------------------------------------------------

def test_compose_tables_by_hand():
    c3 = fp.chain(3)
    f = fp.monotone_map(c3, c3, [0, 0, 2])
    g = fp.monotone_map(c3, c3, [1, 2, 2])
    # g(f(0)) = g(0) = 1, g(f(1)) = g(0) = 1, g(f(2)) = g(2) = 2
    assert fp.compose(g, f).table == (1, 1, 2)
    assert fp.compose(f, g).table == (0, 2, 2)


def test_compose_identity_and_bottom():
    c3 = fp.chain(3)
    f = fp.monotone_map(c3, c3, [0, 1, 1])
    assert fp.compose(fp.identity(c3), f) == f == fp.compose(f, fp.identity(c3))
    bot = fp.bottom_map(c3, c3)
    assert fp.compose(bot, f) == bot


def test_compose_rejects_mismatched_middle():
    f = fp.identity(fp.chain(2))
    g = fp.identity(fp.discrete(2))
    with pytest.raises(fp.CompositionError):
        fp.compose(g, f)


def test_non_monotone_table_is_rejected():
    with pytest.raises(fp.PosetError, match="monotone"):
        fp.monotone_map(fp.chain(2), fp.chain(2), [1, 0])


def test_category_laws_exhaustively_on_size_three():
    posets = fp.posets_up_to(3)
    for a, b, c, d in product(posets, repeat=4):
        fs = fp.enumerate_monotone_maps(a, b)
        gs = fp.enumerate_monotone_maps(b, c)
        hs = fp.enumerate_monotone_maps(c, d)
        if len(fs) * len(gs) * len(hs) > 200:
            fs, gs, hs = fs[:6], gs[:6], hs[:6]
        for f in fs:
            assert fp.compose(fp.identity(b), f) == f == fp.compose(f, fp.identity(a))
            for g in gs:
                for h in hs:
                    assert fp.compose(fp.compose(h, g), f) == fp.compose(h, fp.compose(g, f))


# -- constructions --------------------------------------------------------

def test_lift_examples():
    assert fp.lift(fp.empty()).size == 1 and fp.lift(fp.empty()).bottom == 0
    v = fp.lift(fp.discrete(2))
    assert relation(v) == {(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)}
    ident = fp.identity(fp.discrete(2))
    assert fp.lift_map(ident) == fp.identity(v)
    f = fp.monotone_map(fp.chain(2), fp.chain(3), [0, 2])
    lf = fp.lift_map(f)
    assert lf.is_strict and lf.table == (0, 1, 3)


def test_product_examples():
    assert fp.product(fp.empty(), fp.chain(3)).size == 0
    grid = fp.product(fp.chain(2), fp.chain(2))
    # row-major pairs; order is componentwise
    expected = {(i, j) for i in range(4) for j in range(4)
                if i // 2 <= j // 2 and i % 2 <= j % 2}
    assert relation(grid) == expected
    assert grid.bottom == 0
    d = diamond()
    assert fp.poset_iso(fp.product(fp.point(), d), d) is not None


def test_coproduct_examples():
    x = fp.chain(3)
    assert fp.poset_iso(fp.coproduct(fp.empty(), x), x) is not None
    assert fp.coproduct(fp.empty(), x).bottom is not None
    assert fp.coproduct(fp.point(), fp.point()) == fp.discrete(2)
    s = fp.coproduct(fp.chain(2), fp.point())
    assert s.size == 3 and len(relation(s)) == 4
    assert s.bottom is None


def test_coalesced_sum_examples():
    assert fp.coalesced_sum(fp.point(), fp.point()).size == 1
    v = fp.coalesced_sum(fp.chain(2), fp.chain(2))
    assert relation(v) == {(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)}
    x = diamond()
    assert fp.poset_iso(fp.coalesced_sum(fp.point(), x), x) is not None
    with pytest.raises(fp.PointednessError):
        fp.coalesced_sum(fp.discrete(2), fp.point())


def test_smash_examples(small_pointed):
    x = diamond()
    assert fp.smash_product(fp.point(), x).size == 1
    assert fp.smash_product(fp.chain(2), fp.chain(2)) == fp.chain(2)
    for a, b in product(fp.posets_up_to(4, pointed_only=True), repeat=2):
        assert fp.smash_product(a, b).size == (a.size - 1) * (b.size - 1) + 1


def test_hom_examples():
    h = fp.hom_poset(fp.discrete(2), fp.discrete(2))
    assert h == fp.discrete(4)
    assert fp.hom_poset(fp.empty(), fp.chain(3)).size == 1
    assert fp.hom_poset(fp.chain(2), fp.empty()).size == 0


def test_strict_hom_examples():
    assert fp.strict_hom_poset(fp.point(), diamond()).size == 1
    s = fp.strict_hom_poset(fp.chain(2), fp.chain(2))
    assert s == fp.chain(2)
    maps = fp.hom_elements(fp.chain(2), fp.chain(2), strict_only=True)
    assert maps[s.bottom] == fp.bottom_map(fp.chain(2), fp.chain(2))


def test_hom_pointed_iff_target_pointed_or_source_empty(small_posets):
    for a, b in product(small_posets, repeat=2):
        h = fp.hom_poset(a, b)
        assert (h.bottom is not None) == (b.bottom is not None or a.size == 0)


# -- enumeration ----------------------------------------------------------

def test_enumeration_examples():
    assert len(fp.enumerate_monotone_maps(fp.empty(), fp.chain(2))) == 1
    assert len(fp.enumerate_monotone_maps(fp.discrete(2), fp.discrete(2))) == 4
    assert len(fp.enumerate_monotone_maps(fp.chain(2), fp.chain(2), strict_only=True)) == 2


def test_enumeration_matches_brute_force():
    posets = fp.posets_up_to(3) + [diamond(), fp.chain(4)]
    for a, b in product(posets, repeat=2):
        got = [m.table for m in fp.enumerate_monotone_maps(a, b)]
        assert got == brute_monotone_tables(a, b)
        assert fp.hom_poset(a, b).size == len(got)
        if a.bottom is not None and b.bottom is not None:
            got = [m.table for m in fp.enumerate_monotone_maps(a, b, strict_only=True)]
            assert got == brute_monotone_tables(a, b, strict=True)


def test_streaming_matches_cached_enumeration():
    a, b = diamond(), fp.chain(3)
    assert [m.table for m in fp.iter_monotone_maps(a, b)] == \
        [m.table for m in fp.enumerate_monotone_maps(a, b)]


def test_enumeration_limit_raises():
    big = fp.discrete(7)
    with pytest.raises(fp.SizeLimitExceeded):
        fp.enumerate_monotone_maps(big, fp.discrete(4))


def test_hom_order_is_pointwise():
    a, b = fp.chain(2), fp.chain(3)
    maps = fp.hom_elements(a, b)
    h = fp.hom_poset(a, b)
    for i, f in enumerate(maps):
        for j, g in enumerate(maps):
            assert h.le(i, j) == all(b.le(x, y) for x, y in zip(f.table, g.table))


# -- isomorphism ----------------------------------------------------------

def test_iso_examples():
    d = diamond()
    assert fp.poset_iso(d, d) == fp.identity(d)
    assert fp.poset_iso(fp.chain(2), fp.discrete(2)) is None
    other = diamond((2, 0, 3, 1))
    phi = fp.poset_iso(d, other)
    assert phi is not None and fp.is_iso(phi)
    assert fp.compose(fp.inverse(phi), phi) == fp.identity(d)


def test_iso_symmetry_under_relabelling():
    posets = fp.posets_up_to(4)
    for p in posets:
        for perm in list(permutations(range(p.size)))[:6]:
            q = fp.FinPoset(p.leq[np.ix_(perm, perm)])
            assert (fp.poset_iso(p, q) is None) == (fp.poset_iso(q, p) is None) is False
    for p, q in product(posets, repeat=2):
        assert (fp.poset_iso(p, q) is None) == (fp.poset_iso(q, p) is None) == (p is not q)


# -- ep-pairs and least elements ------------------------------------------

def test_ep_examples():
    d = diamond()
    ident = fp.identity(d)
    assert fp.is_ep_pair(ident, ident)
    e = fp.bottom_map(fp.point(), d)
    p = fp.bottom_map(d, fp.point())
    assert fp.is_ep_pair(e, p)
    squash = fp.constant(fp.chain(2), fp.chain(2), 1)
    assert not fp.is_ep_pair(squash, fp.identity(fp.chain(2)))


def test_ep_endpoint_mismatch_raises():
    with pytest.raises(fp.CompositionError):
        fp.is_ep_pair(fp.identity(fp.chain(2)), fp.identity(fp.chain(3)))


def test_zero_object_is_e_initial():
    for x in fp.posets_up_to(4, pointed_only=True):
        assert fp.is_ep_pair(fp.bottom_map(fp.point(), x), fp.bottom_map(x, fp.point()))


def test_find_least_examples():
    assert fp.find_least(fp.discrete(2)) is None
    assert fp.find_least(fp.lift(fp.discrete(3))) == 0
    assert fp.find_least(fp.empty()) is None
    assert fp.find_least(fp.hom_poset(fp.discrete(2), fp.discrete(2))) is None


# -- small-poset enumeration ----------------------------------------------

def test_poset_counts_match_brute_force():
    for n in range(5):
        assert len(fp.posets_up_to(n)) - len(fp.posets_up_to(n - 1) if n else []) \
            == len(brute_poset_classes(n))
    # 1 + 1 + 2 + 5 + 16 posets on at most four points
    assert len(fp.posets_up_to(4)) == 25


def test_pointed_counts_match_brute_force():
    expected = 0
    for n in range(1, 5):
        expected += sum(1 for cls in brute_poset_classes(n) if has_least(n, set(cls)))
    assert len(fp.posets_up_to(4, pointed_only=True)) == expected == 9


def test_size_five_count():
    # 63 iso classes on five points (A000112)
    assert len(fp.posets_up_to(5)) - len(fp.posets_up_to(4)) == 63


# -- functoriality and canaries -------------------------------------------

POOL = [p for p in fp.posets_up_to(3) if p.size]
POINTED = fp.posets_up_to(3, pointed_only=True)


@st.composite
def composable(draw, pool=POOL, strict=False):
    a, b, c = (draw(st.sampled_from(pool)) for _ in range(3))
    f = draw(st.sampled_from(fp.enumerate_monotone_maps(a, b, strict)))
    g = draw(st.sampled_from(fp.enumerate_monotone_maps(b, c, strict)))
    return f, g


def _laws(on_obj, on_map, pairs):
    (f1, g1), (f2, g2) = pairs
    a = (f1.src, f2.src)
    assert on_map(fp.identity(a[0]), fp.identity(a[1])) == fp.identity(on_obj(*a))
    lhs = on_map(fp.compose(g1, f1), fp.compose(g2, f2))
    rhs = fp.compose(on_map(g1, g2), on_map(f1, f2))
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(composable(), composable())
def test_plain_constructions_are_functorial(p1, p2):
    _laws(fp.product, fp.product_map, (p1, p2))
    _laws(fp.coproduct, fp.coproduct_map, (p1, p2))
    f, g = p1
    assert fp.lift_map(fp.compose(g, f)) == fp.compose(fp.lift_map(g), fp.lift_map(f))


@settings(max_examples=60, deadline=None)
@given(composable(POINTED, True), composable(POINTED, True))
def test_pointed_constructions_are_functorial(p1, p2):
    _laws(fp.coalesced_sum, fp.coalesced_sum_map, (p1, p2))
    _laws(fp.smash_product, fp.smash_map, (p1, p2))


@settings(max_examples=40, deadline=None)
@given(composable(), composable())
def test_hom_is_functorial(p1, p2):
    (f1, g1), (f2, g2) = p1, p2
    # contravariant in the first slot: [f1, f2] then [g1, g2] composes as [g1 f1, g2 f2]
    first = fp.hom_map(g1, f2)
    second = fp.hom_map(f1, g2)
    assert fp.compose(second, first) == fp.hom_map(fp.compose(g1, f1), fp.compose(g2, f2))
    a, b = f1.src, f2.src
    assert fp.hom_map(fp.identity(a), fp.identity(b)) == fp.identity(fp.hom_poset(a, b))


def test_constructed_posets_are_antisymmetric():
    seeds = fp.posets_up_to(3)
    built = []
    for a, b in product(seeds, repeat=2):
        built += [fp.product(a, b), fp.coproduct(a, b), fp.hom_poset(a, b), fp.lift(a)]
        if a.bottom is not None and b.bottom is not None:
            built += [fp.coalesced_sum(a, b), fp.smash_product(a, b), fp.strict_hom_poset(a, b)]
    for p in built:
        off = p.leq & p.leq.T & ~np.eye(p.size, dtype=bool)
        assert not off.any()
        assert fp.validate_poset(p)


def test_values_are_immutable():
    p = fp.chain(3)
    with pytest.raises(ValueError):
        p.leq[0, 0] = False
    with pytest.raises(AttributeError):
        fp.identity(p).table = (0, 0, 0)
