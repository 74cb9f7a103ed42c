from collections import defaultdict

import pytest

from algcompact import dsl
from algcompact import finpos as fp
from algcompact import functors as fn
from algcompact import worlds as w
from algcompact.worlds import Pair, World, WorldError

from conftest import brute_monotone_tables, relation

LF = fn.Compose(fn.Lift(), fn.Forget())

FUNCTORS = {
    "id": (fn.Identity(World.PLAIN), 3),
    "lift": (fn.lifting(), 3),
    "sum": (fn.Sum(fn.lifting(), fn.lifting()), 3),
    "prod": (fn.Product(fn.Identity(World.PLAIN), fn.lifting()), 3),
    "const": (fn.Const(fp.discrete(2), World.PLAIN, World.PLAIN, "two"), 3),
    "hom": (fn.Hom(fn.OpSquare(fn.lifting())), 2),
    "sym-hom": (fn.symmetrize(fn.internal_hom()), 2),
    "sym-lift-hom": (fn.symmetrize(fn.Hom(fn.OpSquare(fn.lifting()))), 2),
    "pointed-lift": (LF, 3),
    "coalesced": (fn.CoalescedSum(LF, LF), 3),
    "smash": (fn.Smash(LF, fn.Identity(World.POINTED)), 3),
    "op-pointed": (fn.OpSquare(LF), 2),
    "F": (fn.Lift(), 3),
    "U": (fn.Forget(), 3),
}


def _homs(world, maps):
    by = defaultdict(list)
    for m in maps:
        by[(w.src(world, m), w.dst(world, m))].append(m)
    return by


@pytest.mark.parametrize("name", sorted(FUNCTORS))
def test_functor_laws(name):
    f, bound = FUNCTORS[name]
    objs, maps = dsl.probe_set(f.src, bound)
    for x in objs:
        assert f.mor(w.identity(f.src, x)) == w.identity(f.dst, f.obj(x))
    by_src = defaultdict(list)
    for m in maps:
        by_src[w.src(f.src, m)].append(m)
    for g in maps[::3]:
        for h in by_src[w.dst(f.src, g)][::3]:
            lhs = f.mor(w.compose(f.src, h, g))
            assert lhs == w.compose(f.dst, f.mor(h), f.mor(g))
    for m in maps:
        fm = f.mor(m)
        assert w.src(f.dst, fm) == f.obj(w.src(f.src, m))
        assert w.dst(f.dst, fm) == f.obj(w.dst(f.src, m))


@pytest.mark.parametrize("name", sorted(FUNCTORS))
def test_locally_monotone(name):
    f, bound = FUNCTORS[name]
    _, maps = dsl.probe_set(f.src, bound)
    for hom in _homs(f.src, maps).values():
        for a in hom:
            for b in hom:
                if w.leq(f.src, a, b):
                    assert w.leq(f.dst, f.mor(a), f.mor(b))


def _ep_in(world, e, p) -> bool:
    if world.is_pair:
        # the negative component lives in C^op: there p is the embedding
        return bool(fp.is_ep_pair(p.neg, e.neg)) and bool(fp.is_ep_pair(e.pos, p.pos))
    return bool(fp.is_ep_pair(e, p))


@pytest.mark.parametrize("name", sorted(FUNCTORS))
def test_ep_pairs_are_preserved(name):
    f, bound = FUNCTORS[name]
    _, maps = dsl.probe_set(f.src, bound)
    hom = _homs(f.src, maps)
    seen = 0
    for (a, b), es in hom.items():
        for e in es:
            for p in hom.get((b, a), ()):
                if _ep_in(f.src, e, p):
                    seen += 1
                    assert _ep_in(f.dst, f.mor(e), f.mor(p))
    assert seen > 0


def test_hom_of_discrete_two():
    d = fp.discrete(2)
    h = fp.hom_poset(d, d)
    tables = brute_monotone_tables(d, d)
    assert h.size == len(tables) == 4
    # pointwise order into a discrete poset is discrete
    assert relation(h) == {(i, i) for i in range(4)}


def test_hom_into_chain_is_pointwise():
    c, d = fp.chain(2), fp.discrete(2)
    h = fp.hom_poset(d, c)
    tables = brute_monotone_tables(d, c)
    assert h.size == len(tables)
    expected = sum(1 for s in tables for t in tables if all(s[i] <= t[i] for i in range(2)))
    assert len(relation(h)) == expected


def test_lifting_adds_a_bottom():
    t = fn.lifting()
    for x in fp.posets_up_to(3):
        y = t.obj(x)
        assert y.size == x.size + 1
        assert y.bottom is not None
        assert len(relation(y)) == len(relation(x)) + x.size + 1


def test_world_mismatches_are_rejected():
    with pytest.raises(WorldError):
        fn.Compose(fn.Lift(), fn.Lift())
    with pytest.raises(WorldError):
        fn.Sum(fn.Lift(), fn.Lift())
    with pytest.raises(WorldError):
        fn.CoalescedSum(fn.lifting(), fn.lifting())
    with pytest.raises(fn.VarianceError):
        fn.Hom(fn.lifting())
    with pytest.raises(fn.VarianceError):
        fn.OpSquare(fn.internal_hom())
    with pytest.raises(fn.VarianceError):
        fn.Proj2(fn.lifting())
    with pytest.raises(WorldError):
        fn.Const(fp.discrete(2), World.POINTED, World.POINTED)


def test_checked_application():
    with pytest.raises(WorldError):
        fn.apply_obj(fn.Forget(), fp.discrete(2))
    with pytest.raises(WorldError):
        fn.apply_obj(fn.internal_hom(), fp.point())
    assert fn.apply_obj(fn.Lift(), fp.discrete(2)).size == 3
    assert fn.apply_obj(fn.internal_hom(), Pair(fp.discrete(2), fp.chain(2))).size == 4


def test_factorization_of_lifting():
    assert fn.lifting().is_endo and LF.is_endo
    assert not fn.Lift().is_endo
    for x in fp.posets_up_to(3):
        assert fn.Forget().obj(fn.Lift().obj(x)) == fp.lift(x)
