from collections import Counter

import pytest

from algcompact import dsl, engine
from algcompact import finpos as fp
from algcompact import functors as fn
from algcompact import worlds as w
from algcompact.engine import CompactAlgebra
from algcompact.worlds import Pair, World

from conftest import brute_monotone_tables, relation


# -- independent chain oracles on raw relations ---------------------------

def _lift(n, rel):
    # new bottom is n
    return n + 1, rel | {(n, i) for i in range(n + 1)}


def _sum(a, b):
    (n, r), (m, s) = a, b
    return n + m, r | {(i + n, j + n) for i, j in s}


def _pointed_chain(step, depth):
    x = (1, {(0, 0)})
    out = [x[0]]
    for _ in range(depth - 1):
        x = step(x)
        out.append(x[0])
    return out


def test_lifting_chain_sizes():
    oracle = _pointed_chain(lambda y: _lift(*y), 6)
    assert oracle == [1, 2, 3, 4, 5, 6]
    v = engine.solve_covariant("T X", depth=6)
    assert isinstance(v, engine.Approximated)
    assert v.chain_sizes() == oracle
    assert v.ep_certified


def test_sum_of_lifts_chain_sizes():
    oracle = _pointed_chain(lambda y: _lift(*_sum(y, y)), 6)
    assert oracle == [1, 3, 7, 15, 31, 63]
    v = engine.solve_covariant("T X + T X", depth=6)
    assert isinstance(v, engine.Approximated)
    assert v.chain_sizes() == oracle
    assert v.d_side.initial.ep_certified()


def test_chain_objects_match_relational_oracle():
    ff = dsl.elaborate_covariant(dsl.parse_covariant("T X + T X"))
    c = engine.initial_chain(ff.flipped, 4)
    y = (1, {(0, 0)})
    for obj in c.objects:
        assert obj.size == y[0]
        assert len(relation(obj)) == len(y[1])
        y = _lift(*_sum(y, y))


def test_chain_law():
    # link_{n+1} = F(link_n) and the links compose along the chain
    ff = dsl.elaborate_covariant(dsl.parse_covariant("T X + T (T X * T X)"))
    f = ff.flipped
    c = engine.initial_chain(f, 4)
    for a, b in zip(c.links, c.links[1:]):
        assert f.mor(a) == b
    for k, link in enumerate(c.links):
        assert link.src == c.objects[k] and link.dst == c.objects[k + 1]
    assert c.ep_certified()


def test_terminal_chain_of_nonexample():
    f = dsl.interpret_covariant(dsl.parse_covariant("X * T X"))
    c = engine.terminal_chain(f, 6)
    s, oracle = 1, [1]
    while len(oracle) < 5:
        s = s * (s + 1)
        oracle.append(s)
    assert c.sizes()[:5] == oracle == [1, 2, 6, 42, 1806]
    # the sixth stage would need 1806 * 1807 elements
    assert c.truncated and c.depth == 5
    assert engine.detect_stabilization(c) is None
    assert c.ep_certificates is None


def test_symmetrized_hom_chains():
    s = fn.symmetrize(fn.internal_hom())
    ic, tc = engine.initial_chain(s, 3), engine.terminal_chain(s, 3)
    assert ic.objects[0] == Pair(fp.point(), fp.empty())
    assert tc.objects[0] == Pair(fp.empty(), fp.point())
    assert set(ic.objects) == {ic.objects[0]} and set(tc.objects) == {tc.objects[0]}
    assert engine.detect_stabilization(ic).stage == 0
    assert engine.detect_stabilization(tc).stage == 0


def test_identity_chain_stays_at_the_point():
    c = engine.initial_chain(fn.Identity(World.POINTED), 5)
    assert c.objects == (fp.point(),) * 5
    assert c.ep_certified()
    assert engine.detect_stabilization(c).stage == 0


def test_plain_chains_have_no_certificates():
    c = engine.initial_chain(fn.lifting(), 3)
    assert c.ep_certificates is None and not c.ep_certified()


def test_chain_errors():
    with pytest.raises(engine.EngineError):
        engine.initial_chain(fn.Lift(), 3)
    with pytest.raises(engine.EngineError):
        engine.initial_chain(fn.lifting(), 0)
    c = engine.initial_chain(fn.lifting(), 3)
    with pytest.raises(engine.EngineError, match="not an isomorphism"):
        engine.extract_compact_candidate(fn.lifting(), c, 1)
    with pytest.raises(engine.EngineError, match="no link"):
        engine.extract_compact_candidate(fn.lifting(), c, 5)


def test_stage_is_invariant_under_relabeling():
    ws = dsl.load_workspace(data={"constants": {
        "d": {"elements": ["zz", "aa"], "leq": []},
        "s": {"elements": ["hi", "lo"], "leq": [["lo", "hi"]]},
    }})
    for a, b in (("two", "d"), ("sierpinski", "s")):
        va = engine.solve_covariant(f"c({a}) + T X", ws, depth=4)
        vb = engine.solve_covariant(f"c({b}) + T X", ws, depth=4)
        assert va.kind == vb.kind
        assert va.chain_sizes() == vb.chain_sizes()
        va = engine.solve_covariant(f"c({a})", ws)
        vb = engine.solve_covariant(f"c({b})", ws)
        assert va.algebra.stage == vb.algebra.stage == 1
        assert w.find_iso(World.PLAIN, va.algebra.carrier, vb.algebra.carrier) is not None


# -- verification ---------------------------------------------------------

def _components(p):
    parent = list(range(p.size))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i
    for a, b in relation(p):
        parent[find(a)] = find(b)
    return len({find(i) for i in range(p.size)})


def test_constant_two_counts_match_oracle():
    v = engine.solve_covariant("c(two)")
    assert isinstance(v, engine.Stabilized)
    ini, fin = v.algebra.initiality, v.algebra.finality
    posets = fp.posets_up_to(4)
    assert ini.targets == fin.targets == len(posets) == 25
    # algebras 2 -> B are all functions, coalgebras B -> 2 are constant on components
    n_alg = sum(p.size ** 2 for p in posets)
    n_coalg = sum(2 ** _components(p) for p in posets)
    assert (n_alg, n_coalg) == (310, 87)
    assert ini.counts == Counter({1: n_alg}) and ini.passed
    assert fin.counts == Counter({1: n_coalg}) and fin.passed
    assert len(brute_monotone_tables(fp.chain(2), fp.discrete(2))) == 2


def test_count_functions_agree_with_brute_force():
    v = engine.solve_covariant("c(two)")
    f = dsl.interpret_covariant(dsl.parse_covariant("c(two)"))
    cand = v.algebra
    for b_obj in fp.posets_up_to(3):
        for t in brute_monotone_tables(fp.discrete(2), b_obj):
            b = fp.MonotoneMap(fp.discrete(2), b_obj, t)
            # ω is an iso 2 -> 2, so h = b . ω⁻¹ is forced
            assert engine.count_algebra_morphisms(f, cand, b_obj, b) == 1


def test_shortcut_agrees_with_full_enumeration():
    v = engine.solve_covariant("c(two)")
    d = v.d_side.algebra
    ff = dsl.elaborate_covariant(dsl.parse_covariant("c(two)"))
    fast = engine.verify_initiality(ff.flipped, d, 4)
    slow = engine.verify_initiality(ff.flipped, d, 4, fold=True)
    assert fast.passed and slow.passed
    assert sum(fast.counts.values()) == sum(slow.counts.values()) == slow.structures


def test_identity_on_pointed_is_compact():
    v = engine.solve_functor(fn.Identity(World.POINTED), 4, 4)
    assert isinstance(v, engine.Stabilized)
    a = v.algebra
    assert a.carrier == fp.point()
    assert a.initiality.passed and a.finality.passed
    assert a.initiality.fold_checked > 0 and not a.initiality.fold_discrepancies
    assert set(a.initiality.counts) == {1} and set(a.finality.counts) == {1}


def test_identity_on_plain_is_not():
    v = engine.solve_functor(fn.Identity(World.PLAIN), 3, 3)
    # initial algebra ∅, final coalgebra 1
    assert isinstance(v, engine.Refuted)
    assert v.initial_algebra.carrier == fp.empty()
    assert v.final_coalgebra.carrier == fp.point()
    assert engine.recheck_witness(fn.Identity(World.PLAIN), v.witness_source, v.witness)


def test_nonexample_refutation():
    v = engine.solve_covariant("X * T X", diagnostic=True)
    assert isinstance(v, engine.Refuted)
    init = v.initial_algebra
    assert init.carrier == fp.empty() and init.stage == 0
    assert v.witness.kind == "coalgebra" and v.witness.count == 0
    assert v.witness.carrier == fp.point()
    f = dsl.interpret_covariant(dsl.parse_covariant("X * T X"))
    assert engine.recheck_witness(f, init, v.witness)
    assert engine.refute_compactness(f, init) == v.witness


def test_wrong_candidate_is_rejected():
    # 1 is the final coalgebra of the plain identity, not its initial algebra
    f = fn.Identity(World.PLAIN)
    one = fp.point()
    cand = CompactAlgebra(World.PLAIN, one, fp.identity(one), fp.identity(one), 0, "manual")
    r = engine.verify_initiality(f, cand, 3)
    assert not r.passed
    assert r.failure.count != 1
    assert engine.recheck_witness(f, cand, r.failure)
    assert engine.refute_from_final(f, cand, 3) == r.failure


def test_mixed_nonexample():
    v = engine.solve_mixed("X -> X", diagnostic=True)
    assert isinstance(v, engine.Refuted)
    assert v.initial_algebra.carrier == Pair(fp.point(), fp.empty())
    assert v.final_coalgebra.carrier == Pair(fp.empty(), fp.point())


def test_fold_matches_enumeration():
    ff = dsl.elaborate_covariant(dsl.parse_covariant("c(sierpinski)"))
    d = engine.solve_functor(ff.flipped, 4, 4)
    r = engine.verify_initiality(ff.flipped, d.algebra, 4, fold=True)
    assert r.passed and r.fold_checked == r.structures and not r.fold_discrepancies


def test_fold_needs_pointed_world():
    v = engine.solve_covariant("c(two)")
    with pytest.raises(engine.EngineError):
        engine.verify_initiality(dsl.interpret_covariant(dsl.parse_covariant("c(two)")),
                                 v.algebra, 2, fold=True)


def test_reflect_through_identity_factorization():
    h = fn.Compose(fn.Lift(), fn.Forget())
    factored = dsl.FactoredFunctor(None, h, fn.Identity(World.POINTED), h,
                                   fn.Compose(h, fn.Identity(World.POINTED)))
    d = engine.solve_functor(factored.flipped, 4, 3)
    assert isinstance(d, engine.Approximated)
    r = engine.reflect_through(factored, d, 3)
    assert isinstance(r, engine.Approximated)
    assert r.initial.sizes() == d.initial.sizes()

    k = fn.Const(fp.lift(fp.discrete(2)), World.POINTED, World.POINTED)
    factored = dsl.FactoredFunctor(None, k, fn.Identity(World.POINTED), k,
                                   fn.Compose(k, fn.Identity(World.POINTED)))
    d = engine.solve_functor(factored.flipped, 4, 3)
    r = engine.reflect_through(factored, d, 3)
    assert isinstance(r, engine.Stabilized)
    assert r.algebra.carrier == d.algebra.carrier
    assert r.algebra.initiality.passed and r.algebra.finality.passed


def test_reflect_through_rejects_foreign_verdicts():
    ff = dsl.elaborate_covariant(dsl.parse_covariant("T X"))
    other = engine.solve_functor(fn.Identity(World.PLAIN), 2, 2)
    with pytest.raises(engine.EngineError):
        engine.reflect_through(ff, other)


def test_coherence():
    v = engine.solve_covariant("T X + T (T X * T X)", depth=4)
    assert v.cross_check.passed and v.cross_check.stages_checked == 3
    ff = dsl.elaborate_covariant(dsl.parse_covariant("T X + T X"))
    d = engine.initial_chain(ff.flipped, 4)
    plain = engine.initial_chain(ff.total, 4)
    assert engine._coherence(plain, d, ff.g_side).passed
    wrong = dsl.elaborate_covariant(dsl.parse_covariant("T X * T X")).g_side
    assert engine._coherence(plain, d, wrong).mismatches


# -- the Barr comparison --------------------------------------------------

def _brute_hom_pointed(a, b):
    tables = brute_monotone_tables(a, b)
    return any(all(s[i] == t[i] or b.le(s[i], t[i]) for i in range(a.size) for t in tables)
               for s in tables)


def test_hom_pointedness_against_brute_force(small_posets):
    for a in small_posets:
        for b in small_posets:
            assert engine.hom_pointedness_check(a, b) == _brute_hom_pointed(a, b)


@pytest.mark.parametrize("text, holds, pointed", [
    ("c(two)", False, False),
    ("T X + T X", False, False),
    ("T X", True, True),
    ("c(sierpinski)", True, True),
    ("c(one)", True, True),
    ("c(empty)", False, True),
    ("T (T X * T X)", True, True),
])
def test_barr_reports(text, holds, pointed):
    r = engine.barr_condition_check(text)
    assert r.condition_holds is holds
    assert r.hom_pointed is pointed


@pytest.mark.parametrize("text", ["c(two)", "c(one)", "T X", "T X + T X", "c(sierpinski) * T X",
                                  "T X + c(one)", "T (T X + T X)"])
def test_barr_condition_forces_pointed_hom(text):
    r = engine.barr_condition_check(text)
    if r.condition_holds:
        assert r.hom_pointed
        # Hh . l . ! is then the least endomap of H1
        h1 = r.h_one
        assert all(fp.pointwise_leq(r.composite_map, fp.MonotoneMap(h1, h1, t))
                   for t in brute_monotone_tables(h1, h1))
