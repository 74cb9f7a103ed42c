"""Finite categories presented by tables, and exhaustive (co)algebra search.

Objects and morphisms are integer indices.  Composition is a dict keyed by
``(g, f)`` holding the index of ``g . f`` for every composable pair.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from . import finpos as fp
from .finpos import Check

MAX_OBJECTS = 4
MAX_MORPHISMS = 24


class FincatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FinCategory:
    objects: tuple
    src: tuple
    dst: tuple
    identities: tuple
    comp: dict = field(repr=False)
    names: tuple = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"m{i}" for i in range(len(self.src))))

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.src)

    @cached_property
    def homs(self) -> dict:
        out = {(a, b): [] for a in range(self.n_objects) for b in range(self.n_objects)}
        for m in range(self.n_morphisms):
            out[self.src[m], self.dst[m]].append(m)
        return out

    def hom(self, a: int, b: int) -> list:
        return self.homs[a, b]

    def compose(self, g: int, f: int) -> int:
        try:
            return self.comp[g, f]
        except KeyError:
            raise FincatError(f"{self.names[g]} . {self.names[f]} is not defined") from None

    def composable(self):
        for f in range(self.n_morphisms):
            for g in range(self.n_morphisms):
                if self.src[g] == self.dst[f]:
                    yield g, f

    def is_iso(self, f: int) -> bool:
        a, b = self.src[f], self.dst[f]
        return any(self.comp[g, f] == self.identities[a] and self.comp[f, g] == self.identities[b]
                   for g in self.hom(b, a))


def check_category(c: FinCategory) -> Check:
    n = c.n_morphisms
    if not (len(c.dst) == n and len(c.identities) == c.n_objects):
        return Check(False, "table lengths disagree")
    for x, i in enumerate(c.identities):
        if c.src[i] != x or c.dst[i] != x:
            return Check(False, f"identity {c.names[i]} is not an endomorphism of {c.objects[x]}")
    for g, f in c.composable():
        h = c.comp.get((g, f))
        if h is None:
            return Check(False, f"composite {c.names[g]} . {c.names[f]} missing")
        if c.src[h] != c.src[f] or c.dst[h] != c.dst[g]:
            return Check(False, f"composite {c.names[g]} . {c.names[f]} has wrong endpoints")
    for f in range(n):
        if c.comp[c.identities[c.dst[f]], f] != f or c.comp[f, c.identities[c.src[f]]] != f:
            return Check(False, f"identity law fails at {c.names[f]}")
    for g, f in c.composable():
        gf = c.comp[g, f]
        for h in (h for b in range(c.n_objects) for h in c.hom(c.dst[g], b)):
            if c.comp[h, gf] != c.comp[c.comp[h, g], f]:
                return Check(False, f"associativity fails at ({c.names[h]}, {c.names[g]}, {c.names[f]})")
    return Check(True)


def make_category(objects: Sequence[str], morphisms: Sequence[tuple], composition,
                  identities: Sequence[int]) -> FinCategory:
    """Build from ``(src, dst)`` pairs, a composition dict and identity indices."""
    src = tuple(m[0] for m in morphisms)
    dst = tuple(m[1] for m in morphisms)
    return FinCategory(tuple(objects), src, dst, tuple(identities), dict(composition))


def poset_category(p: fp.FinPoset) -> FinCategory:
    """One morphism ``x -> y`` for each ``x <= y``."""
    pairs = [(x, y) for x in range(p.size) for y in range(p.size) if p.le(x, y)]
    index = {pair: i for i, pair in enumerate(pairs)}
    comp = {}
    for (b, c), g in index.items():
        for (a, b2), f in index.items():
            if b2 == b:
                comp[g, f] = index[a, c]
    names = tuple(f"{a}<={b}" for a, b in pairs)
    return FinCategory(tuple(str(x) for x in range(p.size)), tuple(a for a, _ in pairs),
                       tuple(b for _, b in pairs), tuple(index[x, x] for x in range(p.size)),
                       comp, names)


def concrete_category(sizes: Sequence[int], generators: Sequence[tuple],
                      limit: int = MAX_MORPHISMS) -> Optional[FinCategory]:
    """Close functions between finite sets under composition.

    ``generators`` holds ``(src, dst, table)`` triples.  Returns ``None`` when
    the closure has more than ``limit`` morphisms.
    """
    maps = {}
    order = []

    def add(s, d, t) -> bool:
        key = (s, d, tuple(t))
        if key not in maps:
            maps[key] = len(order)
            order.append(key)
        return len(order) <= limit

    for x, n in enumerate(sizes):
        if not add(x, x, range(n)):
            return None
    for s, d, t in generators:
        if not add(s, d, t):
            return None
    grew = True
    while grew:
        grew = False
        for (s1, d1, t1) in list(order):
            for (s2, d2, t2) in list(order):
                if d1 == s2:
                    key = (s1, d2, tuple(t2[i] for i in t1))
                    if key not in maps:
                        grew = True
                        if not add(*key):
                            return None
    comp = {}
    for f, (s1, d1, t1) in enumerate(order):
        for g, (s2, d2, t2) in enumerate(order):
            if d1 == s2:
                comp[g, f] = maps[s1, d2, tuple(t2[i] for i in t1)]
    names = tuple(f"{s}->{d}:{''.join(map(str, t)) or 'e'}" for s, d, t in order)
    return FinCategory(tuple(f"X{x}" for x in range(len(sizes))),
                       tuple(k[0] for k in order), tuple(k[1] for k in order),
                       tuple(range(len(sizes))), comp, names)


@dataclass(frozen=True, eq=False)
class FunctorTable:
    source: FinCategory
    target: FinCategory
    obj_map: tuple
    mor_map: tuple

    @property
    def is_endo(self) -> bool:
        return self.source is self.target


def check_functor(f: FunctorTable) -> Check:
    c, d = f.source, f.target
    if len(f.obj_map) != c.n_objects or len(f.mor_map) != c.n_morphisms:
        return Check(False, "functor tables have the wrong length")
    for m in range(c.n_morphisms):
        fm = f.mor_map[m]
        if d.src[fm] != f.obj_map[c.src[m]] or d.dst[fm] != f.obj_map[c.dst[m]]:
            return Check(False, f"endpoints not preserved at {c.names[m]}")
    for x, i in enumerate(c.identities):
        if f.mor_map[i] != d.identities[f.obj_map[x]]:
            return Check(False, f"identity of {c.objects[x]} not preserved")
    for g, h in c.composable():
        if f.mor_map[c.comp[g, h]] != d.comp[f.mor_map[g], f.mor_map[h]]:
            return Check(False, f"composition not preserved at ({c.names[g]}, {c.names[h]})")
    return Check(True)


def identity_functor(c: FinCategory) -> FunctorTable:
    return FunctorTable(c, c, tuple(range(c.n_objects)), tuple(range(c.n_morphisms)))


def constant_functor(c: FinCategory, d: FinCategory, x: int) -> FunctorTable:
    return FunctorTable(c, d, (x,) * c.n_objects, (d.identities[x],) * c.n_morphisms)


def compose_functors(g: FunctorTable, f: FunctorTable) -> FunctorTable:
    """``g . f``."""
    if f.target is not g.source:
        raise FincatError("functors are not composable")
    return FunctorTable(f.source, g.target, tuple(g.obj_map[x] for x in f.obj_map),
                        tuple(g.mor_map[m] for m in f.mor_map))


# -- algebras -------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraOn:
    """A structure map ``T A -> A`` (or ``A -> T A`` when ``co`` is set)."""

    functor: FunctorTable
    carrier: int
    structure: int
    co: bool = False


def _require_endo(t: FunctorTable) -> FinCategory:
    if not t.is_endo:
        raise FincatError("expected an endofunctor")
    return t.source


def enumerate_algebras(t: FunctorTable) -> list:
    c = _require_endo(t)
    return [AlgebraOn(t, a, m) for a in range(c.n_objects) for m in c.hom(t.obj_map[a], a)]


def enumerate_coalgebras(t: FunctorTable) -> list:
    c = _require_endo(t)
    return [AlgebraOn(t, a, m, co=True) for a in range(c.n_objects)
            for m in c.hom(a, t.obj_map[a])]


def _same_functor(x: AlgebraOn, y: AlgebraOn) -> FinCategory:
    if x.functor is not y.functor or x.co != y.co:
        raise FincatError("algebras over different functors")
    return x.functor.source


def enumerate_algebra_morphisms(x: AlgebraOn, y: AlgebraOn) -> list:
    """Every ``f`` with ``f . a = b . T f``."""
    c = _same_functor(x, y)
    t = x.functor.mor_map
    return [f for f in c.hom(x.carrier, y.carrier)
            if c.comp[f, x.structure] == c.comp[y.structure, t[f]]]


def enumerate_coalgebra_morphisms(x: AlgebraOn, y: AlgebraOn) -> list:
    """Every ``f`` with ``b . f = T f . a``."""
    c = _same_functor(x, y)
    t = x.functor.mor_map
    return [f for f in c.hom(x.carrier, y.carrier)
            if c.comp[y.structure, f] == c.comp[t[f], x.structure]]


def is_initial_algebra(x: AlgebraOn, algebras: Optional[list] = None) -> bool:
    algebras = enumerate_algebras(x.functor) if algebras is None else algebras
    return all(len(enumerate_algebra_morphisms(x, y)) == 1 for y in algebras)


def is_final_coalgebra(x: AlgebraOn, coalgebras: Optional[list] = None) -> bool:
    coalgebras = enumerate_coalgebras(x.functor) if coalgebras is None else coalgebras
    return all(len(enumerate_coalgebra_morphisms(y, x)) == 1 for y in coalgebras)


def find_initial_algebra(t: FunctorTable) -> Optional[AlgebraOn]:
    """First algebra in canonical order with exactly one morphism to every algebra."""
    algs = enumerate_algebras(t)
    return next((x for x in algs if is_initial_algebra(x, algs)), None)


def find_final_coalgebra(t: FunctorTable) -> Optional[AlgebraOn]:
    coalgs = enumerate_coalgebras(t)
    return next((x for x in coalgs if is_final_coalgebra(x, coalgs)), None)


def _check_composite_algebra(f: FunctorTable, g: FunctorTable, omega: AlgebraOn, co: bool):
    if f.target is not g.source or g.target is not f.source:
        raise FincatError("F and G must run C -> D -> C")
    c = f.source
    gf = compose_functors(g, f)
    want = (gf.obj_map[omega.carrier], omega.carrier)
    if co:
        want = want[::-1]
    if omega.co != co or (c.src[omega.structure], c.dst[omega.structure]) != want:
        kind = "coalgebra" if co else "algebra"
        raise FincatError(f"structure map is not a GF-{kind}")


def freyd_reflect_algebra(f: FunctorTable, g: FunctorTable, omega: AlgebraOn) -> AlgebraOn:
    """``(F Ω, F ω)`` as an FG-algebra."""
    _check_composite_algebra(f, g, omega, co=False)
    fg = compose_functors(f, g)
    return AlgebraOn(fg, f.obj_map[omega.carrier], f.mor_map[omega.structure])


def freyd_reflect_coalgebra(f: FunctorTable, g: FunctorTable, omega: AlgebraOn) -> AlgebraOn:
    _check_composite_algebra(f, g, omega, co=True)
    fg = compose_functors(f, g)
    return AlgebraOn(fg, f.obj_map[omega.carrier], f.mor_map[omega.structure], co=True)


@dataclass(frozen=True)
class CompactnessStatus:
    complete: bool
    cocomplete: bool
    compact: bool


def compactness_status(t: FunctorTable) -> CompactnessStatus:
    c = t.source
    algs = enumerate_algebras(t)
    coalgs = enumerate_coalgebras(t)
    initial = next((x for x in algs if is_initial_algebra(x, algs)), None)
    final = next((x for x in coalgs if is_final_coalgebra(x, coalgs)), None)
    compact = False
    if initial is not None and c.is_iso(initial.structure):
        inv = next(m for m in c.hom(initial.carrier, t.obj_map[initial.carrier])
                   if c.comp[m, initial.structure] == c.identities[t.obj_map[initial.carrier]]
                   and c.comp[initial.structure, m] == c.identities[initial.carrier])
        compact = is_final_coalgebra(AlgebraOn(t, initial.carrier, inv, co=True), coalgs)
    return CompactnessStatus(initial is not None, final is not None, compact)


@dataclass(frozen=True)
class ReflectionReport:
    gf: CompactnessStatus
    fg: CompactnessStatus

    @property
    def consistent(self) -> bool:
        return self.gf == self.fg


def reflect_compactness_check(f: FunctorTable, g: FunctorTable) -> ReflectionReport:
    return ReflectionReport(compactness_status(compose_functors(g, f)),
                            compactness_status(compose_functors(f, g)))


# -- random instances -----------------------------------------------------

def random_poset_category(rng: random.Random) -> FinCategory:
    n = rng.randint(2, MAX_OBJECTS)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.4]
    return poset_category(fp.from_relation(n, pairs))


def random_concrete_category(rng: random.Random, one_object: bool = False) -> FinCategory:
    """Closure of a few random functions between small sets; retries until small enough."""
    while True:
        n_obj = 1 if one_object else rng.randint(2, MAX_OBJECTS)
        sizes = [rng.randint(1, 3) for _ in range(n_obj)]
        if one_object:
            sizes[0] = max(2, sizes[0])
        gens = []
        for _ in range(rng.randint(1, 4)):
            s, d = rng.randrange(n_obj), rng.randrange(n_obj)
            gens.append((s, d, [rng.randrange(sizes[d]) for _ in range(sizes[s])]))
        c = concrete_category(sizes, gens)
        if c is not None:
            return c


def random_category(rng: random.Random) -> FinCategory:
    kind = rng.choice(("poset", "monoid", "concrete"))
    if kind == "poset":
        return random_poset_category(rng)
    return random_concrete_category(rng, one_object=kind == "monoid")


def random_functor(rng: random.Random, c: FinCategory, d: FinCategory,
                   attempts: int = 20, budget: int = 2000) -> FunctorTable:
    """A random functor by backtracking; falls back to a constant functor."""
    ids = set(c.identities)
    order = [m for m in range(c.n_morphisms) if m not in ids]
    triples = [(g, f, c.comp[g, f]) for g, f in c.composable()]
    for _ in range(attempts):
        obj_map = tuple(rng.randrange(d.n_objects) for _ in range(c.n_objects))
        mor = [None] * c.n_morphisms
        for x, i in enumerate(c.identities):
            mor[i] = d.identities[obj_map[x]]
        steps = [0]

        def consistent() -> bool:
            for g, f, h in triples:
                if mor[g] is not None and mor[f] is not None and mor[h] is not None:
                    if d.comp[mor[g], mor[f]] != mor[h]:
                        return False
            return True

        def go(k: int) -> bool:
            if k == len(order):
                return True
            steps[0] += 1
            if steps[0] > budget:
                return False
            m = order[k]
            options = list(d.hom(obj_map[c.src[m]], obj_map[c.dst[m]]))
            rng.shuffle(options)
            for v in options:
                mor[m] = v
                if consistent() and go(k + 1):
                    return True
            mor[m] = None
            return False

        if go(0):
            return FunctorTable(c, d, obj_map, tuple(mor))
    return constant_functor(c, d, rng.randrange(d.n_objects))


# -- the reflection battery -----------------------------------------------

Reflector = Callable[[FunctorTable, FunctorTable, AlgebraOn], AlgebraOn]


@dataclass
class CaseResult:
    seed: int
    c: FinCategory
    d: FinCategory
    f: FunctorTable
    g: FunctorTable
    initial_found: bool
    final_found: bool
    failures: list


@dataclass
class SuiteResult:
    seed: int
    cases: list

    @property
    def failures(self) -> list:
        return [c for c in self.cases if c.failures]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {
            "seed": self.seed,
            "cases": len(self.cases),
            "with_initial_algebra": sum(c.initial_found for c in self.cases),
            "with_final_coalgebra": sum(c.final_found for c in self.cases),
            "failures": len(self.failures),
        }


def _reflection_failures(f: FunctorTable, g: FunctorTable, reflect: Reflector,
                         reflect_co: Reflector) -> tuple:
    failures = []
    gf = compose_functors(g, f)
    initial = find_initial_algebra(gf)
    if initial is not None and not is_initial_algebra(reflect(f, g, initial)):
        failures.append("reflected algebra is not initial for FG")
    final = find_final_coalgebra(gf)
    if final is not None and not is_final_coalgebra(reflect_co(f, g, final)):
        failures.append("reflected coalgebra is not final for FG")
    report = reflect_compactness_check(f, g)
    if not report.consistent:
        failures.append(f"GF is {report.gf} but FG is {report.fg}")
    return failures, initial is not None, final is not None


def run_case(seed: int, reflect: Reflector = freyd_reflect_algebra,
             reflect_co: Reflector = freyd_reflect_coalgebra) -> CaseResult:
    rng = random.Random(seed)
    c, d = random_category(rng), random_category(rng)
    f, g = random_functor(rng, c, d), random_functor(rng, d, c)
    failures = [f"generated {name} is not a functor: {ok.reason}"
                for name, ok in (("F", check_functor(f)), ("G", check_functor(g))) if not ok]
    more, has_initial, has_final = _reflection_failures(f, g, reflect, reflect_co)
    return CaseResult(seed, c, d, f, g, has_initial, has_final, failures + more)


def run_reflection_suite(seed: int = 1, count: int = 100, reflect: Reflector = freyd_reflect_algebra,
                         reflect_co: Reflector = freyd_reflect_coalgebra) -> SuiteResult:
    """``count`` random instances; case ``k`` is generated from ``seed * 1_000_003 + k``."""
    cases = [run_case(seed * 1_000_003 + k, reflect, reflect_co) for k in range(count)]
    return SuiteResult(seed, cases)


def mutant_reflect(f: FunctorTable, g: FunctorTable, omega: AlgebraOn) -> AlgebraOn:
    """Deliberately wrong: the last FG-algebra in canonical order."""
    return enumerate_algebras(compose_functors(f, g))[-1]


# -- JSON -----------------------------------------------------------------

def category_to_json(c: FinCategory) -> dict:
    n = c.names
    return {
        "objects": list(c.objects),
        "morphisms": [[n[m], c.objects[c.src[m]], c.objects[c.dst[m]]] for m in range(c.n_morphisms)],
        "identities": {c.objects[x]: n[i] for x, i in enumerate(c.identities)},
        "composition": [[n[g], n[f], n[h]] for (g, f), h in sorted(c.comp.items())],
    }


def functor_to_json(f: FunctorTable) -> dict:
    c, d = f.source, f.target
    return {
        "objects": {c.objects[x]: d.objects[y] for x, y in enumerate(f.obj_map)},
        "morphisms": {c.names[m]: d.names[v] for m, v in enumerate(f.mor_map)},
    }


def category_from_json(data: dict) -> FinCategory:
    objects = list(data["objects"])
    if len(set(objects)) != len(objects):
        raise FincatError("duplicate object names")
    oi = {o: k for k, o in enumerate(objects)}
    mors = data["morphisms"]
    names = [m[0] for m in mors]
    if len(set(names)) != len(names):
        raise FincatError("duplicate morphism names")
    mi = {m: k for k, m in enumerate(names)}
    try:
        src = tuple(oi[m[1]] for m in mors)
        dst = tuple(oi[m[2]] for m in mors)
        ids = tuple(mi[data["identities"][o]] for o in objects)
        comp = {(mi[g], mi[f]): mi[h] for g, f, h in data["composition"]}
    except KeyError as exc:
        raise FincatError(f"unknown name {exc.args[0]!r}") from None
    return FinCategory(tuple(objects), src, dst, ids, comp, tuple(names))


def functor_from_json(data: dict, c: FinCategory, d: FinCategory) -> FunctorTable:
    co = {o: k for k, o in enumerate(c.objects)}
    do = {o: k for k, o in enumerate(d.objects)}
    cm = {m: k for k, m in enumerate(c.names)}
    dm = {m: k for k, m in enumerate(d.names)}
    try:
        obj = [None] * c.n_objects
        for x, y in data["objects"].items():
            obj[co[x]] = do[y]
        mor = [None] * c.n_morphisms
        for x, y in data["morphisms"].items():
            mor[cm[x]] = dm[y]
    except KeyError as exc:
        raise FincatError(f"unknown name {exc.args[0]!r}") from None
    if None in obj or None in mor:
        raise FincatError("functor table is not total")
    return FunctorTable(c, d, tuple(obj), tuple(mor))


def case_to_json(case: CaseResult) -> dict:
    return {
        "seed": case.seed,
        "C": category_to_json(case.c),
        "D": category_to_json(case.d),
        "F": functor_to_json(case.f),
        "G": functor_to_json(case.g),
        "failures": case.failures,
    }


def load_instance(source: Union[str, Path, dict]) -> tuple:
    """Read ``{"C", "D", "F", "G"}``; ``D``/``G`` default to ``C`` and the identity."""
    data = source if isinstance(source, dict) else json.loads(Path(source).read_text())
    c = category_from_json(data["C"])
    d = category_from_json(data["D"]) if "D" in data else c
    f = functor_from_json(data["F"], c, d) if "F" in data else identity_functor(c)
    g = functor_from_json(data["G"], d, c) if "G" in data else identity_functor(c)
    return c, d, f, g


def verify_instance(c: FinCategory, d: FinCategory, f: FunctorTable, g: FunctorTable,
                    reflect: Reflector = freyd_reflect_algebra,
                    reflect_co: Reflector = freyd_reflect_coalgebra) -> list:
    """Failures (as strings) of the reflection checks on one given instance."""
    for name, cat in (("C", c), ("D", d)):
        ok = check_category(cat)
        if not ok:
            return [f"{name} is not a category: {ok.reason}"]
    for name, fun in (("F", f), ("G", g)):
        ok = check_functor(fun)
        if not ok:
            return [f"{name} is not a functor: {ok.reason}"]
    return _reflection_failures(f, g, reflect, reflect_co)[0]
