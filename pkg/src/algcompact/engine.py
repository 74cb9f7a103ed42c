"""Chains, compactness verdicts and their brute-force certificates.

The solver runs the initial and terminal ω-chains of an endofunctor, takes a
stabilized stage as a candidate solution and then checks initiality and
finality by enumerating every (co)algebra on small carriers.  Guarded
expressions are solved on the pointed side of their factorization and the
result is transported back.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Union

from . import dsl
from . import finpos as fp
from . import functors as fn
from . import worlds as w
from .finpos import EpPair, FinPoset, MonotoneMap, SizeLimitExceeded
from .functors import ComputedFunctor
from .worlds import Pair, World

DEFAULT_DEPTH = 6
DEFAULT_SIZE_BOUND = 4
# Pair worlds square the number of targets and their homs grow fast.
PAIR_SIZE_BOUND = 2
MAX_FOLD_STEPS = 100_000


class EngineError(ValueError):
    pass


# -- chains ---------------------------------------------------------------

@dataclass(frozen=True)
class OmegaChain:
    direction: str
    world: World
    objects: tuple
    links: tuple
    ep_certificates: Optional[tuple] = None
    truncated: bool = False

    @property
    def depth(self) -> int:
        return len(self.objects)

    def sizes(self) -> list:
        return [w.size(self.world, x) for x in self.objects]

    def ep_certified(self) -> bool:
        """Every link carries a certificate and every certificate checks out."""
        if self.ep_certificates is None or len(self.ep_certificates) != len(self.links):
            return False
        return all(ep_valid(self.world, c) for c in self.ep_certificates)


def _ep(world: World, e, p):
    if world.is_pair:
        # The negative component lives in C^op, where the roles swap.
        return Pair(EpPair(p.neg, e.neg), EpPair(e.pos, p.pos))
    return EpPair(e, p)


def ep_valid(world: World, cert) -> bool:
    if world.is_pair:
        return bool(fp.is_ep_pair(cert.neg.e, cert.neg.p)) and bool(fp.is_ep_pair(cert.pos.e, cert.pos.p))
    return bool(fp.is_ep_pair(cert.e, cert.p))


def _require_endo(f: ComputedFunctor) -> World:
    if not f.is_endo:
        raise EngineError(f"{f.describe()} is not an endofunctor")
    return f.src


def _chain(f: ComputedFunctor, depth: int, direction: str) -> OmegaChain:
    world = _require_endo(f)
    if depth < 1:
        raise EngineError("depth must be at least 1")
    initial = direction == "initial"
    start = w.initial_object(world) if initial else w.terminal_object(world)
    objs, links, partners = [start], [], []
    truncated = False
    try:
        while len(objs) < depth:
            nxt = f.obj(objs[-1])
            if links:
                link, partner = f.mor(links[-1]), None
                if world.is_pointed:
                    partner = f.mor(partners[-1])
            else:
                link = w.from_initial(world, nxt) if initial else w.to_terminal(world, nxt)
                partner = None
                if world.is_pointed:
                    partner = w.to_terminal(world, nxt) if initial else w.from_initial(world, nxt)
            objs.append(nxt)
            links.append(link)
            partners.append(partner)
    except SizeLimitExceeded:
        truncated = True
    certs = None
    if world.is_pointed:
        if initial:
            certs = tuple(_ep(world, e, p) for e, p in zip(links, partners))
        else:
            certs = tuple(_ep(world, e, p) for e, p in zip(partners, links))
    return OmegaChain(direction, world, tuple(objs), tuple(links), certs, truncated)


def initial_chain(f: ComputedFunctor, depth: int = DEFAULT_DEPTH) -> OmegaChain:
    """``start, F start, F² start, ...`` with links ``A_n -> A_{n+1}``."""
    return _chain(f, depth, "initial")


def terminal_chain(f: ComputedFunctor, depth: int = DEFAULT_DEPTH) -> OmegaChain:
    """Dual of :func:`initial_chain`; links point down, ``A_{n+1} -> A_n``."""
    return _chain(f, depth, "terminal")


@dataclass(frozen=True)
class Stabilization:
    stage: int
    link: object


def detect_stabilization(c: OmegaChain) -> Optional[Stabilization]:
    for n, link in enumerate(c.links):
        if w.is_iso(c.world, link):
            return Stabilization(n, link)
    return None


def map_chain(c: OmegaChain, g: ComputedFunctor) -> OmegaChain:
    """Object- and link-wise image of a chain under ``g``, cut short if it grows too big."""
    world = g.dst
    objs, links, certs = [], [], []
    truncated = c.truncated
    try:
        for x in c.objects:
            objs.append(g.obj(x))
        for k, m in enumerate(c.links):
            link = g.mor(m)
            if c.ep_certificates is not None:
                cert = c.ep_certificates[k]
                if c.world.is_pair:
                    e, p = Pair(cert.neg.p, cert.pos.e), Pair(cert.neg.e, cert.pos.p)
                else:
                    e, p = cert.e, cert.p
                certs.append(_ep(world, g.mor(e), g.mor(p)))
            links.append(link)
    except SizeLimitExceeded:
        truncated = True
        objs = objs[:len(links) + 1]
        certs = certs[:len(links)]
    return OmegaChain(c.direction, world, tuple(objs), tuple(links),
                      tuple(certs) if c.ep_certificates is not None else None, truncated)


# -- candidates and their verification ------------------------------------

@dataclass
class VerificationReport:
    kind: str
    passed: bool
    size_bound: int
    targets: int = 0
    structures: int = 0
    shortcut_targets: int = 0
    counts: Counter = field(default_factory=Counter)
    failure: Optional["Witness"] = None
    fold_checked: int = 0
    fold_discrepancies: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "passed": self.passed,
            "size_bound": self.size_bound,
            "targets": self.targets,
            "structures": self.structures,
            "shortcut_targets": self.shortcut_targets,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
        }
        if self.failure is not None:
            out["failure"] = self.failure.to_json()
        if self.fold_checked:
            out["fold_checked"] = self.fold_checked
            out["fold_discrepancies"] = len(self.fold_discrepancies)
        return out


@dataclass
class CompactAlgebra:
    world: World
    carrier: object
    structure: object
    inverse: object
    stage: int
    source: str
    initiality: Optional[VerificationReport] = None
    finality: Optional[VerificationReport] = None


@dataclass(frozen=True)
class Witness:
    """A (co)algebra whose number of mediating morphisms is not exactly one."""

    kind: str
    world: World
    carrier: object
    structure: object
    count: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "carrier": w.to_json(self.world, self.carrier),
            "carrier_size": w.size(self.world, self.carrier),
            "structure": w.map_to_json(self.world, self.structure),
            "count": self.count,
        }


def extract_compact_candidate(f: ComputedFunctor, c: OmegaChain, stage: int) -> CompactAlgebra:
    if stage >= len(c.links):
        raise EngineError(f"chain has no link at stage {stage}")
    link = c.links[stage]
    if not w.is_iso(c.world, link):
        raise EngineError(f"link at stage {stage} is not an isomorphism")
    if c.direction == "initial":
        omega = w.inverse(c.world, link)
    else:
        omega = link
    return CompactAlgebra(c.world, c.objects[stage], omega, w.inverse(c.world, omega),
                          stage, c.direction)


def _bound_for(world: World, size_bound: int, clamp: bool = True) -> int:
    if size_bound < 1:
        raise EngineError("size bound must be at least 1")
    return min(size_bound, PAIR_SIZE_BOUND) if clamp and world.is_pair else size_bound


def count_algebra_morphisms(f: ComputedFunctor, cand: CompactAlgebra, b_obj, b) -> int:
    """Morphisms ``h : Ω -> B`` with ``h . ω = b . F h``, by enumeration."""
    world = cand.world
    return sum(1 for h in w.hom(world, cand.carrier, b_obj)
               if w.compose(world, h, cand.structure) == w.compose(world, b, f.mor(h)))


def count_coalgebra_morphisms(f: ComputedFunctor, cand: CompactAlgebra, b_obj, c) -> int:
    """Morphisms ``h : B -> Ω`` with ``ω⁻¹ . h = F h . c``, by enumeration."""
    world = cand.world
    return sum(1 for h in w.hom(world, b_obj, cand.carrier)
               if w.compose(world, cand.inverse, h) == w.compose(world, f.mor(h), c))


def verify_initiality(f: ComputedFunctor, cand: CompactAlgebra,
                      size_bound: int = DEFAULT_SIZE_BOUND, *, fold: bool = False,
                      stop_on_failure: bool = True, clamp: bool = True) -> VerificationReport:
    """Count algebra morphisms from ``cand`` into every algebra on small carriers.

    When there is at most one map ``F Ω -> B`` the square commutes for every
    ``h``, so each algebra on ``B`` receives exactly ``|hom(Ω, B)|`` morphisms
    and only the existence of one algebra needs checking.  ``fold`` disables
    that shortcut and compares :func:`compute_fold_kleene` with the
    enumerated morphism on every algebra.  Pair worlds cap ``size_bound``
    at ``PAIR_SIZE_BOUND`` unless ``clamp`` is false.
    """
    world = cand.world
    bound = _bound_for(world, size_bound, clamp)
    if fold and not world.is_pointed:
        raise EngineError("the Kleene fold needs a pointed world")
    report = VerificationReport("initiality", True, bound)
    f_omega = f.obj(cand.carrier)
    for b_obj in w.objects_up_to(world, bound):
        report.targets += 1
        homs = w.hom(world, cand.carrier, b_obj)
        fb = f.obj(b_obj)
        if not fold and w.hom_at_most_one(world, f_omega, b_obj):
            first = next(w.iter_hom(world, fb, b_obj), None)
            if first is None:
                continue
            report.shortcut_targets += 1
            report.counts[len(homs)] += 1
            if len(homs) != 1:
                report.passed = False
                report.failure = report.failure or Witness("algebra", world, b_obj, first, len(homs))
                if stop_on_failure:
                    return report
            continue
        squares = [(h, w.compose(world, h, cand.structure), f.mor(h)) for h in homs]
        for b in w.iter_hom(world, fb, b_obj):
            report.structures += 1
            found = [h for h, lhs, fh in squares if lhs == w.compose(world, b, fh)]
            report.counts[len(found)] += 1
            if fold:
                report.fold_checked += 1
                k = compute_fold_kleene(f, cand, b_obj, b)
                if len(found) != 1 or found[0] != k:
                    report.fold_discrepancies.append((b_obj, b, k))
            if len(found) != 1:
                report.passed = False
                report.failure = report.failure or Witness("algebra", world, b_obj, b, len(found))
                if stop_on_failure:
                    return report
    return report


def verify_finality(f: ComputedFunctor, cand: CompactAlgebra,
                    size_bound: int = DEFAULT_SIZE_BOUND, *,
                    stop_on_failure: bool = True, clamp: bool = True) -> VerificationReport:
    """Dual of :func:`verify_initiality` for ``(Ω, ω⁻¹)`` and coalgebras ``B -> F B``."""
    world = cand.world
    bound = _bound_for(world, size_bound, clamp)
    report = VerificationReport("finality", True, bound)
    f_omega = f.obj(cand.carrier)
    for b_obj in w.objects_up_to(world, bound):
        report.targets += 1
        homs = w.hom(world, b_obj, cand.carrier)
        fb = f.obj(b_obj)
        if w.hom_at_most_one(world, b_obj, f_omega):
            first = next(w.iter_hom(world, b_obj, fb), None)
            if first is None:
                continue
            report.shortcut_targets += 1
            report.counts[len(homs)] += 1
            if len(homs) != 1:
                report.passed = False
                report.failure = report.failure or Witness("coalgebra", world, b_obj, first, len(homs))
                if stop_on_failure:
                    return report
            continue
        squares = [(h, w.compose(world, cand.inverse, h), f.mor(h)) for h in homs]
        for c in w.iter_hom(world, b_obj, fb):
            report.structures += 1
            n = sum(1 for h, lhs, fh in squares if lhs == w.compose(world, fh, c))
            report.counts[n] += 1
            if n != 1:
                report.passed = False
                report.failure = report.failure or Witness("coalgebra", world, b_obj, c, n)
                if stop_on_failure:
                    return report
    return report


def compute_fold_kleene(f: ComputedFunctor, cand: CompactAlgebra, b_obj, b):
    """Least fixed point of ``h |-> b . F h . ω⁻¹`` from the bottom map."""
    world = cand.world
    if not world.is_pointed:
        raise EngineError("the Kleene fold needs a pointed world")
    h = w.bottom_morphism(world, cand.carrier, b_obj)
    for _ in range(MAX_FOLD_STEPS):
        nxt = w.compose(world, b, w.compose(world, f.mor(h), cand.inverse))
        if nxt == h:
            return h
        h = nxt
    raise EngineError("Kleene iteration did not settle")


def refute_compactness(f: ComputedFunctor, cand: CompactAlgebra,
                       size_bound: int = DEFAULT_SIZE_BOUND) -> Optional[Witness]:
    """A coalgebra with other than one morphism into ``(Ω, ω⁻¹)``, if any is small."""
    return verify_finality(f, cand, size_bound).failure


def refute_from_final(f: ComputedFunctor, cand: CompactAlgebra,
                      size_bound: int = DEFAULT_SIZE_BOUND) -> Optional[Witness]:
    """An algebra with other than one morphism out of ``(Ω, ω)``, if any is small."""
    return verify_initiality(f, cand, size_bound).failure


def recheck_witness(f: ComputedFunctor, cand: CompactAlgebra, witness: Witness) -> bool:
    """Recount the witness's morphisms by plain enumeration."""
    if witness.kind == "coalgebra":
        n = count_coalgebra_morphisms(f, cand, witness.carrier, witness.structure)
    elif witness.kind == "algebra":
        n = count_algebra_morphisms(f, cand, witness.carrier, witness.structure)
    else:
        return False
    return n == witness.count and n != 1


# -- verdicts -------------------------------------------------------------

@dataclass
class CoherenceReport:
    """Plain stage ``n+1`` against the image of pointed stage ``n``."""

    stages_checked: int
    mismatches: list

    @property
    def passed(self) -> bool:
        return not self.mismatches


@dataclass
class Verdict:
    world: World
    initial: OmegaChain
    terminal: OmegaChain
    expression: str = ""
    d_side: Optional["Verdict"] = None
    plain_initial: Optional[OmegaChain] = None
    cross_check: Optional[CoherenceReport] = None

    kind = "?"

    @property
    def ep_certified(self) -> bool:
        return self.initial.ep_certified() and self.terminal.ep_certified()

    def chain_sizes(self) -> list:
        source = self.d_side if self.d_side is not None else self
        return source.initial.sizes()


@dataclass
class Stabilized(Verdict):
    algebra: Optional[CompactAlgebra] = None
    kind = "stabilized"


@dataclass
class Approximated(Verdict):
    depth: int = 0
    kind = "approximated"


@dataclass
class Refuted(Verdict):
    initial_algebra: Optional[CompactAlgebra] = None
    final_coalgebra: Optional[CompactAlgebra] = None
    witness: Optional[Witness] = None
    witness_source: Optional[CompactAlgebra] = None
    kind = "refuted"


CompactnessVerdict = Union[Stabilized, Approximated, Refuted]


def solve_functor(f: ComputedFunctor, depth: int = DEFAULT_DEPTH,
                  size_bound: int = DEFAULT_SIZE_BOUND, *, fold: bool = True) -> Verdict:
    """Run both chains of ``f`` and classify the outcome."""
    world = _require_endo(f)
    ic, tc = initial_chain(f, depth), terminal_chain(f, depth)
    si, st = detect_stabilization(ic), detect_stabilization(tc)
    init = extract_compact_candidate(f, ic, si.stage) if si else None
    final = extract_compact_candidate(f, tc, st.stage) if st else None

    if init is not None and final is not None and w.find_iso(world, init.carrier, final.carrier):
        init.initiality = verify_initiality(f, init, size_bound, fold=fold and world.is_pointed)
        init.finality = verify_finality(f, init, size_bound)
        if init.initiality.passed and init.finality.passed:
            return Stabilized(world, ic, tc, algebra=init)
        witness = init.finality.failure or init.initiality.failure
        return Refuted(world, ic, tc, initial_algebra=init, final_coalgebra=final,
                       witness=witness, witness_source=init)

    witness = source = None
    if init is not None:
        init.finality = verify_finality(f, init, size_bound)
        witness, source = init.finality.failure, init
    if witness is None and final is not None:
        final.initiality = verify_initiality(f, final, size_bound)
        witness, source = final.initiality.failure, final
    if witness is not None or (init is not None and final is not None):
        # Non-isomorphic stabilized carriers refute even without a small witness.
        return Refuted(world, ic, tc, initial_algebra=init, final_coalgebra=final,
                       witness=witness, witness_source=source if witness else None)
    return Approximated(world, ic, tc, depth=depth)


def reflect_through(factored: dsl.FactoredFunctor, d_side: Verdict,
                    size_bound: int = DEFAULT_SIZE_BOUND) -> Verdict:
    """Transport a verdict for ``flipped = F . G`` to ``total ≅ G . F``."""
    g, total = factored.g_side, factored.total
    if d_side.world is not factored.flipped.src:
        raise EngineError("verdict does not belong to the flipped functor")
    world = total.src
    ic, tc = map_chain(d_side.initial, g), map_chain(d_side.terminal, g)
    if isinstance(d_side, Stabilized):
        d_alg = d_side.algebra
        carrier = g.obj(d_alg.carrier)
        phi = factored.iso_at(carrier)
        structure = w.compose(world, g.mor(d_alg.structure), phi)
        inverse = w.compose(world, w.inverse(world, phi), g.mor(d_alg.inverse))
        alg = CompactAlgebra(world, carrier, structure, inverse, d_alg.stage, d_alg.source)
        alg.initiality = verify_initiality(total, alg, size_bound)
        alg.finality = verify_finality(total, alg, size_bound)
        if alg.initiality.passed and alg.finality.passed:
            return Stabilized(world, ic, tc, d_side=d_side, algebra=alg)
        witness = alg.initiality.failure or alg.finality.failure
        return Refuted(world, ic, tc, d_side=d_side, initial_algebra=alg,
                       witness=witness, witness_source=alg)
    if isinstance(d_side, Approximated):
        return Approximated(world, ic, tc, d_side=d_side, depth=d_side.depth)
    redone = solve_functor(total, d_side.initial.depth, size_bound, fold=False)
    redone.d_side = d_side
    return redone


def _coherence(plain: OmegaChain, d_chain: OmegaChain, g: ComputedFunctor) -> CoherenceReport:
    mismatches = []
    n = min(len(plain.objects) - 1, len(d_chain.objects))
    for k in range(n):
        if w.find_iso(plain.world, plain.objects[k + 1], g.obj(d_chain.objects[k])) is None:
            mismatches.append(k + 1)
    return CoherenceReport(n, mismatches)


def _as_expr(e, parse, ws):
    return parse(e, ws) if isinstance(e, str) else e


def solve_covariant(e, ws: Optional[dsl.Workspace] = None, depth: int = DEFAULT_DEPTH,
                    size_bound: int = DEFAULT_SIZE_BOUND, diagnostic: bool = False) -> Verdict:
    """Solve a covariant expression through its factorization.

    With ``diagnostic`` the total functor is solved directly in the plain
    world, which is the only way to run unguarded expressions.
    """
    ws = ws or dsl.Workspace()
    e = _as_expr(e, dsl.parse_covariant, ws)
    text = dsl.to_text(e)
    if diagnostic:
        v = solve_functor(dsl.interpret_covariant(e, ws), depth, size_bound, fold=False)
        v.expression = text
        return v
    ff = dsl.elaborate_covariant(e, ws)
    d = solve_functor(ff.flipped, depth, size_bound)
    v = reflect_through(ff, d, size_bound)
    v.expression = d.expression = text
    v.plain_initial = initial_chain(ff.total, depth)
    v.cross_check = _coherence(v.plain_initial, d.initial, ff.g_side)
    return v


def solve_mixed(e, ws: Optional[dsl.Workspace] = None, depth: int = DEFAULT_DEPTH,
                size_bound: int = DEFAULT_SIZE_BOUND, diagnostic: bool = False) -> Verdict:
    """Mixed-variance counterpart of :func:`solve_covariant` on ``C^op x C``."""
    ws = ws or dsl.Workspace()
    e = _as_expr(e, dsl.parse_mixed, ws)
    text = dsl.to_text(e)
    if diagnostic:
        v = solve_functor(dsl.interpret_mixed(e, ws), depth, size_bound, fold=False)
        v.expression = text
        return v
    ff = dsl.elaborate_mixed(e, ws)
    d = solve_functor(ff.flipped, depth, size_bound)
    v = reflect_through(ff, d, size_bound)
    v.expression = d.expression = text
    v.plain_initial = initial_chain(ff.total, depth)
    return v


# -- the Barr comparison --------------------------------------------------

@dataclass
class BarrReport:
    h_empty: FinPoset
    h_one: FinPoset
    candidate_l_exists: bool
    condition_holds: bool
    hom_pointed: bool
    composite_map: Optional[MonotoneMap] = None
    l: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "h_empty": fp.to_literal(self.h_empty),
            "h_one": fp.to_literal(self.h_one),
            "candidate_l_exists": self.candidate_l_exists,
            "condition_holds": self.condition_holds,
            "hom_pointed": self.hom_pointed,
            "l": self.l,
            "composite_map": None if self.composite_map is None else list(self.composite_map.table),
        }


def hom_pointedness_check(a: FinPoset, b: FinPoset) -> bool:
    try:
        return fp.find_least(fp.hom_poset(a, b)) is not None
    except SizeLimitExceeded:
        # A least map must send everything to a least element of b.
        return a.size == 0 or b.bottom is not None


def barr_condition_check(e, ws: Optional[dsl.Workspace] = None) -> BarrReport:
    """Look for ``l : 1 -> H∅`` with ``Hh . l . ! <= id`` on ``H1``."""
    ws = ws or dsl.Workspace()
    e = _as_expr(e, dsl.parse_covariant, ws)
    h = dsl.interpret_covariant(e, ws)
    h_empty, h_one = h.obj(fp.empty()), h.obj(fp.point())
    hh = h.mor(fp.empty_map(fp.point()))
    ident = fp.identity(h_one)
    holds, chosen, composite = False, None, None
    for l in range(h_empty.size):
        comp = fp.constant(h_one, h_one, hh(l))
        if composite is None:
            composite, chosen = comp, l
        if fp.pointwise_leq(comp, ident):
            holds, chosen, composite = True, l, comp
            break
    return BarrReport(h_empty, h_one, h_empty.size > 0, holds,
                      hom_pointedness_check(h_one, h_one), composite, chosen)
