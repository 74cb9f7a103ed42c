"""The four ambient categories the engine computes in.

``PLAIN`` is finite posets with monotone maps, ``POINTED`` is pointed finite
posets with strict maps.  ``OP_PLAIN`` / ``OP_POINTED`` are ``C^op x C`` for
either: objects are :class:`Pair` s of posets, and a morphism
``(A-, A+) -> (B-, B+)`` is a :class:`Pair` ``(neg, pos)`` with
``neg : B- -> A-`` (reversed) and ``pos : A+ -> B+``.
"""

from __future__ import annotations

from enum import Enum
from itertools import product as cartesian
from typing import NamedTuple, Optional, Union

from . import finpos as fp
from .finpos import FinPoset, MonotoneMap


class WorldError(TypeError):
    pass


class World(Enum):
    PLAIN = "plain"
    POINTED = "pointed"
    OP_PLAIN = "op_plain"
    OP_POINTED = "op_pointed"

    @property
    def is_pair(self) -> bool:
        return self in (World.OP_PLAIN, World.OP_POINTED)

    @property
    def base(self) -> "World":
        return {World.OP_PLAIN: World.PLAIN, World.OP_POINTED: World.POINTED}.get(self, self)

    @property
    def is_pointed(self) -> bool:
        return self.base is World.POINTED

    def squared(self) -> "World":
        if self.is_pair:
            raise WorldError(f"{self.value} is already a pair world")
        return World.OP_PLAIN if self is World.PLAIN else World.OP_POINTED


class Pair(NamedTuple):
    neg: object
    pos: object


Obj = Union[FinPoset, Pair]
Mor = Union[MonotoneMap, Pair]


def check_object(world: World, x) -> None:
    if world.is_pair:
        if not (isinstance(x, Pair) and isinstance(x.neg, FinPoset) and isinstance(x.pos, FinPoset)):
            raise WorldError(f"expected a pair of posets for world {world.value}")
        parts = (x.neg, x.pos)
    else:
        if not isinstance(x, FinPoset):
            raise WorldError(f"expected a poset for world {world.value}")
        parts = (x,)
    if world.is_pointed and any(p.bottom is None for p in parts):
        raise WorldError(f"world {world.value} needs pointed posets")


def check_morphism(world: World, m) -> None:
    if world.is_pair:
        if not (isinstance(m, Pair) and isinstance(m.neg, MonotoneMap)
                and isinstance(m.pos, MonotoneMap)):
            raise WorldError(f"expected a pair of maps for world {world.value}")
        parts = (m.neg, m.pos)
    else:
        if not isinstance(m, MonotoneMap):
            raise WorldError(f"expected a monotone map for world {world.value}")
        parts = (m,)
    if world.is_pointed and not all(p.is_strict for p in parts):
        raise WorldError(f"world {world.value} needs strict maps")


def src(world: World, m: Mor) -> Obj:
    if world.is_pair:
        return Pair(m.neg.dst, m.pos.src)
    return m.src


def dst(world: World, m: Mor) -> Obj:
    if world.is_pair:
        return Pair(m.neg.src, m.pos.dst)
    return m.dst


def size(world: World, x: Obj):
    if world.is_pair:
        return [x.neg.size, x.pos.size]
    return x.size


def identity(world: World, x: Obj) -> Mor:
    if world.is_pair:
        return Pair(fp.identity(x.neg), fp.identity(x.pos))
    return fp.identity(x)


def compose(world: World, g: Mor, f: Mor) -> Mor:
    """``g . f`` in ``world``."""
    if world.is_pair:
        return Pair(fp.compose(f.neg, g.neg), fp.compose(g.pos, f.pos))
    return fp.compose(g, f)


def leq(world: World, f: Mor, g: Mor) -> bool:
    if world.is_pair:
        return fp.pointwise_leq(f.neg, g.neg) and fp.pointwise_leq(f.pos, g.pos)
    return fp.pointwise_leq(f, g)


def is_iso(world: World, f: Mor) -> bool:
    if world.is_pair:
        return fp.is_iso(f.neg) and fp.is_iso(f.pos)
    return fp.is_iso(f)


def inverse(world: World, f: Mor) -> Mor:
    if world.is_pair:
        return Pair(fp.inverse(f.neg), fp.inverse(f.pos))
    return fp.inverse(f)


def find_iso(world: World, a: Obj, b: Obj) -> Optional[Mor]:
    """Some isomorphism ``a -> b`` in ``world``."""
    if world.is_pair:
        neg = fp.poset_iso(b.neg, a.neg)
        pos = fp.poset_iso(a.pos, b.pos)
        return None if neg is None or pos is None else Pair(neg, pos)
    return fp.poset_iso(a, b)


def hom(world: World, a: Obj, b: Obj) -> list:
    """All morphisms ``a -> b``: monotone, strict in pointed worlds."""
    strict = world.is_pointed
    if world.is_pair:
        negs = fp.enumerate_monotone_maps(b.neg, a.neg, strict)
        poss = fp.enumerate_monotone_maps(a.pos, b.pos, strict)
        return [Pair(n, p) for n, p in cartesian(negs, poss)]
    return fp.enumerate_monotone_maps(a, b, strict)


def iter_hom(world: World, a: Obj, b: Obj):
    """Stream the morphisms ``a -> b`` in the same order as :func:`hom`, uncached."""
    strict = world.is_pointed
    if world.is_pair:
        poss = None
        for n in fp.iter_monotone_maps(b.neg, a.neg, strict):
            if poss is None:
                poss = fp.enumerate_monotone_maps(a.pos, b.pos, strict)
            for p in poss:
                yield Pair(n, p)
        return
    yield from fp.iter_monotone_maps(a, b, strict)


def hom_at_most_one(world: World, a: Obj, b: Obj) -> bool:
    it = iter_hom(world, a, b)
    next(it, None)
    return next(it, None) is None


def bottom_morphism(world: World, a: Obj, b: Obj) -> Mor:
    """Least element of the hom-poset ``a -> b`` in a pointed world."""
    if not world.is_pointed:
        raise WorldError("bottom morphisms exist only in pointed worlds")
    if world.is_pair:
        return Pair(fp.bottom_map(b.neg, a.neg), fp.bottom_map(a.pos, b.pos))
    return fp.bottom_map(a, b)


def initial_object(world: World) -> Obj:
    return {
        World.PLAIN: fp.empty(),
        World.POINTED: fp.point(),
        World.OP_PLAIN: Pair(fp.point(), fp.empty()),
        World.OP_POINTED: Pair(fp.point(), fp.point()),
    }[world]


def terminal_object(world: World) -> Obj:
    return {
        World.PLAIN: fp.point(),
        World.POINTED: fp.point(),
        World.OP_PLAIN: Pair(fp.empty(), fp.point()),
        World.OP_POINTED: Pair(fp.point(), fp.point()),
    }[world]


def _from_initial(base: World, x: FinPoset) -> MonotoneMap:
    return fp.empty_map(x) if base is World.PLAIN else fp.bottom_map(fp.point(), x)


def _to_terminal(x: FinPoset) -> MonotoneMap:
    return fp.constant(x, fp.point(), 0)


def from_initial(world: World, x: Obj) -> Mor:
    """The unique morphism out of :func:`initial_object`."""
    if world.is_pair:
        return Pair(_to_terminal(x.neg), _from_initial(world.base, x.pos))
    return _from_initial(world, x)


def to_terminal(world: World, x: Obj) -> Mor:
    """The unique morphism into :func:`terminal_object`."""
    if world.is_pair:
        return Pair(_from_initial(world.base, x.neg), _to_terminal(x.pos))
    return _to_terminal(x)


def objects_up_to(world: World, bound: int) -> list:
    """Iso-class representatives of the objects with components of size <= ``bound``."""
    base = fp.posets_up_to(bound, pointed_only=world.is_pointed)
    if world.is_pair:
        return [Pair(a, b) for a in base for b in base]
    return base


def morphisms_between(world: World, objects: list) -> list:
    """Every morphism between any two of ``objects``."""
    return [m for a in objects for b in objects for m in hom(world, a, b)]


def to_json(world: World, x: Obj) -> dict:
    if world.is_pair:
        return {"neg": fp.to_literal(x.neg), "pos": fp.to_literal(x.pos)}
    return fp.to_literal(x)


def map_to_json(world: World, m: Mor):
    if world.is_pair:
        return {"neg": list(m.neg.table), "pos": list(m.pos.table)}
    return list(m.table)
