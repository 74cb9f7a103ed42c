"""Executable functors as combinator trees.

Every node knows its source and target :class:`~algcompact.worlds.World` and
acts on objects (:meth:`ComputedFunctor.obj`) and morphisms
(:meth:`ComputedFunctor.mor`).  A mixed-variance functor ``C^op x C -> C`` is
simply a node whose source is a pair world.
"""

from __future__ import annotations

from . import finpos as fp
from . import worlds as w
from .worlds import Pair, World, WorldError


class VarianceError(WorldError):
    pass


class ComputedFunctor:
    src: World
    dst: World

    def __init__(self):
        self._obj_cache: dict = {}
        self._mor_cache: dict = {}

    def obj(self, x):
        try:
            return self._obj_cache[x]
        except KeyError:
            y = self._obj_cache[x] = self._obj(x)
            return y

    def mor(self, m):
        try:
            return self._mor_cache[m]
        except KeyError:
            y = self._mor_cache[m] = self._mor(m)
            return y

    def _obj(self, x):
        raise NotImplementedError

    def _mor(self, m):
        raise NotImplementedError

    @property
    def is_endo(self) -> bool:
        return self.src is self.dst

    def describe(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.describe()


def apply_obj(f: ComputedFunctor, x):
    w.check_object(f.src, x)
    return f.obj(x)


def apply_mor(f: ComputedFunctor, m):
    w.check_morphism(f.src, m)
    return f.mor(m)


class Identity(ComputedFunctor):
    def __init__(self, world: World):
        super().__init__()
        self.src = self.dst = world

    def _obj(self, x):
        return x

    def _mor(self, m):
        return m

    def describe(self):
        return "Id"


class Const(ComputedFunctor):
    def __init__(self, value, src: World, dst: World, name: str = "c"):
        super().__init__()
        w.check_object(dst, value)
        self.value, self.src, self.dst, self.name = value, src, dst, name
        self._id = w.identity(dst, value)

    def _obj(self, x):
        return self.value

    def _mor(self, m):
        return self._id

    def describe(self):
        return f"K[{self.name}]"


class Lift(ComputedFunctor):
    """Lifting as a functor into the pointed strict world (the left adjoint)."""

    src, dst = World.PLAIN, World.POINTED

    def _obj(self, x):
        return fp.lift(x)

    def _mor(self, m):
        return fp.lift_map(m)

    def describe(self):
        return "F"


class Forget(ComputedFunctor):
    """The forgetful functor out of the pointed strict world."""

    src, dst = World.POINTED, World.PLAIN

    def _obj(self, x):
        return x

    def _mor(self, m):
        return m

    def describe(self):
        return "U"


class Compose(ComputedFunctor):
    def __init__(self, outer: ComputedFunctor, inner: ComputedFunctor):
        super().__init__()
        if inner.dst is not outer.src:
            raise WorldError(f"cannot compose {outer.describe()} after {inner.describe()}: "
                             f"{inner.dst.value} != {outer.src.value}")
        self.outer, self.inner = outer, inner
        self.src, self.dst = inner.src, outer.dst

    def _obj(self, x):
        return self.outer.obj(self.inner.obj(x))

    def _mor(self, m):
        return self.outer.mor(self.inner.mor(m))

    def describe(self):
        return f"{self.outer.describe()}∘{self.inner.describe()}"


class _Binary(ComputedFunctor):
    symbol = "?"
    lands_in = World.PLAIN

    def __init__(self, left: ComputedFunctor, right: ComputedFunctor):
        super().__init__()
        if left.src is not right.src:
            raise WorldError("binary connective needs operands with a common source")
        if left.dst is not self.lands_in or right.dst is not self.lands_in:
            raise WorldError(f"{type(self).__name__} needs operands landing in "
                             f"{self.lands_in.value}")
        self.left, self.right = left, right
        self.src, self.dst = left.src, self.lands_in

    def _obj(self, x):
        return self.on_objects(self.left.obj(x), self.right.obj(x))

    def _mor(self, m):
        return self.on_maps(self.left.mor(m), self.right.mor(m))

    def describe(self):
        return f"({self.left.describe()} {self.symbol} {self.right.describe()})"


class Sum(_Binary):
    symbol = "+"
    on_objects = staticmethod(fp.coproduct)
    on_maps = staticmethod(fp.coproduct_map)


class Product(_Binary):
    symbol = "×"
    on_objects = staticmethod(fp.product)
    on_maps = staticmethod(fp.product_map)


class CoalescedSum(_Binary):
    symbol = "⊕"
    lands_in = World.POINTED
    on_objects = staticmethod(fp.coalesced_sum)
    on_maps = staticmethod(fp.coalesced_sum_map)


class Smash(_Binary):
    symbol = "⊗"
    lands_in = World.POINTED
    on_objects = staticmethod(fp.smash_product)
    on_maps = staticmethod(fp.smash_map)


class Hom(ComputedFunctor):
    """The internal hom ``[- -> -]`` applied to a pair-valued functor."""

    def __init__(self, inner: ComputedFunctor):
        super().__init__()
        if inner.dst is not World.OP_PLAIN:
            raise VarianceError("Hom needs an argument landing in op_plain")
        self.inner = inner
        self.src, self.dst = inner.src, World.PLAIN

    def _obj(self, x):
        a = self.inner.obj(x)
        return fp.hom_poset(a.neg, a.pos)

    def _mor(self, m):
        pm = self.inner.mor(m)
        return fp.hom_map(pm.neg, pm.pos)

    def describe(self):
        return f"[→]∘{self.inner.describe()}"


class Pairing(ComputedFunctor):
    """``<Π1 neg, Π2 pos>``: contravariant part of one functor, covariant of another."""

    def __init__(self, neg: ComputedFunctor, pos: ComputedFunctor):
        super().__init__()
        if neg.src is not pos.src or neg.dst is not pos.dst or not neg.dst.is_pair:
            raise VarianceError("Pairing needs two pair-valued functors with a common source")
        self.neg, self.pos = neg, pos
        self.src, self.dst = neg.src, neg.dst

    def _obj(self, x):
        return Pair(self.neg.obj(x).neg, self.pos.obj(x).pos)

    def _mor(self, m):
        return Pair(self.neg.mor(m).neg, self.pos.mor(m).pos)

    def describe(self):
        return f"<Π1 {self.neg.describe()}, Π2 {self.pos.describe()}>"


class Proj2(ComputedFunctor):
    """Covariant component of a pair-valued functor."""

    def __init__(self, inner: ComputedFunctor):
        super().__init__()
        if not inner.dst.is_pair:
            raise VarianceError("Proj2 needs a pair-valued functor")
        self.inner = inner
        self.src, self.dst = inner.src, inner.dst.base

    def _obj(self, x):
        return self.inner.obj(x).pos

    def _mor(self, m):
        return self.inner.mor(m).pos

    def describe(self):
        return f"Π2 {self.inner.describe()}"


class OpSquare(ComputedFunctor):
    """``H^op x H`` for a covariant ``H``."""

    def __init__(self, h: ComputedFunctor):
        super().__init__()
        if h.src.is_pair or h.dst.is_pair:
            raise VarianceError("OpSquare needs a functor between base worlds")
        self.h = h
        self.src, self.dst = h.src.squared(), h.dst.squared()

    def _obj(self, x):
        return Pair(self.h.obj(x.neg), self.h.obj(x.pos))

    def _mor(self, m):
        return Pair(self.h.mor(m.neg), self.h.mor(m.pos))

    def describe(self):
        return f"({self.h.describe()})^op×({self.h.describe()})"


class Symmetrized(ComputedFunctor):
    """``<H^op . <Π2, Π1>, H>`` for a mixed-variance ``H``.

    On objects ``(A, B) |-> (H(B, A), H(A, B))``.
    """

    def __init__(self, h: ComputedFunctor):
        super().__init__()
        if not h.src.is_pair or h.dst.is_pair:
            raise VarianceError("symmetrization needs a functor C^op x C -> C")
        self.h = h
        self.src, self.dst = h.src, h.dst.squared()

    def _obj(self, x):
        return Pair(self.h.obj(Pair(x.pos, x.neg)), self.h.obj(x))

    def _mor(self, m):
        return Pair(self.h.mor(Pair(m.pos, m.neg)), self.h.mor(m))

    def describe(self):
        return f"∨({self.h.describe()})"


def lifting() -> ComputedFunctor:
    """The lifting monad ``T = U . F`` on the plain world."""
    return Compose(Forget(), Lift())


def symmetrize(h: ComputedFunctor) -> ComputedFunctor:
    return Symmetrized(h)


def internal_hom(world: World = World.OP_PLAIN) -> ComputedFunctor:
    """``[- -> -] : C^op x C -> C``."""
    return Hom(Identity(world))
