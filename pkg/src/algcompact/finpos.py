"""Finite posets, monotone maps and the constructions on them.

Elements of a poset are the indices ``0..size-1``.  The order is kept as a
read-only boolean matrix; the combinatorial routines (map enumeration, iso
search) work on Python int bitmasks derived from it.

Index conventions, relied upon by every functor action:

* ``lift``: the fresh bottom is 0, old element ``i`` becomes ``i + 1``.
* ``product``: pair ``(i, j)`` is ``i * b.size + j``.
* ``coproduct``: left block first, then the right block.
* ``coalesced_sum``: 0 is the shared bottom, then the non-bottoms of the left
  summand, then those of the right one.
* ``smash_product``: 0 is the bottom, then non-bottom pairs in row-major order.
* ``hom_poset``: all monotone maps, lexicographic on their tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

# Hard cap on the number of elements any construction may produce.
MAX_ELEMENTS = 4096


class PosetError(ValueError):
    pass


class CompositionError(PosetError):
    pass


class PointednessError(PosetError):
    pass


class SizeLimitExceeded(RuntimeError):
    """A construction would exceed :data:`MAX_ELEMENTS` elements."""


@dataclass(frozen=True)
class Check:
    """Outcome of a validation: truthy iff ``ok``."""

    ok: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def _least(leq: np.ndarray) -> Optional[int]:
    if leq.shape[0] == 0:
        return None
    rows = np.flatnonzero(leq.all(axis=1))
    return int(rows[0]) if rows.size else None


class FinPoset:
    """A finite partial order on ``0..size-1``.

    ``bottom`` is the least element when there is one.  Equality and hashing
    are structural (size and relation); labels are display-only.
    """

    def __init__(self, leq, labels: Optional[Sequence[str]] = None, *,
                 bottom: Optional[int] = None, check: bool = True):
        arr = np.array(leq, dtype=bool)
        if arr.size == 0:
            arr = np.zeros((0, 0), dtype=bool)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise PosetError("order relation must be a square matrix")
        arr.setflags(write=False)
        self.leq = arr
        n = arr.shape[0]
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise PosetError(f"expected {n} labels, got {len(labels)}")
        self.labels = tuple(labels)
        if check:
            res = _validate(arr, bottom)
            if not res:
                raise PosetError(res.reason)
            bottom = _least(arr)
        elif bottom is None:
            bottom = _least(arr)
        self.bottom = bottom

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    @property
    def pointed(self) -> bool:
        return self.bottom is not None

    def le(self, x: int, y: int) -> bool:
        return self.rows[x][y]

    @cached_property
    def rows(self) -> list:
        return self.leq.tolist()

    @cached_property
    def up_masks(self) -> tuple:
        """``up_masks[x]`` has bit ``y`` set iff ``x <= y``."""
        return tuple(_mask(row) for row in self.rows)

    @cached_property
    def down_masks(self) -> tuple:
        return tuple(_mask(col) for col in self.leq.T.tolist())

    @cached_property
    def _key(self) -> bytes:
        return np.packbits(self.leq).tobytes()

    @cached_property
    def _hash(self) -> int:
        return hash((self.size, self._key))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinPoset):
            return NotImplemented
        return self.size == other.size and self._key == other._key

    def __repr__(self) -> str:
        if self.size > 8:
            return f"FinPoset(size={self.size}, bottom={self.bottom})"
        rel = [(self.labels[i], self.labels[j]) for i, j in cover_pairs(self)]
        return f"FinPoset(size={self.size}, covers={rel})"


def _mask(bits: Iterable[bool]) -> int:
    m = 0
    for k, b in enumerate(bits):
        if b:
            m |= 1 << k
    return m


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _validate(leq: np.ndarray, bottom: Optional[int]) -> Check:
    n = leq.shape[0]
    if n and not leq.diagonal().all():
        i = int(np.flatnonzero(~leq.diagonal())[0])
        return Check(False, f"reflexivity fails at element {i}")
    both = leq & leq.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = (int(v) for v in np.argwhere(both)[0])
        return Check(False, f"antisymmetry fails: {i} <= {j} and {j} <= {i}")
    if n:
        m = leq.astype(np.float32)
        closure = (m @ m) > 0
        bad = closure & ~leq
        if bad.any():
            i, j = (int(v) for v in np.argwhere(bad)[0])
            return Check(False, f"transitivity fails: {i} <= k <= {j} but not {i} <= {j}")
    if bottom is not None:
        if n == 0:
            return Check(False, "bottom given for the empty poset")
        if not (0 <= bottom < n) or not leq[bottom].all():
            return Check(False, f"bottom {bottom} is not below every element")
    return Check(True)


def validate_poset(p: FinPoset) -> Check:
    """Re-check the poset axioms; names the first violated one."""
    return _validate(np.array(p.leq), p.bottom)


# -- small posets ---------------------------------------------------------

def empty() -> FinPoset:
    return FinPoset(np.zeros((0, 0), dtype=bool), check=False)


def point(label: str = "*") -> FinPoset:
    return FinPoset(np.ones((1, 1), dtype=bool), [label], bottom=0, check=False)


def discrete(n: int) -> FinPoset:
    return FinPoset(np.eye(n, dtype=bool), check=False)


def chain(n: int) -> FinPoset:
    return FinPoset(np.triu(np.ones((n, n), dtype=bool)), check=False)


def reflexive_transitive_closure(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    m = np.eye(n, dtype=bool)
    for i, j in pairs:
        m[i, j] = True
    for k in range(n):
        m |= m[:, k:k + 1] & m[k:k + 1, :]
    return m


def from_relation(n: int, pairs: Iterable[tuple[int, int]],
                  labels: Optional[Sequence[str]] = None) -> FinPoset:
    return FinPoset(reflexive_transitive_closure(n, pairs), labels)


def from_literal(data: dict) -> FinPoset:
    """Load ``{"elements": [...], "leq": [[a, b], ...], "bottom": a?}``.

    ``leq`` is a generating set; its reflexive-transitive closure is taken
    before validation.
    """
    elements = [str(e) for e in data.get("elements", [])]
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise PosetError("duplicate element names")
    try:
        pairs = [(index[str(a)], index[str(b)]) for a, b in data.get("leq", [])]
    except KeyError as exc:
        raise PosetError(f"unknown element {exc.args[0]!r} in leq") from None
    bottom = data.get("bottom")
    if bottom is not None:
        if str(bottom) not in index:
            raise PosetError(f"unknown bottom element {bottom!r}")
        bottom = index[str(bottom)]
    return FinPoset(reflexive_transitive_closure(len(elements), pairs), elements,
                    bottom=bottom)


def unique_labels(p: FinPoset) -> list[str]:
    if len(set(p.labels)) == p.size:
        return list(p.labels)
    return [f"{lab}#{i}" for i, lab in enumerate(p.labels)]


def cover_pairs(p: FinPoset) -> list[tuple[int, int]]:
    """Edges of the Hasse diagram (transitive reduction of the strict order)."""
    if p.size == 0:
        return []
    lt = p.leq & ~np.eye(p.size, dtype=bool)
    m = lt.astype(np.float32)
    through = (m @ m) > 0
    return [(int(i), int(j)) for i, j in np.argwhere(lt & ~through)]


def to_literal(p: FinPoset) -> dict:
    names = unique_labels(p)
    out = {
        "elements": names,
        "leq": [[names[i], names[j]] for i, j in cover_pairs(p)],
    }
    if p.bottom is not None:
        out["bottom"] = names[p.bottom]
    return out


# -- maps -----------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneMap:
    src: FinPoset
    dst: FinPoset
    table: tuple

    def __post_init__(self):
        if not isinstance(self.table, tuple):
            object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != self.src.size:
            raise PosetError("map table length does not match its source")

    def __call__(self, x: int) -> int:
        return self.table[x]

    @property
    def is_strict(self) -> bool:
        return (self.src.bottom is not None and self.dst.bottom is not None
                and self.table[self.src.bottom] == self.dst.bottom)

    def __repr__(self) -> str:
        return f"MonotoneMap({self.src.size}->{self.dst.size}, {list(self.table)})"


def monotone_map(src: FinPoset, dst: FinPoset, table: Sequence[int]) -> MonotoneMap:
    """Build a map, checking range and monotonicity."""
    table = tuple(int(v) for v in table)
    if len(table) != src.size:
        raise PosetError("map table length does not match its source")
    if any(not 0 <= v < dst.size for v in table):
        raise PosetError("map value out of range")
    rows, drows = src.rows, dst.rows
    for x in range(src.size):
        for y in range(src.size):
            if rows[x][y] and not drows[table[x]][table[y]]:
                raise PosetError(f"map is not monotone: {x} <= {y} but images are not ordered")
    return MonotoneMap(src, dst, table)


def identity(p: FinPoset) -> MonotoneMap:
    return MonotoneMap(p, p, tuple(range(p.size)))


def constant(src: FinPoset, dst: FinPoset, value: int) -> MonotoneMap:
    return MonotoneMap(src, dst, (value,) * src.size)


def empty_map(dst: FinPoset) -> MonotoneMap:
    return MonotoneMap(empty(), dst, ())


def bottom_map(src: FinPoset, dst: FinPoset) -> MonotoneMap:
    """The constant-bottom map; strict whenever ``src`` is pointed."""
    if dst.bottom is None:
        raise PointednessError("target has no bottom")
    return constant(src, dst, dst.bottom)


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """``g . f``; the middle posets must be structurally equal."""
    if f.dst != g.src:
        raise CompositionError("cannot compose: middle objects differ")
    gt = g.table
    return MonotoneMap(f.src, g.dst, tuple(gt[v] for v in f.table))


def pointwise_leq(f: MonotoneMap, g: MonotoneMap) -> bool:
    rows = f.dst.rows
    return all(rows[a][b] for a, b in zip(f.table, g.table))


def is_iso(f: MonotoneMap) -> bool:
    if f.src.size != f.dst.size or len(set(f.table)) != f.src.size:
        return False
    t = f.table
    srows, drows = f.src.rows, f.dst.rows
    n = f.src.size
    return all(srows[x][y] == drows[t[x]][t[y]] for x in range(n) for y in range(n))


def inverse(f: MonotoneMap) -> MonotoneMap:
    if not is_iso(f):
        raise PosetError("map is not an order-isomorphism")
    inv = [0] * f.src.size
    for x, v in enumerate(f.table):
        inv[v] = x
    return MonotoneMap(f.dst, f.src, tuple(inv))


# -- constructions --------------------------------------------------------

def _guard(n: int) -> None:
    if n > MAX_ELEMENTS:
        raise SizeLimitExceeded(f"construction needs {n} elements (limit {MAX_ELEMENTS})")


def lift(p: FinPoset) -> FinPoset:
    n = p.size
    _guard(n + 1)
    m = np.zeros((n + 1, n + 1), dtype=bool)
    m[0, :] = True
    m[1:, 1:] = p.leq
    return FinPoset(m, ("⊥",) + tuple("↑" + lab for lab in p.labels), bottom=0, check=False)


def lift_map(f: MonotoneMap) -> MonotoneMap:
    """The strict extension of ``f`` to the lifted posets."""
    return MonotoneMap(lift(f.src), lift(f.dst), (0,) + tuple(v + 1 for v in f.table))


def product(a: FinPoset, b: FinPoset) -> FinPoset:
    n, k = a.size, b.size
    _guard(n * k)
    m = (a.leq[:, None, :, None] & b.leq[None, :, None, :]).reshape(n * k, n * k)
    bottom = None
    if a.bottom is not None and b.bottom is not None:
        bottom = a.bottom * k + b.bottom
    labels = tuple(f"({x},{y})" for x in a.labels for y in b.labels)
    return FinPoset(m, labels, bottom=bottom, check=False)


def product_map(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    k = g.dst.size
    table = tuple(x * k + y for x in f.table for y in g.table)
    return MonotoneMap(product(f.src, g.src), product(f.dst, g.dst), table)


def projections(a: FinPoset, b: FinPoset) -> tuple[MonotoneMap, MonotoneMap]:
    p = product(a, b)
    k = b.size
    return (MonotoneMap(p, a, tuple(i // k for i in range(p.size))),
            MonotoneMap(p, b, tuple(i % k for i in range(p.size))))


def pairing(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    """``<f, g> : X -> A x B``."""
    if f.src != g.src:
        raise CompositionError("pairing needs a common source")
    k = g.dst.size
    return MonotoneMap(f.src, product(f.dst, g.dst),
                       tuple(x * k + y for x, y in zip(f.table, g.table)))


def coproduct(a: FinPoset, b: FinPoset) -> FinPoset:
    n, k = a.size, b.size
    _guard(n + k)
    m = np.zeros((n + k, n + k), dtype=bool)
    m[:n, :n] = a.leq
    m[n:, n:] = b.leq
    bottom = None
    if n == 0:
        bottom = b.bottom
    elif k == 0:
        bottom = a.bottom
    labels = tuple(f"inl({x})" for x in a.labels) + tuple(f"inr({y})" for y in b.labels)
    return FinPoset(m, labels, bottom=bottom, check=False)


def coproduct_map(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    n = f.dst.size
    table = f.table + tuple(v + n for v in g.table)
    return MonotoneMap(coproduct(f.src, g.src), coproduct(f.dst, g.dst), table)


def injections(a: FinPoset, b: FinPoset) -> tuple[MonotoneMap, MonotoneMap]:
    s = coproduct(a, b)
    return (MonotoneMap(a, s, tuple(range(a.size))),
            MonotoneMap(b, s, tuple(range(a.size, a.size + b.size))))


def copairing(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    """``[f, g] : A + B -> Y``."""
    if f.dst != g.dst:
        raise CompositionError("copairing needs a common target")
    return MonotoneMap(coproduct(f.src, g.src), f.dst, f.table + g.table)


def _nonbottom(p: FinPoset) -> list[int]:
    return [i for i in range(p.size) if i != p.bottom]


def _require_pointed(*ps: FinPoset) -> None:
    for p in ps:
        if p.bottom is None:
            raise PointednessError("argument is not pointed")


def coalesced_sum(a: FinPoset, b: FinPoset) -> FinPoset:
    _require_pointed(a, b)
    na, nb = _nonbottom(a), _nonbottom(b)
    n = 1 + len(na) + len(nb)
    _guard(n)
    m = np.zeros((n, n), dtype=bool)
    m[0, :] = True
    m[1:1 + len(na), 1:1 + len(na)] = a.leq[np.ix_(na, na)]
    m[1 + len(na):, 1 + len(na):] = b.leq[np.ix_(nb, nb)]
    labels = ("⊥",) + tuple(f"inl({a.labels[i]})" for i in na) \
        + tuple(f"inr({b.labels[j]})" for j in nb)
    return FinPoset(m, labels, bottom=0, check=False)


def _reindex_nonbottom(p: FinPoset, offset: int) -> dict[int, int]:
    idx = {p.bottom: 0}
    for k, i in enumerate(_nonbottom(p)):
        idx[i] = offset + k
    return idx


def coalesced_sum_map(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    """``f (+) g`` for strict ``f`` and ``g``."""
    if not (f.is_strict and g.is_strict):
        raise PointednessError("coalesced sum acts on strict maps only")
    src, dst = coalesced_sum(f.src, g.src), coalesced_sum(f.dst, g.dst)
    ld = _reindex_nonbottom(f.dst, 1)
    rd = _reindex_nonbottom(g.dst, 1 + f.dst.size - 1)
    table = [0]
    table += [ld[f.table[i]] for i in _nonbottom(f.src)]
    table += [rd[g.table[j]] for j in _nonbottom(g.src)]
    return MonotoneMap(src, dst, tuple(table))


def smash_product(a: FinPoset, b: FinPoset) -> FinPoset:
    _require_pointed(a, b)
    na, nb = _nonbottom(a), _nonbottom(b)
    pairs = [(i, j) for i in na for j in nb]
    n = 1 + len(pairs)
    _guard(n)
    m = np.zeros((n, n), dtype=bool)
    m[0, :] = True
    if pairs:
        sub = a.leq[np.ix_(na, na)][:, None, :, None] & b.leq[np.ix_(nb, nb)][None, :, None, :]
        m[1:, 1:] = sub.reshape(len(pairs), len(pairs))
    labels = ("⊥",) + tuple(f"({a.labels[i]},{b.labels[j]})" for i, j in pairs)
    return FinPoset(m, labels, bottom=0, check=False)


def smash_map(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    if not (f.is_strict and g.is_strict):
        raise PointednessError("smash product acts on strict maps only")
    src, dst = smash_product(f.src, g.src), smash_product(f.dst, g.dst)
    dpos = {}
    for k, (i, j) in enumerate((i, j) for i in _nonbottom(f.dst) for j in _nonbottom(g.dst)):
        dpos[(i, j)] = k + 1
    table = [0]
    for i in _nonbottom(f.src):
        for j in _nonbottom(g.src):
            table.append(dpos.get((f.table[i], g.table[j]), 0))
    return MonotoneMap(src, dst, tuple(table))


# -- map enumeration and hom posets ---------------------------------------

def iter_monotone_tables(a: FinPoset, b: FinPoset, strict_only: bool = False) -> Iterator[tuple]:
    """Stream the tables of all monotone maps ``a -> b`` in lexicographic order."""
    n = a.size
    if n == 0:
        yield ()
        return
    if b.size == 0:
        return
    if strict_only:
        _require_pointed(a, b)
    rows = a.rows
    below = [[k for k in range(i) if rows[k][i]] for i in range(n)]
    above = [[k for k in range(i) if rows[i][k]] for i in range(n)]
    up, down = b.up_masks, b.down_masks
    full = (1 << b.size) - 1
    fixed = {a.bottom: 1 << b.bottom} if strict_only else {}

    def allowed(i: int) -> int:
        m = fixed.get(i, full)
        for k in below[i]:
            m &= up[t[k]]
        for k in above[i]:
            m &= down[t[k]]
        return m

    t = [0] * n
    stack = [_iter_bits(allowed(0))]
    while stack:
        i = len(stack) - 1
        v = next(stack[-1], None)
        if v is None:
            stack.pop()
            continue
        t[i] = v
        if i == n - 1:
            yield tuple(t)
        else:
            stack.append(_iter_bits(allowed(i + 1)))


def iter_monotone_maps(a: FinPoset, b: FinPoset, strict_only: bool = False) -> Iterator[MonotoneMap]:
    for t in iter_monotone_tables(a, b, strict_only):
        yield MonotoneMap(a, b, t)


def _enumerate_tables(a: FinPoset, b: FinPoset, strict_only: bool,
                      limit: Optional[int]) -> list[tuple]:
    out = []
    for t in iter_monotone_tables(a, b, strict_only):
        out.append(t)
        if limit is not None and len(out) > limit:
            raise SizeLimitExceeded(f"more than {limit} monotone maps")
    return out


@lru_cache(maxsize=4096)
def _maps_cached(a: FinPoset, b: FinPoset, strict_only: bool) -> tuple:
    tables = _enumerate_tables(a, b, strict_only, MAX_ELEMENTS)
    return tuple(MonotoneMap(a, b, t) for t in tables)


def enumerate_monotone_maps(a: FinPoset, b: FinPoset,
                            strict_only: bool = False) -> list[MonotoneMap]:
    """Every monotone (optionally strict) map ``a -> b``, lexicographic on tables.

    Raises :class:`SizeLimitExceeded` beyond :data:`MAX_ELEMENTS` maps.
    """
    return list(_maps_cached(a, b, strict_only))


def _hom_leq(maps: Sequence[MonotoneMap], dst: FinPoset, n_src: int) -> np.ndarray:
    count = len(maps)
    acc = np.ones((count, count), dtype=bool)
    if count and n_src:
        tables = np.array([m.table for m in maps], dtype=np.intp)
        for x in range(n_src):
            col = tables[:, x]
            acc &= dst.leq[col[:, None], col[None, :]]
    return acc


def _table_label(t: tuple) -> str:
    return "[" + ",".join(map(str, t)) + "]"


@lru_cache(maxsize=1024)
def _hom(a: FinPoset, b: FinPoset, strict_only: bool):
    maps = _maps_cached(a, b, strict_only)
    _guard(len(maps))
    leq = _hom_leq(maps, b, a.size)
    p = FinPoset(leq, tuple(_table_label(m.table) for m in maps), check=False)
    index = {m.table: i for i, m in enumerate(maps)}
    return p, maps, index


def hom_poset(a: FinPoset, b: FinPoset) -> FinPoset:
    """All monotone maps ``a -> b`` under the pointwise order."""
    return _hom(a, b, False)[0]


def hom_elements(a: FinPoset, b: FinPoset, strict_only: bool = False) -> tuple:
    """The maps behind the elements of :func:`hom_poset` (same order)."""
    return _hom(a, b, strict_only)[1]


def strict_hom_poset(a: FinPoset, b: FinPoset) -> FinPoset:
    _require_pointed(a, b)
    return _hom(a, b, True)[0]


def hom_map(pre: MonotoneMap, post: MonotoneMap, strict_only: bool = False) -> MonotoneMap:
    """``[pre -> post]``: sends ``f : A -> B`` to ``post . f . pre``.

    ``pre : A' -> A`` acts contravariantly, ``post : B -> B'`` covariantly.
    """
    src, maps, _ = _hom(pre.dst, post.src, strict_only)
    dst, _, index = _hom(pre.src, post.dst, strict_only)
    pt, qt = pre.table, post.table
    table = tuple(index[tuple(qt[m.table[x]] for x in pt)] for m in maps)
    return MonotoneMap(src, dst, table)


def element_as_map(p: FinPoset, x: int) -> MonotoneMap:
    """The global element ``1 -> p`` picking ``x``."""
    return MonotoneMap(point(), p, (x,))


# -- structure queries ----------------------------------------------------

def find_least(p: FinPoset) -> Optional[int]:
    return _least(p.leq)


def poset_iso(a: FinPoset, b: FinPoset) -> Optional[MonotoneMap]:
    """First order-isomorphism ``a -> b`` in lexicographic search order."""
    n = a.size
    if n != b.size:
        return None
    if n == 0:
        return MonotoneMap(a, b, ())
    if np.count_nonzero(a.leq) != np.count_nonzero(b.leq):
        return None
    deg_a = list(zip(a.leq.sum(axis=0).tolist(), a.leq.sum(axis=1).tolist()))
    deg_b = list(zip(b.leq.sum(axis=0).tolist(), b.leq.sum(axis=1).tolist()))
    if sorted(deg_a) != sorted(deg_b):
        return None
    cand = [[v for v in range(n) if deg_b[v] == deg_a[i]] for i in range(n)]
    ar, br = a.rows, b.rows
    t = [0] * n
    used = [False] * n

    def ok(i: int, v: int) -> bool:
        if used[v]:
            return False
        for k in range(i):
            w = t[k]
            if ar[i][k] != br[v][w] or ar[k][i] != br[w][v]:
                return False
        return True

    stack = [iter(cand[0])]
    while stack:
        i = len(stack) - 1
        v = next(stack[-1], None)
        if v is None:
            stack.pop()
            if stack:
                used[t[len(stack) - 1]] = False
            continue
        if not ok(i, v):
            continue
        t[i] = v
        used[v] = True
        if i == n - 1:
            return MonotoneMap(a, b, tuple(t))
        stack.append(iter(cand[i + 1]))
    return None


@dataclass(frozen=True)
class EpPair:
    e: MonotoneMap
    p: MonotoneMap


def is_ep_pair(e: MonotoneMap, p: MonotoneMap) -> Check:
    if e.src != p.dst or e.dst != p.src:
        raise CompositionError("ep-pair endpoints do not match")
    if compose(p, e) != identity(e.src):
        return Check(False, "p . e is not the identity")
    if not pointwise_leq(compose(e, p), identity(e.dst)):
        return Check(False, "e . p is not below the identity")
    return Check(True)


# -- enumeration of small posets up to isomorphism ------------------------

def _ideals(p: FinPoset) -> Iterator[int]:
    down = p.down_masks
    for s in range(1 << p.size):
        if all((down[i] & ~s) == 0 for i in _iter_bits(s)):
            yield s


@lru_cache(maxsize=None)
def _posets_of_size(n: int) -> tuple:
    if n == 0:
        return (empty(),)
    reps: list[FinPoset] = []
    buckets: dict = {}
    for q in _posets_of_size(n - 1):
        for ideal in _ideals(q):
            m = np.zeros((n, n), dtype=bool)
            m[:n - 1, :n - 1] = q.leq
            m[n - 1, n - 1] = True
            for i in _iter_bits(ideal):
                m[i, n - 1] = True
            cand = FinPoset(m, check=False)
            key = (tuple(sorted(zip(m.sum(axis=0).tolist(), m.sum(axis=1).tolist()))))
            bucket = buckets.setdefault(key, [])
            if any(poset_iso(cand, r) is not None for r in bucket):
                continue
            bucket.append(cand)
            reps.append(cand)
    return tuple(reps)


def posets_up_to(max_size: int, pointed_only: bool = False) -> list[FinPoset]:
    """One representative per iso class of posets with at most ``max_size`` elements."""
    out = [p for n in range(max_size + 1) for p in _posets_of_size(n)]
    if pointed_only:
        out = [p for p in out if p.bottom is not None]
    return out
