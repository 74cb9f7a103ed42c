"""Independent brute-force oracles shared by the test modules.

Nothing here calls the enumeration code under test; everything works on
plain Python relations and ``itertools``.
"""

from itertools import permutations, product

import pytest

from algcompact import finpos as fp


def relation(p: fp.FinPoset) -> set:
    return {(a, b) for a in range(p.size) for b in range(p.size) if p.le(a, b)}


def brute_monotone_tables(a: fp.FinPoset, b: fp.FinPoset, strict: bool = False) -> list:
    """Every function table a -> b, filtered by monotonicity, in lexicographic order."""
    ra, rb = relation(a), relation(b)
    out = []
    for t in product(range(b.size), repeat=a.size):
        if all((t[x], t[y]) in rb for x, y in ra):
            if strict and t[a.bottom] != b.bottom:
                continue
            out.append(t)
    return out


def is_partial_order(n: int, rel: set) -> bool:
    if any((i, i) not in rel for i in range(n)):
        return False
    if any((j, i) in rel for i, j in rel if i != j):
        return False
    return all((i, k) in rel for i, j in rel for j2, k in rel if j == j2)


def canonical(n: int, rel: set) -> tuple:
    return min(tuple(sorted((p[i], p[j]) for i, j in rel)) for p in permutations(range(n)))


def brute_poset_classes(n: int) -> set:
    """Iso classes of partial orders on ``n`` points, by exhausting all relations."""
    offdiag = [(i, j) for i in range(n) for j in range(n) if i != j]
    classes = set()
    for bits in product((0, 1), repeat=len(offdiag)):
        rel = {(i, i) for i in range(n)} | {e for e, bit in zip(offdiag, bits) if bit}
        if is_partial_order(n, rel):
            classes.add(canonical(n, rel))
    return classes


def has_least(n: int, rel: set) -> bool:
    return any(all((x, y) in rel for y in range(n)) for x in range(n))


@pytest.fixture(scope="session")
def small_posets():
    return fp.posets_up_to(3)


@pytest.fixture(scope="session")
def small_pointed():
    return fp.posets_up_to(3, pointed_only=True)
