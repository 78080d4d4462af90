"""Brute-force oracles for monomial ideal operations.

Everything here works by explicit divisibility scans over all monomials
up to a degree bound, independent of the library's own algebra, so the
two sides can disagree only when one of them is wrong.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def monomials_up_to(dim: int, maxdeg: int) -> np.ndarray:
    """All exponent vectors in `dim` variables of total degree <= maxdeg."""
    rows = [e for e in itertools.product(range(maxdeg + 1), repeat=dim)
            if sum(e) <= maxdeg]
    return np.array(sorted(rows), dtype=np.int64)


def membership_mask(gens, monomials: np.ndarray) -> np.ndarray:
    """Boolean mask: which monomials are divisible by some generator."""
    if len(gens) == 0:
        return np.zeros(len(monomials), dtype=bool)
    g = np.array([tuple(x) for x in gens], dtype=np.int64)
    return (monomials[:, None, :] >= g[None, :, :]).all(axis=2).any(axis=1)


def oracle_colon_mask(gens, m, monomials: np.ndarray) -> np.ndarray:
    """x^e in (I : x^m) iff x^{e+m} in I."""
    shifted = monomials + np.array(m, dtype=np.int64)[None, :]
    return membership_mask(gens, shifted)


def oracle_radical_mask(gens, monomials: np.ndarray) -> np.ndarray:
    """x^e in sqrt(I) iff x^{ke} in I for some k up to the max exponent."""
    if len(gens) == 0:
        return np.zeros(len(monomials), dtype=bool)
    kmax = max(max(g) for g in gens) + 1
    mask = np.zeros(len(monomials), dtype=bool)
    for k in range(1, kmax + 1):
        mask |= membership_mask(gens, monomials * k)
    return mask


def oracle_gcd(gens) -> tuple[int, ...]:
    return tuple(min(col) for col in zip(*[tuple(g) for g in gens]))


def oracle_is_gcd(gens, f) -> bool:
    """f divides every generator and no variable can be added to it."""
    gens = [tuple(g) for g in gens]
    if not all(all(x <= y for x, y in zip(f, g)) for g in gens):
        return False
    for j in range(len(f)):
        bumped = tuple(x + 1 if i == j else x for i, x in enumerate(f))
        if all(all(x <= y for x, y in zip(bumped, g)) for g in gens):
            return False
    return True


def oracle_order(gens, dim: int, maxdeg: int) -> int:
    """Smallest total degree of a monomial in the ideal."""
    mons = monomials_up_to(dim, maxdeg)
    mask = membership_mask(gens, mons)
    degrees = mons.sum(axis=1)[mask]
    if len(degrees) == 0:
        raise ValueError("no member up to the degree bound")
    return int(degrees.min())
