"""Exact algebra of monomial ideals in a local chart at the origin.

Ideals are stored by their unique minimal (antichain) generating set of
exponent tuples.  The zero ideal is the empty generator set; the unit
ideal is generated by the all-zeros exponent.  Everything is integer
arithmetic on tuples, so values are hashable and order-independent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

Exponent = tuple[int, ...]


def _check_exponent(e: Exponent, dim: int) -> None:
    if len(e) != dim:
        raise ValueError(f"exponent length {len(e)} != ambient dimension {dim}")
    if any(x < 0 for x in e):
        raise ValueError(f"negative entry in exponent {e}")


def divides(a: Exponent, b: Exponent) -> bool:
    """Componentwise a <= b, i.e. x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialIdeal:
    ambient_dim: int
    gens: tuple[Exponent, ...]  # sorted antichain

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise ValueError("ambient dimension must be nonnegative")
        for g in self.gens:
            _check_exponent(g, self.ambient_dim)

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return len(self.gens) == 1 and not any(self.gens[0])

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)


def minimal_generators(gens, ambient_dim: int | None = None) -> MonomialIdeal:
    """Reduce a generator collection to the unique minimal antichain.

    A generator is dropped when another one divides it.  The empty set
    denotes the zero ideal.
    """
    gens = [tuple(g) for g in gens]
    if ambient_dim is None:
        if not gens:
            raise ValueError("ambient dimension required for an empty generator set")
        ambient_dim = len(gens[0])
    for g in gens:
        _check_exponent(g, ambient_dim)
    minimal: list[Exponent] = []
    for g in sorted(set(gens), key=lambda e: (sum(e), e)):
        if not any(divides(h, g) for h in minimal):
            minimal.append(g)
    return MonomialIdeal(ambient_dim, tuple(sorted(minimal)))


def contains_monomial(ideal: MonomialIdeal, e: Exponent) -> bool:
    """Membership of the monomial x^e, i.e. some generator divides it."""
    e = tuple(e)
    _check_exponent(e, ideal.ambient_dim)
    return any(divides(g, e) for g in ideal.gens)


def gcd_generators(ideal: MonomialIdeal) -> Exponent:
    """Componentwise minimum over the generators (the monomial gcd)."""
    if ideal.is_zero:
        raise ValueError("gcd of the zero ideal is undefined")
    return tuple(min(col) for col in zip(*ideal.gens))


def colon_by_monomial(ideal: MonomialIdeal, m: Exponent) -> MonomialIdeal:
    """The colon ideal I : x^m, via truncated subtraction per generator."""
    m = tuple(m)
    _check_exponent(m, ideal.ambient_dim)
    if ideal.is_zero:
        return ideal
    shifted = [tuple(max(x - y, 0) for x, y in zip(g, m)) for g in ideal.gens]
    return minimal_generators(shifted, ideal.ambient_dim)


def multiply_by_monomial(ideal: MonomialIdeal, m: Exponent) -> MonomialIdeal:
    m = tuple(m)
    _check_exponent(m, ideal.ambient_dim)
    gens = [tuple(x + y for x, y in zip(g, m)) for g in ideal.gens]
    return MonomialIdeal(ideal.ambient_dim, tuple(sorted(gens)))


def principal_part_factorization(ideal: MonomialIdeal) -> tuple[Exponent, MonomialIdeal]:
    """Factor I = x^F * N with F the generator gcd and N = I : x^F.

    N has all-zeros gcd, and multiplying its generators back by F
    reproduces I exactly.
    """
    if ideal.is_zero:
        raise ValueError("cannot factor the zero ideal")
    f = gcd_generators(ideal)
    n = colon_by_monomial(ideal, f)
    if multiply_by_monomial(n, f).gens != ideal.gens:
        raise AssertionError("principal part factorization failed to reconstruct")
    return f, n


def intersect(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    """Intersection of two monomial ideals via pairwise lcms."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if a.is_zero or b.is_zero:
        return MonomialIdeal(a.ambient_dim, ())
    lcms = [tuple(max(x, y) for x, y in zip(g, h)) for g in a.gens for h in b.gens]
    return minimal_generators(lcms, a.ambient_dim)


def _is_pure_power(e: Exponent) -> bool:
    return sum(1 for x in e if x) <= 1


def irreducible_decomposition(ideal: MonomialIdeal) -> tuple[MonomialIdeal, ...]:
    """Write I as an irredundant intersection of pure-power ideals.

    Recursive splitting on a generator that is not a pure power:
    I = (I + x_j^{a_j}) \\cap (I + x^{a - a_j e_j}).  The result is
    post-filtered to an irredundant set and verified against the input.
    """
    if ideal.is_zero or ideal.is_unit:
        raise ValueError("irreducible decomposition needs a nonzero proper ideal")

    components: list[MonomialIdeal] = []
    stack = [ideal]
    while stack:
        current = stack.pop()
        split_gen = next((g for g in current.gens if not _is_pure_power(g)), None)
        if split_gen is None:
            components.append(current)
            continue
        j = next(i for i, x in enumerate(split_gen) if x)
        pure = tuple(split_gen[j] if i == j else 0 for i in range(len(split_gen)))
        rest = tuple(0 if i == j else x for i, x in enumerate(split_gen))
        stack.append(minimal_generators(list(current.gens) + [pure], current.ambient_dim))
        stack.append(minimal_generators(list(current.gens) + [rest], current.ambient_dim))

    # Dedupe, then drop components containing the intersection of the others.
    unique: list[MonomialIdeal] = []
    for comp in sorted(components, key=lambda c: c.gens):
        if comp not in unique:
            unique.append(comp)
    changed = True
    while changed:
        changed = False
        for k, comp in enumerate(unique):
            others = unique[:k] + unique[k + 1:]
            if not others:
                continue
            inter = others[0]
            for o in others[1:]:
                inter = intersect(inter, o)
            if all(contains_monomial(comp, g) for g in inter.gens):
                unique.pop(k)
                changed = True
                break

    check = unique[0]
    for comp in unique[1:]:
        check = intersect(check, comp)
    if check.gens != ideal.gens:
        raise AssertionError("irreducible decomposition does not intersect to the input")
    return tuple(unique)


def radical(ideal: MonomialIdeal) -> MonomialIdeal:
    """Supports of the generators (0/1 truncation), minimalized."""
    if ideal.is_zero:
        raise ValueError("radical of the zero ideal is undefined")
    supports = [tuple(1 if x else 0 for x in g) for g in ideal.gens]
    return minimal_generators(supports, ideal.ambient_dim)


def order_at_origin(ideal: MonomialIdeal) -> int:
    """Largest k with I inside the k-th power of the maximal ideal.

    For a monomial ideal this is the minimum total degree of a minimal
    generator; the unit ideal has order 0.
    """
    if ideal.is_zero:
        raise ValueError("order of the zero ideal is undefined")
    return min(sum(g) for g in ideal.gens)


def order_along(ideal: MonomialIdeal, subset: tuple[int, ...]) -> int:
    """Order of I at the generic point of the coordinate subspace V(x_S)."""
    return min(sum(g[j] for j in subset) for g in ideal.gens)


def max_order_components(ideal: MonomialIdeal, cap: int = 10) -> tuple[tuple[int, ...], ...]:
    """Coordinate subsets along which I has maximal order.

    Scans all subsets of the union of generator supports (variables
    outside every support never help), keeps the subsets maximizing
    ord_S, and prunes to the inclusion-minimal ones.
    """
    if ideal.is_zero or ideal.is_unit:
        raise ValueError("maximum order locus needs a nonzero proper ideal")
    support = sorted({j for g in ideal.gens for j, x in enumerate(g) if x})
    if len(support) > cap:
        raise ValueError(f"support of size {len(support)} exceeds the scan cap {cap}")
    best = 0
    maximizers: list[tuple[int, ...]] = []
    for size in range(1, len(support) + 1):
        for subset in itertools.combinations(support, size):
            val = order_along(ideal, subset)
            if val > best:
                best = val
                maximizers = [subset]
            elif val == best and val > 0:
                maximizers.append(subset)
    minimal = [s for s in maximizers
               if not any(set(t) < set(s) for t in maximizers)]
    return tuple(sorted(minimal))
