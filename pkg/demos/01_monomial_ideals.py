#!/usr/bin/env python3
"""Monomial ideal algebra at a chart origin.

Ideals are antichains of exponent tuples; every operation the engine
needs downstream (gcd, colon, principal-part factorization, radical,
irreducible decomposition, orders along coordinate subspaces) is exact
integer arithmetic.
"""

from toroidal.monomial import (
    colon_by_monomial,
    irreducible_decomposition,
    max_order_components,
    minimal_generators,
    order_at_origin,
    principal_part_factorization,
    radical,
)

# <x^2 y, x y^3> in two variables; a generator divisible by another is
# dropped automatically.
ideal = minimal_generators([(2, 1), (1, 3), (3, 3)])
print("minimal generators:", ideal.gens)

# The monomial gcd and the colon by it split the ideal into a principal
# part and a residual with trivial gcd: I = x^F * N.
f, n = principal_part_factorization(ideal)
print("principal part:", f)
print("residual:", n.gens)

# The residual's radical decomposes into coordinate-subspace primes; the
# supports are the components of the nonprincipal locus.
print("radical of residual:", radical(n).gens)
for comp in irreducible_decomposition(radical(n)):
    print("  component:", comp.gens)

# Orders: at the origin, and along every coordinate subspace. The
# maximum-order subsets are where the resolution strategy blows up.
print("order at origin:", order_at_origin(n))
print("max order components:", max_order_components(n))

# Colon as division: (I : x y) shifts every generator down.
print("I : xy =", colon_by_monomial(ideal, (1, 1)).gens)
