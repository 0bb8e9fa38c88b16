"""Curvature of a discrete bundle, the Bianchi identity, and gauge invariance.

A line bundle on a single triangle is flat exactly when the two ways of
transporting a vertex fiber up into the face agree.  Doubling one transport
breaks this, and the curvature records by how much on each square of the
cubical refinement.
"""

import random

from fesys.bundle import (DiscreteBundle, bianchi_residual, curvature, gauge_apply, is_flat, random_bundle,
                          random_invertible)
from fesys.complex import simplex_complex
from fesys.ratlin import RatMatrix, qstr

tri = simplex_complex(2)
one = RatMatrix([[1]])
transport = {(t, f): one for t in tri.cells() for f, _ in tri.faces(t)}
transport[((0, 1, 2), (0, 1))] = RatMatrix([[2]])
b = DiscreteBundle(tri, {c: 1 for c in tri.cells()}, transport)

print("twisted line bundle on a triangle")
print("  flat?", is_flat(b)[0])
for (lower, upper), m in sorted(curvature(b).items()):
    print(f"  curvature on square S({lower}, {upper}) = {qstr(m[0, 0])}")

# On a tetrahedron the curvature is a 2-cochain on the cubical refinement, and
# its covariant coboundary vanishes identically, however curved the bundle is.
tet = simplex_complex(3)
for seed in range(3):
    rb = random_bundle(tet, 2, seed)
    curved = sum(not m.is_zero() for m in curvature(rb).values())
    print(f"random rank-2 bundle #{seed}: {curved} curved squares, Bianchi residual {qstr(bianchi_residual(rb))}")

# A gauge transformation conjugates the curvature; zero curvature stays zero.
rng = random.Random(1)
theta = {c: random_invertible(1, rng) for c in tri.cells()}
b2 = gauge_apply(theta, b)
print("after a gauge change the bundle is still curved:", not is_flat(b2)[0])
