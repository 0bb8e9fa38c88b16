"""Poincare operators for the stress and strain complexes.

Each complex has two operators that invert the differentials up to the
finite-dimensional kernel.  On homogeneous inputs the strain operators reduce
to the Koszul formulas.
"""

import random

from fesys.poincare import j_projection, koszul, strain_p1, strain_p2
from fesys.polyfield import X2, Field, Poly2, dop, random_field
from fesys.suites import poincare_suite

rng = random.Random(0)
u = random_field(rng, "vector", 3)
e = dop("defo", u)
back = strain_p1(e)
print("displacement u recovered from its strain, up to a rigid motion:",
      back == u - j_projection("rigid_strain", u))

w = random_field(rng, "scalar", 2)
print("sven(p2 w) == w:", dop("sven", strain_p2(w)) == w)

v = Field.sym(X2, Poly2(), Poly2())
print("k1 on [[y, 0], [0, 0]]:", koszul("k1", 1, v))
print("alternative coefficient gives a different field:",
      koszul("k1", 1, v, alt_coefficient=True) != koszul("k1", 1, v))

rep = poincare_suite(seed=0, count=20)
for c in rep.checks:
    print(f"  {c.name:26s} {'pass' if c.passed else 'FAIL'}")
