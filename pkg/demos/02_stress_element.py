"""The stress element on a Clough-Tocher split, checked as a finite element system.

Builds the element on the reference triangle, prints its local dimensions and
the counting argument for the symmetric stresses, then runs the full report
(axioms, unisolvence, Stokes identities, exactness, interpolation).
"""

from fesys.elasticity2d.checks import REFERENCE, element, element_report, jm_stress_counts

el = element("jm", REFERENCE)
print("local dimensions (A0, A1, A2):", el.dims)
c = jm_stress_counts(el.split)
print(f"piecewise-linear symmetric fields: {c['ambient']}, normal-jump constraints: {c['constraints']} "
      f"(rank {c['constraint_rank']}), stresses left: {c['dimension']}")

rep = element_report("jm", REFERENCE, probes=10)
groups = {}
for ch in rep.checks:
    g = ch.name.split("/")[0]
    ok, n = groups.get(g, (True, 0))
    groups[g] = (ok and ch.passed, n + 1)
for g, (ok, n) in sorted(groups.items()):
    print(f"  {g:28s} {n:4d} checks  {'pass' if ok else 'FAIL'}")
print("all checks pass:", rep.ok)

small = element("jm-min", REFERENCE)
print("reduced stress element dimensions:", small.dims)
