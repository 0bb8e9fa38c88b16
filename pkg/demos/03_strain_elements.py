"""Strain elements, the space W(T), and the omega-based alternative.

The higher-order strain element contains three piecewise fields whose
incompatibility is piecewise constant; they are found by solving a 3x3
system, and the script prints the result on a lopsided triangle.
"""

from fesys.elasticity2d.checks import build_wt, element, wt_alternative_check
from fesys.polyfield import CTSplit, dop
from fesys.ratlin import mpq, qstr

tri = ((0, 0), (3, mpq(1, 2)), (mpq(1, 2), 2))
for name in ("strain-high", "strain-high-min", "strain-low", "strain-low-min"):
    print(f"{name:16s} dims {element(name, tri).dims}")

wt = build_wt(CTSplit(tri))
print("\nW(T) dimension:", wt.dim, "checks pass:", wt.report.ok)
for j, u in enumerate(wt.basis):
    vals = [qstr(p.comps[0].c.get((0, 0), 0)) for p in dop("sven", u).pieces]
    print(f"  sven(u_{j}) on the three subtriangles: {vals}")

alt = wt_alternative_check(tri)
print("\nreplacing W(T) by u*omega keeps the element valid:", alt.ok)
