"""Seeded verification suites for discrete bundles (driven by ``fesys verify``)."""

from __future__ import annotations

import random

from .bundle import (FormalExp, bianchi_terms, chains_between, cochain_complex, covariant_coboundary, curvature,
                     exponential_fitting_bundle, gauge_apply, gauge_check, gauge_cochain_map, inverse,
                     is_flat, local_cohomology, random_bundle, random_flat_bundle, random_invertible,
                     trivializing_gauge)
from .complex import CellComplex, simplex_complex
from .meshes import builtin_mesh, random_triangle
from .poincare import (j_projection, koszul, kosreg_check, omega, strain_p1, strain_p2, stress_p1,
                       stress_p2)
from .polyfield import X1, X2, CTSplit, Field, PiecewiseField, Poly2, dop, random_field
from .ratlin import RatMatrix, cohomology_dims, mpq, qstr
from .report import Report

SUITES = ("bianchi", "gauge", "flat-cochain", "exp-fitting", "poincare")


def builtin_complexes() -> dict[str, CellComplex]:
    return {"triangle": simplex_complex(2), "tetrahedron": simplex_complex(3), "4-simplex": simplex_complex(4),
            "annulus": builtin_mesh("annulus").complex()}


def _sub_seed(rng: random.Random) -> int:
    return rng.getrandbits(63)


def bianchi_suite(seed: int = 0, count: int = 100) -> Report:
    """The covariant coboundary of the curvature vanishes on every 3-cube, for random bundles."""
    rep = Report("bianchi", meta={"seed": seed, "bundles": count})
    rng = random.Random(seed)
    hosts = {"tetrahedron": simplex_complex(3), "4-simplex": simplex_complex(4)}
    cubes = curved = 0
    for i in range(count):
        name = ("tetrahedron", "4-simplex")[i % 2]
        dim = rng.randint(1, 3)
        b = random_bundle(hosts[name], dim, _sub_seed(rng))
        terms = bianchi_terms(b)
        nonzero = [s for s, m in terms.items() if not m.is_zero()]
        residual = max((m.max_abs() for m in terms.values()), default=mpq(0))
        rep.add("residual-zero", not nonzero, "0/1", qstr(residual), cell=f"{name}#{i}", degree=dim)
        cubes += len(terms)
        curved += any(not c.is_zero() for c in curvature(b).values())
    rep.meta["cubes_checked"] = cubes
    # the identity is not vacuous: most random bundles are curved
    rep.add("bundles-curved", curved > 0, True, curved)
    return rep


def flat_cochain_suite(seed: int = 0, bundles_per_complex: int = 3) -> Report:
    """Flat bundles: ``delta delta = 0`` and every cell closure has cohomology ``(fiber, 0, ...)``."""
    rep = Report("flat-cochain", meta={"seed": seed})
    rng = random.Random(seed)
    for name, cx in builtin_complexes().items():
        for j in range(bundles_per_complex):
            dim = 1 + j % 3
            b = random_flat_bundle(cx, dim, _sub_seed(rng))
            flat, _ = is_flat(b)
            rep.add("flat", flat, True, flat, cell=f"{name}#{j}")
            dd = all((covariant_coboundary(b, k + 1) @ covariant_coboundary(b, k)).is_zero()
                     for k in range(cx.dim - 1))
            rep.add("delta-squared-zero", dd, True, dd, cell=f"{name}#{j}")
            bad = []
            for t in cx.cells():
                h = local_cohomology(b, t)
                if h != [dim] + [0] * (len(h) - 1):
                    bad.append([str(t), h])
            rep.add("local-cohomology", not bad, [dim, 0, 0], bad, cell=f"{name}#{j}")
    return rep


def gauge_suite(seed: int = 0, count: int = 10) -> Report:
    """Gauge transformations conjugate transports, curvature and coboundaries."""
    rep = Report("gauge", meta={"seed": seed})
    rng = random.Random(seed)
    for i in range(count):
        cx = simplex_complex(2 + i % 3)
        dim = rng.randint(1, 3)
        b = random_bundle(cx, dim, _sub_seed(rng))
        theta = {c: random_invertible(dim, rng) for c in cx.cells()}
        b2 = gauge_apply(theta, b)
        cell = f"simplex{cx.dim}#{i}"
        rep.add("transport-conjugated", gauge_check(theta, b, b2), True, gauge_check(theta, b, b2), cell=cell)
        c1, c2 = curvature(b), curvature(b2)
        curv_ok = all(c2[(lo, up)] == theta[up] @ c1[(lo, up)] @ inverse(theta[lo]) for lo, up in c1)
        rep.add("curvature-conjugated", curv_ok, True, curv_ok, cell=cell)
        cob_ok = all(covariant_coboundary(b2, k) @ gauge_cochain_map(theta, b, k)
                     == gauge_cochain_map(theta, b, k + 1) @ covariant_coboundary(b, k) for k in range(cx.dim))
        rep.add("coboundary-intertwined", cob_ok, True, cob_ok, cell=cell)
        # flat bundles are trivialized by the composite transports
        fb = random_flat_bundle(cx, dim, _sub_seed(rng))
        top = cx.cells(cx.dim)[0]
        triv = gauge_apply(trivializing_gauge(fb, top), fb)
        ok = all(m == RatMatrix.identity(dim) for m in triv.transport.values())
        rep.add("flat-trivializable", ok, True, ok, cell=cell)
    return rep


def exp_fitting_suite(seed: int = 0, count: int = 5) -> Report:
    """Exponential-fitting line bundles on the annulus are flat, with path-independent transport."""
    rep = Report("exp-fitting", meta={"seed": seed})
    rng = random.Random(seed)
    mesh = builtin_mesh("annulus").complex()
    for i in range(count):
        a = (mpq(rng.randint(-6, 6), rng.randint(1, 4)), mpq(rng.randint(-6, 6), rng.randint(1, 4)))
        eb = exponential_fitting_bundle(mesh, a)
        flat, bad = eb.is_flat()
        rep.add("flat", flat, [], [list(map(str, x)) for x in bad], cell=f"A#{i}")
        cz = eb.curvature_is_zero()
        rep.add("curvature-zero", all(cz.values()), len(cz), sum(cz.values()), cell=f"A#{i}")
        # composite transport to a vertex is exp(A . (x_V - x_T)) whatever the chain
        path_ok = True
        for t in mesh.cells(2):
            xt = mesh.inpoint(t)
            for v in t:
                xv = mesh.inpoint((v,))
                want = sum(ai * (p - q) for ai, p, q in zip(a, xv, xt))
                for ch in chains_between(mesh, t, (v,)):
                    if eb.path(ch) != FormalExp(want):
                        path_ok = False
        rep.add("path-independent", path_ok, True, path_ok, cell=f"A#{i}")
    # zero drift gives the trivial rational bundle, whose cochain cohomology is the mesh's
    triv = exponential_fitting_bundle(mesh, (0, 0)).to_rational()
    rep.expect_equal("zero-drift-cohomology", [1, 1, 0], cohomology_dims(cochain_complex(triv)))
    return rep


def _random_base(rng: random.Random):
    return (mpq(rng.randint(-4, 4), 3), mpq(rng.randint(-4, 4), 3))


def poincare_suite(seed: int = 0, count: int = 50, max_degree: int = 4) -> Report:
    """Null-homotopy identities, sequence property, degree shifts, Koszul agreement, split continuity."""
    rep = Report("poincare", meta={"seed": seed, "inputs": count})
    rng = random.Random(seed)
    names = ["stress/p1-airy", "stress/p2-div+airy-p1", "stress/div-p2", "strain/p1-defo",
             "strain/p2-sven+defo-p1", "strain/sven-p2", "stress/p1-p2", "strain/p1-p2", "degree-shift"]
    bad: dict = {n: [] for n in names}
    for i in range(count):
        base = None if i % 2 == 0 else _random_base(rng)
        deg = lambda: rng.randint(0, max_degree)
        u = random_field(rng, "scalar", deg())
        v = random_field(rng, "sym", deg())
        w = random_field(rng, "vector", deg())
        q = random_field(rng, "scalar", deg())
        if stress_p1(dop("airy", u), base) != u - j_projection("affine_stress", u, base):
            bad["stress/p1-airy"].append(i)
        if stress_p2(dop("div_mat", v), base) + dop("airy", stress_p1(v, base)) != v:
            bad["stress/p2-div+airy-p1"].append(i)
        if dop("div_mat", stress_p2(w, base)) != w:
            bad["stress/div-p2"].append(i)
        if strain_p1(dop("defo", w), base) != w - j_projection("rigid_strain", w, base):
            bad["strain/p1-defo"].append(i)
        if strain_p2(dop("sven", v), base) + dop("defo", strain_p1(v, base)) != v:
            bad["strain/p2-sven+defo-p1"].append(i)
        if dop("sven", strain_p2(q, base)) != q:
            bad["strain/sven-p2"].append(i)
        if not stress_p1(stress_p2(w, base), base).is_zero():
            bad["stress/p1-p2"].append(i)
        if not strain_p1(strain_p2(q, base), base).is_zero():
            bad["strain/p1-p2"].append(i)
        shifts = [(stress_p1(v, base), v, 2), (stress_p2(w, base), w, 1),
                  (strain_p1(v, base), v, 1), (strain_p2(q, base), q, 2)]
        if any(out.degree > inp.degree + k for out, inp, k in shifts):
            bad["degree-shift"].append(i)
    for n in names:
        rep.add(n, not bad[n], [], bad[n])
    kz_bad, alt_differs = [], []
    for r in range(max_degree + 1):
        v = random_field(rng, "sym", r, homogeneous=True)
        q = random_field(rng, "scalar", r, homogeneous=True)
        if koszul("k1", r, v) != strain_p1(v) or koszul("k2", r, q) != strain_p2(q):
            kz_bad.append(r)
        if r >= 1 and not (dop("curl_mat", v)).is_zero():
            alt_differs.append(koszul("k1", r, v, alt_coefficient=True) != strain_p1(v))
    rep.add("koszul-equals-poincare", not kz_bad, [], kz_bad)
    rep.meta["alt_k1_coefficient_disagrees"] = alt_differs
    # continuity of the tangential traces of p2 applied to piecewise constants on a split
    cont_bad = []
    for i in range(10):
        pts = ((0, 0), (1, 0), (0, 1)) if i == 0 else random_triangle(rng)
        split = CTSplit(pts)
        vals = [mpq(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)]
        pw = PiecewiseField(split, [Field.scalar(Poly2.const(c)) for c in vals])
        if not kosreg_check(pw):
            cont_bad.append(i)
    rep.add("split-trace-continuity", not cont_bad, [], cont_bad)
    om = omega()
    ox = Field.vector(om.comps[0] * X1 + om.comps[1] * X2, om.comps[2] * X1 + om.comps[3] * X2)
    rep.add("omega-annihilates-x", ox.is_zero(), True, ox.is_zero())
    return rep


def run_suite(name: str, seed: int = 0) -> Report:
    if name == "bianchi":
        return bianchi_suite(seed)
    if name == "gauge":
        return gauge_suite(seed)
    if name == "flat-cochain":
        return flat_cochain_suite(seed)
    if name == "exp-fitting":
        return exp_fitting_suite(seed)
    if name == "poincare":
        return poincare_suite(seed)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")

