"""Verification suites for a single element and for meshes."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Sequence

from ..bundle import cochain_complex, path_independence_check
from ..fes import (compatibility_check, de_rham_report, dimension_identity_check, dof_matrix,
                   flabby_check_all, local_complex, local_exactness_check, a0_cohomology_criterion, unisolvence_report,
                   validate_system)
from ..meshes import Mesh, random_triangle
from ..poincare import omega
from ..polyfield import (X1, X2, CTSplit, Edge, Field, PiecewiseField, Poly1, Poly2, PWSpace, ambient_basis,
                         constraint_matrix, dop, jump_functional, l2_pairing, lincomb, normal_component_q, orient2d,
                         random_field, rigid_motion)
from ..ratlin import (RatMatrix, cohomology_dims, hstack, is_invertible, mpq, nullspace_basis, rank, solve)
from ..report import Report
from .families import FAMILIES, Family, get_family, independent_span, strain_low_spaces, w_space
from .system import LocalElement, assemble, build_local, dof_values, local_dofs
from .tuples import moment, piece_on, quad_form, strain_trace

REFERENCE = ((0, 0), (1, 0), (0, 1))


def kernel_fields(family: Family) -> list[Field]:
    """Affine functions (stress families) or rigid motions (strain families)."""
    if family.kind == "stress":
        return [Field.scalar(Poly2.const(1)), Field.scalar(X1), Field.scalar(X2)]
    return [rigid_motion(1, 0, 0), rigid_motion(0, 1, 0), rigid_motion(0, 0, 1)]


def _same_span(a: RatMatrix, b: RatMatrix) -> bool:
    if a.cols == 0 or b.cols == 0:
        return rank(a) == rank(b) == 0 if (a.cols == 0 and b.cols == 0) else rank(a) + rank(b) == 0
    r = rank(a)
    return r == rank(b) == rank(hstack([a, b]))


def _coords(space, fields) -> RatMatrix:
    return RatMatrix.from_columns([space.coords(f) for f in fields], space.dim)


def element(family: Family | str, points: Sequence = REFERENCE, center=None) -> LocalElement:
    return build_local(family, dict(enumerate(points)), center=center)


def outward_sign(e: Edge, opposite) -> int:
    """``+1`` when ``n = J t`` points out of the triangle."""
    return -1 if orient2d(e.a, e.b, opposite) > 0 else 1


def _opposite(el: LocalElement, edge_id: tuple):
    (v,) = [i for i in el.ids if i not in edge_id]
    return el.points[v]


# -- dimensions ---------------------------------------------------------------------------


def jm_stress_counts(split: CTSplit) -> dict:
    """Ambient piecewise-P1 symmetric fields and the normal-jump constraints cutting them down."""
    amb = ambient_basis(split, "sym", 1)
    cons = constraint_matrix(amb, [jump_functional(i, normal_component_q, 1) for i in range(3)])
    return {"ambient": len(amb), "constraints": cons.rows, "constraint_rank": rank(cons),
            "dimension": len(amb) - rank(cons)}


def dimension_report(el: LocalElement) -> Report:
    rep = Report("dimensions", meta={"family": el.family.name})
    exp = el.family.expected_dims
    if exp is not None:
        rep.expect_equal("dims", list(exp), list(el.dims))
    else:
        rep.add("dims-computed", True, None, list(el.dims))
    if el.family.name == "jm":
        counts = jm_stress_counts(el.split)
        rep.expect_equal("ambient", 27, counts["ambient"])
        rep.expect_equal("jump-constraints", 12, counts["constraints"])
        rep.expect_equal("constraint-rank", 12, counts["constraint_rank"])
    for k, es in enumerate(el.family.edge_spaces):
        rep.add("edge-space", True, None, [list(es.degrees), es.dim], degree=k)
    return rep


# -- Stokes ---------------------------------------------------------------------------------


def _boundary_pairings(el: LocalElement, f, mc) -> tuple[mpq, mpq]:
    """``sum_E s_E <trace, s_ET phi>_E`` in the integral form and in the bracket form."""
    fam = el.family
    integral = bracket = mpq(0)
    for eid, e in el.edges.items():
        s_out = outward_sign(e, _opposite(el, eid))
        tup = fam.edge_traces[1](f, e)
        integral += s_out * fam.m.pairing_e(tup, mc(e), e)
        if fam.kind == "strain":
            p, q, k = tup[0], tup[1], tup[-1]
            c = mc(e)
            phi, psi = Poly1([c[0], c[1]]), c[2]
            edge_part = moment(p) * psi - 2 * moment(q, phi.deriv()) - moment(k, phi)
            vertex_part = q(1) * phi(1) - q(0) * phi(0)
            bracket += s_out * (edge_part + vertex_part) / e.l2
        else:
            bracket += s_out * fam.m.pairing_e(tup, mc(e), e)
    return integral, bracket


def stokes_suite(el: LocalElement) -> Report:
    """Integration-by-parts identities against ``M(T)``, plus the system-level Stokes axiom.

    Stress: ``int_T div s . phi = int_dT (s nu) . phi``.  Strain:
    ``int_T sven(s) phi`` equals minus the outward boundary pairing, written
    both with ``Q' phi - Q phi'`` under the integral and with the vertex
    brackets ``[Q phi]`` split off.
    """
    fam = el.family
    rep = Report("stokes", meta={"family": fam.name})
    basis1 = el.spaces[1].basis
    sym_consts = [PiecewiseField.from_global(el.split, Field.sym(*c)) for c in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    sgn = 1 if fam.kind == "stress" else -1
    for label, fields in (("basis", basis1), ("constant", sym_consts)):
        bad = []
        for j, f in enumerate(fields):
            df = dop(fam.ops[1], f)
            for phi in fam.m.cell_basis():
                lhs = l2_pairing(df, phi)
                integral, bracket = _boundary_pairings(el, f, lambda e, phi=phi: fam.m.s_et(phi, e))
                ok = lhs == sgn * integral == sgn * bracket
                if fam.kind == "stress":
                    # geometric form with the outward normal, independent of the edge pairing
                    direct = sum((outward_sign(e, _opposite(el, eid)) * moment(e.restrict(_sn_dot(f, e, phi)))
                                  for eid, e in el.edges.items()), mpq(0))
                    ok = ok and lhs == direct
                if not ok:
                    bad.append(j)
                if label == "constant" and lhs != 0:
                    bad.append(j)
        rep.add(f"integration-by-parts/{label}", not bad, [], sorted(set(bad)))
    rep.add("pairs-tested", True, None, len(basis1) * 3)
    v = validate_system(el.system)
    rep.merge(Report("axiom", [c for c in v.checks if c.name == "stokes"]), prefix="axiom/")
    # evaluation is a chain map on every closed subcomplex of the closure
    cx = el.system.complex
    for c in cx.cells():
        dr, res = de_rham_report(el.system, cx.closure_complex(c))
        rep.add("evaluation-chain-map", res.chain_map, True, res.chain_map, cell=c)
    dr, res = de_rham_report(el.system, cx.boundary_complex(el.ids))
    rep.add("evaluation-chain-map/boundary", res.chain_map, True, res.chain_map)
    return rep


def _sn_dot(f, e: Edge, phi: Field) -> Poly2:
    """``(s n) . phi`` on the piece of ``f`` touching ``e`` (unnormalized ``n``)."""
    s = piece_on(f, e)
    sn = normal_component_q(s, e)
    return sn[0] * phi.comps[0] + sn[1] * phi.comps[1]


# -- M-bundle and kernel of the DoFs ----------------------------------------------------------


def mbundle_report(el: LocalElement) -> Report:
    rep = Report("m-bundle", meta={"family": el.family.name})
    b = el.system.bundle
    rep.add("flat", path_independence_check(b), True, path_independence_check(b))
    inv = all(is_invertible(m) for m in b.transport.values())
    rep.add("restrictions-bijective", inv, True, inv)
    return rep


def kernel_dof_characterization(el: LocalElement) -> Report:
    """``C(S(T), M*)`` is exact above index 0 and its index-0 kernel is the vertex data of ``K``."""
    fam = el.family
    rep = Report("kernel-dofs", meta={"family": fam.name})
    b = el.system.bundle
    cc = cochain_complex(b)
    rep.expect_equal("cohomology", [3, 0, 0], cohomology_dims(cc))
    ker = nullspace_basis(cc.map(0))
    cx = el.system.complex
    cols = []
    for f in kernel_fields(fam):
        col = []
        for v in cx.cells(0):
            col.extend(fam.e_vertex @ fam.vertex_traces[0](f, el.points[v[0]]))
        cols.append(col)
    img = RatMatrix.from_columns(cols, ker.rows)
    rep.add("kernel-equals-image", _same_span(ker, img), 3, [ker.cols, rank(img)])
    rep.add("image-in-kernel", (cc.map(0) @ img).is_zero(), True, (cc.map(0) @ img).is_zero())
    return rep


# -- exactness -------------------------------------------------------------------------------


def exactness_suite(el: LocalElement) -> Report:
    fam = el.family
    s, t = el.system, el.ids
    rep = Report("exactness", meta={"family": fam.name})
    rep.expect_equal("cohomology", [3, 0, 0], cohomology_dims(local_complex(s, t)))
    d0, d1 = s.dmat(t, 0), s.dmat(t, 1)
    kfields = [el.lift(f) for f in kernel_fields(fam)]
    kc = _coords(el.spaces[0], kfields)
    rep.add("kernel-is-" + ("affine" if fam.kind == "stress" else "rigid"), _same_span(nullspace_basis(d0), kc),
            3, [nullspace_basis(d0).cols, rank(kc)])
    rep.expect_equal("last-differential-surjective", el.dims[2], rank(d1))
    n0, n1 = el.dims[0], el.dims[1]
    rep.expect_equal("ker-d1-equals-im-d0", n1 - el.dims[2], n0 - 3)
    rep.merge(local_exactness_check(s, t), prefix="local/")
    return rep


# -- W(T) -----------------------------------------------------------------------------------


@dataclass
class WTResult:
    split: CTSplit
    basis: list            # u_j with sven u_j = v_j
    targets: list          # v_j, the unit piecewise constants
    report: Report

    @property
    def dim(self) -> int:
        return len(self.basis)


def build_wt(split: CTSplit) -> WTResult:
    """Solve ``sven u = v`` inside ``W(T)`` for each piecewise constant ``v``."""
    rep = Report("w(T)")
    w = w_space(split)
    targets = ambient_basis(split, "scalar", 0)
    a2 = PWSpace(split, "scalar", 0, targets)
    sv = RatMatrix.from_columns([a2.coords(dop("sven", f)) for f in w], 3) if w else RatMatrix.zeros(3, 0)
    rep.expect_equal("dim", 3, len(w))
    ok = sv.shape == (3, 3) and is_invertible(sv)
    rep.add("sven-bijective", ok, True, ok)
    if not ok:
        raise ValueError("the determining system for W(T) is singular")
    basis = []
    for j in range(3):
        c = solve(sv, [int(i == j) for i in range(3)])
        basis.append(lincomb(w, c))
    v = split.vertices
    edges = [Edge(v[0], v[1]), Edge(v[0], v[2]), Edge(v[1], v[2])]
    opp = [v[2], v[1], v[0]]
    trace_ok = ident_ok = True
    phis = [Field.scalar(Poly2.const(1)), Field.scalar(X1), Field.scalar(X2)]
    for u, tgt in zip(basis, targets):
        if dop("sven", u) != tgt:
            ident_ok = False
        rhs_terms = []
        for e, o in zip(edges, opp):
            p, q, r, k = strain_trace(u, e)
            if p.degree >= 0 or q.degree >= 0 or r.degree >= 0 or k.degree > 0:
                trace_ok = False
            # c_E: unit outward normal derivative of the unit tangential component
            rhs_terms.append((outward_sign(e, o), k.coeff(0), e))
        for phi in phis:
            lhs = l2_pairing(dop("sven", u), phi)
            rhs = sum((s * c / e.l2 * moment(e.restrict(phi.comps[0])) for s, c, e in rhs_terms), mpq(0))
            if lhs != rhs:
                ident_ok = False
    rep.add("boundary-trace-zero-and-constant-normal-derivative", trace_ok, True, trace_ok)
    rep.add("determining-system", ident_ok, True, ident_ok)
    return WTResult(split, basis, targets, rep)


def omega_fields(split: CTSplit) -> list[PiecewiseField]:
    """``u omega`` for the three unit piecewise constants ``u``, ``omega`` about the split point."""
    w = omega(split.center)
    zero = Field.zero("sym")
    return [PiecewiseField(split, [w if i == j else zero for i in range(3)]) for j in range(3)]


def wt_alternative_check(points: Sequence = REFERENCE, center=None) -> Report:
    """``span{u omega}`` can replace ``W(T)`` in the strain-low element."""
    pts = dict(enumerate(points))
    split = CTSplit([pts[i] for i in range(3)], center)
    rep = Report("w(T)-alternative")
    alt = omega_fields(split)
    w = omega(split.center)
    interior_ok = True
    for i in range(3):
        e, _, _ = split.interior_edge(i)
        wt = [e.restrict(w.comps[0] * e.t[0] + w.comps[1] * e.t[1]),
              e.restrict(w.comps[2] * e.t[0] + w.comps[3] * e.t[1])]
        dn = e.restrict(e.dn(quad_form(w, e.t, e.t)))
        if any(p.degree >= 0 for p in wt) or dn.degree >= 0:
            interior_ok = False
    rep.add("interior-traces-vanish", interior_ok, True, interior_ok)
    prop_ok = True
    factors = []
    for j, f in enumerate(alt):
        sv = dop("sven", f)
        for i, piece in enumerate(sv.pieces):
            c = piece.comps[0]
            if i != j and not c.is_zero():
                prop_ok = False
            if i == j:
                if c.degree > 0 or c.is_zero():
                    prop_ok = False
                factors.append(c.c.get((0, 0), mpq(0)))
    rep.add("sven-proportional", prop_ok, True, factors)

    def spaces(sp: CTSplit):
        a0, _, a2 = strain_low_spaces(sp)
        a1 = independent_span([dop("defo", f) for f in a0] + omega_fields(sp), 2)
        return a0, a1, a2

    fam = replace(FAMILIES["strain-low"], name="strain-low-omega", cell_spaces=spaces)
    el = build_local(fam, pts, center=center)
    rep.expect_equal("dims", [15, 15, 3], list(el.dims))
    rep.merge(validate_system(el.system), prefix="system/")
    rep.merge(compatibility_check(el.system), prefix="system/")
    rep.merge(unisolvence_report(el.system, local_dofs(el)), prefix="system/")
    return rep


# -- interpolation ---------------------------------------------------------------------------


def interpolation_coefficients(el: LocalElement, k: int, f, dofs=None) -> list:
    phi, _ = dof_matrix(el.system, dofs or local_dofs(el), el.ids, k)
    vals = dof_values(el, k, f)
    if len(vals) != phi.rows:
        raise ValueError("probe produced the wrong number of functional values")
    c = solve(phi, vals)
    if c is None:
        raise ValueError("DoF matrix is singular")
    return c


_PROBE_DEGREE = {"stress": (4, 2), "strain": (3, 2)}


def random_probes(family: Family, rng: random.Random, count: int) -> list[tuple[int, Field]]:
    shapes = family.cell_shapes
    degs = _PROBE_DEGREE[family.kind]
    out = []
    for i in range(count):
        k = i % 2
        out.append((k, random_field(rng, shapes[k], degs[k])))
    return out


def commuting_interpolation_check(el: LocalElement, probes: Sequence[tuple[int, object]]) -> Report:
    """``I(d f) = d(I f)`` for each ``(k, f)``; compared in coefficient space."""
    fam = el.family
    rep = Report("commuting-interpolation", meta={"family": fam.name})
    dofs = local_dofs(el)
    bad = []
    for n, (k, f) in enumerate(probes):
        ck = interpolation_coefficients(el, k, f, dofs)
        ck1 = interpolation_coefficients(el, k + 1, dop(fam.ops[k], el.lift(f)), dofs)
        if el.system.dmat(el.ids, k) @ ck != ck1:
            bad.append(n)
    rep.add("I-d-equals-d-I", not bad, [], bad)
    rep.add("probes", True, None, len(probes))
    # the interpolant reproduces elements of the space
    proj_ok = True
    for k in range(3):
        for j, b in enumerate(el.spaces[k].basis):
            if interpolation_coefficients(el, k, b, dofs) != [int(i == j) for i in range(el.dims[k])]:
                proj_ok = False
    rep.add("projection", proj_ok, True, proj_ok)
    return rep


# -- minimal families ----------------------------------------------------------------------


def _chi_zero(el: LocalElement, k: int) -> RatMatrix:
    """Coordinates (in the full space) of the fields whose edge chi-moments vanish."""
    fam = el.family
    funcs = [fn for name, fn in fam.dofs[k].edge if "chi" in name]
    rows = []
    for e in el.edges.values():
        for fn in funcs:
            rows.append([fn(fam.edge_traces[k](b, e), e) for b in el.spaces[k].basis])
    if not rows:
        return RatMatrix.identity(el.dims[k])
    return nullspace_basis(RatMatrix(rows, el.dims[k]))


def minimal_comparison(full: LocalElement, minimal: LocalElement) -> Report:
    """Compare a minimal family with the chi-moment-free subspace of its parent."""
    rep = Report("minimal-vs-chi-zero", meta={"family": minimal.family.name})
    for k in range(3):
        m = _coords(full.spaces[k], minimal.spaces[k].basis)
        z = _chi_zero(full, k)
        if minimal.family.name == "jm-min" and k == 1:
            # additionally require div s to lie in the normal-continuous P0 fields
            m2 = _coords(full.spaces[2], minimal.spaces[2].basis)
            ann = nullspace_basis(m2.T).T
            cons = ann @ full.system.dmat(full.ids, 1) @ z
            z = z @ nullspace_basis(cons)
        if minimal.family.name == "strain-high-min" or (minimal.family.name == "jm-min" and k == 2):
            # no chi-moments to zero here: record inclusion and the computed dimension
            inside = rank(hstack([z, m])) == rank(z)
            rep.add("subspace", inside, True, inside, degree=k)
            rep.add("dim-computed", True, None, m.cols, degree=k)
            continue
        same = _same_span(m, z)
        rep.add("equal", same, m.cols, z.cols, degree=k)
    return rep


# -- bundled reports --------------------------------------------------------------------------


def unisolvence_with_control(el: LocalElement) -> Report:
    """Unisolvence on every subcell plus the duplicated-functional negative control."""
    s = el.system
    dofs = local_dofs(el)
    rep = unisolvence_report(s, dofs)
    for k in range(3):
        m, _ = dof_matrix(s, dofs, el.ids, k)
        if m.rows < 2:
            continue
        killed = True
        for key, mat in dofs.funcs.items():
            if key[1] != k or mat.rows == 0:
                continue
            # duplicate a functional of this cell onto another one of the same cell
            if mat.rows >= 2:
                mut = dofs.with_functional(key[0], k, 1, mat.row(0))
            else:
                continue
            mm, _ = dof_matrix(s, mut, el.ids, k)
            if is_invertible(mm):
                killed = False
        rep.add("duplicate-makes-singular", killed, True, killed, degree=k)
    return rep


def element_report(family: Family | str, points: Sequence = REFERENCE, center=None, seed: int = 0,
                   probes: int = 20, label: str = "") -> Report:
    fam = get_family(family) if isinstance(family, str) else family
    el = element(fam, points, center)
    rep = Report("element", meta={"family": fam.name, "seed": seed, "dims": list(el.dims),
                                  "triangle": [list(p) for p in points]})
    rep.merge(dimension_report(el), prefix="dimensions/")
    rep.merge(validate_system(el.system), prefix="system/")
    rep.merge(flabby_check_all(el.system), prefix="flabby/")
    rep.merge(compatibility_check(el.system), prefix="compatibility/")
    crit = a0_cohomology_criterion(el.system, el.ids)
    rep.add("compatibility/criterion-agrees", crit == compatibility_check(el.system).ok, True, crit)
    rep.merge(unisolvence_with_control(el), prefix="unisolvence/")
    rep.merge(stokes_suite(el), prefix="stokes/")
    rep.merge(mbundle_report(el), prefix="m-bundle/")
    rep.merge(kernel_dof_characterization(el), prefix="kernel-dofs/")
    rep.merge(exactness_suite(el), prefix="exactness/")
    rep.merge(commuting_interpolation_check(el, random_probes(fam, random.Random(seed), probes)),
              prefix="interpolation/")
    if fam.parent is not None:
        rep.merge(minimal_comparison(element(fam.parent, points, center), el), prefix="minimal/")
    if fam.name == "strain-high":
        rep.merge(build_wt(el.split).report, prefix="w(T)/")
        rep.merge(wt_alternative_check(points, center), prefix="w(T)/")
    return rep


def mesh_report(family: Family | str, mesh: Mesh) -> Report:
    """Global assembly on a mesh: axioms, dimension identity, and the de Rham comparison."""
    fam = get_family(family) if isinstance(family, str) else family
    g = assemble(fam, mesh.complex())
    rep = Report("cohomology", meta={"family": fam.name, "mesh": mesh.name})
    rep.merge(validate_system(g.system), prefix="system/")
    for k in range(3):
        rep.merge(dimension_identity_check(g.system, k), prefix=f"dimension-identity/{k}/")
    dr, res = de_rham_report(g.system)
    rep.merge(dr, prefix="de-rham/")
    rep.meta["fe_cohomology"] = res.fe_dims
    rep.meta["cochain_cohomology"] = res.cochain_dims
    return rep


def random_triangles(seed: int, count: int) -> list[tuple]:
    rng = random.Random(seed)
    return [random_triangle(rng) for _ in range(count)]
