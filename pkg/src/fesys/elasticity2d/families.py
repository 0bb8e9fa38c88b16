"""The six element families: local spaces, induced edge/vertex data, M-bundles and DoFs.

Stress families resolve the affine functions (``airy`` then ``div``), strain
families resolve the rigid motions (``defo`` then ``sven``).  See
``tuples`` for the scaled edge conventions every formula below is written in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..polyfield import (CTSplit, Edge, Field, PiecewiseField, Poly1, Poly2, X1, X2, ambient_basis, PWSpace,
                         c0_constraints, c1_constraints, curl_vec_q, dn_tt_q, dop, jump_functional,
                         l2_pairing, normal_component_q, rigid_motion, subspace_from_constraints)
from ..ratlin import RatMatrix, column_basis, mpq, nullspace_basis
from .tuples import (CHI, TupleSpace, moment, normal_stress_trace, scalar_c1_trace, scalar_jet, strain_trace,
                     sym_value, vector_curl_value, vector_jet, vector_trace)

HALF = mpq(1, 2)


# -- M-bundles (dual picture) ------------------------------------------------------------


@dataclass(frozen=True)
class MBundle:
    """``M(T)``, ``M(E)``, ``M(V)`` (each of dimension 3) with restrictions and pairings."""

    kind: str
    cell_basis: Callable[[], list]
    s_et: Callable[[Field, Edge], list]
    s_ve: Callable[[Sequence, Edge, int], list]
    pairing_e: Callable[[Sequence, Sequence, Edge], mpq]

    def s_et_matrix(self, e: Edge) -> RatMatrix:
        return RatMatrix.from_columns([self.s_et(phi, e) for phi in self.cell_basis()], 3)

    def s_ve_matrix(self, e: Edge, lam0: int) -> RatMatrix:
        return RatMatrix.from_columns([self.s_ve([int(i == j) for i in range(3)], e, lam0) for j in range(3)], 3)


def _stress_s_et(phi: Field, e: Edge) -> list:
    a = e.restrict(phi.comps[0] * e.t[0] + phi.comps[1] * e.t[1])
    b = e.restrict(phi.comps[0] * e.n[0] + phi.comps[1] * e.n[1])
    if a.degree > 0 or b.degree > 1:
        raise ValueError("not a rigid motion")
    return [a.coeff(0), b.coeff(0), b.coeff(1)]


def _stress_s_ve(mc: Sequence, e: Edge, lam0: int) -> list:
    a, b = mc[0], Poly1([mc[1], mc[2]])
    bv, l2 = b(lam0), e.l2
    return [-b.deriv()(0) / l2, (bv * e.t[0] - a * e.n[0]) / l2, (bv * e.t[1] - a * e.n[1]) / l2]


def _stress_pairing(tup: Sequence[Poly1], mc: Sequence, e: Edge) -> mpq:
    p, q = tup
    return (moment(p) * mc[0] + moment(q, Poly1([mc[1], mc[2]]))) / e.l2


STRESS_M = MBundle("stress", lambda: [rigid_motion(1, 0, 0), rigid_motion(0, 1, 0), rigid_motion(0, 0, 1)],
                   _stress_s_et, _stress_s_ve, _stress_pairing)


def _strain_s_et(phi: Field, e: Edge) -> list:
    p = phi.comps[0]
    r = e.restrict(p)
    psi = e.restrict(e.dn(p))
    if r.degree > 1 or psi.degree > 0:
        raise ValueError("not an affine function")
    return [r.coeff(0), r.coeff(1), psi.coeff(0)]


def _strain_s_ve(mc: Sequence, e: Edge, lam0: int) -> list:
    phi, psi, l2 = Poly1([mc[0], mc[1]]), mc[2], e.l2
    dphi = phi.deriv()(0)
    return [(psi * e.t[0] - dphi * e.n[0]) / l2, (psi * e.t[1] - dphi * e.n[1]) / l2, phi(lam0)]


def _strain_pairing(tup: Sequence[Poly1], mc: Sequence, e: Edge) -> mpq:
    """``l2^-1 int (P psi + Q' phi - Q phi' - K phi)`` for ``(P, Q, [R,] K)``."""
    p, q, k = tup[0], tup[1], tup[-1]
    phi, psi = Poly1([mc[0], mc[1]]), mc[2]
    return (moment(p) * psi + moment(q.deriv(), phi) - moment(q, phi.deriv()) - moment(k, phi)) / e.l2


STRAIN_M = MBundle("strain", lambda: [Field.scalar(Poly2.const(1)), Field.scalar(X1), Field.scalar(X2)],
                   _strain_s_et, _strain_s_ve, _strain_pairing)


# -- families ------------------------------------------------------------------------------

EdgeFunctional = Callable[[Sequence[Poly1], Edge], mpq]
CellFunctional = Callable[[PiecewiseField], mpq]


@dataclass
class DofSpec:
    """Functionals for one index ``k``.

    ``vertex`` holds at most one matrix acting on vertex values, ``edge`` and
    ``cell`` hold ``(label, callable)`` pairs acting on edge tuples and on
    piecewise fields respectively.
    """

    vertex: list
    edge: list
    cell: list


@dataclass
class Family:
    name: str
    kind: str
    ops: tuple[str, str]
    cell_degrees: tuple[int, int, int]
    cell_shapes: tuple[str, str, str]
    cell_spaces: Callable[[CTSplit], tuple[list, list, list]]
    edge_spaces: tuple[TupleSpace, TupleSpace]
    edge_traces: tuple[Callable, Callable]
    d_edge: Callable[[Sequence[Poly1], Edge], tuple]
    vertex_dims: tuple[int, int]
    vertex_from_edge: tuple[Callable | None, Callable | None]
    vertex_traces: tuple[Callable | None, Callable | None]
    d_vertex: RatMatrix
    e_vertex: RatMatrix
    m: MBundle
    dofs: tuple[DofSpec, DofSpec, DofSpec]
    expected_dims: tuple[int, int, int] | None
    parent: str | None = None
    notes: list = field(default_factory=list)


# -- shared pieces ----------------------------------------------------------------------------


def _eye(n: int) -> RatMatrix:
    return RatMatrix.identity(n)


def _m_edge_functionals(m: MBundle) -> list:
    return [(f"M(E)[{j}]", (lambda j: lambda tup, e: m.pairing_e(tup, [int(i == j) for i in range(3)], e))(j))
            for j in range(3)]


def _m_cell_functionals(m: MBundle) -> list:
    return [(f"M(T)[{j}]", (lambda phi: lambda f: l2_pairing(f, phi))(phi))
            for j, phi in enumerate(m.cell_basis())]


def _filter(basis: list, functionals: Sequence[Callable]) -> list:
    return subspace_from_constraints(basis, list(functionals))


def _boundary_edges(split: CTSplit) -> list[Edge]:
    """Edges of the triangle with the split's vertex order (``v0 < v1 < v2`` by id)."""
    v = split.vertices
    return [Edge(v[0], v[1]), Edge(v[0], v[2]), Edge(v[1], v[2])]


def _vec_normal_q(f: Field, e: Edge) -> tuple:
    return (f.comps[0] * e.n[0] + f.comps[1] * e.n[1],)


def independent_span(fields: list, degree: int) -> list:
    if not fields:
        return []
    m = RatMatrix.from_columns([f.to_vector(degree) for f in fields])
    return [fields[j] for j in column_basis(m)]


# -- stress: Johnson-Mercier ----------------------------------------------------------------


def jm_spaces(split: CTSplit) -> tuple[list, list, list]:
    a0 = _filter(ambient_basis(split, "scalar", 3), c1_constraints(3))
    a1 = _filter(ambient_basis(split, "sym", 1), [jump_functional(i, normal_component_q, 1) for i in range(3)])
    a2 = ambient_basis(split, "vector", 0)
    return a0, a1, a2


def _jm_d_edge(tup, e):
    u, v = tup
    return (-v.deriv(), u.deriv().deriv())


def _jm_vertex0(tup, e, lam0):
    u, v = tup
    du, vv = u.deriv()(lam0), v(lam0)
    return [u(lam0), (du * e.t[0] + vv * e.n[0]) / e.l2, (du * e.t[1] + vv * e.n[1]) / e.l2]


_JM_CELL1 = [(f"sym[{i}]", (lambda c: lambda f: l2_pairing(f, c))(c))
             for i, c in enumerate([Field.sym(1, 0, 0), Field.sym(0, 1, 0), Field.sym(0, 0, 1)])]
_JM_CELL2 = [(f"P1[{i}]", (lambda c: lambda f: l2_pairing(f, c))(c))
             for i, c in enumerate([Field.vector(Poly2.const(1), Poly2()), Field.vector(X1, Poly2()),
                                    Field.vector(X2, Poly2()), Field.vector(Poly2(), Poly2.const(1)),
                                    Field.vector(Poly2(), X1), Field.vector(Poly2(), X2)])]


def _jm(name: str, spaces, e0: TupleSpace, e1: TupleSpace, dofs, expected, parent=None) -> Family:
    return Family(
        name=name, kind="stress", ops=("airy", "div_mat"), cell_degrees=(3, 1, 0),
        cell_shapes=("scalar", "sym", "vector"), cell_spaces=spaces, edge_spaces=(e0, e1),
        edge_traces=(scalar_c1_trace, normal_stress_trace), d_edge=_jm_d_edge, vertex_dims=(3, 0),
        vertex_from_edge=(_jm_vertex0, None), vertex_traces=(scalar_jet, None), d_vertex=RatMatrix.zeros(0, 3),
        e_vertex=_eye(3), m=STRESS_M, dofs=dofs, expected_dims=expected, parent=parent)


JM = _jm("jm", jm_spaces, TupleSpace((3, 2)), TupleSpace((1, 1)), (
    DofSpec([_eye(3)], [("int dN chi", lambda tup, e: moment(tup[1].deriv(), CHI))], []),
    DofSpec([], _m_edge_functionals(STRESS_M) + [("int P chi", lambda tup, e: moment(tup[0], CHI))], _JM_CELL1),
    DofSpec([], [], _JM_CELL2)), (12, 15, 6))


def _jm_min_spaces(split: CTSplit) -> tuple[list, list, list]:
    a0, a1, a2 = jm_spaces(split)
    edges = _boundary_edges(split)
    m0 = _filter(a0, [(lambda e: lambda f: [scalar_c1_trace(f, e)[1].coeff(2)])(e) for e in edges])
    m2 = _filter(a2, [jump_functional(i, _vec_normal_q, 0) for i in range(3)])
    # div sigma must land in m2: annihilate m2 inside the coordinates of a2
    s2 = PWSpace(split, "vector", 0, a2)
    sub = RatMatrix.from_columns([s2.coords(f) for f in m2], len(a2))
    ann = nullspace_basis(sub.T).T
    cons = [(lambda e: lambda f: [normal_stress_trace(f, e)[0].coeff(1)])(e) for e in edges]
    cons.append(lambda f: list(ann @ s2.coords(dop("div_mat", f))))
    m1 = _filter(a1, cons)
    return m0, m1, m2


JM_MIN = _jm("jm-min", _jm_min_spaces, TupleSpace((3, 1)), TupleSpace((0, 1)), (
    DofSpec([_eye(3)], [], []),
    DofSpec([], _m_edge_functionals(STRESS_M), []),
    DofSpec([], [], _m_cell_functionals(STRESS_M))), (9, 9, 3), parent="jm")


# -- strain, high regularity ------------------------------------------------------------------


def strain_high_spaces(split: CTSplit) -> tuple[list, list, list]:
    a0 = _filter(ambient_basis(split, "vector", 3), c1_constraints(3))
    a1 = _filter(ambient_basis(split, "sym", 2), c0_constraints(2) + [jump_functional(i, dn_tt_q, 1) for i in range(3)])
    a2 = ambient_basis(split, "scalar", 0)
    return a0, a1, a2


def _sh_d_edge(tup, e):
    u, v, u1, v1 = tup
    return (u.deriv(), (u1 + v.deriv()) * HALF, v1, u1.deriv())


def _sh_vertex0(tup, e, lam0):
    u, v, u1, v1 = (p(lam0) for p in tup)
    du, dv = tup[0].deriv()(lam0), tup[1].deriv()(lam0)
    t, n, l2 = e.t, e.n, e.l2
    vec = [(u * t[i] + v * n[i]) / l2 for i in range(2)]
    gt = [du * t[i] + dv * n[i] for i in range(2)]
    gn = [u1 * t[i] + v1 * n[i] for i in range(2)]
    g = [[(gt[i] * t[j] + gn[i] * n[j]) / (l2 * l2) for j in range(2)] for i in range(2)]
    return vec + [g[0][0], g[0][1], g[1][0], g[1][1]]


def _sh_vertex1(tup, e, lam0):
    p, q, r = (x(lam0) for x in tup[:3])
    t, n, l2 = e.t, e.n, e.l2
    s = [[(p * t[i] * t[j] + q * (t[i] * n[j] + n[i] * t[j]) + r * n[i] * n[j]) / (l2 * l2) for j in range(2)]
         for i in range(2)]
    return [s[0][0], s[0][1], s[1][1]]


def _normal_moment(i: int):
    """``int (s n) . e_i``; in the scaled frame ``s n = (Q t + R n) / l2``."""
    return lambda tup, e: (moment(tup[1]) * e.t[i] + moment(tup[2]) * e.n[i]) / e.l2


_SH_NORMAL_MOMENTS = [("int sn.e1", _normal_moment(0)), ("int sn.e2", _normal_moment(1))]

_SH_DV = RatMatrix([[0, 0, 1, 0, 0, 0], [0, 0, 0, HALF, HALF, 0], [0, 0, 0, 0, 0, 1]])
_SH_EV = RatMatrix([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 0, -HALF, HALF, 0]])


def _strain_high(name, spaces, e0, e1, dofs, expected, parent=None) -> Family:
    return Family(
        name=name, kind="strain", ops=("defo", "sven"), cell_degrees=(3, 2, 0),
        cell_shapes=("vector", "sym", "scalar"), cell_spaces=spaces, edge_spaces=(e0, e1),
        edge_traces=(vector_trace, strain_trace), d_edge=_sh_d_edge, vertex_dims=(6, 3),
        vertex_from_edge=(_sh_vertex0, _sh_vertex1), vertex_traces=(vector_jet, sym_value), d_vertex=_SH_DV,
        e_vertex=_SH_EV, m=STRAIN_M, dofs=dofs, expected_dims=expected, parent=parent)


STRAIN_HIGH = _strain_high("strain-high", strain_high_spaces, TupleSpace((3, 3, 2, 2)), TupleSpace((2, 2, 2, 1)), (
    DofSpec([_eye(6)], [("int U'", lambda tup, e: moment(tup[2])), ("int V'", lambda tup, e: moment(tup[3]))], []),
    DofSpec([_eye(3)], _m_edge_functionals(STRAIN_M) + _SH_NORMAL_MOMENTS, []),
    DofSpec([], [], _m_cell_functionals(STRAIN_M))), (24, 24, 3))


def w_space(split: CTSplit, a1: list | None = None) -> list:
    """Strain-high ``A^1`` fields with zero boundary trace except a constant ``d_n(t^T s t)``."""
    if a1 is None:
        a1 = strain_high_spaces(split)[1]
    cons = []
    for e in _boundary_edges(split):
        def con(f, e=e):
            p, q, r, k = strain_trace(f, e)
            return p.padded(3) + q.padded(3) + r.padded(3) + [k.coeff(1)]
        cons.append(con)
    return _filter(a1, cons)


def _sh_min_spaces(split: CTSplit) -> tuple[list, list, list]:
    a0, a1, a2 = strain_high_spaces(split)

    def con(f, e):
        u, v, u1, v1 = vector_trace(f, e)
        q = (u1 + v.deriv()) * HALF
        return [q.coeff(2), v1.coeff(2)]

    m0 = _filter(a0, [(lambda e: lambda f: con(f, e))(e) for e in _boundary_edges(split)])
    m1 = independent_span([dop("defo", f) for f in m0] + w_space(split, a1), 2)
    return m0, m1, a2


_SH_MIN_E0 = TupleSpace((3, 3, 2, 2), tuple(
    tuple(row) for row in [
        [0] * 4 + [0, 0, 0, 3] + [0, 0, 1] + [0, 0, 0],    # lam^2 coefficient of U' + dV/dlam
        [0] * 4 + [0] * 4 + [0, 0, 0] + [0, 0, 1]]))       # lam^2 coefficient of V'

STRAIN_HIGH_MIN = _strain_high("strain-high-min", _sh_min_spaces, _SH_MIN_E0, TupleSpace((2, 1, 1, 1)), (
    DofSpec([_eye(6)], [], []),
    DofSpec([_eye(3)], _m_edge_functionals(STRAIN_M), []),
    DofSpec([], [], _m_cell_functionals(STRAIN_M))), None, parent="strain-high")


# -- strain, low regularity -------------------------------------------------------------------


def strain_low_spaces(split: CTSplit) -> tuple[list, list, list]:
    a0 = _filter(ambient_basis(split, "vector", 2), c0_constraints(2) + [jump_functional(i, curl_vec_q, 1) for i in range(3)])
    a1 = independent_span([dop("defo", f) for f in a0] + w_space(split), 2)
    a2 = ambient_basis(split, "scalar", 0)
    return a0, a1, a2


def _sl_d_edge(tup, e):
    u, v, u1 = tup
    return (u.deriv(), (u1 + v.deriv()) * HALF, u1.deriv())


def _sl_vertex0(tup, e, lam0):
    u, v, u1 = (p(lam0) for p in tup)
    dv = tup[1].deriv()(lam0)
    t, n, l2 = e.t, e.n, e.l2
    return [(u * t[0] + v * n[0]) / l2, (u * t[1] + v * n[1]) / l2, (dv - u1) * HALF / l2]


def _sl_trace0(f, e):
    return vector_trace(f, e, with_dn_normal=False)


def _sl_trace1(f, e):
    return strain_trace(f, e, with_nn=False)


def _strain_low(name, spaces, e0, e1, dofs, expected, parent=None) -> Family:
    return Family(
        name=name, kind="strain", ops=("defo", "sven"), cell_degrees=(2, 2, 0),
        cell_shapes=("vector", "sym", "scalar"), cell_spaces=spaces, edge_spaces=(e0, e1),
        edge_traces=(_sl_trace0, _sl_trace1), d_edge=_sl_d_edge, vertex_dims=(3, 0),
        vertex_from_edge=(_sl_vertex0, None), vertex_traces=(vector_curl_value, None),
        d_vertex=RatMatrix.zeros(0, 3), e_vertex=_eye(3), m=STRAIN_M, dofs=dofs, expected_dims=expected,
        parent=parent)


_SL_E0_DOFS = [("int dU chi", lambda tup, e: moment(tup[0].deriv(), CHI)),
               ("int Q chi", lambda tup, e: moment((tup[2] + tup[1].deriv()) * HALF, CHI))]
_SL_E1_DOFS = [("int P chi", lambda tup, e: moment(tup[0], CHI)),
               ("int Q chi", lambda tup, e: moment(tup[1], CHI))]

STRAIN_LOW = _strain_low("strain-low", strain_low_spaces, TupleSpace((2, 2, 1)), TupleSpace((1, 1, 0)), (
    DofSpec([_eye(3)], _SL_E0_DOFS, []),
    DofSpec([], _m_edge_functionals(STRAIN_M) + _SL_E1_DOFS, []),
    DofSpec([], [], _m_cell_functionals(STRAIN_M))), (15, 15, 3))


def _sl_min_spaces(split: CTSplit) -> tuple[list, list, list]:
    a0, a1, a2 = strain_low_spaces(split)
    edges = _boundary_edges(split)
    m0 = _filter(a0, [(lambda e: lambda f: [fn(_sl_trace0(f, e), e) for _, fn in _SL_E0_DOFS])(e) for e in edges])
    m1 = _filter(a1, [(lambda e: lambda f: [fn(_sl_trace1(f, e), e) for _, fn in _SL_E1_DOFS])(e) for e in edges])
    return m0, m1, a2


_SL_MIN_E0 = TupleSpace((1, 2, 1), ((0, 0, 0, 0, 2, 0, 1),))   # lam coefficient of U' + dV/dlam

STRAIN_LOW_MIN = _strain_low("strain-low-min", _sl_min_spaces, _SL_MIN_E0, TupleSpace((0, 0, 0)), (
    DofSpec([_eye(3)], [], []),
    DofSpec([], _m_edge_functionals(STRAIN_M), []),
    DofSpec([], [], _m_cell_functionals(STRAIN_M))), (9, 9, 3), parent="strain-low")


FAMILIES = {f.name: f for f in (JM, JM_MIN, STRAIN_HIGH, STRAIN_HIGH_MIN, STRAIN_LOW, STRAIN_LOW_MIN)}


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}") from None
