"""Assemble a family into an ``FESystem`` on a triangle's closure or on a mesh."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..bundle import DiscreteBundle
from ..complex import CellComplex
from ..fes import DofSystem, FESystem
from ..polyfield import CTSplit, Edge, PiecewiseField, PWSpace, dop, l2_pairing, orient2d
from ..ratlin import RatMatrix, mpq, to_q
from .families import Family, get_family

Point = tuple


@dataclass
class LocalElement:
    """One family on one triangle: the cell spaces, the closure system and the pieces used to build it."""

    family: Family
    ids: tuple[int, int, int]
    points: dict
    split: CTSplit
    spaces: list[PWSpace]
    system: FESystem
    edges: dict = field(default_factory=dict)
    sign: int = 1

    @property
    def cell(self) -> tuple:
        return self.ids

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(sp.dim for sp in self.spaces)

    def vertex_point(self, v: int) -> Point:
        return self.points[v]

    def lift(self, f) -> PiecewiseField:
        """View a global polynomial field as a piecewise field on this element's split."""
        return f if isinstance(f, PiecewiseField) else PiecewiseField.from_global(self.split, f)


def orientation_sign(points: Sequence[Point]) -> int:
    """``+1`` when the points, taken in the given order, run counter-clockwise."""
    return 1 if orient2d(*points) > 0 else -1


def cell_sign(family: Family, points: Sequence[Point]) -> int:
    """Sign of the top-cell evaluation.

    The edge pairings fix it: stress families need ``-1`` and strain families
    ``+1`` on a triangle whose sorted vertices run counter-clockwise.
    """
    eps = orientation_sign(points)
    return -eps if family.kind == "stress" else eps


def _columns(vectors: Sequence[Sequence], rows: int) -> RatMatrix:
    return RatMatrix.from_columns([list(v) for v in vectors], rows)


def _closure(ids: Sequence[int], points: Mapping[int, Point]) -> CellComplex:
    return CellComplex.simplicial([tuple(ids)], dict(points))


def build_local(family: Family | str, points: Mapping[int, Point], ids: Sequence[int] | None = None,
                center: Point | None = None) -> LocalElement:
    """Build ``family`` on the triangle with vertex ids ``ids`` (default: the keys of ``points``)."""
    fam = get_family(family) if isinstance(family, str) else family
    ids = tuple(sorted(ids if ids is not None else points))
    if len(ids) != 3:
        raise ValueError("a triangle needs three vertex ids")
    pts = {v: tuple(to_q(x) for x in points[v]) for v in ids}
    split = CTSplit([pts[v] for v in ids], center)
    bases = fam.cell_spaces(split)
    spaces = [PWSpace(split, fam.cell_shapes[k], fam.cell_degrees[k], bases[k]) for k in range(3)]
    cx = _closure(ids, pts)
    T = ids
    dims: dict = {}
    d: dict = {}
    r: dict = {}
    e: dict = {}
    fiber: dict = {}
    transport: dict = {}

    # triangle
    for k in range(3):
        dims[(T, k)] = spaces[k].dim
    for k in range(2):
        img = [dop(fam.ops[k], b) for b in spaces[k].basis]
        d[(T, k)] = _columns([spaces[k + 1].coords(g) for g in img], spaces[k + 1].dim)
    sign = cell_sign(fam, [pts[v] for v in ids])
    mbasis = fam.m.cell_basis()
    e[T] = RatMatrix([[sign * _pair(b, phi) for b in spaces[2].basis] for phi in mbasis], spaces[2].dim)
    fiber[T] = 3

    # edges
    edges = {}
    for a, b in ((ids[0], ids[1]), (ids[0], ids[2]), (ids[1], ids[2])):
        E = (a, b)
        edge = Edge(pts[a], pts[b])
        edges[E] = edge
        e0, e1 = fam.edge_spaces
        dims[(E, 0)], dims[(E, 1)] = e0.dim, e1.dim
        d[(E, 0)] = _columns([e1.coords(fam.d_edge(tup, edge)) for tup in e0.basis_elements()], e1.dim)
        for k, es in enumerate((e0, e1)):
            trace = fam.edge_traces[k]
            r[(E, T, k)] = _columns([es.coords(trace(f, edge)) for f in spaces[k].basis], es.dim)
        r[(E, T, 2)] = RatMatrix.zeros(0, spaces[2].dim)
        units = [[int(i == j) for i in range(3)] for j in range(3)]
        e[E] = RatMatrix([[fam.m.pairing_e(tup, mc, edge) for tup in e1.basis_elements()] for mc in units], e1.dim)
        fiber[E] = 3
        transport[(T, E)] = fam.m.s_et_matrix(edge).T

        # vertices of the edge
        for lam0, v in ((0, a), (1, b)):
            V = (v,)
            for k in range(2):
                vd = fam.vertex_dims[k]
                dims[(V, k)] = vd
                if vd:
                    es = fam.edge_spaces[k]
                    r[(V, E, k)] = _columns([fam.vertex_from_edge[k](tup, edge, lam0) for tup in es.basis_elements()], vd)
                else:
                    r[(V, E, k)] = RatMatrix.zeros(0, dims[(E, k)])
            if fam.vertex_dims[1]:
                d[(V, 0)] = fam.d_vertex
            e[V] = fam.e_vertex
            fiber[V] = 3
            transport[(E, V)] = fam.m.s_ve_matrix(edge, lam0).T

    bundle = DiscreteBundle(cx, fiber, transport)
    system = FESystem(cx, bundle, 2, dims, d, r, e, label=fam.name)
    return LocalElement(fam, ids, pts, split, spaces, system, edges, sign)


def _pair(f, phi) -> mpq:
    return l2_pairing(f, phi)


# -- degrees of freedom ---------------------------------------------------------------------


def local_dofs(el: LocalElement) -> DofSystem:
    """The family's functionals as row matrices on the closure of ``el``."""
    fam = el.family
    funcs: dict = {}
    labels: dict = {}
    T = el.ids
    for k in range(3):
        spec = fam.dofs[k]
        if spec.vertex:
            for v in T:
                funcs[((v,), k)] = spec.vertex[0]
                labels[((v,), k)] = [f"vertex[{i}]" for i in range(spec.vertex[0].rows)]
        if spec.edge:
            es = fam.edge_spaces[k]
            for E, edge in el.edges.items():
                funcs[(E, k)] = RatMatrix([[fn(tup, edge) for tup in es.basis_elements()] for _, fn in spec.edge],
                                          es.dim)
                labels[(E, k)] = [name for name, _ in spec.edge]
        if spec.cell:
            funcs[(T, k)] = RatMatrix([[fn(b) for b in el.spaces[k].basis] for _, fn in spec.cell], el.spaces[k].dim)
            labels[(T, k)] = [name for name, _ in spec.cell]
    return DofSystem(funcs, labels)


def dof_values(el: LocalElement, k: int, f) -> list[mpq]:
    """Apply the degree-``k`` functionals directly to a field, in the ``dof_matrix`` order."""
    fam = el.family
    spec = fam.dofs[k]
    f = el.lift(f)
    out: list[mpq] = []
    cx = el.system.complex
    for c in sorted(cx.subcells(el.ids), key=lambda c: (cx.cell(c).dim, c)):
        dim = cx.cell(c).dim
        if dim == 0 and spec.vertex:
            out.extend(spec.vertex[0] @ fam.vertex_traces[k](f, el.points[c[0]]))
        elif dim == 1 and spec.edge:
            edge = el.edges[c]
            tup = fam.edge_traces[k](f, edge)
            out.extend(fn(tup, edge) for _, fn in spec.edge)
        elif dim == 2 and spec.cell:
            out.extend(fn(f) for _, fn in spec.cell)
    return out


# -- meshes -------------------------------------------------------------------------------


@dataclass
class GlobalSystem:
    family: Family
    complex: CellComplex
    system: FESystem
    elements: dict

    def dofs(self) -> DofSystem:
        funcs: dict = {}
        labels: dict = {}
        for el in self.elements.values():
            ds = local_dofs(el)
            funcs.update(ds.funcs)
            labels.update(ds.labels)
        return DofSystem(funcs, labels)


def assemble(family: Family | str, cx: CellComplex, centers: Mapping | None = None) -> GlobalSystem:
    """Build the family on every triangle of ``cx`` and merge the closure systems."""
    fam = get_family(family) if isinstance(family, str) else family
    elements = {}
    for t in cx.cells(2):
        pts = {v: cx.point(v) for v in t}
        elements[t] = build_local(fam, pts, t, (centers or {}).get(t))
    fiber: dict = {}
    transport: dict = {}
    for el in elements.values():
        fiber.update(el.system.bundle.fiber)
        transport.update(el.system.bundle.transport)
    bundle = DiscreteBundle(cx, fiber, transport)
    system = FESystem.merge(cx, bundle, [el.system for el in elements.values()], label=fam.name)
    return GlobalSystem(fam, cx, system, elements)
