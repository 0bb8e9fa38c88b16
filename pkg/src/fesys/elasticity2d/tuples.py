"""Edge tuple spaces and edge/vertex quantities.

All edge data are written in the scaled frame of an edge oriented from its
lower to its higher vertex id: ``t = b - a``, ``n = J t``, ``l2 = t . t`` and the
parameter ``lam`` in ``[0, 1]``.  A quantity that involves ``j`` unit vectors and
``i`` unit-speed derivatives is stored multiplied by ``|t|^(i + j)``, which keeps
every trace polynomial in ``lam`` with rational coefficients.  For example
the tangential-normal stress component is stored as ``t^T s n`` and the
tangential derivative of a trace is its ``lam``-derivative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..polyfield import Edge, Field, PiecewiseField, Poly1, Poly2, as_matrix, chi, field_on
from ..ratlin import CoordinateMap, RatMatrix, mpq, nullspace_basis, to_q

Tuple = tuple  # of Poly1


@dataclass(frozen=True)
class TupleSpace:
    """Tuples of edge polynomials with bounded degrees and optional linear constraints.

    ``constraints`` are rows acting on the concatenated padded coefficient
    vector (component by component, low to high degree).
    """

    degrees: tuple[int, ...]
    constraints: tuple[tuple, ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def size(self) -> int:
        return sum(d + 1 for d in self.degrees)

    def index(self, comp: int, power: int) -> int:
        if not 0 <= power <= self.degrees[comp]:
            raise IndexError("power outside the degree bound")
        return sum(d + 1 for d in self.degrees[:comp]) + power

    @property
    def basis(self) -> RatMatrix:
        if "basis" not in self._cache:
            if self.constraints:
                self._cache["basis"] = nullspace_basis(RatMatrix(self.constraints, self.size))
            else:
                self._cache["basis"] = RatMatrix.identity(self.size)
        return self._cache["basis"]

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vector(self, tup: Sequence[Poly1]) -> list:
        if len(tup) != len(self.degrees):
            raise ValueError(f"expected a {len(self.degrees)}-tuple, got {len(tup)}")
        out = []
        for p, d in zip(tup, self.degrees):
            out.extend(p.padded(d + 1))
        return out

    def coords(self, tup: Sequence[Poly1]) -> list:
        """Coordinates in ``basis``; raises ``ValueError`` if the tuple is outside the space."""
        if "cmap" not in self._cache:
            self._cache["cmap"] = CoordinateMap(self.basis)
        return self._cache["cmap"](self.vector(tup))

    def element(self, coords: Sequence) -> Tuple:
        v = self.basis @ [to_q(c) for c in coords]
        out, o = [], 0
        for d in self.degrees:
            out.append(Poly1(v[o:o + d + 1]))
            o += d + 1
        return tuple(out)

    def basis_elements(self) -> list[Tuple]:
        return [self.element([1 if i == j else 0 for i in range(self.dim)]) for j in range(self.dim)]

    def contains(self, tup: Sequence[Poly1]) -> bool:
        try:
            self.coords(tup)
        except ValueError:
            return False
        return True


def top_coefficient_zero(degrees: Sequence[int], comps: Sequence[int], power: int) -> tuple:
    """Constraint rows forcing the ``lam**power`` coefficient of each listed component to vanish."""
    sp = TupleSpace(tuple(degrees))
    rows = []
    for c in comps:
        row = [0] * sp.size
        row[sp.index(c, power)] = 1
        rows.append(tuple(row))
    return tuple(rows)


CHI = chi()


def moment(p: Poly1, w: Poly1 | None = None) -> mpq:
    """``int_0^1 p w dlam`` (``w = 1`` by default)."""
    return (p if w is None else p * w).integrate01()


# -- traces of cell fields ---------------------------------------------------------------


def _dot(v: Sequence, w: Sequence):
    return v[0] * w[0] + v[1] * w[1]


def quad_form(f: Field, v: Sequence, w: Sequence) -> Poly2:
    m = as_matrix(f)
    return sum((m[i][j] * (v[i] * w[j]) for i in range(2) for j in range(2)), Poly2())


def piece_on(f, e: Edge) -> Field:
    return field_on(f, e.a, e.b)


def scalar_c1_trace(f, e: Edge) -> Tuple:
    """``(u, grad u . n)`` of a scalar field."""
    u = piece_on(f, e).comps[0]
    return (e.restrict(u), e.restrict(e.dn(u)))


def normal_stress_trace(f, e: Edge) -> Tuple:
    """``(t^T s n, n^T s n)``."""
    s = piece_on(f, e)
    return (e.restrict(quad_form(s, e.t, e.n)), e.restrict(quad_form(s, e.n, e.n)))


def vector_trace(f, e: Edge, with_dn_normal: bool = True) -> Tuple:
    """``(u.t, u.n, (d_n u).t[, (d_n u).n])`` of a vector field."""
    v = piece_on(f, e)
    u1, u2 = v.comps
    ut = u1 * e.t[0] + u2 * e.t[1]
    un = u1 * e.n[0] + u2 * e.n[1]
    du = (e.dn(u1), e.dn(u2))
    out = [e.restrict(ut), e.restrict(un), e.restrict(_dot(du, e.t))]
    if with_dn_normal:
        out.append(e.restrict(_dot(du, e.n)))
    return tuple(out)


def strain_trace(f, e: Edge, with_nn: bool = True) -> Tuple:
    """``(t^T s t, t^T s n[, n^T s n], d_n(t^T s t))``."""
    s = piece_on(f, e)
    tt = quad_form(s, e.t, e.t)
    out = [e.restrict(tt), e.restrict(quad_form(s, e.t, e.n))]
    if with_nn:
        out.append(e.restrict(quad_form(s, e.n, e.n)))
    out.append(e.restrict(e.dn(tt)))
    return tuple(out)


# -- vertex values ------------------------------------------------------------------------


def point_piece(f, p: Sequence) -> Field:
    return f.pieces[next(i for i, tri in enumerate(f.split.triangles) if tuple(p) in tri)] \
        if isinstance(f, PiecewiseField) else f


def scalar_jet(f, p) -> list:
    u = point_piece(f, p).comps[0]
    return [u(*p), u.diff(0)(*p), u.diff(1)(*p)]


def vector_jet(f, p) -> list:
    """``(u1, u2, G11, G12, G21, G22)`` with ``G_ij = d_j u_i``."""
    u1, u2 = point_piece(f, p).comps
    return [u1(*p), u2(*p), u1.diff(0)(*p), u1.diff(1)(*p), u2.diff(0)(*p), u2.diff(1)(*p)]


def vector_curl_value(f, p) -> list:
    """``(u1, u2, curl(u) / 2)``."""
    u1, u2 = point_piece(f, p).comps
    return [u1(*p), u2(*p), (u2.diff(0)(*p) - u1.diff(1)(*p)) * mpq(1, 2)]


def sym_value(f, p) -> list:
    s = point_piece(f, p)
    return [s.comps[0](*p), s.comps[1](*p), s.comps[3](*p)]
