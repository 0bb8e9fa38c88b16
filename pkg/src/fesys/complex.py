"""Oriented cell complexes.

Simplices are identified by the sorted tuple of their vertex ids and are
oriented by increasing vertex id, so ``o(T, T \\ {v}) = (-1)**position(v)``.

Cubical refinement cells are pairs ``(L, U)`` of simplices with ``L`` a face
of ``U``.  The cube ``S(L, U)`` has one coordinate direction per raised vertex
``i`` in ``D = U \\ L``; its faces are the lower face ``(L, U - i)`` and the
upper face ``(L + i, U)``.  Each cube is oriented transversally: the frame
"orientation of ``L`` followed by the raised directions in increasing order"
is compared with the orientation of ``U``, giving a sign ``eta(L, U)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .ratlin import RatMatrix, mpq, to_q

CellId = Hashable


@dataclass(frozen=True)
class Cell:
    id: CellId
    dim: int
    vertex_ids: tuple
    kind: str = "simplex"  # simplex | cube | polygon


def permutation_sign(seq: Sequence) -> int:
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class CellComplex:
    """Cells of all dimensions with relative orientations on codim-1 incidences."""

    def __init__(self, cells: Iterable[Cell], faces: Mapping[CellId, Sequence[tuple[CellId, int]]],
                 coords: Mapping[int, tuple] | None = None, inpoint_weights: Mapping | None = None,
                 check: bool = True):
        self._cells: dict[CellId, Cell] = {c.id: c for c in cells}
        self._faces: dict[CellId, tuple] = {
            cid: tuple(sorted(((f, int(s)) for f, s in faces.get(cid, ())), key=lambda p: p[0]))
            for cid in self._cells
        }
        self.coords = None if coords is None else {v: tuple(to_q(x) for x in p) for v, p in coords.items()}
        self.inpoint_weights = dict(inpoint_weights or {})
        self._by_dim: dict[int, list] = {}
        for c in self._cells.values():
            self._by_dim.setdefault(c.dim, []).append(c.id)
        for d in self._by_dim:
            self._by_dim[d].sort()
        self._cofaces: dict[CellId, list] = {cid: [] for cid in self._cells}
        for cid, fl in self._faces.items():
            for f, s in fl:
                if f not in self._cofaces:
                    raise ValueError(f"face {f} of {cid} missing from complex (closure violated)")
                self._cofaces[f].append((cid, s))
        self._sub: dict[CellId, frozenset] = {}
        if check:
            self._validate()

    # -- construction ------------------------------------------------------
    @classmethod
    def simplicial(cls, top: Iterable[Sequence[int]], coords: Mapping[int, tuple] | None = None,
                   inpoint_weights: Mapping | None = None) -> "CellComplex":
        simplices: set[tuple] = set()
        for s in top:
            s = tuple(sorted(s))
            if len(set(s)) != len(s):
                raise ValueError(f"repeated vertex in simplex {s}")
            for k in range(1, len(s) + 1):
                simplices.update(combinations(s, k))
        cells = [Cell(s, len(s) - 1, s, "simplex") for s in simplices]
        faces = {}
        for s in simplices:
            if len(s) > 1:
                faces[s] = [(s[:i] + s[i + 1:], (-1) ** i) for i in range(len(s))]
        return cls(cells, faces, coords, inpoint_weights)

    # -- queries -------------------------------------------------------------
    def _validate(self):
        for cid, fl in self._faces.items():
            c = self._cells[cid]
            for f, s in fl:
                if f not in self._cells:
                    raise ValueError(f"face {f} of {cid} missing from complex (closure violated)")
                if self._cells[f].dim != c.dim - 1 or s not in (-1, 1):
                    raise ValueError(f"bad incidence {cid} -> {f}")
        for k in range(1, self.dim):
            prod = self.coboundary_matrix(k) @ self.coboundary_matrix(k - 1)
            if not prod.is_zero():
                raise ValueError(f"incidence numbers violate dd = 0 in degree {k}")

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def __contains__(self, cid) -> bool:
        return cid in self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def cell(self, cid: CellId) -> Cell:
        try:
            return self._cells[cid]
        except KeyError:
            raise KeyError(f"unknown cell {cid!r}") from None

    def cells(self, dim: int | None = None) -> list:
        if dim is None:
            return [c for d in sorted(self._by_dim) for c in self._by_dim[d]]
        return list(self._by_dim.get(dim, []))

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self._by_dim.get(d, [])) for d in range(self.dim + 1))

    def faces(self, cid: CellId) -> tuple:
        """Codimension-1 faces as ``(face id, sign)``, sorted by face id."""
        self.cell(cid)
        return self._faces[cid]

    def boundary_faces(self, cid: CellId) -> list[tuple[Cell, int]]:
        return [(self._cells[f], s) for f, s in self.faces(cid)]

    def cofaces(self, cid: CellId) -> list[tuple[CellId, int]]:
        self.cell(cid)
        return list(self._cofaces[cid])

    def orientation(self, cid: CellId, fid: CellId) -> int:
        for f, s in self.faces(cid):
            if f == fid:
                return s
        return 0

    def subcells(self, cid: CellId) -> frozenset:
        """All cells ``T'`` with ``T' ⊴ T`` (including ``T``)."""
        if cid not in self._sub:
            out = {cid}
            for f, _ in self.faces(cid):
                out |= self.subcells(f)
            self._sub[cid] = frozenset(out)
        return self._sub[cid]

    def is_face(self, small: CellId, big: CellId) -> bool:
        return small in self.subcells(big)

    def codim2_pairs(self) -> list[tuple[CellId, CellId]]:
        out = []
        for d in range(2, self.dim + 1):
            for t in self.cells(d):
                for t2 in sorted({g for f, _ in self.faces(t) for g, _ in self.faces(f)}):
                    out.append((t, t2))
        return out

    def between(self, big: CellId, small: CellId) -> list[CellId]:
        """Cells ``T'`` with ``small ⊲ T' ⊲ big`` one dimension below ``big``."""
        return [f for f, _ in self.faces(big) if small in self.subcells(f)]

    def coboundary_matrix(self, k: int) -> RatMatrix:
        rows = self.cells(k + 1)
        cols = self.cells(k)
        idx = {c: j for j, c in enumerate(cols)}
        entries = {}
        for i, t in enumerate(rows):
            for f, s in self._faces[t]:
                entries[(i, idx[f])] = s
        return RatMatrix.from_sparse(len(rows), len(cols), entries)

    # -- subcomplexes -------------------------------------------------------------
    def subcomplex(self, cell_ids: Iterable[CellId]) -> "CellComplex":
        keep: set = set()
        for c in cell_ids:
            keep |= self.subcells(c)
        return CellComplex([self._cells[c] for c in keep], {c: self._faces[c] for c in keep},
                           self.coords, self.inpoint_weights, check=False)

    def closure_complex(self, cid: CellId) -> "CellComplex":
        return self.subcomplex([cid])

    def boundary_complex(self, cid: CellId) -> "CellComplex":
        return self.subcomplex([f for f, _ in self.faces(cid)])

    def maximal_cells(self) -> list:
        return [c for c in self.cells() if not self._cofaces[c]]

    # -- geometry -----------------------------------------------------------------
    def point(self, v: int) -> tuple:
        if self.coords is None:
            raise ValueError("complex has no coordinates")
        return self.coords[v]

    def inpoint(self, cid: CellId) -> tuple:
        """Weighted barycenter of the vertices (isobarycenter by default)."""
        verts = self.cell(cid).vertex_ids
        w = self.inpoint_weights.get(cid)
        w = [to_q(x) for x in w] if w is not None else [mpq(1)] * len(verts)
        if any(x <= 0 for x in w):
            raise ValueError("inpoint weights must be strictly positive")
        tot = sum(w)
        pts = [self.point(v) for v in verts]
        return tuple(sum(wi * p[a] for wi, p in zip(w, pts)) / tot for a in range(len(pts[0])))


def simplex_complex(n: int) -> CellComplex:
    """Closure of the standard ``n``-simplex on vertices ``0..n``."""
    return CellComplex.simplicial([tuple(range(n + 1))])


def _eta(lower: tuple, upper: tuple) -> int:
    raised = tuple(v for v in upper if v not in lower)
    return permutation_sign(lower + raised)


def cube_orientation(lower: tuple, upper: tuple) -> int:
    """Transverse orientation sign ``eta`` of the cube ``S(lower, upper)``."""
    return _eta(lower, upper)


def cubical_refinement(k: CellComplex) -> CellComplex:
    """Cube cells ``S(L, U)`` for all pairs of simplices ``L ⊴ U``."""
    simplices = [c for c in k.cells() if k.cell(c).kind == "simplex"]
    if len(simplices) != len(k):
        raise ValueError("cubical refinement is implemented for simplicial complexes")
    cells, faces = [], {}
    for u in simplices:
        for lower in sorted(k.subcells(u)):
            cid = (lower, u)
            raised = tuple(v for v in u if v not in lower)
            members = tuple(sorted(w for w in k.subcells(u) if set(lower) <= set(w)))
            cells.append(Cell(cid, len(raised), members, "cube"))
            eta = _eta(lower, u)
            fl = []
            for j, i in enumerate(raised):
                low_face = (lower, tuple(v for v in u if v != i))
                up_face = (tuple(sorted(lower + (i,))), u)
                canon_low, canon_up = (-1) ** (j + 1), (-1) ** j
                fl.append((low_face, eta * _eta(*low_face) * canon_low))
                fl.append((up_face, eta * _eta(*up_face) * canon_up))
            faces[cid] = fl
    return CellComplex(cells, faces, None, None)
