"""Finite element systems over a cell complex.

A system stores, for every cell ``T`` and index ``k``, a coordinate space
``A^k(T)`` of dimension ``dims[(T, k)]`` together with

* differentials ``d[(T, k)]: A^k(T) -> A^(k+1)(T)``,
* restrictions ``r[(F, T, k)]: A^k(T) -> A^k(F)`` for codimension-one faces ``F``
  (restrictions to smaller faces are composites along a chain of faces),
* evaluations ``e[T]: A^(dim T)(T) -> L(T)`` into the fibers of a bundle ``L``.

Everything is a rational matrix, so each axiom becomes a finite identity that
is checked exactly.  Spaces on a subcomplex are obtained by gluing, i.e. as
the inverse limit of the local spaces, and are never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .bundle import DiscreteBundle, canonical_transport, chains_between, cochain_complex, covariant_coboundary, trivial_bundle
from .complex import Cell, CellComplex
from .ratlin import (ChainMapError, CoordinateMap, MatrixComplex, RatMatrix, block_diag, cohomology_dims,
                     image_basis, induced_cohomology_iso, is_invertible, mpq, nullspace_basis, rank, vstack)
from .report import Report

CellId = Hashable


class FESystem:
    """Local spaces, differentials, restrictions and evaluations on a complex."""

    def __init__(self, complex: CellComplex, bundle: DiscreteBundle, top: int,
                 dims: Mapping[tuple, int], d: Mapping[tuple, RatMatrix], r: Mapping[tuple, RatMatrix],
                 e: Mapping[CellId, RatMatrix], gram: Mapping[tuple, RatMatrix] | None = None,
                 label: str = ""):
        self.complex = complex
        self.bundle = bundle
        self.top = top
        self.dims = {key: int(v) for key, v in dims.items()}
        self.d = dict(d)
        self.r = dict(r)
        self.e = dict(e)
        self.gram = dict(gram or {})
        self.label = label
        self._rcache: dict[tuple, RatMatrix] = {}
        for c in complex.cells():
            if c not in self.e:
                self.e[c] = RatMatrix.zeros(bundle.fiber[c], self.dim(c, complex.cell(c).dim))

    # -- accessors ---------------------------------------------------------
    def dim(self, cell: CellId, k: int) -> int:
        return self.dims.get((cell, k), 0)

    def dims_of(self, cell: CellId) -> tuple[int, ...]:
        return tuple(self.dim(cell, k) for k in range(self.top + 1))

    def dmat(self, cell: CellId, k: int) -> RatMatrix:
        m = self.d.get((cell, k))
        return m if m is not None else RatMatrix.zeros(self.dim(cell, k + 1), self.dim(cell, k))

    def rface(self, face: CellId, cell: CellId, k: int) -> RatMatrix:
        m = self.r.get((face, cell, k))
        return m if m is not None else RatMatrix.zeros(self.dim(face, k), self.dim(cell, k))

    def rmat(self, small: CellId, big: CellId, k: int, chain: Sequence[CellId] | None = None) -> RatMatrix:
        """Restriction ``A^k(big) -> A^k(small)``, composed along ``chain`` (default: the first chain)."""
        if small == big:
            return RatMatrix.identity(self.dim(big, k))
        if chain is None:
            key = (small, big, k)
            if key not in self._rcache:
                chains = chains_between(self.complex, big, small)
                if not chains:
                    raise ValueError(f"{small} is not a face of {big}")
                self._rcache[key] = self.rmat(small, big, k, chains[0])
            return self._rcache[key]
        out = RatMatrix.identity(self.dim(big, k))
        for lo, hi in zip(reversed(chain[:-1]), reversed(chain[1:])):
            out = self.rface(lo, hi, k) @ out
        return out

    def emat(self, cell: CellId) -> RatMatrix:
        return self.e[cell]

    def cells(self) -> list:
        return self.complex.cells()

    def replace(self, **kw) -> "FESystem":
        args = dict(complex=self.complex, bundle=self.bundle, top=self.top, dims=self.dims, d=self.d,
                    r=self.r, e=self.e, gram=self.gram, label=self.label)
        args.update(kw)
        return FESystem(**args)

    @classmethod
    def merge(cls, complex: CellComplex, bundle: DiscreteBundle, systems: Iterable["FESystem"],
              label: str = "") -> "FESystem":
        """Union of systems built on overlapping closures; shared data must agree exactly."""
        systems = list(systems)
        top = max((s.top for s in systems), default=complex.dim)
        dims: dict = {}
        d: dict = {}
        r: dict = {}
        e: dict = {}
        gram: dict = {}
        for s in systems:
            for name, src, dst in (("dims", s.dims, dims), ("d", s.d, d), ("r", s.r, r), ("gram", s.gram, gram)):
                for key, v in src.items():
                    if key in dst and dst[key] != v:
                        raise ValueError(f"systems disagree on {name}{key}")
                    dst[key] = v
            for c, v in s.e.items():
                if c in e and e[c] != v:
                    raise ValueError(f"systems disagree on the evaluation at {c}")
                e[c] = v
        return cls(complex, bundle, top, dims, d, r, e, gram, label)


# ----------------------------------------------------------------------------
# axioms


def _bad_columns(m: RatMatrix) -> list[int]:
    return [j for j in range(m.cols) if any(m[i, j] for i in range(m.rows))]


def validate_system(s: FESystem) -> Report:
    """Shapes, ``rd = dr``, path independence of restrictions, ``dd = 0`` and Stokes."""
    rep = Report("validate")
    cx, b = s.complex, s.bundle
    shape_bad, rd_bad, comp_bad, dd_bad, stokes_bad = [], [], [], [], []
    for t in cx.cells():
        n = cx.cell(t).dim
        for k in range(s.top + 1):
            if k < s.top and s.dmat(t, k).shape != (s.dim(t, k + 1), s.dim(t, k)):
                shape_bad.append((t, k, "d"))
            for f, _ in cx.faces(t):
                if s.rface(f, t, k).shape != (s.dim(f, k), s.dim(t, k)):
                    shape_bad.append((t, k, f"r->{f}"))
        if s.emat(t).shape != (b.fiber[t], s.dim(t, n)):
            shape_bad.append((t, n, "e"))
    rep.add("shapes", not shape_bad, [], shape_bad)
    if shape_bad:
        return rep
    for t in cx.cells():
        n = cx.cell(t).dim
        for k in range(s.top):
            dd = s.dmat(t, k + 1) @ s.dmat(t, k) if k + 1 < s.top else None
            if dd is not None and not dd.is_zero():
                dd_bad.append((t, k, _bad_columns(dd)))
            for f, _ in cx.faces(t):
                diff = s.rface(f, t, k + 1) @ s.dmat(t, k) - s.dmat(f, k) @ s.rface(f, t, k)
                if not diff.is_zero():
                    rd_bad.append((t, f, k, _bad_columns(diff)))
        for k in range(s.top + 1):
            for small in cx.subcells(t):
                if cx.cell(small).dim > n - 2:
                    continue
                chains = chains_between(cx, t, small)
                mats = [s.rmat(small, t, k, ch) for ch in chains]
                if any(m != mats[0] for m in mats[1:]):
                    comp_bad.append((t, small, k))
        if n >= 1 and n - 1 <= s.top:
            k = n - 1
            lhs = s.emat(t) @ s.dmat(t, k) if n <= s.top else RatMatrix.zeros(b.fiber[t], s.dim(t, k))
            rhs = RatMatrix.zeros(b.fiber[t], s.dim(t, k))
            for f, o in cx.faces(t):
                term = b.t(t, f) @ s.emat(f) @ s.rface(f, t, k)
                rhs = rhs + (term if o == 1 else -term)
            diff = lhs - rhs
            if not diff.is_zero():
                stokes_bad.append((t, k, _bad_columns(diff)))
    rep.add("dd=0", not dd_bad, [], dd_bad)
    rep.add("rd=dr", not rd_bad, [], rd_bad)
    rep.add("restriction-composition", not comp_bad, [], comp_bad)
    rep.add("stokes", not stokes_bad, [], stokes_bad)
    return rep


# ----------------------------------------------------------------------------
# gluing


@dataclass
class Glued:
    """Basis of ``A^k`` on a subcomplex, in coordinates of its maximal cells."""

    system: FESystem
    sub: CellComplex
    k: int
    max_cells: list
    offsets: dict
    size: int
    basis: RatMatrix
    _owner: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.basis.cols

    def owner(self, cell: CellId) -> CellId:
        if cell not in self._owner:
            self._owner[cell] = next(t for t in self.max_cells if cell in self.sub.subcells(t))
        return self._owner[cell]

    def block(self, t: CellId) -> RatMatrix:
        """Rows of the basis belonging to the maximal cell ``t``."""
        o = self.offsets[t]
        return self.basis.submatrix(range(o, o + self.system.dim(t, self.k)), None)

    def component(self, cell: CellId) -> RatMatrix:
        """The map ``glued coordinates -> A^k(cell)``."""
        t = self.owner(cell)
        return self.system.rmat(cell, t, self.k) @ self.block(t)

    def coordinates(self, stacked: RatMatrix) -> RatMatrix:
        return CoordinateMap(self.basis).matrix(stacked)


def glue(s: FESystem, k: int, sub: CellComplex | None = None) -> Glued:
    """Inverse limit of ``A^k`` over ``sub``: families ``(u_T)`` with ``u_S = r_ST u_T``.

    Unknowns are the coefficients on the maximal cells; a cell shared by
    several maximal cells forces their restrictions to it to agree.
    """
    cx = sub if sub is not None else s.complex
    maxc = cx.maximal_cells()
    offsets, n = {}, 0
    for t in maxc:
        offsets[t] = n
        n += s.dim(t, k)
    rows: list[list] = []
    for c in cx.cells():
        owners = [t for t in maxc if c in cx.subcells(t)]
        if len(owners) < 2 or s.dim(c, k) == 0:
            continue
        first = owners[0]
        r0 = s.rmat(c, first, k)
        for t in owners[1:]:
            rt = s.rmat(c, t, k)
            for i in range(s.dim(c, k)):
                row = [mpq(0)] * n
                for j in range(r0.cols):
                    row[offsets[first] + j] += r0[i, j]
                for j in range(rt.cols):
                    row[offsets[t] + j] -= rt[i, j]
                rows.append(row)
    basis = nullspace_basis(RatMatrix(rows, n)) if rows else RatMatrix.identity(n)
    return Glued(s, cx, k, maxc, offsets, n, basis)


def global_complex(s: FESystem, sub: CellComplex | None = None) -> tuple[MatrixComplex, list[Glued]]:
    """The complex ``A^0(sub) -> A^1(sub) -> ...`` in glued bases."""
    gl = [glue(s, k, sub) for k in range(s.top + 1)]
    maps = []
    for k in range(s.top):
        src, dst = gl[k], gl[k + 1]
        dblock = block_diag([s.dmat(t, k) for t in src.max_cells]) if src.max_cells else RatMatrix.zeros(0, 0)
        img = dblock @ src.basis if src.size else RatMatrix.zeros(dst.size, src.dim)
        maps.append(dst.coordinates(img) if dst.dim else RatMatrix.zeros(0, src.dim))
    return MatrixComplex([g.dim for g in gl], maps), gl


def _padded_cochains(b: DiscreteBundle, top: int) -> MatrixComplex:
    cc = cochain_complex(b)
    dims = [cc.dims[k] if k < len(cc.dims) else 0 for k in range(top + 1)]
    return MatrixComplex(dims, [cc.map(k) if k < len(cc.dims) - 1 else RatMatrix.zeros(dims[k + 1], dims[k])
                                for k in range(top)])


def evaluation_maps(s: FESystem, gl: Sequence[Glued]) -> list[RatMatrix]:
    """De Rham map: ``u -> (e_S u_S)_S`` over the ``k``-cells ``S``."""
    out = []
    for k, g in enumerate(gl):
        cells = g.sub.cells(k)
        if not cells:
            out.append(RatMatrix.zeros(0, g.dim))
            continue
        out.append(vstack([s.emat(c) @ g.component(c) for c in cells], g.dim))
    return out


@dataclass
class DeRhamResult:
    fe_dims: list[int]
    cochain_dims: list[int]
    chain_map: bool
    verdicts: list

    @property
    def isomorphic(self) -> bool:
        return self.chain_map and all(v.bijective for v in self.verdicts)


def de_rham_verify(s: FESystem, sub: CellComplex | None = None) -> DeRhamResult:
    """Compare the glued complex with cochains in ``L`` through the evaluation map."""
    cx = sub if sub is not None else s.complex
    a, gl = global_complex(s, cx)
    c = _padded_cochains(s.bundle.restrict(cx), s.top)
    ev = evaluation_maps(s, gl)
    try:
        verdicts = induced_cohomology_iso(a, c, ev)
        ok = True
    except ChainMapError:
        verdicts, ok = [], False
    return DeRhamResult(cohomology_dims(a), cohomology_dims(c), ok, verdicts)


def de_rham_report(s: FESystem, sub: CellComplex | None = None, name: str = "de-rham") -> tuple[Report, DeRhamResult]:
    res = de_rham_verify(s, sub)
    rep = Report(name)
    rep.add("evaluation-chain-map", res.chain_map, True, res.chain_map)
    rep.expect_equal("cohomology-dims-agree", res.cochain_dims, res.fe_dims)
    for v in res.verdicts:
        rep.add("induced-iso", v.bijective, [v.dim_dst, v.dim_dst], [v.dim_src, v.induced_rank], degree=v.degree)
    return rep, res


# ----------------------------------------------------------------------------
# flabbiness and dimension counts


def a0_basis(s: FESystem, t: CellId, k: int) -> RatMatrix:
    """``A^k_0(T)``: the kernel of all restrictions to proper faces."""
    faces = s.complex.faces(t)
    if not faces:
        return RatMatrix.identity(s.dim(t, k))
    return nullspace_basis(vstack([s.rface(f, t, k) for f, _ in faces], s.dim(t, k)))


def flabby_check(s: FESystem, t: CellId, k: int | None = None) -> bool:
    """Surjectivity of ``A^k(T) -> A^k(dT)``, with ``A^k(dT)`` glued on the boundary."""
    ks = range(s.top + 1) if k is None else [k]
    if not s.complex.faces(t):
        return True
    bd = s.complex.boundary_complex(t)
    for kk in ks:
        g = glue(s, kk, bd)
        stacked = vstack([s.rmat(m, t, kk) for m in g.max_cells], s.dim(t, kk))
        if rank(stacked) != g.dim:
            return False
    return True


def flabby_check_all(s: FESystem) -> Report:
    rep = Report("flabby")
    for t in s.complex.cells():
        for k in range(s.top + 1):
            rep.add("extension", flabby_check(s, t, k), True, None, cell=t, degree=k)
    return rep


def dimension_identity_check(s: FESystem, k: int, sub: CellComplex | None = None) -> Report:
    """``dim A^k(sub) <= sum_T dim A^k_0(T)``, with equality exactly when extensions exist."""
    cx = sub if sub is not None else s.complex
    glued = glue(s, k, cx).dim
    total = sum(a0_basis(s, t, k).cols for t in cx.cells())
    flabby = all(flabby_check(s, t, k) for t in cx.cells())
    rep = Report("dimension-identity")
    rep.add("bound", glued <= total, total, glued, degree=k)
    rep.add("equality-iff-flabby", (glued == total) == flabby, flabby, glued == total, degree=k)
    rep.meta.update({"glued": glued, "sum_a0": total, "flabby": flabby})
    return rep


# ----------------------------------------------------------------------------
# exactness and compatibility


def local_complex(s: FESystem, t: CellId) -> MatrixComplex:
    return MatrixComplex(list(s.dims_of(t)), [s.dmat(t, k) for k in range(s.top)])


def j_map(s: FESystem, t: CellId, vertex: CellId | None = None) -> RatMatrix:
    """``K(T) -> L(T)``: restrict to a vertex, evaluate there, transport up to ``T``.

    Columns are indexed by the basis of ``ker d^0_T`` returned by ``nullspace_basis``.
    """
    cx = s.complex
    if vertex is None:
        vertex = sorted(c for c in cx.subcells(t) if cx.cell(c).dim == 0)[0]
    kern = nullspace_basis(s.dmat(t, 0))
    tr = canonical_transport(s.bundle, t, vertex)
    return tr @ s.emat(vertex) @ s.rmat(vertex, t, 0) @ kern


def local_exactness_check(s: FESystem, t: CellId) -> Report:
    rep = Report("local-exactness")
    h = cohomology_dims(local_complex(s, t))
    rep.add("higher-cohomology-zero", all(x == 0 for x in h[1:]), [0] * (len(h) - 1), h[1:], cell=t)
    j = j_map(s, t)
    fib = s.bundle.fiber[t]
    rep.add("j-iso", j.shape == (fib, fib) and is_invertible(j), fib, [j.cols, rank(j)], cell=t)
    sub = s.complex.closure_complex(t)
    dr, _ = de_rham_report(s, sub)
    rep.merge(dr, prefix="closure/")
    return rep


def _restricted_map(src: RatMatrix, dst: RatMatrix, m: RatMatrix) -> RatMatrix:
    img = m @ src if src.cols else RatMatrix.zeros(m.rows, 0)
    if dst.cols == 0:
        if not img.is_zero():
            raise ValueError("map does not preserve the subspaces")
        return RatMatrix.zeros(0, src.cols)
    return CoordinateMap(dst).matrix(img)


def a0_complex(s: FESystem, t: CellId) -> tuple[MatrixComplex, list[RatMatrix]]:
    bases = [a0_basis(s, t, k) for k in range(s.top + 1)]
    maps = [_restricted_map(bases[k], bases[k + 1], s.dmat(t, k)) for k in range(s.top)]
    return MatrixComplex([b.cols for b in bases], maps), bases


def a0_cohomology_criterion(s: FESystem, t: CellId) -> bool:
    """Cohomology of ``A_0(T)`` sits at index ``dim T`` and ``e_T`` induces an iso there."""
    n = s.complex.cell(t).dim
    if n > s.top:
        return s.bundle.fiber[t] == 0 and all(x == 0 for x in cohomology_dims(a0_complex(s, t)[0]))
    cx0, bases = a0_complex(s, t)
    h = cohomology_dims(cx0)
    if any(h[k] for k in range(len(h)) if k != n):
        return False
    fib = s.bundle.fiber[t]
    dims = [fib if k == n else 0 for k in range(s.top + 1)]
    target = MatrixComplex(dims, [RatMatrix.zeros(dims[k + 1], dims[k]) for k in range(s.top)])
    maps = [s.emat(t) @ bases[k] if k == n else RatMatrix.zeros(dims[k], bases[k].cols) for k in range(s.top + 1)]
    try:
        v = induced_cohomology_iso(cx0, target, maps)
    except ChainMapError:
        return False
    return v[n].bijective


def compatibility_check(s: FESystem) -> Report:
    """Flabby plus locally exact, cross-checked against the ``A_0`` criterion."""
    rep = Report("compatibility")
    flabby = flabby_check_all(s)
    rep.merge(flabby)
    direct_all = flabby.ok
    alt_all = flabby.ok
    for t in s.complex.cells():
        le = local_exactness_check(s, t)
        rep.merge(le, prefix="exact/")
        alt = a0_cohomology_criterion(s, t)
        rep.add("a0-criterion", alt, True, alt, cell=t)
        direct_all = direct_all and le.ok
        alt_all = alt_all and alt
    rep.add("criteria-agree", direct_all == alt_all, direct_all, alt_all)
    rep.meta["compatible"] = direct_all
    return rep


def is_compatible(s: FESystem) -> bool:
    return bool(compatibility_check(s).meta["compatible"])


# ----------------------------------------------------------------------------
# degrees of freedom


class DofCountError(ValueError):
    def __init__(self, cell, k: int, breakdown: dict, dim: int):
        total = sum(breakdown.values())
        parts = ", ".join(f"{c}: {n}" for c, n in breakdown.items())
        super().__init__(f"{total} functionals for dim A^{k}({cell}) = {dim} ({parts})")
        self.breakdown = breakdown
        self.dim = dim


class DofSystem:
    """Linear functionals ``F^k(T)`` as row matrices acting on ``A^k(T)`` coordinates."""

    def __init__(self, funcs: Mapping[tuple, RatMatrix], labels: Mapping[tuple, Sequence[str]] | None = None):
        self.funcs = dict(funcs)
        self.labels = {key: list(v) for key, v in (labels or {}).items()}

    def get(self, cell: CellId, k: int, ncols: int) -> RatMatrix:
        m = self.funcs.get((cell, k))
        return m if m is not None else RatMatrix.zeros(0, ncols)

    def count(self, cell: CellId, k: int) -> int:
        m = self.funcs.get((cell, k))
        return 0 if m is None else m.rows

    def with_functional(self, cell: CellId, k: int, index: int, row: Sequence) -> "DofSystem":
        m = self.funcs[(cell, k)].tolist()
        m[index] = list(row)
        funcs = dict(self.funcs)
        funcs[(cell, k)] = RatMatrix(m, self.funcs[(cell, k)].cols)
        return DofSystem(funcs, self.labels)


def dof_matrix(s: FESystem, f: DofSystem, t: CellId, k: int) -> tuple[RatMatrix, dict]:
    rows, breakdown = [], {}
    for c in sorted(s.complex.subcells(t), key=lambda c: (s.complex.cell(c).dim, c)):
        m = f.get(c, k, s.dim(c, k))
        breakdown[c] = m.rows
        if m.rows:
            rows.append(m @ s.rmat(c, t, k))
    return vstack(rows, s.dim(t, k)), breakdown


@dataclass
class UnisolvenceResult:
    cell: CellId
    k: int
    size: int
    invertible: bool
    injective_on_a0: bool
    dimension_inequality: bool

    @property
    def sufficient_route(self) -> bool:
        return self.injective_on_a0 and self.dimension_inequality


def dof_unisolvence_check(s: FESystem, f: DofSystem, t: CellId, k: int) -> UnisolvenceResult:
    m, breakdown = dof_matrix(s, f, t, k)
    if m.rows != m.cols:
        raise DofCountError(t, k, breakdown, s.dim(t, k))
    inj = True
    for c in s.complex.subcells(t):
        z = a0_basis(s, c, k)
        if z.cols and rank(f.get(c, k, s.dim(c, k)) @ z) != z.cols:
            inj = False
    ineq = s.dim(t, k) >= sum(breakdown.values())
    return UnisolvenceResult(t, k, m.rows, m.rows == 0 or is_invertible(m), inj, ineq)


def unisolvence_report(s: FESystem, f: DofSystem, cells: Iterable[CellId] | None = None) -> Report:
    rep = Report("unisolvence")
    for t in (cells if cells is not None else s.complex.cells()):
        for k in range(s.top + 1):
            try:
                u = dof_unisolvence_check(s, f, t, k)
            except DofCountError as exc:
                rep.add("square", False, exc.dim, exc.breakdown, cell=t, degree=k)
                continue
            rep.add("invertible", u.invertible, u.size, u.size if u.invertible else "singular", cell=t, degree=k)
            rep.add("sufficient-route", u.sufficient_route == u.invertible, u.invertible, u.sufficient_route,
                    cell=t, degree=k)
    return rep


def _gram(s: FESystem, t: CellId, k: int) -> RatMatrix:
    g = s.gram.get((t, k))
    return g if g is not None else RatMatrix.identity(s.dim(t, k))


def harmonic_blocks(s: FESystem, t: CellId, k: int) -> tuple[RatMatrix, RatMatrix, RatMatrix]:
    """``<.|d A_0^(k-1)>``, ``<d.|d A_0^k>`` and (at ``k = dim T``) ``l o e_T``."""
    n = s.complex.cell(t).dim
    nk = s.dim(t, k)
    if k >= 1:
        img = image_basis(s.dmat(t, k - 1) @ a0_basis(s, t, k - 1))
        b1 = img.T @ _gram(s, t, k) if img.cols else RatMatrix.zeros(0, nk)
    else:
        b1 = RatMatrix.zeros(0, nk)
    if k < s.top:
        img = image_basis(s.dmat(t, k) @ a0_basis(s, t, k))
        b2 = img.T @ _gram(s, t, k + 1) @ s.dmat(t, k) if img.cols else RatMatrix.zeros(0, nk)
    else:
        b2 = RatMatrix.zeros(0, nk)
    b3 = s.emat(t) if k == n else RatMatrix.zeros(0, nk)
    return b1, b2, b3


def harmonic_dofs(s: FESystem, t: CellId, k: int) -> RatMatrix:
    return vstack(list(harmonic_blocks(s, t, k)), s.dim(t, k))


def harmonic_dof_system(s: FESystem) -> DofSystem:
    return DofSystem({(t, k): harmonic_dofs(s, t, k) for t in s.complex.cells() for k in range(s.top + 1)})


def subsystem(s: FESystem, bases: Mapping[tuple, RatMatrix], label: str = "") -> FESystem:
    """The system on the subspaces spanned by ``bases[(T, k)]`` (coordinates in ``A^k(T)``).

    Raises ``ValueError`` if a differential or restriction leaves the subspaces.
    """
    cx = s.complex

    def basis(t, k):
        b = bases.get((t, k))
        return b if b is not None else RatMatrix.identity(s.dim(t, k))

    dims = {(t, k): basis(t, k).cols for t in cx.cells() for k in range(s.top + 1)}
    d = {(t, k): _restricted_map(basis(t, k), basis(t, k + 1), s.dmat(t, k))
         for t in cx.cells() for k in range(s.top)}
    r = {(f, t, k): _restricted_map(basis(t, k), basis(f, k), s.rface(f, t, k))
         for t in cx.cells() for f, _ in cx.faces(t) for k in range(s.top + 1)}
    e = {t: s.emat(t) @ basis(t, cx.cell(t).dim) for t in cx.cells()}
    gram = {}
    for (t, k), g in s.gram.items():
        bb = basis(t, k)
        gram[(t, k)] = bb.T @ g @ bb
    return FESystem(cx, s.bundle, s.top, dims, d, r, e, gram, label or s.label)


def minimal_subsystem(s: FESystem) -> FESystem:
    """Impose the harmonic blocks (not the evaluation block) to vanish on every face."""
    cx = s.complex
    bases = {}
    for t in cx.cells():
        for k in range(s.top + 1):
            rows = []
            for c in cx.subcells(t):
                b1, b2, _ = harmonic_blocks(s, c, k)
                for b in (b1, b2):
                    if b.rows:
                        rows.append(b @ s.rmat(c, t, k))
            m = vstack(rows, s.dim(t, k)) if rows else RatMatrix.zeros(0, s.dim(t, k))
            bases[(t, k)] = nullspace_basis(m) if rows else RatMatrix.identity(s.dim(t, k))
    return subsystem(s, bases, (s.label + "-harmonic-min") if s.label else "harmonic-min")


def minimality_check(s: FESystem) -> Report:
    """``dim A^k_0(T)`` equals the fiber at ``k = dim T`` and vanishes otherwise."""
    rep = Report("minimal")
    for t in s.complex.cells():
        n = s.complex.cell(t).dim
        got = [a0_basis(s, t, k).cols for k in range(s.top + 1)]
        want = [s.bundle.fiber[t] if k == n else 0 for k in range(s.top + 1)]
        rep.expect_equal("a0-dims", want, got, cell=t)
    return rep


# ----------------------------------------------------------------------------
# reference systems


def cochain_system(b: DiscreteBundle, label: str = "cochains") -> FESystem:
    """``A^k(T) = C^k(S(T), L)``; compatible whenever ``L`` is flat."""
    cx = b.complex
    top = cx.dim
    subs = {t: cx.closure_complex(t) for t in cx.cells()}
    dims, d, r, e = {}, {}, {}, {}
    for t, sub in subs.items():
        bt = b.restrict(sub)
        for k in range(top + 1):
            dims[(t, k)] = sum(b.fiber[c] for c in sub.cells(k))
        for k in range(top):
            if k < sub.dim:
                d[(t, k)] = covariant_coboundary(bt, k)
        n = cx.cell(t).dim
        e[t] = RatMatrix.identity(b.fiber[t])
        for f, _ in cx.faces(t):
            fsub = subs[f]
            for k in range(top + 1):
                src = sub.cells(k)
                offs, o = {}, 0
                for c in src:
                    offs[c] = o
                    o += b.fiber[c]
                entries, row = {}, 0
                for c in fsub.cells(k):
                    for i in range(b.fiber[c]):
                        entries[(row, offs[c] + i)] = 1
                        row += 1
                r[(f, t, k)] = RatMatrix.from_sparse(row, o, entries)
        del n
    return FESystem(cx, b, top, dims, d, r, e, label=label)


def quadrilateral_p1_system() -> FESystem:
    """Affine functions on the unit square with their traces.

    ``A^0``: affine functions on the square (dim 3), affine functions of the
    edge parameter, values at vertices.  ``A^1``: constant vector fields on the
    square, constants on edges.  ``A^2 = 0``.  The four vertex values of an
    affine function satisfy one relation, so ``A^0(dS)`` (dim 4) is not reached.
    """
    coords = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
    edges = [(0, 1), (1, 2), (2, 3), (0, 3)]
    quad = "Q"
    cells = [Cell((v,), 0, (v,)) for v in coords] + [Cell(e, 1, e) for e in edges] + [Cell(quad, 2, (0, 1, 2, 3), "polygon")]
    faces = {e: [((e[1],), 1), ((e[0],), -1)] for e in edges}
    faces[quad] = [((0, 1), 1), ((1, 2), 1), ((2, 3), 1), ((0, 3), -1)]
    cx = CellComplex(cells, faces, coords)
    b = trivial_bundle(cx, 1)
    dims, d, r, e = {}, {}, {}, {}
    one = RatMatrix.identity(1)
    for v in coords:
        dims[((v,), 0)] = 1
        e[(v,)] = one
    for a, c in edges:
        ed = (a, c)
        pa, pc = cx.point(a), cx.point(c)
        t = (pc[0] - pa[0], pc[1] - pa[1])
        dims[(ed, 0)] = 2                       # u(a) + u' lambda
        dims[(ed, 1)] = 1
        d[(ed, 0)] = RatMatrix([[0, 1]])
        e[ed] = one
        r[((a,), ed, 0)] = RatMatrix([[1, 0]])
        r[((c,), ed, 0)] = RatMatrix([[1, 1]])
        # restriction of 1, x, y and of e1, e2 to the edge
        r[(ed, quad, 0)] = RatMatrix([[1, pa[0], pa[1]], [0, t[0], t[1]]])
        r[(ed, quad, 1)] = RatMatrix([[t[0], t[1]]])
    dims[(quad, 0)] = 3
    dims[(quad, 1)] = 2
    d[(quad, 0)] = RatMatrix([[0, 1, 0], [0, 0, 1]])
    e[quad] = RatMatrix.zeros(1, 0)
    return FESystem(cx, b, 2, dims, d, r, e, label="quadrilateral-p1")
