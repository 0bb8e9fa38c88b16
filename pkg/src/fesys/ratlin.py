"""Exact linear algebra over the rationals.

Scalars are ``gmpy2.mpq`` values, which are always stored in lowest terms, so
matrix equality is structural.  Elimination runs on rows stored as
``{column: value}`` dictionaries; this is still dense linear algebra in the
sense of the API (every matrix is a full ``rows x cols`` array), the dict rows
only skip the zero entries that dominate gluing constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


def to_q(x) -> mpq:
    """Convert ints, Fractions, mpq and ``"p/q"`` strings to ``mpq``."""
    if isinstance(x, type(ZERO)):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        num, _, den = x.partition("/")
        return mpq(int(num), int(den or 1))
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, int):
        return mpq(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def qstr(x) -> str:
    """Canonical ``p/q`` string of a rational (integers get ``/1``)."""
    x = to_q(x)
    return f"{x.numerator}/{x.denominator}"


class RatMatrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(to_q(v) for v in row) for row in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged matrix data")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    # construction helpers
    @classmethod
    def _raw(cls, rows: tuple, cols: int) -> "RatMatrix":
        m = object.__new__(cls)
        m.rows, m.cols, m._data = len(rows), cols, rows
        return m

    @classmethod
    def zeros(cls, m: int, n: int) -> "RatMatrix":
        return cls._raw(tuple((ZERO,) * n for _ in range(m)), n)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "RatMatrix":
        columns = [list(c) for c in columns]
        if nrows is None:
            nrows = len(columns[0]) if columns else 0
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(nrows)], len(columns))

    @classmethod
    def from_sparse(cls, m: int, n: int, entries: dict) -> "RatMatrix":
        data = [[ZERO] * n for _ in range(m)]
        for (i, j), v in entries.items():
            data[i][j] = to_q(v)
        return cls._raw(tuple(tuple(r) for r in data), n)

    @classmethod
    def block(cls, grid: Sequence[Sequence["RatMatrix | None"]], row_sizes: Sequence[int],
              col_sizes: Sequence[int]) -> "RatMatrix":
        """Assemble from a grid of blocks; ``None`` stands for a zero block."""
        data = []
        for bi, rs in enumerate(row_sizes):
            for i in range(rs):
                row = []
                for bj, cs in enumerate(col_sizes):
                    blk = grid[bi][bj]
                    if blk is None:
                        row.extend((ZERO,) * cs)
                    else:
                        if blk.shape != (rs, cs):
                            raise ValueError(f"block ({bi},{bj}) has shape {blk.shape}, expected {(rs, cs)}")
                        row.extend(blk._data[i])
                data.append(tuple(row))
        return cls._raw(tuple(data), sum(col_sizes))

    # basic protocol
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(qstr(v) for v in r) for r in self._data)
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"

    # arithmetic
    @property
    def T(self) -> "RatMatrix":
        if self.rows == 0:
            return RatMatrix.zeros(self.cols, 0)
        return RatMatrix._raw(tuple(zip(*self._data)), self.rows)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.cols)

    def scale(self, c) -> "RatMatrix":
        c = to_q(c)
        return RatMatrix._raw(tuple(tuple(c * a for a in r) for r in self._data), self.cols)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            out = []
            for r in self._data:
                nz = [(k, a) for k, a in enumerate(r) if a]
                out.append(tuple(sum((a * c[k] for k, a in nz), ZERO) for c in ocols))
            return RatMatrix._raw(tuple(out), other.cols)
        vec = [to_q(v) for v in other]
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum((a * b for a, b in zip(r, vec) if a), ZERO) for r in self._data]

    def _same_shape(self, other: "RatMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def is_zero(self) -> bool:
        return all(not a for r in self._data for a in r)

    def max_abs(self) -> mpq:
        return max((abs(a) for r in self._data for a in r), default=ZERO)

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "RatMatrix":
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else list(cols)
        return RatMatrix._raw(tuple(tuple(self._data[i][j] for j in cols) for i in rows), len(cols))

    def hstack(self, *others: "RatMatrix") -> "RatMatrix":
        return hstack([self, *others])

    def vstack(self, *others: "RatMatrix") -> "RatMatrix":
        return vstack([self, *others])


def hstack(mats: Sequence[RatMatrix], rows: int | None = None) -> RatMatrix:
    if not mats:
        return RatMatrix.zeros(rows or 0, 0)
    m = mats[0].rows
    if any(x.rows != m for x in mats):
        raise ValueError("hstack row mismatch")
    return RatMatrix._raw(tuple(tuple(v for x in mats for v in x._data[i]) for i in range(m)),
                          sum(x.cols for x in mats))


def vstack(mats: Sequence[RatMatrix], cols: int | None = None) -> RatMatrix:
    if not mats:
        return RatMatrix.zeros(0, cols or 0)
    n = mats[0].cols
    if any(x.cols != n for x in mats):
        raise ValueError("vstack column mismatch")
    return RatMatrix._raw(tuple(r for x in mats for r in x._data), n)


def kron(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    rows = []
    for ra in a._data:
        for rb in b._data:
            rows.append(tuple(x * y for x in ra for y in rb))
    return RatMatrix._raw(tuple(rows), a.cols * b.cols)


def block_diag(mats: Sequence[RatMatrix]) -> RatMatrix:
    rs = [m.rows for m in mats]
    cs = [m.cols for m in mats]
    grid = [[mats[i] if i == j else None for j in range(len(mats))] for i in range(len(mats))]
    return RatMatrix.block(grid, rs, cs)


# ----------------------------------------------------------------------------
# elimination core


class _Echelon:
    """Incremental reduced row echelon form over the rationals.

    Pivot rows are kept fully reduced against each other and normalized to a
    leading 1, so the set of pivot rows is always an RREF of the rows added.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, mpq]] = {}

    def reduce(self, row: dict[int, mpq]) -> dict[int, mpq]:
        row = dict(row)
        for c in [c for c in row if c in self.pivots]:
            f = row.get(c)
            if not f:
                continue
            for k, v in self.pivots[c].items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict[int, mpq]) -> int | None:
        row = self.reduce(row)
        if not row:
            return None
        p = min(row)
        inv = 1 / row[p]
        row = {k: v * inv for k, v in row.items()}
        for prow in self.pivots.values():
            f = prow.get(p)
            if f:
                for k, v in row.items():
                    nv = prow.get(k, ZERO) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        self.pivots[p] = row
        return p


def _sparse_rows(m: RatMatrix) -> list[dict[int, mpq]]:
    return [{j: v for j, v in enumerate(r) if v} for r in m._data]


def rref(m: RatMatrix) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    ech = _Echelon(m.cols)
    for r in _sparse_rows(m):
        ech.add(r)
    piv = sorted(ech.pivots)
    rows = [[ech.pivots[p].get(j, ZERO) for j in range(m.cols)] for p in piv]
    rows += [[ZERO] * m.cols for _ in range(m.rows - len(piv))]
    return RatMatrix(rows, m.cols), piv


def rank(m: RatMatrix) -> int:
    ech = _Echelon(m.cols)
    for r in _sparse_rows(m):
        ech.add(r)
    return len(ech.pivots)


def nullspace_basis(m: RatMatrix) -> RatMatrix:
    """Columns form a basis of ``{x : m x = 0}`` (one per free column)."""
    ech = _Echelon(m.cols)
    for r in _sparse_rows(m):
        ech.add(r)
    free = [j for j in range(m.cols) if j not in ech.pivots]
    cols = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for p, prow in ech.pivots.items():
            c = prow.get(f)
            if c:
                v[p] = -c
        cols.append(v)
    return RatMatrix.from_columns(cols, m.cols)


def solve(m: RatMatrix, b: Sequence) -> list[mpq] | None:
    """Some solution of ``m x = b``, or ``None`` when inconsistent."""
    b = [to_q(v) for v in b]
    if len(b) != m.rows:
        raise ValueError("right-hand side length mismatch")
    n = m.cols
    ech = _Echelon(n + 1)
    for r, bv in zip(_sparse_rows(m), b):
        if bv:
            r[n] = bv
        ech.add(r)
    if n in ech.pivots:
        return None
    x = [ZERO] * n
    for p, prow in ech.pivots.items():
        x[p] = prow.get(n, ZERO)
    return x


def inverse(m: RatMatrix) -> RatMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = hstack([m, RatMatrix.identity(n)])
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return red.submatrix(range(n), range(n, 2 * n))


def is_invertible(m: RatMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def column_basis(m: RatMatrix) -> list[int]:
    """Indices of a maximal set of independent columns (leftmost first)."""
    return rref(m)[1]


def image_basis(m: RatMatrix) -> RatMatrix:
    return m.submatrix(None, column_basis(m))


class CoordinateMap:
    """Coordinates with respect to the columns of a full-column-rank matrix."""

    def __init__(self, basis: RatMatrix):
        self.basis = basis
        rows = column_basis(basis.T)
        if len(rows) != basis.cols:
            raise ValueError("basis columns are linearly dependent")
        self.rows = rows
        self.left = inverse(basis.submatrix(rows, None)) if rows else RatMatrix.zeros(0, 0)

    def __call__(self, v: Sequence, check: bool = True) -> list[mpq]:
        v = [to_q(x) for x in v]
        c = self.left @ [v[i] for i in self.rows]
        if check and self.basis @ c != v:
            raise ValueError("vector is not in the span of the basis")
        return c

    def contains(self, v: Sequence) -> bool:
        try:
            self(v)
        except ValueError:
            return False
        return True

    def matrix(self, vectors: RatMatrix) -> RatMatrix:
        """Coordinates of every column of ``vectors``."""
        return RatMatrix.from_columns([self(c) for c in vectors.columns()], self.basis.cols)


# ----------------------------------------------------------------------------
# complexes and cohomology


class ComplexError(ValueError):
    pass


class ChainMapError(ValueError):
    def __init__(self, degree: int, msg: str = ""):
        super().__init__(f"chain map property fails in degree {degree}{': ' + msg if msg else ''}")
        self.degree = degree


class MatrixComplex:
    """Spaces of dimension ``dims[k]`` with maps ``maps[k]: dims[k] -> dims[k+1]``."""

    def __init__(self, dims: Sequence[int], maps: Sequence[RatMatrix]):
        self.dims = list(dims)
        self.maps = list(maps)
        if len(self.maps) != max(len(self.dims) - 1, 0):
            raise ComplexError("need one map between consecutive spaces")
        for k, d in enumerate(self.maps):
            if d.shape != (self.dims[k + 1], self.dims[k]):
                raise ComplexError(f"map {k} has shape {d.shape}, expected {(self.dims[k + 1], self.dims[k])}")
        for k in range(len(self.maps) - 1):
            if not (self.maps[k + 1] @ self.maps[k]).is_zero():
                raise ComplexError(f"D_{k + 1} D_{k} is not zero")

    @classmethod
    def from_maps(cls, maps: Sequence[RatMatrix]) -> "MatrixComplex":
        dims = [maps[0].cols] + [m.rows for m in maps] if maps else [0]
        return cls(dims, maps)

    def map(self, k: int) -> RatMatrix:
        """``D_k``, with zero maps outside the stored range."""
        if 0 <= k < len(self.maps):
            return self.maps[k]
        nxt = self.dims[k + 1] if 0 <= k + 1 < len(self.dims) else 0
        cur = self.dims[k] if 0 <= k < len(self.dims) else 0
        return RatMatrix.zeros(nxt, cur)


def cohomology_dims(c: MatrixComplex) -> list[int]:
    ranks = [rank(d) for d in c.maps]
    out = []
    for k, n in enumerate(c.dims):
        rk = ranks[k] if k < len(ranks) else 0
        rprev = ranks[k - 1] if k >= 1 else 0
        out.append(n - rk - rprev)
    return out


@dataclass(frozen=True)
class CohomologyVerdict:
    degree: int
    dim_src: int
    dim_dst: int
    induced_rank: int

    @property
    def injective(self) -> bool:
        return self.induced_rank == self.dim_src

    @property
    def surjective(self) -> bool:
        return self.induced_rank == self.dim_dst

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def check_chain_map(src: MatrixComplex, dst: MatrixComplex, maps: Sequence[RatMatrix]) -> None:
    if len(maps) != len(src.dims) or len(src.dims) != len(dst.dims):
        raise ChainMapError(0, "degree ranges differ")
    for k, f in enumerate(maps):
        if f.shape != (dst.dims[k], src.dims[k]):
            raise ChainMapError(k, f"map has shape {f.shape}")
    for k in range(len(maps) - 1):
        if maps[k + 1] @ src.map(k) != dst.map(k) @ maps[k]:
            raise ChainMapError(k)


def induced_cohomology_iso(src: MatrixComplex, dst: MatrixComplex,
                           maps: Sequence[RatMatrix]) -> list[CohomologyVerdict]:
    """Per-degree rank of the map induced on cohomology.

    The induced rank is ``rank [B_dst | f Z_src] - rank B_dst`` where ``Z_src``
    spans the cocycles of the source and ``B_dst`` the coboundaries of the target.
    """
    check_chain_map(src, dst, maps)
    hs = cohomology_dims(src)
    hd = cohomology_dims(dst)
    out = []
    for k, f in enumerate(maps):
        z = nullspace_basis(src.map(k))
        bd = dst.map(k - 1) if k >= 1 else RatMatrix.zeros(dst.dims[k], 0)
        fz = f @ z if z.cols else RatMatrix.zeros(dst.dims[k], 0)
        r = rank(hstack([bd, fz])) - rank(bd)
        out.append(CohomologyVerdict(k, hs[k], hd[k], r))
    return out
