"""Exact bivariate polynomial fields, differential operators and integrals.

Differential operators act row-wise.  A column vector field ``u`` has gradient
``G[i][j] = d_j u_i``; a row vector field ``(u1, u2)`` has divergence
``d_1 u1 + d_2 u2`` and curl ``d_1 u2 - d_2 u1``; a scalar ``u`` has gradient
``(d_1 u, d_2 u)`` and curl ``(d_2 u, -d_1 u)`` (both row vectors).

Edge quantities use the unnormalized tangent ``t = b - a`` of the segment from
``a`` to ``b``, the normal ``n = J t`` with ``J`` the rotation by a quarter
turn, and the parameter ``lam`` in ``[0, 1]``.  Unit tangents of rational
edges are usually irrational, ``t`` and ``n`` never are.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Sequence

from .ratlin import ZERO, CoordinateMap, RatMatrix, mpq, nullspace_basis, to_q

# -- univariate ---------------------------------------------------------------


class Poly1:
    """Polynomial in one variable (the edge parameter), coefficients low to high."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [to_q(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def coeff(self, i: int) -> mpq:
        return self.c[i] if 0 <= i < len(self.c) else ZERO

    def padded(self, n: int) -> list:
        if len(self.c) > n:
            raise ValueError(f"degree {self.degree} exceeds the bound {n - 1}")
        return list(self.c) + [ZERO] * (n - len(self.c))

    def __add__(self, o):
        o = _p1(o)
        n = max(len(self.c), len(o.c))
        return Poly1(self.coeff(i) + o.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly1(-x for x in self.c)

    def __sub__(self, o):
        return self + (-_p1(o))

    def __rsub__(self, o):
        return _p1(o) - self

    def __mul__(self, o):
        if not isinstance(o, Poly1):
            o = to_q(o)
            return Poly1(x * o for x in self.c)
        out = [ZERO] * max(len(self.c) + len(o.c) - 1, 0)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] += a * b
        return Poly1(out)

    __rmul__ = __mul__

    def deriv(self) -> "Poly1":
        return Poly1(i * x for i, x in enumerate(self.c) if i)

    def integrate01(self) -> mpq:
        return sum((x / (i + 1) for i, x in enumerate(self.c)), ZERO)

    def __call__(self, lam) -> mpq:
        lam = to_q(lam)
        acc = ZERO
        for x in reversed(self.c):
            acc = acc * lam + x
        return acc

    def __eq__(self, o) -> bool:
        return isinstance(o, Poly1) and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly1{tuple(str(x) for x in self.c)}"


def _p1(o) -> Poly1:
    return o if isinstance(o, Poly1) else Poly1([o])


LAM = Poly1([0, 1])


def chi() -> Poly1:
    """The edge weight ``2 lam - 1``: affine, nonzero, zero mean."""
    return Poly1([-1, 2])


# -- bivariate ----------------------------------------------------------------------


class Poly2:
    """Polynomial in ``x1, x2`` as a map ``(i, j) -> coefficient of x1^i x2^j``."""

    __slots__ = ("c",)

    def __init__(self, coeffs: dict | None = None):
        self.c = {k: to_q(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def const(cls, v) -> "Poly2":
        return cls({(0, 0): v})

    @classmethod
    def monomial(cls, i: int, j: int, coef=1) -> "Poly2":
        return cls({(i, j): coef})

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.c), default=-1)

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, o) -> bool:
        if not isinstance(o, Poly2):
            o = Poly2.const(o)
        return self.c == o.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __repr__(self):
        terms = " + ".join(f"{v}*x1^{i}*x2^{j}" for (i, j), v in sorted(self.c.items()))
        return f"Poly2({terms or '0'})"

    def __add__(self, o):
        if not isinstance(o, Poly2):
            o = Poly2.const(o)
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, ZERO) + v
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({k: -v for k, v in self.c.items()})

    def __sub__(self, o):
        if not isinstance(o, Poly2):
            o = Poly2.const(o)
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Poly2):
            o = to_q(o)
            return Poly2({k: v * o for k, v in self.c.items()})
        out: dict = {}
        for (i, j), a in self.c.items():
            for (k, l), b in o.c.items():
                key = (i + k, j + l)
                out[key] = out.get(key, ZERO) + a * b
        return Poly2(out)

    __rmul__ = __mul__

    def diff(self, var: int) -> "Poly2":
        out = {}
        for (i, j), v in self.c.items():
            if var == 0 and i:
                out[(i - 1, j)] = v * i
            elif var == 1 and j:
                out[(i, j - 1)] = v * j
        return Poly2(out)

    def __call__(self, x, y) -> mpq:
        x, y = to_q(x), to_q(y)
        return sum((v * x ** i * y ** j for (i, j), v in self.c.items()), ZERO)

    def restrict(self, a: Sequence, t: Sequence) -> Poly1:
        """``lam -> p(a + lam t)``."""
        px = _affine_powers(to_q(a[0]), to_q(t[0]), max((i for i, _ in self.c), default=0))
        py = _affine_powers(to_q(a[1]), to_q(t[1]), max((j for _, j in self.c), default=0))
        acc = Poly1()
        for (i, j), v in self.c.items():
            acc = acc + px[i] * py[j] * v
        return acc

    def compose_affine(self, origin: Sequence, e1: Sequence, e2: Sequence) -> "Poly2":
        """``(s, t) -> p(origin + s e1 + t e2)`` as a polynomial in ``s, t``."""
        o1, o2 = to_q(origin[0]), to_q(origin[1])
        x = Poly2({(0, 0): o1, (1, 0): e1[0], (0, 1): e2[0]})
        y = Poly2({(0, 0): o2, (1, 0): e1[1], (0, 1): e2[1]})
        return self.substitute(x, y)

    def substitute(self, x: "Poly2", y: "Poly2") -> "Poly2":
        dx = max((i for i, _ in self.c), default=0)
        dy = max((j for _, j in self.c), default=0)
        xp = [Poly2.const(1)]
        for _ in range(dx):
            xp.append(xp[-1] * x)
        yp = [Poly2.const(1)]
        for _ in range(dy):
            yp.append(yp[-1] * y)
        acc = Poly2()
        for (i, j), v in self.c.items():
            acc = acc + xp[i] * yp[j] * v
        return acc

    def shift(self, b: Sequence) -> "Poly2":
        """``x -> p(x + b)``."""
        return self.compose_affine(b, (1, 0), (0, 1))

    def scale_degrees(self, f: Callable[[int], mpq]) -> "Poly2":
        """Multiply each monomial of total degree ``d`` by ``f(d)``."""
        return Poly2({(i, j): v * f(i + j) for (i, j), v in self.c.items()})

    def homogeneous_part(self, d: int) -> "Poly2":
        return Poly2({k: v for k, v in self.c.items() if sum(k) == d})


def _affine_powers(a: mpq, t: mpq, n: int) -> list[Poly1]:
    base = Poly1([a, t])
    out = [Poly1([1])]
    for _ in range(n):
        out.append(out[-1] * base)
    return out


X1 = Poly2.monomial(1, 0)
X2 = Poly2.monomial(0, 1)


def monomials(degree: int) -> list[tuple[int, int]]:
    return [(i, d - i) for d in range(degree + 1) for i in range(d, -1, -1)]


# -- shapes and fields ------------------------------------------------------------

SHAPES = ("scalar", "vector", "rowvector", "matrix", "sym", "skew")
_NCOMP = {"scalar": 1, "vector": 2, "rowvector": 2, "matrix": 4, "sym": 4, "skew": 4}
# independent component slots inside the stored layout
INDEPENDENT = {"scalar": (0,), "vector": (0, 1), "rowvector": (0, 1), "matrix": (0, 1, 2, 3),
               "sym": (0, 1, 3), "skew": (1,)}
MATRIX_LIKE = ("matrix", "sym", "skew")


class ShapeError(TypeError):
    pass


class Field:
    """Polynomial field with a value shape.

    Matrix-like shapes store entries row-major ``(11, 12, 21, 22)``; symmetric
    and skew fields keep the redundant entries consistent.
    """

    __slots__ = ("shape", "comps")

    def __init__(self, shape: str, comps: Sequence):
        if shape not in SHAPES:
            raise ShapeError(f"unknown shape {shape}")
        comps = tuple(c if isinstance(c, Poly2) else Poly2.const(c) for c in comps)
        if len(comps) != _NCOMP[shape]:
            raise ShapeError(f"{shape} field needs {_NCOMP[shape]} components")
        if shape == "sym" and comps[1] != comps[2]:
            raise ShapeError("symmetric field with unequal off-diagonal entries")
        if shape == "skew" and (not comps[0].is_zero() or not comps[3].is_zero() or comps[1] != -comps[2]):
            raise ShapeError("field is not skew")
        self.shape = shape
        self.comps = comps

    # constructors
    @classmethod
    def scalar(cls, p) -> "Field":
        return cls("scalar", (p,))

    @classmethod
    def vector(cls, p, q) -> "Field":
        return cls("vector", (p, q))

    @classmethod
    def rowvector(cls, p, q) -> "Field":
        return cls("rowvector", (p, q))

    @classmethod
    def matrix(cls, a, b, c, d) -> "Field":
        return cls("matrix", (a, b, c, d))

    @classmethod
    def sym(cls, a, b, d) -> "Field":
        return cls("sym", (a, b, b, d))

    @classmethod
    def zero(cls, shape: str) -> "Field":
        return cls(shape, [Poly2()] * _NCOMP[shape])

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.comps)

    def entry(self, i: int, j: int) -> Poly2:
        if self.shape not in MATRIX_LIKE:
            raise ShapeError("entry() needs a matrix-like field")
        return self.comps[2 * i + j]

    def independent(self) -> tuple:
        return tuple(self.comps[i] for i in INDEPENDENT[self.shape])

    def with_shape(self, shape: str) -> "Field":
        return Field(shape, self.comps)

    def map(self, f: Callable[[Poly2], Poly2]) -> "Field":
        return Field(self.shape, [f(c) for c in self.comps])

    def __eq__(self, o) -> bool:
        return isinstance(o, Field) and self.shape == o.shape and self.comps == o.comps

    def __hash__(self):
        return hash((self.shape, self.comps))

    def __repr__(self):
        return f"Field({self.shape}, {self.comps})"

    def _compatible(self, o: "Field") -> str:
        if self.shape == o.shape:
            return self.shape
        if self.shape in MATRIX_LIKE and o.shape in MATRIX_LIKE:
            return "matrix"
        raise ShapeError(f"shape mismatch {self.shape} vs {o.shape}")

    def __add__(self, o: "Field") -> "Field":
        return Field(self._compatible(o), [a + b for a, b in zip(self.comps, o.comps)])

    def __sub__(self, o: "Field") -> "Field":
        return Field(self._compatible(o), [a - b for a, b in zip(self.comps, o.comps)])

    def __neg__(self) -> "Field":
        return self.map(lambda p: -p)

    def __mul__(self, s) -> "Field":
        """Multiply by a rational or by a scalar polynomial."""
        return self.map(lambda p: p * s)

    __rmul__ = __mul__

    def __call__(self, x, y) -> tuple:
        return tuple(c(x, y) for c in self.comps)

    def transpose(self) -> "Field":
        if self.shape == "vector":
            return Field("rowvector", self.comps)
        if self.shape == "rowvector":
            return Field("vector", self.comps)
        a, b, c, d = self.comps
        return Field(self.shape, (a, c, b, d))

    def trace(self) -> Poly2:
        return self.entry(0, 0) + self.entry(1, 1)

    def shift(self, b: Sequence) -> "Field":
        return self.map(lambda p: p.shift(b))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)


def as_matrix(f: Field) -> list[list[Poly2]]:
    return [[f.entry(0, 0), f.entry(0, 1)], [f.entry(1, 0), f.entry(1, 1)]]


def from_matrix(m: Sequence[Sequence], shape: str | None = None) -> Field:
    comps = (m[0][0], m[0][1], m[1][0], m[1][1])
    comps = tuple(c if isinstance(c, Poly2) else Poly2.const(c) for c in comps)
    if shape is None:
        shape = "sym" if comps[1] == comps[2] else "matrix"
    return Field(shape, comps)


def const_matmul(c: Sequence[Sequence], f: Field, right: Sequence[Sequence] | None = None) -> Field:
    """``c f`` (and ``c f right`` when ``right`` is given) for constant 2x2 ``c``."""
    m = as_matrix(f)
    left = [[sum((m[k][j] * to_q(c[i][k]) for k in range(2)), Poly2()) for j in range(2)] for i in range(2)]
    if right is not None:
        left = [[sum((left[i][k] * to_q(right[k][j]) for k in range(2)), Poly2()) for j in range(2)]
                for i in range(2)]
    return from_matrix(left, "matrix")


J = ((0, -1), (1, 0))
JT = ((0, 1), (-1, 0))


def K_op(f: Field) -> Field:
    """``K u = u^T - tr(u) I``."""
    tr = f.trace()
    ft = f.transpose()
    return Field("matrix", (ft.comps[0] - tr, ft.comps[1], ft.comps[2], ft.comps[3] - tr))


def matvec_const(c: Sequence[Sequence], v: Field) -> Field:
    p, q = v.comps
    return Field(v.shape, (p * to_q(c[0][0]) + q * to_q(c[0][1]), p * to_q(c[1][0]) + q * to_q(c[1][1])))


def xr() -> Field:
    """The rotated position field ``x^r = (-x2, x1)`` as a column vector."""
    return Field.vector(-X2, X1)


def outer(u: Field, v: Field) -> Field:
    a, b = u.comps
    c, d = v.comps
    return from_matrix([[a * c, a * d], [b * c, b * d]], None if u != v else "sym")


def rigid_motion(a1, a2, b) -> Field:
    """``x -> a + b J x``."""
    return Field.vector(Poly2.const(a1) - X2 * to_q(b), Poly2.const(a2) + X1 * to_q(b))


def random_poly(rng: random.Random, degree: int, span: int = 3, denom: int = 2,
                homogeneous: bool = False) -> Poly2:
    """Random polynomial with coefficients ``k / denom``, ``|k| <= span``."""
    terms = {}
    for m in monomials(degree):
        if homogeneous and sum(m) != degree:
            continue
        terms[m] = mpq(rng.randint(-span, span), denom)
    return Poly2(terms)


def random_field(rng: random.Random, shape: str, degree: int, **kw) -> Field:
    """Random field of the given shape; symmetric and skew fields get consistent entries."""
    if shape == "sym":
        a, b, d = (random_poly(rng, degree, **kw) for _ in range(3))
        return Field.sym(a, b, d)
    if shape == "skew":
        b = random_poly(rng, degree, **kw)
        return Field("skew", (Poly2(), b, -b, Poly2()))
    return Field(shape, [random_poly(rng, degree, **kw) for _ in range(_NCOMP[shape])])


# -- differential operators ------------------------------------------------------------

OPS = ("grad", "curl_scalar", "div_row", "curl_row", "grad_vec", "defo", "div_mat", "airy", "sven",
       "hess", "curl_mat")
_DOMAIN = {"grad": ("scalar",), "curl_scalar": ("scalar",), "div_row": ("rowvector",),
           "curl_row": ("rowvector",), "grad_vec": ("vector",), "defo": ("vector",),
           "div_mat": MATRIX_LIKE, "airy": ("scalar",), "sven": MATRIX_LIKE, "hess": ("scalar",),
           "curl_mat": MATRIX_LIKE}
ORDER = {"grad": 1, "curl_scalar": 1, "div_row": 1, "curl_row": 1, "grad_vec": 1, "defo": 1, "div_mat": 1,
         "airy": 2, "sven": 2, "hess": 2, "curl_mat": 1}


def _dop_field(op: str, f: Field) -> Field:
    if f.shape not in _DOMAIN[op]:
        raise ShapeError(f"{op} does not act on {f.shape} fields")
    c = f.comps
    d = lambda p, k: p.diff(k)
    if op == "grad":
        return Field.rowvector(d(c[0], 0), d(c[0], 1))
    if op == "curl_scalar":
        return Field.rowvector(d(c[0], 1), -d(c[0], 0))
    if op == "div_row":
        return Field.scalar(d(c[0], 0) + d(c[1], 1))
    if op == "curl_row":
        return Field.scalar(d(c[1], 0) - d(c[0], 1))
    if op == "grad_vec":
        return Field.matrix(d(c[0], 0), d(c[0], 1), d(c[1], 0), d(c[1], 1))
    if op == "defo":
        off = (d(c[0], 1) + d(c[1], 0)) * mpq(1, 2)
        return Field.sym(d(c[0], 0), off, d(c[1], 1))
    if op == "div_mat":
        return Field.vector(d(c[0], 0) + d(c[1], 1), d(c[2], 0) + d(c[3], 1))
    if op == "airy":
        u = c[0]
        return Field.sym(d(d(u, 1), 1), -d(d(u, 0), 1), d(d(u, 0), 0))
    if op == "sven":
        return Field.scalar(d(d(c[0], 1), 1) + d(d(c[3], 0), 0) - d(d(c[2], 0), 1) - d(d(c[1], 1), 0))
    if op == "hess":
        u = c[0]
        return Field.matrix(d(d(u, 0), 0), d(d(u, 0), 1), d(d(u, 1), 0), d(d(u, 1), 1))
    if op == "curl_mat":
        return Field.vector(d(c[1], 0) - d(c[0], 1), d(c[3], 0) - d(c[2], 1))
    raise ValueError(f"unknown operator {op}")


def dop(op: str, f):
    if isinstance(f, PiecewiseField):
        return PiecewiseField(f.split, tuple(_dop_field(op, p) for p in f.pieces))
    return _dop_field(op, f)


def jk_identities_check(f: Field) -> dict[str, bool]:
    """Identities linking airy/hess and curl/div through ``J`` and ``K``."""
    out = {}
    if f.shape == "scalar":
        h = dop("hess", f)
        a = dop("airy", f)
        out["airy_eq_JT_hess_J"] = a.comps == const_matmul(JT, h, J).comps
        out["airy_eq_minus_K_hess"] = a.comps == (-K_op(h)).comps
    if f.shape in MATRIX_LIKE:
        lhs = dop("curl_mat", f)
        rhs = -matvec_const(J, dop("div_mat", K_op(f)))
        out["curl_eq_minus_J_div_K"] = lhs == rhs
    return out


# -- geometry ------------------------------------------------------------------------


def _pt(p) -> tuple:
    return (to_q(p[0]), to_q(p[1]))


def orient2d(a, b, c) -> mpq:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


@dataclass(frozen=True)
class Edge:
    """Segment from ``a`` to ``b`` with ``t = b - a``, ``n = J t``, ``l2 = t.t``."""

    a: tuple
    b: tuple

    @classmethod
    def of(cls, a, b) -> "Edge":
        return cls(_pt(a), _pt(b))

    @property
    def t(self) -> tuple:
        return (self.b[0] - self.a[0], self.b[1] - self.a[1])

    @property
    def n(self) -> tuple:
        t = self.t
        return (-t[1], t[0])

    @property
    def l2(self) -> mpq:
        t = self.t
        return t[0] * t[0] + t[1] * t[1]

    def point(self, lam) -> tuple:
        lam = to_q(lam)
        return (self.a[0] + lam * self.t[0], self.a[1] + lam * self.t[1])

    def restrict(self, p: Poly2) -> Poly1:
        return p.restrict(self.a, self.t)

    def dn(self, p: Poly2) -> Poly2:
        n = self.n
        return p.diff(0) * n[0] + p.diff(1) * n[1]

    def dt(self, p: Poly2) -> Poly2:
        t = self.t
        return p.diff(0) * t[0] + p.diff(1) * t[1]


class CTSplit:
    """Clough-Tocher split of a triangle about an interior point.

    Piece ``i`` is the subtriangle ``(c, v[i+1], v[i+2])``; interior edge ``i``
    joins ``c`` to ``v[i]`` and separates pieces ``i+1`` and ``i+2``.
    """

    def __init__(self, vertices: Sequence, center: Sequence | None = None):
        self.vertices = tuple(_pt(v) for v in vertices)
        if len(self.vertices) != 3 or orient2d(*self.vertices) == 0:
            raise ValueError("degenerate triangle")
        if center is None:
            center = tuple(sum(v[k] for v in self.vertices) / 3 for k in range(2))
        self.center = _pt(center)
        v = self.vertices
        self.triangles = tuple((self.center, v[(i + 1) % 3], v[(i + 2) % 3]) for i in range(3))
        s = orient2d(*v)
        for tri in self.triangles:
            if orient2d(*tri) * s <= 0:
                raise ValueError("split point must lie strictly inside the triangle")

    def __eq__(self, o):
        return isinstance(o, CTSplit) and self.vertices == o.vertices and self.center == o.center

    def __hash__(self):
        return hash((self.vertices, self.center))

    def interior_edge(self, i: int) -> tuple[Edge, int, int]:
        return Edge(self.center, self.vertices[i]), (i + 1) % 3, (i + 2) % 3

    def piece_with(self, *points) -> int:
        for i, tri in enumerate(self.triangles):
            if all(_pt(p) in tri for p in points):
                return i
        raise ValueError("no subtriangle contains the given points")


# -- piecewise fields ------------------------------------------------------------------


class PiecewiseField:
    """One polynomial field per subtriangle of a Clough-Tocher split."""

    __slots__ = ("split", "pieces")

    def __init__(self, split: CTSplit, pieces: Sequence[Field]):
        pieces = tuple(pieces)
        if len(pieces) != 3 or len({p.shape for p in pieces}) != 1:
            raise ShapeError("need three pieces of a common shape")
        self.split = split
        self.pieces = pieces

    @classmethod
    def from_global(cls, split: CTSplit, f: Field) -> "PiecewiseField":
        return cls(split, (f, f, f))

    @property
    def shape(self) -> str:
        return self.pieces[0].shape

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.pieces)

    def map(self, f: Callable[[Field], Field]) -> "PiecewiseField":
        return PiecewiseField(self.split, [f(p) for p in self.pieces])

    def __add__(self, o):
        return PiecewiseField(self.split, [a + b for a, b in zip(self.pieces, o.pieces)])

    def __sub__(self, o):
        return PiecewiseField(self.split, [a - b for a, b in zip(self.pieces, o.pieces)])

    def __neg__(self):
        return self.map(lambda p: -p)

    def __mul__(self, s):
        return self.map(lambda p: p * s)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, PiecewiseField) and self.split == o.split and self.pieces == o.pieces

    def __hash__(self):
        return hash((self.split, self.pieces))

    def piece_for(self, *points) -> Field:
        return self.pieces[self.split.piece_with(*points)]

    def to_vector(self, degree: int) -> list[mpq]:
        mons = monomials(degree)
        out = []
        for p in self.pieces:
            if p.degree > degree:
                raise ValueError(f"piece degree {p.degree} exceeds {degree}")
            for k in INDEPENDENT[p.shape]:
                c = p.comps[k].c
                out.extend(c.get(m, ZERO) for m in mons)
        return out

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.pieces)


def field_on(obj, *points) -> Field:
    """The polynomial piece of ``obj`` that is valid near the given points."""
    return obj.piece_for(*points) if isinstance(obj, PiecewiseField) else obj


def ambient_basis(split: CTSplit, shape: str, degree: int) -> list[PiecewiseField]:
    """Unit fields spanning all piecewise polynomials of the given shape and degree."""
    out = []
    zero = Field.zero(shape)
    for piece in range(3):
        for k in INDEPENDENT[shape]:
            for m in monomials(degree):
                comps = [Poly2() for _ in range(_NCOMP[shape])]
                mono = Poly2.monomial(*m)
                comps[k] = mono
                if shape == "sym" and k == 1:
                    comps[2] = mono
                if shape == "skew":
                    comps[2] = -mono
                pieces = [zero] * 3
                pieces[piece] = Field(shape, comps)
                out.append(PiecewiseField(split, pieces))
    return out


def lincomb(fields: Sequence, coeffs: Sequence):
    acc = None
    for f, c in zip(fields, coeffs):
        c = to_q(c)
        if not c:
            continue
        term = f * c
        acc = term if acc is None else acc + term
    if acc is None:
        f = fields[0]
        return f * 0
    return acc


class PWSpace:
    """A subspace of piecewise polynomial fields with an explicit basis."""

    def __init__(self, split: CTSplit, shape: str, degree: int, basis: Sequence[PiecewiseField]):
        self.split, self.shape, self.degree = split, shape, degree
        self.basis = list(basis)
        ncoords = 3 * len(INDEPENDENT[shape]) * len(monomials(degree))
        self.matrix = RatMatrix.from_columns([b.to_vector(degree) for b in self.basis], ncoords)
        self._coords = CoordinateMap(self.matrix)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, f: PiecewiseField) -> list[mpq]:
        return self._coords(f.to_vector(self.degree))

    def contains(self, f: PiecewiseField) -> bool:
        try:
            return self._coords.contains(f.to_vector(self.degree))
        except ValueError:
            return False

    def field(self, coeffs: Sequence) -> PiecewiseField:
        if not self.basis:
            return PiecewiseField(self.split, [Field.zero(self.shape)] * 3)
        return lincomb(self.basis, coeffs)


def constraint_matrix(ambient: Sequence, constraints: Sequence[Callable]) -> RatMatrix:
    cols = []
    for f in ambient:
        col = []
        for con in constraints:
            col.extend(to_q(v) for v in con(f))
        cols.append(col)
    nrows = len(cols[0]) if cols else 0
    return RatMatrix.from_columns(cols, nrows)


def subspace_from_constraints(ambient: Sequence, constraints: Sequence[Callable]) -> list:
    """Basis of ``{f in span(ambient) : every constraint functional vanishes}``."""
    if not constraints:
        return list(ambient)
    ns = nullspace_basis(constraint_matrix(ambient, constraints))
    return [lincomb(ambient, col) for col in ns.columns()]


# -- jump constraints ----------------------------------------------------------------


def jump_functional(edge_index: int, quantity: Callable[[Field, Edge], Sequence[Poly2]],
                    degree: int) -> Callable[[PiecewiseField], list]:
    """Coefficients of the jump of ``quantity`` across an interior CT edge."""

    def functional(f: PiecewiseField) -> list:
        e, pa, pb = f.split.interior_edge(edge_index)
        qa = quantity(f.pieces[pa], e)
        qb = quantity(f.pieces[pb], e)
        out = []
        for x, y in zip(qa, qb):
            out.extend(e.restrict(x - y).padded(degree + 1))
        return out

    return functional


def values_q(f: Field, e: Edge) -> tuple:
    return f.independent()


def gradients_q(f: Field, e: Edge) -> tuple:
    return tuple(q for c in f.independent() for q in (c.diff(0), c.diff(1)))


def normal_component_q(f: Field, e: Edge) -> tuple:
    n = e.n
    m = as_matrix(f)
    return (m[0][0] * n[0] + m[0][1] * n[1], m[1][0] * n[0] + m[1][1] * n[1])


def dn_tt_q(f: Field, e: Edge) -> tuple:
    t = e.t
    m = as_matrix(f)
    ttt = sum((m[i][j] * (t[i] * t[j]) for i in range(2) for j in range(2)), Poly2())
    return (e.dn(ttt),)


def curl_vec_q(f: Field, e: Edge) -> tuple:
    u1, u2 = f.comps
    return (u2.diff(0) - u1.diff(1),)


def c1_constraints(degree: int) -> list:
    out = []
    for i in range(3):
        out.append(jump_functional(i, values_q, degree))
        out.append(jump_functional(i, gradients_q, degree - 1))
    return out


def c0_constraints(degree: int) -> list:
    return [jump_functional(i, values_q, degree) for i in range(3)]


# -- integration -----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _ref_monomial(a: int, b: int) -> mpq:
    return mpq(factorial(a) * factorial(b), factorial(a + b + 2))


def integrate_poly(p: Poly2, tri: Sequence) -> mpq:
    """Exact integral of ``p`` over the triangle ``tri``."""
    p0, p1, p2 = (_pt(v) for v in tri)
    e1 = (p1[0] - p0[0], p1[1] - p0[1])
    e2 = (p2[0] - p0[0], p2[1] - p0[1])
    det = abs(e1[0] * e2[1] - e1[1] * e2[0])
    q = p.compose_affine(p0, e1, e2)
    return det * sum((v * _ref_monomial(i, j) for (i, j), v in q.c.items()), ZERO)


def integrate_cell(f, domain: Sequence | CTSplit | Edge | None = None) -> tuple:
    """Componentwise integral.

    ``domain`` may be a triangle (three points), a split (for piecewise fields),
    or an ``Edge``, in which case the integral is over the edge parameter:
    ``int_0^1 f(a + lam t) dlam``, i.e. the arc-length integral divided by ``|t|``.
    """
    if isinstance(domain, Edge):
        return tuple(domain.restrict(c).integrate01() for c in f.comps)
    if isinstance(f, PiecewiseField):
        tris = f.split.triangles
        return tuple(sum((integrate_poly(p.comps[k], tri) for p, tri in zip(f.pieces, tris)), ZERO)
                     for k in range(len(f.pieces[0].comps)))
    return tuple(integrate_poly(c, domain) for c in f.comps)


def pairing_poly(f: Field, g: Field) -> Poly2:
    """Pointwise contraction ``f : g`` (Frobenius for matrices)."""
    if len(f.comps) != len(g.comps):
        raise ShapeError("pairing needs fields of matching shapes")
    return sum((a * b for a, b in zip(f.comps, g.comps)), Poly2())


def l2_pairing(f, g, domain: Sequence | None = None) -> mpq:
    """``int f : g`` over the triangle (or over the split for piecewise fields)."""
    if isinstance(f, PiecewiseField) or isinstance(g, PiecewiseField):
        split = f.split if isinstance(f, PiecewiseField) else g.split
        total = ZERO
        for i, tri in enumerate(split.triangles):
            fi = f.pieces[i] if isinstance(f, PiecewiseField) else f
            gi = g.pieces[i] if isinstance(g, PiecewiseField) else g
            total += integrate_poly(pairing_poly(fi, gi), tri)
        return total
    return integrate_poly(pairing_poly(f, g), domain)
