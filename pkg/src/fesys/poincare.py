"""Poincare and Koszul operators for the 2D stress and strain complexes.

Stress complex:  scalar --airy--> S --div_mat--> V   (kernel: affine functions)
Strain complex:  V --defo--> S --sven--> scalar       (kernel: rigid motions)

All ray integrals ``int_0^1 w(t) u(t x) dt`` reduce to Beta-type rational
coefficients: a monomial of total degree ``d`` picks up ``int_0^1 w(t) t^d dt``.
Operators are evaluated about a base point ``b`` by conjugating with the
translation ``x -> x + b``.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .polyfield import X1, X2, Edge, Field, PiecewiseField, Poly1, Poly2, as_matrix, dop, outer, to_q, xr
from .ratlin import ZERO, mpq

ORIGIN = (mpq(0), mpq(0))


def ray(p: Poly2, weight: Poly1) -> Poly2:
    """``x -> int_0^1 weight(t) p(t x) dt``."""
    w = weight.c

    def coef(d: int) -> mpq:
        return sum((wk / (k + d + 1) for k, wk in enumerate(w)), ZERO)

    return p.scale_degrees(coef)


ONE_MINUS_T = Poly1([1, -1])
T = Poly1([0, 1])
T_ONE_MINUS_T = Poly1([0, 1, -1])
ONE = Poly1([1])


def _about(base: Sequence | None, op: Callable[[Field], Field]) -> Callable[[Field], Field]:
    b = ORIGIN if base is None else (to_q(base[0]), to_q(base[1]))
    if b == ORIGIN:
        return op
    nb = (-b[0], -b[1])
    return lambda u: op(u.shift(b)).shift(nb)


def _rayf(u: Field, w: Poly1) -> Field:
    return u.map(lambda p: ray(p, w))


def _check(u: Field, *shapes: str):
    if u.shape not in shapes:
        raise TypeError(f"expected a field of shape {shapes}, got {u.shape}")


def _curl_col(v: Field) -> Field:
    """Row-wise curl of a column vector: row i is ``(d2 v_i, -d1 v_i)``."""
    a, b = v.comps
    return Field.matrix(a.diff(1), -a.diff(0), b.diff(1), -b.diff(0))


def _sym(m: Field) -> Field:
    a, b, c, d = m.comps
    return Field.sym(a, (b + c) * mpq(1, 2), d)


def _quad(v: Field, m: Field, w: Field) -> Poly2:
    """``v^T m w`` for column vectors ``v, w``."""
    mm = as_matrix(m)
    return sum((v.comps[i] * mm[i][j] * w.comps[j] for i in range(2) for j in range(2)), Poly2())


# The sign in front of the curl term of the second stress operator.  The
# usual written form leaves it open; -1 is the choice under which
# div(p2 w) = w and the other null-homotopy identities hold.
STRESS_P2_CURL_SIGN = -1


def stress_p1(u: Field, base: Sequence | None = None) -> Field:
    """``int_0^1 (1-t) x^rT u(tx) x^r dt`` (symmetric input, scalar output)."""
    _check(u, "sym", "matrix")

    def op(v: Field) -> Field:
        r = _rayf(v, ONE_MINUS_T)
        return Field.scalar(_quad(xr(), r, xr()))

    return _about(base, op)(u)


def stress_p2(u: Field, base: Sequence | None = None) -> Field:
    """``sym(int t u(tx) x^T dt - curl int t(1-t) (x^rT u(tx)) x dt)``."""
    _check(u, "vector")

    def op(v: Field) -> Field:
        a = _rayf(v, T)
        first = outer(a, Field.vector(X1, X2)).with_shape("matrix")
        r = _rayf(v, T_ONE_MINUS_T)
        s = xr().comps[0] * r.comps[0] + xr().comps[1] * r.comps[1]
        second = _curl_col(Field.vector(s * X1, s * X2))
        return _sym(first + second * STRESS_P2_CURL_SIGN)

    return _about(base, op)(u)


def strain_p1(u: Field, base: Sequence | None = None) -> Field:
    """``int u(tx)^T x dt + int (1-t) x^r (curl u)(tx)^T x dt``.

    The row-wise curl is evaluated at ``tx`` (it is not the curl of
    ``x -> u(tx)``, which would carry an extra factor ``t``); only this reading
    satisfies the null-homotopy identities.
    """
    _check(u, "sym", "matrix")

    def op(v: Field) -> Field:
        a = _rayf(v.transpose(), ONE)
        first = Field.vector(a.entry(0, 0) * X1 + a.entry(0, 1) * X2, a.entry(1, 0) * X1 + a.entry(1, 1) * X2)
        c = _rayf(dop("curl_mat", v), ONE_MINUS_T)
        s = c.comps[0] * X1 + c.comps[1] * X2
        return first + xr() * s

    return _about(base, op)(u)


def strain_p2(u: Field, base: Sequence | None = None) -> Field:
    """``x^r (int t(1-t) u(tx) dt) x^rT``."""
    _check(u, "scalar")

    def op(v: Field) -> Field:
        s = ray(v.comps[0], T_ONE_MINUS_T)
        return outer(xr(), xr()) * s

    return _about(base, op)(u)


def _homogeneous_degree(u: Field) -> int:
    degs = {i + j for c in u.comps for (i, j) in c.c}
    if len(degs) > 1:
        raise ValueError("Koszul operators need a homogeneous input; split it by degree first")
    return degs.pop() if degs else 0


def koszul(which: str, r: int, u: Field, alt_coefficient: bool = False) -> Field:
    """``k1^r`` (symmetric -> vector) or ``k2^r`` (scalar -> symmetric) on degree-``r`` input.

    ``k1^r u = u x / (r+1) + x^r (curl u)^T x / (r (r+1))`` is the first strain
    Poincare operator restricted to homogeneous degree ``r`` (the curl term is
    absent for ``r = 0``).  ``alt_coefficient=True`` uses
    ``1 / ((r+1)(r+2))`` for the curl term instead; that variant does not agree
    with the Poincare operator for ``r >= 1`` and is kept only to exhibit this.
    ``k2^r u = x^r u x^rT / ((r+2)(r+3))``.
    """
    if not u.is_zero() and _homogeneous_degree(u) != r:
        raise ValueError(f"input is not homogeneous of degree {r}")
    if which == "k1":
        _check(u, "sym", "matrix")
        m = as_matrix(u)
        ux = Field.vector(m[0][0] * X1 + m[0][1] * X2, m[1][0] * X1 + m[1][1] * X2)
        out = ux * mpq(1, r + 1)
        if alt_coefficient or r >= 1:
            c = dop("curl_mat", u)
            s = c.comps[0] * X1 + c.comps[1] * X2
            coef = mpq(1, (r + 1) * (r + 2)) if alt_coefficient else mpq(1, r * (r + 1))
            out = out + xr() * (s * coef)
        return out
    if which == "k2":
        _check(u, "scalar")
        return outer(xr(), xr()) * (u.comps[0] * mpq(1, (r + 2) * (r + 3)))
    raise ValueError(f"unknown Koszul operator {which}")


def koszul_split(which: str, u: Field) -> Field:
    """Apply the Koszul operator degree by degree."""
    out = None
    for d in range(u.degree + 1):
        part = u.map(lambda p: p.homogeneous_part(d))
        if part.is_zero():
            continue
        term = koszul(which, d, part)
        out = term if out is None else out + term
    if out is None:
        return koszul(which, 0, u)
    return out


def j_projection(which: str, u: Field, base: Sequence | None = None) -> Field:
    """Affine part ``u(b) + grad u(b) (x - b)`` or rigid part ``u(b) + 1/2 curl u(b) (x - b)^r``."""
    b = ORIGIN if base is None else (to_q(base[0]), to_q(base[1]))
    dx, dy = X1 - b[0], X2 - b[1]
    if which == "affine_stress":
        _check(u, "scalar")
        p = u.comps[0]
        return Field.scalar(Poly2.const(p(*b)) + dx * p.diff(0)(*b) + dy * p.diff(1)(*b))
    if which == "rigid_strain":
        _check(u, "vector")
        u1, u2 = u.comps
        w = (u2.diff(0)(*b) - u1.diff(1)(*b)) * mpq(1, 2)
        return Field.vector(Poly2.const(u1(*b)) - dy * w, Poly2.const(u2(*b)) + dx * w)
    raise ValueError(f"unknown projection {which}")


# -- piecewise use on the Clough-Tocher split -----------------------------------------


def strain_p2_piecewise(w: PiecewiseField) -> PiecewiseField:
    """Apply ``strain_p2`` about the split point to each piece of ``w``."""
    c = w.split.center
    return w.map(lambda p: strain_p2(p, c))


def tangential_traces(f: Field, e: Edge) -> tuple[Poly1, ...]:
    """``(t^T u t, t^T u n, d_n(t^T u t))`` restricted to the edge (unnormalized t, n)."""
    t, n = e.t, e.n
    m = as_matrix(f)
    tt = sum((m[i][j] * (t[i] * t[j]) for i in range(2) for j in range(2)), Poly2())
    tn = sum((m[i][j] * (t[i] * n[j]) for i in range(2) for j in range(2)), Poly2())
    return (e.restrict(tt), e.restrict(tn), e.restrict(e.dn(tt)))


def kosreg_check(w: PiecewiseField) -> bool:
    """Tangential traces of ``p2 w`` agree across the interior edges of the split."""
    u = strain_p2_piecewise(w)
    for i in range(3):
        e, a, b = w.split.interior_edge(i)
        if tangential_traces(u.pieces[a], e) != tangential_traces(u.pieces[b], e):
            return False
    return True


def omega(base: Sequence | None = None) -> Field:
    """``x^r x^rT`` about the base point."""
    w = outer(xr(), xr())
    if base is None:
        return w
    b = (to_q(base[0]), to_q(base[1]))
    return w.shift((-b[0], -b[1]))
