"""Discrete vector bundles with connection on cell complexes.

A bundle assigns a fiber dimension to every cell and an invertible transport
matrix ``t[T, T']: L(T') -> L(T)`` to every codimension-one incidence.

Curvature lives on the squares ``S(L, U)`` of the cubical refinement.  With
raised vertices ``a < b`` it is

    c(U, L) = eta(L, U) * (t[U, L+a] t[L+a, L] - t[U, L+b] t[L+b, L])

and with simplicial orientations the corresponding block of the squared
covariant coboundary equals ``-c(U, L)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .complex import CellComplex, CellId, cube_orientation, cubical_refinement
from .ratlin import (ZERO, MatrixComplex, RatMatrix, cohomology_dims, inverse, is_invertible, kron, mpq,
                     to_q)


class BundleError(ValueError):
    pass


class DiscreteBundle:
    def __init__(self, complex: CellComplex, fiber: Mapping[CellId, int],
                 transport: Mapping[tuple, RatMatrix], check: bool = True):
        self.complex = complex
        self.fiber = {c: int(fiber[c]) for c in complex.cells()}
        self.transport = dict(transport)
        if check:
            for t in complex.cells():
                for f, _ in complex.faces(t):
                    m = self.transport.get((t, f))
                    if m is None:
                        raise BundleError(f"missing transport {t} <- {f}")
                    if m.shape != (self.fiber[t], self.fiber[f]):
                        raise BundleError(f"transport {t} <- {f} has shape {m.shape}")
                    if not is_invertible(m):
                        raise BundleError(f"transport {t} <- {f} is not invertible")

    def t(self, big: CellId, small: CellId) -> RatMatrix:
        return self.transport[(big, small)]

    def restrict(self, sub: CellComplex) -> "DiscreteBundle":
        return DiscreteBundle(sub, {c: self.fiber[c] for c in sub.cells()},
                              {(t, f): self.transport[(t, f)] for t in sub.cells() for f, _ in sub.faces(t)},
                              check=False)


# -- generators -----------------------------------------------------------------


def trivial_bundle(k: CellComplex, dim: int = 1) -> DiscreteBundle:
    eye = RatMatrix.identity(dim)
    return DiscreteBundle(k, {c: dim for c in k.cells()},
                          {(t, f): eye for t in k.cells() for f, _ in k.faces(t)}, check=False)


def random_invertible(n: int, rng: random.Random) -> RatMatrix:
    """``I + N`` with entries of ``N`` in ``{-1/2, 0, 1/2}``, resampled until invertible."""
    half = mpq(1, 2)
    while True:
        m = RatMatrix([[(1 if i == j else 0) + rng.choice((-1, 0, 1)) * half for j in range(n)]
                       for i in range(n)])
        if is_invertible(m):
            return m


def random_bundle(k: CellComplex, dim: int, seed: int) -> DiscreteBundle:
    rng = random.Random(seed)
    tr = {}
    for t in k.cells():
        for f, _ in k.faces(t):
            tr[(t, f)] = random_invertible(dim, rng)
    return DiscreteBundle(k, {c: dim for c in k.cells()}, tr, check=False)


def random_flat_bundle(k: CellComplex, dim: int, seed: int) -> DiscreteBundle:
    """A gauge transform of the trivial bundle by random invertible matrices."""
    rng = random.Random(seed)
    theta = {c: random_invertible(dim, rng) for c in k.cells()}
    return gauge_apply(theta, trivial_bundle(k, dim))


# -- flatness, transport, cochains --------------------------------------------------


def is_flat(b: DiscreteBundle) -> tuple[bool, list[tuple]]:
    bad = []
    k = b.complex
    for t, t2 in k.codim2_pairs():
        mids = k.between(t, t2)
        prods = [b.t(t, m) @ b.t(m, t2) for m in mids]
        if any(p != prods[0] for p in prods[1:]):
            bad.append((t, t2))
    return (not bad, bad)


def transport_path(b: DiscreteBundle, path: Sequence[CellId]) -> RatMatrix:
    """Composite transport along ``path = [T', T_0, ..., T]`` (increasing cells)."""
    if not path:
        raise BundleError("empty path")
    k = b.complex
    out = RatMatrix.identity(b.fiber[path[0]])
    for small, big in zip(path, path[1:]):
        if k.orientation(big, small) == 0:
            raise BundleError(f"{small} is not a codimension-one face of {big}")
        out = b.t(big, small) @ out
    return out


def chains_between(k: CellComplex, big: CellId, small: CellId) -> list[list]:
    """All codim-1 chains from ``small`` up to ``big``."""
    if big == small:
        return [[small]]
    out = []
    for f in k.between(big, small):
        for ch in chains_between(k, f, small):
            out.append(ch + [big])
    return out


def canonical_transport(b: DiscreteBundle, big: CellId, small: CellId) -> RatMatrix:
    return transport_path(b, chains_between(b.complex, big, small)[0])


def path_independence_check(b: DiscreteBundle) -> bool:
    k = b.complex
    for t in k.cells():
        for s in k.subcells(t):
            ms = [transport_path(b, ch) for ch in chains_between(k, t, s)]
            if any(m != ms[0] for m in ms[1:]):
                return False
    return True


def covariant_coboundary(b: DiscreteBundle, k: int) -> RatMatrix:
    cx = b.complex
    rows, cols = cx.cells(k + 1), cx.cells(k)
    grid = [[None] * len(cols) for _ in rows]
    idx = {c: j for j, c in enumerate(cols)}
    for i, t in enumerate(rows):
        for f, s in cx.faces(t):
            m = b.t(t, f)
            grid[i][idx[f]] = m if s == 1 else -m
    return RatMatrix.block(grid, [b.fiber[t] for t in rows], [b.fiber[c] for c in cols])


def cochain_dim(b: DiscreteBundle, k: int) -> int:
    return sum(b.fiber[c] for c in b.complex.cells(k))


def cochain_complex(b: DiscreteBundle) -> MatrixComplex:
    n = b.complex.dim
    dims = [cochain_dim(b, k) for k in range(n + 1)]
    return MatrixComplex(dims, [covariant_coboundary(b, k) for k in range(n)])


def local_cohomology(b: DiscreteBundle, cell: CellId) -> list[int]:
    """Cohomology dimensions of ``C(S(T), L)`` for the closure of ``cell``."""
    sub = b.complex.closure_complex(cell)
    return cohomology_dims(cochain_complex(b.restrict(sub)))


# -- curvature and Bianchi --------------------------------------------------------


def _require_simplicial(b: DiscreteBundle):
    if any(b.complex.cell(c).kind != "simplex" for c in b.complex.cells()):
        raise BundleError("curvature is defined here for simplicial complexes")


def curvature(b: DiscreteBundle) -> dict[tuple, RatMatrix]:
    """Curvature on each square ``(L, U)`` of the cubical refinement."""
    _require_simplicial(b)
    out = {}
    for u, lower in b.complex.codim2_pairs():
        a, bb = [v for v in u if v not in lower]
        la = tuple(sorted(lower + (a,)))
        lb = tuple(sorted(lower + (bb,)))
        diff = b.t(u, la) @ b.t(la, lower) - b.t(u, lb) @ b.t(lb, lower)
        out[(lower, u)] = diff if cube_orientation(lower, u) == 1 else -diff
    return out


def squared_coboundary_block(b: DiscreteBundle, k: int, big: CellId, small: CellId) -> RatMatrix:
    """Block ``(big, small)`` of ``delta_{k+1} delta_k`` computed from incidences."""
    cx = b.complex
    acc = RatMatrix.zeros(b.fiber[big], b.fiber[small])
    for m in cx.between(big, small):
        s = cx.orientation(big, m) * cx.orientation(m, small)
        acc = acc + (b.t(big, m) @ b.t(m, small)).scale(s)
    return acc


@dataclass
class EndBundle:
    """End(L) over the cubical refinement, as a discrete bundle on vectorized maps.

    The fiber at ``S(L, U)`` holds maps ``L(L) -> L(U)`` stored column-major.
    Lowering the upper cell post-composes with ``t[U, U-i]``; raising the lower
    cell pre-composes with ``t[L+i, L]``.
    """

    base: DiscreteBundle
    cubes: CellComplex
    bundle: DiscreteBundle

    def vec(self, x: RatMatrix) -> list:
        return [x[i, j] for j in range(x.cols) for i in range(x.rows)]


def end_bundle(b: DiscreteBundle) -> EndBundle:
    _require_simplicial(b)
    cubes = cubical_refinement(b.complex)
    fiber = {c: b.fiber[c[0]] * b.fiber[c[1]] for c in cubes.cells()}
    tr = {}
    for s in cubes.cells():
        lower, upper = s
        for f, _ in cubes.faces(s):
            fl, fu = f
            if fl == lower:  # lower face: upper cell dropped a vertex
                tr[(s, f)] = kron(RatMatrix.identity(b.fiber[lower]), b.t(upper, fu))
            else:  # upper face: lower cell raised by one vertex
                tr[(s, f)] = kron(b.t(fl, lower).T, RatMatrix.identity(b.fiber[upper]))
    return EndBundle(b, cubes, DiscreteBundle(cubes, fiber, tr, check=False))


def bianchi_terms(b: DiscreteBundle) -> dict[tuple, RatMatrix]:
    """``delta_End(curvature)`` on each 3-cube, as maps ``L(L) -> L(U)``."""
    curv = curvature(b)
    cubes = cubical_refinement(b.complex)
    out = {}
    for s in cubes.cells(3):
        lower, upper = s
        acc = RatMatrix.zeros(b.fiber[upper], b.fiber[lower])
        for f, sign in cubes.faces(s):
            fl, fu = f
            c = curv[f]
            term = b.t(upper, fu) @ c if fl == lower else c @ b.t(fl, lower)
            acc = acc + term.scale(sign)
        out[s] = acc
    return out


def bianchi_residual(b: DiscreteBundle) -> mpq:
    return max((m.max_abs() for m in bianchi_terms(b).values()), default=ZERO)


# -- gauge transformations --------------------------------------------------------


def _check_theta(theta: Mapping, b: DiscreteBundle):
    for c in b.complex.cells():
        th = theta[c]
        if th.shape != (b.fiber[c], b.fiber[c]) or not is_invertible(th):
            raise BundleError(f"gauge transformation is not invertible on cell {c}")


def gauge_apply(theta: Mapping[CellId, RatMatrix], b: DiscreteBundle) -> DiscreteBundle:
    _check_theta(theta, b)
    inv = {c: inverse(theta[c]) for c in b.complex.cells()}
    tr = {(t, f): theta[t] @ m @ inv[f] for (t, f), m in b.transport.items()}
    return DiscreteBundle(b.complex, b.fiber, tr, check=False)


def gauge_check(theta: Mapping[CellId, RatMatrix], b: DiscreteBundle, b2: DiscreteBundle) -> bool:
    return all(theta[t] @ m == b2.t(t, f) @ theta[f] for (t, f), m in b.transport.items())


def gauge_cochain_map(theta: Mapping[CellId, RatMatrix], b: DiscreteBundle, k: int) -> RatMatrix:
    from .ratlin import block_diag
    return block_diag([theta[c] for c in b.complex.cells(k)])


def trivializing_gauge(b: DiscreteBundle, cell: CellId) -> dict[CellId, RatMatrix]:
    """``theta_S = t[T, S]`` on the closure of ``T`` (composite transport)."""
    return {s: canonical_transport(b, cell, s) for s in b.complex.subcells(cell)}


# -- exponential fitting --------------------------------------------------------------


@dataclass(frozen=True)
class FormalExp:
    """The scalar ``sign * exp(exponent)`` with a rational exponent."""

    exponent: mpq
    sign: int = 1

    def __mul__(self, other: "FormalExp") -> "FormalExp":
        return FormalExp(self.exponent + other.exponent, self.sign * other.sign)

    def inverse(self) -> "FormalExp":
        return FormalExp(-self.exponent, self.sign)


@dataclass
class ExpFittingBundle:
    """Line bundle with transports ``exp(phi_T(x_T'))``, ``phi_T(x) = A (x - x_T)``."""

    complex: CellComplex
    A: tuple
    transport: dict

    def t(self, big, small) -> FormalExp:
        return self.transport[(big, small)]

    def path(self, chain: Sequence) -> FormalExp:
        out = FormalExp(mpq(0))
        for small, big in zip(chain, chain[1:]):
            out = self.t(big, small) * out
        return out

    def is_flat(self) -> tuple[bool, list]:
        bad = []
        for t, t2 in self.complex.codim2_pairs():
            vals = {self.t(t, m) * self.t(m, t2) for m in self.complex.between(t, t2)}
            if len(vals) > 1:
                bad.append((t, t2))
        return (not bad, bad)

    def curvature_is_zero(self) -> dict[tuple, bool]:
        """Per square, whether the two composite transports coincide exactly."""
        out = {}
        for u, lower in self.complex.codim2_pairs():
            a, b = [v for v in u if v not in lower]
            la, lb = tuple(sorted(lower + (a,))), tuple(sorted(lower + (b,)))
            out[(lower, u)] = self.t(u, la) * self.t(la, lower) == self.t(u, lb) * self.t(lb, lower)
        return out

    def to_rational(self) -> DiscreteBundle:
        """The bundle as rational matrices, available when every exponent is zero."""
        if any(v.exponent != 0 for v in self.transport.values()):
            raise BundleError("transports are transcendental; only the formal representation is exact")
        return DiscreteBundle(self.complex, {c: 1 for c in self.complex.cells()},
                              {k: RatMatrix([[v.sign]]) for k, v in self.transport.items()})


def exponential_fitting_bundle(mesh: CellComplex, A: Sequence) -> ExpFittingBundle:
    A = tuple(to_q(a) for a in A)
    tr = {}
    for t in mesh.cells():
        xt = mesh.inpoint(t)
        for f, _ in mesh.faces(t):
            xf = mesh.inpoint(f)
            tr[(t, f)] = FormalExp(sum(a * (p - q) for a, p, q in zip(A, xf, xt)))
    return ExpFittingBundle(mesh, A, tr)
