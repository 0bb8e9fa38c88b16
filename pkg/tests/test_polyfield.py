import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fesys.polyfield import (X1, X2, CTSplit, Edge, Field, PiecewiseField, Poly1, Poly2, PWSpace, ShapeError,
                             ambient_basis, chi, dop, integrate_cell, integrate_poly, jk_identities_check, l2_pairing,
                             orient2d, random_field, random_poly, rigid_motion)
from fesys.ratlin import mpq

REF = ((0, 0), (1, 0), (0, 1))
seeds = st.integers(0, 2**32)


def test_reference_moments():
    assert integrate_poly(Poly2.const(1), REF) == mpq(1, 2)
    assert integrate_poly(X1, REF) == mpq(1, 6)
    assert integrate_poly(X1 * X1, REF) == mpq(1, 12)
    assert integrate_poly(X1 * X2, REF) == mpq(1, 24)
    # orientation does not matter, scaling does
    assert integrate_poly(Poly2.const(1), ((0, 0), (0, 2), (2, 0))) == 2


def test_poly1():
    p = Poly1([1, 2, 3])
    assert p(2) == 17
    assert p.deriv() == Poly1([2, 6])
    assert p.integrate01() == 3
    assert chi().integrate01() == 0 and chi()(1) == 1
    assert (Poly1([1, 1]) * Poly1([1, -1])) == Poly1([1, 0, -1])
    assert Poly1([0, 0]).degree == -1


def test_poly2_algebra():
    p = (X1 + 1) * (X2 - 2)
    assert p(1, 1) == -2
    assert p.diff(0) == X2 - 2
    assert p.degree == 2
    assert p.homogeneous_part(1) == X1 * -2 + X2
    assert p.restrict((0, 0), (1, 1)) == Poly1([-2, -1, 1])
    assert p.shift((1, 0))(0, 0) == p(1, 0) == -4


def test_edge_frame():
    e = Edge.of((1, 0), (1, 2))
    assert e.t == (0, 2) and e.n == (-2, 0) and e.l2 == 4
    assert e.point(mpq(1, 2)) == (1, 1)
    assert e.dn(X1 * X1)(1, 0) == -4
    assert integrate_cell(Field.scalar(X2), e) == (1,)


def test_split_geometry():
    s = CTSplit(REF)
    assert s.center == (mpq(1, 3), mpq(1, 3))
    areas = [abs(orient2d(*t)) for t in s.triangles]
    assert sum(areas) == 1 and len(set(areas)) == 1
    with pytest.raises(ValueError):
        CTSplit(REF, (1, 1))
    with pytest.raises(ValueError):
        CTSplit(((0, 0), (1, 1), (2, 2)))


def test_ambient_dimensions():
    s = CTSplit(REF)
    assert len(ambient_basis(s, "scalar", 3)) == 30
    assert len(ambient_basis(s, "sym", 1)) == 27
    sp = PWSpace(s, "vector", 1, ambient_basis(s, "vector", 1))
    f = PiecewiseField.from_global(s, rigid_motion(1, 2, 3))
    assert sp.contains(f)
    assert sp.field(sp.coords(f)) == f


@given(seeds, st.integers(0, 4))
def test_complexes_compose_to_zero(seed, deg):
    rng = random.Random(seed)
    u = random_field(rng, "scalar", deg + 2)
    v = random_field(rng, "vector", deg + 1)
    assert dop("div_mat", dop("airy", u)).is_zero()
    assert dop("sven", dop("defo", v)).is_zero()
    assert dop("curl_row", dop("grad", u)).is_zero()
    assert dop("div_row", dop("curl_scalar", u)).is_zero()
    assert all(jk_identities_check(u).values())
    assert all(jk_identities_check(random_field(rng, "sym", deg)).values())


@given(seeds)
def test_airy_sven_adjoint_on_bubbles(seed):
    # int sven(s) u = int s : airy u when u and grad u vanish on the boundary
    rng = random.Random(seed)
    b = (X1 * X2 * (1 - X1 - X2)) * (X1 * X2 * (1 - X1 - X2))
    u = Field.scalar(b * random_poly(rng, 1))
    s = random_field(rng, "sym", 2)
    assert l2_pairing(dop("sven", s), u, REF) == l2_pairing(s, dop("airy", u), REF)


def test_rigid_motions_and_shapes():
    assert dop("defo", rigid_motion(1, -2, mpq(1, 3))).is_zero()
    with pytest.raises(ShapeError):
        dop("airy", Field.vector(X1, X2))
    with pytest.raises(ShapeError):
        Field.sym(X1, X2, X1) + Field.scalar(X1)
    assert random_poly(random.Random(0), 2, homogeneous=True).homogeneous_part(2) == \
        random_poly(random.Random(0), 2, homogeneous=True)
