import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fesys.bundle import (BundleError, DiscreteBundle, FormalExp, bianchi_residual, canonical_transport,
                          chains_between, cochain_complex, covariant_coboundary, curvature, end_bundle,
                          exponential_fitting_bundle, gauge_apply, gauge_check, inverse, is_flat,
                          local_cohomology, path_independence_check, random_bundle, random_flat_bundle,
                          random_invertible, squared_coboundary_block, transport_path, trivial_bundle,
                          trivializing_gauge)
from fesys.complex import simplex_complex
from fesys.meshes import builtin_mesh
from fesys.ratlin import RatMatrix, cohomology_dims, mpq

seeds = st.integers(0, 2**32)


def _twisted_triangle():
    """Line bundle on a triangle: transport 2 from edge (0,1) into the face, 1 elsewhere."""
    k = simplex_complex(2)
    one = RatMatrix([[1]])
    tr = {(t, f): one for t in k.cells() for f, _ in k.faces(t)}
    tr[((0, 1, 2), (0, 1))] = RatMatrix([[2]])
    return DiscreteBundle(k, {c: 1 for c in k.cells()}, tr)


def test_curvature_hand_example():
    b = _twisted_triangle()
    curv = curvature(b)
    assert curv[((0,), (0, 1, 2))] == RatMatrix([[1]])
    assert curv[((1,), (0, 1, 2))] == RatMatrix([[-1]])
    assert curv[((2,), (0, 1, 2))] == RatMatrix([[0]])
    flat, bad = is_flat(b)
    assert not flat and sorted(bad) == [((0, 1, 2), (0,)), ((0, 1, 2), (1,))]
    assert not path_independence_check(b)


def test_squared_coboundary_matches_blocks():
    b = _twisted_triangle()
    dd = covariant_coboundary(b, 1) @ covariant_coboundary(b, 0)
    cols = b.complex.cells(0)
    for j, v in enumerate(cols):
        assert dd[0, j] == squared_coboundary_block(b, 0, (0, 1, 2), v)[0, 0]
    assert dd == RatMatrix([[-1, 1, 0]])


def test_validation():
    k = simplex_complex(1)
    with pytest.raises(BundleError):
        DiscreteBundle(k, {c: 1 for c in k.cells()}, {((0, 1), (0,)): RatMatrix([[0]]),
                                                       ((0, 1), (1,)): RatMatrix([[1]])})
    with pytest.raises(BundleError):
        DiscreteBundle(k, {c: 1 for c in k.cells()}, {((0, 1), (0,)): RatMatrix([[1]])})
    with pytest.raises(BundleError):
        transport_path(trivial_bundle(k), [(0,), (1,)])


@given(seeds, st.integers(1, 3))
def test_flat_bundles(seed, dim):
    k = simplex_complex(3)
    b = random_flat_bundle(k, dim, seed)
    assert is_flat(b)[0] and path_independence_check(b)
    assert all(c.is_zero() for c in curvature(b).values())
    assert cohomology_dims(cochain_complex(b)) == [dim, 0, 0, 0]
    assert local_cohomology(b, (0, 2, 3)) == [dim, 0, 0]
    theta = trivializing_gauge(b, (0, 1, 2, 3))
    assert all(m == RatMatrix.identity(dim) for m in gauge_apply(theta, b).transport.values())


@given(seeds, st.integers(1, 3))
def test_bianchi_identity(seed, dim):
    assert bianchi_residual(random_bundle(simplex_complex(3), dim, seed)) == 0


@given(seeds)
def test_gauge_conjugates_curvature(seed):
    rng = random.Random(seed)
    k = simplex_complex(2)
    b = random_bundle(k, 2, seed)
    theta = {c: random_invertible(2, rng) for c in k.cells()}
    b2 = gauge_apply(theta, b)
    assert gauge_check(theta, b, b2)
    c1, c2 = curvature(b), curvature(b2)
    for lo, up in c1:
        assert c2[(lo, up)] == theta[up] @ c1[(lo, up)] @ inverse(theta[lo])


def test_random_bundles_are_usually_curved():
    curved = sum(not is_flat(random_bundle(simplex_complex(2), 2, s))[0] for s in range(10))
    assert curved >= 8


def test_chains_and_canonical_transport():
    k = simplex_complex(2)
    assert len(chains_between(k, (0, 1, 2), (0,))) == 2
    b = random_flat_bundle(k, 2, 5)
    a, c = chains_between(k, (0, 1, 2), (1,))
    assert transport_path(b, a) == transport_path(b, c) == canonical_transport(b, (0, 1, 2), (1,))


def test_end_bundle_fibers():
    b = random_bundle(simplex_complex(2), 2, 3)
    eb = end_bundle(b)
    assert eb.cubes.counts() == (7, 9, 3)
    assert set(eb.bundle.fiber.values()) == {4}
    assert eb.vec(RatMatrix([[1, 2], [3, 4]])) == [1, 3, 2, 4]


def test_exponential_fitting():
    mesh = builtin_mesh("annulus").complex()
    eb = exponential_fitting_bundle(mesh, (1, mpq(-1, 2)))
    assert eb.is_flat()[0] and all(eb.curvature_is_zero().values())
    assert FormalExp(mpq(1)) * FormalExp(mpq(2), -1) == FormalExp(mpq(3), -1)
    assert FormalExp(mpq(1, 3)).inverse() == FormalExp(mpq(-1, 3))
    with pytest.raises(BundleError):
        eb.to_rational()
    triv = exponential_fitting_bundle(mesh, (0, 0)).to_rational()
    assert cohomology_dims(cochain_complex(triv)) == [1, 1, 0]
