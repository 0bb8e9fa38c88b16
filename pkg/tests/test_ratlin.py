from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fesys.ratlin import (ChainMapError, ComplexError, MatrixComplex, RatMatrix, block_diag, check_chain_map,
                          cohomology_dims, hstack, induced_cohomology_iso, inverse, is_invertible, kron, mpq,
                          nullspace_basis, qstr, rank, rref, solve, to_q)

small = st.integers(min_value=-3, max_value=3)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


def test_conversions():
    assert to_q("-2/4") == mpq(-1, 2)
    assert to_q(Fraction(3, 9)) == mpq(1, 3)
    assert to_q(True) == 1
    assert qstr(3) == "3/1"
    assert qstr(mpq(-6, 4)) == "-3/2"
    with pytest.raises(TypeError):
        to_q(0.5)


def test_hand_computed_values():
    m = RatMatrix([[2, 1], [1, 1]])
    assert inverse(m) == RatMatrix([[1, -1], [-1, 2]])
    assert solve(m, [3, 2]) == [1, 1]
    singular = RatMatrix([[1, 2], [2, 4]])
    assert rank(singular) == 1
    ns = nullspace_basis(singular)
    assert ns.shape == (2, 1) and (singular @ ns).is_zero()
    assert solve(singular, [1, 0]) is None
    r, pivots = rref(RatMatrix([[0, 2, 4], [1, 1, 1]]))
    assert pivots == [0, 1]
    assert r.row(0) == (1, 0, -1) and r.row(1) == (0, 1, 2)


def test_structured_constructors():
    a = RatMatrix([[1, 2]])
    b = RatMatrix([[0, 1], [1, 0]])
    assert kron(RatMatrix.identity(2), a).shape == (2, 4)
    assert block_diag([a, b]).shape == (3, 4)
    assert hstack([a, a]) == RatMatrix([[1, 2, 1, 2]])
    assert RatMatrix.from_sparse(2, 2, {(0, 1): 5}) == RatMatrix([[0, 5], [0, 0]])
    with pytest.raises(ValueError):
        a + b


@given(matrices())
def test_rank_nullity(rows):
    m = RatMatrix(rows)
    ns = nullspace_basis(m)
    assert rank(m) + ns.cols == m.cols
    assert rank(m) == rank(m.T)
    if ns.cols:
        assert (m @ ns).is_zero()
        assert rank(ns) == ns.cols


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_is_exact(rows):
    m = RatMatrix(rows)
    if is_invertible(m):
        assert inverse(m) @ m == RatMatrix.identity(m.rows)
    else:
        assert rank(m) < m.rows


def _triangle_cochains():
    d0 = RatMatrix([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]])
    d1 = RatMatrix([[1, -1, 1]])
    return MatrixComplex([3, 3, 1], [d0, d1])


def test_cohomology_of_a_triangle_and_its_boundary():
    c = _triangle_cochains()
    assert cohomology_dims(c) == [1, 0, 0]
    loop = MatrixComplex([3, 3], [c.maps[0]])
    assert cohomology_dims(loop) == [1, 1]


def test_complex_rejects_nonzero_square():
    with pytest.raises(ComplexError):
        MatrixComplex([1, 1, 1], [RatMatrix([[1]]), RatMatrix([[1]])])
    with pytest.raises(ComplexError):
        MatrixComplex([2, 1], [RatMatrix([[1]])])


def test_induced_maps():
    c = _triangle_cochains()
    ident = [RatMatrix.identity(n) for n in c.dims]
    assert all(v.bijective for v in induced_cohomology_iso(c, c, ident))
    zero = [RatMatrix.zeros(n, n) for n in c.dims]
    verdicts = induced_cohomology_iso(c, c, zero)
    assert [v.induced_rank for v in verdicts] == [0, 0, 0]
    assert not verdicts[0].bijective
    bad = [RatMatrix.identity(3), RatMatrix.zeros(3, 3), RatMatrix.identity(1)]
    with pytest.raises(ChainMapError) as exc:
        check_chain_map(c, c, bad)
    assert exc.value.degree == 0
