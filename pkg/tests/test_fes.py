import pytest
from hypothesis import given
from hypothesis import strategies as st

from fesys.bundle import random_bundle, random_flat_bundle, trivial_bundle
from fesys.complex import simplex_complex
from fesys.fes import (FESystem, a0_basis, cochain_system, compatibility_check, de_rham_verify,
                       dimension_identity_check, dof_unisolvence_check, flabby_check, glue, harmonic_dof_system,
                       is_compatible, minimal_subsystem, minimality_check, quadrilateral_p1_system,
                       a0_cohomology_criterion, unisolvence_report, validate_system, DofCountError, DofSystem)
from fesys.meshes import builtin_mesh
from fesys.ratlin import RatMatrix


def test_cochains_on_a_triangle():
    s = cochain_system(trivial_bundle(simplex_complex(2)))
    assert s.dims_of((0, 1, 2)) == (3, 3, 1)
    assert s.dims_of((0, 1)) == (2, 1, 0)
    assert validate_system(s).ok
    assert is_compatible(s)
    assert all(a0_cohomology_criterion(s, t) for t in s.cells())
    res = de_rham_verify(s)
    assert res.isomorphic and res.fe_dims == [1, 0, 0]


def test_cochains_are_minimal_and_harmonic_dofs_unisolvent():
    s = cochain_system(trivial_bundle(simplex_complex(2), 2))
    assert minimality_check(s).ok
    assert [a0_basis(s, (0, 1, 2), k).cols for k in range(3)] == [0, 0, 2]
    assert unisolvence_report(s, harmonic_dof_system(s)).ok
    m = minimal_subsystem(s)
    assert m.dims == s.dims


@given(st.integers(0, 2**32), st.integers(1, 2))
def test_flat_cochain_systems_are_compatible(seed, dim):
    s = cochain_system(random_flat_bundle(simplex_complex(2), dim, seed))
    assert validate_system(s).ok
    assert compatibility_check(s).meta["compatible"]


def test_curved_bundle_breaks_dd():
    s = cochain_system(random_bundle(simplex_complex(2), 1, 4))
    rep = validate_system(s)
    assert not rep.ok
    assert {c.name for c in rep.failures()} <= {"dd=0", "stokes", "rd=dr"}


def test_annulus_cochains():
    s = cochain_system(trivial_bundle(builtin_mesh("annulus").complex()))
    res = de_rham_verify(s)
    assert res.fe_dims == res.cochain_dims == [1, 1, 0]
    assert res.isomorphic
    for k in range(3):
        rep = dimension_identity_check(s, k)
        assert rep.ok and rep.meta["glued"] == rep.meta["sum_a0"]
    assert glue(s, 0).dim == 16


def test_quadrilateral_is_not_flabby():
    s = quadrilateral_p1_system()
    assert validate_system(s).ok
    assert not flabby_check(s, "Q", 0)
    rep = dimension_identity_check(s, 0)
    assert rep.ok
    assert (rep.meta["glued"], rep.meta["sum_a0"], rep.meta["flabby"]) == (3, 4, False)
    assert not is_compatible(s)


def test_tampered_restriction_is_detected():
    s = cochain_system(trivial_bundle(simplex_complex(2)))
    key = ((0, 1), (0, 1, 2), 0)
    r = dict(s.r)
    r[key] = RatMatrix([[0, 1, 0], [1, 0, 0]])
    bad = s.replace(r=r)
    names = {c.name for c in validate_system(bad).failures()}
    assert "rd=dr" in names or "restriction-composition" in names


def test_merge_rejects_disagreement():
    s = cochain_system(trivial_bundle(simplex_complex(1)))
    d = dict(s.d)
    d[((0, 1), 0)] = RatMatrix([[1, 1]])
    with pytest.raises(ValueError):
        FESystem.merge(s.complex, s.bundle, [s, s.replace(d=d)])


def test_dof_count_mismatch():
    s = cochain_system(trivial_bundle(simplex_complex(1)))
    with pytest.raises(DofCountError):
        dof_unisolvence_check(s, DofSystem({}), (0, 1), 0)
