import random

import pytest

from fesys.elasticity2d import FAMILIES, assemble, dof_values, get_family
from fesys.elasticity2d.checks import (REFERENCE, build_wt, commuting_interpolation_check, element,
                                       element_report, interpolation_coefficients, jm_stress_counts,
                                       kernel_fields, random_probes, unisolvence_with_control,
                                       wt_alternative_check)
from fesys.elasticity2d.system import cell_sign, local_dofs
from fesys.fes import dof_matrix, glue, validate_system
from fesys.meshes import builtin_mesh
from fesys.polyfield import CTSplit, Field, Poly2, dop
from fesys.ratlin import is_invertible, mpq

CLOCKWISE = ((0, 0), (0, 1), (1, 0))
SKEW = ((mpq(-1, 3), 0), (2, mpq(1, 2)), (mpq(1, 3), 3))

REFERENCE_DIMS = {"jm": (12, 15, 6), "jm-min": (9, 9, 3), "strain-high": (24, 24, 3),
                  "strain-high-min": (18, 18, 3), "strain-low": (15, 15, 3), "strain-low-min": (9, 9, 3)}
SQUARE_DIMS = {"jm": [17, 26, 12], "jm-min": [12, 15, 6], "strain-high": [34, 37, 6],
               "strain-high-min": [24, 27, 6], "strain-low": [22, 25, 6], "strain-low-min": [12, 15, 6]}


def test_jm_counts():
    assert jm_stress_counts(CTSplit(REFERENCE)) == {"ambient": 27, "constraints": 12, "constraint_rank": 12,
                                                    "dimension": 15}
    assert jm_stress_counts(CTSplit(SKEW, (mpq(1, 2), 1)))["dimension"] == 15


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_reference_dims(name):
    assert element(name).dims == REFERENCE_DIMS[name]
    assert element(name, SKEW, (mpq(1, 2), 1)).dims == REFERENCE_DIMS[name]


def test_sign_conventions():
    assert cell_sign(get_family("jm"), REFERENCE) == -1
    assert cell_sign(get_family("jm"), CLOCKWISE) == 1
    assert cell_sign(get_family("strain-low"), REFERENCE) == 1
    assert cell_sign(get_family("strain-low"), CLOCKWISE) == -1


@pytest.mark.parametrize("name", ["jm", "strain-low"])
def test_clockwise_and_offcenter_elements(name):
    rep = element_report(name, CLOCKWISE, center=(mpq(1, 5), mpq(1, 2)), probes=4)
    assert rep.ok, [c.name for c in rep.failures()]


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_square_assembly(name):
    g = assemble(name, builtin_mesh("square").complex())
    assert validate_system(g.system).ok
    dims = [glue(g.system, k).dim for k in range(3)]
    assert dims == SQUARE_DIMS[name]
    assert dims[0] - dims[1] + dims[2] == 3


def test_kernel_interpolates_exactly():
    el = element("strain-low", SKEW)
    dofs = local_dofs(el)
    for f in kernel_fields(el.family):
        c = interpolation_coefficients(el, 0, f, dofs)
        assert el.spaces[0].field(c) == el.lift(f)
    assert len(dof_values(el, 2, Field.scalar(Poly2.const(1)))) == 3


def test_duplicate_functional_control():
    el = element("jm-min")
    rep = unisolvence_with_control(el)
    assert rep.ok
    dofs = local_dofs(el)
    key = next(k for k, m in dofs.funcs.items() if k[1] == 1 and m.rows >= 2)
    mutated = dofs.with_functional(key[0], 1, 1, dofs.funcs[key].row(0))
    m, _ = dof_matrix(el.system, mutated, el.ids, 1)
    assert not is_invertible(m)


def test_commuting_interpolation_small():
    el = element("strain-high", SKEW)
    probes = random_probes(el.family, random.Random(3), 4)
    assert commuting_interpolation_check(el, probes).ok


def test_wt_basis():
    wt = build_wt(CTSplit(SKEW))
    assert wt.dim == 3 and wt.report.ok
    for u, v in zip(wt.basis, wt.targets):
        assert dop("sven", u) == v
    assert wt_alternative_check(SKEW).ok


def test_unknown_family():
    with pytest.raises(ValueError):
        get_family("nope")
    with pytest.raises(ValueError):
        element("jm", ((0, 0), (1, 1), (2, 2)))
