import pytest

from fesys.bundle import cochain_complex, trivial_bundle
from fesys.complex import Cell, CellComplex, cube_orientation, cubical_refinement, permutation_sign, simplex_complex
from fesys.meshes import builtin_mesh
from fesys.ratlin import cohomology_dims


def test_triangle_incidences():
    k = simplex_complex(2)
    assert k.counts() == (3, 3, 1)
    assert k.faces((0, 1, 2)) == (((0, 1), 1), ((0, 2), -1), ((1, 2), 1))
    assert k.orientation((0, 2), (0,)) == -1
    assert k.orientation((0, 2), (1,)) == 0
    assert sorted(k.cofaces((0,))) == [((0, 1), -1), ((0, 2), -1)]
    assert k.between((0, 1, 2), (1,)) == [(0, 1), (1, 2)]
    assert k.maximal_cells() == [(0, 1, 2)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_simplex_is_acyclic(n):
    k = simplex_complex(n)
    assert cohomology_dims(cochain_complex(trivial_bundle(k))) == [1] + [0] * n


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((2, 0, 1)) == 1
    assert cube_orientation((1,), (0, 1, 2)) == -1


@pytest.mark.parametrize("name, betti, euler", [("square", [1, 0, 0], 1), ("disk", [1, 0, 0], 1),
                                                 ("annulus", [1, 1, 0], 0)])
def test_mesh_betti_numbers(name, betti, euler):
    mesh = builtin_mesh(name)
    assert mesh.euler_characteristic == euler
    assert cohomology_dims(cochain_complex(trivial_bundle(mesh.complex()))) == betti


def test_subcomplexes():
    k = simplex_complex(3)
    assert k.boundary_complex((0, 1, 2, 3)).counts() == (4, 6, 4)
    assert k.closure_complex((0, 2)).counts() == (2, 1)
    assert len(k.subcells((0, 1, 2))) == 7
    assert k.is_face((1,), (0, 1, 2)) and not k.is_face((3,), (0, 1, 2))


def test_cubical_refinement_counts():
    # k-cubes of the refinement are pairs (L, U) with codim k
    cubes = cubical_refinement(simplex_complex(2))
    assert cubes.counts() == (7, 9, 3)
    cubes3 = cubical_refinement(simplex_complex(3))
    assert cubes3.counts() == (15, 28, 18, 4)
    assert cohomology_dims(cochain_complex(trivial_bundle(cubes3))) == [1, 0, 0, 0]


def test_closure_violation_and_bad_incidence():
    with pytest.raises(ValueError):
        CellComplex([Cell((0, 1), 1, (0, 1))], {(0, 1): [((0,), -1), ((1,), 1)]})
    with pytest.raises(ValueError):
        CellComplex.simplicial([(0, 0, 1)])
    cells = [Cell((0,), 0, (0,)), Cell((1,), 0, (1,)), Cell((0, 1), 1, (0, 1))]
    with pytest.raises(ValueError):
        CellComplex(cells, {(0, 1): [((0,), 2), ((1,), 1)]})


def test_inpoint_weights():
    k = CellComplex.simplicial([(0, 1, 2)], {0: (0, 0), 1: (3, 0), 2: (0, 3)}, {(0, 1): (1, 2)})
    assert k.inpoint((0, 1, 2)) == (1, 1)
    assert k.inpoint((0, 1)) == (2, 0)
    with pytest.raises(ValueError):
        CellComplex.simplicial([(0, 1)], {0: (0,), 1: (1,)}, {(0, 1): (0, 1)}).inpoint((0, 1))
    assert simplex_complex(1).dim == 1
