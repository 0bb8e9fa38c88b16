import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fesys.meshes import (BUILTIN, MeshError, builtin_mesh, load_mesh, parse_mesh, parse_point, parse_triangle,
                          random_triangle)
from fesys.polyfield import orient2d
from fesys.ratlin import mpq


@pytest.mark.parametrize("name, counts", [("reference", (3, 1)), ("square", (4, 2)), ("disk", (9, 8)),
                                          ("annulus", (16, 16))])
def test_builtin_meshes(name, counts):
    m = builtin_mesh(name)
    assert (len(m.vertices), len(m.triangles)) == counts
    assert parse_mesh(m.to_text(), name) == m


def test_text_format():
    m = parse_mesh("# tiny\nv 0 0\nv 1/2 0   # comment\nv 0 -3/4\n\nt 0 1 2\n")
    assert m.vertices[1] == (mpq(1, 2), 0) and m.vertices[2] == (0, mpq(-3, 4))
    assert m.to_text().splitlines()[-1] == "t 0 1 2"


@pytest.mark.parametrize("text, message", [
    ("v 0 0\nv 1 0\nt 0 1 2\n", "out of range"),
    ("v 0 0\nv 1 0\nv 2 0\nt 0 1 2\n", "degenerate"),
    ("v 0 0\nv 1 0\nv 0 1\nt 0 1 2\nt 2 1 0\n", "twice"),
    ("v 0 0\nv 1 0\nv 0 1\nt 0 1 1\n", "repeats"),
    ("v 0 0\nv 0 0\n", "duplicate"),
    ("v 0 x\n", "bad rational"),
    ("q 1 2\n", "cannot parse"),
    ("v 0 0\nv 2 0\nv 0 2\nv 1 0\nv 1 -1\nt 0 1 2\nt 0 3 4\n", "hangs"),
])
def test_invalid_meshes(text, message):
    with pytest.raises(MeshError, match=message):
        parse_mesh(text)


def test_loading(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text(BUILTIN["square"])
    assert load_mesh(str(p)).triangles == builtin_mesh("square").triangles
    with pytest.raises(MeshError):
        builtin_mesh("torus")
    with pytest.raises(OSError):
        load_mesh(str(tmp_path / "missing.txt"))


def test_point_and_triangle_specs():
    assert parse_point("1/3, -2") == (mpq(1, 3), -2)
    assert parse_triangle("0,0;1,0;0,1") == ((0, 0), (1, 0), (0, 1))
    with pytest.raises(MeshError):
        parse_point("1")
    for bad in ("0,0;1,1;2,2", "0,0;1,0"):
        with pytest.raises(MeshError):
            parse_triangle(bad)


@given(st.integers(0, 2**32))
def test_random_triangles_are_nondegenerate(seed):
    pts = random_triangle(random.Random(seed))
    assert orient2d(*pts) != 0
    assert all(p[0].denominator in (1, 3) for p in pts)
