"""Plain-text triangle meshes and the built-in test meshes.

Format, one item per line::

    # comment
    v 1/2 -3/4      (vertex with rational coordinates; ids are 0-based in order)
    t 0 1 2         (triangle by vertex ids)
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .complex import CellComplex
from .polyfield import orient2d
from .ratlin import mpq, qstr, to_q


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class Mesh:
    vertices: tuple
    triangles: tuple
    name: str = ""

    def complex(self) -> CellComplex:
        return CellComplex.simplicial(self.triangles, {i: v for i, v in enumerate(self.vertices)})

    def to_text(self) -> str:
        lines = [f"# {self.name}"] if self.name else []
        lines += [f"v {qstr(x)} {qstr(y)}" for x, y in self.vertices]
        lines += ["t " + " ".join(str(i) for i in t) for t in self.triangles]
        return "\n".join(lines) + "\n"

    @property
    def euler_characteristic(self) -> int:
        edges = {tuple(sorted(e)) for t in self.triangles for e in combinations(t, 2)}
        return len(self.vertices) - len(edges) + len(self.triangles)


def _rational(tok: str) -> mpq:
    try:
        return to_q(Fraction(tok))
    except (ValueError, ZeroDivisionError) as exc:
        raise MeshError(f"bad rational {tok!r}") from exc


def parse_mesh(text: str, name: str = "") -> Mesh:
    verts: list = []
    tris: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 3:
            verts.append((_rational(parts[1]), _rational(parts[2])))
        elif parts[0] == "t" and len(parts) == 4:
            try:
                tris.append(tuple(int(p) for p in parts[1:]))
            except ValueError as exc:
                raise MeshError(f"line {lineno}: bad triangle {line!r}") from exc
        else:
            raise MeshError(f"line {lineno}: cannot parse {raw!r}")
    mesh = Mesh(tuple(verts), tuple(tris), name)
    check_mesh(mesh)
    return mesh


def _on_segment(p, a, b) -> bool:
    if orient2d(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def check_mesh(mesh: Mesh) -> None:
    """Raise ``MeshError`` for bad indices, degenerate triangles or non-conforming edges."""
    n = len(mesh.vertices)
    if len(set(mesh.vertices)) != n:
        raise MeshError("duplicate vertex coordinates")
    seen = set()
    for t in mesh.triangles:
        if any(not 0 <= i < n for i in t):
            raise MeshError(f"triangle {t} has an index out of range")
        if len(set(t)) != 3:
            raise MeshError(f"triangle {t} repeats a vertex")
        if orient2d(*(mesh.vertices[i] for i in t)) == 0:
            raise MeshError(f"triangle {t} is degenerate")
        key = tuple(sorted(t))
        if key in seen:
            raise MeshError(f"triangle {t} appears twice")
        seen.add(key)
    # conformity: no vertex may lie inside an edge it is not an endpoint of
    edges = {tuple(sorted(e)) for t in mesh.triangles for e in combinations(t, 2)}
    used = {i for t in mesh.triangles for i in t}
    for a, b in edges:
        pa, pb = mesh.vertices[a], mesh.vertices[b]
        for v in used:
            if v not in (a, b) and _on_segment(mesh.vertices[v], pa, pb):
                raise MeshError(f"vertex {v} hangs on edge {(a, b)}")
    # each edge borders at most two triangles
    count: dict = {}
    for t in mesh.triangles:
        for e in combinations(sorted(t), 2):
            count[e] = count.get(e, 0) + 1
    bad = [e for e, c in count.items() if c > 2]
    if bad:
        raise MeshError(f"edges shared by more than two triangles: {bad}")


# -- built-in meshes ------------------------------------------------------------------------

_RING = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]


def _text(vertices: Sequence, triangles: Sequence, name: str) -> str:
    return Mesh(tuple((to_q(x), to_q(y)) for x, y in vertices), tuple(triangles), name).to_text()


REFERENCE_TEXT = _text([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)], "reference triangle")
SQUARE_TEXT = _text([(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 1, 2), (0, 2, 3)], "unit square, two triangles")
DISK_TEXT = _text([(0, 0)] + _RING, [(0, 1 + i, 1 + (i + 1) % 8) for i in range(8)], "disk, eight triangles")
ANNULUS_TEXT = _text(
    _RING + [(2 * x, 2 * y) for x, y in _RING],
    [t for i in range(8) for t in ((i, (i + 1) % 8, 8 + (i + 1) % 8), (i, 8 + (i + 1) % 8, 8 + i))],
    "annulus, sixteen triangles")

BUILTIN = {"reference": REFERENCE_TEXT, "square": SQUARE_TEXT, "disk": DISK_TEXT, "annulus": ANNULUS_TEXT}


def builtin_mesh(name: str) -> Mesh:
    try:
        return parse_mesh(BUILTIN[name], name)
    except KeyError:
        raise MeshError(f"unknown built-in mesh {name!r}; choose from {', '.join(BUILTIN)}") from None


def load_mesh(spec: str) -> Mesh:
    """A built-in mesh name or a path to a mesh file."""
    if spec in BUILTIN:
        return builtin_mesh(spec)
    with open(spec, encoding="utf-8") as fh:
        return parse_mesh(fh.read(), spec)


def random_triangle(rng: random.Random, span: int = 4, denom: int = 3) -> tuple:
    """Three rational points with small numerators/denominators, nondegenerate."""
    while True:
        pts = tuple((mpq(rng.randint(-span * denom, span * denom), denom),
                     mpq(rng.randint(-span * denom, span * denom), denom)) for _ in range(3))
        if orient2d(*pts) != 0:
            return pts


def parse_point(spec: str) -> tuple:
    """``"x,y"`` with rational entries."""
    parts = spec.split(",")
    if len(parts) != 2:
        raise MeshError(f"point spec needs x,y: {spec!r}")
    return tuple(_rational(c.strip()) for c in parts)


def parse_triangle(spec: str) -> tuple:
    """``"x0,y0;x1,y1;x2,y2"`` with rational entries."""
    parts = spec.split(";")
    if len(parts) != 3:
        raise MeshError(f"triangle spec needs three points x,y separated by ';': {spec!r}")
    pts = tuple(parse_point(p) for p in parts)
    if orient2d(*pts) == 0:
        raise MeshError("degenerate triangle")
    return pts
