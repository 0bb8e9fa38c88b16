"""Acceptance run: one PASS/FAIL line per criterion, exact arithmetic throughout.

Every element family is built on the reference triangle and on 20 seeded random
rational triangles; each (family, triangle) report is computed once and then
sliced by check-name prefix for the individual criteria.  Run with ``-s`` (or
read the ``ACCEPTANCE`` lines in the verbose log) to see the summary.
"""

from __future__ import annotations

import pytest

from fesys.elasticity2d.checks import REFERENCE, element_report, mesh_report, random_triangles
from fesys.elasticity2d.families import FAMILIES
from fesys.meshes import builtin_mesh
from fesys.suites import bianchi_suite, flat_cochain_suite, poincare_suite

TRIANGLE_SEED = 2024
PROBES = 20
MESHES = ("square", "disk", "annulus")


@pytest.fixture(scope="module")
def element_reports():
    tris = [REFERENCE] + random_triangles(TRIANGLE_SEED, 20)
    return {(name, i): element_report(name, pts, seed=i, probes=PROBES)
            for name in FAMILIES for i, pts in enumerate(tris)}


@pytest.fixture(scope="module")
def mesh_reports():
    return {(name, m): mesh_report(name, builtin_mesh(m)) for name in FAMILIES for m in MESHES}


def _select(reports, prefixes):
    """Failing checks (as ``key: name``) among those whose name starts with one of ``prefixes``."""
    failed, seen = [], 0
    for key, rep in reports.items():
        for c in rep.checks:
            if c.name.startswith(prefixes):
                seen += 1
                if not c.passed:
                    failed.append(f"{key}: {c.name} expected={c.expected} actual={c.actual}")
    return seen, failed


def _verdict(capsys, number: int, title: str, ok: bool, detail: str = ""):
    with capsys.disabled():
        print(f"\nACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else ""))
    return ok


def _criterion(capsys, number, title, reports, prefixes, extra_failures=()):
    seen, failed = _select(reports, prefixes)
    failed = list(failed) + list(extra_failures)
    ok = seen > 0 and not failed
    _verdict(capsys, number, title, ok, f"{seen} checks, {len(failed)} failed")
    assert seen > 0, "no checks selected"
    assert not failed, "\n".join(failed[:20])


def test_01_bianchi(capsys):
    rep = bianchi_suite(seed=0, count=100)
    _verdict(capsys, 1, "discrete Bianchi identity, 100 random bundles", rep.ok,
             f"{rep.meta['cubes_checked']} cube terms")
    assert rep.ok, rep.failures()
    assert rep.meta["bundles"] == 100


def test_02_flat_cochain_cohomology(capsys):
    rep = flat_cochain_suite(seed=0)
    _verdict(capsys, 2, "flat-bundle local cochain cohomology (fiber, 0, 0)", rep.ok, f"{len(rep.checks)} checks")
    assert rep.ok, rep.failures()


def test_03_dimensions(capsys, element_reports):
    extra = []
    expected = {"jm": [12, 15, 6], "jm-min": [9, 9, 3], "strain-high": [24, 24, 3],
                "strain-low": [15, 15, 3], "strain-low-min": [9, 9, 3]}
    for (name, i), rep in element_reports.items():
        if name in expected and rep.meta["dims"] != expected[name]:
            extra.append(f"{(name, i)}: dims {rep.meta['dims']}")
    jm_counts = [c for (name, _), r in element_reports.items() if name == "jm"
                 for c in r.checks if c.name in ("dimensions/ambient", "dimensions/jump-constraints")]
    if len(jm_counts) != 2 * 21:
        extra.append("jm ambient/constraint counts missing")
    _criterion(capsys, 3, "dimension tables on 21 triangles", element_reports, ("dimensions/", "minimal/"), extra)


def test_04_unisolvence(capsys, element_reports):
    _criterion(capsys, 4, "unisolvence and duplicate-functional control", element_reports, ("unisolvence/",))


def test_05_stokes_chain_map(capsys, element_reports):
    _criterion(capsys, 5, "Stokes identities and evaluation chain map", element_reports,
               ("stokes/", "system/", "m-bundle/"))


def test_06_local_exactness(capsys, element_reports):
    _criterion(capsys, 6, "local exactness (3, 0, 0) with the expected kernel", element_reports,
               ("exactness/", "kernel-dofs/"))


def test_07_compatibility_and_dimension_identity(capsys, element_reports, mesh_reports):
    seen_m, failed_m = _select(mesh_reports, ("dimension-identity/", "system/"))
    extra = list(failed_m) if seen_m else ["no mesh dimension-identity checks"]
    _criterion(capsys, 7, "flabby, compatible, criterion agreement, dimension identity on meshes", element_reports,
               ("flabby/", "compatibility/"), extra)


def test_08_global_de_rham(capsys, mesh_reports):
    extra = []
    for (name, m), rep in mesh_reports.items():
        fe, co = rep.meta["fe_cohomology"], rep.meta["cochain_cohomology"]
        if m == "disk" and (fe != [3, 0, 0] or co != [3, 0, 0]):
            extra.append(f"{(name, m)}: {fe} vs {co}")
        if fe != co:
            extra.append(f"{(name, m)}: {fe} != {co}")
    _criterion(capsys, 8, "global de Rham on square, disk, annulus", mesh_reports, ("de-rham/",), extra)


def test_09_poincare(capsys):
    rep = poincare_suite(seed=0, count=50)
    _verdict(capsys, 9, "Poincare/Koszul identities, 50 random inputs", rep.ok, f"{len(rep.checks)} checks")
    assert rep.ok, rep.failures()


def test_10_wt(capsys, element_reports):
    sub = {k: r for k, r in element_reports.items() if k[0] == "strain-high"}
    _criterion(capsys, 10, "W(T) bijectivity and the omega alternative", sub, ("w(T)/",))


def test_11_commuting_interpolation(capsys, element_reports):
    extra = [f"{k}: {c.actual} probes" for k, r in element_reports.items() for c in r.checks
             if c.name == "interpolation/probes" and c.actual != PROBES]
    _criterion(capsys, 11, "commuting interpolation, 20 probes per family", element_reports,
               ("interpolation/",), extra)
