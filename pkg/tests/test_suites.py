import pytest

from fesys.suites import (SUITES, bianchi_suite, exp_fitting_suite, flat_cochain_suite, gauge_suite, run_suite)


def test_small_runs():
    assert bianchi_suite(seed=1, count=6).ok
    assert flat_cochain_suite(seed=1, bundles_per_complex=1).ok
    assert gauge_suite(seed=1, count=3).ok
    assert exp_fitting_suite(seed=1, count=2).ok


def test_bianchi_counts_cubes():
    rep = bianchi_suite(seed=0, count=2)
    # 3-cubes are pairs (L, U) of codimension 3: 4 in a tetrahedron, 20 + 10 in a 4-simplex
    assert rep.meta["cubes_checked"] == 4 + 30


def test_registry():
    assert SUITES == ("bianchi", "gauge", "flat-cochain", "exp-fitting", "poincare")
    with pytest.raises(ValueError):
        run_suite("missing")
