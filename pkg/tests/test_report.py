import json

from fesys.ratlin import mpq
from fesys.report import Report, combine


def test_json_is_exact_and_sorted():
    r = Report("demo", meta={"seed": 3, "dims": [1, mpq(2, 4)]})
    r.add("zeta", True, 1, mpq(1))
    r.add("alpha", False, [0], [1], cell=(0, 1), degree=2)
    d = json.loads(r.to_json())
    assert [c["name"] for c in d["checks"]] == ["alpha", "zeta"]
    assert d["seed"] == "3/1" and d["dims"] == ["1/1", "1/2"]
    assert d["checks"][0] == {"name": "alpha", "status": "fail", "expected": ["0/1"], "actual": ["1/1"],
                              "cell": "(0, 1)", "degree": "2/1"}
    assert d["summary"] == {"total": "2/1", "passed": "1/1", "failed": "1/1", "status": "fail"}
    assert not r.ok and len(r.failures()) == 1


def test_merge_and_combine():
    a = Report("a")
    a.expect_equal("x", 1, 1)
    b = Report("b")
    b.expect_equal("y", [1], [1])
    c = combine("all", [a, b])
    assert [ch.name for ch in c.checks] == ["a/x", "b/y"] and c.ok
    assert Report("empty").ok
