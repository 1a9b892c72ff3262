"""Smoke test for the qfactpy extension: build with `maturin develop` or
`pip install .`, then run `python python/smoke_test.py` (or pytest)."""

import json
import pathlib

import qfactpy

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def test_burkhardt_certificate():
    spec, expected = qfactpy.example("burkhardt")
    assert spec.variant == "hypersurface"
    assert spec.target_degree == expected["target_degree"] == 3
    cert = spec.certify()
    assert cert.verdict == "not_q_factorial"
    assert cert.exit_code == 10
    assert (cert.nodes, cert.rank, cert.defect) == (expected["nodes"], expected["rank"], expected["defect"])
    assert cert.reverify()
    assert json.loads(cert.to_json())["node_set"]["ambient"] == 4


def test_spec_file_round_trip():
    spec = qfactpy.ThreefoldSpec.from_json((DATA / "plane_family_3.json").read_text())
    cert = spec.certify(seed=7)
    assert (cert.nodes, cert.defect) == (4, 1)
    again = qfactpy.ThreefoldSpec.from_json(spec.to_json())
    assert again.certify(seed=7).to_json() == cert.to_json()


def test_point_set_operations():
    pts = qfactpy.PointSet.from_json((DATA / "seven-points.json").read_text())
    assert len(pts) == 7 and pts.ambient == 2
    rep = pts.defect(3)
    assert rep["rank"] == 7 and rep["defect"] == 0
    assert pts.imposes_independent(3)
    assert pts.bese_hypothesis(3)["hypothesis"]
    assert not pts.star_property(2)["holds"]
    curve = json.loads(pts.separating_curve(0, 3))
    assert curve["degree"] == 3


def test_errors_carry_kind():
    spec, _ = qfactpy.example("degenerate_cone_ci_3")
    try:
        spec.certify()
    except qfactpy.QfactError as e:
        assert e.args[0] == "HypothesisViolated"
    else:
        raise AssertionError("singular G accepted")


def test_formulas():
    assert qfactpy.bese_size_bound(3) == 7
    assert qfactpy.monomial_count(4, 3) == 35
    assert "barth" in qfactpy.example_names()


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok {name}")
