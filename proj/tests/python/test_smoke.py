import os
from fractions import Fraction
from pathlib import Path

import pytest

import gauge_logic as gl

DATA = Path(os.environ.get("GAUGE_LOGIC_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_analyze_reports_bound_and_threshold():
    r = gl.analyze("(sub (const 1) (nu x))")
    assert r["bounded"] and r["bound"] == 1
    assert r["variables"]["x"]["eventually_constant"]
    assert r["variables"]["x"]["threshold"] == 1


def test_ill_formed_quantifier_raises():
    with pytest.raises(gl.IllFormed):
        gl.analyze("(sup x (nu x))")
    with pytest.raises(ValueError):
        gl.analyze("(d x y z")


def test_evaluate_and_validate():
    text = (DATA / "graph_example.struct").read_text()
    assert gl.validate(text)["pass"]
    assert gl.evaluate(text, "(d (f x) c)", {"x": "p2"}) == 0
    assert gl.evaluate(text, "(sup x (sub (const 1) (nu x)))") == 1


def test_windows_and_theta():
    assert gl.dyadic_window(Fraction(1, 3), Fraction(2, 3)) == (3, Fraction(3, 8))
    assert gl.theta(3) == Fraction(3, 4)


def test_embound_round_trip():
    text = (DATA / "sample_l1.struct").read_text()
    bounded = gl.embound(text)
    assert gl.validate(bounded)["pass"]
    assert gl.recover(bounded) == text


def test_measure_algebra_theory():
    theory = (DATA / "measure_algebra.thy").read_text()
    rows = gl.check_theory(gl.measure_algebra([Fraction(1, 2), Fraction(1, 2)]), theory, [Fraction(1, 2)])
    assert all(r["defect"] == 0 for r in rows if r["label"] != "atomless" and not r["skipped"])
    single = gl.check_theory(gl.measure_algebra([1]), theory, [Fraction(1, 2)])
    assert max(r["defect"] for r in single if r["label"] == "atomless") == Fraction(1, 2)


def test_banach_mazur():
    assert gl.op_norm([[2, 0], [0, Fraction(1, 2)]], "linf") == 2
    assert not gl.eps_iso_check([[2, 0], [0, Fraction(1, 2)]], Fraction(1, 2), "l1")
    assert gl.eps_iso_check([[2, 0], [0, Fraction(1, 2)]], Fraction(3, 4), "l1")
    assert gl.certify_delta([[1, 0], [0, 1]], Fraction(1, 4), "l1:2") == pytest.approx(1 / 16)
    assert gl.simplex_min_norm([[1, 0], [1, 1]], "linf:2") == pytest.approx(1 / 3)
