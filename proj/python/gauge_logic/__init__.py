"""Unbounded continuous logic over gauged metric spaces.

Formulas, structures and theories are passed as s-expression text, the same formats the
``gauge-logic`` command reads. Exact values come back as :class:`fractions.Fraction`.
"""

from fractions import Fraction

from . import _core
from ._core import Error, IllFormed, ParseError, embound, prenex, recover, simplex_min_norm

__all__ = [
    "Error",
    "IllFormed",
    "ParseError",
    "analyze",
    "certify_delta",
    "check_theory",
    "dyadic_window",
    "embound",
    "eps_iso_check",
    "evaluate",
    "measure_algebra",
    "op_norm",
    "prenex",
    "recover",
    "simplex_min_norm",
    "theta",
    "validate",
]


def _frac(text):
    return None if text is None else Fraction(text)


def _text(q):
    return str(Fraction(q))


def _matrix(rows):
    return [[_text(x) for x in row] for row in rows]


def analyze(formula, signature=""):
    """Boundedness, bound, per-variable constancy thresholds and modulus of a formula."""
    r = _core.analyze(formula, signature)
    r["bound"] = _frac(r["bound"])
    for v in r["variables"].values():
        v["threshold"] = _frac(v["threshold"])
    return r


def evaluate(structure, formula, assignment=None):
    return Fraction(_core.evaluate(structure, formula, dict(assignment or {})))


def validate(structure):
    return _core.validate(structure)


def dyadic_window(r, r_prime):
    m, s = _core.dyadic_window(_text(r), _text(r_prime))
    return m, Fraction(s)


def theta(x):
    return Fraction(_core.theta(_text(x)))


def check_theory(structure, theory, eps):
    rows = _core.check_theory(structure, theory, [_text(e) for e in eps])
    for row in rows:
        row["eps"] = _frac(row["eps"])
        row["params"] = {k: Fraction(v) for k, v in row["params"].items()}
        row["value"] = Fraction(row["value"])
        row["defect"] = Fraction(row["defect"])
    return rows


def measure_algebra(weights):
    return _core.measure_algebra([_text(w) for w in weights])


def op_norm(matrix, norm):
    return Fraction(_core.op_norm(_matrix(matrix), norm))


def eps_iso_check(matrix, eps, norm):
    return _core.eps_iso_check(_matrix(matrix), _text(eps), norm)


def certify_delta(basis, eps, space):
    return _core.certify_delta([[float(x) for x in b] for b in basis], _text(eps), space)
