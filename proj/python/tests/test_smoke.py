from fractions import Fraction

import pytest

import ncid


def test_catalan_coefficients():
    s = ncid.char_series("X + X^-1", 8)
    assert s == [1, 0, -1, 0, -1, 0, -2, 0, -5]


def test_necklace_agrees():
    a = "2 + X*Y - 3*Y^-1"
    assert ncid.necklace_product(a, 6) == ncid.char_series(a, 6)


def test_walk_traces_of_sum():
    assert ncid.walk_traces("X + X^-1", 4) == [0, 2, 0, 6]


def test_charpoly_report():
    r = ncid.charpoly(expr="X + X^-1", order=80)
    assert r["pass"]
    assert r["guess"]["found"]


def test_guess_geometric():
    r = ncid.guess([Fraction(1, 2**k) for k in range(40)], max_deg_t=2, max_deg_s=2)
    assert r["pass"]


def test_zero_identity_and_witness():
    assert ncid.zero("(X*Y)^-1 - Y^-1*X^-1")["verdict"] == "zero-evidence"
    assert ncid.zero("X*Y - Y*X")["verdict"] == "nonzero"


def test_parse_error():
    with pytest.raises(ValueError):
        ncid.normalize_expr("X + * Y")


def test_lax_small():
    r = ncid.dyn("lax", d=2, trials=3)
    assert r["pass"]


def test_single_criterion():
    r = ncid.run_criteria([1])
    assert r["pass"] and r["criteria"][0]["id"] == 1
