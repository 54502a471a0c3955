import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgcd.poly import (
    Polynomial,
    PolyFormatError,
    distance,
    evaluate,
    format_poly,
    monic,
    parse_poly,
    poly_divmod,
    read_poly,
    write_poly,
)


def P(*c):
    return Polynomial(c)


def close(p, q, tol=1e-13):
    return distance(p, q) <= tol


def test_evaluate_examples():
    assert evaluate(P(-1, 0, 1), 2) == 3
    assert evaluate(Polynomial(), 5) == 0
    assert evaluate(P(2, -3, 1), 1) == 0


def test_evaluate_vectorized():
    p = P(1, 2, 3)
    x = np.array([0.0, 1.0, -1.0])
    assert np.allclose(p(x), [1, 6, 2])


def test_divmod_examples():
    q, r = divmod(P(-1, 0, 1), P(-1, 1))
    assert close(q, P(1, 1)) and r.is_zero
    q, r = divmod(P(0, 1), P(-1, 0, 1))
    assert q.is_zero and close(r, P(0, 1))
    q, r = divmod(P(0, 0, 0, 1), P(-1, 0, 1))
    assert close(q, P(0, 1)) and close(r, P(0, 1))


def test_divmod_by_zero():
    with pytest.raises(ZeroDivisionError):
        poly_divmod(P(1, 2), Polynomial())


def test_unclean_remainder_keeps_rounding():
    r = poly_divmod(P(-1, 0, 1), P(-1, 1), clean=False)[1]
    assert len(r) == 1


def test_monic_examples():
    assert close(monic(P(-2, 0, 2)), P(-1, 0, 1))
    assert monic(P(3, 1)) == P(3, 1)
    assert monic(P(3)) == P(1)
    with pytest.raises(ZeroDivisionError):
        monic(Polynomial())


def test_arithmetic_examples():
    assert close(P(1, 1) * P(-1, 1), P(-1, 0, 1))
    p = P(1, 2, 3)
    assert (p + (-p)).is_zero
    assert close(P(-1, 0, 1).scale(2), P(-2, 0, 2))
    assert close(2 * P(1, 1), P(2, 2))
    assert close(1 - P(1, 1), P(0, -1))


def test_distance_examples():
    p = P(1, 2)
    assert distance(p, p) == 0
    assert distance(P(0, 1), Polynomial()) == 1
    assert distance(P(3, 4), Polynomial()) == 5


def test_degree_and_trim():
    assert Polynomial().degree == -1
    assert P(1, 2, 1e-14).degree == 1
    assert Polynomial([1, 2, 1e-14], trim=False).degree == 2
    assert P(0, 0).is_zero


def test_immutable():
    p = P(1, 2)
    with pytest.raises(ValueError):
        p.coeffs[0] = 5


def test_from_roots():
    p = Polynomial.from_roots([1, 2])
    assert close(p, P(2, -3, 1))


def test_format_round_trip(tmp_path):
    p = P(1.5 + 2j, -3.25, 1e-7j, 1)
    path = tmp_path / "p.txt"
    write_poly(path, p, header="test\nsecond line")
    text = path.read_text()
    assert text.startswith("# test\n# second line\n")
    assert read_poly(path) == p


def test_parse_skips_comments_and_blanks():
    assert parse_poly("# c\n\n1 0\n  \n2 0\n") == P(1, 2)


@pytest.mark.parametrize("text, line", [("1 0\n1\n", 2), ("# x\n1 a\n", 2), ("1 2 3\n", 1)])
def test_parse_errors_report_line(text, line):
    with pytest.raises(PolyFormatError) as err:
        parse_poly(text)
    assert err.value.lineno == line
    assert f"line {line}" in str(err.value)


def test_format_precision():
    line = format_poly(P(1 / 3)).strip()
    re, im = line.split(" ")
    assert float(re) == 1 / 3 and float(im) == 0.0


unit = st.floats(-1.0, 1.0, allow_subnormal=False)
coef = st.builds(complex, unit, unit)
polys = st.lists(coef, min_size=1, max_size=31).map(Polynomial)


@settings(max_examples=200, deadline=None)
@given(polys, polys.filter(lambda b: not b.is_zero and abs(b.leading) > 1e-3))
def test_divmod_backward_error(a, b):
    # a small leading coefficient of b inflates q; the error scales with |b||q|
    q, r = poly_divmod(a, b)
    bound = 1e-12 * (np.linalg.norm(a.coeffs) + np.linalg.norm(b.coeffs) * np.linalg.norm(q.coeffs))
    assert distance(b * q + r, a) <= bound
    assert r.degree < b.degree


def test_divmod_round_trip_random():
    # the error is relative to |a| + |b||q|; the quotient grows when b has
    # roots outside the unit disc, so |a| alone bounds only well-scaled draws
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = Polynomial(_unit_disc(rng, int(rng.integers(1, 32))))
        b = Polynomial(_unit_disc(rng, int(rng.integers(1, 32))))
        q, r = poly_divmod(a, b)
        na, nbq = np.linalg.norm(a.coeffs), np.linalg.norm(b.coeffs) * np.linalg.norm(q.coeffs)
        err = distance(b * q + r, a)
        assert err <= 1e-12 * (na + nbq) * max(1.0, q.degree)
        if nbq <= 10 * na:
            assert err <= 1e-12 * na
        assert r.degree < b.degree


def _unit_disc(rng, n):
    return np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


@settings(max_examples=100, deadline=None)
@given(polys.filter(lambda p: not p.is_zero))
def test_monic_idempotent(p):
    m = monic(p)
    assert monic(m) == m
    assert m.leading == 1


@settings(max_examples=100, deadline=None)
@given(polys, polys, coef)
def test_evaluate_linear(p, q, x):
    lhs = evaluate(p + q, x)
    rhs = evaluate(p, x) + evaluate(q, x)
    scale = abs(evaluate(p, x)) + abs(evaluate(q, x)) + np.abs(p.coeffs).sum() + np.abs(q.coeffs).sum()
    assert abs(lhs - rhs) <= 1e-13 * max(scale, 1.0)
