import numpy as np
import pytest

from multisine_wpt.gp import (GPSolverError, GPStandardForm, Monomial,
                              Posynomial, condense, dump_gp,
                              floor_constraints, maximize_monomial_under_power,
                              positivity_floor, power_constraint,
                              single_condensation_fraction, solve_gp)


def _random_posynomial(rng, n_terms, n_vars, max_exp=3):
    coeffs = rng.uniform(0.1, 5.0, n_terms)
    expos = rng.integers(0, max_exp + 1, (n_terms, n_vars)).astype(float)
    return Posynomial(coeffs, expos)


def test_monomial_validation_and_arithmetic():
    with pytest.raises(ValueError):
        Monomial(-1.0, np.array([1.0]))
    a = Monomial(2.0, np.array([1.0, -0.5]))
    b = Monomial(3.0, np.array([0.0, 2.0]))
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.uniform(0.2, 3.0, 2)
        assert np.isclose((a * b).evaluate(x), a.evaluate(x) * b.evaluate(x),
                          rtol=1e-14)
        assert np.isclose((a ** 2.5).evaluate(x), a.evaluate(x) ** 2.5,
                          rtol=1e-13)
        assert np.isclose(a.inverse().evaluate(x), 1.0 / a.evaluate(x),
                          rtol=1e-14)


def test_condense_reciprocal_pair():
    # f = x + 1/x condensed at x = 1: weights 1/2 each, constant monomial 2
    f = Posynomial(np.array([1.0, 1.0]), np.array([[1.0], [-1.0]]))
    mono = condense(f, np.array([1.0]))
    assert np.allclose(mono.exponents, 0.0)
    assert np.isclose(mono.coefficient, 2.0, rtol=1e-15)
    rng = np.random.default_rng(1)
    for x in rng.uniform(0.05, 20.0, 200):
        assert mono.evaluate(np.array([x])) <= f.evaluate(np.array([x])) * (1 + 1e-12)


def test_condense_single_term_is_identity():
    f = Posynomial(np.array([3.0]), np.array([[2.0, 1.0]]))
    mono = condense(f, np.array([0.7, 1.3]))
    assert np.isclose(mono.coefficient, 3.0, rtol=1e-14)
    assert np.allclose(mono.exponents, [2.0, 1.0])


def test_condense_tight_at_anchor_and_global_lower_bound():
    rng = np.random.default_rng(2)
    for _ in range(10):
        f = _random_posynomial(rng, 6, 3)
        anchor = rng.uniform(0.3, 2.0, 3)
        mono = condense(f, anchor)
        assert np.isclose(mono.evaluate(anchor), f.evaluate(anchor), rtol=1e-12)
        for _ in range(100):
            x = rng.uniform(0.05, 5.0, 3)
            assert mono.evaluate(x) <= f.evaluate(x) * (1 + 1e-12)


def test_condense_rejects_nonpositive_anchor():
    f = Posynomial(np.array([1.0]), np.array([[1.0]]))
    with pytest.raises(ValueError):
        condense(f, np.array([0.0]))


def test_maximize_monomial_closed_forms():
    p = 1.0
    point = maximize_monomial_under_power(Monomial(1.0, np.array([2.0, 2.0])), p)
    assert np.allclose(point, [1.0, 1.0], rtol=1e-14)
    point = maximize_monomial_under_power(Monomial(1.0, np.array([4.0, 0.0])), p)
    assert np.isclose(point[0], np.sqrt(2 * p), rtol=1e-14)
    assert point[1] == positivity_floor(p)
    with pytest.raises(ValueError):
        maximize_monomial_under_power(Monomial(1.0, np.zeros(2)), p)


def test_solve_gp_product_split():
    # maximize s0^2 s1^2 under (s0^2+s1^2)/2 <= P: equal split, value P^2
    p = 2.5
    objective = Monomial(1.0, np.array([-2.0, -2.0]))  # minimize inverse
    cons = [power_constraint(np.arange(2), 2, p)]
    report = solve_gp(GPStandardForm(objective, cons, 2),
                      np.array([0.3, 1.9]))
    assert report.converged
    assert np.allclose(report.x, np.sqrt(p), rtol=1e-7)
    assert np.isclose(np.prod(report.x ** 2), p * p, rtol=1e-6)
    assert np.all(report.constraint_values <= 1 + 1e-8)
    assert report.kkt_residual <= 1e-6


def test_solve_gp_matches_waterlevel_closed_form():
    rng = np.random.default_rng(3)
    p = 0.8
    for _ in range(5):
        b = rng.uniform(0.5, 4.0, 4)
        objective = Monomial(1.0, -b)
        cons = [power_constraint(np.arange(4), 4, p)]
        report = solve_gp(GPStandardForm(objective, cons, 4),
                          np.full(4, 0.1))
        expected = np.sqrt(2 * p * b / b.sum())
        assert np.allclose(report.x, expected, rtol=1e-7)
        closed = maximize_monomial_under_power(Monomial(1.0, b), p)
        assert np.allclose(report.x, closed, rtol=1e-8)


def test_solve_gp_with_floor_constraints_and_infeasible_start():
    p = 1.0
    floor = positivity_floor(p)
    objective = Monomial(1.0, np.array([-2.0, 0.0]))
    cons = [power_constraint(np.arange(2), 2, p)] + floor_constraints(2, floor)
    # start violates the power budget; phase I must recover
    report = solve_gp(GPStandardForm(objective, cons, 2),
                      np.array([3.0, 3.0]))
    assert report.converged
    assert np.isclose(report.x[0], np.sqrt(2 * p), rtol=1e-6)
    with pytest.raises(GPSolverError):
        solve_gp(GPStandardForm(objective, cons, 2), np.array([-1.0, 1.0]))


def test_single_condensation_fraction_is_conservative():
    rng = np.random.default_rng(4)
    for _ in range(5):
        numer = _random_posynomial(rng, 4, 2, max_exp=2)
        denom = _random_posynomial(rng, 3, 2, max_exp=2)
        anchor = rng.uniform(0.4, 1.6, 2)
        con = single_condensation_fraction(numer, denom, anchor)
        # identical slack at the anchor
        assert np.isclose(con.evaluate(anchor),
                          numer.evaluate(anchor) / denom.evaluate(anchor),
                          rtol=1e-12)
        for _ in range(200):
            x = rng.uniform(0.1, 3.0, 2)
            if con.evaluate(x) <= 1.0:  # conservative form satisfied
                assert numer.evaluate(x) <= denom.evaluate(x) * (1 + 1e-12)


def test_single_condensation_fraction_monomial_denominator_identity():
    numer = Posynomial(np.array([2.0, 1.0]), np.array([[1.0, 0.0], [0.0, 1.0]]))
    denom = Posynomial(np.array([4.0]), np.array([[1.0, 1.0]]))
    anchor = np.array([0.9, 1.4])
    con = single_condensation_fraction(numer, denom, anchor)
    rng = np.random.default_rng(5)
    for _ in range(50):
        x = rng.uniform(0.2, 2.0, 2)
        assert np.isclose(con.evaluate(x),
                          numer.evaluate(x) / denom.evaluate(x), rtol=1e-12)


def test_dump_gp_lists_every_monomial():
    objective = Monomial(2.0, np.array([-1.0, 0.0]))
    cons = [power_constraint(np.arange(2), 2, 1.0)]
    text = dump_gp(GPStandardForm(objective, cons, 2))
    lines = text.strip().splitlines()
    assert lines[0] == "gp n_vars=2 n_constraints=1"
    assert "minimize" in lines[1]
    assert sum(1 for ln in lines if ln and ln[0].isdigit()) == 3
