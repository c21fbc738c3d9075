import json
import math

import pytest

from quadratise.pbf import (
    PBF,
    Monomial,
    ParseError,
    parse_pbf,
    penalty_term,
    scale_heuristic,
    serialize_pbf,
)


# ----------------------------------------------------------------------
# Monomial invariants
# ----------------------------------------------------------------------


def test_monomial_requires_sorted_distinct_vars():
    Monomial((1, 2, 5), 1.0)
    with pytest.raises(ValueError):
        Monomial((2, 1), 1.0)
    with pytest.raises(ValueError):
        Monomial((1, 1), 1.0)
    with pytest.raises(ValueError):
        Monomial((0, 1), 1.0)


def test_monomial_rejects_bad_coefficients():
    with pytest.raises(ValueError):
        Monomial((1,), 0.0)
    with pytest.raises(ValueError):
        Monomial((1,), float("inf"))
    with pytest.raises(ValueError):
        Monomial((1,), float("nan"))


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------


def test_parse_running_indices_follow_input_order():
    text = json.dumps(
        {
            "n": 6,
            "terms": [
                {"vars": [1, 2, 3], "coeff": math.pi},
                {"vars": [2, 4, 5, 6], "coeff": -13},
                {"vars": [1, 3], "coeff": 7},
            ],
        }
    )
    f = parse_pbf(text)
    assert f.terms[1].vars == (1, 2, 3)
    assert f.terms[2].vars == (2, 4, 5, 6)
    assert f.terms[3].vars == (1, 3)
    assert f.terms[1].coeff == pytest.approx(math.pi)
    assert f.n_original == 6
    assert f.next_var == 7


def test_parse_empty_function():
    f = parse_pbf('{"n": 0, "terms": []}')
    assert len(f.terms) == 0
    assert f.degree() == 0


def test_parse_merges_commuted_duplicates():
    f = parse_pbf(
        '{"n": 2, "terms": [{"vars": [1, 2], "coeff": 1}, {"vars": [2, 1], "coeff": 1}]}'
    )
    assert len(f.terms) == 1
    assert f.terms[1].vars == (1, 2)
    assert f.terms[1].coeff == 2.0


def test_parse_drops_zero_sum_terms():
    f = parse_pbf(
        '{"n": 2, "terms": [{"vars": [1, 2], "coeff": 1.5}, {"vars": [1, 2], "coeff": -1.5}]}'
    )
    assert len(f.terms) == 0


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"terms": []}',
        '{"n": 2}',
        '{"n": 2, "terms": [{"vars": [1, 1], "coeff": 1}]}',
        '{"n": 2, "terms": [{"vars": [1], "coeff": "x"}]}',
        '{"n": 2, "terms": [{"vars": [1], "coeff": Infinity}]}',
        '{"n": 2, "terms": [{"vars": [0], "coeff": 1}]}',
        '{"n": 2, "terms": [{"vars": [3], "coeff": 1}]}',
    ],
)
def test_parse_rejects_malformed_input(text):
    with pytest.raises(ParseError):
        parse_pbf(text)


def test_parse_serialize_roundtrip(eq3):
    again = parse_pbf(serialize_pbf(eq3))
    assert again == eq3
    assert serialize_pbf(again) == serialize_pbf(eq3)


def test_serialize_orders_terms_lexicographically(eq3):
    data = json.loads(serialize_pbf(eq3))
    var_lists = [tuple(t["vars"]) for t in data["terms"]]
    assert var_lists == sorted(var_lists)
    assert data["n"] == 6


# ----------------------------------------------------------------------
# Degree, density, evaluation
# ----------------------------------------------------------------------


def test_degree_of_running_example(eq3):
    assert eq3.degree() == 4


def test_degree_trivial_cases():
    assert PBF().degree() == 0
    assert PBF.from_terms([((1, 2), 1.0)]).degree() == 2


def test_density_of_running_example(eq3):
    assert eq3.density(3, 6) == pytest.approx(1 / 20)


def test_density_full_and_empty():
    full = PBF.from_terms([((i, j), 1.0) for i in range(1, 5) for j in range(i + 1, 5)], n=4)
    assert full.density(2, 4) == 1.0
    assert full.density(3, 4) == 0.0


def test_density_rejects_bad_arguments(eq3):
    with pytest.raises(ValueError):
        eq3.density(7, 6)
    with pytest.raises(ValueError):
        eq3.density(0, 6)


def test_evaluate_running_example(eq3):
    value = eq3.evaluate({1: 1, 2: 1, 3: 1, 4: 0, 5: 0, 6: 0})
    assert value == pytest.approx(math.pi + 7)


def test_evaluate_all_zeros_returns_constant():
    f = PBF.from_terms([((1, 2), 5.0), ((), 2.5)], n=2)
    assert f.evaluate({1: 0, 2: 0}) == 2.5
    assert PBF.from_terms([((1, 2), 5.0)], n=2).evaluate({1: 0, 2: 0}) == 0.0


def test_evaluate_requires_full_coverage(eq3):
    with pytest.raises(ValueError, match="missing"):
        eq3.evaluate({1: 1, 2: 1, 3: 1})
    with pytest.raises(ValueError):
        eq3.evaluate({1: 2, 2: 1, 3: 1, 4: 0, 5: 0, 6: 0})


# ----------------------------------------------------------------------
# add_term
# ----------------------------------------------------------------------


def test_add_term_merges_coefficients():
    f = PBF.from_terms([((1, 2), 1.0)], n=2)
    f.add_term((1, 2), 1.0)
    assert len(f.terms) == 1
    assert f.terms[1].coeff == 2.0


def test_add_term_cancellation_removes_term():
    f = PBF.from_terms([((1,), 1.0)], n=1)
    f.add_term((1,), -1.0)
    assert len(f.terms) == 0
    assert f.degree() == 0


def test_add_term_into_empty():
    f = PBF(n_original=3)
    f.add_term((1, 3), 2.0)
    assert len(f.terms) == 1
    assert f.index_of[(1, 3)] == 1


def test_index_of_stays_inverse_of_terms(eq3):
    eq3.add_term((2, 4, 5, 6), 13.0)  # cancels term 2
    eq3.add_term((1, 4), 1.0)
    for z, m in eq3.terms.items():
        assert eq3.index_of[m.vars] == z
    assert len(eq3.index_of) == len(eq3.terms)


# ----------------------------------------------------------------------
# Penalty gadget
# ----------------------------------------------------------------------


def test_penalty_term_monomials():
    p = penalty_term(1, 3, 7)
    got = {m.vars: m.coeff for m in p.terms.values()}
    assert got == {(7,): 3.0, (1, 3): 1.0, (1, 7): -2.0, (3, 7): -2.0}


def test_penalty_term_zero_iff_consistent():
    p = penalty_term(1, 2, 3)
    for xi in (0, 1):
        for xj in (0, 1):
            for y in (0, 1):
                value = p.evaluate({1: xi, 2: xj, 3: y})
                if xi * xj == y:
                    assert value == 0.0
                else:
                    assert value > 0


def test_penalty_term_point_values():
    p = penalty_term(1, 2, 3)
    assert p.evaluate({1: 0, 2: 0, 3: 1}) == 3.0
    assert p.evaluate({1: 1, 2: 1, 3: 0}) == 1.0
    assert p.evaluate({1: 1, 2: 1, 3: 1}) == 0.0


def test_penalty_term_rejects_degenerate_arguments():
    with pytest.raises(ValueError):
        penalty_term(2, 2, 5)
    with pytest.raises(ValueError):
        penalty_term(1, 2, 2)
    with pytest.raises(ValueError):
        penalty_term(3, 1, 5)


# ----------------------------------------------------------------------
# Scale heuristic
# ----------------------------------------------------------------------


def test_scale_heuristic_sums_positive_coefficients(eq3):
    assert scale_heuristic(eq3) == pytest.approx(math.pi + 7)


def test_scale_heuristic_fallback_for_all_negative():
    f = PBF.from_terms([((1, 2), -3.0), ((1,), -0.5)], n=2)
    assert scale_heuristic(f) == 1.0


def test_scale_heuristic_single_term():
    f = PBF.from_terms([((1, 2, 3), 5.0)], n=3)
    assert scale_heuristic(f) == 5.0
