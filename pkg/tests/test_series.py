import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unimeasure.series import (
    BadNormalization,
    NonzeroConstantTerm,
    TruncatedSeries,
    add,
    ball_mass_expansion,
    circle_series,
    compose,
    from_higher_coefficients,
    multiply,
    solve_branch,
)


def S(*coeffs, order=None):
    return TruncatedSeries(coeffs, order)


def square(order):
    return TruncatedSeries.monomial(2, order)


def random_G(rng, order):
    higher = [F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(order - 2)]
    return from_higher_coefficients(higher, order)


def arcsin_chord_series(R, order):
    """Taylor coefficients of 4R asin(r/(2R)) computed from the binomial series."""
    out = [F(0)] * (order + 1)
    for n in range(order):
        p = 2 * n + 1
        if p > order:
            break
        c = F(math.comb(2 * n, n), 4**n * (2 * n + 1))  # asin(x) = sum c x^p
        out[p] = 4 * R * c / (2 * R) ** p
    return out


# ---- add / multiply --------------------------------------------------------


def test_add_examples():
    assert add(S(1, 1), S(1, -1)).coefficients == (2, 0)
    assert add(S(0, 0, 1), S(0, order=2)) == S(0, 0, 1)
    assert add(S(0, 0, 1, 0, F(-1, 12)), S(0, 0, 0, 0, F(1, 12))) == S(0, 0, 1, 0, 0)


def test_add_truncates_to_smaller_order():
    assert add(S(1, 2, 3), S(1, 1)).order == 1


def test_multiply_examples():
    assert multiply(S(1, 1), S(1, -1)) == S(1, 0, order=1)
    assert multiply(S(1, 1, 0), S(1, -1, 0)) == S(1, 0, -1)
    assert multiply(S(0, 1, 0), S(0, 1, 0)) == S(0, 0, 1)
    sine3 = S(0, 1, 0, F(-1, 6), 0, 0, 0)
    assert multiply(sine3, sine3) == S(0, 0, 1, 0, F(-1, 3), 0, F(1, 36))


def test_scalar_multiplication_and_negation():
    a = S(1, 2, 3)
    assert 2 * a == S(2, 4, 6)
    assert -a == S(-1, -2, -3)
    assert a - a == S(0, 0, 0)


# ---- compose ---------------------------------------------------------------


def test_compose_square_of_cubic():
    c1, c2, c3 = F(2), F(-3, 5), F(7, 4)
    out = compose(S(0, 0, 1, 0, 0), S(0, c1, c2, c3, 0))
    assert out == S(0, 0, c1**2, 2 * c1 * c2, c2**2 + 2 * c1 * c3)


def test_compose_identity_inner():
    g = S(3, F(1, 2), -1, 4, F(5, 7))
    assert compose(g, S(0, 1, 0, 0, 0)) == g


def test_compose_displayed_expansion():
    c1, c2, c3 = F(3, 2), F(-1, 3), F(2, 5)
    C3, C4 = F(5, 11), F(-7, 3)
    out = compose(S(0, 0, 1, C3, C4), S(0, c1, c2, c3, 0))
    assert out[3] == 2 * c1 * c2 + c1**3 * C3
    assert out[4] == c2**2 + 2 * c3 * c1 + 3 * c1**2 * c2 * C3 + c1**4 * C4


def test_compose_rejects_constant_term():
    with pytest.raises(NonzeroConstantTerm):
        compose(S(0, 0, 1), S(1, 1, 0))


def test_compose_truncation_order():
    assert compose(S(0, 0, 1, 1, 1, 1), S(0, 1, 1)).order == 2


# ---- solve_branch ----------------------------------------------------------


def test_solve_branch_line():
    for sign in (1, -1):
        F_ = solve_branch(square(12), sign)
        assert F_ == TruncatedSeries.monomial(1, 11, sign)


def test_solve_branch_cubic_formula():
    C3, C4 = F(3, 7), F(-2, 5)
    G = S(0, 0, 1, C3, C4)
    for sign in (1, -1):
        f = solve_branch(G, sign)
        assert f.order == 3
        assert f[1] == sign
        assert f[2] == -C3 / 2
        assert f[3] == -sign * F(1, 2) * (C4 - F(5, 4) * C3**2)


def test_solve_branch_circle():
    for R in (F(1), F(3), F(2, 5)):
        f = solve_branch(circle_series(R, 6), 1)
        assert f[1] == 1 and f[2] == 0
        assert f[3] == 1 / (24 * R**2)
        assert f[4] == 0


def test_solve_branch_circle_matches_arcsine_to_high_order():
    # s = 2R asin(r/2R) is the positive branch for the circle
    R = F(5, 3)
    f = solve_branch(circle_series(R, 14), 1)
    want = arcsin_chord_series(R, 13)
    assert [2 * c for c in f.coefficients] == want


def test_bad_normalization():
    with pytest.raises(BadNormalization):
        solve_branch(S(0, 0, 2, 1), 1)
    with pytest.raises(BadNormalization):
        solve_branch(S(0, 1, 1, 1), 1)
    with pytest.raises(BadNormalization):
        solve_branch(S(1, 0, 1, 1), 1)
    with pytest.raises(ValueError):
        solve_branch(S(0, 0, 1, 1), 0)


def test_round_trip_random():
    rng = random.Random(7)
    for _ in range(30):
        G = random_G(rng, 11)
        for sign in (1, -1):
            f = solve_branch(G, sign)
            assert f.order == 10
            assert compose(G, f) == square(10)


def test_round_trip_order_and_uniqueness_by_mutation():
    rng = random.Random(3)
    G = random_G(rng, 11)
    f = solve_branch(G, 1)
    base = list(f.coefficients)
    for j in range(1, f.order):
        mutated = base.copy()
        mutated[j] += F(1, 1000)
        out = compose(G, TruncatedSeries(mutated))
        # the perturbation shows up exactly at order j + 1
        assert all(out[k] == (1 if k == 2 else 0) for k in range(j + 1))
        assert out[j + 1] != (1 if j + 1 == 2 else 0)


def test_branch_symmetry_reflection():
    rng = random.Random(11)
    for _ in range(10):
        G = random_G(rng, 9)
        fp, fm = solve_branch(G, 1), solve_branch(G, -1)
        # the minus branch is the plus branch run backwards in s
        assert fm == fp.reflect()
        # and the plus branch for the reflected G up to a sign
        assert fm == -solve_branch(G.reflect(), 1)


def test_even_coefficients_of_f_vanish():
    rng = random.Random(5)
    for _ in range(10):
        f = ball_mass_expansion(random_G(rng, 12))
        assert all(c == 0 for k, c in enumerate(f.coefficients) if k % 2 == 0)


# ---- ball_mass_expansion ---------------------------------------------------


def test_ball_mass_line():
    assert ball_mass_expansion(square(12)) == TruncatedSeries.monomial(1, 11, 2)


def test_ball_mass_arclength_quartic():
    C4 = F(-3, 8)
    f = ball_mass_expansion(S(0, 0, 1, 0, C4, 0))
    assert f == S(0, 2, 0, -C4, 0)


def test_ball_mass_general_cubic_coefficient():
    C3, C4 = F(2, 3), F(1, 5)
    f = ball_mass_expansion(S(0, 0, 1, C3, C4))
    assert f[3] == F(5, 4) * C3**2 - C4


def test_ball_mass_circle():
    R = F(7, 4)
    f = ball_mass_expansion(circle_series(R, 10))
    assert f[1] == 2 and f[3] == 1 / (12 * R**2)
    assert list(f.coefficients) == arcsin_chord_series(R, 9)


# ---- serialization and determinism -----------------------------------------


def test_string_round_trip():
    s = S(0, F(-1, 3), F(22, 7), 5)
    assert TruncatedSeries.from_strings(s.to_strings()) == s
    assert TruncatedSeries.from_json(s.to_json()) == s
    assert s.to_strings() == ["0", "-1/3", "22/7", "5"]


def test_float_input_is_exact_decimal():
    assert S(0.1)[0] == F(1, 10)


def test_pretty():
    assert S(0, 2, 0, F(1, 12)).pretty("r") == "2*r + 1/12*r^3 + O(r^4)"
    assert S(0, -1).pretty() == "-s + O(s^2)"


def test_determinism():
    rng = random.Random(1)
    G = random_G(rng, 10)
    assert ball_mass_expansion(G).to_json() == ball_mass_expansion(G).to_json()


def test_truncate_and_index_errors():
    s = S(1, 2, 3)
    assert s.truncate(1) == S(1, 2)
    with pytest.raises(ValueError):
        s.truncate(5)
    with pytest.raises(IndexError):
        s[3]


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=6), st.sampled_from([1, -1]))
def test_property_round_trip(higher, sign):
    G = from_higher_coefficients(higher)
    f = solve_branch(G, sign)
    assert compose(G, f) == square(G.order - 1)
    assert solve_branch(G, -sign) == f.reflect()


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=3, max_size=6), st.lists(rationals, min_size=3, max_size=6))
def test_property_multiply_commutes(a, b):
    x, y = TruncatedSeries(a), TruncatedSeries(b)
    assert multiply(x, y) == multiply(y, x)
