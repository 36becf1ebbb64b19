from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from baileykit.errors import (
    InsufficientOrderError,
    NonInvertibleError,
    OutOfWindowError,
    SubstitutionError,
    UnsupportedParameterError,
)
from baileykit.series import (
    Monomial,
    TruncatedSeries,
    add,
    coeff,
    divide,
    equal_to_order,
    invert,
    monomial,
    mul,
    one,
    one_minus,
    q_power,
    substitute,
)

q = Monomial(1, 1)


def poly(terms, valid=None):
    return TruncatedSeries.from_terms(terms, valid)


class TestMonomial:
    def test_zero_coefficient_is_zero_series(self):
        assert monomial(Monomial(0, 5), 10).is_zero

    def test_constant_and_negative_power(self):
        assert str(monomial(Monomial(1, 0), 10)) == "1 + O(q^10)"
        assert monomial(Monomial(-1, 2), 10).to_dict() == {2: -1}

    def test_out_of_window(self):
        with pytest.raises(OutOfWindowError):
            monomial(Monomial(1, 10), 10)

    @pytest.mark.parametrize(
        "text, coeff, exp",
        [("q", 1, 1), ("-q^3", -1, 3), ("q^1/2", 1, Fraction(1, 2)), ("2q^-1", 2, -1), ("0", 0, 0), ("-1", -1, 0), ("+q^2", 1, 2)],
    )
    def test_parse(self, text, coeff, exp):
        m = Monomial.parse(text)
        assert (m.coeff, m.exp) == (coeff, exp) or (coeff == 0 and m.is_zero)

    def test_powers(self):
        z = Monomial(-1, 2)
        assert z**-1 == Monomial(-1, -2)
        assert z**-2 == Monomial(1, -4)
        assert z**3 * z**-3 == Monomial(1, 0)
        with pytest.raises(UnsupportedParameterError):
            Monomial(2, 1) ** -1

    @pytest.mark.parametrize("bad", ["", "x", "q^", "q^1/0", "1.5q"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            Monomial.parse(bad)


class TestArithmetic:
    def test_add_examples(self):
        assert add(one(20), -one(20)).is_zero
        assert add(poly({0: 1, 1: 1}), poly({0: 1, 1: -1})) == poly({0: 2})
        assert add(poly({0: 1, 1: -1}), poly({2: -1, 5: 1})) == poly({0: 1, 1: -1, 2: -1, 5: 1})

    def test_add_validity_is_min(self):
        assert add(one(5), one(9)).valid_to == 5

    def test_mul_examples(self):
        assert mul(one_minus(q), poly({0: 1, 1: 1})) == poly({0: 1, 2: -1})
        assert mul(one_minus(q), one_minus(q**2)) == poly({0: 1, 1: -1, 2: -1, 3: 1})
        assert mul(q_power(-1), q_power(1)) == one()

    def test_mul_validity_rule(self):
        a = poly({2: 1}, 10)
        b = poly({-1: 1, 0: 3}, 7)
        assert mul(a, b).valid_to == min(10 - 1, 7 + 2)

    def test_invert_geometric(self):
        assert invert(one_minus(q), 8) == poly({e: 1 for e in range(8)}, 8)
        assert invert(poly({0: 1, 1: 1}), 8) == poly({e: (-1) ** e for e in range(8)}, 8)

    def test_invert_round_trip_on_finite_product(self):
        a = one()
        for k in range(1, 6):
            a = a * one_minus(q**k)
        assert equal_to_order(mul(a, invert(a, 40)), one(40), 40)

    def test_invert_rejects_non_unit(self):
        with pytest.raises(NonInvertibleError):
            invert(poly({0: 2, 1: 1}), 5)

    def test_exact_division_needs_order(self):
        with pytest.raises(InsufficientOrderError):
            divide(one(), one_minus(q))

    def test_laurent_division(self):
        r = divide(one(10), poly({-2: 1, 0: -1}))
        assert r.lowest == 2 and r.valid_to == 12
        assert [r.coeff(e) for e in range(12)] == [0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0]

    def test_half_integer_lattice(self):
        half = monomial(Monomial(1, Fraction(1, 2)))
        assert (half * half) == q_power(1)
        assert (half + one()).den == 2


class TestSubstituteAndCoeff:
    def test_substitute_examples(self):
        assert substitute(poly({0: 1, 1: 1}), 1, 2) == poly({0: 1, 2: 1})
        assert substitute(poly({0: 1, 1: 1, 2: -1}), -1, 1) == poly({0: 1, 1: -1, 2: -1})

    def test_substitute_scales_validity(self):
        assert substitute(one(5), 1, 4).valid_to == 20

    def test_minus_q_needs_integer_exponents(self):
        with pytest.raises(SubstitutionError):
            substitute(monomial(Monomial(1, Fraction(1, 2))), -1, 1)

    def test_minus_q_on_g1_prefix_flips_odd_terms(self):
        from baileykit.hecke import build_g1

        g = build_g1(30)
        flipped = substitute(g, -1, 1)
        for e in range(30):
            assert flipped.coeff(e) == (-1) ** e * g.coeff(e)

    def test_coeff(self):
        s = poly({0: 1, 2: -1}, 10)
        assert coeff(s, 2) == -1
        assert coeff(s, 1) == 0
        with pytest.raises(OutOfWindowError):
            coeff(s, 10)


class TestComparison:
    def test_equal(self):
        assert equal_to_order(one_minus(q), one_minus(q), 50)

    def test_first_mismatch(self):
        r = equal_to_order(one_minus(q), poly({0: 1, 1: 1}), 50)
        assert not r and (r.exponent, r.lhs, r.rhs) == (1, -1, 1)

    def test_order_beyond_validity(self):
        with pytest.raises(InsufficientOrderError):
            equal_to_order(one(10), one(20), 11)

    def test_printing(self):
        assert str(poly({0: 1, 2: -1}, 10)) == "1 - q^2 + O(q^10)"


# --- properties ----------------------------------------------------------------

exps = st.fractions(min_value=-3, max_value=8, max_denominator=2).map(lambda f: Fraction(round(f * 2), 2))
series_st = st.builds(
    lambda terms, valid: TruncatedSeries.from_terms({e: c for e, c in terms.items() if e < valid}, valid),
    st.dictionaries(exps, st.integers(-6, 6), max_size=6),
    st.integers(9, 14),
)
unit_series = st.builds(
    lambda tail, lead_sign, valid: TruncatedSeries.from_terms({0: lead_sign, **{e: c for e, c in tail.items() if 0 < e < valid}}, valid),
    st.dictionaries(st.integers(1, 8).map(Fraction), st.integers(-4, 4), max_size=5),
    st.sampled_from([1, -1]),
    st.integers(9, 14),
)


def _common_order(*xs):
    return min(x.valid_to for x in xs)


@settings(max_examples=60, deadline=None)
@given(series_st, series_st, series_st)
def test_ring_axioms(a, b, c):
    n = _common_order(a * b * c, a + b + c, a * (b + c))
    assert equal_to_order(a + b, b + a, n)
    assert equal_to_order(a * b, b * a, n)
    assert equal_to_order((a + b) + c, a + (b + c), n)
    assert equal_to_order((a * b) * c, a * (b * c), _common_order((a * b) * c, a * (b * c)))
    assert equal_to_order(a * (b + c), a * b + a * c, _common_order(a * (b + c), a * b + a * c))


@settings(max_examples=60, deadline=None)
@given(unit_series)
def test_invert_round_trip(a):
    inv = invert(a)
    n = (a * inv).valid_to
    assert equal_to_order(a * inv, one(n), n)


@settings(max_examples=60, deadline=None)
@given(series_st, series_st, st.sampled_from([(1, 1), (1, 2), (1, 3)]))
def test_substitute_is_a_morphism(a, b, sk):
    sign, k = sk
    left = substitute(a * b, sign, k)
    right = substitute(a, sign, k) * substitute(b, sign, k)
    n = _common_order(left, right)
    assert equal_to_order(left, right, n)


@settings(max_examples=40, deadline=None)
@given(unit_series, st.integers(3, 10))
def test_more_order_never_changes_earlier_terms(a, small):
    lo = divide(one(small), a)
    hi = divide(one(small + 7), a)
    assert equal_to_order(lo, hi, lo.valid_to)


int_series = st.builds(
    lambda terms, valid: TruncatedSeries.from_terms({e: c for e, c in terms.items() if e < valid}, valid),
    st.dictionaries(st.integers(-3, 8).map(Fraction), st.integers(-6, 6), max_size=6),
    st.integers(9, 14),
)


@settings(max_examples=40, deadline=None)
@given(int_series, int_series)
def test_minus_q_is_a_morphism(a, b):
    left = substitute(a * b, -1, 1)
    right = substitute(a, -1, 1) * substitute(b, -1, 1)
    assert equal_to_order(left, right, _common_order(left, right))
