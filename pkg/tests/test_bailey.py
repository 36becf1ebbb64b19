import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from baileykit.bailey import (
    BaileyPair,
    alpha_eq42,
    alpha_star,
    bailey_limit_rho2,
    beta_from_alpha,
    conjugate_check,
    delta_pair,
    gamma_closed,
    gamma_defining,
    pair_diff31,
    pair_eq35,
    pair_eq41,
    pair_from_alpha,
    pair_lemma25,
    pair_lemma26,
    pair_lemma27,
    pair_lemma31,
    pair_seed,
    pair_sum215,
    transform_d1_reverse,
    transform_l1,
    transform_s1,
    transform_s2,
    verify_pair,
)
from baileykit.catalog import g1_lhs, g1_rhs
from baileykit.errors import DegenerateParameterError, UnsupportedParameterError
from baileykit.qproducts import poch_divide, poch_infinite, poch_infinite_divide
from baileykit.series import Monomial, TruncatedSeries, divide, equal_to_order, monomial, one, one_minus, q_power

from oracles import alpha_star_literal

M = Monomial
q = M(1, 1)
HALF = M(1, Fraction(1, 2))
C_VALUES = [q, M(1, 2), M(-1, 1), HALF, M(0)]
CONSTRUCTORS = [pair_seed, pair_lemma25, pair_sum215, pair_lemma26, pair_diff31, pair_lemma27, pair_eq35, pair_lemma31]


def same_pair(p1: BaileyPair, p2: BaileyPair, n_max: int, order) -> bool:
    return all(
        equal_to_order(p1.alpha(n, order), p2.alpha(n, order), order) and equal_to_order(p1.beta(n, order), p2.beta(n, order), order)
        for n in range(n_max + 1)
    )


class TestAlphaStar:
    def test_n0(self):
        for c in C_VALUES:
            assert equal_to_order(alpha_star(0, c, 20), one(20), 20)

    @pytest.mark.parametrize("c", [HALF, M(-1, Fraction(1, 2)), M(1, Fraction(1, 3))])
    @pytest.mark.parametrize("n", range(6))
    def test_matches_printed_formula(self, c, n):
        assert equal_to_order(alpha_star(n, c, 30), alpha_star_literal(n, c, 30), 30)

    @pytest.mark.parametrize("c", [M(1, 0), M(-1, 0)])
    def test_degenerate(self, c):
        with pytest.raises(DegenerateParameterError):
            alpha_star(2, c, 10)

    def test_unsupported(self):
        with pytest.raises(UnsupportedParameterError):
            alpha_star(2, M(2, 1), 10)
        with pytest.raises(UnsupportedParameterError):
            alpha_star(2, M(1, -1), 10)

    def test_seed_relation(self):
        assert verify_pair(pair_seed(q), 6, 40)

    def test_window_matches_full_expansion(self):
        # a large n is cut to a relative window; a larger order must agree below the smaller one
        for n in (10, 25):
            lo, hi = alpha_star(n, q, 60), alpha_star(n, q, 90)
            assert equal_to_order(lo, hi, 60)

    def test_half_c_under_q_squared_is_closed_form(self):
        p = pair_lemma27(HALF)
        for n in range(7):
            got = p.alpha(n, 40).substitute(1, 2)
            assert equal_to_order(got, alpha_eq42(n, 80), 80)


class TestVerifyPair:
    def test_n0_reduces_to_alpha0(self):
        p = pair_lemma25(q)
        assert equal_to_order(p.beta(0, 30), p.alpha(0, 30), 30)

    def test_lemma25_c_q(self):
        assert verify_pair(pair_lemma25(q), 8, 80)

    def test_corrupted_pair_fails_at_n1(self):
        good = pair_lemma25(q)

        def beta(n, order):
            b = good.beta(n, order)
            return b + q_power(1).truncate(order) if n == 1 else b

        bad = BaileyPair(good.a, good.Q, good.alpha, beta, "corrupted")
        r = verify_pair(bad, 8, 40)
        assert not r and r.n == 1 and r.comparison.exponent == 1

    def test_delta_alpha(self):
        for n in range(6):
            got = beta_from_alpha(delta_pair().alpha, q, q, n, 30)
            want = poch_divide(poch_divide(one(30), q, q, n, 30), M(1, 2), q, n, 30)
            assert equal_to_order(got, want, 30)

    def test_lemma25_alpha_reproduces_beta(self):
        c = M(1, 2)
        p = pair_lemma25(c)
        for n in range(6):
            want = divide(one_minus(c).scale((-1) ** n).truncate(40), one_minus(c * q**n))
            want = poch_divide(want, M(1, 2), M(1, 2), n, 40)
            assert equal_to_order(beta_from_alpha(p.alpha, q, q, n, 40), want, 40)

    def test_eq42_alpha_reproduces_eq41_beta(self):
        p = pair_eq41()
        for n in range(7):
            assert equal_to_order(beta_from_alpha(alpha_eq42, M(1, 4), M(1, 4), n, 80), p.beta(n, 80), 80)


class TestConstructors:
    @pytest.mark.parametrize("make", CONSTRUCTORS, ids=lambda f: f.__name__)
    @pytest.mark.parametrize("c", C_VALUES, ids=str)
    def test_relation(self, make, c):
        assert verify_pair(make(c), 6, 50)

    def test_eq41(self):
        assert verify_pair(pair_eq41(), 8, 80)

    def test_lemma25_beta2(self):
        c = q
        want = divide(one_minus(c).truncate(30), one_minus(c * q**2))
        want = poch_divide(want, M(1, 2), M(1, 2), 2, 30)
        assert equal_to_order(pair_lemma25(c).beta(2, 30), want, 30)

    def test_lemma27_c0(self):
        p = pair_lemma27(M(0))
        for n in range(5):
            want = poch_divide(one(30).scale(2), M(-1, 2), q, 2 * n, 30)
            assert equal_to_order(p.beta(n, 30), want, 30)

    def test_eq41_beta1(self):
        want = poch_divide(poch_divide(one(40).scale(2), M(-1, 4), M(1, 2), 2, 40), M(1, 2), M(1, 4), 2, 40)
        assert equal_to_order(pair_eq41().beta(1, 40), want, 40)

    @pytest.mark.parametrize("make", CONSTRUCTORS, ids=lambda f: f.__name__)
    def test_degenerate(self, make):
        with pytest.raises(DegenerateParameterError):
            make(M(-1, 0))

    @pytest.mark.parametrize("c", [q, M(1, 2), HALF])
    def test_even_odd_split(self, c):
        plus, minus = pair_lemma25(c), pair_lemma25(-c)
        even, odd = pair_sum215(c), pair_diff31(c)
        for n in range(5):
            a = divide(plus.beta(n, 30), one_minus(c))
            b = divide(minus.beta(n, 30), one_minus(-c))
            assert equal_to_order(a + b, even.beta(n, 30), 30)
            assert equal_to_order(a - b, odd.beta(n, 30), 30)

    def test_memoisation_is_pure_and_thread_safe(self):
        p = pair_sum215(q)
        first = [p.alpha(n, 40) for n in range(8)]
        with ThreadPoolExecutor(4) as pool:
            again = list(pool.map(lambda n: p.alpha(n, 40), range(8)))
        assert first == again
        assert p.alpha(3, 20) == first[3].truncate(20)

    def test_negative_index_is_zero(self):
        assert pair_lemma25(q).alpha(-1, 10).is_zero


class TestTransforms:
    def test_s2_at_a_q_shifts_by_triangular(self):
        p = pair_lemma25(q)
        t = transform_s2(p)
        for n in range(5):
            assert equal_to_order(t.alpha(n, 40), p.alpha(n, 40 - n * (n + 1) // 2).shift(n * (n + 1) // 2), 40)

    def test_s2_needs_square_root(self):
        with pytest.raises(UnsupportedParameterError):
            transform_s2(delta_pair(M(-1, 1)))

    @pytest.mark.parametrize("tr", [transform_s1, transform_s2, transform_l1, transform_d1_reverse], ids=lambda f: f.__name__)
    def test_delta_pair(self, tr):
        assert verify_pair(tr(delta_pair()), 6, 40)

    def test_d1_reverse_relative_one(self):
        assert verify_pair(transform_d1_reverse(delta_pair(M(1, 0))), 6, 40)

    def test_n0_unchanged(self):
        p = pair_sum215(q)
        for tr in (transform_s1, transform_l1, transform_d1_reverse):
            t = tr(p)
            assert equal_to_order(t.beta(0, 30), p.beta(0, 30), 30)
            assert equal_to_order(t.alpha(0, 30), p.alpha(0, 30), 30)

    @pytest.mark.parametrize("c", [q, HALF])
    def test_s2_on_even_combination(self, c):
        assert verify_pair(transform_s2(pair_sum215(c)), 6, 40)

    def test_l1_wrong_parameter(self):
        with pytest.raises(UnsupportedParameterError):
            transform_l1(delta_pair(M(1, 2)))

    @pytest.mark.parametrize("c", [q, HALF])
    def test_compositions(self, c):
        assert same_pair(transform_s1(pair_sum215(c)), pair_lemma26(c), 5, 40)
        assert same_pair(transform_d1_reverse(pair_lemma26(c)), pair_lemma27(c), 5, 40)
        assert same_pair(transform_l1(pair_diff31(c)), pair_eq35(c), 5, 40)
        assert same_pair(transform_d1_reverse(pair_eq35(c)), pair_lemma31(c), 5, 40)
        assert same_pair(transform_d1_reverse(transform_l1(pair_diff31(c))), pair_lemma31(c), 5, 40)


def random_alpha_pair(rng: random.Random, a: Monomial) -> BaileyPair:
    support = rng.randint(1, 4)
    values = []
    for _ in range(support):
        c = rng.choice([1, -1, 2, -3])
        values.append(M(c, rng.randint(-3, 6)) if rng.random() > 0.2 else M(0))

    def alpha(n, order):
        if n < len(values) and not values[n].is_zero and values[n].exp < order:
            return monomial(values[n]).truncate(order)
        return TruncatedSeries.zero(order)

    return pair_from_alpha(alpha, a, q, "random")


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_transforms_preserve_random_pairs(seed):
    rng = random.Random(seed)
    for tr, a in ((transform_s1, q), (transform_s2, q), (transform_l1, q), (transform_d1_reverse, q), (transform_d1_reverse, M(1, 0))):
        assert verify_pair(tr(random_alpha_pair(rng, a)), 4, 30)


class TestBaileyLimit:
    @pytest.mark.parametrize(
        "make", [lambda: pair_lemma25(q), lambda: pair_sum215(HALF), lambda: pair_eq35(q), lambda: pair_lemma27(q), lambda: pair_lemma31(q), pair_eq41]
    )
    def test_balanced(self, make):
        p = make()
        for rho in (-p.Q, M(1, p.Q.exp / 2)):
            lhs, rhs = bailey_limit_rho2(p, rho, 50)
            assert equal_to_order(lhs, rhs, 50)

    def test_delta_pair(self):
        lhs, rhs = bailey_limit_rho2(delta_pair(), M(-1, 1), 30)
        assert equal_to_order(lhs, rhs, 30)
        # only alpha_0 = 1 survives: rhs = (aQ/rho2; Q)_inf / (aQ; Q)_inf = (-q)_inf / (q^2)_inf
        want = poch_infinite_divide(poch_infinite(M(-1, 1), q, 30), M(1, 2), q, 30)
        assert equal_to_order(rhs, want, 30)

    def test_reproduces_g1_identity(self):
        lhs, rhs = bailey_limit_rho2(pair_eq41(), M(-1, 4), 80)
        factor = TruncatedSeries.from_terms({0: 1, 2: 1})
        assert equal_to_order(lhs, factor * g1_lhs(80), 80)
        assert equal_to_order(rhs, factor * g1_rhs(80), 80)

    def test_half_base_parameter_balances_but_is_not_the_g1_identity(self):
        lhs, rhs = bailey_limit_rho2(pair_eq41(), M(-1, 2), 40)
        factor = TruncatedSeries.from_terms({0: 1, 2: 1})
        assert equal_to_order(lhs, rhs, 40)
        assert not equal_to_order(lhs, factor * g1_lhs(40), 40)

    def test_diverging_parameter(self):
        with pytest.raises(UnsupportedParameterError):
            bailey_limit_rho2(pair_lemma25(q), M(1, 5), 20)


class TestConjugate:
    @pytest.mark.parametrize("a", [M(1, 0), q])
    def test_closed_gamma(self, a):
        for n in range(3):
            assert equal_to_order(gamma_closed(n, a, 40), gamma_defining(n, a, 40), 40)

    def test_gamma0_relative_one(self):
        assert equal_to_order(gamma_closed(0, M(1, 0), 60), gamma_defining(0, M(1, 0), 60), 60)

    def test_delta_pair(self):
        r = conjugate_check(delta_pair(), 30)
        assert r.sums and r.closed_form_matches == {"1": True, "q": True}

    @pytest.mark.parametrize("make", [pair_sum215, pair_eq35, pair_lemma25])
    def test_pairs(self, make):
        r = conjugate_check(make(q), 30)
        assert r.equal
