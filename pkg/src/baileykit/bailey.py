"""Bailey pairs as values: constructors, base-changing transforms, the
rho1 -> infinity Bailey lemma and the conjugate-pair relation.

A pair relative to ``a`` in base ``Q`` satisfies

    beta_n = sum_{0<=j<=n} alpha_j / ((Q; Q)_{n-j} (aQ; Q)_{n+j})

and both sequences are produced on demand as truncated series in q.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import (
    DegenerateParameterError,
    InsufficientOrderError,
    PoleError,
    UnsupportedParameterError,
)
from .qproducts import poch_divide, poch_finite, poch_infinite, poch_infinite_divide
from .series import (
    Comparison,
    Exponent,
    Monomial,
    TruncatedSeries,
    as_exponent,
    divide,
    equal_to_order,
    monomial,
    one,
    one_minus,
    q_power,
)

Q1 = Monomial(1, 1)
ONE = Monomial(1, 0)

# Below this the generators are asked for a little more than requested; keeps
# constant terms representable when a caller's shifted order is <= 0.
_ORDER_FLOOR = Fraction(1)
_RETRIES = 6

Generator = Callable[[int, Fraction], TruncatedSeries]


class BaileyPair:
    """Pair ``(alpha_n, beta_n)`` relative to ``a`` in base ``Q``.

    ``alpha(n, order)`` and ``beta(n, order)`` return series valid below
    ``order``; negative indices give the zero series.  Results are memoised
    per ``(n, order)`` behind a lock.
    """

    def __init__(self, a: Monomial, Q: Monomial, alpha: Generator, beta: Generator, label: str):
        if Q.coeff != 1 or Q.exp <= 0:
            raise UnsupportedParameterError(f"base must be q^k with k > 0, got {Q}")
        self.a = a
        self.Q = Q
        self.label = label
        self._gens = {"alpha": alpha, "beta": beta}
        self._cache: dict[tuple[str, int], tuple[Fraction, TruncatedSeries]] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"BaileyPair({self.label!r}, a={self.a}, Q={self.Q})"

    def _get(self, which: str, n: int, order: Exponent) -> TruncatedSeries:
        order = as_exponent(order)
        if n < 0:
            return TruncatedSeries.zero(order)
        key = (which, n)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None and hit[0] >= order:
            return hit[1].truncate(order)
        work = max(order, _ORDER_FLOOR)
        ask = work
        for _ in range(_RETRIES):
            value = self._gens[which](n, ask)
            if value.valid_to is None or value.valid_to >= work:
                break
            # negative exponents upstream cost precision; ask again with the shortfall added
            ask += work - value.valid_to
        else:
            raise InsufficientOrderError(f"{self.label}: {which}_{n} came back valid below q^{value.valid_to}, needed {work}")
        value = value.truncate(work)
        with self._lock:
            prev = self._cache.get(key)
            if prev is None or prev[0] < work:
                self._cache[key] = (work, value)
        return value.truncate(order)

    def alpha(self, n: int, order: Exponent) -> TruncatedSeries:
        return self._get("alpha", n, order)

    def beta(self, n: int, order: Exponent) -> TruncatedSeries:
        return self._get("beta", n, order)


@dataclass(frozen=True)
class PairCheck:
    """Outcome of :func:`verify_pair`: first failing ``n`` or success."""

    label: str
    n_max: int
    order: Fraction
    equal: bool
    n: Optional[int] = None
    comparison: Optional[Comparison] = None

    def __bool__(self) -> bool:
        return self.equal


# --- the defining relation ------------------------------------------------

def beta_from_alpha(alpha: Generator, a: Monomial, Q: Monomial, n: int, order: Exponent) -> TruncatedSeries:
    """Right-hand side of the Bailey relation computed straight from ``alpha``."""
    order = as_exponent(order)
    aQ = a * Q
    total = TruncatedSeries.zero(order)
    for j in range(n + 1):
        term = alpha(j, order)
        term = poch_divide(term, Q, Q, n - j, order)
        term = poch_divide(term, aQ, Q, n + j, order)
        total = total + term
    return total


def verify_pair(pair: BaileyPair, n_max: int, order: Exponent) -> PairCheck:
    """Check the Bailey relation for ``0 <= n <= n_max`` below ``order``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    order = as_exponent(order)
    for n in range(n_max + 1):
        lhs = pair.beta(n, order)
        rhs = beta_from_alpha(pair.alpha, pair.a, pair.Q, n, order)
        cmp = equal_to_order(lhs, rhs, order)
        if not cmp:
            return PairCheck(pair.label, n_max, order, False, n, cmp)
    return PairCheck(pair.label, n_max, order, True)


def pair_from_alpha(alpha: Generator, a: Monomial, Q: Monomial, label: str) -> BaileyPair:
    """Pair whose beta is defined by the relation itself."""
    holder: dict[str, BaileyPair] = {}

    def beta(n: int, order: Fraction) -> TruncatedSeries:
        return beta_from_alpha(holder["p"].alpha, a, Q, n, order)

    p = BaileyPair(a, Q, alpha, beta, label)
    holder["p"] = p
    return p


def delta_pair(a: Monomial = Q1, Q: Monomial = Q1) -> BaileyPair:
    """``alpha_n = [n = 0]``, ``beta_n = 1/((Q;Q)_n (aQ;Q)_n)``."""

    def alpha(n: int, order: Fraction) -> TruncatedSeries:
        return one(order) if n == 0 else TruncatedSeries.zero(order)

    def beta(n: int, order: Fraction) -> TruncatedSeries:
        return poch_divide(poch_divide(one(order), Q, Q, n, order), a * Q, Q, n, order)

    return BaileyPair(a, Q, alpha, beta, f"delta(a={a}, Q={Q})")


# --- alpha* ------------------------------------------------------------------

def _check_c(c: Monomial) -> None:
    if c.is_zero:
        return
    if c.exp == 0 and c.is_unit:
        raise DegenerateParameterError(f"c = {c} makes 1 - c or 1 + c vanish")
    if not c.is_unit:
        raise UnsupportedParameterError(f"c must be 0 or +-q^e, got {c}")
    if c.exp <= 0:
        raise UnsupportedParameterError(f"c must have positive exponent, got {c}")


def _split_factor(c: Monomial, i: int) -> tuple[Monomial, Optional[Monomial]]:
    """Write ``c - q^i`` as ``lead * (1 - m)`` with ``m`` of positive exponent (``None``: just ``lead``)."""
    if c.is_zero:
        return Monomial(-1, i), None
    if c.exp < i:
        return c, Monomial(1, i) / c
    if c.exp > i:
        return Monomial(-1, i), Monomial(c.coeff, c.exp - i)
    return Monomial(c.coeff - 1, i), None


def alpha_star(n: int, c: Monomial, order: Exponent) -> TruncatedSeries:
    """Seed alpha_n at ``a = q``, ``b = -1``, below ``order``.

    Uses the cancelled form

        (-1)^n q^{n^2} (1 - q^{2n+1}) / ((1 - q)(cq; q)_n)
          * sum_{j=0}^{n} w_j q^{-j(j-1)/2} (c; q)_j prod_{i=j+1}^{n} (c - q^i)

    with ``w_0 = 1`` and ``w_j = 2``, which has no ``1/c`` and no
    ``1/(q/c; q)_j``; it stays finite at ``c = 0``, ``q``, ``q^2``.  Each term
    is expanded only as far as its own lowest exponent allows.
    """
    _check_c(c)
    order = as_exponent(order)
    if n < 0:
        return TruncatedSeries.zero(order)
    cutoff = order - n * n
    splits = [_split_factor(c, i) for i in range(1, n + 1)]
    suffix = [ONE] * (n + 1)  # suffix[j] = product of leads for i = j+1..n
    for j in range(n - 1, -1, -1):
        suffix[j] = suffix[j + 1] * splits[j][0]
    bracket = TruncatedSeries.zero(cutoff)
    for j in range(n + 1):
        lead = suffix[j] * Monomial(2 if j else 1, -Fraction(j * (j - 1), 2))
        if lead.is_zero or lead.exp >= cutoff:
            continue
        window = cutoff - lead.exp
        s = one(window)
        for i in range(j):
            m = c * Q1**i
            if not m.is_zero and m.exp < window:
                s = s * one_minus(m)
        for i in range(j + 1, n + 1):
            m = splits[i - 1][1]
            if m is not None and m.exp < window:
                s = s * one_minus(m)
        bracket = bracket + s.times_monomial(lead)
    num = bracket * (one_minus(Monomial(1, 2 * n + 1)) * q_power(n * n, -1 if n % 2 else 1))
    num = num.truncate(order)
    out = num
    for m in [Q1] + [c * Q1 ** (i + 1) for i in range(n)]:
        if m.is_zero or m.exp >= order - out.lowest:
            continue
        out = divide(out, one_minus(m))
    return out.truncate(order)


def alpha_star_combo(n: int, c: Monomial, sign: int, order: Exponent) -> TruncatedSeries:
    """``alpha*(c)/(1 - c) + sign * alpha*(-c)/(1 + c)``."""
    order = as_exponent(order)
    _check_c(c)
    if c.is_zero:
        base = alpha_star(n, c, order)
        return base.scale(2) if sign > 0 else TruncatedSeries.zero(order)
    first = divide(alpha_star(n, c, order), one_minus(c))
    second = divide(alpha_star(n, -c, order), one_minus(-c))
    return first + second.scale(sign)


def _shifted(gen: Callable[[Fraction], TruncatedSeries], shift: Exponent, order: Fraction) -> TruncatedSeries:
    """``q^shift * gen(order - shift)`` valid below ``order``."""
    shift = as_exponent(shift)
    inner = max(order - shift, _ORDER_FLOOR)
    return gen(inner).shift(shift).truncate(order)


def _tri(n: int) -> Fraction:
    return Fraction(n * (n + 1), 2)


# --- constructors ------------------------------------------------------------

Q2 = Monomial(1, 2)
Q4 = Monomial(1, 4)


def pair_seed(c: Monomial) -> BaileyPair:
    """``alpha*_n``, ``beta*_n = 1/((-q)_n (cq)_n)`` relative to q."""
    _check_c(c)

    def beta(n, order):
        return poch_divide(poch_divide(one(order), Monomial(-1, 1), Q1, n, order), c * Q1, Q1, n, order)

    return BaileyPair(Q1, Q1, lambda n, order: alpha_star(n, c, order), beta, f"seed(c={c})")


def pair_lemma25(c: Monomial) -> BaileyPair:
    """``beta_n = (-1)^n (1-c) / ((q^2;q^2)_n (1 - c q^n))``, ``alpha_n = q^{-n(n+1)/2} alpha*_n``."""
    _check_c(c)

    def alpha(n, order):
        return _shifted(lambda o: alpha_star(n, c, o), -_tri(n), order)

    def beta(n, order):
        top = monomial(Monomial(-1 if n % 2 else 1)) - monomial(c * (-1 if n % 2 else 1))
        s = divide(top.truncate(order), one_minus(c * Q1**n))
        return poch_divide(s, Q2, Q2, n, order)

    return BaileyPair(Q1, Q1, alpha, beta, f"lemma2.5(c={c})")


def _beta_even_odd(c: Monomial, odd: bool) -> Generator:
    c2 = c * c

    def beta(n, order):
        head = monomial(Monomial(2 if n % 2 == 0 else -2))
        if odd:
            head = head * monomial(c * Q1**n)
        s = divide(head.truncate(order), one_minus(c2 * Q1 ** (2 * n)))
        return poch_divide(s, Q2, Q2, n, order)

    return beta


def pair_sum215(c: Monomial) -> BaileyPair:
    """Even combination of the c and -c pairs: ``beta_n = 2(-1)^n / ((q^2;q^2)_n (1 - c^2 q^{2n}))``."""
    _check_c(c)

    def alpha(n, order):
        return _shifted(lambda o: alpha_star_combo(n, c, 1, o), -_tri(n), order)

    return BaileyPair(Q1, Q1, alpha, _beta_even_odd(c, False), f"sum2.15(c={c})")


def pair_diff31(c: Monomial) -> BaileyPair:
    """Odd combination: ``beta_n = 2(-1)^n c q^n / ((q^2;q^2)_n (1 - c^2 q^{2n}))``."""
    _check_c(c)

    def alpha(n, order):
        return _shifted(lambda o: alpha_star_combo(n, c, -1, o), -_tri(n), order)

    return BaileyPair(Q1, Q1, alpha, _beta_even_odd(c, True), f"diff3.1(c={c})")


def _alpha_lemma26(c: Monomial) -> Generator:
    def alpha(n, order):
        return _shifted(lambda o: alpha_star_combo(n, c, 1, o), _tri(n), order)

    return alpha


def pair_lemma26(c: Monomial) -> BaileyPair:
    """``beta_n = 2 sum_j (-1)^j q^{j(j+1)} / ((q)_{n-j} (q^2;q^2)_j (1 - c^2 q^{2j}))``."""
    _check_c(c)
    c2 = c * c

    def beta(n, order):
        total = TruncatedSeries.zero(order)
        for j in range(n + 1):
            if j * (j + 1) >= order:
                break
            t = divide(q_power(j * (j + 1), -1 if j % 2 else 1).truncate(order), one_minus(c2 * Q1 ** (2 * j)))
            t = poch_divide(poch_divide(t, Q1, Q1, n - j, order), Q2, Q2, j, order)
            total = total + t
        return total.scale(2)

    return BaileyPair(Q1, Q1, _alpha_lemma26(c), beta, f"lemma2.6(c={c})")


def pair_lemma27(c: Monomial) -> BaileyPair:
    """Relative to q^2 in base q^2: ``beta_n = 2 / ((-q^2; q)_{2n} (c^2; q^2)_{n+1})``."""
    _check_c(c)
    c2 = c * c

    def beta(n, order):
        s = poch_divide(one(order).scale(2), Monomial(-1, 2), Q1, 2 * n, order)
        return poch_divide(s, c2, Q2, n + 1, order)

    return BaileyPair(Q2, Q2, _alpha_lemma26(c), beta, f"lemma2.7(c={c})")


def pair_eq35(c: Monomial) -> BaileyPair:
    """Relative to 1, base q: ``beta_n = 2c sum_j (-1)^j q^{j^2+j} / ((q^2;q^2)_j (q)_{n-j} (1 - c^2 q^{2j}))``;
    alpha from the odd combination through the relative-1 step."""
    _check_c(c)
    c2 = c * c
    odd = pair_diff31(c)

    def alpha(n, order):
        return _l1_alpha_explicit(odd.alpha, n, order)

    def beta(n, order):
        total = TruncatedSeries.zero(order)
        for j in range(n + 1):
            if j * j + j >= order:
                break
            t = divide(q_power(j * j + j, -1 if j % 2 else 1).truncate(order), one_minus(c2 * Q1 ** (2 * j)))
            t = poch_divide(poch_divide(t, Q2, Q2, j, order), Q1, Q1, n - j, order)
            total = total + t
        return (total * monomial(c)).scale(2).truncate(order) if not c.is_zero else TruncatedSeries.zero(order)

    return BaileyPair(ONE, Q1, alpha, beta, f"eq3.5(c={c})")


def _l1_alpha_explicit(a_prev: Generator, n: int, order: Fraction) -> TruncatedSeries:
    """``(1-q) q^{n^2} (a_n/(1-q^{2n+1}) - q^{2n-1} a_{n-1}/(1-q^{2n-1}))`` written out in base q."""

    def inner(o):
        t = divide(a_prev(n, o), one_minus(Monomial(1, 2 * n + 1)))
        if n > 0:
            t = t - _shifted(lambda p: divide(a_prev(n - 1, p), one_minus(Monomial(1, 2 * n - 1))), 2 * n - 1, o)
        return t * one_minus(Q1)

    return _shifted(inner, n * n, order)


def pair_lemma31(c: Monomial) -> BaileyPair:
    """Relative to 1 in base q^2: ``beta_n = 2c / ((-q; q)_{2n} (c^2; q^2)_{n+1})``."""
    _check_c(c)
    c2 = c * c
    odd = pair_diff31(c)

    def alpha(n, order):
        return _l1_alpha_explicit(odd.alpha, n, order)

    def beta(n, order):
        if c.is_zero:
            return TruncatedSeries.zero(order)
        s = poch_divide(monomial(c * 2).truncate(order), Monomial(-1, 1), Q1, 2 * n, order)
        return poch_divide(s, c2, Q2, n + 1, order)

    return BaileyPair(ONE, Q2, alpha, beta, f"lemma3.1(c={c})")


def inner_theta_sum(n: int, signed: bool) -> TruncatedSeries:
    """Exact ``sum_{|j|<=n} (+-1)^j q^{-j^2}``."""
    terms: dict[int, int] = {}
    for j in range(-n, n + 1):
        terms[-j * j] = terms.get(-j * j, 0) + ((-1 if j % 2 else 1) if signed else 1)
    return TruncatedSeries.from_terms(terms)


def alpha_eq42(n: int, order: Exponent) -> TruncatedSeries:
    """Closed form of the c = q^{1/2} pair after q -> q^2:

    q^{n(n+1)} q^{2n^2+n} [(-1)^n (1+q^{2n+1}) S_n^+ + (1-q^{2n+1}) S_n^-] / (1 - q^2)
    where S^+ and S^- are the unsigned and signed theta sums.
    """
    order = as_exponent(order)
    e = n * (n + 1) + 2 * n * n + n
    plus = monomial(Monomial(1)) + q_power(2 * n + 1)
    t1 = plus * inner_theta_sum(n, False) * (-1 if n % 2 else 1)
    t2 = one_minus(Monomial(1, 2 * n + 1)) * inner_theta_sum(n, True)
    num = (t1 + t2).shift(e).truncate(order)
    return divide(num, one_minus(Q2))


def pair_eq41() -> BaileyPair:
    """Relative to q^4 in base q^4: ``beta_n = 2 / ((-q^4; q^2)_{2n} (q^2; q^4)_{n+1})``."""

    def beta(n, order):
        s = poch_divide(one(order).scale(2), Monomial(-1, 4), Q2, 2 * n, order)
        return poch_divide(s, Q2, Q4, n + 1, order)

    return BaileyPair(Q4, Q4, alpha_eq42, beta, "eq4.1")


# --- transforms ------------------------------------------------------------

def transform_s1(p: BaileyPair) -> BaileyPair:
    """``alpha'_n = a^n Q^{n^2} alpha_n``, ``beta'_n = sum_j a^j Q^{j^2} beta_j / (Q;Q)_{n-j}``."""
    a, Q = p.a, p.Q

    def weight(j: int) -> Monomial:
        return a**j * Q ** (j * j)

    def alpha(n, order):
        w = weight(n)
        return _shifted(lambda o: p.alpha(n, o), w.exp, order).scale(w.coeff)

    def beta(n, order):
        total = TruncatedSeries.zero(order)
        for j in range(n + 1):
            w = weight(j)
            t = _shifted(lambda o: p.beta(j, o), w.exp, order).scale(w.coeff)
            total = total + poch_divide(t, Q, Q, n - j, order)
        return total

    return BaileyPair(a, Q, alpha, beta, f"S1({p.label})")


def transform_s2(p: BaileyPair) -> BaileyPair:
    """``alpha'_n = a^{n/2} Q^{n^2/2} alpha_n``;
    ``beta'_n = sum_j (-sqrt(aQ); Q)_j a^{j/2} Q^{j^2/2} beta_j / (Q;Q)_{n-j}`` over ``(-sqrt(aQ); Q)_n``."""
    a, Q = p.a, p.Q
    try:
        root_a = a.sqrt()
        root_aq = (a * Q).sqrt()
    except UnsupportedParameterError as exc:
        raise UnsupportedParameterError(f"S2 needs sqrt(a) on the lattice: {exc}") from exc
    neg_root = -root_aq

    def weight(j: int) -> Monomial:
        return root_a**j * Monomial(1, Q.exp * j * j / 2)

    def alpha(n, order):
        return _shifted(lambda o: p.alpha(n, o), weight(n).exp, order)

    def beta(n, order):
        total = TruncatedSeries.zero(order)
        for j in range(n + 1):
            t = _shifted(lambda o: p.beta(j, o), weight(j).exp, order)
            t = t * poch_finite(neg_root, Q, j, order)
            total = total + poch_divide(t, Q, Q, n - j, order)
        return poch_divide(total, neg_root, Q, n, order)

    return BaileyPair(a, Q, alpha, beta, f"S2({p.label})")


def transform_d1_reverse(p: BaileyPair) -> BaileyPair:
    """Relative ``a^2`` in base ``Q^2``: ``alpha' = alpha``,
    ``beta'_n = sum_j (-1)^{n-j} Q^{(n-j)^2} beta_j / (Q^2;Q^2)_{n-j}`` over ``(-aQ; Q)_{2n}``."""
    a, Q = p.a, p.Q
    QQ = Q * Q

    def beta(n, order):
        total = TruncatedSeries.zero(order)
        for j in range(n + 1):
            d = n - j
            t = _shifted(lambda o: p.beta(j, o), Q.exp * d * d, order).scale(-1 if d % 2 else 1)
            total = total + poch_divide(t, QQ, QQ, d, order)
        return poch_divide(total, -(a * Q), Q, 2 * n, order)

    return BaileyPair(a * a, QQ, p.alpha, beta, f"D1rev({p.label})")


def transform_l1(p: BaileyPair) -> BaileyPair:
    """Relative-Q pair to relative-1 pair in the same base:
    ``beta'_n = sum_j Q^{j^2} beta_j / (Q;Q)_{n-j}``,
    ``alpha'_n = (1-Q) Q^{n^2} (alpha_n/(1-Q^{2n+1}) - Q^{2n-1} alpha_{n-1}/(1-Q^{2n-1}))``."""
    Q = p.Q
    if p.a != Q:
        raise UnsupportedParameterError(f"L1 needs a pair relative to its base {Q}, got a = {p.a}")
    k = Q.exp

    def alpha(n, order):
        def inner(o):
            t = divide(p.alpha(n, o), one_minus(Q ** (2 * n + 1)))
            if n > 0:
                t = t - _shifted(lambda r: divide(p.alpha(n - 1, r), one_minus(Q ** (2 * n - 1))), (2 * n - 1) * k, o)
            return t * one_minus(Q)

        return _shifted(inner, n * n * k, order)

    def beta(n, order):
        total = TruncatedSeries.zero(order)
        for j in range(n + 1):
            t = _shifted(lambda o: p.beta(j, o), j * j * k, order)
            total = total + poch_divide(t, Q, Q, n - j, order)
        return total

    return BaileyPair(ONE, Q, alpha, beta, f"L1({p.label})")


# --- Bailey lemma, rho1 -> infinity -----------------------------------------

def bailey_limit_rho2(
    p: BaileyPair, rho2: Monomial, order: Exponent, patience: int = 3, max_terms: int = 10_000
) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Both sides of the rho1 -> infinity Bailey lemma for ``p``:

        sum_n (rho2)_n (-1)^n Q^{n(n-1)/2} (aQ/rho2)^n beta_n
          = 1/(aQ)_inf * sum_n (rho2)_n (-1)^n Q^{n(n-1)/2} (aQ/rho2)^n alpha_n (aQ^{n+1}/rho2)_inf

    The right side keeps ``(aQ/rho2)_inf / (aQ/rho2)_n`` as one tail product, so
    ``aQ/rho2 = -1`` stays integral.  Summation stops after ``patience``
    consecutive indices contribute nothing below ``order`` while the weight
    exponent is increasing.
    """
    order = as_exponent(order)
    a, Q = p.a, p.Q
    if not rho2.is_unit:
        raise UnsupportedParameterError(f"rho2 must be +-q^e, got {rho2}")
    x = (a * Q) / rho2
    if x.exp < 0:
        raise UnsupportedParameterError(f"aQ/rho2 = {x} has negative exponent; products diverge")
    if x.exp == 0 and x.coeff == 1:
        raise PoleError("aQ/rho2 = 1: (aQ/rho2; Q)_n vanishes")
    # tail(n) = (x Q^n; Q)_inf; for n >= 1 these all converge
    tail1 = poch_infinite(x * Q, Q, order)

    def tail(n: int, o: Fraction) -> TruncatedSeries:
        if n == 0:
            return tail1.truncate(o) * one_minus(x)
        return poch_divide(tail1.truncate(o), x * Q, Q, n - 1, o)

    lhs = TruncatedSeries.zero(order)
    rhs = TruncatedSeries.zero(order)
    quiet = 0
    last_exp: Optional[Fraction] = None
    for n in range(max_terms):
        w = Monomial(-1 if n % 2 else 1, Q.exp * n * (n - 1) / 2) * x**n
        poch = poch_finite(rho2, Q, n)
        if poch.is_zero and poch.is_exact:
            break
        lo = poch.lowest
        shift = w.exp + lo
        lt = _shifted(lambda o: p.beta(n, o) * poch.shift(-lo), shift, order).scale(w.coeff)
        rt = _shifted(lambda o: p.alpha(n, o) * poch.shift(-lo) * tail(n, o), shift, order).scale(w.coeff)
        lhs = lhs + lt
        rhs = rhs + rt
        growing = last_exp is None or w.exp > last_exp
        last_exp = w.exp
        if lt.is_zero and rt.is_zero and growing:
            quiet += 1
            if quiet >= patience:
                break
        else:
            quiet = 0
    else:
        raise InsufficientOrderError("Bailey lemma sum did not settle within max_terms")
    rhs = poch_infinite_divide(rhs, a * Q, Q, order)
    return lhs, rhs


# --- conjugate pair ----------------------------------------------------------

def gamma_closed(n: int, a: Monomial, order: Exponent) -> TruncatedSeries:
    """Closed partner of ``delta_n = q^n`` in base q.

    a = 1:  q^n / (q)_inf^2 * sum_j (-1)^j q^{j(j+1)/2 + 2nj}
    a = q:  (1-q) q^n / (q)_inf^2 * sum_j (-1)^j q^{j(j+3)/2 + 2nj}
    """
    order = as_exponent(order)
    if a == ONE:
        lin, scale = 1, None
    elif a == Q1:
        lin, scale = 3, one_minus(Q1)
    else:
        raise UnsupportedParameterError(f"closed conjugate form only for a in {{1, q}}, got {a}")
    terms: dict[int, int] = {}
    j = 0
    while n + (j * (j + lin)) // 2 + 2 * n * j < order:
        e = n + (j * (j + lin)) // 2 + 2 * n * j
        terms[e] = terms.get(e, 0) + (-1 if j % 2 else 1)
        j += 1
    s = TruncatedSeries.from_terms(terms, order)
    if scale is not None:
        s = s * scale
    s = poch_infinite_divide(s, Q1, Q1, order)
    return poch_infinite_divide(s, Q1, Q1, order)


def gamma_defining(n: int, a: Monomial, order: Exponent) -> TruncatedSeries:
    """Oracle ``sum_{j>=n} q^j / ((q)_{j-n} (aq)_{j+n})``."""
    order = as_exponent(order)
    total = TruncatedSeries.zero(order)
    j = n
    while j < order:
        t = poch_divide(q_power(j).truncate(order), Q1, Q1, j - n, order)
        total = total + poch_divide(t, a * Q1, Q1, j + n, order)
        j += 1
    return total


@dataclass(frozen=True)
class ConjugateReport:
    label: str
    a: Monomial
    closed_form_matches: dict = field(default_factory=dict)
    sums: Optional[Comparison] = None

    @property
    def equal(self) -> bool:
        return bool(self.sums) and self.closed_form_matches.get(str(self.a), False)


def conjugate_check(p: BaileyPair, order: Exponent, gamma_terms: int = 3) -> ConjugateReport:
    """Check ``sum beta_n q^n = sum alpha_n gamma_n`` for a base-q pair.

    First records, for a = 1 and a = q, whether the closed gamma agrees with
    the defining sum (``n < gamma_terms``); the pair's own ``a`` then selects
    the closed gamma used in the main comparison.
    """
    order = as_exponent(order)
    if p.Q != Q1:
        raise UnsupportedParameterError(f"conjugate check is in base q, got {p.Q}")
    if p.a not in (ONE, Q1):
        raise UnsupportedParameterError(f"conjugate check needs a in {{1, q}}, got {p.a}")
    matches = {}
    for a in (ONE, Q1):
        matches[str(a)] = all(
            equal_to_order(gamma_closed(n, a, order), gamma_defining(n, a, order), order).equal
            for n in range(gamma_terms)
        )
    beta_side = TruncatedSeries.zero(order)
    alpha_side = TruncatedSeries.zero(order)
    n = 0
    while n < order:
        beta_side = beta_side + _shifted(lambda o: p.beta(n, o), n, order)
        g = gamma_closed(n, p.a, order)
        alpha_side = alpha_side + _mul_to(p.alpha, n, g, order)
        n += 1
    return ConjugateReport(p.label, p.a, matches, equal_to_order(beta_side, alpha_side, order))


def _mul_to(alpha: Generator, n: int, g: TruncatedSeries, order: Fraction) -> TruncatedSeries:
    # gamma_n starts at q^n, so alpha_n is only needed below order - n
    lo = g.lowest if not g.is_zero else order
    if lo >= order:
        return TruncatedSeries.zero(order)
    return (alpha(n, order - lo) * g.shift(-lo)).shift(lo).truncate(order)
