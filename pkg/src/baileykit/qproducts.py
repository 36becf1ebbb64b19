"""q-Pochhammer symbols, finite and infinite, and the theta function j."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator, Optional

from .errors import DivergenceError, UnsupportedParameterError
from .series import (
    Exponent,
    Monomial,
    TruncatedSeries,
    as_exponent,
    divide,
    monomial,
    one,
    one_minus,
)


def _check_base(Q: Monomial) -> None:
    if Q.coeff != 1 or Q.exp <= 0:
        raise UnsupportedParameterError(f"base must be q^k with k > 0, got {Q}")


def poch_finite(a: Monomial, Q: Monomial, n: int, order: Optional[Exponent] = None) -> TruncatedSeries:
    """``(a; Q)_n = prod_{0<=i<n} (1 - a Q^i)``.

    Exact unless ``order`` is given, in which case partial products are
    truncated below ``order`` as they are formed.
    """
    _check_base(Q)
    if n < 0:
        raise ValueError("use poch_divide for negative lengths")
    out = one(order)
    if a.is_zero:
        return out
    for i in range(n):
        out = out * one_minus(a * Q**i)
        if out.is_zero and out.is_exact:
            break
    return out


def poch_divide(
    s: TruncatedSeries, a: Monomial, Q: Monomial, n: int, order: Optional[Exponent] = None
) -> TruncatedSeries:
    """``s / (a; Q)_n``, one binomial at a time."""
    _check_base(Q)
    out = s
    if a.is_zero:
        return out if order is None else out.truncate(order)
    for i in range(n):
        out = divide(out, one_minus(a * Q**i), order)
    if order is not None and out.is_exact:
        out = out.truncate(order)
    return out


def poch_infinite(a: Monomial, Q: Monomial, order: Exponent) -> TruncatedSeries:
    """``(a; Q)_inf`` below ``order``; factors with exponent >= order are dropped."""
    _check_base(Q)
    order = as_exponent(order)
    if a.is_zero:
        return one(order)
    if a.exp <= 0:
        raise DivergenceError(f"(a; Q)_inf diverges for a = {a}: exponent must be positive")
    out = one(order)
    term = a
    while term.exp < order:
        out = out * one_minus(term)
        term = term * Q
    return out


def poch_infinite_divide(s: TruncatedSeries, a: Monomial, Q: Monomial, order: Exponent) -> TruncatedSeries:
    """``s / (a; Q)_inf`` below ``order``."""
    _check_base(Q)
    order = as_exponent(order)
    out = s.truncate(order)
    if a.is_zero:
        return out
    if a.exp <= 0:
        raise DivergenceError(f"(a; Q)_inf diverges for a = {a}: exponent must be positive")
    term = a
    # a factor 1 - t only touches exponents >= lowest + exp(t)
    while term.exp < order - out.lowest:
        out = divide(out, one_minus(term))
        term = term * Q
    return out


def poch_multi(params: list[Monomial], Q: Monomial, n: int, order: Optional[Exponent] = None) -> TruncatedSeries:
    """Shorthand ``(b, c, ...; Q)_n`` for the product of the individual symbols."""
    out = one(order)
    for a in params:
        out = out * poch_finite(a, Q, n, order)
    return out


def bilateral_indices(exponent: Callable[[int], Fraction], order: Exponent, limit: int = 1_000_000) -> Iterator[int]:
    """Yield every integer n with ``exponent(n) < order`` for a convex quadratic exponent.

    Each direction stops only once the exponent is at or past ``order`` *and*
    strictly increasing outward, which for a convex quadratic means it stays
    past ``order`` for good.
    """
    order = as_exponent(order)
    for step in (1, -1):
        n = 0 if step == 1 else -1
        while True:
            if abs(n) > limit:
                raise DivergenceError("bilateral sum does not terminate: exponent is not growing")
            e = exponent(n)
            if e < order:
                yield n
            elif exponent(n + step) > e:
                break
            n += step


def theta_j(a: Exponent, m: Exponent, order: Exponent) -> TruncatedSeries:
    """``j(q^a, q^m) = sum_{n in Z} (-1)^n q^(m n(n-1)/2 + a n)`` below ``order``."""
    a, m, order = as_exponent(a), as_exponent(m), as_exponent(order)
    if m <= 0:
        raise DivergenceError(f"theta sum diverges for m = {m}")
    terms: dict[Fraction, int] = {}

    def expo(n: int) -> Fraction:
        return m * n * (n - 1) / 2 + a * n

    for n in bilateral_indices(expo, order):
        e = expo(n)
        terms[e] = terms.get(e, 0) + (-1 if n % 2 else 1)
    return TruncatedSeries.from_terms(terms, order)


def theta_j_product(a: Exponent, m: Exponent, order: Exponent) -> TruncatedSeries:
    """Triple-product form ``(q^a; q^m)_inf (q^(m-a); q^m)_inf (q^m; q^m)_inf``; needs ``0 < a < m``."""
    a, m = as_exponent(a), as_exponent(m)
    if not 0 < a < m:
        raise DivergenceError(f"triple product needs 0 < a < m, got a={a}, m={m}")
    Q = Monomial(1, m)
    return (
        poch_infinite(Monomial(1, a), Q, order)
        * poch_infinite(Monomial(1, m - a), Q, order)
        * poch_infinite(Q, Q, order)
    )


def euler_phi(order: Exponent) -> TruncatedSeries:
    """``(q; q)_inf``."""
    q = Monomial(1, 1)
    return poch_infinite(q, q, order)


def monomial_series(m: Monomial, order: Optional[Exponent] = None) -> TruncatedSeries:
    return monomial(m) if order is None else monomial(m).truncate(order)
