"""Indefinite theta (Hecke-type) double sums and the Appell-Lerch sum."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .bailey import inner_theta_sum
from .errors import DivergenceError, PoleError, UnsupportedParameterError
from .qproducts import bilateral_indices, poch_infinite_divide
from .series import Exponent, Monomial, TruncatedSeries, as_exponent, divide, monomial, one_minus

Q1 = Monomial(1, 1)

__all__ = [
    "HeckeParams",
    "inner_sum",
    "hecke_f",
    "appell_m",
    "build_g",
    "build_g1",
    "build_g2",
    "build_g3",
    "build_g3_alternating",
    "g1_hecke",
    "g2_hecke",
]


def inner_sum(n: int, signed: bool = False) -> TruncatedSeries:
    """Exact ``sum_{|j|<=n} (+-1)^j q^{-j^2}`` (signed when ``signed``)."""
    return inner_theta_sum(n, signed)


@dataclass(frozen=True)
class HeckeParams:
    """Data for ``f_{A,B,C}(x, y, base)``."""

    A: int
    B: int
    C: int
    x: Monomial
    y: Monomial
    base: Monomial = Q1


def _scan_region(E: Callable[[int, int], Fraction], order: Fraction, patience: int, limit: int) -> Iterator[tuple[int, int]]:
    """All ``(u, v)`` with ``u, v >= 0`` and ``E(u, v) < order``.

    Rows are cut once E is at or past ``order`` and increasing in v; the scan
    over u ends after ``patience`` empty rows whose minima keep increasing.
    """
    empty = 0
    prev_min = None
    for u in range(limit):
        row_min = None
        hit = False
        v = 0
        while True:
            if v > limit:
                raise DivergenceError("Hecke sum row does not terminate")
            e = E(u, v)
            row_min = e if row_min is None else min(row_min, e)
            if e < order:
                hit = True
                yield u, v
            elif E(u, v + 1) > e:
                break
            v += 1
        if hit:
            empty = 0
        elif prev_min is not None and row_min > prev_min:
            empty += 1
            if empty >= patience:
                return
        prev_min = row_min
    raise DivergenceError("Hecke sum does not terminate: exponent is not bounded below in the cone")


def hecke_f(p: HeckeParams, order: Exponent, patience: int = 3, limit: int = 100_000) -> TruncatedSeries:
    """``f_{A,B,C}(x, y, base) = (sum_{r,s>=0} - sum_{r,s<0}) (-1)^{r+s} x^r y^s base^{A r(r-1)/2 + B rs + C s(s-1)/2}``."""
    order = as_exponent(order)
    if p.A <= 0 or p.C <= 0:
        raise DivergenceError(f"f_{{{p.A},{p.B},{p.C}}} needs A, C > 0")
    if not (p.x.is_unit and p.y.is_unit):
        raise UnsupportedParameterError("x and y must be +-q^e")
    k = p.base.exp
    if p.base.coeff != 1 or k <= 0:
        raise UnsupportedParameterError(f"base must be q^k, k > 0; got {p.base}")

    def quad(r: int, s: int) -> Fraction:
        return k * (Fraction(p.A * r * (r - 1), 2) + p.B * r * s + Fraction(p.C * s * (s - 1), 2)) + r * p.x.exp + s * p.y.exp

    terms: dict[Fraction, int] = {}

    def put(r: int, s: int, region_sign: int) -> None:
        e = quad(r, s)
        c = region_sign * (-1 if (r + s) % 2 else 1) * p.x.coeff ** (r % 2) * p.y.coeff ** (s % 2)
        terms[e] = terms.get(e, 0) + c

    for u, v in _scan_region(lambda u, v: quad(u, v), order, patience, limit):
        put(u, v, 1)
    for u, v in _scan_region(lambda u, v: quad(-1 - u, -1 - v), order, patience, limit):
        put(-1 - u, -1 - v, -1)
    return TruncatedSeries.from_terms(terms, order)


def appell_m(x: Monomial, z: Monomial, order: Exponent) -> TruncatedSeries:
    """``m(x, q, z) = 1/j(z; q) * sum_r (-1)^r q^{r(r-1)/2} z^r / (1 - q^{r-1} x z)``
    with ``j(z; q)`` taken as ``(x)_inf (q/x)_inf (q)_inf``.

    ``x`` needs exponent in (0, 1) so that both infinite products converge.
    """
    order = as_exponent(order)
    if not (x.is_unit and z.is_unit):
        raise UnsupportedParameterError("x and z must be +-q^e")
    qx = Q1 / x
    if x.exp <= 0 or qx.exp <= 0:
        raise DivergenceError(f"(x)_inf (q/x)_inf diverges for x = {x}")

    def pole_part(r: int) -> Monomial:
        return Monomial(1, r - 1) * x * z

    def lowest(r: int) -> Fraction:
        w = pole_part(r)
        return Fraction(r * (r - 1), 2) + r * z.exp + (-w.exp if w.exp < 0 else 0)

    total = TruncatedSeries.zero(order)
    for r in bilateral_indices(lowest, order):
        w = pole_part(r)
        if w.exp == 0:
            if w.coeff == 1:
                raise PoleError(f"m(x, q, z) has a pole: q^{r - 1} x z = 1")
            raise UnsupportedParameterError(f"1 - q^{r - 1} x z = {1 - w.coeff} is not a unit")
        num = monomial(Monomial(-1 if r % 2 else 1, Fraction(r * (r - 1), 2)) * z**r)
        total = total + divide(num, one_minus(w), order)
    for a in (x, qx, Q1):
        total = poch_infinite_divide(total, a, Q1, order)
    return total


# --- the G family ------------------------------------------------------------

def build_g(a: int, b: int, order: Exponent, signed: bool = True) -> TruncatedSeries:
    """``sum_{n>=0} q^{a n^2 + b n} (1 - q^{2n+1}) sum_{|j|<=n} (-1)^j q^{-j^2}``; ``signed=False`` drops the ``(-1)^j``."""
    order = as_exponent(order)
    if a <= 1:
        raise DivergenceError("need a > 1 for the inner sum to be dominated")
    total = TruncatedSeries.zero(order)
    n = 0
    while (a - 1) * n * n + b * n < order:
        t = one_minus(Monomial(1, 2 * n + 1)) * inner_sum(n, signed)
        total = total + t.shift(a * n * n + b * n).truncate(order)
        n += 1
    return total


def build_g1(order: Exponent) -> TruncatedSeries:
    return build_g(5, 4, order)


def build_g2(order: Exponent) -> TruncatedSeries:
    return build_g(7, 6, order)


def _g3(order: Exponent, alternate: bool) -> TruncatedSeries:
    order = as_exponent(order)
    total = TruncatedSeries.zero(order)
    n = 0
    while 2 * n * n + 6 * n < order:
        t = one_minus(Monomial(1, 2 * n + 1)) * inner_sum(n, True)
        i = 0
        while 2 * n * n + 6 * n + 2 * i * i + 6 * i + 8 * n * i < order:
            e = 3 * n * n + 6 * n + 2 * i * (i + 3) + 8 * n * i
            sign = -1 if alternate and i % 2 else 1
            total = total + t.shift(e).scale(sign).truncate(order)
            i += 1
        n += 1
    return total


def build_g3(order: Exponent) -> TruncatedSeries:
    """``sum_{n,i>=0} q^{3n^2+6n+2i(i+3)+8ni} (1-q^{2n+1}) sum_{|j|<=n} (-1)^j q^{-j^2}``."""
    return _g3(order, False)


def build_g3_alternating(order: Exponent) -> TruncatedSeries:
    """As :func:`build_g3` with an extra ``(-1)^i`` in the outer double sum."""
    return _g3(order, True)


def g1_hecke(order: Exponent) -> TruncatedSeries:
    """``f_{8,12,8}(q^8, q^8, q) + q^9 f_{8,12,8}(q^18, q^18, q)``."""
    a = hecke_f(HeckeParams(8, 12, 8, Monomial(1, 8), Monomial(1, 8)), order)
    b = hecke_f(HeckeParams(8, 12, 8, Monomial(1, 18), Monomial(1, 18)), as_exponent(order) - 9)
    return a + b.shift(9)


def g2_hecke(order: Exponent) -> TruncatedSeries:
    """``f_{12,16,12}(q^12, q^12, q) + q^13 f_{12,16,12}(q^26, q^26, q)``."""
    a = hecke_f(HeckeParams(12, 16, 12, Monomial(1, 12), Monomial(1, 12)), order)
    b = hecke_f(HeckeParams(12, 16, 12, Monomial(1, 26), Monomial(1, 26)), as_exponent(order) - 13)
    return a + b.shift(13)
