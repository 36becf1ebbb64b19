"""Truncated Laurent series in a fractional power of q with exact integer coefficients.

A :class:`TruncatedSeries` stores coefficients on the lattice ``q^(e/den)``
as a dense tuple starting at the scaled exponent ``low``.  Every series
carries ``valid`` (scaled, exclusive): coefficients at or beyond it are
unknown.  Finite Laurent polynomials that are known exactly use an infinite
bound, which lets products such as ``q^(-n^2) * (1 - q^(2n+1))`` stay exact
until they meet a genuinely truncated factor.

Orders and exponents in the public API are exponent *values*
(``int`` or :class:`fractions.Fraction`), never scaled integers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import (
    InsufficientOrderError,
    NonInvertibleError,
    OutOfWindowError,
    SubstitutionError,
    UnsupportedParameterError,
)

Exponent = Union[int, Fraction]
INF = math.inf


def as_exponent(value) -> Fraction:
    """Coerce ``value`` (int, Fraction or ``"p/q"`` string) to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("float exponents are not allowed; use Fraction")
    return Fraction(value)


def _lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


@dataclass(frozen=True)
class Monomial:
    """``coeff * q^exp`` with an integer coefficient and rational exponent."""

    coeff: int
    exp: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "exp", as_exponent(self.exp))
        if self.coeff == 0:
            object.__setattr__(self, "exp", Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    @property
    def is_unit(self) -> bool:
        return self.coeff in (1, -1)

    def __mul__(self, other: "Monomial | int") -> "Monomial":
        if isinstance(other, int):
            return Monomial(self.coeff * other, self.exp)
        return Monomial(self.coeff * other.coeff, self.exp + other.exp)

    __rmul__ = __mul__

    def __neg__(self) -> "Monomial":
        return Monomial(-self.coeff, self.exp)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not other.is_unit:
            raise UnsupportedParameterError(f"cannot divide by {other}: coefficient is not +-1")
        return Monomial(self.coeff * other.coeff, self.exp - other.exp)

    def __pow__(self, k: int) -> "Monomial":
        if k < 0:
            if not self.is_unit:
                raise UnsupportedParameterError(f"negative power of {self}")
            return Monomial(self.coeff ** (-k), k * self.exp)
        if k == 0:
            return Monomial(1)
        return Monomial(self.coeff**k, k * self.exp)

    def sqrt(self) -> "Monomial":
        """Square root on the lattice; only ``q^e`` (coefficient 1) qualifies."""
        if self.coeff != 1:
            raise UnsupportedParameterError(f"no monomial square root of {self}")
        return Monomial(1, self.exp / 2)

    def __str__(self) -> str:
        if self.coeff == 0:
            return "0"
        if self.exp == 0:
            return str(self.coeff)
        sign = "-" if self.coeff < 0 else ""
        mag = abs(self.coeff)
        head = f"{sign}{mag if mag != 1 else ''}q"
        return head if self.exp == 1 else f"{head}^{self.exp}"

    _PATTERN = re.compile(
        r"^\s*(?P<sign>[+-]?)(?P<mag>\d*)\s*(?:\*?\s*(?P<q>q)(?:\^\(?(?P<num>-?\d+)(?:/(?P<den>\d+))?\)?)?)?\s*$"
    )

    @classmethod
    def parse(cls, text: str) -> "Monomial":
        """Parse ``q``, ``-q^3``, ``q^1/2``, ``2q^-1``, ``0``, ``-1`` and similar."""
        m = cls._PATTERN.match(text)
        if not m or (not m.group("mag") and not m.group("q")):
            raise ValueError(f"not a signed monomial: {text!r}")
        coeff = int(m.group("mag")) if m.group("mag") else 1
        if m.group("sign") == "-":
            coeff = -coeff
        if not m.group("q"):
            return cls(coeff)
        num = int(m.group("num")) if m.group("num") else 1
        den = int(m.group("den")) if m.group("den") else 1
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return cls(coeff, Fraction(num, den))


def mono(coeff: int = 1, exp: Exponent = 0) -> Monomial:
    return Monomial(coeff, as_exponent(exp))


@dataclass(frozen=True)
class Comparison:
    """Result of :func:`equal_to_order`."""

    equal: bool
    order: Fraction
    exponent: Optional[Fraction] = None
    lhs: Optional[int] = None
    rhs: Optional[int] = None

    def __bool__(self) -> bool:
        return self.equal


class TruncatedSeries:
    """Immutable truncated Laurent series ``sum c_e q^(e/den)``, exact below ``valid_to``."""

    __slots__ = ("den", "low", "coeffs", "valid")

    def __init__(self, den: int, low: int, coeffs: Iterable[int], valid: Union[int, float]):
        # Raw constructor on scaled integers; use the factories below instead.
        if den < 1:
            raise ValueError("denominator must be positive")
        coeffs = list(coeffs)
        if valid != INF:
            valid = int(valid)
            keep = max(0, valid - low)
            del coeffs[keep:]
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        end = len(coeffs)
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        if start == end:
            # zero: lowest known exponent is the bound itself
            low = valid if valid != INF else 0
            coeffs = ()
        else:
            low += start
            coeffs = tuple(coeffs[start:end])
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "valid", valid)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    # construction -----------------------------------------------------
    @classmethod
    def from_terms(
        cls, terms: Mapping[Exponent, int], valid_to: Optional[Exponent] = None
    ) -> "TruncatedSeries":
        """Build from ``{exponent: coefficient}``; ``valid_to=None`` means exact."""
        exps = [as_exponent(e) for e in terms]
        dens = [e.denominator for e in exps]
        if valid_to is not None:
            valid_to = as_exponent(valid_to)
            dens.append(valid_to.denominator)
        den = _lcm(*dens) if dens else 1
        valid = INF if valid_to is None else int(valid_to * den)
        scaled = {int(e * den): c for e, c in zip(exps, terms.values()) if c}
        for e in scaled:
            if e >= valid:
                raise OutOfWindowError(f"term q^{Fraction(e, den)} is not below valid_to {valid_to}")
        if not scaled:
            return cls(den, 0, (), valid)
        lo, hi = min(scaled), max(scaled)
        dense = [0] * (hi - lo + 1)
        for e, c in scaled.items():
            dense[e - lo] = c
        return cls(den, lo, dense, valid)

    @classmethod
    def constant(cls, c: int, valid_to: Optional[Exponent] = None) -> "TruncatedSeries":
        return cls.from_terms({0: c}, valid_to)

    @classmethod
    def zero(cls, valid_to: Optional[Exponent] = None) -> "TruncatedSeries":
        return cls.from_terms({}, valid_to)

    # properties -------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.valid == INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valid_to(self) -> Optional[Fraction]:
        """Exclusive bound of guaranteed terms, or ``None`` for an exact polynomial."""
        return None if self.valid == INF else Fraction(self.valid, self.den)

    @property
    def lowest(self) -> Fraction:
        return Fraction(self.low, self.den)

    @property
    def highest(self) -> Optional[Fraction]:
        if not self.coeffs:
            return None
        return Fraction(self.low + len(self.coeffs) - 1, self.den)

    def terms(self) -> Iterator[tuple[Fraction, int]]:
        for i, c in enumerate(self.coeffs):
            if c:
                yield Fraction(self.low + i, self.den), c

    def to_dict(self) -> dict[Fraction, int]:
        return dict(self.terms())

    def coeff(self, e: Exponent) -> int:
        """Coefficient of ``q^e``; raises beyond the guaranteed window."""
        e = as_exponent(e)
        if self.valid != INF and e >= Fraction(self.valid, self.den):
            raise OutOfWindowError(f"coefficient of q^{e} requested but series is valid below q^{self.valid_to}")
        scaled = e * self.den
        if scaled.denominator != 1:
            return 0
        i = int(scaled) - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def leading(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def has_integer_exponents(self) -> bool:
        if self.den == 1:
            return True
        return all((self.low + i) % self.den == 0 for i, c in enumerate(self.coeffs) if c)

    # lattice ----------------------------------------------------------
    def rescaled(self, den: int) -> "TruncatedSeries":
        """Same series on the finer lattice ``q^(1/den)``; ``den`` must be a multiple of ``self.den``."""
        if den == self.den:
            return self
        if den % self.den:
            raise ValueError(f"cannot rescale denominator {self.den} to {den}")
        k = den // self.den
        dense = [0] * ((len(self.coeffs) - 1) * k + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            dense[i * k] = c
        valid = INF if self.valid == INF else self.valid * k
        return TruncatedSeries(den, self.low * k, dense, valid)

    def truncate(self, order: Exponent) -> "TruncatedSeries":
        """Forget every term at or above ``order``."""
        order = as_exponent(order)
        den = _lcm(self.den, order.denominator)
        s = self.rescaled(den)
        valid = min(s.valid, int(order * den))
        return TruncatedSeries(den, s.low, s.coeffs, valid)

    def shift(self, e: Exponent) -> "TruncatedSeries":
        """Exact multiplication by ``q^e``."""
        e = as_exponent(e)
        den = _lcm(self.den, e.denominator)
        s = self.rescaled(den)
        k = int(e * den)
        valid = INF if s.valid == INF else s.valid + k
        return TruncatedSeries(den, s.low + k, s.coeffs, valid)

    def scale(self, c: int) -> "TruncatedSeries":
        return TruncatedSeries(self.den, self.low, [c * x for x in self.coeffs], self.valid)

    def times_monomial(self, m: Monomial) -> "TruncatedSeries":
        return self.scale(m.coeff).shift(m.exp)

    def substitute(self, sign: int, k: int) -> "TruncatedSeries":
        """Apply ``q -> sign * q^k`` term-wise."""
        return substitute(self, sign, k)

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "TruncatedSeries":
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return self.scale(-1)

    def __sub__(self, other) -> "TruncatedSeries":
        return add(self, -_coerce(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return add(_coerce(other), -self)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, Monomial):
            return self.times_monomial(other)
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TruncatedSeries":
        if isinstance(other, Monomial):
            if not other.is_unit:
                raise NonInvertibleError(f"cannot divide by {other}")
            return self.times_monomial(other ** -1)
        return divide(self, _coerce(other))

    def __rtruediv__(self, other) -> "TruncatedSeries":
        return divide(_coerce(other), self)

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            raise ValueError("use invert() for negative powers")
        out = TruncatedSeries.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        den = _lcm(self.den, other.den)
        a, b = self.rescaled(den), other.rescaled(den)
        return (a.low, a.coeffs, a.valid) == (b.low, b.coeffs, b.valid) or (
            not a.coeffs and not b.coeffs and a.valid == b.valid
        )

    def __hash__(self) -> int:
        return hash((self.lowest, tuple(self.terms()), self.valid_to))

    def __repr__(self) -> str:
        return f"TruncatedSeries({self})"

    def __str__(self) -> str:
        parts = []
        for e, c in self.terms():
            m = str(Monomial(c, e))
            if parts:
                parts.append(f"- {m[1:]}" if m.startswith("-") else f"+ {m}")
            else:
                parts.append(m)
        body = " ".join(parts) if parts else "0"
        if self.valid == INF:
            return body
        return f"{body} + O(q^{self.valid_to})"


def _coerce(x) -> TruncatedSeries:
    if isinstance(x, TruncatedSeries):
        return x
    if isinstance(x, int):
        return TruncatedSeries.constant(x)
    if isinstance(x, Monomial):
        return monomial(x)
    raise TypeError(f"cannot use {type(x).__name__} as a series")


def _common(a: TruncatedSeries, b: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries, int]:
    den = _lcm(a.den, b.den)
    return a.rescaled(den), b.rescaled(den), den


def monomial(m: Monomial, valid_to: Optional[Exponent] = None) -> TruncatedSeries:
    """Single-term series ``m``; ``valid_to=None`` gives an exact series."""
    if m.coeff == 0:
        return TruncatedSeries.zero(valid_to)
    if valid_to is not None and m.exp >= as_exponent(valid_to):
        raise OutOfWindowError(f"monomial {m} is not below valid_to {valid_to}")
    return TruncatedSeries.from_terms({m.exp: m.coeff}, valid_to)


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a, b, den = _common(a, b)
    valid = min(a.valid, b.valid)
    if not a.coeffs:
        return TruncatedSeries(den, b.low, b.coeffs, valid)
    if not b.coeffs:
        return TruncatedSeries(den, a.low, a.coeffs, valid)
    lo = min(a.low, b.low)
    hi = max(a.low + len(a.coeffs), b.low + len(b.coeffs))
    if valid != INF:
        hi = min(hi, valid)
    if hi <= lo:
        return TruncatedSeries(den, 0, (), valid)
    out = [0] * (hi - lo)
    for s in (a, b):
        off = s.low - lo
        for i, c in enumerate(s.coeffs):
            j = off + i
            if j >= len(out):
                break
            out[j] += c
    return TruncatedSeries(den, lo, out, valid)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product; the unknown tails of each factor bound the result's validity."""
    a, b, den = _common(a, b)
    if (not a.coeffs and a.is_exact) or (not b.coeffs and b.is_exact):
        return TruncatedSeries(den, 0, (), INF)
    valid = min(a.valid + b.low, b.valid + a.low)
    low = a.low + b.low
    if not a.coeffs or not b.coeffs:
        return TruncatedSeries(den, low, (), valid)
    n = len(a.coeffs) + len(b.coeffs) - 1
    if valid != INF:
        n = min(n, valid - low)
    if n <= 0:
        return TruncatedSeries(den, low, (), valid)
    # inner loop over the sparser factor
    if sum(1 for c in a.coeffs if c) < sum(1 for c in b.coeffs if c):
        a, b = b, a
    sparse = [(j, c) for j, c in enumerate(b.coeffs) if c]
    out = [0] * n
    for i, x in enumerate(a.coeffs):
        if i >= n:
            break
        if not x:
            continue
        lim = n - i
        for j, y in sparse:
            if j >= lim:
                break
            out[i + j] += x * y
    return TruncatedSeries(den, low, out, valid)


def divide(a: TruncatedSeries, b: TruncatedSeries, order: Optional[Exponent] = None) -> TruncatedSeries:
    """``a / b`` by long division; ``b`` must have leading coefficient +-1.

    Validity follows ``a * invert(b)``.  Dividing an exact series by a
    non-monomial exact series has no natural bound, so ``order`` is then
    required.
    """
    a, b, den = _common(a, b)
    if not b.coeffs:
        raise NonInvertibleError("division by a series with no known nonzero term")
    b0 = b.coeffs[0]
    if b0 not in (1, -1):
        raise NonInvertibleError(f"leading coefficient {b0} of divisor is not a unit")
    if len(b.coeffs) == 1 and b.is_exact:
        return a.scale(b0).shift(-Fraction(b.low, den))
    if not a.coeffs and a.is_exact:
        return TruncatedSeries(den, 0, (), INF)
    valid = min(a.valid - b.low, b.valid - 2 * b.low + a.low)
    if order is not None:
        order = as_exponent(order)
        if (order * den).denominator != 1:
            den2 = _lcm(den, order.denominator)
            return divide(a.rescaled(den2), b.rescaled(den2), order)
        valid = min(valid, int(order * den))
    if valid == INF:
        raise InsufficientOrderError("exact division by a non-monomial needs an explicit order")
    low = a.low - b.low
    n = valid - low
    if n <= 0 or not a.coeffs:
        return TruncatedSeries(den, low, (), valid)
    tail = [(j, c) for j, c in enumerate(b.coeffs) if c and j > 0]
    ac = a.coeffs
    out = [0] * n
    for k in range(n):
        acc = ac[k] if k < len(ac) else 0
        for j, c in tail:
            if j > k:
                break
            v = out[k - j]
            if v:
                acc -= c * v
        out[k] = acc * b0
    return TruncatedSeries(den, low, out, valid)


def invert(a: TruncatedSeries, order: Optional[Exponent] = None) -> TruncatedSeries:
    """Multiplicative inverse; the lowest coefficient of ``a`` must be +-1."""
    if a.coeffs and a.coeffs[0] not in (1, -1):
        raise NonInvertibleError(f"leading coefficient {a.coeffs[0]} is not +-1")
    one = TruncatedSeries(a.den, 0, (1,), INF)
    return divide(one, a, order)


def substitute(a: TruncatedSeries, sign: int, k: int) -> TruncatedSeries:
    """``q -> sign * q^k``; ``sign=-1`` needs integer exponents on every term."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if k < 1:
        raise ValueError("k must be a positive integer")
    den = a.den
    if sign == -1:
        for i, c in enumerate(a.coeffs):
            if c and (a.low + i) % den:
                raise SubstitutionError(
                    f"q -> -q is undefined on the fractional term q^{Fraction(a.low + i, den)}"
                )
    out = [0] * ((len(a.coeffs) - 1) * k + 1) if a.coeffs else []
    for i, c in enumerate(a.coeffs):
        if c:
            e = a.low + i
            if sign == -1 and (e // den) % 2:
                c = -c
            out[i * k] = c
    valid = INF if a.valid == INF else a.valid * k
    return TruncatedSeries(den, a.low * k, out, valid)


def coeff(a: TruncatedSeries, e: Exponent) -> int:
    return a.coeff(e)


def equal_to_order(a: TruncatedSeries, b: TruncatedSeries, order: Exponent) -> Comparison:
    """Compare every coefficient below ``order`` (exclusive)."""
    order = as_exponent(order)
    for s, name in ((a, "left"), (b, "right")):
        if s.valid_to is not None and order > s.valid_to:
            raise InsufficientOrderError(
                f"{name} operand is valid below q^{s.valid_to}, comparison requested below q^{order}"
            )
    den = _lcm(a.den, b.den, order.denominator)
    a, b = a.rescaled(den), b.rescaled(den)
    stop = int(order * den)
    if a.coeffs or b.coeffs:
        start = min(a.low if a.coeffs else b.low, b.low if b.coeffs else a.low)
        for e in range(start, stop):
            x = a.coeffs[e - a.low] if 0 <= e - a.low < len(a.coeffs) else 0
            y = b.coeffs[e - b.low] if 0 <= e - b.low < len(b.coeffs) else 0
            if x != y:
                return Comparison(False, order, Fraction(e, den), x, y)
    return Comparison(True, order)


def one(valid_to: Optional[Exponent] = None) -> TruncatedSeries:
    return TruncatedSeries.constant(1, valid_to)


def q_power(e: Exponent, coeff: int = 1) -> TruncatedSeries:
    """Exact monomial ``coeff * q^e``."""
    return monomial(Monomial(coeff, as_exponent(e)))


def one_minus(m: Monomial) -> TruncatedSeries:
    """Exact binomial ``1 - m``."""
    return add(one(), monomial(-m))


def series_sum(items: Iterable[TruncatedSeries], valid_to: Optional[Exponent] = None) -> TruncatedSeries:
    """Sum with a fallback validity for the empty or all-exact case."""
    total = TruncatedSeries.zero(valid_to)
    for s in items:
        total = total + s
    return total
