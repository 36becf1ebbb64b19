"""Mock theta series, the identity registry and the comparison driver."""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from . import bailey
from .bailey import BaileyPair, alpha_star_combo
from .errors import BindingError, UnknownIdentityError
from .hecke import (
    HeckeParams,
    build_g1,
    build_g2,
    build_g3,
    build_g3_alternating,
    g1_hecke,
    g2_hecke,
    hecke_f,
    inner_sum,
)
from .qproducts import euler_phi, poch_divide, poch_finite, poch_infinite, poch_infinite_divide, theta_j
from .series import (
    Comparison,
    Exponent,
    Monomial,
    TruncatedSeries,
    as_exponent,
    equal_to_order,
    monomial,
    one,
    one_minus,
    q_power,
)

q = Monomial(1, 1)


def M(coeff: int, exp: Exponent) -> Monomial:
    return Monomial(coeff, as_exponent(exp))


# --- mock theta functions -----------------------------------------------------

def mock_f0(order: Exponent) -> TruncatedSeries:
    """``sum_n q^{n^2} / (-q; q)_n``."""
    order = as_exponent(order)
    total = TruncatedSeries.zero(order)
    n = 0
    while n * n < order:
        total = total + poch_divide(q_power(n * n).truncate(order), M(-1, 1), q, n, order)
        n += 1
    return total


def mock_phi10(order: Exponent) -> TruncatedSeries:
    """``sum_n q^{n(n+1)/2} / (q; q^2)_{n+1}``."""
    order = as_exponent(order)
    total = TruncatedSeries.zero(order)
    n = 0
    while n * (n + 1) // 2 < order:
        total = total + poch_divide(q_power(n * (n + 1) // 2).truncate(order), q, M(1, 2), n + 1, order)
        n += 1
    return total


def mock_f2_seventh(order: Exponent) -> TruncatedSeries:
    """``sum_n q^{n(n+1)} / ((-q; q)_n (q; q^2)_{n+1})``."""
    order = as_exponent(order)
    total = TruncatedSeries.zero(order)
    n = 0
    while n * (n + 1) < order:
        t = poch_divide(q_power(n * (n + 1)).truncate(order), M(-1, 1), q, n, order)
        total = total + poch_divide(t, q, M(1, 2), n + 1, order)
        n += 1
    return total


def mock_chi1_fifth(order: Exponent) -> TruncatedSeries:
    """``sum_n q^n / (q^{n+1}; q)_{n+1}``."""
    order = as_exponent(order)
    total = TruncatedSeries.zero(order)
    n = 0
    while n < order:
        total = total + poch_divide(q_power(n).truncate(order), M(1, n + 1), q, n + 1, order)
        n += 1
    return total


def build_p1(order: Exponent) -> TruncatedSeries:
    """``sum_n q^{2n^2+2n}/(-q^2;q^2)_n sum_{j<=n} q^{j^2+j} / ((-q;q^2)_{j+1} (q^2;q^2)_{n-j})``."""
    order = as_exponent(order)
    q2 = M(1, 2)
    total = TruncatedSeries.zero(order)
    n = 0
    while 2 * n * n + 2 * n < order:
        outer = 2 * n * n + 2 * n
        inner = TruncatedSeries.zero(order - outer)
        j = 0
        while j <= n and outer + j * j + j < order:
            t = poch_divide(q_power(j * j + j).truncate(order - outer), M(-1, 1), q2, j + 1, order - outer)
            inner = inner + poch_divide(t, q2, q2, n - j, order - outer)
            j += 1
        total = total + poch_divide(inner.shift(outer), M(-1, 2), q2, n, order)
        n += 1
    return total


def at_q_power(builder: Callable[[Fraction], TruncatedSeries], k: int, order: Exponent) -> TruncatedSeries:
    """``builder`` evaluated at ``q^k`` below ``order``."""
    order = as_exponent(order)
    inner = Fraction(math.ceil(order / k))
    return builder(inner).substitute(1, k).truncate(order)


def even_part2(s: TruncatedSeries) -> TruncatedSeries:
    """``F(q) + F(-q)``."""
    return s + s.substitute(-1, 1)


# --- identity sides -----------------------------------------------------------

def f0_lhs(order: Fraction) -> TruncatedSeries:
    return euler_phi(order) * mock_f0(order)


def f0_rhs(order: Fraction) -> TruncatedSeries:
    total = TruncatedSeries.zero(order)
    n = 0
    while n * (3 * n + 1) // 2 < order:
        t = one_minus(M(1, 4 * n + 2)) * inner_sum(n, True)
        total = total + t.shift(n * (5 * n + 1) // 2).truncate(order)
        n += 1
    return total


def refined_uniqueness_sides(c: Monomial, n: int, order: Fraction) -> tuple[TruncatedSeries, TruncatedSeries]:
    """``1/((-q)_n (cq)_n)`` against its expansion ``1/(-q)_n sum_j (-1)^j q^{j(j+1)/2}(1-c)/((q)_{n-j}(q)_j(1-cq^j))``."""
    bailey._check_c(c)
    lhs = poch_divide(poch_divide(one(order), M(-1, 1), q, n, order), c * q, q, n, order)
    total = TruncatedSeries.zero(order)
    top = one_minus(c)
    for j in range(n + 1):
        e = j * (j + 1) // 2
        if e >= order:
            break
        t = (top * q_power(e, -1 if j % 2 else 1)).truncate(order)
        t = poch_divide(poch_divide(t, q, q, n - j, order), q, q, j, order)
        total = total + bailey.divide(t, one_minus(c * q**j))
    return lhs, poch_divide(total, M(-1, 1), q, n, order)


def phi_lhs(order: Fraction) -> TruncatedSeries:
    return at_q_power(mock_phi10, 4, order).scale(2)


def p1_rhs(order: Fraction) -> TruncatedSeries:
    pref = poch_infinite_divide(poch_infinite(M(-1, 4), M(1, 4), order), M(-1, 2), M(1, 2), order)
    return pref * even_part2(build_p1(order))


def g1_lhs(order: Fraction) -> TruncatedSeries:
    total = TruncatedSeries.zero(order)
    n = 0
    while 2 * n * (n + 1) < order:
        t = poch_finite(M(-1, 4), M(1, 4), n, order) * q_power(2 * n * (n + 1))
        t = poch_divide(poch_divide(t, M(-1, 2), M(1, 2), 2 * n + 1, order), M(1, 2), M(1, 4), n + 1, order)
        total = total + t
        n += 1
    return total.scale(2)


def g1_rhs(order: Fraction) -> TruncatedSeries:
    s = poch_infinite(M(-1, 4), M(1, 4), order) * even_part2(build_g1(order))
    return poch_infinite_divide(s, M(1, 4), M(1, 4), order)


def p1_via_g1(order: Fraction) -> TruncatedSeries:
    return poch_infinite_divide(build_g1(order), M(1, 2), M(1, 2), order)


def f2_lhs(order: Fraction) -> TruncatedSeries:
    return at_q_power(mock_f2_seventh, 4, order).scale(2)


def g2_rhs(order: Fraction) -> TruncatedSeries:
    return poch_infinite_divide(even_part2(build_g2(order)), M(1, 4), M(1, 4), order)


def chi1_lhs(order: Fraction) -> TruncatedSeries:
    return at_q_power(mock_chi1_fifth, 4, order).scale(2)


def _over_q4_squared(s: TruncatedSeries, order: Fraction) -> TruncatedSeries:
    s = poch_infinite_divide(s, M(1, 4), M(1, 4), order)
    return poch_infinite_divide(s, M(1, 4), M(1, 4), order)


def g3_rhs(order: Fraction) -> TruncatedSeries:
    return _over_q4_squared(even_part2(build_g3(order)), order)


def g3_alternating_rhs(order: Fraction) -> TruncatedSeries:
    return _over_q4_squared(even_part2(build_g3_alternating(order)), order)


def _check_t(t: Monomial) -> None:
    bailey._check_c(t)


def t_family_lhs(t: Monomial, order: Fraction) -> TruncatedSeries:
    """``2 sum_n (-t^2)^n q^{n^2} / (t^2; q^2)_{n+1}``."""
    _check_t(t)
    t2 = t * t
    total = TruncatedSeries.zero(order)
    n = 0
    while n * n + n * t2.exp < order:
        m = (-t2) ** n * M(1, n * n)
        total = total + poch_divide(monomial(m).truncate(order), t2, M(1, 2), n + 1, order)
        n += 1
    return total.scale(2)


def _combo_theta_sum(t: Monomial, linear: int, order: Fraction) -> TruncatedSeries:
    """``sum_{n,j>=0} (-1)^j q^{j(j+linear)/2 + 2nj - n(n-1)/2} combo_n(t)``."""
    total = TruncatedSeries.zero(order)
    n = 0
    while n < order:
        shift = Fraction(n * (n - 1), 2)
        inner_order = order + shift
        terms: dict[int, int] = {}
        j = 0
        while j * (j + linear) // 2 + 2 * n * j < inner_order:
            e = j * (j + linear) // 2 + 2 * n * j
            terms[e] = terms.get(e, 0) + (-1 if j % 2 else 1)
            j += 1
        inner = TruncatedSeries.from_terms(terms, inner_order)
        combo = alpha_star_combo(n, t, 1, inner_order)
        total = total + (combo * inner).shift(-shift).truncate(order)
        n += 1
    return total


def t_family_rhs_printed(t: Monomial, order: Fraction) -> TruncatedSeries:
    _check_t(t)
    s = poch_infinite(q, M(1, 2), order) * _combo_theta_sum(t, 1, order)
    s = poch_infinite_divide(s, M(1, 2), M(1, 2), order)
    return poch_infinite_divide(s, M(1, 2), M(1, 2), order)


def t_family_rhs_derived(t: Monomial, order: Fraction) -> TruncatedSeries:
    """``(q; q^2)_inf S(-q)`` with ``S = (1-q)/(q)_inf^2 sum (-1)^j q^{j(j+3)/2+2nj-n(n-1)/2} combo_n(t)``."""
    _check_t(t)
    s = _combo_theta_sum(t, 3, order) * one_minus(q)
    s = poch_infinite_divide(poch_infinite_divide(s, q, q, order), q, q, order)
    return poch_infinite(q, M(1, 2), order) * s.substitute(-1, 1)


def combo_weighted_sum(t: Monomial, order: Fraction) -> TruncatedSeries:
    """``sum_n q^{n(n+1)/2} combo_n(t)``."""
    _check_t(t)
    total = TruncatedSeries.zero(order)
    n = 0
    while n < order:
        shift = Fraction(n * (n + 1), 2)
        total = total + alpha_star_combo(n, t, 1, order - shift).shift(shift)
        n += 1
    return total


def product_side_printed(t: Monomial, order: Fraction) -> TruncatedSeries:
    """``(q^2; q^2)_inf^2 / (t^2; q^2)_inf``."""
    _check_t(t)
    s = poch_infinite(M(1, 2), M(1, 2), order) ** 2
    return poch_infinite_divide(s.truncate(order), t * t, M(1, 2), order)


def product_side_derived(t: Monomial, order: Fraction) -> TruncatedSeries:
    """``2 (q^2; q)_inf (q^2; q^2)_inf / (t^2; q^2)_inf``."""
    _check_t(t)
    s = poch_infinite(M(1, 2), q, order) * poch_infinite(M(1, 2), M(1, 2), order)
    return poch_infinite_divide(s, t * t, M(1, 2), order).scale(2)


def f232_q4(order: Fraction) -> TruncatedSeries:
    return hecke_f(HeckeParams(2, 3, 2, M(1, 8), M(1, 8), M(1, 4)), order)


def f343_q4(order: Fraction) -> TruncatedSeries:
    return hecke_f(HeckeParams(3, 4, 3, M(1, 12), M(1, 12), M(1, 4)), order)


# --- registry -----------------------------------------------------------------

Bindings = Mapping[str, Monomial]
SideBuilder = Callable[[Bindings, Fraction], TruncatedSeries]


@dataclass(frozen=True)
class Identity:
    """A named, parameterised equality between two series builders.

    Exactly one of ``lhs``/``rhs`` (a pair of builders), ``indexed`` (a family
    indexed by ``n <= n_max``) or ``pair`` (a Bailey pair whose defining
    relation is checked) is set.
    """

    name: str
    reference: str
    summary: str
    params: tuple[tuple[str, Monomial], ...] = ()
    default_order: int = 200
    default_n_max: int = 8
    lattice_den: int = 1
    lhs: Optional[SideBuilder] = None
    rhs: Optional[SideBuilder] = None
    indexed: Optional[Callable[[Bindings, int, Fraction], tuple[TruncatedSeries, TruncatedSeries]]] = None
    pair: Optional[Callable[[Bindings], BaileyPair]] = None

    @property
    def defaults(self) -> dict[str, Monomial]:
        return dict(self.params)

    def bind(self, overrides: Optional[Bindings] = None) -> dict[str, Monomial]:
        bound = self.defaults
        for key, value in (overrides or {}).items():
            if key not in bound:
                raise BindingError(f"{self.name} has no parameter {key!r}")
            if not isinstance(value, Monomial):
                raise BindingError(f"{self.name}: {key} must be a signed monomial, got {value!r}")
            bound[key] = value
        return bound

    def den(self, bindings: Bindings) -> int:
        d = self.lattice_den
        for v in bindings.values():
            d = math.lcm(d, v.exp.denominator)
        return d


def _plain(fn: Callable[[Fraction], TruncatedSeries]) -> SideBuilder:
    return lambda b, order: fn(order)


def _with_t(fn: Callable[[Monomial, Fraction], TruncatedSeries]) -> SideBuilder:
    return lambda b, order: fn(b["t"], order)


_C = (("c", q),)
_T = (("t", q),)


def _pair_entry(name: str, summary: str, factory: Callable[..., BaileyPair], params=_C) -> Identity:
    if params:
        make = lambda b: factory(b["c"])  # noqa: E731
    else:
        make = lambda b: factory()  # noqa: E731
    return Identity(name, name.removeprefix("id-pair-"), summary, params, default_order=80, pair=make)


def _build_registry() -> tuple[Identity, ...]:
    entries = [
        Identity("id-1.1", "(1.1)", "(q)_inf f0(q) equals the indefinite theta sum with exponent n(5n+1)/2",
                 lhs=_plain(f0_lhs), rhs=_plain(f0_rhs)),
        Identity("id-2.12", "(2.12)", "1/((-q)_n (cq)_n) expanded as a finite sum, for every n <= n_max",
                 params=_C, default_order=100, default_n_max=20,
                 indexed=lambda b, n, order: refined_uniqueness_sides(b["c"], n, order)),
        Identity("id-4.3", "Theorem 1", "2 phi(q^4) in terms of P1(q) + P1(-q)", lhs=_plain(phi_lhs), rhs=_plain(p1_rhs)),
        Identity("id-4.4", "(4.4)", "sum with (-q^4;q^4)_n in terms of G1(q) + G1(-q)", lhs=_plain(g1_lhs), rhs=_plain(g1_rhs)),
        Identity("id-4.5", "(4.5)", "P1(q) = G1(q)/(q^2;q^2)_inf", lhs=_plain(build_p1), rhs=_plain(p1_via_g1)),
        Identity("id-4.6", "Theorem 2", "2 F2(q^4) in terms of G2(q) + G2(-q)", lhs=_plain(f2_lhs), rhs=_plain(g2_rhs)),
        Identity("id-4.9", "Theorem 3", "2 chi1(q^4) against G3 as printed (no sign on i)", lhs=_plain(chi1_lhs), rhs=_plain(g3_rhs)),
        Identity("id-4.9-signed", "Theorem 3 (corrected)", "2 chi1(q^4) against G3 with (-1)^i in the outer sum",
                 lhs=_plain(chi1_lhs), rhs=_plain(g3_alternating_rhs)),
        Identity("id-4.10", "Theorem 4", "t-family as printed, (q;q^2)_inf/(q^2;q^2)_inf^2 times the combination sum",
                 params=_T, default_order=100, lhs=_with_t(t_family_lhs), rhs=_with_t(t_family_rhs_printed)),
        Identity("id-4.10-derived", "Theorem 4 (corrected)", "t-family with the relative-q conjugate partner, evaluated at -q",
                 params=_T, default_order=100, lhs=_with_t(t_family_lhs), rhs=_with_t(t_family_rhs_derived)),
        Identity("id-4.11", "(4.11)", "(q^2;q^2)_inf^2/(t^2;q^2)_inf as printed against sum q^{n(n+1)/2} combo_n(t)",
                 params=_T, default_order=100, lhs=_with_t(product_side_printed), rhs=_with_t(combo_weighted_sum)),
        Identity("id-4.11-derived", "(4.11) (corrected)", "2(q^2;q)_inf(q^2;q^2)_inf/(t^2;q^2)_inf against sum q^{n(n+1)/2} combo_n(t)",
                 params=_T, default_order=100, lhs=_with_t(product_side_derived), rhs=_with_t(combo_weighted_sum)),
        Identity("id-5.G1", "Section 5", "G1 = f_{8,12,8}(q^8,q^8,q) + q^9 f_{8,12,8}(q^18,q^18,q)", default_order=300,
                 lhs=_plain(build_g1), rhs=_plain(g1_hecke)),
        Identity("id-5.G2", "Section 5", "G2 = f_{12,16,12}(q^12,q^12,q) + q^13 f_{12,16,12}(q^26,q^26,q)", default_order=300,
                 lhs=_plain(build_g2), rhs=_plain(g2_hecke)),
        Identity("id-5.f232", "Section 5", "f_{8,12,8}(q^8,q^8,q) = f_{2,3,2}(q^8,q^8,q^4)", default_order=300,
                 lhs=_plain(lambda o: hecke_f(HeckeParams(8, 12, 8, M(1, 8), M(1, 8)), o)), rhs=_plain(f232_q4)),
        Identity("id-5.f343", "Section 5", "f_{12,16,12}(q^12,q^12,q) = f_{3,4,3}(q^12,q^12,q^4)", default_order=300,
                 lhs=_plain(lambda o: hecke_f(HeckeParams(12, 16, 12, M(1, 12), M(1, 12)), o)), rhs=_plain(f343_q4)),
        Identity("id-5.jphi", "Section 5", "f_{2,3,2}(q^8,q^8,q^4) = j(q^4,q^8) phi(q^4)",
                 lhs=_plain(f232_q4), rhs=_plain(lambda o: theta_j(4, 8, o) * at_q_power(mock_phi10, 4, o))),
        Identity("id-5.jF2", "Section 5", "f_{3,4,3}(q^12,q^12,q^4) = j(q^4,q^12) F2(q^4)",
                 lhs=_plain(f343_q4), rhs=_plain(lambda o: theta_j(4, 12, o) * at_q_power(mock_f2_seventh, 4, o))),
        _pair_entry("id-pair-seed", "alpha*_n against 1/((-q)_n (cq)_n)", bailey.pair_seed),
        _pair_entry("id-pair-lemma2.5", "(-1)^n (1-c)/((q^2;q^2)_n (1-cq^n))", bailey.pair_lemma25),
        _pair_entry("id-pair-2.15", "even combination of the c and -c pairs", bailey.pair_sum215),
        _pair_entry("id-pair-lemma2.6", "S1 image of the even combination", bailey.pair_lemma26),
        _pair_entry("id-pair-3.1", "odd combination of the c and -c pairs", bailey.pair_diff31),
        _pair_entry("id-pair-lemma2.7", "relative q^2, base q^2: 2/((-q^2;q)_{2n}(c^2;q^2)_{n+1})", bailey.pair_lemma27),
        _pair_entry("id-pair-3.5", "relative 1: odd combination through L1", bailey.pair_eq35),
        _pair_entry("id-pair-lemma3.1", "relative 1, base q^2: 2c/((-q;q)_{2n}(c^2;q^2)_{n+1})", bailey.pair_lemma31),
        _pair_entry("id-pair-4.1", "relative q^4, base q^4: closed-form alpha", bailey.pair_eq41, params=()),
    ]
    return tuple(sorted(entries, key=lambda e: natural_key(e.name)))


def natural_key(name: str) -> tuple:
    """Sort key treating digit runs numerically, so id-4.3 precedes id-4.10."""
    return tuple(int(part) if part.isdigit() else part for part in re.split(r"(\d+)", name))


_REGISTRY: Optional[tuple[Identity, ...]] = None


def registry() -> tuple[Identity, ...]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build_registry()
    return _REGISTRY


def lookup(name: str) -> Identity:
    for entry in registry():
        if entry.name == name:
            return entry
    raise UnknownIdentityError(f"unknown identity {name!r}")


# --- verification -----------------------------------------------------------------

@dataclass(frozen=True)
class Mismatch:
    exponent: Fraction
    lhs: int
    rhs: int


@dataclass(frozen=True)
class VerificationReport:
    identity: str
    bindings: dict
    order: int
    status: str  # "equal" | "mismatch" | "error"
    first_mismatch: Optional[Mismatch] = None
    elapsed: float = 0.0
    detail: str = ""

    @property
    def equal(self) -> bool:
        return self.status == "equal"

    def to_json(self) -> dict:
        fm = None
        if self.first_mismatch is not None:
            e = Fraction(self.first_mismatch.exponent)
            fm = {
                "exponent_num": e.numerator,
                "exponent_den": e.denominator,
                "lhs": str(self.first_mismatch.lhs),
                "rhs": str(self.first_mismatch.rhs),
            }
        return {
            "identity": self.identity,
            "params": {k: str(v) for k, v in sorted(self.bindings.items())},
            "order": self.order,
            "status": self.status,
            "first_mismatch": fm,
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }


def _from_comparison(cmp: Comparison) -> Optional[Mismatch]:
    if cmp.equal:
        return None
    return Mismatch(cmp.exponent, cmp.lhs, cmp.rhs)


def run_identity(entry: Identity, bindings: Bindings, order: int, n_max: int) -> tuple[Comparison, str]:
    """Compare both sides of ``entry`` through ``q^order``; returns the comparison and a detail note."""
    valid = Fraction(order + 1)
    if entry.pair is not None:
        check = bailey.verify_pair(entry.pair(bindings), n_max, valid)
        if check.equal:
            return Comparison(True, valid), f"n <= {n_max}"
        return check.comparison, f"n = {check.n}"
    if entry.indexed is not None:
        for n in range(n_max + 1):
            lhs, rhs = entry.indexed(bindings, n, valid)
            cmp = equal_to_order(lhs, rhs, valid)
            if not cmp:
                return cmp, f"n = {n}"
        return Comparison(True, valid), f"n <= {n_max}"
    return equal_to_order(entry.lhs(bindings, valid), entry.rhs(bindings, valid), valid), ""


def verify(
    name: str,
    bindings: Optional[Bindings] = None,
    order: Optional[int] = None,
    n_max: Optional[int] = None,
) -> VerificationReport:
    """Verify one registry entry through ``q^order`` (inclusive).

    Unknown names and bad bindings raise; computation failures are caught and
    reported with ``status == "error"``.
    """
    entry = lookup(name)
    bound = entry.bind(bindings)
    order = entry.default_order if order is None else int(order)
    if order < 1:
        raise BindingError("order must be at least 1")
    n_max = entry.default_n_max if n_max is None else int(n_max)
    start = time.perf_counter()
    try:
        cmp, detail = run_identity(entry, bound, order, n_max)
    except Exception as exc:  # reported, not raised: one bad entry must not hide the rest
        return VerificationReport(name, bound, order, "error", None, time.perf_counter() - start,
                                  f"{type(exc).__name__}: {exc}")
    status = "equal" if cmp.equal else "mismatch"
    return VerificationReport(name, bound, order, status, _from_comparison(cmp), time.perf_counter() - start, detail)
