"""Construction of the Dixonian pair sm, cm and derived series.

The pair is defined by the first-order system

    sm' = cm^2,   cm' = -sm^2,   sm(0) = 0,  cm(0) = 1,

solved here two independent ways: Picard iteration on the integral
equations (the reference construction) and reversion of a hypergeometric
integral (the cross-check).  A third route, the coefficient recurrence of
the system in EGF form, produces integer tables fast enough for very high
orders and is what the numeric evaluator consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from dixonian.core import (
    DEFAULT_ORDER,
    PowerSeries,
    series_integrate,
    series_mul,
    series_revert,
)

__all__ = [
    "DixonPair",
    "dixon_series",
    "dixon_egf_integers",
    "hyp2f1_series",
    "sm_via_hypergeometric",
    "laplace_egf_to_ogf",
    "weierstrass_P",
    "weierstrass_P_via_hypergeometric",
    "dumont_R",
]


def _alternate(f: PowerSeries, negate: bool) -> PowerSeries:
    """f(-z), optionally negated (used for the hyperbolic companions)."""
    sign = -1 if negate else 1
    return PowerSeries(
        [sign * (-1) ** n * c for n, c in enumerate(f.coeffs)], f.order
    )


@dataclass(frozen=True)
class DixonPair:
    """The truncated sm, cm series and their hyperbolic companions."""

    sm: PowerSeries
    cm: PowerSeries

    @property
    def order(self) -> int:
        return self.sm.order

    @property
    def smh(self) -> PowerSeries:
        """-sm(-z): the companion with all-positive coefficients."""
        return _alternate(self.sm, negate=True)

    @property
    def cmh(self) -> PowerSeries:
        """cm(-z)."""
        return _alternate(self.cm, negate=False)


@lru_cache(maxsize=8)
def dixon_series(order: int = DEFAULT_ORDER) -> DixonPair:
    """Solve the defining system by Picard iteration, exactly.

    Each round substitutes the current pair into sm = int cm^2 and
    cm = 1 - int sm^2.  A round extends the agreement with the true
    solution by at least three orders, so ceil(order/3) + 1 rounds
    suffice; the extra round doubles as a fixed-point check.
    """
    sm = PowerSeries.zero(order)
    cm = PowerSeries.one(order)
    rounds = order // 3 + 2
    for _ in range(rounds):
        # Feeding the refreshed sm straight into the cm update gains three
        # orders of agreement per round instead of 1.5.
        sm = series_integrate(series_mul(cm, cm)).truncate(order)
        cm = PowerSeries.one(order) - series_integrate(series_mul(sm, sm)).truncate(order)
    check_sm = series_integrate(series_mul(cm, cm)).truncate(order)
    check_cm = PowerSeries.one(order) - series_integrate(series_mul(sm, sm)).truncate(order)
    if check_sm != sm or check_cm != cm:
        raise AssertionError("Picard iteration failed to reach its fixed point")
    return DixonPair(sm=sm, cm=cm)


# Integer EGF tables n! [z^n] sm and n! [z^n] cm, grown on demand.  The
# system in EGF form reads a(n+1) = sum C(n,i) b(i) b(n-i) and
# b(n+1) = -sum C(n,i) a(i) a(n-i); everything stays an integer.
_EGF_SM: list[int] = [0, 1]
_EGF_CM: list[int] = [1, 0]


def dixon_egf_integers(n_max: int) -> tuple[list[int], list[int]]:
    """Integer tables (n! [z^n] sm, n! [z^n] cm) for n = 0..n_max.

    Cached across calls; only sm indices = 1 mod 3 and cm indices
    = 0 mod 3 are nonzero, which the inner sums exploit.
    """
    a, b = _EGF_SM, _EGF_CM
    while len(a) <= n_max:
        n = len(a) - 1
        # a_{n+1}: products b_i b_{n-i} need i and n-i both = 0 mod 3.
        sa = 0
        if (n + 1) % 3 == 1:
            i = 0
            while 2 * i <= n:
                if b[i] and b[n - i]:
                    t = math.comb(n, i) * b[i] * b[n - i]
                    sa += t if 2 * i == n else 2 * t
                i += 3
        sb = 0
        if (n + 1) % 3 == 0:
            i = 1
            while 2 * i <= n:
                if a[i] and a[n - i]:
                    t = math.comb(n, i) * a[i] * a[n - i]
                    sb += t if 2 * i == n else 2 * t
                i += 3
        a.append(sa)
        b.append(-sb)
    return a[: n_max + 1], b[: n_max + 1]


def hyp2f1_series(a: Fraction, b: Fraction, c: Fraction, order: int) -> PowerSeries:
    """Gauss hypergeometric series 2F1(a, b; c; x) to the given order."""
    coeffs = [Fraction(1)]
    term = Fraction(1)
    for k in range(order):
        term *= (a + k) * (b + k)
        term /= (c + k) * (k + 1)
        coeffs.append(term)
    return PowerSeries(coeffs, order)


def sm_via_hypergeometric(order: int = DEFAULT_ORDER) -> PowerSeries:
    """sm as the reversion of z * 2F1(1/3, 2/3; 4/3; z^3).

    The reverted series is the incomplete integral of (1 - t^3)^(-2/3),
    i.e. the inverse function of sm; this route never touches the ODE.
    """
    F = hyp2f1_series(Fraction(1, 3), Fraction(2, 3), Fraction(4, 3), order // 3)
    coeffs = [Fraction(0)] * (order + 1)
    for k, ck in enumerate(F.coeffs):
        if 3 * k + 1 <= order:
            coeffs[3 * k + 1] = ck
    return series_revert(PowerSeries(coeffs, order))


def laplace_egf_to_ogf(f: PowerSeries) -> PowerSeries:
    """Borel-Laplace transfer: [x^n] result = n! [z^n] f (no index shift)."""
    out = []
    fact = 1
    for n, c in enumerate(f.coeffs):
        if n > 1:
            fact *= n
        out.append(c * fact)
    return PowerSeries(out, f.order)


def weierstrass_P(order: int = DEFAULT_ORDER) -> PowerSeries:
    """The product smh * cmh, which solves P'^2 = 4 P^3 + 1."""
    pair = dixon_series(order)
    return series_mul(pair.smh, pair.cmh)


def weierstrass_P_via_hypergeometric(order: int = DEFAULT_ORDER) -> PowerSeries:
    """Same series by reverting Y * 2F1(1/3, 1/2; 4/3; -4 Y^3)."""
    F = hyp2f1_series(Fraction(1, 3), Fraction(1, 2), Fraction(4, 3), order // 3)
    coeffs = [Fraction(0)] * (order + 1)
    scale = Fraction(1)
    for k, ck in enumerate(F.coeffs):
        if 3 * k + 1 <= order:
            coeffs[3 * k + 1] = ck * scale
        scale *= -4
    return series_revert(PowerSeries(coeffs, order))


def dumont_R(order: int = DEFAULT_ORDER) -> PowerSeries:
    """The ratio 3 (1 - cm) / sm, which solves R'^2 = 4 R - R^4 / 27.

    Both numerator and denominator vanish at 0, so the common factor z is
    cancelled explicitly before dividing; the result is exact to
    order - 1 and starts z^2 + ...
    """
    pair = dixon_series(order)
    num = (PowerSeries.one(order) - pair.cm) * 3
    if num.coeffs[:3] != (0, 0, 0) or pair.sm.coeffs[0] != 0:
        raise AssertionError("unexpected valuations in the Dumont ratio")
    t = PowerSeries(num.coeffs[3:], order - 3)
    s = PowerSeries(pair.sm.coeffs[1:], order - 1).truncate(order - 3)
    q = t / s
    return PowerSeries([Fraction(0), Fraction(0), *q.coeffs], order - 1)
