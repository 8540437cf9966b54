"""Exact truncated power series and bivariate integer polynomials.

Everything downstream (series construction, continued-fraction extraction,
urn operators) computes over the two types defined here.  Coefficients are
``fractions.Fraction`` throughout; nothing in this module ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

__all__ = [
    "DEFAULT_ORDER",
    "ExactRational",
    "PowerSeries",
    "BivariatePoly",
    "InvalidUrnStateError",
    "series_mul",
    "series_compose",
    "series_revert",
    "series_binomial_pow",
    "series_integrate",
    "series_derive",
    "delta_apply",
    "format_rational",
    "parse_rational",
]

#: Truncation order used when callers do not ask for anything else.  High
#: enough for every golden table in the test suite, with headroom.
DEFAULT_ORDER = 60

ExactRational = Fraction


def format_rational(q: Fraction) -> str:
    """Serialize a rational as ``"num/den"``, or ``"num"`` when den == 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class PowerSeries:
    """A truncated formal power series with exact rational coefficients.

    ``order`` is the largest exponent whose coefficient is guaranteed
    correct; ``coeffs`` always has length ``order + 1``.  Asking for a
    coefficient beyond the order raises, it never silently returns 0.
    Instances are immutable.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[object], order: int | None = None):
        cs = [_as_fraction(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be >= 0")
            if len(cs) > order + 1:
                cs = cs[: order + 1]
            else:
                cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        elif not cs:
            cs = [Fraction(0)]
        self._coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        return cls([1], order)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        """The series z."""
        return cls([0, 1], order)

    @classmethod
    def monomial(cls, coeff: object, power: int, order: int = DEFAULT_ORDER) -> "PowerSeries":
        if power > order:
            raise ValueError("monomial power exceeds requested order")
        cs = [Fraction(0)] * (power + 1)
        cs[power] = _as_fraction(coeff)
        return cls(cs, order)

    # -- accessors -----------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    def coefficient(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError("negative exponent")
        if n > self.order:
            raise IndexError(
                f"coefficient {n} requested but the series is only exact to order {self.order}"
            )
        return self._coeffs[n]

    def egf_coefficient(self, n: int) -> Fraction:
        """n! times the n-th coefficient (the EGF reading of the series)."""
        c = self.coefficient(n)
        f = 1
        for k in range(2, n + 1):
            f *= k
        return c * f

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None for the zero series."""
        for i, c in enumerate(self._coeffs):
            if c:
                return i
        return None

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("cannot extend a series past its guaranteed order")
        return PowerSeries(self._coeffs[: order + 1], order)

    def evaluate(self, x: object) -> Fraction:
        """Exact Horner evaluation of the truncated polynomial at a rational."""
        xv = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * xv + c
        return acc

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [format_rational(c) for c in self._coeffs],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "PowerSeries":
        return cls([parse_rational(c) for c in d["coeffs"]], int(d["order"]))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: object) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order)
            return PowerSeries(
                [self._coeffs[i] + other._coeffs[i] for i in range(n + 1)], n
            )
        q = _as_fraction(other)
        cs = list(self._coeffs)
        cs[0] += q
        return PowerSeries(cs, self.order)

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries([-c for c in self._coeffs], self.order)

    def __sub__(self, other: object) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return self + (-other)
        return self + (-_as_fraction(other))

    def __rsub__(self, other: object) -> "PowerSeries":
        return (-self) + _as_fraction(other)

    def __mul__(self, other: object) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        q = _as_fraction(other)
        return PowerSeries([c * q for c in self._coeffs], self.order)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return _series_div(self, other)
        q = _as_fraction(other)
        return self * (Fraction(1) / q)

    def __pow__(self, e: int) -> "PowerSeries":
        if not isinstance(e, int) or e < 0:
            raise ValueError("integer power >= 0 only; use series_binomial_pow otherwise")
        result = PowerSeries.one(self.order)
        base = self
        k = e
        while k:
            if k & 1:
                result = series_mul(result, base)
            k >>= 1
            if k:
                base = series_mul(base, base)
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PowerSeries) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        head = ", ".join(format_rational(c) for c in self._coeffs[:6])
        tail = ", ..." if self.order > 5 else ""
        return f"PowerSeries([{head}{tail}], order={self.order})"


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at min(order(a), order(b))."""
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = [Fraction(0)] * (n + 1)
    for i in range(n + 1):
        ai = ac[i]
        if not ai:
            continue
        for j in range(n + 1 - i):
            bj = bc[j]
            if bj:
                out[i + j] += ai * bj
    return PowerSeries(out, n)


def series_compose(outer: PowerSeries, inner: PowerSeries) -> PowerSeries:
    """outer(inner(z)), requiring inner(0) = 0, truncated at the min order."""
    if inner.coeffs[0] != 0:
        raise ValueError("series_compose requires inner constant term 0")
    n = min(outer.order, inner.order)
    inner_t = inner.truncate(n) if inner.order != n else inner
    acc = PowerSeries.monomial(outer.coeffs[n], 0, n)
    for k in range(n - 1, -1, -1):
        acc = series_mul(acc, inner_t) + outer.coeffs[k]
    return acc


def _series_div(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """a/b for b with unit (nonzero) constant term.  No Laurent fallback."""
    if b.coeffs[0] == 0:
        raise ZeroDivisionError("series division requires a nonzero constant term")
    n = min(a.order, b.order)
    b0inv = Fraction(1) / b.coeffs[0]
    out: list[Fraction] = []
    for k in range(n + 1):
        acc = a.coeffs[k]
        for j in range(1, k + 1):
            bj = b.coeffs[j]
            if bj:
                acc -= bj * out[k - j]
        out.append(acc * b0inv)
    return PowerSeries(out, n)


def series_revert(f: PowerSeries) -> PowerSeries:
    """Compositional inverse g with f(g(z)) = z, by Newton iteration.

    Requires f(0) = 0 and f'(0) != 0.  The result keeps f's order: the first
    ``order`` coefficients of the inverse are exact.
    """
    if f.coeffs[0] != 0:
        raise ValueError("series_revert requires f(0) = 0")
    if f.order < 1 or f.coeffs[1] == 0:
        raise ValueError("series_revert requires f'(0) != 0")
    n = f.order
    fp = series_derive(f)
    # Start exact to order 1 and double the reliable order each round.
    g = PowerSeries([0, Fraction(1) / f.coeffs[1]], 1)
    known = 1
    while known < n:
        known = min(2 * known, n)
        gk = PowerSeries(g.coeffs, known)
        err = series_compose(f.truncate(known), gk) - PowerSeries.identity(known)
        fpg = series_compose(fp.truncate(min(known, fp.order)), gk)
        # err always has valuation >= 2, so the quotient never consults the
        # denominator's top coefficient; padding fpg to full order is safe
        # even when fp stops one order short of f.
        fpg = PowerSeries(fpg.coeffs, known)
        g = gk - _series_div(err, fpg)
    return PowerSeries(g.coeffs, n)


def series_binomial_pow(f: PowerSeries, e: object) -> PowerSeries:
    """f**e for rational e and f(0) = 1, via the first-order ODE f h' = e f' h.

    The coefficient recurrence n h_n = sum_{j=1..n} ((e+1) j - n) f_j h_{n-j}
    follows by comparing [z^{n-1}] on both sides; it is exact and O(n^2).
    """
    if f.coeffs[0] != 1:
        raise ValueError("series_binomial_pow requires f(0) = 1")
    ev = _as_fraction(e)
    n = f.order
    fc = f.coeffs
    out = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(1, m + 1):
            fj = fc[j]
            if fj:
                acc += ((ev + 1) * j - m) * fj * out[m - j]
        out.append(acc / m)
    return PowerSeries(out, n)


def series_integrate(f: PowerSeries) -> PowerSeries:
    """Termwise antiderivative with constant 0; order grows by one."""
    out = [Fraction(0)]
    out.extend(c / (i + 1) for i, c in enumerate(f.coeffs))
    return PowerSeries(out, f.order + 1)


def series_derive(f: PowerSeries) -> PowerSeries:
    """Termwise derivative; order drops by one (never below zero)."""
    if f.order == 0:
        return PowerSeries.zero(0)
    out = [i * c for i, c in enumerate(f.coeffs)][1:]
    return PowerSeries(out, f.order - 1)


class InvalidUrnStateError(ValueError):
    """A delta step produced a negative exponent on a nonzero term."""


class BivariatePoly:
    """Sparse exact-integer polynomial in two variables x, y.

    Zero coefficients are never stored.  Immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        t: dict[tuple[int, int], int] = {}
        if terms:
            for (p, q), c in terms.items():
                if c:
                    if p < 0 or q < 0:
                        raise ValueError("exponents must be nonnegative")
                    t[(int(p), int(q))] = int(c)
        self._terms = t

    @classmethod
    def monomial(cls, coeff: int, p: int, q: int) -> "BivariatePoly":
        return cls({(p, q): coeff})

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def coefficient(self, p: int, q: int) -> int:
        return self._terms.get((p, q), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degrees(self) -> set[int]:
        return {p + q for (p, q) in self._terms}

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        t = dict(self._terms)
        for k, c in other._terms.items():
            nc = t.get(k, 0) + c
            if nc:
                t[k] = nc
            else:
                t.pop(k, None)
        out = BivariatePoly()
        out._terms = t
        return out

    def scale(self, c: int) -> "BivariatePoly":
        if c == 0:
            return BivariatePoly()
        out = BivariatePoly()
        out._terms = {k: c * v for k, v in self._terms.items()}
        return out

    def evaluate(self, x: object, y: object) -> Fraction:
        xv, yv = _as_fraction(x), _as_fraction(y)
        acc = Fraction(0)
        for (p, q), c in self._terms.items():
            acc += c * xv**p * yv**q
        return acc

    def collect_x(self) -> dict[int, int]:
        """Coefficient of x^k summed over all y powers, keyed by k."""
        out: dict[int, int] = {}
        for (p, _q), c in self._terms.items():
            out[p] = out.get(p, 0) + c
        return out

    def to_dict(self) -> dict:
        return {f"{p},{q}": str(c) for (p, q), c in sorted(self._terms.items())}

    @classmethod
    def from_dict(cls, d: Mapping[str, str]) -> "BivariatePoly":
        terms: dict[tuple[int, int], int] = {}
        for key, c in d.items():
            p, q = key.split(",")
            terms[(int(p), int(q))] = int(c)
        return cls(terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BivariatePoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "BivariatePoly(0)"
        parts = [
            f"{c}*x^{p}*y^{q}" for (p, q), c in sorted(self._terms.items())
        ]
        return "BivariatePoly(" + " + ".join(parts) + ")"


def delta_apply(p: BivariatePoly, rule) -> BivariatePoly:
    """One delta step:  x^{1-a} y^{s+a} d/dx + x^{s+b} y^{1-b} d/dy, monomial-wise.

    ``rule`` carries the balanced-urn shifts as integer attributes a, b, s
    (the M12 urn is a = b = s = 1, i.e. delta[x] = y^2, delta[y] = x^2).  A
    negative exponent on a term with nonzero coefficient means the urn left
    its reachable state space, which is a hard error by contract.
    """
    a, b, s = rule.a, rule.b, rule.s
    out: dict[tuple[int, int], int] = {}
    for (pe, qe), c in p.terms.items():
        if pe:
            np_, nq = pe - a, qe + s + a
            if np_ < 0 or nq < 0:
                raise InvalidUrnStateError(
                    f"delta on x^{pe} y^{qe} gives exponent pair ({np_}, {nq})"
                )
            k = (np_, nq)
            nc = out.get(k, 0) + c * pe
            if nc:
                out[k] = nc
            else:
                del out[k]
        if qe:
            np_, nq = pe + s + b, qe - b
            if np_ < 0 or nq < 0:
                raise InvalidUrnStateError(
                    f"delta on x^{pe} y^{qe} gives exponent pair ({np_}, {nq})"
                )
            k = (np_, nq)
            nc = out.get(k, 0) + c * qe
            if nc:
                out[k] = nc
            else:
                del out[k]
    return BivariatePoly(out)
