"""Exact truncated multivariate Laurent series over the rationals.

A :class:`TruncSeries` stores a sparse map from exponent tuples to
``Fraction`` coefficients.  Every variable carries a floor (lowest exponent
allowed, ``None`` for unbounded) and an order (highest exponent kept,
``None`` for an exact, untruncated variable such as the genus counter).

Truncation bookkeeping follows one rule: a result is only claimed valid up
to the order that both operands can certify.  For products of Laurent series
this is ``min(order_a + val_b, order_b + val_a)`` per variable, which reduces
to the plain meet of the two orders whenever valuations are non-negative.

A power of sqrt(2*pi) can ride along on a series (``two_pi_pow``) so that
Stirling constants never have to be evaluated numerically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Sequence


class SeriesError(ValueError):
    """Raised when a series operation violates its preconditions."""


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _min_floor(a, b):
    if a is None or b is None:
        return None
    return min(a, b)


@dataclass(frozen=True)
class Var:
    name: str
    floor: int | None = 0
    order: int | None = None

    def admits(self, e: int) -> bool:
        return self.floor is None or e >= self.floor

    def keeps(self, e: int) -> bool:
        return self.order is None or e <= self.order


def _as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class TruncSeries:
    __slots__ = ("vars", "terms", "two_pi_pow", "_index")

    def __init__(self, variables: Sequence[Var], terms: Mapping[tuple, object] | None = None,
                 two_pi_pow: int = 0):
        variables = tuple(variables)
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise SeriesError(f"duplicate variable names {names}")
        self.vars = variables
        self.two_pi_pow = two_pi_pow
        self._index = {v.name: i for i, v in enumerate(variables)}
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != len(variables):
                raise SeriesError("exponent vector length does not match variables")
            c = _as_fraction(c)
            if c == 0:
                continue
            skip = False
            for v, e in zip(variables, exp):
                if not v.admits(e):
                    raise SeriesError(f"exponent {e} of {v.name} below floor {v.floor}")
                if not v.keeps(e):
                    skip = True
            if not skip:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if clean[exp] == 0:
                    del clean[exp]
        self.terms = clean

    # ------------------------------------------------------------------ basics
    @classmethod
    def constant(cls, c, variables: Sequence[Var] = (), two_pi_pow: int = 0) -> "TruncSeries":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c}, two_pi_pow)

    @classmethod
    def monomial(cls, variables: Sequence[Var], exps: Mapping[str, int], c=1) -> "TruncSeries":
        variables = tuple(variables)
        exp = tuple(exps.get(v.name, 0) for v in variables)
        return cls(variables, {exp: c})

    @classmethod
    def univariate(cls, var: Var, coeffs: Mapping[int, object] | Callable[[int], object],
                   start: int | None = None) -> "TruncSeries":
        """Build a one-variable series from a dict or a coefficient function."""
        if callable(coeffs):
            lo = var.floor if start is None else start
            if lo is None or var.order is None:
                raise SeriesError("a coefficient function needs a bounded range")
            coeffs = {k: coeffs(k) for k in range(lo, var.order + 1)}
        return cls((var,), {(k,): c for k, c in coeffs.items()})

    def var(self, name: str) -> Var:
        return self.vars[self._index[name]]

    def names(self) -> tuple:
        return tuple(v.name for v in self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exps: Mapping[str, int] | None = None, **kw) -> Fraction:
        exps = dict(exps or {}, **kw)
        for name in exps:
            if name not in self._index and exps[name] != 0:
                return Fraction(0)
        exp = tuple(exps.get(v.name, 0) for v in self.vars)
        return self.terms.get(exp, Fraction(0))

    def valuation(self, name: str) -> int | None:
        i = self._index[name]
        if not self.terms:
            return None
        return min(e[i] for e in self.terms)

    def degree(self, name: str) -> int | None:
        i = self._index[name]
        if not self.terms:
            return None
        return max(e[i] for e in self.terms)

    def __repr__(self):
        return f"TruncSeries({self.to_string()})"

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms):
            c = self.terms[exp]
            mono = "*".join(
                f"{v.name}^{e}" if e != 1 else v.name for v, e in zip(self.vars, exp) if e != 0
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # ------------------------------------------------------------ variable sets
    def with_vars(self, variables: Sequence[Var]) -> "TruncSeries":
        """Re-express over a superset of variables (orders/floors may tighten)."""
        variables = tuple(variables)
        idx = {v.name: i for i, v in enumerate(variables)}
        for v in self.vars:
            if v.name not in idx:
                raise SeriesError(f"variable {v.name} missing from target set")
        perm = [self._index.get(v.name) for v in variables]
        terms = {}
        for exp, c in self.terms.items():
            terms[tuple(exp[p] if p is not None else 0 for p in perm)] = c
        return TruncSeries(variables, terms, self.two_pi_pow)

    def retruncate(self, **orders) -> "TruncSeries":
        """Lower the kept order of some variables (never raises an order)."""
        new = []
        for v in self.vars:
            if v.name in orders:
                new.append(Var(v.name, v.floor, _min_order(v.order, orders[v.name])))
            else:
                new.append(v)
        return TruncSeries(new, self.terms, self.two_pi_pow)

    def _unify(self, other: "TruncSeries"):
        names = list(self.names())
        for n in other.names():
            if n not in names:
                names.append(n)
        variables = []
        for n in names:
            a = self.vars[self._index[n]] if n in self._index else None
            b = other.vars[other._index[n]] if n in other._index else None
            if a is None:
                variables.append(b)
            elif b is None:
                variables.append(a)
            else:
                variables.append(Var(n, _min_floor(a.floor, b.floor), _min_order(a.order, b.order)))
        return tuple(variables)

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        return TruncSeries.constant(other, (), 0)

    # --------------------------------------------------------------- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if self.terms and other.terms and self.two_pi_pow != other.two_pi_pow:
            raise SeriesError("cannot add series with different sqrt(2pi) powers")
        tp = self.two_pi_pow if self.terms else other.two_pi_pow
        variables = self._unify(other)
        a = self.with_vars(variables)
        b = other.with_vars(variables)
        terms = dict(a.terms)
        for exp, c in b.terms.items():
            s = terms.get(exp, Fraction(0)) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return TruncSeries(variables, terms, tp)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.vars, {e: -c for e, c in self.terms.items()}, self.two_pi_pow)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def scale(self, c) -> "TruncSeries":
        c = _as_fraction(c)
        return TruncSeries(self.vars, {e: c * v for e, v in self.terms.items()}, self.two_pi_pow)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        return series_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            return series_invert(self) ** (-n)
        result = TruncSeries.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.constant(other)
        d = self - other
        return d.is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def agrees_with(self, other: "TruncSeries") -> bool:
        """Equality after cutting both sides to their common truncation."""
        variables = self._unify(other)
        return (self.with_vars(variables) - other.with_vars(variables)).is_zero()

    def map_terms(self, fn: Callable[[tuple, Fraction], Iterable[tuple]],
                  variables: Sequence[Var] | None = None) -> "TruncSeries":
        """Send each term to a list of (exponent, coeff) pairs and re-sum."""
        variables = self.vars if variables is None else tuple(variables)
        acc: dict = {}
        for exp, c in self.terms.items():
            for e2, c2 in fn(exp, c):
                if any(not v.keeps(x) for v, x in zip(variables, e2)):
                    continue
                acc[e2] = acc.get(e2, Fraction(0)) + c2
        return TruncSeries(variables, acc, self.two_pi_pow)

    def substitute_power(self, name: str, factor: Mapping[str, int]) -> "TruncSeries":
        """Replace v^k by v^k * prod(w^(k*m_w)), e.g. z -> hbar*z."""
        i = self._index[name]
        for w in factor:
            if w not in self._index:
                raise SeriesError(f"unknown variable {w}")
        shifts = [(self._index[w], m) for w, m in factor.items()]

        def fn(exp, c):
            k = exp[i]
            e = list(exp)
            for j, m in shifts:
                e[j] += k * m
            return [(tuple(e), c)]

        return self.map_terms(fn)

    def coefficient_in(self, name: str, k: int) -> "TruncSeries":
        """Coefficient of name^k as a series in the remaining variables."""
        i = self._index[name]
        rest = tuple(v for v in self.vars if v.name != name)
        terms = {}
        for exp, c in self.terms.items():
            if exp[i] == k:
                terms[exp[:i] + exp[i + 1:]] = c
        return TruncSeries(rest, terms, self.two_pi_pow)

    def drop_var(self, name: str) -> "TruncSeries":
        """Forget a variable that only appears with exponent zero."""
        if self.terms and (self.valuation(name) != 0 or self.degree(name) != 0):
            raise SeriesError(f"variable {name} still appears")
        return self.coefficient_in(name, 0)

    # ------------------------------------------------------------ serialization
    def to_json_obj(self) -> dict:
        return {
            "vars": [{"name": v.name, "floor": v.floor, "order": v.order} for v in self.vars],
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in sorted(self.terms.items())
            ],
            "two_pi_pow": self.two_pi_pow,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "TruncSeries":
        variables = [Var(v["name"], v["floor"], v["order"]) for v in obj["vars"]]
        terms = {tuple(t["exp"]): Fraction(int(t["num"]), int(t["den"])) for t in obj["terms"]}
        return cls(variables, terms, obj.get("two_pi_pow", 0))

    @classmethod
    def from_json(cls, text: str) -> "TruncSeries":
        return cls.from_json_obj(json.loads(text))


# ---------------------------------------------------------------- products
def _result_orders(a: TruncSeries, b: TruncSeries, variables):
    out = []
    for v in variables:
        oa = a.var(v.name).order if v.name in a._index else None
        ob = b.var(v.name).order if v.name in b._index else None
        va = a.valuation(v.name) if v.name in a._index else 0
        vb = b.valuation(v.name) if v.name in b._index else 0
        va = 0 if va is None else va
        vb = 0 if vb is None else vb
        cands = []
        if oa is not None:
            cands.append(oa + vb)
        if ob is not None:
            cands.append(ob + va)
        order = min(cands) if cands else None
        out.append(Var(v.name, v.floor, order))
    return tuple(out)


def _reindex(a: TruncSeries, variables) -> dict:
    perm = [a._index.get(v.name) for v in variables]
    return {tuple(e[p] if p is not None else 0 for p in perm): c for e, c in a.terms.items()}


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Exact product truncated to the order both factors certify."""
    variables = _result_orders(a, b, a._unify(b))
    if not a.terms or not b.terms:
        return TruncSeries(variables, {}, a.two_pi_pow + b.two_pi_pow)
    a2 = _reindex(a, variables)
    b2 = _reindex(b, variables)
    orders = [v.order for v in variables]
    floors = [v.floor for v in variables]
    n = len(variables)
    acc: dict = {}
    bitems = list(b2.items())
    for ea, ca in a2.items():
        for eb, cb in bitems:
            e = tuple(ea[i] + eb[i] for i in range(n))
            ok = True
            for i in range(n):
                o = orders[i]
                if o is not None and e[i] > o:
                    ok = False
                    break
            if not ok:
                continue
            acc[e] = acc.get(e, 0) + ca * cb
    for e in acc:
        for i in range(n):
            f = floors[i]
            if f is not None and e[i] < f:
                raise SeriesError(
                    f"product needs exponent {e[i]} of {variables[i].name} below floor {f}")
    return TruncSeries(variables, acc, a.two_pi_pow + b.two_pi_pow)


def _split_leading(a: TruncSeries):
    """Write a = c*m*(1+h) with h topologically nilpotent; return (c, m, h)."""
    if not a.terms:
        raise SeriesError("cannot invert the zero series")
    trunc = [i for i, v in enumerate(a.vars) if v.order is not None]
    exact = [i for i, v in enumerate(a.vars) if v.order is None]
    lead = min(a.terms, key=lambda e: (tuple(e[i] for i in trunc), tuple(e[i] for i in exact)))
    c = a.terms[lead]
    for e in a.terms:
        if e == lead:
            continue
        diffs = [e[i] - lead[i] for i in trunc]
        if any(d < 0 for d in diffs) or not any(d > 0 for d in diffs):
            raise SeriesError("leading term is not an invertible unit monomial")
    return c, lead


def series_invert(a: TruncSeries, orders: Mapping[str, int] | None = None) -> TruncSeries:
    """Multiplicative inverse of a series whose leading part is c*monomial."""
    c, lead = _split_leading(a)
    n = len(a.vars)
    new_vars = []
    for v, m in zip(a.vars, lead):
        order = None if v.order is None else v.order - 2 * m
        if orders and v.name in orders:
            order = _min_order(order, orders[v.name])
        floor = None if v.floor is None else min(v.floor, -m)
        new_vars.append(Var(v.name, floor, order))
    new_vars = tuple(new_vars)
    # h = a/(c*m) - 1, expressed with relaxed bookkeeping
    work_vars = tuple(Var(v.name, None, (None if v.order is None else v.order - m))
                      for v, m in zip(a.vars, lead))
    hterms = {}
    for e, coef in a.terms.items():
        if e == lead:
            continue
        hterms[tuple(e[i] - lead[i] for i in range(n))] = coef / c
    h = TruncSeries(work_vars, hterms)
    neg_h = -h
    total = TruncSeries.constant(1, work_vars)
    power = TruncSeries.constant(1, work_vars)
    while True:
        power = series_mul(power, neg_h).with_vars(work_vars)
        if power.is_zero():
            break
        total = total + power
    inv_c = 1 / c
    terms = {}
    for e, coef in total.terms.items():
        terms[tuple(e[i] - lead[i] for i in range(n))] = coef * inv_c
    return TruncSeries(new_vars, terms, -a.two_pi_pow)


def _nilpotent_check(a: TruncSeries):
    trunc = [i for i, v in enumerate(a.vars) if v.order is not None]
    for e in a.terms:
        ds = [e[i] for i in trunc]
        if any(d < 0 for d in ds) or not any(d > 0 for d in ds):
            raise SeriesError("argument is not topologically nilpotent")


def series_exp(a: TruncSeries) -> TruncSeries:
    """exp(a) for a series with zero constant term."""
    if a.coeff() != 0:
        raise SeriesError("exp needs a zero constant term")
    if a.two_pi_pow and a.terms:
        raise SeriesError("exp of a series carrying sqrt(2pi) is not defined")
    _nilpotent_check(a)
    total = TruncSeries.constant(1, a.vars)
    power = TruncSeries.constant(1, a.vars)
    k = 0
    while True:
        k += 1
        power = (power * a).with_vars(a.vars).scale(Fraction(1, k))
        if power.is_zero():
            break
        total = total + power
    return total


def series_log(a: TruncSeries) -> TruncSeries:
    """log(a) for a series with constant term 1."""
    if a.coeff() != 1:
        raise SeriesError("log needs constant term 1")
    u = a - TruncSeries.constant(1, a.vars)
    _nilpotent_check(u)
    total = TruncSeries(a.vars, {})
    power = TruncSeries.constant(1, a.vars)
    k = 0
    while True:
        k += 1
        power = (power * u).with_vars(a.vars)
        if power.is_zero():
            break
        total = total + power.scale(Fraction((-1) ** (k + 1), k))
    return total


def shift_x(a: TruncSeries, s, xvar: str = "xi", hvar: str = "h") -> TruncSeries:
    """Substitute x -> x + s*hbar in a series written in xi = 1/x.

    xi^k becomes xi^k (1 + s*hbar*xi)^(-k), expanded with generalized
    binomials; for k <= 0 the expansion terminates.
    """
    s = _as_fraction(s)
    if hvar not in a.names():
        a = a.with_vars(a.vars + (Var(hvar, None, None),))
    xi = a._index[xvar]
    hi = a._index[hvar]
    xorder = a.vars[xi].order
    if xorder is None:
        raise SeriesError("shift_x needs a truncated x-variable")

    def fn(exp, c):
        k = exp[xi]
        out = []
        j = 0
        while k + j <= xorder:
            b = _gen_binom(-k, j)
            if b == 0 and -k >= 0 and j > -k:
                break
            if b:
                e = list(exp)
                e[xi] = k + j
                e[hi] += j
                out.append((tuple(e), c * b * s ** j))
            j += 1
            if s == 0:
                break
        return out

    return a.map_terms(fn)


def _gen_binom(n: int, j: int) -> Fraction:
    num = Fraction(1)
    for i in range(j):
        num *= n - i
    return num / factorial(j)


def compose_linear(coeffs: Mapping[int, Fraction], form: Mapping[str, int],
                   variables: Sequence[Var]) -> TruncSeries:
    """Evaluate f(u) at u = sum(c_v * v) for a univariate Taylor series f."""
    variables = tuple(variables)
    if any(k < 0 for k in coeffs):
        raise SeriesError("compose_linear takes Taylor series only")
    u = TruncSeries(variables, {
        tuple(1 if v.name == name else 0 for v in variables): c
        for name, c in form.items() if c != 0
    })
    total = TruncSeries(variables, {})
    power = TruncSeries.constant(1, variables)
    kmax = max(coeffs) if coeffs else -1
    for k in range(kmax + 1):
        if k > 0:
            power = series_mul(power, u).with_vars(variables)
            if power.is_zero():
                break
        c = coeffs.get(k, 0)
        if c:
            total = total + power.scale(c)
    return total


# ------------------------------------------------------- classical series
@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2 (generating function z/(e^z-1))."""
    if n < 0:
        raise SeriesError("bernoulli needs n >= 0")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    return -sum(comb(n + 1, k) * bernoulli(k) for k in range(n)) / (n + 1)


def bernoulli_poly(n: int, a) -> Fraction:
    a = _as_fraction(a)
    return sum(comb(n, k) * bernoulli(k) * a ** (n - k) for k in range(n + 1))


def zeta_coeffs(N: int, scale=1) -> dict:
    """Taylor coefficients of zeta(scale*z) = 2 sinh(scale*z/2) through z^N."""
    scale = _as_fraction(scale)
    out = {}
    for k in range(1, N + 1, 2):
        out[k] = scale ** k / (factorial(k) * 2 ** (k - 1))
    return out


def inv_zeta_coeffs(N: int) -> dict:
    """Laurent coefficients of 1/zeta(z) from z^-1 through z^N.

    Uses t/zeta(t) = t e^{t/2}/(e^t - 1) = sum_n B_n(1/2) t^n/n!.
    """
    return {n - 1: bernoulli_poly(n, Fraction(1, 2)) / factorial(n)
            for n in range(0, N + 2) if bernoulli_poly(n, Fraction(1, 2)) != 0}


def zeta_series(N: int, name: str = "z") -> TruncSeries:
    return TruncSeries.univariate(Var(name, 0, N), zeta_coeffs(N))


def s_series(N: int, name: str = "z") -> TruncSeries:
    """S(z) = zeta(z)/z through z^N."""
    return TruncSeries.univariate(Var(name, 0, N),
                                  {k - 1: c for k, c in zeta_coeffs(N + 1).items()})


def inv_zeta_series(N: int, name: str = "z") -> TruncSeries:
    return TruncSeries.univariate(Var(name, -1, N), inv_zeta_coeffs(N))


@dataclass(frozen=True)
class LogGammaExpansion:
    """ln Gamma(X + a) ~ xlogx*X ln X + x*X + logx*ln X + half_log2pi*(1/2)ln(2pi) + laurent.

    ``laurent`` is a series in the variable ``Xi`` = 1/X.
    """

    shift: Fraction
    xlogx: Fraction
    x: Fraction
    logx: Fraction
    half_log2pi: Fraction
    laurent: TruncSeries


def log_gamma_asymp(a, N: int, name: str = "Xi") -> LogGammaExpansion:
    """Stirling expansion of ln Gamma(X + a) through X^-N.

    The correction terms are (-1)^n B_n(a) / (n(n-1)) X^(1-n) for n >= 2.
    """
    a = _as_fraction(a)
    if N < 0:
        raise SeriesError("order must be non-negative")
    coeffs = {}
    for n in range(2, N + 2):
        c = (-1) ** n * bernoulli_poly(n, a) / (n * (n - 1))
        if c:
            coeffs[n - 1] = c
    laurent = TruncSeries.univariate(Var(name, 0, N), coeffs)
    return LogGammaExpansion(a, Fraction(1), Fraction(-1), a - Fraction(1, 2), Fraction(1), laurent)


@dataclass(frozen=True)
class SpecialSeries:
    """laurent + xlogx_coeff * (x ln x) + logx_coeff * ln x."""

    laurent: TruncSeries
    xlogx_coeff: TruncSeries
    logx_coeff: TruncSeries

    def _transcendental(self) -> bool:
        return not (self.xlogx_coeff.is_zero() and self.logx_coeff.is_zero())

    def __add__(self, other: "SpecialSeries") -> "SpecialSeries":
        return SpecialSeries(self.laurent + other.laurent, self.xlogx_coeff + other.xlogx_coeff,
                             self.logx_coeff + other.logx_coeff)

    def __sub__(self, other: "SpecialSeries") -> "SpecialSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "SpecialSeries":
        if isinstance(c, TruncSeries):
            return SpecialSeries(self.laurent * c, self.xlogx_coeff * c, self.logx_coeff * c)
        return SpecialSeries(self.laurent.scale(c), self.xlogx_coeff.scale(c),
                             self.logx_coeff.scale(c))

    def __mul__(self, other: "SpecialSeries") -> "SpecialSeries":
        if self._transcendental() and other._transcendental():
            raise SeriesError("product of two series with logarithmic parts is not representable")
        if other._transcendental():
            return other.scale(self.laurent)
        return self.scale(other.laurent)

    def agrees_with(self, other: "SpecialSeries") -> bool:
        return (self.laurent.agrees_with(other.laurent)
                and self.xlogx_coeff.agrees_with(other.xlogx_coeff)
                and self.logx_coeff.agrees_with(other.logx_coeff))
