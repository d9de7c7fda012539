"""Wave function of the r-orbifold projective line and its quantum curve.

The wave function is kept in Gamma-monomial normal form: each term is

    coeff * (2 pi)^{two_pi_pow} * q^{rd} * hbar^{-X + hbar_pow} / Gamma(X + gamma_shift + 1/2)

with X = x/hbar.  Difference operators in x act on this form by exact
shifts of X, so the quantum-curve identity is checked as an identity of
polynomials in X and hbar with no truncation.

Series in 1/x use the variables ``xi`` (= 1/x) and ``h`` (= hbar).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial

from .partitions import content_product_eigen, enumerate_partitions, mn_character, x_vars
from .series import (
    SeriesError,
    SpecialSeries,
    TruncSeries,
    Var,
    bernoulli,
    log_gamma_asymp,
    shift_x,
)

HALF = Fraction(1, 2)


# ------------------------------------------------------------ X_d two ways
def xd_char_sum(r: int, d: int, N: int) -> TruncSeries:
    """X_d = sum_{|lam|=rd} chi chi * prod (x+(i-lam_i)h)/(x+ih) / (d!(rd)! r^d)."""
    if r < 1 or d < 0:
        raise ValueError("need r >= 1 and d >= 0")
    n = r * d
    total = TruncSeries(x_vars(N), {})
    for lam in enumerate_partitions(n):
        w = mn_character(lam, (1,) * n) * mn_character(lam, (r,) * d)
        if w:
            total = total + content_product_eigen(lam, N).scale(w)
    return total.scale(Fraction(1, factorial(d) * factorial(n) * r ** d))


def shifted_product(count: int, offset, N: int) -> TruncSeries:
    """prod_{i=1}^{count} h/(x + (i + offset) h), expanded in xi = 1/x."""
    offset = Fraction(offset)
    vs = x_vars(N)
    out = TruncSeries.constant(1, vs)
    for i in range(1, count + 1):
        a = i + offset
        # h/(x + a h) = h xi * sum_j (-a h xi)^j
        fac = TruncSeries(vs, {(j + 1, j + 1): (-a) ** j for j in range(N)})
        out = out * fac
    return out.retruncate(xi=N)


def xd_closed(r: int, d: int, N: int) -> TruncSeries:
    """(-1)^d/(r^d d!) * prod_{i=1}^{rd} h/(x + i h)."""
    if r < 1 or d < 0:
        raise ValueError("need r >= 1 and d >= 0")
    c = Fraction((-1) ** d, r ** d * factorial(d))
    return shifted_product(r * d, 0, N).scale(c)


def xd_generating(r: int, D: int, N: int, closed: bool) -> TruncSeries:
    """sum_{d<=D} qd^d X_d / h^{(r+1)d} in variables (qd, xi, h)."""
    vs = (Var("qd", 0, D),) + x_vars(N)
    total = TruncSeries(vs, {})
    for d in range(D + 1):
        xd = xd_closed(r, d, N) if closed else xd_char_sum(r, d, N)
        terms = {(d, e[0], e[1] - (r + 1) * d): c for e, c in xd.terms.items()}
        total = total + TruncSeries(vs, terms)
    return total


def r1_normalizer(D: int, N: int) -> TruncSeries:
    """exp(qd/h^2) through qd^D."""
    vs = (Var("qd", 0, D),) + x_vars(N)
    return TruncSeries(vs, {(d, 0, -2 * d): Fraction(1, factorial(d)) for d in range(D + 1)})


def xd_identity_holds(r: int, D: int, N: int) -> bool:
    """Character-sum X_d against the closed form; for r = 1 the closed side
    is multiplied by exp(q/h^2) before comparing generating series."""
    if r == 1:
        lhs = xd_generating(1, D, N, closed=False)
        rhs = r1_normalizer(D, N) * xd_generating(1, D, N, closed=True)
        return (lhs - rhs).is_zero()
    return all((xd_char_sum(r, d, N) - xd_closed(r, d, N)).is_zero() for d in range(D + 1))


# ------------------------------------------------------------ L(x)
def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def l_coefficients(r: int, d: int) -> list:
    """Coefficients of L(x) = sum chi chi/(rd)! prod_{i=1}^{rd} (x + (i - lam_i - 1/2) h).

    L is homogeneous of degree rd in (x, h); entry k of the result is c_k with
    [x^k] L = c_k * h^{rd-k}.
    """
    n = r * d
    total = [Fraction(0)] * (n + 1)
    for lam in enumerate_partitions(n):
        w = mn_character(lam, (1,) * n) * mn_character(lam, (r,) * d)
        if not w:
            continue
        poly = [Fraction(1)]
        for i in range(1, n + 1):
            li = lam[i - 1] if i <= len(lam) else 0
            poly = _poly_mul(poly, [Fraction(2 * (i - li) - 1, 2), Fraction(1)])
        total = [t + w * p for t, p in zip(total, poly)]
    return [t / factorial(n) for t in total]


# ------------------------------------------------------------ S_inf
def _special_vars(N: int) -> tuple:
    return x_vars(N)


def s_inf_series(N: int) -> SpecialSeries:
    """(x - x ln x)/h + sum_{k>=2} (h/x)^{k-1}/(k 2^k)
    - sum_{k>=1} B_{2k}/(2k(2k-1)) h^{2k-1} (x - h/2)^{1-2k}."""
    vs = _special_vars(N)
    laurent = TruncSeries(vs, {(-1, -1): 1})
    geo = {(k - 1, k - 1): Fraction(1, k * 2 ** k) for k in range(2, N + 2)}
    laurent = laurent + TruncSeries(vs, geo)
    k = 1
    while 2 * k - 1 <= N:
        c = bernoulli(2 * k) / (2 * k * (2 * k - 1))
        mono = TruncSeries(vs, {(2 * k - 1, 2 * k - 1): 1})
        laurent = laurent - shift_x(mono, -HALF).scale(c)
        k += 1
    xlogx = TruncSeries(vs, {(0, -1): -1})
    return SpecialSeries(laurent, xlogx, TruncSeries(vs, {}))


def s_inf_stirling(N: int) -> SpecialSeries:
    """-ln Gamma(X + 1/2) - X ln h + (1/2) ln(2 pi) with X = x/h."""
    vs = _special_vars(N)
    lg = log_gamma_asymp(HALF, N)
    # X ln X = (x/h) ln x - (x/h) ln h, so -ln Gamma contributes +xlogx * X ln h,
    # against the explicit -X ln h; the (1/2) ln(2 pi) terms must cancel too
    log_h = lg.xlogx - 1
    two_pi = 1 - lg.half_log2pi
    if log_h != 0 or two_pi != 0 or lg.logx != 0:
        raise SeriesError("Stirling form leaves a stray logarithm")
    laurent = TruncSeries(vs, {(-1, -1): -lg.x})
    for e, c in lg.laurent.terms.items():
        n = e[0]
        laurent = laurent + TruncSeries(vs, {(n, n): -c})
    xlogx = TruncSeries(vs, {(0, -1): -lg.xlogx})
    return SpecialSeries(laurent, xlogx, TruncSeries(vs, {}))


def rho_from_s_inf(N: int) -> TruncSeries:
    """exp of the 1/x part of S_inf (the positive powers of h/x)."""
    from .series import series_exp

    s = s_inf_stirling(N).laurent
    neg = TruncSeries(s.vars, {e: c for e, c in s.terms.items() if e[0] >= 1})
    return series_exp(neg)


# ------------------------------------------------------------ principal specialization
@dataclass(frozen=True)
class SpecializationImage:
    """parts[kinds] is the coefficient series of prod_i T_{kinds[i]}(x_i), where
    T_'1' = 1, T_'logx' = ln x_i and T_'xlogx' = x_i ln x_i."""

    names: tuple
    parts: dict

    def to_special(self) -> SpecialSeries:
        if len(self.names) != 1:
            raise SeriesError("only one-variable images reduce to a SpecialSeries")
        vs = next(iter(self.parts.values())).vars if self.parts else x_vars(0)
        zero = TruncSeries(vs, {})
        return SpecialSeries(self.parts.get(("1",), zero), self.parts.get(("xlogx",), zero),
                             self.parts.get(("logx",), zero))


def principal_specialize(corr: TruncSeries, hvar: str = "h") -> SpecializationImage:
    """z^-1 -> (x - x ln x)/h, z^0 -> ln x, z^i -> -(i-1)! h^i x^-i, per variable."""
    names = tuple(v.name for v in corr.vars if v.name != hvar)
    for n in names:
        v = corr.var(n)
        if v.floor is None or v.floor < -1:
            raise SeriesError(f"variable {n} must have floor -1 or higher")
    orders = [corr.var(n).order for n in names]
    if any(o is None for o in orders):
        raise SeriesError("principal specialization needs truncated variables")
    out_vars = tuple(Var("xi" + n[1:] if n.startswith("z") else "xi_" + n, None, o)
                     for n, o in zip(names, orders)) + (Var("h", None, None),)
    idx = [corr._index[n] for n in names]
    hidx = corr._index.get(hvar)
    parts: dict = {}

    def images(i):
        if i == -1:
            return [("1", -1, -1, Fraction(1)), ("xlogx", 0, -1, Fraction(-1))]
        if i == 0:
            return [("logx", 0, 0, Fraction(1))]
        return [("1", i, i, Fraction(-factorial(i - 1)))]

    for e, c in corr.terms.items():
        base_h = e[hidx] if hidx is not None else 0
        acc = [((), (), base_h, c)]
        for j in idx:
            nxt = []
            for kinds, xs, hp, cc in acc:
                for kind, xe, he, f in images(e[j]):
                    nxt.append((kinds + (kind,), xs + (xe,), hp + he, cc * f))
            acc = nxt
        for kinds, xs, hp, cc in acc:
            parts.setdefault(kinds, {})
            key = xs + (hp,)
            parts[kinds][key] = parts[kinds].get(key, 0) + cc
    return SpecializationImage(names, {k: TruncSeries(out_vars, v) for k, v in sorted(parts.items())})


# ------------------------------------------------------------ Gamma monomials
@dataclass(frozen=True)
class GammaMonomial:
    coeff: Fraction
    hbar_pow: int
    gamma_shift: int
    d: int
    two_pi_pow: Fraction = HALF
    t_order: int = 0  # order of the e^{t h} expansion this term came from


@dataclass(frozen=True)
class WaveSeries:
    r: int
    terms: tuple
    normalized_r1: bool = False
    t: Fraction = Fraction(0)

    def degrees(self) -> list:
        return sorted({m.d for m in self.terms})

    def to_json_obj(self) -> dict:
        return {
            "r": self.r,
            "normalized_r1": self.normalized_r1,
            "terms": [
                {"d": m.d, "coeff": str(m.coeff), "hbar_pow": m.hbar_pow,
                 "gamma_shift": m.gamma_shift, "t_order": m.t_order}
                for m in sorted(self.terms, key=lambda m: (m.d, m.t_order, m.hbar_pow))
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    def render(self) -> str:
        head = f"Phi(x) = (2 pi)^(1/2) h^(-X) * [ sum over d of q^({self.r} d) terms ],  X = x/h"
        lines = [head]
        for m in sorted(self.terms, key=lambda m: (m.d, m.t_order, m.hbar_pow)):
            lines.append(f"  d={m.d}: ({m.coeff}) * q^{self.r * m.d} * h^({m.hbar_pow})"
                         f" / Gamma(X + {m.gamma_shift} + 1/2)")
        if self.r == 1:
            lines.append("  (r = 1: normalized by exp(-q/h^2))")
        return "\n".join(lines)


def phi_d(r: int, d: int) -> GammaMonomial:
    return GammaMonomial(Fraction((-1) ** d, r ** d * factorial(d)), -(r + 1) * d, r * d, d)


def wave_closed(r: int, D: int) -> WaveSeries:
    """Terms Phi^d for d <= D.  For r = 1 this closed form already is the
    normalized wave function (the raw character-sum side differs by exp(q/h^2))."""
    if D < 0:
        raise ValueError("D must be non-negative")
    return WaveSeries(r, tuple(phi_d(r, d) for d in range(D + 1)), normalized_r1=(r == 1))


def gamma_ratio_series(shift: int, N: int) -> TruncSeries:
    """Gamma(X + 1/2)/Gamma(X + shift + 1/2) as a series in xi and h.

    shift >= 0: prod_{i=1}^{shift} h/(x + (i - 1/2) h)
    shift < 0:  prod_{j=0}^{|shift|-1} (x - (j + 1/2) h)/h
    """
    if shift >= 0:
        return shifted_product(shift, -HALF, N)
    vs = x_vars(N)
    out = TruncSeries.constant(1, vs)
    for j in range(-shift):
        out = out * TruncSeries(vs, {(-1, -1): 1, (0, 0): -(j + HALF)})
    return out


def monomial_series(m: GammaMonomial, N: int) -> TruncSeries:
    """The monomial divided by Phi^0 = (2pi)^(1/2) h^(-X)/Gamma(X+1/2), in xi and h."""
    base = gamma_ratio_series(m.gamma_shift, N)
    return base * TruncSeries(base.vars, {(0, m.hbar_pow): m.coeff})


# ------------------------------------------------------------ quantum curve
@dataclass(frozen=True)
class QcImage:
    """Image terms grouped by (q-degree d, t-order j); each group is a
    polynomial in (X, h) over the common denominator Gamma(X + shift + 1/2)."""

    r: int
    groups: dict  # (d, j) -> (shift, {(xpow, hpow): coeff})

    def is_zero_through(self, dmax: int, jmax: int | None = None) -> bool:
        for (d, j), (_, poly) in self.groups.items():
            if d > dmax or (jmax is not None and j > jmax):
                continue
            if any(c != 0 for c in poly.values()):
                return False
        return True

    def to_json_obj(self) -> dict:
        return {"r": self.r, "groups": [
            {"d": d, "t_order": j, "gamma_shift": s,
             "poly": [{"X": a, "h": b, "coeff": str(c)} for (a, b), c in sorted(p.items()) if c]}
            for (d, j), (s, p) in sorted(self.groups.items())]}


def _rising_to(k: int, K: int) -> dict:
    """1/Gamma(X+k+1/2) = prod_{j=k}^{K-1} (X + j + 1/2) / Gamma(X+K+1/2); polynomial in X."""
    poly = {0: Fraction(1)}
    for j in range(k, K):
        nxt: dict = {}
        for a, c in poly.items():
            nxt[a + 1] = nxt.get(a + 1, 0) + c
            nxt[a] = nxt.get(a, 0) + c * (j + HALF)
        poly = nxt
    return poly


def quantum_curve_apply(r: int, wave: WaveSeries, t=0, horder: int = 0,
                        half_constant=HALF) -> QcImage:
    """Apply e^{-h d_x} + q^r e^{r t h} e^{r h d_x} - x + half_constant*h.

    e^{r t h} is expanded through h^horder; image terms remember the total
    expansion order so incomplete orders can be ignored.
    """
    t = Fraction(t)
    half_constant = Fraction(half_constant)
    raw = []  # (d, j, shift, {(X, h): c})
    for m in wave.terms:
        K, hp = m.gamma_shift, m.hbar_pow
        # e^{-h d_x}: X -> X - 1, h^{-X} -> h * h^{-X}, 1/Gamma(X+K-1/2) = (X+K-1/2)/Gamma(X+K+1/2)
        raw.append((m.d, m.t_order, K, {(1, hp + 1): m.coeff, (0, hp + 1): m.coeff * (K - HALF)}))
        # -x + c h = -h X + c h
        raw.append((m.d, m.t_order, K, {(1, hp + 1): -m.coeff, (0, hp + 1): m.coeff * half_constant}))
        # q^r e^{r t h} e^{r h d_x}: X -> X + r
        for j in range(horder + 1 if t else 1):
            w = (r * t) ** j / factorial(j)
            if w == 0:
                continue
            raw.append((m.d + 1, m.t_order + j, K + r, {(0, hp - r + j): m.coeff * w}))
    groups: dict = {}
    for d, j, K, poly in raw:
        groups.setdefault((d, j), []).append((K, poly))
    out = {}
    for key, items in groups.items():
        K = max(k for k, _ in items)
        acc: dict = {}
        for k, poly in items:
            lift = _rising_to(k, K)
            for (a, b), c in poly.items():
                for a2, c2 in lift.items():
                    acc[(a + a2, b)] = acc.get((a + a2, b), 0) + c * c2
        out[key] = (K, {k: v for k, v in acc.items() if v != 0})
    return QcImage(r, out)


def three_term_check(r: int, d: int, half_constant=HALF) -> bool:
    """(e^{-h d_x} - x + h/2) Phi^d + e^{r h d_x} Phi^{d-1} = 0, exactly.

    Also asserts agreement with the coefficient form c_d * r d + c_{d-1} = 0.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    wave = WaveSeries(r, (phi_d(r, d - 1), phi_d(r, d)))
    # keep only the degree-d part: drop the local part of Phi^{d-1}
    img = quantum_curve_apply(r, wave, half_constant=half_constant)
    shift, poly = img.groups[(d, 0)]
    exact = all(c == 0 for c in poly.values())
    cd, cprev = phi_d(r, d).coeff, phi_d(r, d - 1).coeff
    coeff_form = (cd * r * d + cprev == 0) and Fraction(half_constant) == HALF
    if exact != coeff_form:
        raise AssertionError("Gamma-shift route and coefficient route disagree")
    return exact


def t_evolve(wave: WaveSeries, t, horder: int) -> WaveSeries:
    """Multiply the degree-d part by e^{t h r d}, expanded through h^horder."""
    t = Fraction(t)
    out = []
    for m in wave.terms:
        for j in range(horder + 1 if t else 1):
            w = (t * wave.r * m.d) ** j / factorial(j)
            if w:
                out.append(replace(m, coeff=m.coeff * w, hbar_pow=m.hbar_pow + j,
                                   t_order=m.t_order + j))
    return WaveSeries(wave.r, tuple(out), wave.normalized_r1, wave.t + t)


def t_evolve_by_rescaling(wave: WaveSeries, t, horder: int) -> WaveSeries:
    """Same as t_evolve via q -> q e^{t h}: (e^{t h})^{rd} as a product of truncated factors."""
    t = Fraction(t)
    base = [t ** j / factorial(j) for j in range(horder + 1)]
    out = []
    for m in wave.terms:
        poly = [Fraction(1)] + [Fraction(0)] * horder
        for _ in range(wave.r * m.d):
            poly = _poly_mul(poly, base)[: horder + 1]
        for j, w in enumerate(poly):
            if w:
                out.append(replace(m, coeff=m.coeff * w, hbar_pow=m.hbar_pow + j,
                                   t_order=m.t_order + j))
    return WaveSeries(wave.r, tuple(out), wave.normalized_r1, wave.t + t)


def same_wave(a: WaveSeries, b: WaveSeries) -> bool:
    def key(w):
        acc: dict = {}
        for m in w.terms:
            k = (m.d, m.hbar_pow, m.gamma_shift, m.t_order)
            acc[k] = acc.get(k, 0) + m.coeff
        return {k: v for k, v in acc.items() if v}
    return key(a) == key(b)


def lift_apply(wave: WaveSeries, k: int = 1) -> WaveSeries:
    """Apply the lifting operator k times: on the Gamma form it is e^{-h d_x},
    i.e. gamma_shift -> gamma_shift - 1 and one extra power of h."""
    if k < 0:
        raise ValueError("k must be non-negative")
    terms = tuple(replace(m, hbar_pow=m.hbar_pow + k, gamma_shift=m.gamma_shift - k)
                  for m in wave.terms)
    return replace(wave, terms=terms)


def phi_k_closed(r: int, k: int, D: int) -> WaveSeries:
    """sum_d (-1)^d q^{rd}/(r^d d!) h^{-X-(r+1)d+k}/Gamma(X+rd+1/2-k)."""
    return WaveSeries(r, tuple(
        GammaMonomial(Fraction((-1) ** d, r ** d * factorial(d)), -(r + 1) * d + k, r * d - k, d)
        for d in range(D + 1)), normalized_r1=(r == 1))


def wave_series(wave: WaveSeries, N: int) -> TruncSeries:
    """sum_d qd^d * (term / Phi^0) in variables (qd, xi, h)."""
    D = max(m.d for m in wave.terms)
    vs = (Var("qd", 0, D),) + x_vars(N)
    total = TruncSeries(vs, {})
    for m in wave.terms:
        s = monomial_series(m, N)
        total = total + TruncSeries(vs, {(m.d,) + e: c for e, c in s.terms.items()})
    return total
