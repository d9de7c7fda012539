"""Stationary Gromov-Witten invariants of the r-orbifold projective line.

The connected series of degree d with n marked points is obtained from the
wedge correlator <alpha_1^{rd} prod E_0(hbar z_i) alpha_{-r}^d>° divided by
d! (rd)! r^d hbar^{(r+1)d+n}.  Its terms are z_1^{a_1}...z_n^{a_n} hbar^e.

Extraction convention: the invariant <tau_{k_1}(h) ... tau_{k_n}(h)>_{g,d}
is the coefficient of prod z_i^{k_i+1} hbar^{2g-2}.  This is the reading
under which the degree-one one-point series z/hbar^2 + ... gives
<tau_0(h)>_{0,1} = 1, and under which the unstable degree-zero term is 1/z.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .series import SeriesError, TruncSeries, Var
from .wedge import connected_vev_recursion, disconnected_vev_char_sum


@dataclass(frozen=True)
class GwSeries:
    r: int
    d: int
    names: tuple
    series: TruncSeries  # variables: names (floor -1) then "h" (untruncated)
    zorder: int


@dataclass(frozen=True)
class Invariant:
    r: int
    g: int
    d: int
    k: tuple
    value: Fraction


def point_names(n: int) -> tuple:
    return tuple(f"z{i + 1}" for i in range(n))


def _rescale(w_series: TruncSeries, names: Sequence[str], N: int, shift: int, scale: Fraction) -> TruncSeries:
    """w_i -> hbar z_i, then multiply by scale * hbar^(-shift)."""
    vs = tuple(Var(x, -1, N) for x in names) + (Var("h", None, None),)
    src = w_series.with_vars(tuple(Var(x, -1, N) for x in names))
    terms = {}
    for e, c in src.terms.items():
        terms[e + (sum(e) - shift,)] = c * scale
    return TruncSeries(vs, terms)


def stationary_series(r: int, d: int, n: int, zorder: int) -> GwSeries:
    """Connected series G°_d(z_1..z_n) through z_i^zorder, exact in hbar."""
    if r < 1 or d < 0 or n < 0:
        raise ValueError("need r >= 1, d >= 0, n >= 0")
    names = point_names(n)
    shift = (r + 1) * d + n
    scale = Fraction(1, factorial(d) * factorial(r * d) * r ** d)
    w = connected_vev_recursion(r, d, names, zorder)
    return GwSeries(r, d, names, _rescale(w, names, zorder, shift, scale), zorder)


def disconnected_series(r: int, d: int, n: int, zorder: int) -> TruncSeries:
    """Disconnected G•_d via the character sum, same normalization."""
    names = point_names(n)
    shift = (r + 1) * d + n
    scale = Fraction(1, factorial(d) * factorial(r * d) * r ** d)
    w = disconnected_vev_char_sum(r, d, names, zorder)
    return _rescale(w, names, zorder, shift, scale)


def extract_invariant(gs: GwSeries, g: int, k: Sequence[int]) -> Invariant:
    k = tuple(k)
    if len(k) != len(gs.names):
        raise SeriesError("need one descendant power per marked point")
    if g < 0 or any(ki < -1 for ki in k):
        raise SeriesError("genus and descendant powers out of range")
    if any(ki + 1 > gs.zorder for ki in k):
        raise SeriesError("requested z-power beyond truncation order")
    exps = {x: ki + 1 for x, ki in zip(gs.names, k)}
    exps["h"] = 2 * g - 2
    return Invariant(gs.r, g, gs.d, k, gs.series.coeff(exps))


def invariant_table(r: int, dmax: int, n: int, zorder: int) -> list:
    """All nonzero stable-looking invariants with k_i >= 0 within the order."""
    rows = []
    for d in range(dmax + 1):
        gs = stationary_series(r, d, n, zorder)
        for e, c in sorted(gs.series.terms.items()):
            ks = tuple(a - 1 for a in e[:-1])
            he = e[-1]
            if any(ki < 0 for ki in ks) or he % 2 or he < -2:
                continue
            rows.append(Invariant(r, (he + 2) // 2, d, ks, c))
    return rows


def table_csv(rows: Sequence[Invariant]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "g", "d", "k", "numerator", "denominator"])
    for inv in rows:
        w.writerow([inv.r, inv.g, inv.d, " ".join(map(str, inv.k)),
                    inv.value.numerator, inv.value.denominator])
    return buf.getvalue()


def table_json_obj(rows: Sequence[Invariant]) -> list:
    return [{"r": i.r, "g": i.g, "d": i.d, "k": list(i.k),
             "numerator": str(i.value.numerator), "denominator": str(i.value.denominator)}
            for i in rows]


def divisor_check(r: int, d: int, n: int, zorder: int) -> bool:
    """[z_0^1] G•_d(z_0, z) = (rd - 1/24) G•_d(z), both via character sums.

    Working in w = hbar z before rescaling, the extra point contributes
    [w_0^1] E_lam(w_0) = |lam| - 1/24 to every summand.
    """
    names = point_names(n)
    with_extra = disconnected_vev_char_sum(r, d, ("z0",) + names, zorder)
    base = disconnected_vev_char_sum(r, d, names, zorder)
    lhs = with_extra.coefficient_in("z0", 1)
    rhs = base.scale(Fraction(r * d) - Fraction(1, 24))
    return (lhs.with_vars(rhs.vars) - rhs).is_zero()


def normalization_factor(r: int, t, qorder: int, horder: int) -> TruncSeries:
    """<0|e^{t alpha_1}|V> in variables qd (q^{rd} counter) and h.

    e^{-t hbar/24} for r >= 2; times exp(q e^{t hbar}/hbar^2) when r = 1.
    Positive hbar powers are kept through hbar^horder.
    """
    t = Fraction(t)
    wide = horder + 2 * qorder
    vs = (Var("qd", 0, qorder), Var("h", -2 * qorder, wide))
    damp = {(0, j): (-t / 24) ** j / factorial(j) for j in range(wide + 1)}
    out = TruncSeries(vs, damp)
    if r != 1:
        return out.retruncate(h=horder)
    terms = {}
    for dd in range(qorder + 1):
        # q^dd e^{dd t hbar} / (dd! hbar^{2 dd})
        for j in range(horder + 2 * dd + 1):
            c = Fraction(dd) ** j * t ** j / factorial(j) / factorial(dd) if j else Fraction(1, factorial(dd))
            if c:
                terms[(dd, j - 2 * dd)] = c
    return (out * TruncSeries(vs, terms)).retruncate(h=horder)


def gw_json(rows: Sequence[Invariant]) -> str:
    return json.dumps({"schema": "wpline/1", "invariants": table_json_obj(rows)}, sort_keys=True)
