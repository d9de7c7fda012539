"""Semi-infinite wedge computations.

Two independent routes to vacuum expectation values live here:

* the commutator recursion for connected correlators of the operators
  E_a(z) (``connected_e``), dressed by the alpha_1 / alpha_{-r} conjugations
  (``connected_vev_recursion``);
* the character-sum eigenvalue formula for disconnected correlators
  (``disconnected_vev_char_sum``), turned into connected ones by
  inclusion-exclusion over set partitions (``connected_from_disconnected``).

A Fock state is a finite map from partitions to coefficients.  Partitions are
read as Maya diagrams: row i of lam occupies the half-integer lam_i - i + 1/2.
The operator psi_{k-r} psi*_k moves a particle from k to k-r with sign
(-1)^(number of occupied sites strictly between).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Mapping, Sequence

from .partitions import (
    _check,
    enumerate_partitions,
    mn_character,
    modified_content,
    shifted_power_sum,
)
from .series import (
    SeriesError,
    TruncSeries,
    Var,
    compose_linear,
    inv_zeta_coeffs,
    zeta_coeffs,
)

HALF = Fraction(1, 2)


# --------------------------------------------------------------- Maya moves
def maya(lam, length: int) -> list:
    """First `length` occupied positions of lam, in decreasing order."""
    return [modified_content(lam, i) for i in range(1, length + 1)]


def _from_maya(sites: Sequence[Fraction]) -> tuple:
    s = sorted(sites, reverse=True)
    return tuple(v for v in (int(s[i] + i + HALF) for i in range(len(s))) if v > 0)


def particle_moves(lam, shift: int) -> list:
    """All (k, sign, mu): move an occupied site k to the empty site k - shift."""
    if shift == 0:
        raise ValueError("shift must be nonzero")
    length = len(lam) + abs(shift) + 1
    sites = maya(lam, length)
    occ = set(sites)
    out = []
    for k in sites:
        m = k - shift
        if m in occ or m < sites[-1]:
            continue
        lo, hi = min(k, m), max(k, m)
        between = sum(1 for y in sites if lo < y < hi)
        new_sites = [y for y in sites if y != k] + [m]
        out.append((k, (-1) ** between, _from_maya(new_sites)))
    return out


# --------------------------------------------------------------- Fock states
@dataclass(frozen=True)
class FockState:
    amplitudes: Mapping = field(default_factory=dict)
    cutoff: int | None = None
    overflow: bool = False

    @classmethod
    def vacuum(cls, cutoff: int | None = None) -> "FockState":
        return cls({(): Fraction(1)}, cutoff)

    @classmethod
    def basis(cls, lam, cutoff: int | None = None) -> "FockState":
        return cls({_check(lam): Fraction(1)}, cutoff)

    def coeff(self, lam):
        return self.amplitudes.get(tuple(lam), 0)

    def _build(self, acc: dict) -> "FockState":
        clean = {}
        overflow = self.overflow
        for lam, c in acc.items():
            if c == 0:
                continue
            if self.cutoff is not None and sum(lam) > self.cutoff:
                overflow = True
                continue
            clean[lam] = c
        return FockState(clean, self.cutoff, overflow)

    def __add__(self, other: "FockState") -> "FockState":
        acc = dict(self.amplitudes)
        for lam, c in other.amplitudes.items():
            acc[lam] = acc[lam] + c if lam in acc else c
        st = FockState(acc, self.cutoff, self.overflow or other.overflow)
        return st._build(acc)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scale(-1)

    def scale(self, c) -> "FockState":
        return self._build({lam: v * c for lam, v in self.amplitudes.items()})

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.amplitudes.values())

    def energies(self) -> set:
        return {sum(lam) for lam in self.amplitudes}


def apply_w(state: FockState, r: int, s: int) -> FockState:
    """W_r^s = sum_k k^s :psi_{k-r} psi*_k:."""
    if s < 0:
        raise ValueError("s must be non-negative")
    acc: dict = {}
    for lam, c in state.amplitudes.items():
        if r == 0:
            ev = shifted_power_sum(lam, s) if s > 0 else Fraction(0)
            if ev:
                acc[lam] = acc.get(lam, 0) + c * ev
            continue
        for k, sign, mu in particle_moves(lam, r):
            w = sign * k ** s
            acc[mu] = acc[mu] + c * w if mu in acc else c * w
    return state._build(acc)


def apply_alpha(state: FockState, n: int) -> FockState:
    """alpha_n = W_n^0 (n > 0 removes, n < 0 adds border strips)."""
    if n == 0:
        raise ValueError("alpha_0 acts as zero on charge 0; use a nonzero n")
    return apply_w(state, n, 0)


def e_eigenvalue(lam, N: int, name: str = "z") -> TruncSeries:
    """E_lam(z) = 1/zeta(z) + sum_i (e^{z(lam_i - i + 1/2)} - e^{z(-i + 1/2)})."""
    lam = _check(lam)
    var = Var(name, -1, N)
    coeffs = dict(inv_zeta_coeffs(N))
    for i in range(1, len(lam) + 1):
        a = modified_content(lam, i)
        b = Fraction(1 - 2 * i, 2)
        for k in range(N + 1):
            c = (a ** k - b ** k) / factorial(k)
            if c:
                coeffs[k] = coeffs.get(k, 0) + c
    return TruncSeries.univariate(var, coeffs)


def apply_e(state: FockState, a: int, N: int, name: str = "z") -> FockState:
    """E_a(z) = sum_k e^{z(k - a/2)} psi_{k-a} psi*_k (+ 1/zeta(z) when a = 0)."""
    acc: dict = {}
    var = Var(name, -1, N)
    for lam, c in state.amplitudes.items():
        if a == 0:
            w = e_eigenvalue(lam, N, name)
            acc[lam] = acc[lam] + c * w if lam in acc else c * w
            continue
        for k, sign, mu in particle_moves(lam, a):
            x = k - Fraction(a, 2)
            w = TruncSeries.univariate(var, {j: sign * x ** j / factorial(j) for j in range(N + 1)})
            acc[mu] = acc[mu] + c * w if mu in acc else c * w
    return state._build(acc)


# ------------------------------------------------------ commutator checks
def _basis_upto(cutoff: int) -> list:
    return [lam for n in range(cutoff + 1) for lam in enumerate_partitions(n)]


def _compare_up_to_central(lhs_fn, rhs_fn, cutoff: int) -> bool:
    """Compare two operators on all basis vectors up to a constant shift."""
    vac_l = lhs_fn(FockState.vacuum()).coeff(())
    vac_r = rhs_fn(FockState.vacuum()).coeff(())
    for lam in _basis_upto(cutoff):
        v = FockState.basis(lam)
        left = lhs_fn(v)
        right = rhs_fn(v)
        keys = set(left.amplitudes) | set(right.amplitudes)
        for mu in keys:
            a = left.coeff(mu)
            b = right.coeff(mu)
            if mu == lam:
                a = a - vac_l
                b = b - vac_r
            if a != b:
                return False
    return True


def commutator(op_a, op_b):
    return lambda v: op_a(op_b(v)) - op_b(op_a(v))


def commutator_check_w_alpha(r: int, s: int, n: int, cutoff: int) -> bool:
    """[W_r^s, alpha_n] = sum_{i=1}^s (-n)^i C(s,i) W_{r+n}^{s-i} up to a central term."""
    lhs = commutator(lambda v: apply_w(v, r, s), lambda v: apply_w(v, n, 0))

    def rhs(v):
        out = FockState({}, v.cutoff)
        for i in range(1, s + 1):
            c = Fraction((-n) ** i * comb(s, i))
            if r + n == 0 and s - i == 0:
                continue
            out = out + apply_w(v, r + n, s - i).scale(c)
        return out

    return _compare_up_to_central(lhs, rhs, cutoff)


def ww_structure_constants(r: int, s: int, p: int, q: int) -> dict:
    """a(u) = [k^u]((k-p)^s k^q - k^s (k-r)^q)."""
    out = {}
    for j in range(s + 1):
        c = comb(s, j) * (-p) ** (s - j)
        out[j + q] = out.get(j + q, 0) + c
    for j in range(q + 1):
        c = comb(q, j) * (-r) ** (q - j)
        out[j + s] = out.get(j + s, 0) - c
    return {u: Fraction(c) for u, c in out.items() if c}


def commutator_check_ww(r: int, s: int, p: int, q: int, cutoff: int) -> bool:
    """[W_r^s, W_p^q] = sum_u a(u) W_{r+p}^u up to a central term."""
    lhs = commutator(lambda v: apply_w(v, r, s), lambda v: apply_w(v, p, q))
    consts = ww_structure_constants(r, s, p, q)

    def rhs(v):
        out = FockState({}, v.cutoff)
        for u, c in consts.items():
            if r + p == 0 and u == 0:
                continue
            out = out + apply_w(v, r + p, u).scale(c)
        return out

    return _compare_up_to_central(lhs, rhs, cutoff)


def commutator_check_alpha(i: int, j: int, cutoff: int) -> bool:
    """[alpha_i, alpha_j] = i * delta_{i,-j} exactly (no central ambiguity)."""
    for lam in _basis_upto(cutoff):
        v = FockState.basis(lam)
        res = apply_alpha(apply_alpha(v, j), i) - apply_alpha(apply_alpha(v, i), j)
        expect = v.scale(i) if i == -j else FockState({})
        if not (res - expect).is_zero():
            return False
    return True


def commutator_check_ee(a: int, b: int, order: int, cutoff: int) -> bool:
    """[E_a(z), E_b(w)] = zeta(a w - b z) E_{a+b}(z + w), checked through total
    degree `order` in (z, w) on all basis vectors up to the cutoff."""
    N = order + 1
    vs = (Var("z", -1, N), Var("w", -1, N))

    def cut(s: TruncSeries) -> dict:
        s = s.with_vars(vs)
        return {e: c for e, c in s.terms.items() if e[0] + e[1] <= order and e[0] >= 0 and e[1] >= 0}

    zeta_arg = compose_linear(zeta_coeffs(2 * N + 2), {"z": -b, "w": a}, vs)
    for lam in _basis_upto(cutoff):
        v = FockState.basis(lam)
        left = apply_e(apply_e(v, b, N, "w"), a, N, "z") - apply_e(apply_e(v, a, N, "z"), b, N, "w")
        right: dict = {}
        c = a + b
        if c == 0:
            # zeta(a(z+w)) * (normal-ordered E_0(z+w)) + zeta(a u)/zeta(u) * Id
            ev = _e0_normal_eigen(lam, vs, 2 * N + 2)
            scalar = compose_linear(_zeta_ratio_coeffs(a, 2 * N + 2), {"z": 1, "w": 1}, vs)
            right[lam] = zeta_arg * ev + scalar
        else:
            for k, sign, mu in particle_moves(lam, c):
                x = k - Fraction(c, 2)
                ex = compose_linear({j: sign * x ** j / factorial(j) for j in range(2 * N + 3)},
                                    {"z": 1, "w": 1}, vs)
                right[mu] = right.get(mu, 0) + zeta_arg * ex
        for mu in set(left.amplitudes) | set(right):
            lv = left.coeff(mu)
            rv = right.get(mu, 0)
            lt = cut(lv) if isinstance(lv, TruncSeries) else {}
            rt = cut(rv) if isinstance(rv, TruncSeries) else {}
            if lt != rt:
                return False
    return True


def _e0_normal_eigen(lam, vs, M: int) -> TruncSeries:
    total = TruncSeries(vs, {})
    for i in range(1, len(lam) + 1):
        x = modified_content(lam, i)
        y = Fraction(1 - 2 * i, 2)
        total = total + compose_linear({j: (x ** j - y ** j) / factorial(j) for j in range(M + 1)},
                                       {"z": 1, "w": 1}, vs)
    return total


@lru_cache(maxsize=None)
def _zeta_ratio_series(a: int, M: int) -> dict:
    """Taylor coefficients of zeta(a u)/zeta(u) through u^M."""
    num = TruncSeries.univariate(Var("u", 0, M + 1), zeta_coeffs(M + 1, a))
    den = TruncSeries.univariate(Var("u", -1, M + 1), inv_zeta_coeffs(M + 1))
    prod_ = num * den
    return tuple((k, prod_.coeff(u=k)) for k in range(M + 1) if prod_.coeff(u=k))


def _zeta_ratio_coeffs(a: int, M: int) -> dict:
    return dict(_zeta_ratio_series(a, M))


# --------------------------------------------------- recursion route
Form = tuple  # sorted tuple of (variable name, integer coefficient)


def _form(d: Mapping[str, int]) -> Form:
    return tuple(sorted((k, v) for k, v in d.items() if v))


def _add_forms(a: Form, b: Form, ca: int = 1, cb: int = 1) -> Form:
    out: dict = {}
    for k, v in a:
        out[k] = out.get(k, 0) + ca * v
    for k, v in b:
        out[k] = out.get(k, 0) + cb * v
    return _form(out)


class _Recursion:
    def __init__(self, names: Sequence[str], N: int, trace: bool = False):
        self.vars = tuple(Var(n, -1, N) for n in names)
        self.N = N
        self.M = N * max(1, len(names)) + 2
        self.memo: dict = {}
        self.trace = trace

    def zero(self) -> TruncSeries:
        return TruncSeries(self.vars, {})

    def zeta_of(self, form: Form) -> TruncSeries:
        return compose_linear(zeta_coeffs(self.M), dict(form), self.vars)

    def run(self, word: tuple):
        if word in self.memo:
            return self.memo[word]
        res = self._compute(word)
        self.memo[word] = res
        return res

    def _node(self, word, value, children):
        if not self.trace:
            return value, None
        return value, {
            "labels": [a for a, _ in word],
            "args": [dict(f) for _, f in word],
            "children": children,
        }

    def _compute(self, word: tuple):
        labels = [a for a, _ in word]
        if sum(labels) != 0:
            return self._node(word, self.zero(), [])
        if len(word) == 1:
            a, form = word[0]
            if len(form) != 1 or form[0][1] != 1:
                raise SeriesError("one-point base case needs a bare variable")
            name = form[0][0]
            one = TruncSeries.univariate(Var(name, -1, self.N), inv_zeta_coeffs(self.N))
            return self._node(word, one.with_vars(self.vars), [])
        a1, z1 = word[0]
        if a1 <= 0:
            return self._node(word, self.zero(), [])
        if len(word) == 2:
            u = _add_forms(z1, word[1][1])
            val = compose_linear(_zeta_ratio_coeffs(a1, self.M), dict(u), self.vars)
            return self._node(word, val, [])
        total = self.zero()
        children = []
        for i in range(1, len(word)):
            ai, zi = word[i]
            arg = _add_forms(zi, z1, a1, -ai)
            rest = list(word[1:])
            rest[i - 1] = (ai + a1, _add_forms(zi, z1))
            sub, sub_trace = self.run(tuple(rest))
            if sub.is_zero():
                if self.trace:
                    children.append({"weight": dict(arg), "node": sub_trace})
                continue
            total = total + self.zeta_of(arg) * sub
            if self.trace:
                children.append({"weight": dict(arg), "node": sub_trace})
        return self._node(word, total, children)


def connected_e(labels: Sequence[int], names: Sequence[str], N: int) -> TruncSeries:
    """Connected correlator <E_{a_1}(z_1) ... E_{a_n}(z_n)>° through z_i^N."""
    if len(labels) != len(names):
        raise ValueError("one variable per label")
    rec = _Recursion(names, N)
    word = tuple((a, _form({n: 1})) for a, n in zip(labels, names))
    return rec.run(word)[0]


def connected_e_trace(labels: Sequence[int], names: Sequence[str], N: int) -> dict:
    """Recursion tree of connected_e, as a JSON-ready dict."""
    rec = _Recursion(names, N, trace=True)
    word = tuple((a, _form({n: 1})) for a, n in zip(labels, names))
    value, tree = rec.run(word)
    return {"tree": tree, "value": value.to_json_obj()}


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def connected_vev_recursion(r: int, d: int, names: Sequence[str], N: int) -> TruncSeries:
    """<alpha_1^{rd} prod_i E_0(w_i) alpha_{-r}^d>° via the E-recursion.

    Conjugating E_0(w) by e^{u alpha_1} and e^{-v alpha_{-r}} gives
    sum_{l,m} (u zeta(w))^l (v zeta(r w))^m / (l! m!) E_{l - m r}(w);
    the coefficient of u^{rd} v^d in the connected correlator of these
    dressed operators, times d!(rd)!, is the connected vev.
    """
    n = len(names)
    vs = tuple(Var(x, -1, N) for x in names)
    if n == 0:
        val = 1 if (r == 1 and d == 1) else 0
        return TruncSeries.constant(val, vs)
    rec = _Recursion(names, N)
    M = N + 2
    zeta1 = {x: compose_linear(zeta_coeffs(M), {x: 1}, vs) for x in names}
    zetar = {x: compose_linear(zeta_coeffs(M, r), {x: 1}, vs) for x in names}
    total = TruncSeries(vs, {})
    for ls in _compositions(r * d, n):
        for ms in _compositions(d, n):
            labels = [l - m * r for l, m in zip(ls, ms)]
            if sum(labels) != 0:
                continue
            word = tuple((a, _form({x: 1})) for a, x in zip(labels, names))
            g = rec.run(word)[0]
            if g.is_zero():
                continue
            weight = TruncSeries.constant(1, tuple(Var(x, -1, None) for x in names))
            for x, l, m in zip(names, ls, ms):
                weight = weight * (zeta1[x] ** l) * (zetar[x] ** m)
                weight = weight.scale(Fraction(1, factorial(l) * factorial(m)))
            total = total + weight * g
    return total.scale(factorial(d) * factorial(r * d))


# --------------------------------------------------- character-sum route
def disconnected_vev_char_sum(r: int, d: int, names: Sequence[str], N: int) -> TruncSeries:
    """<alpha_1^{rd} prod_i E_0(w_i) alpha_{-r}^d>
    = sum_{|lam|=rd} chi^lam_{1^{rd}} chi^lam_{(r^d)} prod_i E_lam(w_i)."""
    if r < 1 or d < 0:
        raise ValueError("need r >= 1 and d >= 0")
    vs = tuple(Var(x, -1, N) for x in names)
    total = TruncSeries(vs, {})
    n = r * d
    for lam in enumerate_partitions(n):
        w = mn_character(lam, (1,) * n) * mn_character(lam, (r,) * d)
        if w == 0:
            continue
        # exact constant: a truncated one would cost an order against 1/zeta
        term = TruncSeries.constant(w, tuple(Var(x, -1, None) for x in names))
        for x in names:
            term = term * e_eigenvalue(lam, N, x)
        total = total + term.with_vars(vs)
    return total


def w_vev(r: int, d: int, k: Sequence[int]) -> Fraction:
    """D^d_k = <alpha_1^{rd} W_0^{k_1} ... W_0^{k_n} alpha_{-r}^d> by character sums."""
    if any(ki < 1 for ki in k):
        raise ValueError("all k_i must be >= 1")
    n = r * d
    total = Fraction(0)
    for lam in enumerate_partitions(n):
        w = mn_character(lam, (1,) * n) * mn_character(lam, (r,) * d)
        if w == 0:
            continue
        term = Fraction(w)
        for ki in k:
            term *= shifted_power_sum(lam, ki)
        total += term
    return total


def w_vev_fock(r: int, d: int, k: Sequence[int]) -> Fraction:
    """Same quantity as w_vev, by acting with operators on Fock states."""
    state = FockState.vacuum()
    for _ in range(d):
        state = apply_alpha(state, -r)
    for ki in reversed(k):
        state = apply_w(state, 0, ki)
    for _ in range(r * d):
        state = apply_alpha(state, 1)
    return Fraction(state.coeff(()))


# ------------------------------------------------ connected <-> disconnected
def set_partitions(items: Sequence) -> list:
    """Set partitions of `items` via restricted growth strings."""
    items = list(items)
    n = len(items)
    if n == 0:
        return [[]]
    out = []

    def grow(prefix, mx):
        if len(prefix) == n:
            blocks: dict = {}
            for it, b in zip(items, prefix):
                blocks.setdefault(b, []).append(it)
            out.append([tuple(blocks[b]) for b in sorted(blocks)])
            return
        for b in range(mx + 2):
            grow(prefix + [b], max(mx, b))

    grow([0], 0)
    return out


@dataclass(frozen=True)
class SetPartitionWeighted:
    """Blocks of marked points (empty blocks allowed) with a degree per block."""

    blocks: tuple
    degrees: tuple

    def automorphism_factor(self) -> int:
        counts: dict = {}
        for b, d in zip(self.blocks, self.degrees):
            if not b:
                counts[d] = counts.get(d, 0) + 1
        out = 1
        for c in counts.values():
            out *= factorial(c)
        return out


def weighted_set_partitions(points: Sequence, d: int) -> list:
    """All weighted set partitions of `points` with total degree d.

    Empty blocks carry degree >= 1 (the degree-0 empty connected piece vanishes)
    and are listed in weakly decreasing degree order, one per multiset.
    """
    out = []
    for sp in set_partitions(points):
        for k in range(d + 1):
            for empty_degs in _partitions_into(k, d):
                rest = d - sum(empty_degs)
                for degs in _compositions(rest, len(sp)):
                    out.append(SetPartitionWeighted(tuple(sp) + ((),) * k, tuple(degs) + empty_degs))
    return out


def _partitions_into(k: int, d: int):
    """Weakly decreasing k-tuples of positive integers with sum <= d."""
    if k == 0:
        yield ()
        return

    def rec(k, bound, remaining):
        if k == 0:
            yield ()
            return
        for first in range(min(bound, remaining), 0, -1):
            for rest in rec(k - 1, first, remaining - first):
                yield (first,) + rest

    yield from rec(k, d, d)


Family = dict  # frozenset(point names) -> list over degree of TruncSeries


def disconnected_from_connected(connected: Family, points: Sequence, D: int) -> Family:
    """Assemble disconnected correlators from connected ones by summing over
    weighted set partitions with automorphism factors."""
    out: Family = {}
    for sub in _subsets(points):
        key = frozenset(sub)
        series = []
        for d in range(D + 1):
            total = None
            for wp in weighted_set_partitions(sub, d):
                term = None
                for b, deg in zip(wp.blocks, wp.degrees):
                    piece = _lookup(connected, frozenset(b), deg)
                    term = piece if term is None else term * piece
                if term is None:
                    term = TruncSeries.constant(1)
                term = term.scale(Fraction(1, wp.automorphism_factor()))
                total = term if total is None else total + term
            series.append(total if total is not None else TruncSeries.constant(0))
        out[key] = series
    return out


def connected_from_disconnected(disconnected: Family, points: Sequence, D: int) -> Family:
    """Inverse transform: C_empty = log Z_empty, then peel off products of
    lower connected pieces subset by subset."""
    empty = [_lookup(disconnected, frozenset(), d) for d in range(D + 1)]
    if empty[0] != 1:
        raise SeriesError("the degree-0 vacuum term must be 1")
    out: Family = {frozenset(): _qlog(empty, D)}
    inv_empty = _qinv(empty, D)
    for sub in sorted(_subsets(points), key=len):
        if not sub:
            continue
        key = frozenset(sub)
        z = [_lookup(disconnected, key, d) for d in range(D + 1)]
        zhat = _qmul(z, inv_empty, D)
        c = list(zhat)
        for sp in set_partitions(sub):
            if len(sp) < 2:
                continue
            prod_ = None
            for b in sp:
                piece = out[frozenset(b)]
                prod_ = piece if prod_ is None else _qmul(prod_, piece, D)
            c = [c[d] - prod_[d] for d in range(D + 1)]
        out[key] = c
    return out


def _lookup(family: Family, key: frozenset, d: int) -> TruncSeries:
    if key not in family or d >= len(family[key]):
        raise SeriesError(f"missing data for points {sorted(key)} at degree {d}")
    return family[key][d]


def _subsets(points: Sequence) -> list:
    points = list(points)
    out = []
    for mask in range(1 << len(points)):
        out.append(tuple(p for i, p in enumerate(points) if mask >> i & 1))
    return out


def _qmul(a: list, b: list, D: int) -> list:
    out = []
    for d in range(D + 1):
        total = None
        for i in range(d + 1):
            t = a[i] * b[d - i]
            total = t if total is None else total + t
        out.append(total)
    return out


def _qinv(a: list, D: int) -> list:
    inv = [TruncSeries.constant(1)]
    for d in range(1, D + 1):
        total = None
        for i in range(1, d + 1):
            t = a[i] * inv[d - i]
            total = t if total is None else total + t
        inv.append(-total)
    return inv


def _qlog(a: list, D: int) -> list:
    """log of a q-series with constant term 1, via d*c_d = d*a_d - sum i c_i a_{d-i}."""
    c = [TruncSeries.constant(0)]
    for d in range(1, D + 1):
        total = a[d].scale(d)
        for i in range(1, d):
            total = total - (c[i] * a[d - i]).scale(i)
        c.append(total.scale(Fraction(1, d)))
    return c


def trace_json(labels: Sequence[int], N: int) -> str:
    names = [f"z{i + 1}" for i in range(len(labels))]
    return json.dumps(connected_e_trace(labels, names, N), sort_keys=True)
