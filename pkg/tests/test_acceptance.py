"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction
from math import factorial

import pytest

from wpline.bilinear import (
    bilinear_identity_check,
    canonical_basis_b,
    cbl_identity,
    closed_to_matrix,
    two_point_closed,
)
from wpline.gw import divisor_check, extract_invariant, stationary_series
from wpline.partitions import centralizer_size, character_table, enumerate_partitions
from wpline.series import TruncSeries, Var, shift_x
from wpline.wave import (
    l_coefficients,
    quantum_curve_apply,
    s_inf_series,
    s_inf_stirling,
    three_term_check,
    wave_closed,
    xd_identity_holds,
)
from wpline.wedge import (
    commutator_check_alpha,
    commutator_check_w_alpha,
    commutator_check_ww,
    connected_from_disconnected,
    connected_vev_recursion,
    disconnected_vev_char_sum,
    w_vev,
)

RING_SEEDS = (11, 2024, 31337, 424242, 7)

RESULTS = {}


def record(number, ok, detail, elapsed):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  ({elapsed:.2f} s)  {detail}"
    RESULTS[number] = line
    print(line)
    return ok


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


# ---------------------------------------------------------------- criteria
def criterion_1():
    def run():
        three = all(three_term_check(r, d) for r in (1, 2, 3, 4) for d in range(1, 7))
        curve = all(quantum_curve_apply(r, wave_closed(r, 6)).is_zero_through(5) for r in (1, 2, 3, 4))
        return three, curve
    (three, curve), el = timed(run)
    ok = three and curve and el < 1
    return record(1, ok, f"three-term={three} curve-through-q5={curve} limit 1 s", el)


def criterion_2():
    def run():
        return {r: xd_identity_holds(r, 3, 15) for r in (1, 2, 3)}
    res, el = timed(run)
    ok = all(res.values()) and el < 10
    return record(2, ok, f"X_d identity by r: {res}; r=1 normalized through q^3; limit 10 s", el)


def criterion_3():
    def run():
        bad = []
        for r in (2, 3):
            for d in (1, 2, 3):
                c = l_coefficients(r, d)
                if c[0] != (-1) ** d or any(v != 0 for v in c[1:]):
                    bad.append((r, d))
        return bad
    bad, el = timed(run)
    return record(3, not bad, f"[x^0]L=(-1)^d h^(rd), other coefficients 0; failures {bad}", el)


def _compositions(total):
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def criterion_4():
    pairs = [(1, 2), (1, 3), (2, 1), (2, 2), (3, 1)]

    def run():
        failures = []
        for r, d in pairs:
            for s in range(1, r * d):
                for k in _compositions(s):
                    v = w_vev(r, d, k)
                    if v != 0:
                        failures.append(f"D({r},{d},{k})={v}")
            top = w_vev(r, d, (r,) * d)
            want = factorial(d) * factorial(r * d) * r ** d
            if top != want:
                failures.append(f"D({r},{d},{(r,) * d})={top} expected {want}")
        return failures
    failures, el = timed(run)
    ok = not failures and el < 5
    return record(4, ok, "vanishing and normalization; " + ("all hold" if not failures
                                                              else "failures: " + "; ".join(failures)), el)


def criterion_5():
    def run():
        bad = []
        for r in (1, 2):
            for n in range(0, 4):
                names = [f"w{i + 1}" for i in range(n)]
                dis = {}
                for mask in range(1 << n):
                    sub = [p for i, p in enumerate(names) if mask >> i & 1]
                    dis[frozenset(sub)] = [disconnected_vev_char_sum(r, d, sub, 6)
                                           .scale(Fraction(1, factorial(d) * factorial(r * d)))
                                           for d in range(3)]
                con = connected_from_disconnected(dis, names, 2)
                for d in range(3):
                    rec = connected_vev_recursion(r, d, names, 6)
                    via = con[frozenset(names)][d].scale(factorial(d) * factorial(r * d))
                    if not (rec - via).is_zero():
                        bad.append((r, d, n))
        return bad
    bad, el = timed(run)
    return record(5, not bad, f"recursion vs character sums, z-order 6; mismatches {bad}", el)


def criterion_6():
    def run():
        return [(r, d, n) for r in (1, 2, 3) for d in (0, 1, 2, 3) for n in (0, 1, 2)
                if not divisor_check(r, d, n, 4)]
    bad, el = timed(run)
    return record(6, not bad, f"factor (rd - 1/24); failures {bad}", el)


def criterion_7():
    def run():
        ident = {r: bilinear_identity_check(r, 8, 2) for r in (1, 2, 3)}
        same = {}
        for r in (1, 2, 3):
            closed = closed_to_matrix(two_point_closed(r, 8, 8, 2), 8, 2)
            same[r] = canonical_basis_b(r, 8, 2).equals(closed)
        return ident, same
    (ident, same), el = timed(run)
    ok = all(ident.values()) and all(same.values()) and el < 30
    return record(7, ok, f"A+- = B+- A-- {ident}; closed = inverted {same}; limit 30 s", el)


def criterion_8():
    ok, el = timed(lambda: s_inf_series(12).agrees_with(s_inf_stirling(12)))
    return record(8, ok, "Bernoulli form vs Stirling form through x^-12", el)


def criterion_9():
    bad, el = timed(lambda: [(d, k) for d in range(1, 9) for k in range(d) if cbl_identity(d, k) != 1])
    return record(9, not bad, f"all 0 <= k < d <= 8; failures {bad}", el)


def criterion_10():
    def run():
        return {d: extract_invariant(stationary_series(1, d, 1, 2 * d - 1), 0, (2 * d - 2,)).value
                for d in (1, 2, 3)}
    vals, el = timed(run)
    ok = all(v == Fraction(1, factorial(d) ** 2) for d, v in vals.items())
    return record(10, ok, "<tau_{2d-2}>_{0,d} = " + ", ".join(f"d={d}: {v}" for d, v in vals.items()), el)


def _random_series(rng, variables):
    terms = {}
    for i in range(variables[0].order + 1):
        for j in range(variables[1].order + 1):
            if rng.random() < 0.5:
                terms[(i, j)] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return TruncSeries(variables, terms)


def criterion_11():
    def run():
        parts = {}
        ortho = True
        for n in range(1, 9):
            ps = enumerate_partitions(n)
            table = character_table(n)
            for a, mu in enumerate(ps):
                for b in range(len(ps)):
                    col = sum(row[a] * row[b] for row in table)
                    ortho &= col == (centralizer_size(mu) if a == b else 0)
        parts["orthogonality"] = ortho
        parts["commutators"] = (
            all(commutator_check_w_alpha(r, s, m, 6) for r, s, m in [(1, 1, 1), (2, 1, -1), (1, 2, 2)])
            and all(commutator_check_ww(r, s, p, q, 6) for r, s, p, q in [(1, 1, -1, 1), (2, 1, -1, 2)])
            and all(commutator_check_alpha(i, j, 6) for i in (-2, -1, 1, 2) for j in (-2, -1, 1, 2)))
        vs = (Var("xi", None, 8), Var("h", None, None))
        a = TruncSeries(vs, {(1, 0): 1, (2, 0): Fraction(1, 2), (-1, 0): 3, (3, 1): -2})
        s, t = Fraction(1, 3), Fraction(-5, 2)
        parts["shift_x"] = (shift_x(shift_x(a, s), t) == shift_x(a, s + t)) and shift_x(a, 0) == a
        X, Y = Var("x", 0, 6), Var("y", 0, 4)
        ring = True
        for seed in RING_SEEDS:
            rng = random.Random(seed)
            p, q, r = (_random_series(rng, (X, Y)) for _ in range(3))
            ring &= (p * q) * r == p * (q * r) and p * (q + r) == p * q + p * r and p * q == q * p
        parts["ring_axioms"] = ring
        return parts
    parts, el = timed(run)
    return record(11, all(parts.values()), f"{parts}; seeds {RING_SEEDS}", el)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i + 1}" for i in range(len(CRITERIA))])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    outcomes = [check() for check in CRITERIA]
    sys.exit(0 if all(outcomes) else 1)
