"""Partitions, symmetric-group characters and the eigenvalue data attached
to partitions in the charge-zero Fock space.

Partitions are plain tuples of positive integers in weakly decreasing
order; the empty tuple is the vacuum.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence

from .series import TruncSeries, Var

Partition = tuple


def is_partition(lam) -> bool:
    return all(isinstance(p, int) and p > 0 for p in lam) and all(
        lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


def _check(lam) -> Partition:
    lam = tuple(lam)
    if not is_partition(lam):
        raise ValueError(f"not a partition: {lam}")
    return lam


def _parts_bounded(n: int, m: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for k in range(min(n, m), 0, -1):
        for rest in _parts_bounded(n - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple:
    """All partitions of n in reverse lexicographic order: (n), (n-1,1), ..."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return tuple(_parts_bounded(n, n))


def partition_count(n: int) -> int:
    """p(n) from Euler's pentagonal recurrence (independent of enumeration)."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


def _beta_set(lam: Partition, length: int) -> list:
    return [(lam[i] if i < len(lam) else 0) + length - 1 - i for i in range(length)]


def _from_beta(beta: Sequence[int]) -> Partition:
    b = sorted(beta, reverse=True)
    L = len(b)
    return tuple(v for v in (b[i] - (L - 1 - i) for i in range(L)) if v > 0)


def remove_border_strips(lam: Partition, k: int) -> list:
    """All (sign, mu) with mu obtained from lam by removing a k-border strip.

    sign is (-1)^(height of the strip).
    """
    L = len(lam) + k
    beta = _beta_set(lam, L)
    occupied = set(beta)
    out = []
    for b in beta:
        c = b - k
        if c >= 0 and c not in occupied:
            height = sum(1 for y in beta if c < y < b)
            rest = [y for y in beta if y != b] + [c]
            out.append(((-1) ** height, _from_beta(rest)))
    return out


def add_border_strips(lam: Partition, k: int) -> list:
    """All (sign, mu) with mu obtained from lam by adding a k-border strip."""
    L = len(lam) + k
    beta = _beta_set(lam, L)
    occupied = set(beta)
    out = []
    for b in beta:
        c = b + k
        if c not in occupied:
            height = sum(1 for y in beta if b < y < c)
            rest = [y for y in beta if y != b] + [c]
            out.append(((-1) ** height, _from_beta(rest)))
    return out


@lru_cache(maxsize=None)
def _mn(lam: Partition, mu: Partition) -> int:
    if not mu:
        return 1 if not lam else 0
    total = 0
    for sign, smaller in remove_border_strips(lam, mu[0]):
        total += sign * _mn(smaller, mu[1:])
    return total


def mn_character(lam, mu) -> int:
    """chi^lam evaluated on the conjugacy class of cycle type mu."""
    lam = _check(lam)
    mu = tuple(sorted(mu, reverse=True))
    _check(mu)
    if sum(lam) != sum(mu):
        raise ValueError("character needs |lam| = |mu|")
    return _mn(lam, mu)


def hook_length_dim(lam) -> int:
    lam = _check(lam)
    n = sum(lam)
    conj = conjugate(lam)
    hooks = prod(lam[i] - j + conj[j] - i - 1 for i in range(len(lam)) for j in range(lam[i]))
    return factorial(n) // hooks


def dim_partition(lam) -> int:
    """Number of standard Young tableaux, via characters and hook lengths."""
    lam = _check(lam)
    via_char = _mn(lam, (1,) * sum(lam))
    via_hooks = hook_length_dim(lam)
    if via_char != via_hooks:
        raise AssertionError(f"dimension mismatch for {lam}: {via_char} vs {via_hooks}")
    return via_char


def conjugate(lam) -> Partition:
    lam = tuple(lam)
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def centralizer_size(mu) -> int:
    """z_mu = prod_i i^{m_i} m_i!, the order of the centralizer of a permutation of type mu."""
    mu = tuple(mu)
    out = 1
    for i in set(mu):
        m = mu.count(i)
        out *= i ** m * factorial(m)
    return out


def modified_content(lam: Partition, i: int) -> Fraction:
    """lam_i - i + 1/2 (zero-padded), the i-th occupied Maya position."""
    li = lam[i - 1] if i <= len(lam) else 0
    return Fraction(2 * (li - i) + 1, 2)


def shifted_power_sum(lam, s: int) -> Fraction:
    """sum_i [(lam_i - i + 1/2)^s - (-i + 1/2)^s] over the rows of lam."""
    lam = _check(lam)
    if s < 0:
        raise ValueError("s must be non-negative")
    return sum((modified_content(lam, i) ** s - Fraction(1 - 2 * i, 2) ** s
                for i in range(1, len(lam) + 1)), Fraction(0))


def x_vars(N: int) -> tuple:
    """Standard variable set for expansions in 1/x with an exact hbar."""
    return (Var("xi", None, N), Var("h", None, None))


def content_product_eigen(lam, N: int) -> TruncSeries:
    """prod_{i <= len(lam)} (x + (i - lam_i) h)/(x + i h), expanded in xi = 1/x."""
    lam = _check(lam)
    vs = x_vars(N)
    out = TruncSeries.constant(1, vs)
    for i, li in enumerate(lam, start=1):
        out = out * linear_ratio(i - li, i, N)
    return out


@lru_cache(maxsize=None)
def linear_ratio(a: int, b: int, N: int) -> TruncSeries:
    """(x + a h)/(x + b h) = (1 + a h xi) * sum_j (-b h xi)^j through xi^N."""
    vs = x_vars(N)
    geo = {(j, j): Fraction(-b) ** j for j in range(N + 1)}
    g = TruncSeries(vs, geo)
    num = TruncSeries(vs, {(0, 0): 1, (1, 1): a})
    return num * g


def newton_to_elementary(p_values: Sequence, n: int) -> Fraction:
    """e_n from power sums p_1..p_n via the sum over cycle-type multiplicities."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if len(p_values) < n:
        raise ValueError(f"need {n} power sums, got {len(p_values)}")
    p = [Fraction(v) for v in p_values]
    total = Fraction(0)
    for mu in enumerate_partitions(n):
        term = Fraction(1)
        for i in set(mu):
            m = mu.count(i)
            term *= (-p[i - 1]) ** m / (factorial(m) * i ** m)
        total += term
    return (-1) ** n * total


def character_table(n: int) -> list:
    parts = enumerate_partitions(n)
    return [[_mn(lam, mu) for mu in parts] for lam in parts]


def character_table_csv(n: int) -> str:
    parts = enumerate_partitions(n)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda"] + [_fmt(mu) for mu in parts])
    for lam, row in zip(parts, character_table(n)):
        w.writerow([_fmt(lam)] + row)
    return buf.getvalue()


def _fmt(lam: Partition) -> str:
    return "(" + ",".join(map(str, lam)) + ")"
