import json
from fractions import Fraction
from math import factorial

import pytest

from wpline.gw import (
    disconnected_series,
    divisor_check,
    extract_invariant,
    gw_json,
    invariant_table,
    normalization_factor,
    stationary_series,
    table_csv,
)
from wpline.series import SeriesError
from wpline.wedge import connected_from_disconnected


@pytest.mark.parametrize("d", [1, 2, 3])
def test_genus_zero_one_point(d):
    # classical value for P^1: <tau_{2d-2}(pt)>_{0,d} = 1/(d!)^2
    gs = stationary_series(1, d, 1, 2 * d - 1)
    assert extract_invariant(gs, 0, (2 * d - 2,)).value == Fraction(1, factorial(d) ** 2)


def test_dimension_constraint_r1():
    # for P^1 the stationary one-point invariants live in k = 2g - 2 + 2d
    for inv in invariant_table(1, 3, 1, 7):
        assert inv.k[0] == 2 * inv.g - 2 + 2 * inv.d


def test_two_point_genus_zero_degree_one():
    # <tau_0(pt) tau_0(pt)>_{0,1} = 1 (one line through two points)
    gs = stationary_series(1, 1, 2, 2)
    assert extract_invariant(gs, 0, (0, 0)).value == 1


def test_connected_matches_character_route():
    r, D, zorder = 2, 2, 4
    dis = {frozenset(): [disconnected_series(r, d, 0, zorder) for d in range(D + 1)],
           frozenset(["z1"]): [disconnected_series(r, d, 1, zorder) for d in range(D + 1)]}
    con = connected_from_disconnected(dis, ["z1"], D)
    for d in range(D + 1):
        assert (con[frozenset(["z1"])][d] - stationary_series(r, d, 1, zorder).series).is_zero()


def test_extract_rejects_out_of_order():
    gs = stationary_series(1, 1, 1, 2)
    with pytest.raises(SeriesError):
        extract_invariant(gs, 0, (5,))
    with pytest.raises(SeriesError):
        extract_invariant(gs, 0, (0, 0))


@pytest.mark.parametrize("r,d,n", [(1, 1, 1), (1, 2, 2), (2, 2, 1), (3, 1, 2)])
def test_divisor(r, d, n):
    assert divisor_check(r, d, n, 3)


def test_normalization_factor_r1():
    f = normalization_factor(1, 0, 2, 0)
    assert f.coeff(qd=0, h=0) == 1
    assert f.coeff(qd=1, h=-2) == 1
    assert f.coeff(qd=2, h=-4) == Fraction(1, 2)


def test_normalization_factor_r2():
    f = normalization_factor(2, 1, 1, 2)
    assert f.coeff(qd=0, h=1) == Fraction(-1, 24)
    assert f.coeff(qd=0, h=2) == Fraction(1, 1152)


def test_exports():
    rows = invariant_table(1, 2, 1, 3)
    text = table_csv(rows)
    assert text.splitlines()[0] == "r,g,d,k,numerator,denominator"
    obj = json.loads(gw_json(rows))
    assert obj["schema"] == "wpline/1" and len(obj["invariants"]) == len(rows)
