from fractions import Fraction
from math import factorial

import pytest

from wpline.series import TruncSeries, Var, inv_zeta_coeffs
from wpline.wedge import (
    FockState,
    apply_alpha,
    apply_e,
    commutator_check_alpha,
    commutator_check_ee,
    commutator_check_w_alpha,
    commutator_check_ww,
    connected_e,
    connected_from_disconnected,
    connected_vev_recursion,
    disconnected_from_connected,
    disconnected_vev_char_sum,
    e_eigenvalue,
    maya,
    set_partitions,
    trace_json,
    w_vev,
    w_vev_fock,
    weighted_set_partitions,
)


def fock_vev(labels, names, N):
    """<0| E_{a_1}(z_1) ... E_{a_n}(z_n) |0> by applying operators right to left."""
    state = FockState.vacuum()
    for a, x in reversed(list(zip(labels, names))):
        state = apply_e(state, a, N, x)
    return state.coeff(())


def test_alpha_creates_signed_strips():
    v = apply_alpha(FockState.vacuum(), -2)
    assert v.coeff((2,)) == 1 and v.coeff((1, 1)) == -1


def test_alpha_heisenberg_pairing():
    v = apply_alpha(apply_alpha(FockState.vacuum(), -3), 3)
    assert v.coeff(()) == 3


def test_maya_window():
    assert maya((2, 1), 3) == [Fraction(3, 2), Fraction(-1, 2), Fraction(-5, 2)]


def test_empty_eigenvalue_is_regularization():
    e = e_eigenvalue((), 6)
    ref = TruncSeries.univariate(Var("z", -1, 6), inv_zeta_coeffs(6))
    assert e == ref


@pytest.mark.parametrize("labels", [(1, -1), (2, -2), (3, -3), (2, -1, -1), (1, 1, -2), (3, -1, -2)])
def test_recursion_against_fock(labels):
    names = [f"z{i + 1}" for i in range(len(labels))]
    N = 4
    rec = connected_e(labels, names, N)
    fock = fock_vev(labels, names, N)
    assert rec.agrees_with(fock.with_vars(tuple(Var(x, -1, N) for x in names)))


@pytest.mark.parametrize("r,s,n", [(1, 1, 1), (2, 1, -1), (1, 2, 2), (2, 2, -3)])
def test_w_alpha_commutator(r, s, n):
    assert commutator_check_w_alpha(r, s, n, 6)


@pytest.mark.parametrize("r,s,p,q", [(1, 1, -1, 1), (2, 1, -1, 2), (1, 2, 1, 1)])
def test_ww_commutator(r, s, p, q):
    assert commutator_check_ww(r, s, p, q, 5)


def test_alpha_commutators():
    for i in range(-3, 4):
        for j in range(-3, 4):
            if i and j:
                assert commutator_check_alpha(i, j, 6)


@pytest.mark.parametrize("a,b", [(1, -1), (2, -1), (1, 1)])
def test_ee_commutator(a, b):
    assert commutator_check_ee(a, b, 2, 4)


@pytest.mark.parametrize("r,d,k", [(1, 2, (2,)), (2, 1, (1,)), (2, 2, (2, 2)), (3, 1, (3,)), (2, 2, (1, 2))])
def test_w_vev_two_routes(r, d, k):
    assert w_vev(r, d, k) == w_vev_fock(r, d, k)


def test_set_partition_counts():
    bell = [1, 1, 2, 5, 15, 52]
    for n, b in enumerate(bell):
        assert len(set_partitions(list(range(n)))) == b


def test_weighted_partitions_nonempty():
    assert weighted_set_partitions(["a"], 0)[0].blocks == (("a",),)
    assert len(weighted_set_partitions([], 2)) == 2  # {empty deg 2}, {deg 1, deg 1}


def test_connected_disconnected_roundtrip():
    points = ["w1", "w2"]
    r, D, N = 1, 2, 3
    dis = {}
    for sub in ([], ["w1"], ["w2"], ["w1", "w2"]):
        dis[frozenset(sub)] = [disconnected_vev_char_sum(r, d, sub, N)
                               .scale(Fraction(1, factorial(d) * factorial(r * d))) for d in range(D + 1)]
    con = connected_from_disconnected(dis, points, D)
    back = disconnected_from_connected(con, points, D)
    for key, series in dis.items():
        for d in range(D + 1):
            assert (back[key][d] - series[d]).is_zero()


def test_recursion_matches_character_route_small():
    names = ["w1", "w2"]
    dis = {}
    for sub in ([], ["w1"], ["w2"], ["w1", "w2"]):
        dis[frozenset(sub)] = [disconnected_vev_char_sum(2, d, sub, 4)
                               .scale(Fraction(1, factorial(d) * factorial(2 * d))) for d in range(3)]
    con = connected_from_disconnected(dis, names, 2)
    for d in range(3):
        rec = connected_vev_recursion(2, d, names, 4)
        assert (rec - con[frozenset(names)][d].scale(factorial(d) * factorial(2 * d))).is_zero()


def test_trace_json_is_deterministic():
    assert trace_json([2, -1, -1], 3) == trace_json([2, -1, -1], 3)
    assert '"labels"' in trace_json([2, -1, -1], 3)
