from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from yangkit.exact import Q, is_zero
from yangkit.liemod import build_affine, build_finite, build_verma, parse_weight
from yangkit.rootdata import all_reduced_words, datum_for, positive_roots
from yangkit.verify import check
from yangkit.yangops import (Inconclusive, JOperators, MissingOperator, YangianTower, c_alpha_i,
                             c_base, evaluation_action, generate_tower, hkey, lie_tower_level0,
                             solve_shifts, tau_conjugate, v_op, w_from_v, w_ops, xkey)
from yangkit.liemod import VectorModule


def hand_tower(N, a, shifts, R):
    """Level r acts as (a + c_i)^r times level 0, built without the library helpers."""
    L = build_finite(N)
    V = VectorModule(L)
    base = lie_tower_level0(V)
    ops = {}
    for (kind, *rest), op in base.items():
        lab = rest[-2] if kind == "x" else rest[0]
        for r in range(R + 1):
            key = (kind, *rest[:-1], r)
            ops[key] = op.scale((a + shifts[lab]) ** r)
    return YangianTower(V, R, ops)


def test_node_shifts():
    assert solve_shifts(VectorModule(build_finite(3))) == {1: 0, 2: Fraction(1, 2)}
    assert solve_shifts(VectorModule(build_finite(4))) == {1: 0, 2: Fraction(1, 2), 3: 1}


@pytest.mark.parametrize("shifts,expect", [({1: 0, 2: Q(1, 2)}, "pass"), ({1: 0, 2: 0}, "fail"),
                                            ({1: 0, 2: Q(-1, 2)}, "fail")])
def test_shift_is_forced_by_exhx(shifts, expect):
    tw = hand_tower(3, Q(1, 3), shifts, 2)
    res = check(tw, "exHX", {"i": 1, "j": 2, "r": 0, "s": 0, "sign": 1})
    assert res.status == expect


def test_evaluation_matches_hand_tower():
    a = Q(2, 7)
    tw = evaluation_action(3, a, 3)
    hand = hand_tower(3, a, tw.meta["shifts"], 3)
    for key, op in hand.ops.items():
        assert tw.get(key).mat.entries() == op.mat.entries(), key


def test_recursion_reproduces_closed_form():
    tw = evaluation_action(4, Q(-5, 3), 4)
    gen = generate_tower(tw.module, tw.minimal(), 4)
    for key in tw.ops:
        assert is_zero((tw.get(key) - gen.get(key)).mat)[0], key


def test_xx_on_evaluation_module():
    tw = evaluation_action(3, Q(1, 2), 3)
    assert check(tw, "XX", {"i": 1, "j": 1, "r": 2, "s": 1}).status == "pass"
    assert check(tw, "HH", {"i": 2, "j": 2, "r": 1, "s": 1}).status == "pass"


def test_missing_level_is_inconclusive():
    tw = evaluation_action(3, Q(1, 2), 1)
    with pytest.raises(MissingOperator):
        tw.h(1, 2)
    assert check(tw, "XX", {"i": 1, "j": 1, "r": 1, "s": 1}).status == "inconclusive"


def test_w_from_v_on_verma():
    L = build_affine(3)
    V = build_verma(L, parse_weight(L, [1, "1/2", -2, "3/5"]), 3)
    for i in L.datum.labels:
        wp, wm = w_ops(V, i)
        for sg, w in ((1, wp), (-1, wm)):
            st_, wit, win = (w - w_from_v(V, i, sg)).check_zero()
            assert st_ == "pass" and win is not None


def test_tau_swaps_raising_and_lowering():
    tw = evaluation_action(3, Q(1), 1)
    M, L = tw.module, tw.module.realization
    for i in (1, 2):
        img = tau_conjugate(M, i, M.act(L.x_plus(i)))
        assert is_zero((img + M.act(L.x_minus(i))).mat)[0] or is_zero((img - M.act(L.x_minus(i))).mat)[0]
        assert img.degree == tuple(-c for c in M.datum.simple(M.datum.node(i)))


def test_tau_needs_finite_dimensional_module():
    L = build_finite(3)
    V = build_verma(L, (Q(1), Q(1)), 2)
    with pytest.raises(Inconclusive):
        tau_conjugate(V, 1, V.act(L.x_plus(1)))


def test_j_of_h_is_h1_plus_v():
    tw = evaluation_action(3, Q(1, 2), 1)
    J = JOperators(tw)
    for i in (1, 2):
        assert is_zero((J.Jh(i) - tw.h(i, 1) - v_op(tw.module, i)).mat)[0]


def test_c_base_case():
    # c_{alpha_j, i} = delta_{i+1,j} - delta_{i-1,j} on Z/3
    table = [[c_base(3, j, i) for i in range(3)] for j in range(3)]
    assert table == [[0, -1, 1], [1, 0, -1], [-1, 1, 0]]


def test_c_alpha_depends_on_word_only_through_a_root_shift():
    # hand computation for alpha = alpha_0 + alpha_1 along s_0(alpha_1) and s_1(alpha_0)
    dat = datum_for("A2affine")
    via0 = [c_alpha_i(dat, (1, 1, 0), i, (0,), 1) for i in range(3)]
    via1 = [c_alpha_i(dat, (1, 1, 0), i, (1,), 0) for i in range(3)]
    assert via0 == [-1, 0, 1]
    assert via1 == [0, 1, -1]
    pairing = [dat.inner(dat.simple(i), (1, 1, 0)) for i in range(3)]
    assert [x - y for x, y in zip(via0, via1)] == [-p for p in pairing]


@given(st.integers(2, 6), st.data())
def test_c_alpha_sums_to_zero(H, data):
    dat = datum_for("A2affine")
    real = [r for r in positive_roots(dat, H) if r.kind == "real"]
    root = data.draw(st.sampled_from(real))
    for w in all_reduced_words(dat, root.coords):
        assert sum(c_alpha_i(dat, root.coords, i, w.word, w.terminal) for i in range(3)) == 0


def test_tower_keys():
    assert xkey(-1, 2, 3) == ("x", -1, 2, 3) and hkey(1, 0) == ("h", 1, 0)
