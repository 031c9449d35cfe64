from fractions import Fraction

import pytest

from yangkit.coprod import (Coproduct, OperatorSeries, coassociativity_pair, generalized_casimir,
                            omega, omega_minus, omega_plus, tensor_coproduct)
from yangkit.exact import Q, is_zero
from yangkit.liemod import build_finite, build_verma, tensor
from yangkit.rootdata import positive_roots
from yangkit.yangops import evaluation_action, h_tilde1


@pytest.fixture(scope="module")
def pair():
    L = build_finite(3)
    return evaluation_action(3, Q(1, 2), 1, L), evaluation_action(3, Q(-2, 3), 1, L)


def casimir(V):
    """sum_k u^k u_k + sum_{a>0} (x_-a x_a + x_a x_-a), assembled from the Lie action."""
    L, dat = V.realization, V.datum
    gi = dat.cartan_gram_inverse()
    dim = dat.cartan_dim
    acc = V.zero()
    for k in range(dim):
        unit = [Q(1) if m == k else Q(0) for m in range(dim)]
        acc = acc + V.cartan_op([Q(x) for x in gi[k]]) @ V.cartan_op(unit)
    for root in positive_roots(dat, 10):
        xs, duals = L.root_space_basis(root.coords)
        for x, y in zip(xs, duals):
            acc = acc + V.act(y) @ V.act(x) + V.act(x) @ V.act(y)
    return acc


def test_full_casimir_splits_across_tensor(pair):
    t1, t2 = pair
    T = tensor(t1.module, t2.module)
    lhs = casimir(T)
    rhs = T.left(casimir(t1.module)) + T.right(casimir(t2.module)) + omega(T).scale(2)
    assert is_zero((lhs - rhs).mat)[0]


def test_half_casimirs_have_degree_zero(pair):
    T = tensor(pair[0].module, pair[1].module)
    assert omega_plus(T).degree == (0, 0) and omega_minus(T).degree == (0, 0)


def test_casimir_scalar_on_vector_module(pair):
    # (lambda + 2 rho, lambda) for lambda = omega_1 of sl3: 2/3 + 2 = 8/3
    V = pair[0].module
    G = generalized_casimir(V)
    assert G.mat.entries() == {(b, b): Q(8, 3) for b in V.basis}


def test_generalized_casimir_eigenvalue_on_verma():
    # inverse Cartan matrix of sl3 is [[2,1],[1,2]] / 3; lambda = (1, 2) in the h-basis
    L = build_finite(3)
    V = build_verma(L, (Q(1), Q(2)), 2)
    lam = [Fraction(1), Fraction(2)]
    ainv = [[Fraction(2, 3), Fraction(1, 3)], [Fraction(1, 3), Fraction(2, 3)]]
    ip = lambda x, y: sum(x[i] * ainv[i][j] * y[j] for i in range(2) for j in range(2))
    two_rho = [Fraction(2), Fraction(2)]
    want = ip([l + r for l, r in zip(lam, two_rho)], lam)
    G = generalized_casimir(V)
    assert G.mat.col(V.basis[0]) == {V.basis[0]: want}


def test_x_images_match_recursion(pair):
    cop = tensor_coproduct(*pair)
    a_ii = 2
    for i in (1, 2):
        ht = cop.image(("ht", i))
        for sg in (1, -1):
            rec = ht.comm(cop.image(("x", sg, i, 0))).scale(Q(sg, a_ii))
            assert is_zero((cop.image(("x", sg, i, 1)) - rec).mat)[0]


def test_negated_lowering_commutator_breaks_recursion(pair):
    cop = tensor_coproduct(*pair, mutation="xminus_minus_sign")
    ht = cop.image(("ht", 1))
    rec = ht.comm(cop.image(("x", -1, 1, 0))).scale(Q(-1, 2))
    assert not is_zero((cop.image(("x", -1, 1, 1)) - rec).mat)[0]


def test_h_tilde_image(pair):
    cop = tensor_coproduct(*pair)
    for i in (1, 2):
        lhs = cop.image(("ht", i))
        rhs = h_tilde1(cop.image(("h", i, 0)), cop.image(("h", i, 1)))
        assert is_zero((lhs - rhs).mat)[0]


def test_coassociativity(pair):
    t3 = evaluation_action(3, Q(5), 1, pair[0].module.realization)
    for i in (1, 2):
        left, right = coassociativity_pair(pair[0], pair[1], t3, i)
        assert is_zero((left - right).mat)[0]


def test_unknown_mutation(pair):
    with pytest.raises(ValueError):
        tensor_coproduct(*pair, mutation="nope")


def test_series_is_lazy_and_cached():
    L = build_finite(4)
    V = build_verma(L, (Q(1), Q(0), Q(2)), 2)
    T = tensor(V, V, 2)
    ser = OperatorSeries(T, "plus")
    assert ser.materialized == []
    top = (V.basis[0], V.basis[0])
    ser.apply({top: Q(1)})
    assert ser.touched == {0}
    first = ser.term(1)
    assert ser.term(1) is first
    assert ser.materialized.count(1) == 1


def test_level_one_needs_a_tower():
    from yangkit.yangops import MissingOperator
    L = build_finite(3)
    V = build_verma(L, (Q(1), Q(1)), 2)
    cop = Coproduct(tensor(V, V, 2))
    assert cop.image(("h", 1, 0)).mat.cols
    with pytest.raises(MissingOperator):
        cop.image(("h", 1, 1))
