import json

import pytest
from hypothesis import given, settings, strategies as st

from yangkit.coprod import tensor_coproduct
from yangkit.exact import Q, poly_backend
from yangkit.liemod import build_affine, build_verma, parse_weight
from yangkit.rootdata import datum_for
from yangkit.verify import (Hh, Templates, X, anti, check, comm, equiv_residuals, evaluate, expand,
                            nested_serre, run_suite, synthetic_level1, truncation_soundness)
from yangkit.yangops import evaluation_action


def fails(rep):
    return [c for c in rep["cases"] if c["status"] == "fail"]


def test_expression_matches_direct_products():
    tw = evaluation_action(3, Q(1, 2), 2)
    e = anti(Hh(1, 1), X(1, 2, 0)) - Q(3) * comm(X(1, 1, 2), X(-1, 2, 1))
    got = evaluate(e, tw.get)
    h, x = tw.h(1, 1), tw.x(1, 2, 0)
    want = h @ x + x @ h - (tw.x(1, 1, 2) @ tw.x(-1, 2, 1) - tw.x(-1, 2, 1) @ tw.x(1, 1, 2)).scale(3)
    assert (got - want).mat.entries() == {}


def test_serre_expansion_counts_permutations():
    poly = expand(nested_serre(1, 1, 2, (0, 1), 0))
    # 2 orderings of the outer letters, each nested commutator expands to 4 words
    assert sum(abs(v) for v in poly.values()) == 8


def test_check_examples():
    tw = evaluation_action(3, Q(1, 2), 3)
    assert check(tw, "XX", {"i": 1, "j": 1, "r": 2, "s": 1}).status == "pass"
    assert check(tw, "HH", {"i": 2, "j": 2, "r": 3, "s": 3}).status == "pass"
    L = tw.module.realization
    cop = tensor_coproduct(tw, evaluation_action(3, Q(3, 4), 1, L))
    resolve = lambda k: cop.image(k if k[0] == "h" else ("x", k[1], k[2], k[3]))
    res = check(resolve, "exXX", {"i": 1, "j": 2, "r": 0, "s": 0, "sign": 1}, datum=L.datum)
    assert res.status == "pass"


def test_report_schema_and_determinism():
    a = run_suite("minimal", {"algebra": "A2", "seed": 5})
    b = run_suite("minimal", {"algebra": "A2", "seed": 5})
    assert json.dumps(a) == json.dumps(b)
    assert set(a) == {"suite", "config", "cases", "summary"}
    assert set(a["summary"]) == {"pass", "fail", "inconclusive"}
    for c in a["cases"]:
        assert {"relation", "params", "status"} <= set(c)


def test_inconclusive_is_not_a_pass():
    rep = run_suite("defining", {"algebra": "A2affine"})
    assert rep["summary"]["pass"] == 0 and rep["summary"]["inconclusive"] > 0
    rep = run_suite("coproduct", {"algebra": "A2affine", "depth": 2})
    touched = {c["relation"] for c in rep["cases"] if c["status"] == "inconclusive"}
    assert "exHX2'" in touched
    assert not fails(rep)


@pytest.mark.parametrize("mutation", ["drop_hh", "flip_omega", "xminus_minus_sign"])
def test_coproduct_negative_controls(mutation):
    rep = run_suite("coproduct", {"algebra": "A2", "rmax": 1}, mutation=mutation)
    bad = fails(rep)
    assert bad and all("value" in c["witness"] for c in bad)
    assert rep["config"]["mutation"] == mutation


def test_flipped_twelfth_is_detected():
    rep = run_suite("derived", {"algebra": "A2"}, mutation="flip_twelfth")
    assert {c["relation"] for c in fails(rep)} == {"HT2X"}


def test_unknown_mutation_rejected():
    with pytest.raises(ValueError):
        run_suite("lie", {}, mutation="drop_hh")


def test_eps_templates_reduce_and_differ():
    T = Templates(datum_for("A2affine"))
    eps = poly_backend(["eps"]).param("eps")
    ve = expand(T.exHX(0, 1, 1, 0, 1, eps, +1))
    plain = expand(T.exHX(0, 1, 1, 0, 1))
    assert ve != plain
    at0 = {w: c.subs(c.ring.gens[0], 0) if hasattr(c, "ring") else c for w, c in ve.items()}
    assert {w: c for w, c in at0.items() if c} == plain


def test_flipped_equivalence_sign_is_inconsistent():
    L = build_affine(3)
    V = build_verma(L, parse_weight(L, [1, 2, 3, "1/3"]), 3)
    H1, X1 = synthetic_level1(V, 0)
    eps = Q(2, 5)
    for name, s, eq, rel in equiv_residuals(V, 0, eps, H1, X1):
        assert (eq - rel).check_zero()[0] == "pass"
    printed = equiv_residuals(V, 0, eps, H1, X1, flipped_eps=True)
    assert any((eq - rel).check_zero()[0] == "fail" for name, s, eq, rel in printed if name != "EQUIV3")


@settings(max_examples=6)
@given(st.integers(0, 10 ** 6))
def test_defining_suite_at_random_parameters(seed):
    rep = run_suite("defining", {"algebra": "A2", "rmax": 2, "seed": seed})
    assert rep["summary"]["fail"] == 0 and rep["summary"]["inconclusive"] == 0


@settings(max_examples=4)
@given(st.integers(0, 10 ** 6))
def test_coproduct_suite_at_random_parameters(seed):
    rep = run_suite("coproduct", {"algebra": "A2", "rmax": 1, "seed": seed})
    assert rep["summary"]["fail"] == 0


def test_symbolic_backend_agrees():
    rep = run_suite("minimal", {"algebra": "A3", "backend": "poly"})
    assert rep["summary"]["fail"] == 0 and rep["summary"]["inconclusive"] == 0


def test_truncation_soundness_sampler_covers_families():
    rows = truncation_soundness({"algebra": "A2affine", "depth": 2}, 10)
    assert len(rows) >= 10 and all(r["agree"] for r in rows)
    assert {"PART2CANCEL", "VW5", "SQ2"} <= {r["relation"] for r in rows}


def test_finite_lie_suite_has_no_failures():
    rep = run_suite("lie", {"algebra": "A2", "depth": 2})
    assert rep["summary"]["fail"] == 0 and rep["summary"]["inconclusive"] == 0
