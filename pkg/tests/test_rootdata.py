from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from yangkit.liemod import build_affine
from yangkit.rootdata import (GCMError, UnsupportedKind, all_reduced_words, classify, datum_for,
                              dual_coxeter, killing_check, make_datum, positive_roots, reduced_word,
                              replay)


def test_classify_examples():
    assert classify([[2, -1], [-1, 2]]) == ("finite", (1, 1))
    assert classify([[2, -2], [-2, 2]]) == ("affine", (1, 1))
    # det = 4 - 4 = 0: affine (type A_2^(2)), symmetrizer from d_1 a_12 = d_2 a_21
    assert classify([[2, -1], [-4, 2]]) == ("affine", (4, 1))
    assert classify([[2, -3], [-3, 2]])[0] == "indefinite"


def test_invalid_gcm():
    with pytest.raises(GCMError):
        classify([[2, 1], [-1, 2]])
    with pytest.raises(GCMError):
        classify([[2, -1], [0, 2]])


def test_roots_sl3():
    roots = positive_roots(datum_for("A2"), 3)
    assert sorted(r.coords for r in roots) == [(0, 1), (1, 0), (1, 1)]
    assert all(r.kind == "real" for r in roots)


def test_delta_multiplicity():
    dat = datum_for("A2affine")
    by = {r.coords: r for r in positive_roots(dat, 3)}
    assert by[(1, 1, 1)].kind == "imaginary" and by[(1, 1, 1)].multiplicity == 2


@pytest.mark.parametrize("name", ["A2", "A3", "A2affine", "A3affine"])
def test_height_one_is_simple(name):
    dat = datum_for(name)
    roots = positive_roots(dat, 1)
    assert sorted(r.coords for r in roots) == sorted(dat.simple(k) for k in range(dat.rank))
    assert all(r.multiplicity == 1 for r in roots)


def affine_roots_oracle(n, H):
    """alpha + k delta for finite roots of sl_n, plus k delta with multiplicity n - 1."""
    fin = [(a, b) for a in range(1, n) for b in range(a, n)]  # alpha_a + ... + alpha_b
    out = {}
    for k in range(H + 1):
        for a, b in fin:
            for sgn in (1, -1):
                if sgn < 0 and k == 0:
                    continue
                c = [k] * n
                for j in range(a, b + 1):
                    c[j] += sgn
                if sum(c) <= H:
                    out[tuple(c)] = 1
        if k and n * k <= H:
            out[(k,) * n] = n - 1
    return out


@pytest.mark.parametrize("n", [3, 4])
def test_affine_roots_against_loop_description(n):
    dat = datum_for(f"A{n - 1}affine")
    got = {r.coords: r.multiplicity for r in positive_roots(dat, 7)}
    assert got == affine_roots_oracle(n, 7)
    assert got == build_affine(n).enumerate_positive_roots(7)


def test_reduced_word_examples():
    dat = datum_for("A2")
    e = reduced_word(dat, (1, 0))
    assert e.word == () and dat.labels[e.terminal] == 1
    e = reduced_word(dat, (1, 1))
    assert [dat.labels[k] for k in e.word] == [1] and dat.labels[e.terminal] == 2
    aff = datum_for("A2affine")
    e = reduced_word(aff, (1, 2, 1))
    assert len(e.word) >= 2 and replay(aff, e.word, e.terminal) == (1, 2, 1)
    with pytest.raises(ValueError):
        reduced_word(aff, (1, 1, 1))


@given(st.sampled_from(["A2", "A3", "A4", "A2affine", "A3affine"]), st.integers(1, 6), st.data())
def test_every_stored_word_replays(name, H, data):
    dat = datum_for(name)
    real = [r for r in positive_roots(dat, H) if r.kind == "real"]
    root = data.draw(st.sampled_from(real))
    for w in all_reduced_words(dat, root.coords):
        assert replay(dat, w.word, w.terminal) == root.coords
        assert len(w.word) == len(reduced_word(dat, root.coords).word)


@given(st.sampled_from(["A3", "A2affine"]), st.data())
def test_reflections_are_isometries(name, data):
    dat = datum_for(name)
    vec = st.lists(st.integers(-4, 4), min_size=dat.rank, max_size=dat.rank)
    x, y = data.draw(vec), data.draw(vec)
    k = data.draw(st.integers(0, dat.rank - 1))
    assert dat.inner(dat.reflect(x, k), dat.reflect(y, k)) == dat.inner(x, y)


def test_dual_coxeter_and_killing():
    assert dual_coxeter(datum_for("A2")) == 3
    assert dual_coxeter(datum_for("A3")) == 4
    assert dual_coxeter(datum_for("A2affine")) == 3
    assert killing_check(datum_for("A2")) and killing_check(datum_for("A3"))
    with pytest.raises(UnsupportedKind):
        killing_check(datum_for("A2affine"))


def test_indefinite_roots_unsupported():
    dat = make_datum([[2, -3], [-3, 2]])
    with pytest.raises(UnsupportedKind):
        positive_roots(dat, 2)


def test_form_normalization():
    dat = datum_for("A2")
    assert dat.inner(dat.simple(0), dat.simple(0)) == Fraction(2)
    assert dat.inner(dat.simple(0), dat.simple(1)) == Fraction(-1)
    aff = datum_for("A2affine")
    assert all(aff.inner(aff.delta, aff.simple(k)) == 0 for k in range(3))
