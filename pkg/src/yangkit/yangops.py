"""Yangian generator towers on modules and the J-operator constructions."""
from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exact import Q, SparseMat, StructureError, is_zero
from .liemod import (GradedOperator, LieRealization, VectorModule, WeightModule,
                     build_finite)
from .rootdata import (RootDatum, dual_coxeter, max_height, positive_roots, reduced_word,
                       replay)

TowerKey = Tuple


class MissingOperator(LookupError):
    """An operator needed by a relation is not available in the context."""


class Inconclusive(RuntimeError):
    """A construction cannot be certified on the available window."""


def xkey(sign: int, label: int, r: int) -> TowerKey:
    return ("x", sign, label, r)


def hkey(label: int, r: int) -> TowerKey:
    return ("h", label, r)


class YangianTower:
    """Operators for x^{+-}_{i,r}, h_{i,r} (r <= R) on one module; hbar = 1."""

    def __init__(self, module: WeightModule, R: int, ops: Dict[TowerKey, GradedOperator],
                 meta: Optional[dict] = None):
        self.module = module
        self.R = R
        self.ops = dict(ops)
        self.meta = dict(meta or {})

    @property
    def labels(self) -> Tuple[int, ...]:
        return self.module.datum.labels

    def get(self, key: TowerKey) -> GradedOperator:
        try:
            return self.ops[key]
        except KeyError:
            raise MissingOperator(f"no operator for {key}") from None

    def x(self, sign: int, label: int, r: int) -> GradedOperator:
        return self.get(xkey(sign, label, r))

    def h(self, label: int, r: int) -> GradedOperator:
        return self.get(hkey(label, r))

    def minimal(self) -> Dict[TowerKey, GradedOperator]:
        """The minimal generating data x^{+-}_{i0}, h_{i0}, h_{i1}."""
        out = {}
        for lab in self.labels:
            for key in (xkey(1, lab, 0), xkey(-1, lab, 0), hkey(lab, 0), hkey(lab, 1)):
                out[key] = self.get(key)
        return out


# ----------------------------------------------------------------- helpers

def sq(a: GradedOperator) -> GradedOperator:
    return a @ a


def h_tilde1(h0: GradedOperator, h1: GradedOperator) -> GradedOperator:
    """h~_{i1} = h_{i1} - h_{i0}^2 / 2."""
    return h1 - sq(h0).scale(Q(1, 2))


def h_tilde2(h0: GradedOperator, h1: GradedOperator, h2: GradedOperator) -> GradedOperator:
    """h~_{i2} = h_{i2} - h_{i0} h_{i1} + h_{i0}^3 / 3."""
    return h2 - h0 @ h1 + (h0 @ h0 @ h0).scale(Q(1, 3))


def lie_tower_level0(module: WeightModule) -> Dict[TowerKey, GradedOperator]:
    L = module.realization
    ops = {}
    for lab in module.datum.labels:
        ops[xkey(1, lab, 0)] = module.act(L.x_plus(lab))
        ops[xkey(-1, lab, 0)] = module.act(L.x_minus(lab))
        ops[hkey(lab, 0)] = module.act(L.h0(lab))
    return ops


# ----------------------------------------------------------------- evaluation modules

def solve_shifts(module: VectorModule) -> Dict[int, object]:
    """Node shifts c_i from the relation [h_{i1},x_{j0}] - [h_{i0},x_{j1}] = +-(a_i,a_j)/2 {h_i,x_j}.

    With x_{j,r} = (a+c_j)^r x_j the left side is (c_i - c_j)[h_i, x_j], so
    every pair with [h_i, x_j] != 0 fixes c_i - c_j.
    """
    dat = module.datum
    L = module.realization
    labels = dat.labels
    diffs: Dict[Tuple[int, int], object] = {}
    for i in labels:
        hi = module.act(L.h0(i))
        for j in labels:
            if i == j:
                continue
            for sign, xel in ((1, L.x_plus(j)), (-1, L.x_minus(j))):
                xj = module.act(xel)
                lhs = hi.comm(xj).mat
                rhs = hi.anti(xj).mat.scale(sign * Q(dat.form[dat.node(i)][dat.node(j)]) / 2)
                if not lhs.cols:
                    if rhs.cols:
                        raise StructureError(f"shift solving inconsistent at ({i},{j})")
                    continue
                (rc, col), = [(c, col) for c, col in sorted(lhs.cols.items())[:1]]
                r = sorted(col)[0]
                ratio = rhs.col(rc).get(r, 0) / col[r]
                if not is_zero(lhs.scale(ratio) - rhs)[0]:
                    raise StructureError(f"shift solving: relation not proportional at ({i},{j})")
                if (i, j) in diffs and diffs[(i, j)] != ratio:
                    raise StructureError(f"shift solving inconsistent at ({i},{j})")
                diffs[(i, j)] = ratio
    shifts = {labels[0]: Q(0)}
    changed = True
    while changed:
        changed = False
        for (i, j), dij in diffs.items():
            if i in shifts and j not in shifts:
                shifts[j] = shifts[i] - dij
                changed = True
    for (i, j), dij in diffs.items():
        if shifts[i] - shifts[j] != dij:
            raise StructureError(f"shift solving inconsistent on cycle through ({i},{j})")
    if len(shifts) != len(labels):
        raise StructureError("shift solving left nodes undetermined")
    return shifts


def evaluation_action(N: int, a, R: int, realization: Optional[LieRealization] = None) -> YangianTower:
    """Evaluation tower on C^N: level-r generators act as (a + c_i)^r times level 0."""
    if N < 3:
        raise ValueError("evaluation modules are provided for N >= 3")
    L = realization or build_finite(N)
    V = VectorModule(L)
    shifts = solve_shifts(V)
    base = lie_tower_level0(V)
    ops = {}
    for lab in L.datum.labels:
        z = a + shifts[lab]
        p = Q(1)
        for r in range(R + 1):
            ops[xkey(1, lab, r)] = base[xkey(1, lab, 0)].scale(p)
            ops[xkey(-1, lab, r)] = base[xkey(-1, lab, 0)].scale(p)
            ops[hkey(lab, r)] = base[hkey(lab, 0)].scale(p)
            p = p * z
    return YangianTower(V, R, ops, {"shifts": shifts, "a": a, "kind": "evaluation"})


def generate_tower(module: WeightModule, base: Dict[TowerKey, GradedOperator], R: int) -> YangianTower:
    """Levels up to R from x^{+-}_{i0}, h_{i0}, h_{i1} by the recursion.

    x_{i,r+1} = +-(a_i,a_i)^{-1} [h~_{i1}, x_{i,r}] and h_{i,r} = [x+_{i,r}, x-_{i,0}].
    """
    dat = module.datum
    ops = dict(base)
    meta = {"h1_recursion": {}}
    if R == 0:
        return YangianTower(module, R, ops, meta)
    for lab in dat.labels:
        k = dat.node(lab)
        aii = Q(dat.form[k][k])
        ht = h_tilde1(base[hkey(lab, 0)], base[hkey(lab, 1)])
        for sign in (1, -1):
            cur = base[xkey(sign, lab, 0)]
            for r in range(R):
                cur = ht.comm(cur).scale(sign / aii)
                ops[xkey(sign, lab, r + 1)] = cur
        xm0 = base[xkey(-1, lab, 0)]
        meta["h1_recursion"][lab] = ops[xkey(1, lab, 1)].comm(xm0)
        for r in range(2, R + 1):
            ops[hkey(lab, r)] = ops[xkey(1, lab, r)].comm(xm0)
    return YangianTower(module, R, ops, meta)


# ----------------------------------------------------------------- root sums

def default_height(module: WeightModule) -> int:
    dat = module.datum
    if dat.kind == "finite":
        return max_height(dat)
    return (module.depth_cap or 0) + 2


def series_cap(module: WeightModule, H: int) -> Optional[int]:
    dat = module.datum
    if dat.kind == "finite" and H >= max_height(dat):
        return None
    return H


def root_terms(module: WeightModule, H: int, bases: Optional[dict] = None) -> List[tuple]:
    """[(root, [(x_alpha op, x_-alpha op, x_alpha elem, x_-alpha elem), ...]), ...] up to height H."""
    cache = module.__dict__.setdefault("_root_terms", {})
    ck = (H, id(bases) if bases else None)
    if ck in cache:
        return cache[ck]
    L = module.realization
    out = []
    for root in positive_roots(module.datum, H):
        custom = bases.get(root.coords) if bases else None
        xs, duals = L.root_space_basis(root.coords, custom)
        pairs = [(module.act(x), module.act(y), x, y) for x, y in zip(xs, duals)]
        out.append((root, pairs))
    cache[ck] = out
    return out


def _with_cap(op: GradedOperator, cap: Optional[int]) -> GradedOperator:
    if cap is None:
        return op
    return GradedOperator(op.module, op.mat, op.degree, op.lo, op.hi, op.reach,
                          cap if op.cap is None else min(cap, op.cap))


def v_op(module: WeightModule, label: int, H: Optional[int] = None) -> GradedOperator:
    """v_i = h^v h_i / 4 + 1/2 sum_{alpha real} (alpha,alpha_i) sum_k x_-a x_a - h_i^2 / 2."""
    H = default_height(module) if H is None else H
    cache = module.__dict__.setdefault("_v", {})
    if (label, H) in cache:
        return cache[(label, H)]
    dat = module.datum
    L = module.realization
    k = dat.node(label)
    hv = Q(dual_coxeter(dat))
    h = module.act(L.h0(label))
    acc = h.scale(hv / 4) - sq(h).scale(Q(1, 2))
    for root, pairs in root_terms(module, H):
        if root.kind != "real":
            continue
        coef = Q(dat.inner(root.coords, dat.simple(k)))
        if not coef:
            continue
        for xa, xma, _, _ in pairs:
            acc = acc + (xma @ xa).scale(coef / 2)
    out = _with_cap(acc, series_cap(module, H))
    cache[(label, H)] = out
    return out


def vt_op(module: WeightModule, label: int, H: Optional[int] = None) -> GradedOperator:
    """v~_i = v_i + h_i^2 / 2."""
    h = module.act(module.realization.h0(label))
    return v_op(module, label, H) + sq(h).scale(Q(1, 2))


def w_ops(module: WeightModule, label: int, H: Optional[int] = None) -> Tuple[GradedOperator, GradedOperator]:
    """(w_i^+, w_i^-) in the root-sum form, imaginary root spaces included."""
    H = default_height(module) if H is None else H
    cache = module.__dict__.setdefault("_w", {})
    if (label, H) in cache:
        return cache[(label, H)]
    dat = module.datum
    L = module.realization
    hv = Q(dual_coxeter(dat))
    h = module.act(L.h0(label))
    xp, xm = L.x_plus(label), L.x_minus(label)
    Xp, Xm = module.act(xp), module.act(xm)
    wp = Xp.scale(hv / 4) - (h @ Xp).scale(Q(1, 2))
    wm = Xm.scale(hv / 4) - (Xm @ h).scale(Q(1, 2))
    for root, pairs in root_terms(module, H):
        for xa, xma, ea, ema in pairs:
            up = L.bracket(xp, ea)
            if up:
                wp = wp + (xma @ module.act(up)).scale(Q(1, 2))
            dn = L.bracket(xm, ema)
            if dn:
                wm = wm - (module.act(dn) @ xa).scale(Q(1, 2))
    cap = series_cap(module, H)
    out = (_with_cap(wp, cap), _with_cap(wm, cap))
    cache[(label, H)] = out
    return out


def w_from_v(module: WeightModule, label: int, sign: int, H: Optional[int] = None) -> GradedOperator:
    """w^{+-}_i = +-(a_i,a_i)^{-1} [v_i, x_i^{+-}] + {h_i, x_i^{+-}} / 2."""
    dat = module.datum
    L = module.realization
    k = dat.node(label)
    x = module.act(L.x_plus(label) if sign > 0 else L.x_minus(label))
    h = module.act(L.h0(label))
    return v_op(module, label, H).comm(x).scale(sign / Q(dat.form[k][k])) + h.anti(x).scale(Q(1, 2))


class JOperators:
    """J(h_i), J(x_i^{+-}) on a module carrying a tower with levels 0 and 1."""

    def __init__(self, tower: YangianTower, H: Optional[int] = None):
        self.tower = tower
        self.module = tower.module
        self.H = default_height(self.module) if H is None else H

    def v(self, label: int) -> GradedOperator:
        return v_op(self.module, label, self.H)

    def vt(self, label: int) -> GradedOperator:
        return vt_op(self.module, label, self.H)

    def w(self, sign: int, label: int) -> GradedOperator:
        return w_ops(self.module, label, self.H)[0 if sign > 0 else 1]

    def Jh(self, label: int) -> GradedOperator:
        return self.tower.h(label, 1) + self.v(label)

    def Jx(self, sign: int, label: int) -> GradedOperator:
        return self.tower.x(sign, label, 1) + self.w(sign, label)


# ----------------------------------------------------------------- reflections

def _nilexp(m: SparseMat, keys, sign: int = 1) -> SparseMat:
    out = SparseMat.identity(keys, m.domain)
    term = SparseMat.identity(keys, m.domain)
    k = 0
    while True:
        k += 1
        term = (m @ term).scale(Q(sign, k))
        if not term.cols:
            return out
        out = out + term
        if k > 4 * len(keys) + 8:
            raise Inconclusive("exponential did not terminate")


def tau_group(module: WeightModule, label: int) -> Tuple[SparseMat, SparseMat]:
    """G = exp(e) exp(-f) exp(e) and its inverse, e = x_i^+, f = x_i^-."""
    if module.depth_cap is not None:
        raise Inconclusive("tau conjugation needs a finite-dimensional module")
    cache = module.__dict__.setdefault("_tau", {})
    if label in cache:
        return cache[label]
    L = module.realization
    e = module.act(L.x_plus(label)).mat
    f = module.act(L.x_minus(label)).mat
    keys = module.basis
    Ee, Ef = _nilexp(e, keys), _nilexp(f, keys, -1)
    Eme, Emf = _nilexp(e, keys, -1), _nilexp(f, keys)
    G = Ee @ Ef @ Ee
    Gi = Eme @ Emf @ Eme
    cache[label] = (G, Gi)
    return G, Gi


def tau_conjugate(module: WeightModule, label: int, T: GradedOperator) -> GradedOperator:
    """tau_i(T) = G T G^{-1}; the root degree is reflected by s_i."""
    G, Gi = tau_group(module, label)
    dat = module.datum
    deg = dat.reflect(T.degree, dat.node(label))
    disp = -sum(deg)
    return GradedOperator(module, G @ T.mat @ Gi, deg, disp, disp, max(disp, 0), T.cap)


def root_vectors_by_word(module: WeightModule, coords, build: Callable[[int, int], GradedOperator],
                         word: Optional[Sequence[int]] = None,
                         terminal: Optional[int] = None) -> Dict[int, GradedOperator]:
    """tau_{i_1} ... tau_{i_{p-1}} applied to build(sign, i_p) for both signs.

    ``word`` and ``terminal`` are datum node indices; by default the
    height-descent word is used.
    """
    dat = module.datum
    if word is None:
        entry = reduced_word(dat, tuple(coords))
        word, terminal = entry.word, entry.terminal
    if replay(dat, word, terminal) != tuple(coords):
        raise ValueError("word does not produce the requested root")
    out = {}
    for sign in (1, -1):
        T = build(sign, dat.labels[terminal])
        for k in reversed(word):
            T = tau_conjugate(module, dat.labels[k], T)
        out[sign] = T
    return out


def j_x_alpha(J: JOperators, coords, word=None, terminal=None) -> Tuple[Dict[int, GradedOperator], Dict[int, GradedOperator]]:
    """(x_alpha^{+-}, J(x_alpha^{+-})) built along one reduced word."""
    M = J.module
    L = M.realization
    xs = root_vectors_by_word(M, coords, lambda s, lab: M.act(L.x_plus(lab) if s > 0 else L.x_minus(lab)),
                              word, terminal)
    Js = root_vectors_by_word(M, coords, lambda s, lab: J.Jx(s, lab), word, terminal)
    return xs, Js


# ----------------------------------------------------------------- two-parameter constants

def c_base(n: int, j: int, i: int) -> int:
    """c_{alpha_j, i} = delta_{i+1,j} - delta_{i-1,j} with indices mod n."""
    return (1 if (i + 1) % n == j % n else 0) - (1 if (i - 1) % n == j % n else 0)


def c_alpha_i(datum: RootDatum, coords, i: int, word: Sequence[int], terminal: int) -> int:
    """c_{alpha,i} along a word, via c = c_b,i - (a_i1,a_i) c_b,i1 + (a_i1,b) c_{a_i,i1}.

    Indices are datum node indices, which coincide with Z/n labels for
    affine type A.
    """
    if datum.kind != "affine":
        raise ValueError("two-parameter constants are defined for affine type A")
    n = datum.rank
    if replay(datum, word, terminal) != tuple(coords):
        raise ValueError("invalid word for this root")
    word = tuple(word)
    if not word:
        return c_base(n, terminal, i)
    i1, rest = word[0], word[1:]
    beta = replay(datum, rest, terminal)
    a_i1_i = datum.form[i1][i]
    a_i1_beta = datum.inner(datum.simple(i1), beta)
    val = (c_alpha_i(datum, beta, i, rest, terminal)
           - a_i1_i * c_alpha_i(datum, beta, i1, rest, terminal)
           + a_i1_beta * c_base(n, i, i1))
    assert val.denominator == 1
    return int(val)
