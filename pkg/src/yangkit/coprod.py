"""Casimir series and the coproduct on tensor products of modules."""
from __future__ import annotations

import threading
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .exact import Q, SparseMat, coerce, vadd
from .liemod import GradedOperator, TensorModule, WeightModule, tensor
from .rootdata import max_height, positive_roots
from .yangops import (MissingOperator, YangianTower, h_tilde1, hkey, lie_tower_level0,
                      series_cap, vt_op, xkey)


def box(T: TensorModule, X1: GradedOperator, X2: GradedOperator) -> GradedOperator:
    """X (x) 1 + 1 (x) X from the two factor copies of X."""
    return T.box(X1, X2)


def box_elem(T: TensorModule, x) -> GradedOperator:
    """Box of a Lie element; agrees with the tensor module's own action."""
    return T.box(T.V1.act(x), T.V2.act(x))


def cartan_dual_pairs(V: WeightModule) -> List[Tuple[GradedOperator, GradedOperator]]:
    """[(u^k, u_k)] as diagonal operators on V, u_k the Cartan basis."""
    dat = V.datum
    gi = dat.cartan_gram_inverse()
    dim = dat.cartan_dim
    out = []
    for k in range(dim):
        unit = [Q(1) if m == k else Q(0) for m in range(dim)]
        dual = [Q(gi[k][m]) for m in range(dim)]
        out.append((V.cartan_op(dual), V.cartan_op(unit)))
    return out


def default_series_height(T: WeightModule) -> int:
    dat = T.datum
    if dat.kind == "finite":
        return max_height(dat)
    return (T.depth_cap or 0) + 2


class OperatorSeries:
    """Height-graded family of operators on V1 (x) V2, built on demand.

    ``kind`` is ``"plus"`` (sum of x_-a (x) x_a, with the Cartan term at
    height 0) or ``"minus"`` (sum of x_a (x) x_-a).  Terms are memoized under a
    lock, so concurrent readers see one consistent cache.
    """

    def __init__(self, T: TensorModule, kind: str, bases: Optional[Mapping] = None):
        if kind not in ("plus", "minus"):
            raise ValueError("kind must be 'plus' or 'minus'")
        self.T = T
        self.kind = kind
        self.bases = dict(bases or {})
        self._terms: Dict[int, GradedOperator] = {}
        self._lock = threading.Lock()
        self.materialized: List[int] = []
        self.touched: Set[int] = set()
        self._roots_by_height: Dict[int, list] = {}
        self._roots_upto = 0

    def _roots_at(self, h: int):
        if h > self._roots_upto:
            self._roots_by_height = {}
            for r in positive_roots(self.T.datum, h):
                self._roots_by_height.setdefault(r.height, []).append(r)
            self._roots_upto = h
        return self._roots_by_height.get(h, [])

    def root_pieces(self, h: int) -> List[Tuple[tuple, GradedOperator]]:
        """Per-root contributions of height h, [(coords, operator)]."""
        T = self.T
        L = T.realization
        out = []
        for root in self._roots_at(h):
            xs, duals = L.root_space_basis(root.coords, self.bases.get(root.coords))
            acc = None
            for x, y in zip(xs, duals):
                if self.kind == "plus":
                    term = T.kron(T.V1.act(y), T.V2.act(x))
                else:
                    term = T.kron(T.V1.act(x), T.V2.act(y))
                acc = term if acc is None else acc + term
            out.append((root.coords, acc))
        return out

    def term(self, h: int) -> GradedOperator:
        with self._lock:
            hit = self._terms.get(h)
            if hit is not None:
                return hit
            T = self.T
            if h == 0:
                if self.kind == "plus":
                    acc = T.zero()
                    for up, low in zip(cartan_dual_pairs(T.V1), cartan_dual_pairs(T.V2)):
                        acc = acc + T.kron(up[0], low[1])
                else:
                    acc = T.zero()
            else:
                acc = None
                for _, piece in self.root_pieces(h):
                    acc = piece if acc is None else acc + piece
                if acc is None:
                    acc = T.zero()
            self._terms[h] = acc
            self.materialized.append(h)
            return acc

    def total(self, H: Optional[int] = None) -> GradedOperator:
        """Sum of terms of height <= H, with truncation certified up to input depth H."""
        H = default_series_height(self.T) if H is None else H
        acc = self.term(0)
        for h in range(1, H + 1):
            t = self.term(h)
            if t.mat.cols:
                acc = _add_any(acc, t)
        cap = series_cap(self.T, H)
        if cap is None:
            return acc
        return GradedOperator(acc.module, acc.mat, acc.degree, acc.lo, acc.hi, acc.reach,
                              cap if acc.cap is None else min(cap, acc.cap))

    def apply(self, vec: Mapping, H: Optional[int] = None) -> Dict:
        """Series applied to one vector; records the heights that contributed."""
        H = default_series_height(self.T) if H is None else H
        out: Dict = {}
        for h in range(0, H + 1):
            part = self.term(h).mat.apply(vec)
            if part:
                with self._lock:
                    self.touched.add(h)
                vadd(out, part)
        return out


def _add_any(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    """Sum of degree-0 series terms (all terms of Omega have degree 0)."""
    return a + b


def omega_plus(T: TensorModule, H: Optional[int] = None, bases=None) -> GradedOperator:
    return OperatorSeries(T, "plus", bases).total(H)


def omega_minus(T: TensorModule, H: Optional[int] = None, bases=None) -> GradedOperator:
    return OperatorSeries(T, "minus", bases).total(H)


def omega(T: TensorModule, H: Optional[int] = None, bases=None) -> GradedOperator:
    return omega_plus(T, H, bases) + omega_minus(T, H, bases)


class CasimirCache:
    """Omega_+, Omega_- on one tensor module, built once per height bound."""

    def __init__(self, T: TensorModule, H: Optional[int] = None, bases=None):
        self.T = T
        self.H = default_series_height(T) if H is None else H
        self.plus_series = OperatorSeries(T, "plus", bases)
        self.minus_series = OperatorSeries(T, "minus", bases)
        self._plus = self._minus = None

    @property
    def plus(self) -> GradedOperator:
        if self._plus is None:
            self._plus = self.plus_series.total(self.H)
        return self._plus

    @property
    def minus(self) -> GradedOperator:
        if self._minus is None:
            self._minus = self.minus_series.total(self.H)
        return self._minus

    @property
    def full(self) -> GradedOperator:
        return self.plus + self.minus


def generalized_casimir(V: WeightModule, H: Optional[int] = None) -> GradedOperator:
    """2 nu^{-1}(rho) + sum_k u^k u_k + 2 sum_{a>0} sum_k x_-a x_a on one module."""
    dat = V.datum
    H = default_series_height(V) if H is None else H
    rho = dat.rho_values()
    diag = {}
    for b in V.basis:
        wt = V.weight(b)
        val = coerce(dat.weight_inner(wt, wt)) + 2 * coerce(dat.weight_inner(wt, rho))
        if val:
            diag[b] = val
    acc = GradedOperator(V, SparseMat.diagonal(diag, V), V.zero_degree, 0, 0, 0)
    L = V.realization
    for root in positive_roots(dat, H):
        xs, duals = L.root_space_basis(root.coords)
        for x, y in zip(xs, duals):
            acc = acc + (V.act(y) @ V.act(x)).scale(Q(2))
    cap = series_cap(V, H)
    if cap is not None:
        acc = GradedOperator(V, acc.mat, acc.degree, acc.lo, acc.hi, acc.reach, cap)
    return acc


# ---------------------------------------------------------------- coproduct

MUTATIONS = ("drop_hh", "flip_omega", "xminus_minus_sign")


class Coproduct:
    """Images of generators under the coproduct, acting on V1 (x) V2.

    ``towers`` supplies level-1 operators on each factor; a factor without a
    tower supports only the Lie-level and pure-Lie entries.  ``mutation``
    installs a deliberate error for negative-control runs.
    """

    def __init__(self, T: TensorModule, towers: Sequence[Optional[YangianTower]] = (None, None),
                 H: Optional[int] = None, mutation: Optional[str] = None, bases=None):
        if mutation is not None and mutation not in MUTATIONS:
            raise ValueError(f"unknown mutation {mutation!r}")
        self.T = T
        self.towers = tuple(towers)
        self.mutation = mutation
        self.cas = CasimirCache(T, H, bases)
        self._memo: Dict[tuple, GradedOperator] = {}

    @property
    def labels(self):
        return self.T.datum.labels

    def _factor(self, side: int, key) -> GradedOperator:
        tw = self.towers[side]
        if tw is None:
            raise MissingOperator(f"no level-1 data on tensor factor {side + 1}")
        return tw.get(key)

    def _box_key(self, key) -> GradedOperator:
        return self.T.box(self._factor(0, key), self._factor(1, key))

    def _lie(self, side: int, elem) -> GradedOperator:
        V = self.T.V1 if side == 0 else self.T.V2
        return V.act(elem)

    def h0_left(self, label: int) -> GradedOperator:
        L = self.T.realization
        return self.T.left(self._lie(0, L.h0(label)))

    def _omega_plus_signed(self) -> GradedOperator:
        return self.cas.plus.scale(-1) if self.mutation == "flip_omega" else self.cas.plus

    def image(self, gen: tuple) -> GradedOperator:
        """``gen`` is one of ("h", i, r<=1), ("x", s, i, r<=1), ("ht", i), ("vt", i), ("J", i)."""
        hit = self._memo.get(gen)
        if hit is not None:
            return hit
        out = self._image(gen)
        self._memo[gen] = out
        return out

    def _image(self, gen: tuple) -> GradedOperator:
        T = self.T
        L = T.realization
        kind = gen[0]
        if kind == "h" and gen[2] == 0:
            return box_elem(T, L.h0(gen[1]))
        if kind == "x" and gen[3] == 0:
            s, i = gen[1], gen[2]
            return box_elem(T, L.x_plus(i) if s > 0 else L.x_minus(i))
        if kind == "h":
            i = gen[1]
            h0 = self._lie(0, L.h0(i)), self._lie(1, L.h0(i))
            out = self._box_key(hkey(i, 1))
            if self.mutation != "drop_hh":
                out = out + T.kron(*h0)
            return out + self.h0_left(i).comm(self._omega_plus_signed())
        if kind == "ht":
            i = gen[1]
            ht = [h_tilde1(self._factor(k, hkey(i, 0)), self._factor(k, hkey(i, 1))) for k in (0, 1)]
            return T.box(*ht) + self.h0_left(i).comm(self._omega_plus_signed())
        if kind == "x":
            s, i = gen[1], gen[2]
            x1 = self._box_key(xkey(s, i, 1))
            if s > 0:
                corr = T.right(self._lie(1, L.x_plus(i))).comm(self._omega_plus_signed())
            else:
                # + [x-_{i0} (x) 1, Omega_+]; this matches [Delta h~_{i1}, Delta x-_{i0}] / -(a_i,a_i)
                corr = -T.left(self._lie(0, L.x_minus(i))).comm(self._omega_plus_signed())
                if self.mutation == "xminus_minus_sign":
                    corr = -corr
            return x1 - corr
        if kind == "vt":
            i = gen[1]
            vt = T.box(vt_op(T.V1, i, self.cas.H), vt_op(T.V2, i, self.cas.H))
            return vt - self.h0_left(i).comm(self.cas.plus - self.cas.minus).scale(Q(1, 2))
        if kind == "J":
            i = gen[1]
            from .yangops import v_op
            J = [self._factor(k, hkey(i, 1)) + v_op(V, i, self.cas.H)
                 for k, V in ((0, T.V1), (1, T.V2))]
            return T.box(*J) + self.h0_left(i).comm(self.cas.full).scale(Q(1, 2))
        raise ValueError(f"unknown generator {gen!r}")

    def level0(self) -> Dict[tuple, GradedOperator]:
        return lie_tower_level0(self.T)

    def minimal_tower_data(self) -> Dict[tuple, GradedOperator]:
        """x^{+-}_{i0}, h_{i0}, and the image of h_{i1}, for tower generation."""
        out = self.level0()
        for i in self.labels:
            out[hkey(i, 1)] = self.image(("h", i, 1))
        return out

    def level1_tower(self) -> YangianTower:
        """Tower on V1 (x) V2 holding the images of level-0 and level-1 generators."""
        ops = self.level0()
        for i in self.labels:
            ops[hkey(i, 1)] = self.image(("h", i, 1))
            for s in (1, -1):
                ops[xkey(s, i, 1)] = self.image(("x", s, i, 1))
        return YangianTower(self.T, 1, ops, {"kind": "coproduct"})


def tensor_coproduct(V1_tower: YangianTower, V2_tower: YangianTower, H: Optional[int] = None,
                     mutation: Optional[str] = None) -> Coproduct:
    T = tensor(V1_tower.module, V2_tower.module)
    return Coproduct(T, (V1_tower, V2_tower), H, mutation)


def coassociativity_pair(t1: YangianTower, t2: YangianTower, t3: YangianTower, label: int):
    """(left, right) images of h~_{i1} on (V1 V2) V3, the right one moved there from V1 (V2 V3)."""
    c12 = tensor_coproduct(t1, t2)
    c23 = tensor_coproduct(t2, t3)
    tw12, tw23 = c12.level1_tower(), c23.level1_tower()
    left = Coproduct(tensor(tw12.module, t3.module), (tw12, t3)).image(("ht", label))
    right_c = Coproduct(tensor(t1.module, tw23.module), (t1, tw23))
    right = right_c.image(("ht", label))
    return left, reassociate_inverse(right, left.module)


def reassociate_inverse(op: GradedOperator, target: TensorModule) -> GradedOperator:
    """Move an operator on V1 (V2 V3) to (V1 V2) V3."""
    return op.relabel(target, lambda k: ((k[0], k[1][0]), k[1][1]))
