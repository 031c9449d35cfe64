"""Loop realization of sl_N and affine sl_N, truncated Verma modules and tensors.

Lie basis keys:

* ``("E", a, b, k)``: matrix unit E_ab tensored with t^k (a != b, 1-based)
* ``("H", j, k)``: (E_jj - E_{j+1,j+1}) t^k
* ``("c",)`` and ``("d",)``: centre and derivation (affine only)

Module operators are :class:`GradedOperator` objects.  Each one records its
root degree and three pieces of truncation bookkeeping:

* ``lo``/``hi``: the depth displacement interval
* ``reach``: the column of an input at depth d is exact whenever d + reach <= D
* ``cap``: inputs deeper than ``cap`` are not certified (series truncation)
"""
from __future__ import annotations

import threading
from itertools import combinations_with_replacement
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import sympy

from .exact import Q, SparseMat, StructureError, is_zero, vadd
from .rootdata import (Coords, RootDatum, cartan_A, cartan_A_affine, make_datum,
                       positive_roots)

Key = Tuple
Elem = Dict[Key, object]

C_KEY = ("c",)
D_KEY = ("d",)


def mat_inverse(rows: Sequence[Sequence]) -> List[List]:
    """Exact inverse of a small rational matrix."""
    m = sympy.Matrix([[sympy.Rational(str(x)) for x in r] for r in rows]).inv()
    return [[Q(str(m[i, j])) for j in range(m.cols)] for i in range(m.rows)]


def lie_add(*terms: Tuple[object, Elem]) -> Elem:
    acc: Elem = {}
    for c, x in terms:
        vadd(acc, x, c)
    return acc


class LieRealization:
    """sl_N as trace-zero matrices, or its loop realization of type A_{N-1}^(1)."""

    def __init__(self, N: int, affine: bool):
        if N < 2:
            raise ValueError("need N >= 2")
        if affine and N < 3:
            raise ValueError("affine A_1^(1) is not supported")
        self.N = N
        self.affine = affine
        if affine:
            self.datum: RootDatum = make_datum(cartan_A_affine(N - 1), list(range(N)),
                                               f"A{N - 1}affine")
        else:
            self.datum = make_datum(cartan_A(N - 1), list(range(1, N)), f"A{N - 1}")
        self._br: Dict[Tuple[Key, Key], Elem] = {}
        self._lock = threading.Lock()
        # trace-form Gram of H_1..H_{N-1} (the Cartan matrix of sl_N) and its inverse
        self.h0_gram = [[Q(2 if i == j else (-1 if abs(i - j) == 1 else 0))
                         for j in range(N - 1)] for i in range(N - 1)]
        self.h0_gram_inv = mat_inverse(self.h0_gram)

    @property
    def name(self) -> str:
        return self.datum.name

    # ------------------------------------------------------------ node labels
    def index(self, label: int) -> int:
        return self.datum.node(label)

    def h_index(self, j: int) -> int:
        """Datum index of the node whose coroot is H_j (j >= 1)."""
        return self.datum.node(j)

    # ------------------------------------------------------------ structure
    @staticmethod
    def loop_degree(key: Key) -> int:
        return key[-1] if key[0] in ("E", "H") else 0

    def _matrix(self, key: Key) -> Dict[Tuple[int, int], int]:
        if key[0] == "E":
            return {(key[1], key[2]): 1}
        j = key[1]
        return {(j, j): 1, (j + 1, j + 1): -1}

    def _from_matrix(self, m: Mapping[Tuple[int, int], object], k: int) -> Elem:
        out: Elem = {}
        diag = [0] * (self.N + 1)
        for (r, c), v in m.items():
            if not v:
                continue
            if r == c:
                diag[r] += v
            else:
                out[("E", r, c, k)] = v
        run = 0
        for j in range(1, self.N):
            run += diag[j]
            if run:
                out[("H", j, k)] = run
        if run + diag[self.N]:
            raise StructureError("bracket left sl_N (nonzero trace)")
        return out

    def bracket_keys(self, x: Key, y: Key) -> Elem:
        hit = self._br.get((x, y))
        if hit is not None:
            return hit
        out: Elem
        if x == C_KEY or y == C_KEY:
            out = {}
        elif x == D_KEY:
            k = self.loop_degree(y)
            out = {y: Q(k)} if (k and y != D_KEY) else {}
        elif y == D_KEY:
            k = self.loop_degree(x)
            out = {x: Q(-k)} if k else {}
        else:
            k, l = self.loop_degree(x), self.loop_degree(y)
            mx, my = self._matrix(x), self._matrix(y)
            prod: Dict[Tuple[int, int], int] = {}
            for (a, b), u in mx.items():
                for (c, d), v in my.items():
                    if b == c:
                        prod[(a, d)] = prod.get((a, d), 0) + u * v
                    if d == a:
                        prod[(c, b)] = prod.get((c, b), 0) - u * v
            out = {kk: Q(v) for kk, v in self._from_matrix(prod, k + l).items()}
            if self.affine and k and k + l == 0:
                tr = self._trace(mx, my)
                if tr:
                    out[C_KEY] = Q(k * tr)
        with self._lock:
            self._br[(x, y)] = out
        return out

    @staticmethod
    def _trace(mx, my) -> int:
        return sum(u * my.get((b, a), 0) for (a, b), u in mx.items())

    def bracket(self, x: Elem, y: Elem) -> Elem:
        acc: Elem = {}
        for kx, cx in x.items():
            for ky, cy in y.items():
                vadd(acc, self.bracket_keys(kx, ky), cx * cy)
        return acc

    def form_keys(self, x: Key, y: Key):
        if {x, y} == {C_KEY, D_KEY}:
            return Q(1)
        if x in (C_KEY, D_KEY) or y in (C_KEY, D_KEY):
            return Q(0)
        if self.loop_degree(x) + self.loop_degree(y) != 0:
            return Q(0)
        return Q(self._trace(self._matrix(x), self._matrix(y)))

    def form(self, x: Elem, y: Elem):
        return sum((cx * cy * self.form_keys(kx, ky) for kx, cx in x.items()
                    for ky, cy in y.items()), Q(0))

    # ------------------------------------------------------------ roots
    def root_of(self, key: Key) -> Coords:
        n = self.datum.rank
        if key[0] == "E":
            _, a, b, k = key
            vals = []
            for j in range(1, self.N):
                vals.append((1 if a <= j < b else 0) - (1 if b <= j < a else 0))
        elif key[0] == "H":
            k = key[2]
            vals = [0] * (self.N - 1)
        else:
            return (0,) * n
        if not self.affine:
            return tuple(vals)
        return (k,) + tuple(v + k for v in vals)

    def elem_degree(self, x: Elem) -> Coords:
        degs = {self.root_of(k) for k in x}
        if len(degs) > 1:
            raise StructureError(f"element is not root-homogeneous: {sorted(degs)}")
        return degs.pop() if degs else (0,) * self.datum.rank

    def keys_of_root(self, coords: Sequence[int]) -> List[Key]:
        """Canonical basis of the root space g_coords (coords nonzero)."""
        coords = tuple(coords)
        if self.affine:
            k = coords[0]
            diff = [coords[j] - k for j in range(1, self.N)]
        else:
            k = 0
            diff = list(coords)
        if not any(diff):
            if k == 0:
                raise ValueError("zero weight is not a root")
            return [("H", j, k) for j in range(1, self.N)]
        nz = [j + 1 for j, v in enumerate(diff) if v]
        lo, hi = nz[0], nz[-1]
        sign = diff[lo - 1]
        if sign not in (1, -1) or nz != list(range(lo, hi + 1)) or any(diff[j - 1] != sign for j in nz):
            raise ValueError(f"{coords} is not a root")
        a, b = (lo, hi + 1) if sign == 1 else (hi + 1, lo)
        return [("E", a, b, k)]

    def root_space_basis(self, coords: Sequence[int],
                         basis: Optional[List[Elem]] = None) -> Tuple[List[Elem], List[Elem]]:
        """Basis of g_alpha and its dual basis of g_{-alpha} under ( , )."""
        pos = self.keys_of_root(coords)
        neg = self.keys_of_root(tuple(-c for c in coords))
        xs = basis if basis is not None else [{k: Q(1)} for k in pos]
        if len(xs) != len(pos):
            raise ValueError("basis has the wrong size")
        pair = [[self.form(x, {nk: Q(1)}) for nk in neg] for x in xs]
        inv = mat_inverse(pair)
        duals = []
        for m in range(len(xs)):
            duals.append({nk: inv[l][m] for l, nk in enumerate(neg) if inv[l][m]})
        return xs, duals

    def enumerate_positive_roots(self, H: int) -> Dict[Coords, int]:
        """Root multiplicities read off the realization directly (independent oracle)."""
        out: Dict[Coords, int] = {}
        kmax = H if self.affine else 0
        keys = [("E", a, b, k) for a in range(1, self.N + 1) for b in range(1, self.N + 1)
                if a != b for k in range(-kmax, kmax + 1)]
        keys += [("H", j, k) for j in range(1, self.N) for k in range(-kmax, kmax + 1) if k]
        for key in keys:
            r = self.root_of(key)
            if all(v >= 0 for v in r) and 0 < sum(r) <= H:
                out[r] = out.get(r, 0) + 1
        return out

    # ------------------------------------------------------------ Chevalley data
    def x_plus(self, label: int) -> Elem:
        if self.affine and label == 0:
            return {("E", self.N, 1, 1): Q(1)}
        return {("E", label, label + 1, 0): Q(1)}

    def x_minus(self, label: int) -> Elem:
        if self.affine and label == 0:
            return {("E", 1, self.N, -1): Q(1)}
        return {("E", label + 1, label, 0): Q(1)}

    def h(self, label: int) -> Elem:
        if self.affine and label == 0:
            out: Elem = {C_KEY: Q(1)}
            for j in range(1, self.N):
                out[("H", j, 0)] = Q(-1)
            return out
        return {("H", label, 0): Q(1)}

    def h0(self, label: int) -> Elem:
        """h_{i0} = (a_i,a_i)/2 * coroot (the Cartan identification)."""
        k = self.index(label)
        s = Q(self.datum.form[k][k]) / 2
        return {key: s * v for key, v in self.h(label).items()}

    def cartan_basis(self) -> List[Elem]:
        """Coroots in datum order, then d."""
        out = [self.h(lab) for lab in self.datum.labels]
        if self.affine:
            out.append({D_KEY: Q(1)})
        return out

    def cartan_coords(self, key: Key) -> Dict[int, object]:
        """Coordinates of a Cartan key on the Cartan basis."""
        if key == D_KEY:
            return {self.datum.rank: Q(1)}
        if key == C_KEY:
            dm = self.datum.dual_marks
            return {k: Q(dm[k]) for k in range(self.datum.rank)}
        if key[0] == "H" and key[2] == 0:
            return {self.h_index(key[1]): Q(1)}
        raise ValueError(f"{key} is not a Cartan key")

    def key_kind(self, key: Key) -> str:
        r = self.root_of(key)
        if not any(r):
            return "cartan"
        return "pos" if all(v >= 0 for v in r) else "neg"


def build_affine(N: int) -> LieRealization:
    if N < 3:
        raise ValueError("affine A_{N-1}^(1) needs N >= 3")
    return LieRealization(N, True)


def build_finite(N: int) -> LieRealization:
    return LieRealization(N, False)


# ====================================================================== modules

def _height(coords: Sequence[int]) -> int:
    return sum(coords)


class GradedOperator:
    """Weight-homogeneous operator on a module with truncation metadata."""

    __slots__ = ("module", "mat", "degree", "lo", "hi", "reach", "cap")

    def __init__(self, module: "WeightModule", mat: SparseMat, degree: Coords,
                 lo: int, hi: int, reach: int, cap: Optional[int] = None):
        self.module = module
        self.mat = mat
        self.degree = tuple(degree)
        self.lo, self.hi = lo, hi
        self.reach = reach
        self.cap = cap

    # -- algebra
    def _same(self, other: "GradedOperator") -> None:
        if self.module is not other.module:
            raise StructureError("operators live on different modules")

    def _merge(self, other: "GradedOperator", mat: SparseMat) -> "GradedOperator":
        if self.degree != other.degree:
            if not other.mat.cols:
                return GradedOperator(self.module, mat, self.degree, self.lo, self.hi,
                                      self.reach, self.cap)
            if not self.mat.cols:
                return GradedOperator(self.module, mat, other.degree, other.lo, other.hi,
                                      other.reach, other.cap)
            raise StructureError(f"degree mismatch {self.degree} vs {other.degree}")
        return GradedOperator(self.module, mat, self.degree, min(self.lo, other.lo),
                              max(self.hi, other.hi), max(self.reach, other.reach),
                              _min_cap(self.cap, other.cap))

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        self._same(other)
        return self._merge(other, self.mat + other.mat)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        self._same(other)
        return self._merge(other, self.mat - other.mat)

    def __neg__(self) -> "GradedOperator":
        return self._with(-self.mat)

    def scale(self, s) -> "GradedOperator":
        return self._with(self.mat.scale(s))

    def __rmul__(self, s) -> "GradedOperator":
        return self.scale(s)

    def _with(self, mat: SparseMat) -> "GradedOperator":
        return GradedOperator(self.module, mat, self.degree, self.lo, self.hi, self.reach,
                              self.cap)

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        """self after other."""
        self._same(other)
        deg = tuple(a + b for a, b in zip(self.degree, other.degree))
        reach = max(other.reach, other.hi + self.reach)
        cap = _min_cap(other.cap, None if self.cap is None else self.cap - other.hi)
        return GradedOperator(self.module, self.mat @ other.mat, deg, self.lo + other.lo,
                              self.hi + other.hi, reach, cap)

    def comm(self, other: "GradedOperator") -> "GradedOperator":
        return self @ other - other @ self

    def anti(self, other: "GradedOperator") -> "GradedOperator":
        return self @ other + other @ self

    def relabel(self, module: "WeightModule", f) -> "GradedOperator":
        return GradedOperator(module, self.mat.relabel(f, module), self.degree, self.lo,
                              self.hi, self.reach, self.cap)

    # -- windows
    def window(self) -> Optional[Tuple[int, int]]:
        """Certified input-depth window, or None when empty."""
        m = self.module
        top = m.max_depth
        hi = top
        if m.depth_cap is not None:
            hi = min(hi, m.depth_cap - self.reach)
        if self.cap is not None:
            hi = min(hi, self.cap)
        return (0, hi) if hi >= 0 else None

    def check_zero(self):
        """(status, witness, window) with status pass/fail/inconclusive."""
        w = self.window()
        if w is None:
            return "inconclusive", None, None
        depth = self.module.depth
        restricted = self.mat.restrict_cols(lambda c: depth[c] <= w[1])
        ok, wit = is_zero(restricted)
        return ("pass" if ok else "fail"), wit, w

    def __repr__(self) -> str:
        return (f"GradedOperator(deg={self.degree}, disp=[{self.lo},{self.hi}], "
                f"reach={self.reach}, cap={self.cap}, nnz={self.mat.nnz()})")


def _min_cap(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def window_check(chain: Sequence, window: Tuple[int, int], depth_cap: int) -> Optional[Tuple[int, int]]:
    """Largest sub-window of inputs whose whole orbit stays inside [0, D].

    ``chain`` lists operators (or (lo, hi) displacement pairs) in the order
    they are applied.
    """
    lo_acc = hi_acc = 0
    need_lo, need_hi = window
    for step in chain:
        lo, hi = (step.lo, step.hi) if isinstance(step, GradedOperator) else step
        lo_acc += lo
        hi_acc += hi
        need_lo = max(need_lo, -lo_acc)
        need_hi = min(need_hi, depth_cap - hi_acc)
    return (need_lo, need_hi) if need_lo <= need_hi else None


class WeightModule:
    """Weight module with an explicit (possibly depth-truncated) basis."""

    realization: LieRealization
    basis: Tuple[Hashable, ...]
    depth: Dict[Hashable, int]
    lowered: Dict[Hashable, Coords]
    hw: Tuple
    depth_cap: Optional[int]

    def _init_common(self) -> None:
        self._keymats: Dict[Key, SparseMat] = {}
        self._lock = threading.RLock()
        self._weights: Dict[Hashable, Tuple] = {}
        self.max_depth = max(self.depth.values()) if self.depth else 0

    @property
    def datum(self) -> RootDatum:
        return self.realization.datum

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other) -> bool:
        return self is other

    def weight(self, b) -> Tuple:
        w = self._weights.get(b)
        if w is None:
            rv = self.datum.root_values(self.lowered[b])
            w = tuple(h - r for h, r in zip(self.hw, rv))
            self._weights[b] = w
        return w

    def weight_at(self, b, key: Key):
        wt = self.weight(b)
        return sum((c * wt[i] for i, c in self.realization.cartan_coords(key).items()), Q(0))

    def identity(self) -> GradedOperator:
        return GradedOperator(self, SparseMat.identity(self.basis, self), self.zero_degree,
                              0, 0, 0)

    @property
    def zero_degree(self) -> Coords:
        return (0,) * self.datum.rank

    def zero(self, degree: Optional[Coords] = None) -> GradedOperator:
        deg = self.zero_degree if degree is None else degree
        disp = -_height(deg)
        return GradedOperator(self, SparseMat.zero(self), deg, disp, disp, max(disp, 0))

    def cartan_op(self, coeffs: Sequence) -> GradedOperator:
        """Diagonal action of sum_k coeffs[k] u_k on the Cartan basis."""
        diag = {}
        for b in self.basis:
            wt = self.weight(b)
            v = sum((c * w for c, w in zip(coeffs, wt) if c), Q(0))
            if v:
                diag[b] = v
        return GradedOperator(self, SparseMat.diagonal(diag, self), self.zero_degree, 0, 0, 0)

    def key_matrix(self, key: Key) -> SparseMat:
        m = self._keymats.get(key)
        if m is None:
            m = self._build_key_matrix(key)
            with self._lock:
                self._keymats[key] = m
        return m

    def _build_key_matrix(self, key: Key) -> SparseMat:
        raise NotImplementedError

    def act(self, x: Elem) -> GradedOperator:
        """Action of a root-homogeneous Lie element."""
        deg = self.realization.elem_degree(x)
        mat = SparseMat.zero(self)
        for k, c in sorted(x.items()):
            mat = mat + self.key_matrix(k).scale(c)
        disp = -_height(deg)
        return GradedOperator(self, mat, deg, disp, disp, max(disp, 0))

    def basis_index(self) -> Dict[Hashable, int]:
        return {b: i for i, b in enumerate(self.basis)}

    def depth_dims(self) -> List[int]:
        dims = [0] * (self.max_depth + 1)
        for b in self.basis:
            dims[self.depth[b]] += 1
        return dims


class VermaModule(WeightModule):
    """Verma module M(lambda) truncated at depth D; basis = ordered PBW monomials."""

    def __init__(self, realization: LieRealization, hw: Sequence, D: int):
        self.realization = realization
        dat = realization.datum
        if len(hw) != dat.cartan_dim:
            raise ValueError(f"highest weight needs {dat.cartan_dim} values")
        self.hw = tuple(hw)
        self.depth_cap = D
        letters = []
        if D >= 1:
            for r in positive_roots(dat, D):
                neg = tuple(-c for c in r.coords)
                for key in realization.keys_of_root(neg):
                    letters.append(((r.height, r.coords, key), key, r.coords, r.height))
        letters.sort(key=lambda t: t[0])
        self.letter_keys = [t[1] for t in letters]
        self.letter_root = [t[2] for t in letters]
        self.letter_height = [t[3] for t in letters]
        self.letter_index = {k: i for i, k in enumerate(self.letter_keys)}
        basis = []
        self.depth = {}
        self.lowered = {}
        nl = len(self.letter_keys)
        for size in range(0, D + 1):
            for mono in combinations_with_replacement(range(nl), size):
                dep = sum(self.letter_height[i] for i in mono)
                if dep > D:
                    continue
                basis.append(mono)
                self.depth[mono] = dep
                low = [0] * dat.rank
                for i in mono:
                    for m, v in enumerate(self.letter_root[i]):
                        low[m] += v
                self.lowered[mono] = tuple(low)
        basis.sort(key=lambda m: (self.depth[m], m))
        self.basis = tuple(basis)
        self._memo_act: Dict[Tuple[Key, tuple], Dict] = {}
        self._memo_mul: Dict[Tuple[int, tuple], Dict] = {}
        self._init_common()

    def _mono_depth(self, mono) -> int:
        return sum(self.letter_height[i] for i in mono)

    def _lmul(self, l: int, mono: tuple) -> Dict:
        """y_l * (mono v), reordered into PBW form and truncated at depth D."""
        if self._mono_depth(mono) + self.letter_height[l] > self.depth_cap:
            return {}
        if not mono or l <= mono[0]:
            return {(l,) + mono: 1}
        hit = self._memo_mul.get((l, mono))
        if hit is not None:
            return hit
        m0, rest = mono[0], mono[1:]
        res: Dict = {}
        for m, c in self._lmul(l, rest).items():
            vadd(res, self._lmul(m0, m), c)
        br = self.realization.bracket_keys(self.letter_keys[l], self.letter_keys[m0])
        for k2, c2 in br.items():
            vadd(res, self._act(k2, rest), c2)
        self._memo_mul[(l, mono)] = res
        return res

    def _act(self, key: Key, mono: tuple) -> Dict:
        hit = self._memo_act.get((key, mono))
        if hit is not None:
            return hit
        kind = self.realization.key_kind(key)
        if kind == "neg":
            l = self.letter_index.get(key)
            res = {} if l is None else self._lmul(l, mono)
        elif kind == "cartan":
            v = self._weight_mono(mono, key)
            res = {mono: v} if v else {}
        elif not mono:
            res = {}
        else:
            first, rest = mono[0], mono[1:]
            res = {}
            for m, c in self._act(key, rest).items():
                vadd(res, self._lmul(first, m), c)
            for k2, c2 in self.realization.bracket_keys(key, self.letter_keys[first]).items():
                vadd(res, self._act(k2, rest), c2)
        self._memo_act[(key, mono)] = res
        return res

    def _weight_mono(self, mono, key):
        if mono in self.lowered:
            return self.weight_at(mono, key)
        low = [0] * self.datum.rank
        for i in mono:
            for m, v in enumerate(self.letter_root[i]):
                low[m] += v
        rv = self.datum.root_values(low)
        wt = tuple(h - r for h, r in zip(self.hw, rv))
        return sum((c * wt[i] for i, c in self.realization.cartan_coords(key).items()), Q(0))

    def _build_key_matrix(self, key: Key) -> SparseMat:
        with self._lock:
            cols = {b: self._act(key, b) for b in self.basis}
        return SparseMat(cols, self)

    def vector_of_letters(self, keys: Sequence[Key]) -> Dict:
        """y_1 y_2 ... y_m v_lambda for arbitrary negative letters (PBW-expanded)."""
        vec = {(): Q(1)}
        for key in reversed(keys):
            nxt: Dict = {}
            for m, c in vec.items():
                vadd(nxt, self._act(key, m), c)
            vec = nxt
        return vec


class VectorModule(WeightModule):
    """Natural representation C^N of sl_N (finite type, no truncation)."""

    def __init__(self, realization: LieRealization):
        if realization.affine:
            raise ValueError("vector module is defined for finite sl_N")
        self.realization = realization
        N = realization.N
        self.basis = tuple(range(1, N + 1))
        self.depth = {c: c - 1 for c in self.basis}
        self.lowered = {c: tuple(1 if j < c else 0 for j in range(1, N)) for c in self.basis}
        self.hw = tuple(Q(1) if j == 1 else Q(0) for j in range(1, N))
        self.depth_cap = None
        self._init_common()

    def _build_key_matrix(self, key: Key) -> SparseMat:
        cols: Dict = {}
        if key[0] == "E":
            _, a, b, k = key
            cols[b] = {a: Q(1)}
        elif key[0] == "H":
            j = key[1]
            cols[j] = {j: Q(1)}
            cols[j + 1] = {j + 1: Q(-1)}
        return SparseMat(cols, self)


class TensorModule(WeightModule):
    """V1 (x) V2 with Lie action X(x)1 + 1(x)X; basis pairs of total depth <= D."""

    def __init__(self, V1: WeightModule, V2: WeightModule, depth_cap: Optional[int] = None):
        if V1.realization is not V2.realization:
            raise StructureError("tensor factors must share one realization")
        self.realization = V1.realization
        self.V1, self.V2 = V1, V2
        caps = [c for c in (V1.depth_cap, V2.depth_cap) if c is not None]
        if depth_cap is None and caps:
            depth_cap = min(caps)
        self.depth_cap = depth_cap
        self.hw = tuple(a + b for a, b in zip(V1.hw, V2.hw))
        basis = []
        self.depth, self.lowered = {}, {}
        for b1 in V1.basis:
            for b2 in V2.basis:
                dep = V1.depth[b1] + V2.depth[b2]
                if depth_cap is not None and dep > depth_cap:
                    continue
                key = (b1, b2)
                basis.append(key)
                self.depth[key] = dep
                self.lowered[key] = tuple(x + y for x, y in zip(V1.lowered[b1], V2.lowered[b2]))
        self.basis = tuple(basis)
        self._members = set(basis)
        self._init_common()

    def _build_key_matrix(self, key: Key) -> SparseMat:
        m1, m2 = self.V1.key_matrix(key), self.V2.key_matrix(key)
        cols = {}
        mem = self._members
        for b1, b2 in self.basis:
            col = {}
            for r, v in m1.col(b1).items():
                if (r, b2) in mem:
                    col[(r, b2)] = v
            for r, v in m2.col(b2).items():
                if (b1, r) in mem:
                    col[(b1, r)] = col.get((b1, r), 0) + v
            cols[(b1, b2)] = col
        return SparseMat(cols, self)

    def kron(self, X: GradedOperator, Y: GradedOperator) -> GradedOperator:
        """X (x) Y on this tensor module."""
        if X.module is not self.V1 or Y.module is not self.V2:
            raise StructureError("kron factors do not match the tensor factors")
        mem = self._members
        cols = {}
        for b1, b2 in self.basis:
            c1, c2 = X.mat.col(b1), Y.mat.col(b2)
            if not c1 or not c2:
                continue
            col = {}
            for r1, v1 in c1.items():
                for r2, v2 in c2.items():
                    if (r1, r2) in mem:
                        col[(r1, r2)] = v1 * v2
            if col:
                cols[(b1, b2)] = col
        deg = tuple(a + b for a, b in zip(X.degree, Y.degree))
        reach = max(X.reach + min(Y.hi, 0), Y.reach + min(X.hi, 0), X.hi + Y.hi, 0)
        return GradedOperator(self, SparseMat(cols, self), deg, X.lo + Y.lo, X.hi + Y.hi,
                              reach, _min_cap(X.cap, Y.cap))

    def left(self, X: GradedOperator) -> GradedOperator:
        return self.kron(X, self.V2.identity())

    def right(self, Y: GradedOperator) -> GradedOperator:
        return self.kron(self.V1.identity(), Y)

    def box(self, X1: GradedOperator, X2: GradedOperator) -> GradedOperator:
        """X (x) 1 + 1 (x) X given the two factor copies of X."""
        return self.left(X1) + self.right(X2)


def reassociate(op: GradedOperator, target: TensorModule) -> GradedOperator:
    """Move an operator on (V1 V2) V3 to V1 (V2 V3) by relabelling basis keys."""
    return op.relabel(target, lambda k: (k[0][0], (k[0][1], k[1])))


def build_verma(realization: LieRealization, hw: Sequence, D: int) -> VermaModule:
    return VermaModule(realization, hw, D)


def tensor(V1: WeightModule, V2: WeightModule, depth_cap: Optional[int] = None) -> TensorModule:
    return TensorModule(V1, V2, depth_cap)


def parse_weight(realization: LieRealization, values) -> Tuple:
    """Highest weight from a list of values or a dict {"h<i>": v, "d": v}."""
    dat = realization.datum
    if isinstance(values, Mapping):
        vals = []
        for lab in dat.labels:
            vals.append(Q(str(values.get(f"h{lab}", 0))))
        if realization.affine:
            vals.append(Q(str(values.get("d", 0))))
        unknown = set(values) - {f"h{lab}" for lab in dat.labels} - {"d"}
        if unknown:
            raise ValueError(f"unknown weight keys {sorted(unknown)}")
        return tuple(vals)
    vals = [Q(str(v)) for v in values]
    if len(vals) != dat.cartan_dim:
        raise ValueError(f"weight needs {dat.cartan_dim} values")
    return tuple(vals)
