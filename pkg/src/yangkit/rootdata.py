"""Generalized Cartan matrices, root enumeration, Weyl reflections and words."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

Coords = Tuple[int, ...]


class GCMError(ValueError):
    pass


class UnsupportedKind(ValueError):
    pass


def validate_gcm(entries: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    rows = tuple(tuple(int(x) for x in row) for row in entries)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise GCMError("matrix must be square and nonempty")
    for i in range(n):
        if rows[i][i] != 2:
            raise GCMError(f"diagonal axiom violated: a[{i}][{i}] = {rows[i][i]} != 2")
        for j in range(n):
            if i != j and rows[i][j] > 0:
                raise GCMError(f"off-diagonal axiom violated: a[{i}][{j}] = {rows[i][j]} > 0")
            if (rows[i][j] == 0) != (rows[j][i] == 0):
                raise GCMError(f"zero-symmetry axiom violated at ({i},{j})")
    return rows


def symmetrizer(entries: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """Minimal positive integers d with d_i a_ij = d_j a_ji (per component, gcd 1)."""
    a = validate_gcm(entries)
    n = len(a)
    d: List[Optional[Fraction]] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        comp, stack = [start], [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or a[i][j] == 0:
                    continue
                val = d[i] * a[i][j] / a[j][i]
                if d[j] is None:
                    d[j] = val
                    comp.append(j)
                    stack.append(j)
                elif d[j] != val:
                    raise GCMError("matrix is not symmetrizable")
        den = reduce(lambda x, y: x * y // gcd(x, y), (d[k].denominator for k in comp), 1)
        ints = [int(d[k] * den) for k in comp]
        g = reduce(gcd, ints)
        for k, v in zip(comp, ints):
            d[k] = Fraction(v // g)
    return tuple(int(x) for x in d)


def _minor(a, idx) -> int:
    if not idx:
        return 1
    return int(sympy.Matrix([[a[i][j] for j in idx] for i in idx]).det(method="bareiss"))


def classify(entries: Sequence[Sequence[int]]) -> Tuple[str, Tuple[int, ...]]:
    """Return (kind, symmetrizer) with kind in finite/affine/indefinite."""
    a = validate_gcm(entries)
    d = symmetrizer(a)
    n = len(a)
    proper = all(_minor(a, idx) > 0 for k in range(1, n) for idx in combinations(range(n), k))
    det = _minor(a, tuple(range(n)))
    if proper and det > 0:
        return "finite", d
    if proper and det == 0:
        return "affine", d
    return "indefinite", d


def _nullvec(rows: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    ns = sympy.Matrix(rows).nullspace()
    if len(ns) != 1:
        raise GCMError("expected one-dimensional null space")
    v = ns[0]
    den = reduce(lambda x, y: x * y // gcd(x, y), (sympy.fraction(x)[1] for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints)
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise GCMError("null vector is not positive")
    return tuple(ints)


@dataclass(frozen=True)
class Root:
    coords: Coords
    height: int
    kind: str
    multiplicity: int

    def as_json(self) -> dict:
        return {"coords": list(self.coords), "height": self.height, "kind": self.kind,
                "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class ReducedWordEntry:
    root: Root
    word: Tuple[int, ...]
    terminal: int


@dataclass(frozen=True)
class RootDatum:
    """Root datum of a symmetrizable GCM.  Node ``k`` has display label ``labels[k]``."""

    gcm: Tuple[Tuple[int, ...], ...]
    kind: str
    d: Tuple[int, ...]
    labels: Tuple[int, ...]
    form: Tuple[Tuple[Fraction, ...], ...]
    marks: Optional[Tuple[int, ...]] = None
    dual_marks: Optional[Tuple[int, ...]] = None
    affine_node: Optional[int] = None
    name: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def rank(self) -> int:
        return len(self.gcm)

    def node(self, label: int) -> int:
        return self.labels.index(label)

    def simple(self, k: int) -> Coords:
        return tuple(1 if m == k else 0 for m in range(self.rank))

    @property
    def delta(self) -> Coords:
        if self.marks is None:
            raise UnsupportedKind("delta is defined for affine data only")
        return self.marks

    def inner(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        n = self.rank
        return sum((self.form[i][j] * x[i] * y[j] for i in range(n) for j in range(n)
                    if x[i] and y[j]), Fraction(0))

    def pairing(self, x: Sequence[int], k: int) -> int:
        """<x, alpha_k^vee> for x in root coordinates."""
        return sum(x[j] * self.gcm[k][j] for j in range(self.rank))

    def reflect(self, x: Sequence[int], k: int) -> Coords:
        p = self.pairing(x, k)
        return tuple(v - p if m == k else v for m, v in enumerate(x))

    def is_imaginary_coords(self, x: Sequence[int]) -> bool:
        if self.marks is None:
            return False
        m = self.marks
        if not any(x):
            return False
        q, r = divmod(x[0], m[0])
        return r == 0 and q != 0 and all(x[k] == q * m[k] for k in range(self.rank))

    # -- Cartan subalgebra: basis alpha_k^vee (k < rank) plus d when affine
    @property
    def cartan_dim(self) -> int:
        return self.rank + (1 if self.kind == "affine" else 0)

    def cartan_gram(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Gram matrix of ( , ) on the basis {alpha_k^vee} u {d}."""
        if "gram" in self._cache:
            return self._cache["gram"]
        n, dim = self.rank, self.cartan_dim
        g = [[Fraction(0)] * dim for _ in range(dim)]
        for i in range(n):
            for j in range(n):
                g[i][j] = 4 * self.form[i][j] / (self.form[i][i] * self.form[j][j])
        if self.kind == "affine":
            a0 = self.affine_node
            g[a0][n] = g[n][a0] = 2 / self.form[a0][a0]
        out = tuple(tuple(r) for r in g)
        self._cache["gram"] = out
        return out

    def cartan_gram_inverse(self) -> Tuple[Tuple[Fraction, ...], ...]:
        if "gram_inv" not in self._cache:
            m = sympy.Matrix(self.cartan_gram()).inv()
            self._cache["gram_inv"] = tuple(
                tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1]))
                      for x in m.row(i)) for i in range(m.rows))
        return self._cache["gram_inv"]

    def root_values(self, x: Sequence[int]) -> Tuple[int, ...]:
        """Values of the root x on the Cartan basis."""
        vals = [self.pairing(x, k) for k in range(self.rank)]
        if self.kind == "affine":
            vals.append(x[self.affine_node])
        return tuple(vals)

    def weight_inner(self, lam: Sequence, mu: Sequence):
        """(lam, mu) for weights given by their values on the Cartan basis."""
        gi = self.cartan_gram_inverse()
        dim = self.cartan_dim
        total = 0
        for i in range(dim):
            if not lam[i]:
                continue
            for j in range(dim):
                if gi[i][j] and mu[j]:
                    total += gi[i][j] * lam[i] * mu[j]
        return total

    def rho_values(self) -> Tuple[int, ...]:
        vals = [1] * self.rank
        if self.kind == "affine":
            vals.append(0)
        return tuple(vals)


def make_datum(entries: Sequence[Sequence[int]], labels: Optional[Sequence[int]] = None,
               name: str = "") -> RootDatum:
    a = validate_gcm(entries)
    kind, d = classify(a)
    n = len(a)
    dmax = max(d)
    form = tuple(tuple(Fraction(d[i] * a[i][j], dmax) for j in range(n)) for i in range(n))
    marks = dual = node0 = None
    if kind == "affine":
        marks = _nullvec(a)
        dual = _nullvec([list(r) for r in zip(*a)])
        node0 = next(k for k in range(n) if marks[k] == 1)
    return RootDatum(a, kind, d, tuple(labels) if labels else tuple(range(n)), form,
                     marks, dual, node0, name)


def cartan_A(n: int) -> List[List[int]]:
    """Finite type A_n (rank n)."""
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]


def cartan_A_affine(n: int) -> List[List[int]]:
    """Untwisted affine A_n^(1), n+1 nodes, node 0 first."""
    m = n + 1
    if m == 2:
        return [[2, -2], [-2, 2]]
    return [[2 if i == j else (-1 if (i - j) % m in (1, m - 1) else 0) for j in range(m)]
            for i in range(m)]


_NAME = re.compile(r"^A(\d+)(affine)?$")
SUPPORTED_NAMES = "A<n> (n>=2, finite sl_{n+1}) and A<n>affine (n>=2, affine A_n^(1))"


def parse_algebra(name: str) -> Tuple[int, bool]:
    """'A2' -> (3, False); 'A2affine' -> (3, True).  Returns matrix size N of sl_N."""
    m = _NAME.match(name or "")
    if not m or int(m.group(1)) < 2:
        raise ValueError(f"unknown algebra {name!r}; supported: {SUPPORTED_NAMES}")
    return int(m.group(1)) + 1, bool(m.group(2))


def datum_for(name: str) -> RootDatum:
    N, affine = parse_algebra(name)
    if affine:
        return make_datum(cartan_A_affine(N - 1), list(range(N)), name)
    return make_datum(cartan_A(N - 1), list(range(1, N)), name)


def finite_part_rank(datum: RootDatum) -> int:
    if datum.kind != "affine":
        raise UnsupportedKind("finite part is defined for affine data only")
    return datum.rank - 1


def _real_positive(datum: RootDatum, H: int) -> List[Coords]:
    key = ("real", H)
    if key in datum._cache:
        return datum._cache[key]
    n = datum.rank
    seen = {datum.simple(k) for k in range(n)}
    frontier = sorted(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for k in range(n):
                p = datum.pairing(x, k)
                if p < 0:
                    y = datum.reflect(x, k)
                    if sum(y) <= H and y not in seen:
                        seen.add(y)
                        nxt.append(y)
        frontier = nxt
    out = sorted((x for x in seen if sum(x) <= H), key=lambda x: (sum(x), x))
    datum._cache[key] = out
    return out


def positive_roots(datum: RootDatum, H: int) -> List[Root]:
    """All positive roots of height <= H, ordered by (height, coords)."""
    if datum.kind not in ("finite", "affine"):
        raise UnsupportedKind(f"root enumeration unsupported for kind {datum.kind}")
    if H < 1:
        raise ValueError("height bound must be >= 1")
    roots = [Root(x, sum(x), "real", 1) for x in _real_positive(datum, H)]
    if datum.kind == "affine":
        mult = finite_part_rank(datum)
        hd = sum(datum.marks)
        k = 1
        while k * hd <= H:
            roots.append(Root(tuple(k * m for m in datum.marks), k * hd, "imaginary", mult))
            k += 1
    roots.sort(key=lambda r: (r.height, r.coords))
    return roots


def max_height(datum: RootDatum) -> int:
    if datum.kind != "finite":
        raise UnsupportedKind("only finite type has a highest root")
    H = 1
    while True:
        if len(_real_positive(datum, H + 1)) == len(_real_positive(datum, H)):
            return H
        H += 1


def _as_root(datum: RootDatum, coords: Sequence[int]) -> Root:
    coords = tuple(coords)
    if datum.is_imaginary_coords(coords):
        return Root(coords, sum(coords), "imaginary", finite_part_rank(datum))
    return Root(coords, sum(coords), "real", 1)


def reduced_word(datum: RootDatum, alpha) -> ReducedWordEntry:
    """Height descent, ties broken by the smallest node index."""
    root = alpha if isinstance(alpha, Root) else _as_root(datum, alpha)
    if root.kind != "real":
        raise ValueError("reduced words exist for real roots only")
    x = root.coords
    if any(v < 0 for v in x) or not any(x):
        raise ValueError("root must be positive")
    word = []
    while sum(x) > 1:
        for k in range(datum.rank):
            if datum.pairing(x, k) > 0:
                break
        else:
            raise ValueError(f"{x} is not a real root")
        word.append(k)
        x = datum.reflect(x, k)
        if any(v < 0 for v in x):
            raise ValueError(f"{root.coords} is not a real root")
    terminal = x.index(1)
    return ReducedWordEntry(root, tuple(word), terminal)


def all_reduced_words(datum: RootDatum, alpha, limit: int = 16) -> List[ReducedWordEntry]:
    """Every height-descending word (up to ``limit``), deterministic order."""
    root = alpha if isinstance(alpha, Root) else _as_root(datum, alpha)
    if root.kind != "real":
        raise ValueError("reduced words exist for real roots only")
    out: List[ReducedWordEntry] = []

    def walk(x: Coords, word: Tuple[int, ...]) -> None:
        if len(out) >= limit:
            return
        if sum(x) == 1:
            out.append(ReducedWordEntry(root, word, x.index(1)))
            return
        for k in range(datum.rank):
            if datum.pairing(x, k) > 0:
                walk(datum.reflect(x, k), word + (k,))

    walk(root.coords, ())
    return out


def replay(datum: RootDatum, word: Sequence[int], terminal: int) -> Coords:
    """s_{w_1} ... s_{w_m} (alpha_terminal)."""
    x = datum.simple(terminal)
    for k in reversed(word):
        x = datum.reflect(x, k)
    return x


def dual_coxeter(datum: RootDatum) -> int:
    if datum.kind == "affine":
        return sum(datum.dual_marks)
    if datum.kind != "finite":
        raise UnsupportedKind("dual Coxeter number needs finite or affine type")
    theta = _real_positive(datum, max_height(datum))[-1]
    tt = datum.inner(theta, theta)
    val = 1 + sum(theta[k] * datum.form[k][k] / tt for k in range(datum.rank))
    assert val.denominator == 1
    return int(val)


def killing_sums(datum: RootDatum) -> Dict[Tuple[int, int], Fraction]:
    roots = positive_roots(datum, max_height(datum))
    n = datum.rank
    return {(i, j): sum((datum.inner(r.coords, datum.simple(i)) *
                         datum.inner(r.coords, datum.simple(j)) for r in roots), Fraction(0))
            for i in range(n) for j in range(n)}


def killing_check(datum: RootDatum) -> bool:
    """sum over positive roots of (a,a_i)(a,a_j) equals h^vee (a_i,a_j) for all i, j."""
    if datum.kind != "finite":
        raise UnsupportedKind("killing_check needs finite type")
    hv = dual_coxeter(datum)
    return all(v == hv * datum.form[i][j] for (i, j), v in killing_sums(datum).items())
