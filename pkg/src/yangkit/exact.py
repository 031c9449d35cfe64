"""Exact scalars and sparse matrices over opaque basis keys.

Two scalar backends share one interface.  The rational backend uses
``gmpy2.mpq``.  The polynomial backend uses sympy's sparse polynomial ring
over QQ in a declared set of parameter names.  Both keep a canonical form, so
``x == 0`` is an exact zero test.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq
from sympy import QQ
from sympy.polys.rings import PolyElement, ring

Scalar = Any
Key = Hashable

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def Q(x: Any, den: Any = None) -> mpq:
    """Exact rational from an int, ``Fraction``, ``mpq`` or a ``"p/q"`` string."""
    if den is not None:
        return mpq(Q(x)) / Q(den)
    if isinstance(x, str):
        s = x.strip()
        if not _RATIONAL.match(s):
            raise ValueError(f"expected an integer or p/q, got {x!r}")
        return mpq(s)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass 'p/q' strings")
    return mpq(x)


def coerce(x: Any) -> Scalar:
    """Rationals become ``mpq``; polynomial scalars pass through."""
    if isinstance(x, PolyElement):
        return x
    return Q(x)


def parse_rational(text: str) -> mpq:
    try:
        return Q(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def fmt(x: Scalar) -> str:
    """Stable text form used in reports and witnesses."""
    if isinstance(x, PolyElement):
        return str(x.as_expr())
    return str(x)


class Backend:
    """Scalar factory.  ``param(name)`` is a concrete rational or a ring generator."""

    def __init__(self, name: str, values: Optional[Mapping[str, Scalar]] = None,
                 symbols: Sequence[str] = ()):
        self.name = name
        self._values: Dict[str, Scalar] = {k: Q(v) for k, v in (values or {}).items()}
        self.symbols = tuple(symbols)
        if symbols:
            self.ring, *gens = ring(",".join(symbols), QQ)
            for s, g in zip(symbols, gens):
                self._values[s] = g
        else:
            self.ring = None

    def param(self, name: str) -> Scalar:
        try:
            return self._values[name]
        except KeyError:
            raise KeyError(f"parameter {name!r} not declared for backend {self.name}") from None

    def has(self, name: str) -> bool:
        return name in self._values

    def describe(self) -> Dict[str, str]:
        return {k: fmt(v) for k, v in sorted(self._values.items())}


def rational_backend(**values: Any) -> Backend:
    return Backend("rational", values)


def poly_backend(symbols: Sequence[str], **values: Any) -> Backend:
    return Backend("poly", values, symbols)


def is_scalar_zero(x: Scalar) -> bool:
    return not x


# ---------------------------------------------------------------- vectors

def vadd(acc: Dict[Key, Scalar], vec: Mapping[Key, Scalar], c: Scalar = 1) -> Dict[Key, Scalar]:
    """acc += c*vec in place, dropping cancelled entries."""
    for k, v in vec.items():
        t = acc.get(k, 0) + c * v
        if t:
            acc[k] = t
        elif k in acc:
            del acc[k]
    return acc


def vclean(vec: Mapping[Key, Scalar]) -> Dict[Key, Scalar]:
    return {k: v for k, v in vec.items() if v}


class StructureError(ValueError):
    """Raised when matrices over different key domains are combined."""


class SparseMat:
    """Column-major sparse matrix: ``cols[c][r]`` is the (r, c) entry.

    ``domain`` identifies the basis the matrix acts on.  Matrices over
    different domains refuse to combine.
    """

    __slots__ = ("cols", "domain")

    def __init__(self, cols: Mapping[Key, Mapping[Key, Scalar]], domain: Hashable = None,
                 clean: bool = True):
        if clean:
            out = {}
            for c, col in cols.items():
                col = vclean(col)
                if col:
                    out[c] = col
            self.cols = out
        else:
            self.cols = dict(cols)
        self.domain = domain

    # construction helpers
    @classmethod
    def zero(cls, domain: Hashable = None) -> "SparseMat":
        return cls({}, domain, clean=False)

    @classmethod
    def identity(cls, keys: Iterable[Key], domain: Hashable = None) -> "SparseMat":
        return cls({k: {k: mpq(1)} for k in keys}, domain, clean=False)

    @classmethod
    def diagonal(cls, entries: Mapping[Key, Scalar], domain: Hashable = None) -> "SparseMat":
        return cls({k: {k: v} for k, v in entries.items()}, domain)

    @classmethod
    def from_entries(cls, entries: Mapping[Tuple[Key, Key], Scalar],
                     domain: Hashable = None) -> "SparseMat":
        cols: Dict[Key, Dict[Key, Scalar]] = {}
        for (r, c), v in entries.items():
            cols.setdefault(c, {})[r] = v
        return cls(cols, domain)

    def entries(self) -> Dict[Tuple[Key, Key], Scalar]:
        return {(r, c): v for c, col in self.cols.items() for r, v in col.items()}

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def _check(self, other: "SparseMat") -> None:
        if not isinstance(other, SparseMat):
            raise TypeError(f"expected SparseMat, got {type(other).__name__}")
        if self.domain is not other.domain and self.domain != other.domain:
            raise StructureError("key-domain mismatch between sparse matrices")

    # linear structure
    def __add__(self, other: "SparseMat") -> "SparseMat":
        self._check(other)
        cols = {c: dict(col) for c, col in self.cols.items()}
        for c, col in other.cols.items():
            acc = cols.get(c)
            if acc is None:
                cols[c] = dict(col)
            else:
                vadd(acc, col)
                if not acc:
                    del cols[c]
        return SparseMat(cols, self.domain, clean=False)

    def __neg__(self) -> "SparseMat":
        return SparseMat({c: {r: -v for r, v in col.items()} for c, col in self.cols.items()},
                         self.domain, clean=False)

    def __sub__(self, other: "SparseMat") -> "SparseMat":
        return self + (-other)

    def scale(self, s: Scalar) -> "SparseMat":
        if not s:
            return SparseMat.zero(self.domain)
        return SparseMat({c: {r: s * v for r, v in col.items()} for c, col in self.cols.items()},
                         self.domain)

    def __rmul__(self, s: Scalar) -> "SparseMat":
        return self.scale(s)

    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        self._check(other)
        acols = self.cols
        out = {}
        for c, col in other.cols.items():
            acc: Dict[Key, Scalar] = {}
            for r, v in col.items():
                a = acols.get(r)
                if a is None:
                    continue
                for k, w in a.items():
                    acc[k] = acc.get(k, 0) + w * v
            acc = {k: x for k, x in acc.items() if x}
            if acc:
                out[c] = acc
        return SparseMat(out, self.domain, clean=False)

    def apply(self, vec: Mapping[Key, Scalar]) -> Dict[Key, Scalar]:
        acc: Dict[Key, Scalar] = {}
        for r, v in vec.items():
            col = self.cols.get(r)
            if col:
                vadd(acc, col, v)
        return acc

    def col(self, c: Key) -> Dict[Key, Scalar]:
        return self.cols.get(c, {})

    def map_entries(self, f: Callable[[Scalar], Scalar]) -> "SparseMat":
        return SparseMat({c: {r: f(v) for r, v in col.items()} for c, col in self.cols.items()},
                         self.domain)

    def relabel(self, f: Callable[[Key], Key], domain: Hashable = None) -> "SparseMat":
        return SparseMat({f(c): {f(r): v for r, v in col.items()} for c, col in self.cols.items()},
                         domain, clean=False)

    def restrict_cols(self, keep: Callable[[Key], bool]) -> "SparseMat":
        return SparseMat({c: col for c, col in self.cols.items() if keep(c)}, self.domain,
                         clean=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMat):
            return NotImplemented
        return is_zero(self - other)[0]

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SparseMat(nnz={self.nnz()})"


def commutator(a: SparseMat, b: SparseMat) -> SparseMat:
    """ab - ba."""
    return a @ b - b @ a


def anticommutator(a: SparseMat, b: SparseMat) -> SparseMat:
    """ab + ba."""
    return a @ b + b @ a


def is_zero(m: SparseMat) -> Tuple[bool, Optional[Tuple[Tuple[Key, Key], Scalar]]]:
    """Exact zero test.  On failure returns one nonzero ((row, col), value)."""
    for c in sorted(m.cols, key=repr):
        col = m.cols[c]
        for r in sorted(col, key=repr):
            v = col[r]
            if v:
                return False, ((r, c), v)
    return True, None
