"""
core/lattice.py
Exact rational arithmetic over the lattice of exceptional curves.

- Divisor: sparse Fraction-valued vector keyed by vertex id.
- IntersectionForm: the symmetric integer matrix (E_i . E_j).
- pair / solve_exact / is_negative_definite / connected_components.

Floating point is never used: every quantity is an int or a fractions.Fraction,
and linear algebra is delegated to sympy's exact matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import sympy

from core.errors import InputError, PreconditionError


def as_fraction(value: Any) -> Fraction:
    """Convert ints, Fractions, "p/q" strings and sympy rationals to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, sympy.Basic):
        if not value.is_Rational:
            raise InputError(f"not an exact rational: {value}")
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, float):
        raise InputError("floating point values are not accepted; use a fraction 'p/q'")
    try:
        return Fraction(value)
    except (TypeError, ValueError) as e:
        raise InputError(f"not a rational number: {value!r}") from e


# -----------------------------
# Divisors
# -----------------------------
@dataclass(frozen=True)
class Divisor:
    """Exact-rational combination of exceptional curves; absent ids have coefficient 0."""

    coeffs: Dict[str, Fraction]

    def __init__(self, coeffs: Optional[Mapping[str, Any]] = None) -> None:
        cleaned: Dict[str, Fraction] = {}
        for key, value in (coeffs or {}).items():
            q = as_fraction(value)
            if q:
                cleaned[str(key)] = q
        object.__setattr__(self, "coeffs", cleaned)

    # constructors
    @classmethod
    def zero(cls) -> "Divisor":
        return cls()

    @classmethod
    def basis(cls, vid: str) -> "Divisor":
        return cls({vid: 1})

    @classmethod
    def reduced(cls, ids: Iterable[str]) -> "Divisor":
        return cls({vid: 1 for vid in ids})

    @classmethod
    def from_vector(cls, ids: Sequence[str], values: Sequence[Any]) -> "Divisor":
        return cls(dict(zip(ids, values)))

    # access
    def __getitem__(self, vid: str) -> Fraction:
        return self.coeffs.get(vid, Fraction(0))

    def items(self) -> Iterator[Tuple[str, Fraction]]:
        return iter(self.coeffs.items())

    def vector(self, ids: Sequence[str]) -> List[Fraction]:
        return [self[vid] for vid in ids]

    @property
    def support(self) -> FrozenSet[str]:
        return frozenset(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_effective(self) -> bool:
        return all(q >= 0 for q in self.coeffs.values())

    def is_integral(self) -> bool:
        return all(q.denominator == 1 for q in self.coeffs.values())

    def restrict(self, ids: Iterable[str]) -> "Divisor":
        keep = set(ids)
        return Divisor({k: v for k, v in self.coeffs.items() if k in keep})

    def drop(self, vid: str) -> "Divisor":
        return Divisor({k: v for k, v in self.coeffs.items() if k != vid})

    def meet(self, other: "Divisor") -> "Divisor":
        """Componentwise minimum: the gcd of two effective divisors."""
        keys = set(self.coeffs) | set(other.coeffs)
        return Divisor({k: min(self[k], other[k]) for k in keys})

    # arithmetic
    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Divisor(out)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __neg__(self) -> "Divisor":
        return Divisor({k: -v for k, v in self.coeffs.items()})

    def __mul__(self, scalar: Any) -> "Divisor":
        s = as_fraction(scalar)
        return Divisor({k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __le__(self, other: "Divisor") -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[k] <= other[k] for k in keys)

    def __ge__(self, other: "Divisor") -> bool:
        return other <= self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self.coeffs.items())
        return f"Divisor({{{body}}})"


# -----------------------------
# Intersection form
# -----------------------------
@dataclass(frozen=True)
class IntersectionForm:
    ids: Tuple[str, ...]
    entries: Tuple[Tuple[int, ...], ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        n = len(self.ids)
        if len(set(self.ids)) != n:
            raise InputError("intersection form has repeated vertex ids")
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise InputError("intersection form must be a square matrix over its vertex ids")
        for i in range(n):
            for j in range(n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise InputError(f"intersection form is not symmetric at ({self.ids[i]}, {self.ids[j]})")
        object.__setattr__(self, "_index", {vid: i for i, vid in enumerate(self.ids)})

    @property
    def dim(self) -> int:
        return len(self.ids)

    def index(self, vid: str) -> int:
        try:
            return self._index[vid]
        except KeyError:
            raise InputError(f"unknown vertex id: {vid}") from None

    def entry(self, a: str, b: str) -> int:
        return self.entries[self.index(a)][self.index(b)]

    def matrix(self) -> sympy.Matrix:
        return sympy.Matrix(self.dim, self.dim, lambda i, j: self.entries[i][j])

    def check_support(self, D: Divisor) -> None:
        for vid in D.coeffs:
            self.index(vid)


def pair(form: IntersectionForm, a: Divisor, b: Divisor) -> Fraction:
    """Intersection number a . b = a^T I b."""
    form.check_support(a)
    form.check_support(b)
    total = Fraction(0)
    for x, cx in a.items():
        row = form.entries[form.index(x)]
        for y, cy in b.items():
            e = row[form.index(y)]
            if e:
                total += cx * cy * e
    return total


def apply(form: IntersectionForm, x: Sequence[Any]) -> List[Fraction]:
    """I . x for a dense vector in form order."""
    xs = [as_fraction(v) for v in x]
    if len(xs) != form.dim:
        raise InputError(f"vector has length {len(xs)}, form has dimension {form.dim}")
    return [sum((row[j] * xs[j] for j in range(form.dim)), Fraction(0)) for row in form.entries]


def is_negative_definite(form: IntersectionForm) -> bool:
    """Leading principal minors alternate in sign, starting negative."""
    M = form.matrix()
    for k in range(1, form.dim + 1):
        minor = M[:k, :k].det(method="bareiss")
        sign = -1 if k % 2 else 1
        if sign * minor <= 0:
            return False
    return True


def solve_exact(form: IntersectionForm, target: Sequence[Any]) -> List[Fraction]:
    """Solve I . x = target exactly."""
    if len(target) != form.dim:
        raise InputError(f"target has length {len(target)}, form has dimension {form.dim}")
    if form.dim == 0:
        return []
    M = form.matrix()
    if M.det(method="bareiss") == 0:
        raise PreconditionError("intersection form is singular")
    rhs = sympy.Matrix([sympy.Rational(q.numerator, q.denominator) for q in map(as_fraction, target)])
    sol = M.LUsolve(rhs)
    return [as_fraction(v) for v in sol]


def ldl(form: IntersectionForm) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """Exact factorisation -I = L diag(d) L^T with L unit lower triangular."""
    if form.dim == 0:
        return [], []
    if not is_negative_definite(form):
        raise PreconditionError("intersection form is not negative definite")
    L, D = (-form.matrix()).LDLdecomposition(hermitian=False)
    n = form.dim
    lower = [[as_fraction(L[i, j]) for j in range(n)] for i in range(n)]
    diag = [as_fraction(D[i, i]) for i in range(n)]
    return lower, diag


def connected_components(form: IntersectionForm, support: Iterable[str]) -> List[FrozenSet[str]]:
    """Partition support into pieces connected through nonzero off-diagonal entries."""
    nodes = sorted(set(support), key=form.index)
    G = nx.Graph()
    G.add_nodes_from(nodes)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if form.entry(a, b):
                G.add_edge(a, b)
    comps = [frozenset(c) for c in nx.connected_components(G)]
    return sorted(comps, key=lambda c: min(form.index(v) for v in c))
