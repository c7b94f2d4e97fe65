"""
core/cycles.py
Numerical cycles, modified numerical cycles, special divisors, multiplicities
and the D = D1 + D2 decomposition used to reduce a connected divisor to
pieces of smaller multiplicity.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from core.discrepancy import is_log_terminal_graph
from core.errors import InputError, InvariantError, PreconditionError
from core.lattice import Divisor, connected_components, pair
from core.model import ResolutionGraph
from services.settings import get_settings

logger = logging.getLogger("numrat.cycles")


@dataclass(frozen=True)
class Decomposition:
    d1: Divisor
    d2_components: Tuple[Divisor, ...] = ()

    @property
    def d2(self) -> Divisor:
        total = Divisor.zero()
        for c in self.d2_components:
            total = total + c
        return total


def _require_effective_integral(D: Divisor) -> None:
    if not D.is_effective():
        raise InputError(f"divisor must be effective: {D!r}")
    if not D.is_integral():
        raise InputError(f"divisor must be integral: {D!r}")


def _require_connected(graph: ResolutionGraph, support: Iterable[str]) -> FrozenSet[str]:
    supp = frozenset(support)
    if not supp:
        raise InputError("support must be nonempty")
    for vid in supp:
        graph.vertex(vid)
    if not graph.is_connected(supp):
        raise InputError(f"support is not connected: {graph.sort_ids(supp)}")
    return supp


def _first_positive(graph: ResolutionGraph, D: Divisor, candidates: Sequence[str]) -> Optional[str]:
    form = graph.form
    for vid in candidates:
        if pair(form, D, Divisor.basis(vid)) > 0:
            return vid
    return None


def numerical_cycle(graph: ResolutionGraph, support: Iterable[str]) -> Divisor:
    """Smallest Z with supp Z = support and Z . E_i <= 0 on the support (Laufer's loop)."""
    return _numerical_cycle(graph, _require_connected(graph, support))


@lru_cache(maxsize=65536)
def _numerical_cycle(graph: ResolutionGraph, support: FrozenSet[str]) -> Divisor:
    order = graph.sort_ids(support)
    Z = Divisor.reduced(order)
    while True:
        vid = _first_positive(graph, Z, order)
        if vid is None:
            return Z
        Z = Z + Divisor.basis(vid)


def saturate(graph: ResolutionGraph, D: Divisor, order: Optional[Sequence[str]] = None) -> Divisor:
    """
    Modified numerical cycle: the minimal D' >= D with -D' nef.
    `order` fixes the priority in which curves are added; the result does not depend on it.
    """
    _require_effective_integral(D)
    if D.is_zero():
        raise InputError("saturate needs a nonzero divisor")
    graph.form.check_support(D)
    candidates = list(order) if order is not None else list(graph.ids)
    if set(candidates) != set(graph.ids):
        raise InputError("saturation order must list every vertex exactly once")
    steps = 0
    while True:
        vid = _first_positive(graph, D, candidates)
        if vid is None:
            logger.debug("saturate: %d step(s)", steps)
            return D
        D = D + Divisor.basis(vid)
        steps += 1


def connected_subsets(graph: ResolutionGraph, cap: Optional[int] = None) -> List[FrozenSet[str]]:
    """All nonempty connected vertex sets, ordered by size then by vertex positions."""
    cap = get_settings().subset_cap if cap is None else cap
    n = len(graph)
    if n > cap:
        raise PreconditionError(
            f"graph has {n} vertices; connected-subset enumeration is capped at {cap} (NUMRAT_SUBSET_CAP)"
        )
    ids = graph.ids
    adjacency = [0] * n
    pos = {vid: i for i, vid in enumerate(ids)}
    for e in graph.edges:
        adjacency[pos[e.a]] |= 1 << pos[e.b]
        adjacency[pos[e.b]] |= 1 << pos[e.a]

    out: List[Tuple[int, Tuple[int, ...], FrozenSet[str]]] = []
    for mask in range(1, 1 << n):
        start = mask & -mask
        reached = start
        frontier = start
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            fresh = adjacency[low.bit_length() - 1] & mask & ~reached
            reached |= fresh
            frontier |= fresh
        if reached == mask:
            members = tuple(i for i in range(n) if mask >> i & 1)
            out.append((len(members), members, frozenset(ids[i] for i in members)))
    out.sort(key=lambda t: (t[0], t[1]))
    return [s for _, _, s in out]


def special_divisors(graph: ResolutionGraph) -> List[Divisor]:
    seen = set()
    out = []
    for S in connected_subsets(graph):
        Z = _numerical_cycle(graph, S)
        if Z not in seen:
            seen.add(Z)
            out.append(Z)
    return out


def closed_form_multiplicity(graph: ResolutionGraph, support: Iterable[str]) -> int:
    return 2 + sum(graph.b(vid) - 2 for vid in support)


def multiplicity(graph: ResolutionGraph, D: Divisor) -> int:
    """m(D) = -D_num^2; agrees with 2 + sum (b_j - 2) on log terminal supports."""
    supp = _require_connected(graph, D.support)
    if not D.is_effective():
        raise InputError(f"divisor must be effective: {D!r}")
    Z = _numerical_cycle(graph, supp)
    m = -pair(graph.form, Z, Z)
    if m.denominator != 1 or m <= 0:
        raise InvariantError(f"multiplicity {m} of {D!r} is not a positive integer")
    sub = graph.subgraph(supp)
    if all(v.b >= 2 for v in sub.vertices) and is_log_terminal_graph(sub):
        closed = closed_form_multiplicity(graph, supp)
        if closed != m:
            raise InvariantError(f"multiplicity {m} disagrees with closed form {closed} on {graph.sort_ids(supp)}")
    return int(m)


def min_s(graph: ResolutionGraph, D: Divisor) -> int:
    """Least s with D <= s Z_num, Z_num the numerical cycle of the whole graph."""
    if not D.is_effective():
        raise InputError(f"divisor must be effective: {D!r}")
    graph.form.check_support(D)
    Z = Divisor.zero()
    for comp in connected_components(graph.form, graph.ids):
        Z = Z + _numerical_cycle(graph, comp)
    return max((ceil(D[vid] / Z[vid]) for vid in D.support), default=0)


def decompose(graph: ResolutionGraph, D: Divisor) -> Decomposition:
    _require_effective_integral(D)
    supp = _require_connected(graph, D.support)
    sub = graph.subgraph(supp)
    if not is_log_terminal_graph(sub):
        raise PreconditionError("decompose needs a divisor supported on a log terminal subgraph")
    m = multiplicity(graph, D)
    if m == 2:
        return Decomposition(D, ())

    heavy = [vid for vid in graph.sort_ids(supp) if graph.b(vid) > 2]
    if not heavy:
        raise PreconditionError(f"multiplicity {m} > 2 but no vertex of {graph.sort_ids(supp)} has b > 2")
    n = min(D[vid] for vid in heavy)
    D_num = _numerical_cycle(graph, supp)
    d1 = (n * D_num).meet(D)
    rest = D - d1
    comps = tuple(rest.restrict(c) for c in connected_components(graph.form, rest.support))

    if d1.is_zero():
        raise InvariantError(f"decomposition of {D!r} produced an empty first part")
    cross = pair(graph.form, d1, rest)
    if cross > 0:
        raise InvariantError(f"decomposition of {D!r}: D1 . D2 = {cross} > 0")
    for C in comps:
        mc = multiplicity(graph, C)
        if mc >= m:
            raise InvariantError(f"decomposition of {D!r}: component {C!r} has multiplicity {mc} >= {m}")
    logger.debug("decompose: m=%d n=%s into %d piece(s)", m, n, 1 + len(comps))
    return Decomposition(d1, comps)
