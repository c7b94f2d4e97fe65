"""
core/birational.py
Blowups and blowdowns of order configurations, divisor transport, N-cycles
and minimalization.

Transport rules (nodal ramification only):
- blowing up a point on <= 1 ramified component gives an unramified E0;
- blowing up a node of ramified components with indices e2 | e1 gives e0 = e2;
- components through the centre lose one point of mutual intersection and one
  from their self-intersection; E0 meets each of them once.
K_B = beta^* K_A + (1/e1) E0, where e1 is the largest index through the centre.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from core.discrepancy import non_minimal_vertices
from core.errors import InputError, PreconditionError, ValidationFailed
from core.lattice import Divisor
from core.model import Edge, OrderConfig, RamCurve, ResolutionGraph, Vertex, validate

logger = logging.getLogger("numrat.birational")

BLOWUP = "blowup"
BLOWDOWN = "blowdown"


@dataclass(frozen=True)
class BlowupCenter:
    through: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        through = tuple(self.through)
        if len(through) > 2:
            raise InputError(f"a blowup centre lies on at most two components, got {len(through)}")
        if len(set(through)) != len(through):
            raise InputError("blowup centre lists the same component twice")
        object.__setattr__(self, "through", through)


@dataclass(frozen=True)
class BirationalMap:
    """
    One blowup (or its inverse). `vertex` is the exceptional curve E0 on the
    upper surface; `through` are the components of the lower surface through
    the centre and `position` is where E0 sits in the upper vertex order.
    """

    kind: str
    vertex: str
    through: Tuple[str, ...]
    vertex_through: Tuple[str, ...]
    centre_index: int = 1
    e0: int = 1
    position: Optional[int] = None

    def inverse(self) -> "BirationalMap":
        return replace(self, kind=BLOWDOWN if self.kind == BLOWUP else BLOWUP)


# -----------------------------
# Helpers
# -----------------------------
def fresh_vertex_id(config: OrderConfig) -> str:
    taken = set(config.graph.ids) | {c.id for c in config.curves}
    k = 1
    while f"E{k}" in taken:
        k += 1
    return f"E{k}"


def _pair_count(config: OrderConfig, x: str, y: str) -> Tuple[int, int]:
    """(intersection number, transverse points) between two components."""
    graph = config.graph
    if x in graph and y in graph:
        m = graph.edge_mult(x, y)
        return m, m
    if x in graph or y in graph:
        vid, cid = (x, y) if x in graph else (y, x)
        c = config.curve(cid)
        return c.meet(vid), c.points(vid)
    m = config.curve(x).cross(y)
    return m, m


def _comparable(e: int, f: int) -> bool:
    return e % f == 0 or f % e == 0


def _centre_indices(config: OrderConfig, through: Sequence[str]) -> Tuple[int, int]:
    """(e1, e0) for a centre on the given components."""
    indices = [config.index_of(ref) for ref in through]
    ramified = [e for e in indices if e > 1]
    e1 = max(indices) if indices else 1
    if len(ramified) < 2:
        return e1, 1
    a, b = ramified
    if not _comparable(a, b):
        raise PreconditionError(
            f"ramified components {list(through)} meet with incomparable indices {a} and {b}"
        )
    return e1, min(a, b)


def _with_vertex(vertices: Sequence[Vertex], vid: str, delta: int) -> List[Vertex]:
    return [replace(v, self_intersection=v.self_intersection + delta) if v.id == vid else v for v in vertices]


def _edge_map(graph: ResolutionGraph) -> Dict[frozenset, int]:
    return {frozenset((e.a, e.b)): e.mult for e in graph.edges}


def _edges_from(edge_map: Dict[frozenset, int]) -> Tuple[Edge, ...]:
    out = []
    for key, mult in edge_map.items():
        if mult:
            a, b = sorted(key)
            out.append(Edge(a, b, mult))
    return tuple(out)


# -----------------------------
# Blowup / blowdown
# -----------------------------
def blowup(
    config: OrderConfig,
    center: BlowupCenter,
    new_id: Optional[str] = None,
    position: Optional[int] = None,
) -> Tuple[OrderConfig, BirationalMap]:
    graph = config.graph
    through = center.through
    for ref in through:
        if not config.has_component(ref):
            raise InputError(f"blowup centre refers to unknown component {ref}")
    vertex_through = tuple(ref for ref in through if ref in graph)
    curve_through = tuple(ref for ref in through if ref not in graph)
    if len(graph) and not vertex_through:
        raise PreconditionError("blowup centre must lie on the exceptional locus")
    if len(through) == 2:
        m, pts = _pair_count(config, *through)
        if m < 1:
            raise PreconditionError(f"components {list(through)} do not meet")
        if pts < m:
            raise PreconditionError(f"components {list(through)} meet tangentially; only transverse centres are supported")
    for vid in vertex_through:
        for cid in curve_through:
            c = config.curve(cid)
            if c.points(vid) < c.meet(vid):
                raise PreconditionError(f"curve {cid} is tangent to {vid}; only transverse centres are supported")
    e1, e0 = _centre_indices(config, through)

    vid0 = new_id or fresh_vertex_id(config)
    if config.has_component(vid0):
        raise InputError(f"vertex id {vid0} is already in use")

    vertices = list(graph.vertices)
    for vid in vertex_through:
        vertices = _with_vertex(vertices, vid, -1)
    pos = len(vertices) if position is None else position
    if not 0 <= pos <= len(vertices):
        raise InputError(f"vertex position {pos} out of range")
    vertices.insert(pos, Vertex(vid0, -1, 0))

    edges = _edge_map(graph)
    if len(vertex_through) == 2:
        key = frozenset(vertex_through)
        edges[key] = edges[key] - 1
    for vid in vertex_through:
        edges[frozenset((vid, vid0))] = 1

    curves = []
    for c in config.curves:
        if c.id not in curve_through:
            curves.append(c)
            continue
        meets, points = dict(c.meets), dict(c.distinct_points)
        for vid in vertex_through:
            meets[vid] -= 1
            points[vid] -= 1
            if not meets[vid]:
                del meets[vid]
                del points[vid]
        meets[vid0] = 1
        points[vid0] = 1
        crosses = dict(c.crosses)
        for other in curve_through:
            if other != c.id:
                crosses[other] -= 1
        curves.append(RamCurve(c.id, c.index, meets, points, crosses))

    exc_ram = dict(config.exc_ram)
    exc_ram[vid0] = e0
    upper = OrderConfig(ResolutionGraph(tuple(vertices), _edges_from(edges)), exc_ram, tuple(curves), config.rank_root)
    bmap = BirationalMap(BLOWUP, vid0, through, vertex_through, e1, e0, pos)
    logger.debug("blowup at %s -> %s (e0=%d, e1=%d)", list(through) or "smooth point", vid0, e0, e1)
    return upper, bmap


def _blowdown_pattern(config: OrderConfig, vertex: str) -> Tuple[str, ...]:
    graph = config.graph
    v = graph.vertex(vertex)
    if v.self_intersection != -1 or v.genus != 0:
        raise PreconditionError(f"vertex {vertex} is not a rational (-1)-curve")
    through: List[str] = []
    for other, mult in graph.neighbours(vertex).items():
        if mult != 1:
            raise PreconditionError(f"not a recognized blowup pattern: {vertex} meets {other} with multiplicity {mult}")
        through.append(other)
    for c in config.curves:
        m = c.meet(vertex)
        if not m:
            continue
        if m != 1 or c.points(vertex) != 1:
            raise PreconditionError(f"not a recognized blowup pattern: curve {c.id} meets {vertex} {m} times")
        through.append(c.id)
    if len(through) > 2:
        raise PreconditionError(f"not a recognized blowup pattern: {vertex} meets {len(through)} components")
    indices = [config.index_of(ref) for ref in through if config.index_of(ref) > 1]
    if len(indices) == 2:
        expected = min(indices) if _comparable(*indices) else None
    else:
        expected = 1
    if expected is None or config.e(vertex) != expected:
        raise PreconditionError(
            f"not a recognized blowup pattern: ramification index {config.e(vertex)} on {vertex} "
            f"does not match the components through it"
        )
    return tuple(graph.sort_ids(t for t in through if t in graph)) + tuple(t for t in through if t not in graph)


def blowdown(config: OrderConfig, vertex: str) -> Tuple[OrderConfig, BirationalMap]:
    through = _blowdown_pattern(config, vertex)
    graph = config.graph
    vertex_through = tuple(t for t in through if t in graph)
    curve_through = tuple(t for t in through if t not in graph)
    pos = graph.position(vertex)

    vertices = [v for v in graph.vertices if v.id != vertex]
    for vid in vertex_through:
        vertices = _with_vertex(vertices, vid, +1)
    edges = {k: m for k, m in _edge_map(graph).items() if vertex not in k}
    if len(vertex_through) == 2:
        key = frozenset(vertex_through)
        edges[key] = edges.get(key, 0) + 1

    curves = []
    for c in config.curves:
        if c.id not in curve_through:
            curves.append(c)
            continue
        meets = {k: m for k, m in c.meets.items() if k != vertex}
        points = {k: p for k, p in c.distinct_points.items() if k != vertex}
        for vid in vertex_through:
            meets[vid] = meets.get(vid, 0) + 1
            points[vid] = points.get(vid, 0) + 1
        crosses = dict(c.crosses)
        for other in curve_through:
            if other != c.id:
                crosses[other] = crosses.get(other, 0) + 1
        curves.append(RamCurve(c.id, c.index, meets, points, crosses))

    exc_ram = {k: e for k, e in config.exc_ram.items() if k != vertex}
    e1, e0 = _centre_indices(config, through)
    lower = OrderConfig(ResolutionGraph(tuple(vertices), _edges_from(edges)), exc_ram, tuple(curves), config.rank_root)
    bmap = BirationalMap(BLOWDOWN, vertex, through, vertex_through, e1, e0, pos)
    logger.debug("blowdown of %s onto %s", vertex, list(through) or "smooth point")
    return lower, bmap


def pullback(bmap: BirationalMap, D: Divisor) -> Divisor:
    """Lower surface -> upper surface: adds mult_p(D) E0."""
    if bmap.vertex in D.support:
        raise InputError(f"divisor already involves the exceptional curve {bmap.vertex}")
    m = sum((D[vid] for vid in bmap.vertex_through), Fraction(0))
    return D + m * Divisor.basis(bmap.vertex)


def pushforward(bmap: BirationalMap, D: Divisor) -> Divisor:
    return D.drop(bmap.vertex)


def chi_shift(config: OrderConfig, bmap: BirationalMap, m: int) -> Fraction:
    """chi(after, pullback(E) + m E0) - chi(before, E)."""
    return Fraction(config.r2, 2) * m * (m + Fraction(1, bmap.centre_index))


# -----------------------------
# Graph-level contraction
# -----------------------------
def contract(graph: ResolutionGraph, vertex: str) -> Tuple[ResolutionGraph, BirationalMap]:
    """Contract a rational (-1)-curve of the surface, ignoring ramification."""
    lower, bmap = blowdown(OrderConfig(graph), vertex)
    return lower.graph, bmap


def _contractible(graph: ResolutionGraph, vid: str) -> bool:
    v = graph.vertex(vid)
    nbrs = graph.neighbours(vid)
    return v.b == 1 and v.genus == 0 and len(nbrs) <= 2 and all(m == 1 for m in nbrs.values())


# -----------------------------
# Towers
# -----------------------------
@dataclass(frozen=True)
class Tower:
    """base --maps--> top; every map is stored as an upward blowup."""

    base: OrderConfig
    maps: Tuple[BirationalMap, ...] = field(default_factory=tuple)
    top: Optional[OrderConfig] = None

    def __post_init__(self) -> None:
        if self.top is None:
            object.__setattr__(self, "top", self.base)
        object.__setattr__(self, "maps", tuple(self.maps))

    @classmethod
    def identity(cls, config: OrderConfig) -> "Tower":
        return cls(config, (), config)

    def blowup(self, center: BlowupCenter) -> "Tower":
        upper, bmap = blowup(self.top, center)
        return Tower(self.base, self.maps + (bmap,), upper)

    def replay(self) -> OrderConfig:
        config = self.base
        for bmap in self.maps:
            config, _ = blowup(config, BlowupCenter(bmap.through), new_id=bmap.vertex, position=bmap.position)
        return config

    def lift(self, D: Divisor) -> Divisor:
        for bmap in self.maps:
            D = pullback(bmap, D)
        return D

    def descend(self, D: Divisor) -> Divisor:
        for bmap in reversed(self.maps):
            D = pushforward(bmap, D)
        return D

    def created(self) -> Tuple[str, ...]:
        return tuple(bmap.vertex for bmap in self.maps)

    def with_top(self, config: OrderConfig) -> "Tower":
        if config.graph != self.top.graph:
            raise InputError("with_top needs a config on the same resolution graph as the tower top")
        return Tower(self.base, self.maps, config)


def n_cycle(tower: Tower, vertex: str) -> Divisor:
    """N = tau^* tau_* E_vertex, tau contracting every other (-1)-curve."""
    graph = tower.top.graph
    graph.vertex(vertex)
    steps: List[BirationalMap] = []
    while True:
        pending = [v.id for v in graph.vertices if v.id != vertex and v.b == 1 and v.genus == 0]
        if not pending:
            break
        target = next((vid for vid in pending if _contractible(graph, vid)), None)
        if target is None:
            raise PreconditionError(f"contraction blocked: (-1)-curves {pending} cannot be blown down")
        graph, bmap = contract(graph, target)
        steps.append(bmap)
    D = Divisor.basis(vertex)
    for bmap in steps:
        D = pushforward(bmap, D)
    for bmap in reversed(steps):
        D = pullback(bmap, D)
    return D


def minimalize(config: OrderConfig) -> Tuple[OrderConfig, Tower]:
    report = validate(config)
    if not report.ok:
        raise ValidationFailed(report)
    current = config
    downs: List[BirationalMap] = []
    while True:
        negative = non_minimal_vertices(current)
        if not negative:
            break
        for vid in negative:
            try:
                current, bmap = blowdown(current, vid)
            except PreconditionError as e:
                logger.debug("skipping %s: %s", vid, e.detail)
                continue
            downs.append(bmap)
            logger.info("minimalize: contracted %s", vid)
            break
        else:
            raise PreconditionError(f"K_A-negative (-1)-curves {negative} cannot be blown down")
    tower = Tower(current, tuple(b.inverse() for b in reversed(downs)), config)
    return current, tower
