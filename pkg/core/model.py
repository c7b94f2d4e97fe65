"""
core/model.py
Input data model: resolution graph, ramification data and order rank.

ResolutionGraph  weighted dual graph (E_i^2, genus, edge multiplicities)
RamCurve         non-exceptional ramification curve with index e_C >= 2
OrderConfig      graph + exceptional indices + curves + rank root r

Canonical data is carried only through pairings with exceptional curves:
K_Z . E_i = b_i + 2 g_i - 2 and Delta_A . E from the ramification indices.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from core.errors import InputError
from core.lattice import Divisor, IntersectionForm, is_negative_definite, pair

logger = logging.getLogger("numrat.model")


# -----------------------------
# Graph
# -----------------------------
@dataclass(frozen=True)
class Vertex:
    id: str
    self_intersection: int
    genus: int = 0

    @property
    def b(self) -> int:
        return -self.self_intersection


@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    mult: int = 1


@dataclass(frozen=True)
class ResolutionGraph:
    vertices: Tuple[Vertex, ...] = ()
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        vertices = tuple(self.vertices)
        ids = [v.id for v in vertices]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate vertex id in resolution graph")
        for v in vertices:
            if v.self_intersection >= 0:
                raise InputError(f"vertex {v.id}: self_intersection must be negative, got {v.self_intersection}")
            if v.genus < 0:
                raise InputError(f"vertex {v.id}: genus must be non-negative, got {v.genus}")
        position = {vid: i for i, vid in enumerate(ids)}
        seen = set()
        normalised = []
        for e in self.edges:
            if e.a not in position or e.b not in position:
                missing = e.a if e.a not in position else e.b
                raise InputError(f"edge ({e.a}, {e.b}) refers to unknown vertex {missing}")
            if e.a == e.b:
                raise InputError(f"self-edge at vertex {e.a}")
            if e.mult < 1:
                raise InputError(f"edge ({e.a}, {e.b}): multiplicity must be positive, got {e.mult}")
            a, b = sorted((e.a, e.b), key=position.__getitem__)
            if (a, b) in seen:
                raise InputError(f"more than one edge between {a} and {b}")
            seen.add((a, b))
            normalised.append(Edge(a, b, e.mult))
        normalised.sort(key=lambda e: (position[e.a], position[e.b]))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(normalised))

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, vid: object) -> bool:
        return any(v.id == vid for v in self.vertices)

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise InputError(f"unknown vertex id: {vid}")

    def position(self, vid: str) -> int:
        return self.form.index(vid)

    def b(self, vid: str) -> int:
        return self.vertex(vid).b

    def genus(self, vid: str) -> int:
        return self.vertex(vid).genus

    def edge_mult(self, a: str, b: str) -> int:
        for e in self.edges:
            if {e.a, e.b} == {a, b}:
                return e.mult
        return 0

    def neighbours(self, vid: str) -> Dict[str, int]:
        self.vertex(vid)
        out: Dict[str, int] = {}
        for e in self.edges:
            if e.a == vid:
                out[e.b] = e.mult
            elif e.b == vid:
                out[e.a] = e.mult
        return out

    @property
    def form(self) -> IntersectionForm:
        return intersection_form(self)

    def sort_ids(self, ids: Iterable[str]) -> List[str]:
        return sorted(ids, key=self.form.index)

    def subgraph(self, ids: Iterable[str]) -> "ResolutionGraph":
        keep = set(ids)
        for vid in keep:
            self.vertex(vid)
        return ResolutionGraph(
            tuple(v for v in self.vertices if v.id in keep),
            tuple(e for e in self.edges if e.a in keep and e.b in keep),
        )

    def is_connected(self, ids: Optional[Iterable[str]] = None) -> bool:
        nodes = set(self.ids if ids is None else ids)
        if not nodes:
            return True
        return nx.is_connected(to_networkx(self).subgraph(nodes))


@lru_cache(maxsize=4096)
def intersection_form(graph: ResolutionGraph) -> IntersectionForm:
    ids = graph.ids
    index = {vid: i for i, vid in enumerate(ids)}
    rows = [[0] * len(ids) for _ in ids]
    for v in graph.vertices:
        rows[index[v.id]][index[v.id]] = v.self_intersection
    for e in graph.edges:
        rows[index[e.a]][index[e.b]] = e.mult
        rows[index[e.b]][index[e.a]] = e.mult
    return IntersectionForm(ids, tuple(tuple(r) for r in rows))


@lru_cache(maxsize=4096)
def to_networkx(graph: ResolutionGraph) -> nx.Graph:
    G = nx.Graph()
    for v in graph.vertices:
        G.add_node(v.id, b=v.b, genus=v.genus)
    for e in graph.edges:
        G.add_edge(e.a, e.b, mult=e.mult)
    return G


# -----------------------------
# Ramification data
# -----------------------------
@dataclass(frozen=True)
class RamCurve:
    id: str
    index: int
    meets: Mapping[str, int] = field(default_factory=dict)
    distinct_points: Optional[Mapping[str, int]] = None
    crosses: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.index < 2:
            raise InputError(f"curve {self.id}: ramification index must be >= 2, got {self.index}")
        meets = {str(k): int(v) for k, v in self.meets.items() if v}
        if any(v < 0 for v in meets.values()):
            raise InputError(f"curve {self.id}: intersection numbers must be non-negative")
        given = self.distinct_points or {}
        points = {k: int(given.get(k, m)) for k, m in meets.items()}
        stray = set(given) - set(meets)
        if stray:
            raise InputError(f"curve {self.id}: distinct_points given for vertices it does not meet: {sorted(stray)}")
        crosses = {str(k): int(v) for k, v in self.crosses.items() if v}
        if any(v < 0 for v in crosses.values()):
            raise InputError(f"curve {self.id}: crossings must be non-negative")
        object.__setattr__(self, "meets", meets)
        object.__setattr__(self, "distinct_points", points)
        object.__setattr__(self, "crosses", crosses)

    def meet(self, vid: str) -> int:
        return self.meets.get(vid, 0)

    def points(self, vid: str) -> int:
        return self.distinct_points.get(vid, 0)

    def cross(self, cid: str) -> int:
        return self.crosses.get(cid, 0)


@dataclass(frozen=True)
class OrderConfig:
    graph: ResolutionGraph
    exc_ram: Mapping[str, int] = field(default_factory=dict)
    curves: Tuple[RamCurve, ...] = ()
    rank_root: int = 1

    def __post_init__(self) -> None:
        if self.rank_root < 1:
            raise InputError(f"rank root must be positive, got {self.rank_root}")
        for vid in self.exc_ram:
            if vid not in self.graph:
                raise InputError(f"ramification index given for unknown vertex {vid}")
        ram = {vid: int(self.exc_ram.get(vid, 1)) for vid in self.graph.ids}
        for vid, e in ram.items():
            if e < 1:
                raise InputError(f"vertex {vid}: ramification index must be >= 1, got {e}")
        curves = tuple(self.curves)
        cids = [c.id for c in curves]
        if len(set(cids)) != len(cids):
            raise InputError("duplicate ramification curve id")
        for c in curves:
            for vid in c.meets:
                if vid not in self.graph:
                    raise InputError(f"curve {c.id} meets unknown vertex {vid}")
            for other in c.crosses:
                if other not in cids or other == c.id:
                    raise InputError(f"curve {c.id} crosses unknown curve {other}")
        object.__setattr__(self, "exc_ram", ram)
        object.__setattr__(self, "curves", curves)

    @property
    def r2(self) -> int:
        return self.rank_root * self.rank_root

    def e(self, vid: str) -> int:
        self.graph.vertex(vid)
        return self.exc_ram[vid]

    def curve(self, cid: str) -> RamCurve:
        for c in self.curves:
            if c.id == cid:
                return c
        raise InputError(f"unknown ramification curve: {cid}")

    def has_component(self, ref: str) -> bool:
        return ref in self.graph or any(c.id == ref for c in self.curves)

    def index_of(self, ref: str) -> int:
        """Ramification index of a vertex or curve."""
        if ref in self.graph:
            return self.exc_ram[ref]
        return self.curve(ref).index

    def is_ramified(self, ref: str) -> bool:
        return self.index_of(ref) > 1


def unramified(config: OrderConfig) -> OrderConfig:
    return OrderConfig(config.graph)


def with_curves(config: OrderConfig, curves: Iterable[RamCurve]) -> OrderConfig:
    return replace(config, curves=tuple(curves))


def with_rank(config: OrderConfig, rank_root: int) -> OrderConfig:
    return replace(config, rank_root=rank_root)


# -----------------------------
# Validation
# -----------------------------
@dataclass(frozen=True)
class Violation:
    code: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _comparable(e: int, f: int) -> bool:
    return e % f == 0 or f % e == 0


def validate(config: OrderConfig) -> ValidationReport:
    graph = config.graph
    found: List[Violation] = []

    def add(code: str, location: str, message: str) -> None:
        found.append(Violation(code, location, message))

    # (a) graph
    if len(graph) and not is_negative_definite(graph.form):
        add("not-negative-definite", "graph", "intersection form is not negative definite")
    if not graph.is_connected():
        add("not-connected", "graph", "resolution graph is not connected")

    # (b) divisibility by r
    r = config.rank_root
    for vid, e in config.exc_ram.items():
        if r % e:
            add("index-divides-rank", f"vertex {vid}", f"index {e} does not divide rank root {r}")
    for c in config.curves:
        if r % c.index:
            add("index-divides-rank", f"curve {c.id}", f"index {c.index} does not divide rank root {r}")

    vids = set(graph.ids)
    for c in config.curves:
        if c.id in vids:
            add("curve-id-clash", f"curve {c.id}", "curve id is also a vertex id")
        for vid, m in c.meets.items():
            if c.points(vid) > m or c.points(vid) < 1:
                add("distinct-points", f"curve {c.id} / {vid}",
                    f"distinct_points {c.points(vid)} must lie between 1 and the intersection number {m}")
        for other, n in c.crosses.items():
            if config.curve(other).cross(c.id) != n:
                add("crosses-asymmetric", f"curve {c.id} / {other}", "curve crossings are not symmetric")

    # (c), (d) node condition wherever two ramified components meet
    for e in graph.edges:
        ea, eb = config.e(e.a), config.e(e.b)
        if ea > 1 and eb > 1:
            loc = f"edge {e.a}-{e.b}"
            if not _comparable(ea, eb):
                add("node-divisibility", loc, f"indices {ea} and {eb} are not comparable under divisibility")
            if e.mult != 1:
                add("non-transverse", loc, f"ramified components meet with multiplicity {e.mult}")
    for c in config.curves:
        for vid, m in c.meets.items():
            ev = config.e(vid)
            if ev <= 1:
                continue
            loc = f"curve {c.id} / vertex {vid}"
            if not _comparable(ev, c.index):
                add("node-divisibility", loc, f"indices {c.index} and {ev} are not comparable under divisibility")
            if c.points(vid) != m:
                add("non-transverse", loc, f"intersection number {m} over {c.points(vid)} points")
    for i, c in enumerate(config.curves):
        for d in config.curves[i + 1:]:
            if not (c.cross(d.id) or d.cross(c.id)):
                continue
            if not _comparable(c.index, d.index):
                add("node-divisibility", f"curve {c.id} / curve {d.id}",
                    f"indices {c.index} and {d.index} are not comparable under divisibility")

    report = ValidationReport(tuple(found))
    if not report.ok:
        logger.debug("validation found %d violation(s)", len(found))
    return report


# -----------------------------
# Canonical and ramification pairings
# -----------------------------
def kz_dot(graph: ResolutionGraph, E: Divisor) -> Fraction:
    """K_Z . E from adjunction on each exceptional curve."""
    total = Fraction(0)
    for vid, c in E.items():
        v = graph.vertex(vid)
        total += c * (v.b + 2 * v.genus - 2)
    return total


def delta_dot(config: OrderConfig, E: Divisor) -> Fraction:
    graph = config.graph
    form = graph.form
    form.check_support(E)
    total = Fraction(0)
    for vid, e in config.exc_ram.items():
        if e > 1:
            total += (1 - Fraction(1, e)) * pair(form, Divisor.basis(vid), E)
    for c in config.curves:
        hit = sum((coeff * c.meet(vid) for vid, coeff in E.items()), Fraction(0))
        if hit:
            total += (1 - Fraction(1, c.index)) * hit
    return total


def canonical_dot(config: OrderConfig, E: Divisor) -> Fraction:
    """K_A . E = K_Z . E + Delta_A . E."""
    config.graph.form.check_support(E)
    return kz_dot(config.graph, E) + delta_dot(config, E)
