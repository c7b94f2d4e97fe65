"""
core/catalogue.py
Generators for log terminal resolution graphs and the named fixtures used by
tests and by `main.py catalogue`.

Graph shapes:
- Hirzebruch-Jung chains from n/q = b1 - 1/(b2 - 1/(...))
- ADE graphs and star-shaped trees with chain arms
- the fork-plus-chain (case1) and E6-like (case2) shapes with known Z_num
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from core.birational import BlowupCenter, Tower
from core.discrepancy import classify, is_log_terminal_graph, is_nef
from core.errors import InputError, PreconditionError
from core.lattice import Divisor
from core.model import Edge, OrderConfig, RamCurve, ResolutionGraph, Vertex, validate

logger = logging.getLogger("numrat.catalogue")

PUBLISHED = "PUBLISHED"
DERIVED = "DERIVED"

LOG_TERMINAL = "log-terminal"
NOT_LOG_TERMINAL = "not-log-terminal"


@dataclass(frozen=True)
class Fixture:
    name: str
    config: OrderConfig
    expected: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, str] = field(default_factory=dict)
    description: str = ""


# -----------------------------
# Graph builders
# -----------------------------
def chain(weights: Sequence[int], start: int = 1) -> ResolutionGraph:
    ids = [f"E{start + i}" for i in range(len(weights))]
    vertices = tuple(Vertex(vid, -b) for vid, b in zip(ids, weights))
    edges = tuple(Edge(a, b) for a, b in zip(ids, ids[1:]))
    return ResolutionGraph(vertices, edges)


def hj_weights(n: int, q: int) -> List[int]:
    """Ceiling continued fraction of n/q."""
    if n < 2 or not 0 < q < n or gcd(n, q) != 1:
        raise InputError(f"cyclic({n}, {q}) needs n >= 2, 0 < q < n and gcd(n, q) = 1")
    out = []
    while q:
        b = -(-n // q)
        out.append(b)
        n, q = q, b * q - n
    return out


def cyclic(n: int, q: int) -> ResolutionGraph:
    return chain(hj_weights(n, q))


def star(center_weight: int, arms: Sequence[Sequence[int]]) -> ResolutionGraph:
    """Centre E1; each arm is a chain attached to E1 by its first vertex."""
    if center_weight < 1:
        raise InputError(f"centre weight must be positive, got {center_weight}")
    vertices = [Vertex("E1", -center_weight)]
    edges = []
    k = 2
    for arm in arms:
        if not arm:
            raise InputError("star arms must be nonempty")
        prev = "E1"
        for b in arm:
            vid = f"E{k}"
            vertices.append(Vertex(vid, -b))
            edges.append(Edge(prev, vid))
            prev = vid
            k += 1
    return ResolutionGraph(tuple(vertices), tuple(edges))


def ade(name: str) -> ResolutionGraph:
    key = name.strip().upper()
    kind, rest = key[:1], key[1:]
    if not rest.isdigit():
        raise InputError(f"unknown ADE graph {name!r}")
    n = int(rest)
    if kind == "A" and n >= 1:
        return chain([2] * n)
    if kind == "D" and n >= 4:
        return case1_graph([2] * n)
    if kind == "E" and n in (6, 7, 8):
        return star(2, [[2], [2, 2], [2] * (n - 4)])
    raise InputError(f"unknown ADE graph {name!r}")


def case1_graph(weights: Sequence[int]) -> ResolutionGraph:
    """
    Fork plus chain: E1 is the branch vertex, E2..E_{r-2} the chain hanging
    from it and E_{r-1}, E_r two (-2)-leaves on E1.
    """
    r = len(weights)
    if r < 3:
        raise InputError("case1 needs at least three weights")
    if any(b < 2 for b in weights):
        raise InputError("case1 weights must be >= 2")
    if weights[-1] != 2 or weights[-2] != 2:
        raise InputError("case1 leaves E_{r-1}, E_r must have weight 2")
    ids = [f"E{i}" for i in range(1, r + 1)]
    vertices = tuple(Vertex(vid, -b) for vid, b in zip(ids, weights))
    chain_ids = ids[1:r - 2]
    edges = []
    prev = ids[0]
    for vid in chain_ids:
        edges.append(Edge(prev, vid))
        prev = vid
    edges.append(Edge(ids[0], ids[r - 2]))
    edges.append(Edge(ids[0], ids[r - 1]))
    return ResolutionGraph(vertices, tuple(edges))


def case1_cycle(weights: Sequence[int]) -> Divisor:
    """2(E1 + ... + E_{j-1}) + E_j + ... + E_r, j the first heavy vertex on the fork-chain path."""
    r = len(weights)
    if r == 3:
        j = 1
    else:
        j = next((i for i in range(1, r - 1) if weights[i - 1] > 2), r - 2)
    return Divisor({f"E{i}": 2 if i < j else 1 for i in range(1, r + 1)})


def case2_graph(chain_weights: Sequence[int]) -> ResolutionGraph:
    """Chain E1..E5 with a (-2)-vertex E6 hanging from E3."""
    if len(chain_weights) != 5:
        raise InputError("case2 needs five chain weights")
    base = chain(chain_weights)
    return ResolutionGraph(base.vertices + (Vertex("E6", -2),), base.edges + (Edge("E3", "E6"),))


# -----------------------------
# Fixtures
# -----------------------------
CASE2_SHAPES: Dict[str, Tuple[Tuple[int, ...], Dict[str, int]]] = {
    "case2_23": ((2, 3, 2, 2, 2), {"E1": 1, "E2": 1, "E3": 2, "E4": 2, "E5": 1, "E6": 1}),
    "case2_32": ((3, 2, 2, 2, 2), {"E1": 1, "E2": 2, "E3": 3, "E4": 2, "E5": 1, "E6": 2}),
}


def paper_graph(name: str, weights: Optional[Sequence[int]] = None) -> Fixture:
    if name == "case1":
        weights = tuple(weights) if weights is not None else (2, 2, 3, 2, 2, 2)
        graph = case1_graph(weights)
        return Fixture(
            "case1",
            OrderConfig(graph),
            {"z_num": case1_cycle(weights), "multiplicity": 2 + sum(b - 2 for b in weights)},
            {"z_num": PUBLISHED, "multiplicity": PUBLISHED},
            f"fork plus chain with weights {list(weights)}",
        )
    if name in CASE2_SHAPES:
        if weights is not None:
            raise InputError(f"{name} takes no parameters")
        chain_weights, z = CASE2_SHAPES[name]
        return Fixture(
            name,
            OrderConfig(case2_graph(chain_weights)),
            {"z_num": Divisor(z), "multiplicity": 3},
            {"z_num": PUBLISHED, "multiplicity": PUBLISHED},
            f"chain {list(chain_weights)} with a (-2)-vertex on E3",
        )
    raise InputError(f"unknown named graph {name!r}; expected case1, case2_23 or case2_32")


def e6_tilde_order() -> Fixture:
    """Simple elliptic vertex with two index-2 curves, each meeting it in 3 points."""
    graph = ResolutionGraph((Vertex("E", -3, 1),))
    curves = tuple(RamCurve(cid, 2, {"E": 3}, {"E": 3}) for cid in ("D1", "D2"))
    config = OrderConfig(graph, {"E": 2}, curves, 2)
    return Fixture(
        "e6_tilde",
        config,
        {
            "canonical_dot": Fraction(9, 2),
            "delta_dot": Fraction(3, 2),
            "order_discrepancy": Fraction(-3, 2),
            "chi": {m: 3 * m * (2 * m - 3) for m in range(1, 6)},
            "cover_euler_char": Fraction(-3),
            "chi_A_mod_J": Fraction(-3),
            "rational": False,
            "witness": Divisor({"E": 1}),
            "witness_chi": Fraction(-3),
        },
        {
            "canonical_dot": PUBLISHED,
            "delta_dot": DERIVED,
            "order_discrepancy": DERIVED,
            "chi": PUBLISHED,
            "cover_euler_char": DERIVED,
            "chi_A_mod_J": DERIVED,
            "rational": PUBLISHED,
            "witness": PUBLISHED,
            "witness_chi": PUBLISHED,
        },
        "maximal order of rank 4 over the simple elliptic singularity of degree 3",
    )


def crepant_vertex() -> Fixture:
    graph = ResolutionGraph((Vertex("E", -4),))
    return Fixture(
        "crepant",
        OrderConfig(graph, {"E": 2}, (), 2),
        {"canonical_dot": Fraction(0), "chi": {1: Fraction(8)}, "crepant": True, "rational": True},
        {"canonical_dot": DERIVED, "chi": DERIVED, "crepant": DERIVED, "rational": PUBLISHED},
        "single (-4)-curve ramified with index 2 in a rank-4 order",
    )


def cyclic_fixture(n: int = 12, q: int = 5) -> Fixture:
    return Fixture(
        f"cyclic_{n}_{q}",
        OrderConfig(cyclic(n, q)),
        {"weights": hj_weights(n, q), "log_terminal": True},
        {"weights": DERIVED, "log_terminal": DERIVED},
        f"Hirzebruch-Jung chain of the cyclic quotient 1/{n}(1, {q})",
    )


FIXTURES: Dict[str, Callable[[], Fixture]] = {
    "e6_tilde": e6_tilde_order,
    "case2_23": lambda: paper_graph("case2_23"),
    "case2_32": lambda: paper_graph("case2_32"),
    "case1": lambda: paper_graph("case1"),
    "crepant": crepant_vertex,
    "cyclic_12_5": cyclic_fixture,
}


def fixture(name: str) -> Fixture:
    try:
        factory = FIXTURES[name]
    except KeyError:
        raise InputError(f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}") from None
    return factory()


# -----------------------------
# Random generators
# -----------------------------
PLATONIC_ARMS = ((2, 2, None), (2, 3, 3), (2, 3, 4), (2, 3, 5))
MAX_TRIES = 500


def _random_hj(rng: random.Random, n: int) -> List[int]:
    q = rng.choice([q for q in range(1, n) if gcd(n, q) == 1])
    return hj_weights(n, q)


def _random_shape(rng: random.Random, max_vertices: int, max_weight: int) -> ResolutionGraph:
    family = rng.choice(("chain", "case1", "star"))
    if family == "chain" or max_vertices < 4:
        length = rng.randint(1, max_vertices)
        return chain([rng.randint(2, max_weight) for _ in range(length)])
    if family == "case1":
        r = rng.randint(3, max_vertices)
        body = [rng.choice((2, 2, rng.randint(2, max_weight))) for _ in range(r - 2)]
        return case1_graph(body + [2, 2])
    ns = list(rng.choice(PLATONIC_ARMS))
    if ns[2] is None:
        ns[2] = rng.randint(2, max(2, max_vertices))
    arms = [_random_hj(rng, n) for n in ns]
    return star(rng.randint(2, max_weight), arms)


def random_log_terminal(seed: int, max_vertices: int = 8, max_weight: int = 5) -> ResolutionGraph:
    if max_vertices < 1 or max_weight < 1:
        raise InputError("bounds must be >= 1")
    rng = random.Random(seed)
    max_weight = max(2, max_weight)
    for _ in range(MAX_TRIES):
        graph = _random_shape(rng, max_vertices, max_weight)
        if len(graph) <= max_vertices and is_log_terminal_graph(graph):
            return graph
    raise PreconditionError(f"no log terminal graph found within {MAX_TRIES} tries (seed {seed})")


DIVISOR_CHAINS = {2: (1, 2), 3: (1, 3), 4: (1, 2, 4), 6: (1, 2, 6)}


def random_order_config(
    seed: int,
    max_vertices: int = 6,
    max_weight: int = 4,
    max_curves: int = 2,
) -> Tuple[OrderConfig, str]:
    """Random ramification on a random log terminal graph; indices come from one divisor chain of r."""
    rng = random.Random(seed)
    graph = random_log_terminal(rng.randrange(1 << 30), max_vertices, max_weight)
    r = rng.choice(sorted(DIVISOR_CHAINS))
    indices = DIVISOR_CHAINS[r]
    exc_ram = {vid: rng.choice((1, 1) + indices) for vid in graph.ids}
    curves = []
    for k in range(rng.randint(0, max_curves)):
        index = rng.choice([e for e in indices if e > 1])
        curves.append(RamCurve(f"C{k + 1}", index, {rng.choice(graph.ids): 1}))
    config = OrderConfig(graph, exc_ram, tuple(curves), r)
    label = NOT_LOG_TERMINAL
    if validate(config).ok and is_nef(config) and classify(config).log_terminal:
        label = LOG_TERMINAL
    return config, label


def random_tower(seed: int, base_max_vertices: int = 4, depth: int = 4) -> Tower:
    """Up to `depth` blowups at points or nodes of the exceptional locus over an unramified base."""
    rng = random.Random(seed)
    base = OrderConfig(random_log_terminal(rng.randrange(1 << 30), base_max_vertices, 4))
    tower = Tower.identity(base)
    for _ in range(rng.randint(1, depth)):
        graph = tower.top.graph
        centres = [(vid,) for vid in graph.ids] + [(e.a, e.b) for e in graph.edges]
        tower = tower.blowup(BlowupCenter(rng.choice(centres)))
    return tower
