import random
from dataclasses import replace
from fractions import Fraction
from itertools import product

import pytest

from core.adjunction import chi_restriction
from core.birational import (
    BlowupCenter,
    Tower,
    blowdown,
    blowup,
    chi_shift,
    fresh_vertex_id,
    minimalize,
    n_cycle,
    pullback,
    pushforward,
)
from core.catalogue import chain, e6_tilde_order, random_order_config, random_tower, star
from core.discrepancy import classify, is_nef
from core.errors import InputError, PreconditionError
from core.lattice import Divisor, pair
from core.model import (
    Edge,
    OrderConfig,
    RamCurve,
    ResolutionGraph,
    Vertex,
    canonical_dot,
    validate,
    with_curves,
    with_rank,
)
from core.rationality import is_numerically_rational


def admissible_centres(config):
    """Points on one vertex, nodes between vertices, and vertex-curve meeting points."""
    graph = config.graph
    out = [(vid,) for vid in graph.ids]
    out += [(e.a, e.b) for e in graph.edges]
    for c in config.curves:
        out += [(vid, c.id) for vid in c.meets]
    return out


# -----------------------------
# blowup
# -----------------------------
def test_blowup_of_smooth_point():
    upper, bmap = blowup(OrderConfig(ResolutionGraph()), BlowupCenter())
    assert upper.graph == ResolutionGraph((Vertex("E1", -1),))
    assert upper.exc_ram == {"E1": 1}
    assert bmap.vertex == "E1"
    assert bmap.centre_index == 1


def test_blowup_at_node_of_ramification_curves(two_curves_node):
    upper, bmap = blowup(two_curves_node, BlowupCenter(("C1", "C2")))
    assert upper.e("E1") == 2
    assert bmap.e0 == 2
    assert bmap.centre_index == 2
    for cid in ("C1", "C2"):
        c = upper.curve(cid)
        assert c.meets == {"E1": 1}
        assert c.crosses == {}
    assert validate(upper).ok


def test_blowup_at_generic_point_of_ramified_vertex():
    config = OrderConfig(chain([2]), {"E1": 3}, (), 3)
    upper, bmap = blowup(config, BlowupCenter(("E1",)))
    assert upper.graph.b("E1") == 3
    assert upper.e("E2") == 1
    assert upper.graph.edge_mult("E1", "E2") == 1
    assert bmap.centre_index == 3
    assert canonical_dot(upper, Divisor.basis("E2")) == Fraction(-1, 3)


def test_blowup_at_vertex_curve_point():
    config = OrderConfig(chain([3]), {"E1": 2}, (RamCurve("C", 2, {"E1": 2}),), 2)
    upper, bmap = blowup(config, BlowupCenter(("E1", "C")))
    assert upper.e("E2") == 2
    assert upper.curve("C").meets == {"E1": 1, "E2": 1}
    assert upper.graph.b("E1") == 4
    assert validate(upper).ok


def test_blowup_at_edge():
    upper, bmap = blowup(OrderConfig(chain([2, 2])), BlowupCenter(("E1", "E2")))
    graph = upper.graph
    assert graph.edge_mult("E1", "E2") == 0
    assert graph.neighbours("E3") == {"E1": 1, "E2": 1}
    assert [v.b for v in graph.vertices] == [3, 3, 1]


def test_blowup_rejects_bad_centres():
    config = OrderConfig(chain([2, 2, 2]))
    with pytest.raises(PreconditionError, match="do not meet"):
        blowup(config, BlowupCenter(("E1", "E3")))
    with pytest.raises(InputError):
        blowup(config, BlowupCenter(("X",)))
    with pytest.raises(InputError):
        BlowupCenter(("E1", "E2", "E3"))
    with pytest.raises(PreconditionError):
        blowup(config, BlowupCenter())
    tangent = OrderConfig(chain([3]), {}, (RamCurve("C", 2, {"E1": 2}, {"E1": 1}),), 2)
    with pytest.raises(PreconditionError, match="tangent"):
        blowup(tangent, BlowupCenter(("E1", "C")))


def test_fresh_vertex_id_skips_curve_ids():
    config = OrderConfig(chain([2]), {}, (RamCurve("E2", 2, {"E1": 1}),), 2)
    assert fresh_vertex_id(config) == "E3"


# -----------------------------
# blowdown
# -----------------------------
def test_blowdown_between_two_curves():
    graph = ResolutionGraph(
        (Vertex("A", -3), Vertex("X", -1), Vertex("B", -3)),
        (Edge("A", "X"), Edge("X", "B")),
    )
    lower, bmap = blowdown(OrderConfig(graph), "X")
    assert lower.graph == ResolutionGraph((Vertex("A", -2), Vertex("B", -2)), (Edge("A", "B"),))
    assert bmap.through == ("A", "B")


def test_blowdown_rejects_unrecognized_patterns():
    with pytest.raises(PreconditionError, match="not a recognized blowup pattern"):
        blowdown(OrderConfig(star(1, [[2], [2], [2]])), "E1")
    with pytest.raises(PreconditionError):
        blowdown(OrderConfig(chain([2])), "E1")
    wrong_index = OrderConfig(ResolutionGraph((Vertex("E", -1),)), {"E": 2}, (), 2)
    with pytest.raises(PreconditionError, match="ramification index"):
        blowdown(wrong_index, "E")


def test_blowdown_inverts_node_blowup(two_curves_node):
    upper, _ = blowup(two_curves_node, BlowupCenter(("C1", "C2")))
    lower, _ = blowdown(upper, "E1")
    assert lower == two_curves_node


def test_blowup_then_blowdown_is_identity():
    cases = 0
    for seed in range(60):
        config, _ = random_order_config(seed, max_vertices=5)
        rng = random.Random(seed)
        centre = rng.choice(admissible_centres(config))
        upper, bmap = blowup(config, BlowupCenter(centre))
        lower, _ = blowdown(upper, bmap.vertex)
        assert lower == config
        cases += 1
    assert cases == 60


# -----------------------------
# transport
# -----------------------------
def test_pullback_and_pushforward():
    config = OrderConfig(chain([2, 2]))
    upper, bmap = blowup(config, BlowupCenter(("E1", "E2")))
    D = Divisor({"E1": 2, "E2": 1})
    lifted = pullback(bmap, D)
    assert lifted == Divisor({"E1": 2, "E2": 1, "E3": 3})
    assert pushforward(bmap, lifted) == D
    F = Divisor({"E1": 1})
    assert pair(upper.graph.form, lifted, pullback(bmap, F)) == pair(config.graph.form, D, F)
    assert pair(upper.graph.form, lifted, Divisor.basis("E3")) == 0
    with pytest.raises(InputError):
        pullback(bmap, Divisor.basis("E3"))


def test_blowup_stability():
    cases = 0
    for seed in range(200):
        if cases == 50:
            break
        config, _ = random_order_config(seed, max_vertices=5)
        if not validate(config).ok:
            continue
        rng = random.Random(1000 + seed)
        centre = rng.choice(admissible_centres(config))
        upper, bmap = blowup(config, BlowupCenter(centre))
        base = Divisor({vid: rng.randint(0, 2) for vid in config.graph.ids})
        if base.is_zero():
            base = Divisor.basis(config.graph.ids[0])
        m = rng.randint(0, 3)
        E = pullback(bmap, base) + m * Divisor.basis(bmap.vertex)
        before = chi_restriction(config, base)
        after = chi_restriction(upper, E)
        assert after == before + Fraction(config.r2, 2) * m * (m + Fraction(1, bmap.centre_index))
        assert after - before == chi_shift(config, bmap, m)
        assert is_numerically_rational(upper).rational == is_numerically_rational(config).rational
        cases += 1
    assert cases == 50


# -----------------------------
# towers and N-cycles
# -----------------------------
def test_tower_replay_lift_descend():
    for seed in range(20):
        tower = random_tower(seed)
        assert tower.replay() == tower.top
        assert len(tower.created()) == len(tower.maps)
        D = Divisor.reduced(tower.base.graph.ids)
        assert tower.descend(tower.lift(D)) == D


def test_with_top_needs_same_graph():
    tower = Tower.identity(OrderConfig(chain([2])))
    with pytest.raises(InputError):
        tower.with_top(OrderConfig(chain([3])))


def test_n_cycle_of_a_chain_of_blowups():
    base = OrderConfig(ResolutionGraph((Vertex("A", -2),)))
    tower = Tower.identity(base).blowup(BlowupCenter(("A",)))
    tower = tower.blowup(BlowupCenter(("E1",)))
    assert tower.created() == ("E1", "E2")
    assert n_cycle(tower, "E1") == Divisor({"E1": 1, "E2": 1})
    assert n_cycle(tower, "E2") == Divisor.basis("E2")


def n_cycles(tower):
    return {vid: n_cycle(tower, vid) for vid in tower.created()}


def test_n_cycles_diagonalise_the_created_lattice():
    for seed in range(50):
        tower = random_tower(seed, base_max_vertices=4, depth=4)
        form = tower.top.graph.form
        N = n_cycles(tower)
        created = tower.created()
        for j in created:
            for k in created:
                assert pair(form, N[j], N[k]) == (-1 if j == k else 0)
            for i in tower.top.graph.ids:
                assert pair(form, N[j], Divisor.basis(i)) in (-1, 0, 1)
            assert pair(form, N[j], Divisor.basis(j)) == -1
        ids = tower.top.graph.ids
        for mask in product((0, 1), repeat=len(ids)):
            E = Divisor(dict(zip(ids, mask)))
            rebuilt = tower.lift(tower.descend(E))
            for j in created:
                rebuilt = rebuilt - pair(form, N[j], E) * N[j]
            assert rebuilt == E


def decorate(tower):
    """Two index-2 curves through every (-1)-curve of the top, rank root 2."""
    top = tower.top
    curves = []
    for v in top.graph.vertices:
        if v.b == 1:
            curves += [RamCurve(f"{v.id}a", 2, {v.id: 1}), RamCurve(f"{v.id}b", 2, {v.id: 1})]
    return tower.with_top(with_rank(with_curves(top, curves), 2))


def test_created_curves_have_small_canonical_degree():
    accepted = 0
    for seed in range(3000):
        if accepted == 50:
            break
        tower = decorate(random_tower(seed, base_max_vertices=4, depth=4))
        top = tower.top
        if not (validate(top).ok and is_nef(top) and classify(top).log_terminal):
            continue
        for vid in tower.created():
            k = canonical_dot(top, n_cycle(tower, vid))
            assert 0 <= k < 1
        accepted += 1
    assert accepted == 50


# -----------------------------
# minimalize
# -----------------------------
def test_minimalize_contracts_negative_curve():
    graph = ResolutionGraph(
        (Vertex("A", -3), Vertex("X", -1), Vertex("B", -3)),
        (Edge("A", "X"), Edge("X", "B")),
    )
    config = OrderConfig(graph)
    minimal, tower = minimalize(config)
    assert minimal.graph == ResolutionGraph((Vertex("A", -2), Vertex("B", -2)), (Edge("A", "B"),))
    assert tower.created() == ("X",)
    assert tower.top == config
    assert tower.replay() == config


def test_minimalize_keeps_minimal_configs():
    config = e6_tilde_order().config
    minimal, tower = minimalize(config)
    assert minimal == config
    assert tower.maps == ()


def test_minimalize_undoes_a_tower():
    base = OrderConfig(chain([2, 3]), {"E2": 2}, (RamCurve("C", 2, {"E2": 1}),), 2)
    tower = Tower.identity(base).blowup(BlowupCenter(("E2", "C"))).blowup(BlowupCenter(("E3",)))
    minimal, _ = minimalize(tower.top)
    assert minimal == base
