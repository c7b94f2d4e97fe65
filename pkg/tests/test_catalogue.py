import pytest

from core.catalogue import (
    FIXTURES,
    LOG_TERMINAL,
    NOT_LOG_TERMINAL,
    ade,
    case1_graph,
    chain,
    cyclic,
    e6_tilde_order,
    fixture,
    hj_weights,
    paper_graph,
    random_log_terminal,
    random_order_config,
    random_tower,
    star,
)
from core.cycles import closed_form_multiplicity, multiplicity, numerical_cycle
from core.discrepancy import is_log_terminal_graph
from core.errors import InputError
from core.model import validate


# -----------------------------
# builders
# -----------------------------
@pytest.mark.parametrize(
    "n, q, expected",
    [(12, 5, [3, 2, 3]), (5, 1, [5]), (5, 4, [2, 2, 2, 2]), (7, 3, [3, 2, 2]), (2, 1, [2])],
)
def test_hj_weights(n, q, expected):
    assert hj_weights(n, q) == expected
    assert [v.b for v in cyclic(n, q).vertices] == expected


@pytest.mark.parametrize("n, q", [(12, 4), (1, 0), (5, 5), (5, 0)])
def test_hj_weights_rejects_bad_parameters(n, q):
    with pytest.raises(InputError):
        hj_weights(n, q)


def test_chain_ids():
    graph = chain([2, 3], start=4)
    assert graph.ids == ("E4", "E5")
    assert graph.edge_mult("E4", "E5") == 1


def test_star():
    graph = star(3, [[2], [2, 2], [4]])
    assert graph.ids == ("E1", "E2", "E3", "E4", "E5")
    assert graph.neighbours("E1") == {"E2": 1, "E3": 1, "E5": 1}
    assert graph.neighbours("E3") == {"E1": 1, "E4": 1}
    with pytest.raises(InputError):
        star(0, [[2]])
    with pytest.raises(InputError):
        star(2, [[2], []])


@pytest.mark.parametrize("name, size", [("A1", 1), ("a4", 4), ("D4", 4), ("D7", 7), ("E6", 6), ("E7", 7), ("E8", 8)])
def test_ade_shapes(name, size):
    graph = ade(name)
    assert len(graph) == size
    assert len(graph.edges) == size - 1
    assert all(v.b == 2 for v in graph.vertices)


@pytest.mark.parametrize("name", ["A0", "D3", "E9", "X3", "E"])
def test_ade_rejects_unknown_names(name):
    with pytest.raises(InputError):
        ade(name)


def test_case1_graph_validation():
    with pytest.raises(InputError):
        case1_graph([2, 2])
    with pytest.raises(InputError):
        case1_graph([1, 2, 2])
    with pytest.raises(InputError):
        case1_graph([2, 2, 3])


# -----------------------------
# fixtures
# -----------------------------
@pytest.mark.parametrize("name", ["case1", "case2_23", "case2_32"])
def test_paper_graph_expectations(name):
    fx = paper_graph(name)
    graph = fx.config.graph
    Z = numerical_cycle(graph, graph.ids)
    assert Z == fx.expected["z_num"]
    assert multiplicity(graph, Z) == fx.expected["multiplicity"]


def test_paper_graph_case1_weights():
    fx = paper_graph("case1", (2, 4, 2, 2, 2))
    assert fx.expected["multiplicity"] == 4
    assert numerical_cycle(fx.config.graph, fx.config.graph.ids) == fx.expected["z_num"]


def test_paper_graph_errors():
    with pytest.raises(InputError):
        paper_graph("case3")
    with pytest.raises(InputError):
        paper_graph("case2_23", (2, 2))


def test_e6_tilde_fixture():
    fx = e6_tilde_order()
    assert fx.expected["chi"][1] == -3
    assert fx.expected["chi"][2] == 6
    assert set(fx.expected) == set(fx.provenance)
    assert validate(fx.config).ok


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_registry(name):
    fx = fixture(name)
    assert fx.name == name
    assert set(fx.expected) == set(fx.provenance)
    assert validate(fx.config).ok


def test_unknown_fixture():
    with pytest.raises(InputError, match="available"):
        fixture("nope")


# -----------------------------
# random generators
# -----------------------------
def test_random_log_terminal_is_deterministic():
    assert random_log_terminal(7) == random_log_terminal(7)
    graph = random_log_terminal(11, max_vertices=5)
    assert len(graph) <= 5
    assert is_log_terminal_graph(graph)
    with pytest.raises(InputError):
        random_log_terminal(1, max_vertices=0)


def test_log_terminal_cycles_have_simple_heavy_vertices():
    for seed in range(1000):
        graph = random_log_terminal(seed)
        Z = numerical_cycle(graph, graph.ids)
        for v in graph.vertices:
            if v.b > 2:
                assert Z[v.id] == 1, (seed, graph, Z)
        assert multiplicity(graph, Z) == closed_form_multiplicity(graph, graph.ids)


def test_random_order_config():
    first = random_order_config(5)
    assert first == random_order_config(5)
    for seed in range(50):
        config, label = random_order_config(seed)
        assert label in (LOG_TERMINAL, NOT_LOG_TERMINAL)
        assert len(config.graph) <= 6
        if label == LOG_TERMINAL:
            assert validate(config).ok


def test_random_tower():
    tower = random_tower(3)
    assert tower.top == random_tower(3).top
    assert tower.replay() == tower.top
    assert 1 <= len(tower.maps) <= 4
    assert all(tower.base.e(vid) == 1 for vid in tower.base.graph.ids)
