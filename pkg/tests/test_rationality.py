import random
from fractions import Fraction
from math import gcd

import pytest

from core.adjunction import LinearFunctional, g_value
from core.catalogue import (
    LOG_TERMINAL,
    ade,
    chain,
    crepant_vertex,
    cyclic,
    e6_tilde_order,
    paper_graph,
    random_log_terminal,
    random_order_config,
)
from core.cycles import numerical_cycle, special_divisors
from core.errors import InputError, PreconditionError, ValidationFailed
from core.lattice import Divisor
from core.model import OrderConfig, ResolutionGraph, Vertex
from core.rationality import (
    BRUTE,
    SPECIAL,
    check_bruteforce,
    check_special,
    functional,
    is_numerically_rational,
    normalize_method,
    special_hypotheses,
)
from services.settings import reset_settings


def random_functional(rng, graph):
    den = rng.choice((1, 2, 3, 4, 8))
    values = {}
    for vid in graph.ids:
        if rng.random() < 0.4:
            values[vid] = Fraction(0)
        else:
            values[vid] = Fraction(-rng.randint(0, 3 * den), den)
    return LinearFunctional(values)


# -----------------------------
# method names
# -----------------------------
def test_normalize_method():
    assert normalize_method("brute-force") == BRUTE
    assert normalize_method("Bruteforce") == BRUTE
    assert normalize_method("special") == SPECIAL
    with pytest.raises(InputError):
        normalize_method("guess")


# -----------------------------
# special divisors
# -----------------------------
def test_check_special_zero_functional():
    graph = ade("E6")
    assert check_special(graph, LinearFunctional.zero(graph.ids)).rational


def test_check_special_finds_witness():
    graph = ResolutionGraph((Vertex("E", -2),))
    verdict = check_special(graph, LinearFunctional({"E": -2}))
    assert not verdict.rational
    assert verdict.witness == Divisor.basis("E")
    assert verdict.witness_value == 0


def test_check_special_a2():
    graph = chain([2, 2])
    verdict = check_special(graph, LinearFunctional({"E1": -1, "E2": -1}))
    assert not verdict.rational
    assert verdict.witness == Divisor({"E1": 1, "E2": 1})
    assert verdict.witness_value == 0


def test_check_special_case2_canonical():
    graph = paper_graph("case2_32").config.graph
    verdict = check_special(graph, functional(OrderConfig(graph)))
    assert verdict.rational


def test_check_special_hypotheses():
    genus = ResolutionGraph((Vertex("E", -3, 1),))
    ell = LinearFunctional({"E": 1})
    failed = special_hypotheses(genus, ell)
    assert len(failed) == 2
    with pytest.raises(PreconditionError, match="does not apply"):
        check_special(genus, ell)
    minus_one = ResolutionGraph((Vertex("E", -1),))
    assert special_hypotheses(minus_one, LinearFunctional({"E": 0})) == [
        "graph is not minimal: rational (-1)-curves ['E']"
    ]


# -----------------------------
# brute force
# -----------------------------
def test_bruteforce_examples():
    single = ResolutionGraph((Vertex("E", -2),))
    assert check_bruteforce(single, LinearFunctional({"E": 0}), bound=5).rational

    verdict = check_bruteforce(chain([2, 2]), LinearFunctional({"E1": -1, "E2": -1}), bound=4)
    assert not verdict.rational
    assert verdict.witness == Divisor({"E1": 1, "E2": 1})
    assert verdict.witness_value == 0


def test_bruteforce_e6_tilde():
    config = e6_tilde_order().config
    verdict = check_bruteforce(config.graph, functional(config), bound=3)
    assert not verdict.rational
    assert verdict.witness == Divisor.basis("E")
    assert verdict.witness_value == Fraction(-3, 2)
    assert verdict.bound_used == 3


def test_bruteforce_witness_is_lexicographically_least():
    graph = chain([2, 2, 2])
    ell = LinearFunctional({"E1": -3, "E2": -3, "E3": -3})
    verdict = check_bruteforce(graph, ell, bound=2)
    # g(E3) = 2 - 3 < 0 and nothing with a zero first coefficient comes earlier
    assert verdict.witness == Divisor.basis("E3")


def test_bruteforce_cap():
    graph = ade("A4")
    with pytest.raises(PreconditionError, match="NUMRAT_BRUTE_CAP"):
        check_bruteforce(graph, LinearFunctional.zero(graph.ids), bound=6, cap=5)


def test_bruteforce_reads_bound_from_settings(monkeypatch):
    monkeypatch.setenv("NUMRAT_BRUTE_BOUND", "2")
    reset_settings()
    graph = chain([2])
    assert check_bruteforce(graph, LinearFunctional.zero(graph.ids)).bound_used == 2


def test_oracles_agree_on_random_pairs():
    rng = random.Random(20240607)
    for case in range(100):
        graph = random_log_terminal(rng.randrange(1 << 30), max_vertices=8, max_weight=5)
        ell = random_functional(rng, graph)
        special = check_special(graph, ell)
        brute = check_bruteforce(graph, ell, bound=6)
        assert special.rational == brute.rational, (case, graph, ell, special.witness, brute.witness)
        if not special.rational:
            assert g_value(graph.form, ell, special.witness) <= 0
            assert g_value(graph.form, ell, brute.witness) <= 0


# -----------------------------
# end-to-end
# -----------------------------
def test_e6_tilde_is_not_rational():
    fx = e6_tilde_order()
    verdict = is_numerically_rational(fx.config)
    assert not verdict.rational
    assert verdict.method == BRUTE
    assert verdict.witness == fx.expected["witness"]
    assert verdict.witness_chi == fx.expected["witness_chi"]


def test_e6_tilde_rejects_special_method():
    with pytest.raises(PreconditionError):
        is_numerically_rational(e6_tilde_order().config, method="special")


def test_crepant_is_rational():
    verdict = is_numerically_rational(crepant_vertex().config)
    assert verdict.rational
    assert verdict.method == SPECIAL


def test_warns_when_canonical_class_is_not_nef(caplog):
    # E1 ramified with index 2: K_A . E1 = 0 + (1/2)(-2) = -1, K_A . E2 = 1 + 1/2
    config = OrderConfig(chain([2, 3]), {"E1": 2}, (), 2)
    with caplog.at_level("WARNING", logger="numrat.rationality"):
        verdict = is_numerically_rational(config)
    assert "not nef" in caplog.text
    assert "['E1']" in caplog.text
    assert verdict.method == BRUTE

    caplog.clear()
    with caplog.at_level("WARNING", logger="numrat.rationality"):
        is_numerically_rational(crepant_vertex().config)
    assert "not nef" not in caplog.text


def test_invalid_config_is_rejected():
    with pytest.raises(ValidationFailed):
        is_numerically_rational(OrderConfig(chain([2]), {"E1": 3}, (), 2))


def test_log_terminal_orders_are_rational():
    found = 0
    for seed in range(3000):
        if found == 100:
            break
        config, label = random_order_config(seed)
        if label != LOG_TERMINAL:
            continue
        verdict = is_numerically_rational(config)
        assert verdict.rational, (seed, verdict.witness)
        assert check_bruteforce(config.graph, functional(config), bound=6).rational, seed
        for D in special_divisors(config.graph):
            assert g_value(config.graph.form, functional(config), D) > 0
        found += 1
    assert found == 100


@pytest.mark.parametrize("name", ["A1", "A3", "A6", "D4", "D7", "E6", "E7", "E8"])
def test_canonical_graphs_only_need_the_numerical_cycle(name):
    graph = ade(name)
    Z = numerical_cycle(graph, graph.ids)
    rng = random.Random(name)
    for _ in range(20):
        ell = random_functional(rng, graph)
        assert check_special(graph, ell).rational == (g_value(graph.form, ell, Z) > 0)


def test_artin_criterion_on_quotient_graphs():
    graphs = [ade(n) for n in ("A1", "A5", "D4", "D8", "E6", "E7", "E8")]
    graphs += [cyclic(n, q) for n in range(2, 14) for q in range(1, n) if gcd(n, q) == 1]
    for graph in graphs:
        assert check_special(graph, functional(OrderConfig(graph))).rational
