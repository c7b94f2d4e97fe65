from fractions import Fraction
from pathlib import Path

import pytest

from core.catalogue import chain, e6_tilde_order, paper_graph
from core.model import Edge, OrderConfig, RamCurve, ResolutionGraph, Vertex
from services.settings import reset_settings

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("NUMRAT_BRUTE_BOUND", "NUMRAT_BRUTE_CAP", "NUMRAT_SUBSET_CAP", "NUMRAT_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def a2():
    return chain([2, 2])


@pytest.fixture
def a3():
    return chain([2, 2, 2])


@pytest.fixture
def case2_32():
    return paper_graph("case2_32").config.graph


@pytest.fixture
def case2_23():
    return paper_graph("case2_23").config.graph


@pytest.fixture
def e6():
    return e6_tilde_order().config


@pytest.fixture
def crepant():
    return OrderConfig(ResolutionGraph((Vertex("E", -4),)), {"E": 2}, (), 2)


@pytest.fixture
def two_curves_node():
    """Two index-2 curves crossing once over a smooth point (empty exceptional locus)."""
    curves = (
        RamCurve("C1", 2, {}, None, {"C2": 1}),
        RamCurve("C2", 2, {}, None, {"C1": 1}),
    )
    return OrderConfig(ResolutionGraph(), {}, curves, 2)


def single(b, genus=0, vid="E"):
    return ResolutionGraph((Vertex(vid, -b, genus),))


def fractions(*xs):
    return tuple(Fraction(x) for x in xs)
