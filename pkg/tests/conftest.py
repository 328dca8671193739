import sys
from pathlib import Path

import pytest

from hybridkd.netgraph import ExplicitRate, Link, LinkKind, NetworkGraph, parse_network

NETWORKS = Path(__file__).resolve().parent.parent / "networks"

TWO_PATH_VMIN = [
    "{X,Y}",
    "{X,k_YB}",
    "{X,q_AY}",
    "{Y,k_AX,q_AX}",
    "{Y,k_XB}",
    "{k_AX,k_YB,q_AX}",
    "{k_AX,q_AX,q_AY}",
    "{k_XB,k_YB}",
    "{k_XB,q_AY}",
]


@pytest.fixture(scope="session")
def two_path():
    return parse_network((NETWORKS / "two_path_xor.json").read_text())


@pytest.fixture(scope="session")
def dc_series():
    return parse_network((NETWORKS / "datacenter_series.json").read_text())


def parallel_graph(n: int, a: str = "A", b: str = "B", rate: float = 1.0) -> NetworkGraph:
    """``n`` explicit-rate links e1..en between the same two users."""
    links = tuple(Link(f"e{i}", LinkKind.QKD, (a, b), ExplicitRate(rate)) for i in range(1, n + 1))
    return NetworkGraph((a, b), links)


def chain_graph(n: int) -> NetworkGraph:
    """Links e1..en along A, M1, .., M(n-1), B."""
    hops = ["A"] + [f"M{i}" for i in range(1, n)] + ["B"]
    links = tuple(Link(f"e{i + 1}", LinkKind.KEM, (hops[i], hops[i + 1]), ExplicitRate(1.0)) for i in range(n))
    return NetworkGraph(tuple(hops), links)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_line(i))
