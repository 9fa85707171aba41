import os
import random
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from oracles import ToyNet  # noqa: E402

from sentiparadox.community import CommunityIndex  # noqa: E402
from sentiparadox.graph import SocialGraph  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# coarse grid so that ties and Unknown outcomes actually occur
VALUE_GRID = [-1.0, -0.5, -0.2, 0.0, 0.1, 0.2, 0.5, 1.0]


def to_graph(net: ToyNet) -> SocialGraph:
    fe = np.array(sorted(tuple(sorted(e)) for e in net.friends), dtype=np.int64).reshape(-1, 2)
    de = np.array(sorted(net.follows), dtype=np.int64).reshape(-1, 2)
    return SocialGraph.from_edges(net.n, fe, de)


def to_communities(net: ToyNet, n_comm=None) -> CommunityIndex:
    pairs = sorted((u, c) for u, cs in net.members.items() for c in cs)
    u = np.array([p[0] for p in pairs], dtype=np.int64)
    c = np.array([p[1] for p in pairs], dtype=np.int64)
    ids = None if n_comm is None else np.arange(n_comm)
    return CommunityIndex.from_pairs(net.n, u, c, community_ids=ids)


def random_net(rng: random.Random, n, p_friend=0.2, p_follow=0.15, n_comm=4, p_member=0.3) -> ToyNet:
    net = ToyNet(n)
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p_friend:
                net.friends.add(frozenset((a, b)))
            if rng.random() < p_follow:
                net.follows.add((a, b))
            if rng.random() < p_follow:
                net.follows.add((b, a))
    for u in range(n):
        cs = {c for c in range(n_comm) if rng.random() < p_member}
        if cs:
            net.members[u] = cs
    return net


def random_values(rng: random.Random, n, p_undefined=0.15, grid=True):
    out = []
    for _ in range(n):
        if rng.random() < p_undefined:
            out.append(None)
        elif grid:
            out.append(rng.choice(VALUE_GRID))
        else:
            out.append(rng.uniform(-1, 1))
    return out


def as_array(values):
    return np.array([np.nan if v is None else v for v in values], dtype=np.float64)


@st.composite
def toy_nets(draw, max_n=12, with_values=True):
    n = draw(st.integers(1, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    friends = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    ordered = [(a, b) for a in range(n) for b in range(n) if a != b]
    follows = draw(st.sets(st.sampled_from(ordered), max_size=len(ordered))) if ordered else set()
    members = {}
    for u in range(n):
        cs = draw(st.sets(st.integers(0, 3), max_size=3))
        if cs:
            members[u] = cs
    net = ToyNet(n, {frozenset(p) for p in friends}, set(follows), members)
    if not with_values:
        return net
    values = draw(st.lists(st.one_of(st.none(), st.sampled_from(VALUE_GRID)), min_size=n, max_size=n))
    return net, values


def planted_homophily(n=3000, seed=0, homophily=0.6):
    """Planted communities with degree-coupled, homophilous SWB."""
    from sentiparadox.synth import GenSpec, Model, SwbAssignment, SwbMode, assign_swb, generate_network

    spec = GenSpec(Model.PLANTED_COMMUNITIES, n, seed=seed, n_communities=n // 50, community_size=60, p_in=0.08, p_out=0.0005)
    g, comms = generate_network(spec)
    x = assign_swb(g, SwbAssignment(SwbMode.DEGREE_COUPLED, rho=0.3, seed=seed, homophily=homophily))
    return g, x, comms


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
