import random

import networkx as nx
import pytest

from oddcolor.cograph import (
    JOIN,
    LEAF,
    UNION,
    build_cotree,
    class_parity_profile,
    cograph_invariants,
    cograph_witness,
    cotree_to_graph,
    find_induced_p4,
    random_cotree,
)
from oddcolor.core import Graph, verify_odd_coloring
from oddcolor.oracle import ORACLES
from oddcolor.utils import UNBOUNDED

WHICH = ('chi', 'chi_strong', 'chi_odd', 'chi_odd_strong')


def complete(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def test_p4_is_not_a_cograph():
    p4 = Graph(4, [(0, 1), (1, 2), (2, 3)])
    assert build_cotree(p4) is None
    assert find_induced_p4(p4) == (0, 1, 2, 3)


def test_c4_cotree():
    c4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    tree = build_cotree(c4)
    assert tree.kind == JOIN
    assert [child.kind for child in tree.children] == [UNION, UNION]
    assert sorted(child.vertices() for child in tree.children) == [(0, 2), (1, 3)]
    assert find_induced_p4(c4) is None


def test_triangle_cotree():
    tree = build_cotree(complete(3))
    assert tree.kind == JOIN
    assert [child.kind for child in tree.children] == [LEAF, LEAF, LEAF]


def test_examples():
    c4 = build_cotree(Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    assert cograph_invariants(c4).chi_odd == 4
    assert cograph_invariants(build_cotree(complete(2))).chi_odd == 2
    for n in range(1, 7):
        values = cograph_invariants(build_cotree(complete(n)))
        assert values.chi == n
        if n > 1:
            assert values.chi_odd == n


def test_leaf_values():
    values = cograph_invariants(build_cotree(Graph(1)))
    assert (values.chi, values.chi_strong) == (1, 1)
    assert values.chi_odd == UNBOUNDED
    assert values.chi_odd_strong == UNBOUNDED


def test_profile_of_two_isolated_vertices():
    profile = class_parity_profile(build_cotree(Graph(2)))
    assert profile['proper'][1] == frozenset({0})
    assert profile['proper'][2] == frozenset({0, 2})
    assert profile['odd'][2] == frozenset()


def test_random_cotrees_round_trip():
    rng = random.Random(1)
    for _ in range(30):
        n = rng.randint(1, 9)
        tree = random_cotree(n, rng)
        g = cotree_to_graph(tree, n)
        rebuilt = build_cotree(g)
        assert rebuilt is not None
        assert cotree_to_graph(rebuilt, n) == g


def test_invariants_match_oracle_on_random_cotrees():
    rng = random.Random(77)
    for _ in range(300):
        n = rng.randint(1, 8)
        tree = random_cotree(n, rng)
        g = cotree_to_graph(tree, n)
        values = cograph_invariants(tree).as_dict()
        for which in WHICH:
            assert values[which] == ORACLES[which](g).value, which


def test_invariants_match_oracle_on_small_atlas_cographs():
    for nxg in nx.graph_atlas_g()[1:]:
        if nxg.number_of_nodes() > 7:
            break
        g = Graph.from_networkx(nxg)
        tree = build_cotree(g)
        if tree is None:
            assert find_induced_p4(g) is not None
            continue
        values = cograph_invariants(tree).as_dict()
        for which in WHICH:
            assert values[which] == ORACLES[which](g).value


def test_chi_odd_at_most_chi_plus_two_on_connected_cographs():
    rng = random.Random(13)
    for _ in range(40):
        n = rng.randint(2, 12)
        tree = random_cotree(n, rng)
        g = cotree_to_graph(tree, n)
        if not g.is_connected():
            continue
        values = cograph_invariants(tree)
        assert values.chi <= values.chi_odd <= values.chi + 2
        assert values.chi <= values.chi_strong <= values.chi + 1
        assert values.chi_odd <= values.chi_odd_strong <= values.chi_odd + 1


@pytest.mark.parametrize('which', WHICH)
def test_witnesses(which):
    rng = random.Random(40)
    for _ in range(25):
        n = rng.randint(2, 10)
        tree = random_cotree(n, rng)
        g = cotree_to_graph(tree, n)
        value = cograph_invariants(tree).as_dict()[which]
        witness = cograph_witness(tree, which, n)
        if value == UNBOUNDED:
            assert witness is None
            continue
        assert max(witness.colors) <= value
        if which.startswith('chi_odd'):
            assert verify_odd_coloring(g, witness).valid
