import json
import random

import pytest

from oddcolor.core import (
    Coloring,
    Graph,
    Parity,
    coloring_to_json,
    color_class_parities,
    is_proper,
    odd_color_of,
    odd_colors,
    parse_coloring_json,
    parse_graph,
    serialize_graph,
    verify_odd_coloring,
)
from oddcolor.utils import ContractError, GraphParseError

K3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
P3 = Graph(3, [(0, 1), (1, 2)])
C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def test_parse_dimacs_triangle():
    g = parse_graph("c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n", 'dimacs')
    assert g == K3


def test_parse_dimacs_isolated_vertices():
    g = parse_graph("p edge 2 0\n", 'dimacs')
    assert g.n == 2
    assert g.m == 0


def test_parse_edgelist_path():
    assert parse_graph("0 1\n1 2", 'edgelist') == P3


def test_parse_collapses_duplicate_edges():
    g = parse_graph("p edge 2 3\ne 1 2\ne 2 1\ne 1 2\n")
    assert g.m == 1


@pytest.mark.parametrize(
    'text, line',
    [
        ("p edge x 1\n", 1),
        ("p edge 3 1\ne 1 4\n", 2),
        ("p edge 3 1\nc ok\ne 2 2\n", 3),
        ("e 1 2\n", 1),
        ("p edge 3\n", 1),
        ("p edge 3 0\nq 1 2\n", 2),
    ],
)
def test_parse_dimacs_errors_name_the_line(text, line):
    with pytest.raises(GraphParseError) as info:
        parse_graph(text, 'dimacs')
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_parse_edgelist_errors():
    with pytest.raises(GraphParseError) as info:
        parse_graph("0 1\n2 2\n", 'edgelist')
    assert info.value.line == 2
    with pytest.raises(GraphParseError):
        parse_graph("0 -1\n", 'edgelist')


def test_edgelist_keeps_trailing_isolated_vertices():
    g = Graph(5, [(0, 1), (1, 2)])
    text = serialize_graph(g, 'edgelist')
    assert text.splitlines()[0] == '# n 5'
    assert parse_graph(text, 'edgelist') == g
    assert parse_graph("# n 4\n0 1\n", 'edgelist').n == 4
    assert parse_graph("# a comment\n0 1\n", 'edgelist').n == 2


def test_missing_header():
    with pytest.raises(GraphParseError):
        parse_graph("c nothing here\n", 'dimacs')


@pytest.mark.parametrize('fmt', ['dimacs', 'edgelist'])
def test_serialize_parse_is_idempotent(fmt):
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(2, 9)
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4] + [(0, n - 1)])
        once = parse_graph(serialize_graph(g, fmt), fmt)
        twice = parse_graph(serialize_graph(once, fmt), fmt)
        assert once == twice
        assert once.edges == g.edges


def test_graph_rejects_self_loops():
    with pytest.raises(ContractError):
        Graph(2, [(1, 1)])


def test_adjacency_is_symmetric():
    g = Graph(5, [(0, 3), (4, 1), (2, 3)])
    for v in g.vertices():
        for u in g.neighbors(v):
            assert v in g.neighbors(u)
    assert g.neighbors(3) == (0, 2)


def test_is_proper():
    assert is_proper(K3, Coloring.of([1, 2, 3]))
    assert not is_proper(K3, Coloring.of([1, 1, 2]))
    assert is_proper(P3, Coloring.of([1, 2, 1]))


def test_is_proper_rejects_partial():
    with pytest.raises(ContractError):
        is_proper(K3, Coloring.of([1, None, 2], k=3))


def test_odd_color_of():
    assert odd_color_of(P3, Coloring.of([1, 2, 1]), 1) is None
    assert odd_color_of(P3, Coloring.of([1, 2, 3]), 1) == 1
    assert odd_color_of(Graph(2), Coloring.of([1, 1]), 0) is None


def test_odd_color_of_takes_smallest():
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    f = Coloring.of([1, 4, 2, 3])
    assert odd_colors(star, f, 0) == {2, 3, 4}
    assert odd_color_of(star, f, 0) == 2


def test_verify_examples():
    cert = verify_odd_coloring(C4, Coloring.of([1, 2, 1, 2]))
    assert cert.no_odd == {0, 1, 2, 3}
    assert not cert.conflicts
    assert not cert.valid
    assert verify_odd_coloring(K3, Coloring.of([1, 2, 3])).valid
    cert = verify_odd_coloring(C4, Coloring.of([1, 2, 3, 4]))
    assert cert.valid
    assert cert.witness == {0: 2, 1: 1, 2: 2, 3: 1}


def test_verify_flags_conflict_endpoints():
    cert = verify_odd_coloring(P3, Coloring.of([1, 1, 2]))
    assert cert.conflicts == {0, 1}
    assert 0 in cert.violations


def test_isolated_vertex_is_always_a_violation():
    g = Graph(3, [(0, 1)])
    for colors in ([1, 2, 1], [1, 2, 3], [2, 1, 1]):
        assert 2 in verify_odd_coloring(g, Coloring.of(colors)).violations


def test_valid_certificate_implies_proper():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(2, 7)
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5])
        f = Coloring.of([rng.randint(1, 4) for _ in range(n)], k=4)
        cert = verify_odd_coloring(g, f)
        if cert.valid:
            assert is_proper(g, f)
        for v, c in cert.witness.items():
            assert sum(1 for u in g.neighbors(v) if f[u] == c) % 2 == 1


def test_color_class_parities():
    assert color_class_parities(K3, Coloring.of([1, 2, 3])) == {1: Parity.ODD, 2: Parity.ODD, 3: Parity.ODD}
    assert color_class_parities(C4, Coloring.of([1, 2, 1, 2])) == {1: Parity.EVEN, 2: Parity.EVEN}
    assert all(p is Parity.ODD for p in color_class_parities(P3, Coloring.of([1, 2, 3])).values())


def test_coloring_json_round_trip():
    f = Coloring.of([1, 2, 3, 4])
    data = coloring_to_json(C4, f)
    assert data == {'k': 4, 'colors': [1, 2, 3, 4], 'valid': True, 'violations': []}
    assert parse_coloring_json(json.dumps(data)) == f


def test_coloring_rejects_out_of_palette():
    with pytest.raises(ContractError):
        Coloring((1, 5), 3)


def test_compacted_renumbers_by_first_use():
    assert Coloring.of([5, 2, 5, 7]).compacted() == Coloring((1, 2, 1, 3), 3)
