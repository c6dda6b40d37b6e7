import random

import pytest

from oddcolor.core import Graph, Parity, odd_colors, verify_odd_coloring
from oddcolor.diversity import (
    CLIQUE,
    INDEPENDENT,
    NDGuess,
    assemble_coloring,
    compute_nd_partition,
    enumerate_nd_guesses,
    phase1_color,
    phase2_fill,
    residual_graph,
    solve_neighborhood_diversity,
)
from oddcolor.oracle import chi, chi_odd
from oddcolor.utils import UNBOUNDED, GuardExceededError


def complete_bipartite(a, b):
    return Graph(a + b, [(u, v) for u in range(a) for v in range(a, a + b)])


def complete(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def random_type_graph(rng, t, max_size=3):
    """Blow up a random graph on ``t`` type vertices into cliques and independent sets."""
    sizes = [rng.randint(1, max_size) for _ in range(t)]
    kinds = [rng.random() < 0.4 for _ in range(t)]
    owner = [i for i, size in enumerate(sizes) for _ in range(size)]
    linked = {(i, j) for i in range(t) for j in range(i + 1, t) if rng.random() < 0.5}
    n = len(owner)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            i, j = owner[u], owner[v]
            if (i == j and kinds[i]) or (min(i, j), max(i, j)) in linked:
                edges.append((u, v))
    return Graph(n, edges)


def test_partition_examples():
    part = compute_nd_partition(complete_bipartite(2, 3))
    assert part.types == ((0, 1), (2, 3, 4))
    assert part.kinds == (INDEPENDENT, INDEPENDENT)
    assert part.adjacent(0, 1)

    part = compute_nd_partition(complete(4))
    assert part.types == ((0, 1, 2, 3),)
    assert part.kinds == (CLIQUE,)

    part = compute_nd_partition(Graph(3, [(0, 1), (1, 2)]))
    assert part.types == ((0, 2), (1,))
    assert part.kinds == (INDEPENDENT, INDEPENDENT)


def test_phase1_examples():
    part = compute_nd_partition(complete_bipartite(2, 3))
    empty = phase1_color(part, NDGuess(((0,), (1,)), ((), ())))
    assert empty.assigned() == {}
    one = phase1_color(part, NDGuess(((0,),), (((1, Parity.ODD),),)))
    assert one.assigned() == {2: 1}
    single = compute_nd_partition(Graph(3, [(0, 1), (1, 2)]))
    assert phase1_color(single, NDGuess(((0,),), (((1, Parity.EVEN),),))) is None


def test_phase2_examples():
    g = complete_bipartite(4, 3)
    part = compute_nd_partition(g)
    guess = NDGuess(((1,),), (((0, Parity.EVEN),),))
    filled = phase2_fill(part, phase1_color(part, guess), guess)
    assert [filled.coloring[v] for v in range(4)] == [1, 1, 1, 1]
    assert filled.deferred == (0, 3)

    guess = NDGuess(((0,),), (((1, Parity.ODD),),))
    filled = phase2_fill(part, phase1_color(part, guess), guess)
    # three vertices, one colored: the other two are flooded and the count stays odd
    assert [filled.coloring[v] for v in range(4, 7)] == [1, 1, 1]
    assert filled.deferred == (4, 0)


def test_phase2_defers_one_vertex_when_odd_remainder():
    part = compute_nd_partition(complete_bipartite(4, 1))
    guess = NDGuess(((1,),), (((0, Parity.ODD),),))
    filled = phase2_fill(part, phase1_color(part, guess), guess)
    assert [filled.coloring[v] for v in range(4)] == [1, 1, 1, None]
    assert filled.deferred == (1, 1)


@pytest.mark.parametrize(
    'g, expected',
    [
        (complete_bipartite(2, 3), 3),
        (complete(4), 4),
        (Graph(3, [(0, 1), (1, 2)]), 3),
        (complete_bipartite(3, 3), 2),
    ],
)
def test_solver_examples(g, expected):
    result = solve_neighborhood_diversity(g)
    assert result.value == expected
    assert verify_odd_coloring(g, result.witness).valid


def test_isolated_vertex_is_unbounded():
    assert solve_neighborhood_diversity(Graph(3, [(0, 1)])).value == UNBOUNDED


def test_type_limit():
    g = Graph(7, [(i, i + 1) for i in range(6)])
    with pytest.raises(GuardExceededError):
        solve_neighborhood_diversity(g, limit=6)


def test_decision_flag():
    result = solve_neighborhood_diversity(complete_bipartite(2, 3), k=2)
    assert result.diagnostics['decision'] is False


def test_matches_oracle_on_random_type_graphs():
    rng = random.Random(21)
    checked = 0
    while checked < 50:
        g = random_type_graph(rng, rng.randint(2, 4))
        if g.has_isolated_vertex() or compute_nd_partition(g).t > 4:
            continue
        result = solve_neighborhood_diversity(g)
        assert result.value == chi_odd(g).value
        assert verify_odd_coloring(g, result.witness).valid
        checked += 1


def test_independent_types_share_odd_colors():
    rng = random.Random(5)
    for _ in range(15):
        g = random_type_graph(rng, 3)
        if g.has_isolated_vertex():
            continue
        witness = chi_odd(g).witness
        part = compute_nd_partition(g)
        for members, kind in zip(part.types, part.kinds):
            if kind == INDEPENDENT:
                assert len({odd_colors(g, witness, v) for v in members}) == 1


def test_guesses_keep_parities_and_assemble():
    rng = random.Random(3)
    for _ in range(6):
        g = random_type_graph(rng, 3, max_size=2)
        if g.has_isolated_vertex():
            continue
        part = compute_nd_partition(g)
        for guess in enumerate_nd_guesses(part, max_t1=2):
            partial = phase1_color(part, guess)
            filled = phase2_fill(part, partial, guess)
            for i, placement in enumerate(guess.placements):
                for j, parity in placement:
                    count = sum(1 for v in part.types[j] if filled.coloring[v] == i + 1)
                    assert count % 2 == (1 if parity is Parity.ODD else 0)
            sub, kept = residual_graph(g, filled.coloring)
            residual = chi(sub).witness
            assembled = assemble_coloring(filled.coloring, kept, residual, guess.t1)
            assert verify_odd_coloring(g, assembled).valid
