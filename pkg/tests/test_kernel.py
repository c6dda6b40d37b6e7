import random

import pytest

from oddcolor.core import Graph, verify_odd_coloring
from oddcolor.kernel import (
    DcliqueInstance,
    apply_rr1,
    apply_rr2,
    dh_lower_bound,
    find_clique_modulator,
    kernelize,
    lift_coloring,
    partition_modulator,
    size_bound,
    yes_witness,
)
from oddcolor.oracle import decide_odd, odd_colorable_with
from oddcolor.utils import ContractError, GuardExceededError


def clique_edges(vertices):
    vs = list(vertices)
    return [(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :]]


def random_instance(rng, d, c, k=None):
    """Clique on ``0..c-1`` plus ``d`` modulator vertices of mixed clique degree."""
    n = c + d
    edges = clique_edges(range(c))
    for x in range(c, n):
        kind = rng.choice(['low', 'mid', 'high'])
        if kind == 'low':
            cnt = rng.randint(0, max(0, d - 1))
        elif kind == 'mid':
            cnt = rng.randint(d, max(d, n - d * d - d - 1))
        else:
            cnt = rng.randint(max(0, n - d * d - d), c)
        cnt = min(cnt, c)
        edges += [(x, v) for v in rng.sample(range(c), cnt)]
        edges += [(x, y) for y in range(x + 1, n) if rng.random() < 0.4]
    g = Graph(n, edges)
    extra = [(v, (v + 1) % c) if v >= c else (v, c) for v in g.isolated_vertices()]
    g = g.extend(0, extra)
    if k is None:
        k = c + rng.choice([0, 0, 1, 2])
    return DcliqueInstance(g, tuple(range(c, n)), k)


def test_find_clique_modulator_examples():
    k5 = Graph(5, clique_edges(range(5)))
    assert find_clique_modulator(k5, 3) == ()
    found = find_clique_modulator(k5.extend(1, [(0, 5)]), 3)
    assert found in ((5,), (0,))
    c5 = Graph(5, [(i, (i + 1) % 5) for i in range(5)])
    assert find_clique_modulator(c5, 1) is None
    assert len(find_clique_modulator(c5, 3)) == 3


def test_find_clique_modulator_guard():
    with pytest.raises(GuardExceededError):
        find_clique_modulator(Graph(3), 11)


def test_instance_rejects_non_clique_remainder():
    with pytest.raises(ContractError):
        DcliqueInstance(Graph(3, [(0, 1)]), (), 3)


def test_partition_without_modulator():
    inst = DcliqueInstance(Graph(4, clique_edges(range(4))), (), 4)
    part = partition_modulator(inst)
    assert part.X_low == part.X_mid == part.X_high == ()
    assert part.C1 == (0, 1, 2, 3)


def test_partition_low_vertex():
    g = Graph(5, clique_edges(range(4)))
    part = partition_modulator(DcliqueInstance(g, (4,), 4))
    assert part.X_low == (4,)


def test_partition_high_threshold():
    c = 28
    edges = clique_edges(range(c)) + [(28, v) for v in range(25)] + [(29, 0)]
    part = partition_modulator(DcliqueInstance(Graph(30, edges), (28, 29), 30))
    assert 28 in part.X_high
    assert 29 in part.X_low


def test_rr1_deletes_mid_vertex():
    c = 12
    edges = clique_edges(range(c)) + [(12, v) for v in range(4)] + [(13, v) for v in range(10)]
    inst = DcliqueInstance(Graph(14, edges), (12, 13), 14)
    part = partition_modulator(inst)
    assert part.X_mid == (12,)
    assert part.X_high == (13,)
    reduced = apply_rr1(inst)
    assert reduced.n == 13
    assert reduced.d == 1
    assert reduced.k == 14


def test_rr1_adds_pendants_for_low_neighbors():
    c = 12
    edges = clique_edges(range(c)) + [(12, v) for v in range(4)] + [(13, 12), (13, 0)]
    inst = DcliqueInstance(Graph(14, edges), (12, 13), 14)
    part = partition_modulator(inst)
    assert part.X_low_m == (13,)
    reduced = apply_rr1(inst)
    assert reduced.n == 14
    assert reduced.d == 2
    assert reduced.g.degree(13) == 1


def test_rr1_identity_without_mid():
    # clique degree 3 reaches n - d*d - d = 3, so the modulator vertex is high
    inst = DcliqueInstance(Graph(5, clique_edges(range(4)) + [(4, 0), (4, 1), (4, 2)]), (4,), 4)
    part = partition_modulator(inst)
    assert part.X_mid == ()
    assert part.X_high == (4,)
    assert apply_rr1(inst) is inst


def test_rr1_deletes_lone_mid_vertex():
    inst = DcliqueInstance(Graph(5, clique_edges(range(4)) + [(4, 0)]), (4,), 4)
    assert partition_modulator(inst).X_mid == (4,)
    reduced = apply_rr1(inst)
    assert reduced.n == 4
    assert reduced.d == 0


def test_rr2_on_universal_vertex():
    g = Graph(21, clique_edges(range(21)))
    inst = DcliqueInstance(g, (20,), 20)
    part = partition_modulator(inst)
    assert part.rule2_applicable
    assert len(part.C2) == 2
    reduced = apply_rr2(inst, part)
    assert len(part.Cprime) == 18
    assert reduced.k == 20 - 18
    assert reduced.n == 3
    assert decide_odd(reduced.g, reduced.k) == decide_odd(g, 20)


def test_rr2_inapplicable_returns_input():
    inst = DcliqueInstance(Graph(5, clique_edges(range(4)) + [(4, 0)]), (4,), 4)
    part = partition_modulator(inst)
    assert not part.rule2_applicable
    assert apply_rr2(inst, part) is inst


def test_kernelize_short_circuits():
    g = Graph(6, clique_edges(range(5)) + [(5, 0)])
    assert kernelize(DcliqueInstance(g, (5,), 4)).verdict is False
    res = kernelize(DcliqueInstance(g, (5,), 5))
    assert res.verdict is True
    witness = yes_witness(DcliqueInstance(g, (5,), 5))
    assert verify_odd_coloring(g, witness).valid


def test_kernelize_decision_is_preserved():
    rng = random.Random(4)
    checked = 0
    for _ in range(200):
        d = rng.randint(1, 3)
        c = rng.randint(d * d + d, 16 - d)
        inst = random_instance(rng, d, c)
        res = kernelize(inst)
        expected = decide_odd(inst.g, inst.k)
        if res.verdict is None:
            got = decide_odd(res.reduced.g, res.reduced.k)
        else:
            got = res.verdict
        assert got == expected
        if got and res.verdict is None:
            inner = odd_colorable_with(res.reduced.g, res.reduced.k)
            lifted, _ = lift_coloring(res, inner)
            assert verify_odd_coloring(inst.g, lifted).valid
            assert max(lifted.colors) <= inst.k
        checked += bool(res.trace)
    assert checked > 0


def test_kernel_size_bound():
    rng = random.Random(8)
    emitted = 0
    for _ in range(200):
        d = rng.randint(1, 4)
        c = rng.randint(d * d + d + 2, 40 - d)
        inst = random_instance(rng, d, c)
        assert inst.d <= 4 and inst.n <= 40
        res = kernelize(inst)
        assert res.size_bound_ok
        for step in res.trace:
            assert step.part.dh_bound_ok
            if step.part.X_high:
                assert len(step.part.D_h) >= dh_lower_bound(step.before.n, step.before.d, len(step.part.X_high))
        if res.verdict is None:
            assert res.reduced.n <= size_bound(res.reduced.d)
            emitted += 1
    assert emitted > 0


def test_kernelize_is_idempotent():
    rng = random.Random(15)
    for _ in range(60):
        d = rng.randint(1, 3)
        first = kernelize(random_instance(rng, d, rng.randint(d * d + d + 2, 30)))
        second = kernelize(first.reduced)
        assert second.trace == ()
        assert second.verdict == first.verdict
        assert second.reduced == first.reduced


def test_size_bound_values():
    assert size_bound(2) == 16
    assert size_bound(3) == 45
    assert size_bound(1) == 4
