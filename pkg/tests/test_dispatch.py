import random
from fractions import Fraction

import networkx as nx
import pytest

from oddcolor.core import Graph, verify_odd_coloring
from oddcolor.dispatch import GUARD, NOT_APPLICABLE, Dispatcher
from oddcolor.interval import IntervalRepresentation
from oddcolor.utils import UNBOUNDED, ContractError, GuardExceededError

# keeps every structured route away from the Petersen graph
NARROW = {'clique_budget': 4, 'cluster_t_limit': 3, 'nd_limit': 6}


def complete(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def petersen():
    return Graph.from_networkx(nx.petersen_graph())


def path_intervals(n):
    return IntervalRepresentation(tuple((Fraction(i), Fraction(i + 1)) for i in range(n)))


def test_clique_goes_to_cograph():
    report = Dispatcher().solve(complete(5))
    assert report.algorithm == 'cograph'
    assert report.value == 5
    assert report.certificate.valid


def test_split_route():
    p4 = Graph(4, [(0, 1), (0, 2), (1, 3)])
    report = Dispatcher().solve(p4)
    assert report.algorithm == 'split'
    assert report.detections['cograph'] == NOT_APPLICABLE
    assert report.value == 3


def test_interval_route():
    ir = path_intervals(5)
    g = ir.to_graph()
    report = Dispatcher().solve(g, intervals=ir)
    assert report.algorithm == 'interval'
    assert report.value == 3
    assert verify_odd_coloring(g, report.witness).valid


def test_interval_route_rejects_foreign_model():
    with pytest.raises(ContractError):
        Dispatcher().solve(Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]), intervals=path_intervals(5))


def test_unstructured_graph_goes_to_oracle():
    g = petersen()
    report = Dispatcher(NARROW).solve(g)
    assert report.algorithm == 'oracle'
    assert all(report.detections[r] == NOT_APPLICABLE for r in ('cograph', 'split', 'nd', 'cluster', 'kernel'))
    assert report.value >= 3
    assert report.witness.palette_size() == report.value


def test_everything_guarded():
    with pytest.raises(GuardExceededError, match='too large for exact toolkit'):
        Dispatcher({**NARROW, 'guard_n': 5}).solve(petersen())


def test_forced_route():
    dispatcher = Dispatcher()
    assert dispatcher.solve(complete(5), algo='oracle').value == 5
    with pytest.raises(ContractError):
        dispatcher.solve(Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), algo='split')
    with pytest.raises(ContractError):
        dispatcher.solve(complete(3), algo='greedy')
    with pytest.raises(GuardExceededError):
        Dispatcher({'guard_n': 5}).solve(petersen(), algo='oracle')


def test_isolated_vertex_is_unbounded():
    report = Dispatcher().solve(Graph(3, [(0, 1)]))
    assert report.value == UNBOUNDED
    assert report.witness is None
    assert report.to_dict(Graph(3, [(0, 1)]))['chi_odd'] == 'unbounded'


def test_decision_against_k():
    dispatcher = Dispatcher()
    assert dispatcher.solve(complete(5), k=4).feasible is False
    assert dispatcher.solve(complete(5), k=5).feasible is True
    assert dispatcher.solve(complete(5)).feasible is None


def test_report_dict():
    g = complete(4)
    data = Dispatcher().solve(g, k=4).to_dict(g)
    assert data['algorithm'] == 'cograph'
    assert data['chi_odd'] == 4
    assert data['coloring']['valid'] is True
    assert data['feasible'] is True


def test_applicable_routes():
    routes = Dispatcher().applicable_routes(complete(5))
    assert {'cograph', 'split', 'nd', 'cluster', 'kernel', 'oracle'} <= set(routes)
    assert 'interval' not in routes
    assert Dispatcher({**NARROW, 'guard_n': 5}).detect(petersen(), 'oracle')[0] == GUARD


def test_routes_agree():
    rng = random.Random(21)
    dispatcher = Dispatcher({'cluster_t_limit': 3, 'nd_limit': 5, 'clique_budget': 4})
    checked = 0
    for _ in range(400):
        g = Graph.from_networkx(nx.gnp_random_graph(rng.randint(4, 8), 0.5, seed=rng.randrange(10**6)))
        routes = dispatcher.applicable_routes(g)
        if len(routes) < 2:
            continue
        values = {route: dispatcher.solve(g, algo=route).value for route in routes}
        assert len(set(values.values())) == 1, values
        checked += 1
        if checked == 100:
            break
    assert checked == 100
