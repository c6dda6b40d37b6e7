"""
Instance generators that turn a proper-coloring question into an odd-coloring one.

Each generator returns a :class:`ReductionOutput` holding the target graph, the
target palette size and a role for every target vertex. Gadget vertices are
appended after the source vertices in a fixed order: parity gadgets, edge
vertices (edges in lexicographic order), pendants, the hub, then the
universal and center vertices. :func:`verify_reduction_equivalence` checks the
yes/no contract of a generator with the exact oracle.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import approximation

from .core import Graph
from .oracle import decide_odd, decide_proper
from .utils import DEFAULT_GUARD_N, ContractError, check_guard

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

ROLE_ORIGINAL = 'original'
ROLE_PENDANT = 'pendant'
ROLE_EDGE = 'edge-vertex'
ROLE_UNIVERSAL = 'universal-u'
ROLE_HUB = 'hub-z'
ROLE_CENTER = 'center-w'
ROLE_PARITY = 'parity-gadget'

KINDS = ('vc', 'cw', 'peb', 'scb')


@dataclass(frozen=True)
class ReductionOutput:
    kind: str
    source: Graph
    h: Graph
    k_in: Optional[int]
    k_out: Optional[int]
    roles: Tuple[str, ...]
    provenance: Tuple[str, ...] = ()
    modulator: Tuple[int, ...] = ()
    scheme: Tuple[Edge, ...] = ()
    star_center: Optional[int] = None

    def role_map(self) -> Dict[str, object]:
        return {
            'kind': self.kind,
            'k_in': self.k_in,
            'k_out': self.k_out,
            'roles': list(self.roles),
            'provenance': list(self.provenance),
            'modulator': list(self.modulator),
            'scheme': [list(e) for e in self.scheme],
            'star_center': self.star_center,
        }


def all_degrees_odd(g: Graph) -> bool:
    return all(g.degree(v) % 2 == 1 for v in g.vertices())


def is_bipartite(g: Graph) -> bool:
    return nx.is_bipartite(g.to_networkx())


def is_vertex_cover(g: Graph, X: Iterable[int]) -> bool:
    cover = set(X)
    return all(u in cover or v in cover for u, v in g.edges)


def _bisimplicial(g: Graph, alive: set, x: int, y: int) -> bool:
    """``N(x) ∪ N(y)`` inside ``alive`` induces a complete bipartite graph."""
    near_y = [v for v in g.neighbors(y) if v in alive]
    near_x = [v for v in g.neighbors(x) if v in alive]
    return all(g.has_edge(a, b) for a in near_y for b in near_x)


def check_edge_elimination_scheme(g: Graph, scheme: Sequence[Edge]) -> bool:
    alive = set(g.vertices())
    used = set()
    for x, y in scheme:
        if x in used or y in used or not g.has_edge(x, y):
            return False
        if x not in alive or y not in alive or not _bisimplicial(g, alive, x, y):
            return False
        alive -= {x, y}
        used |= {x, y}
    return not any(u in alive and v in alive for u, v in g.edges)


def check_star_convex(g: Graph, side: Sequence[int], center: int) -> bool:
    """
    Every vertex of ``side`` sees a subtree of the star on the other side
    centered at ``center``: a set holding the center, a single leaf, or nothing.
    """
    members = set(side)
    if center in members:
        return False
    other = set(g.vertices()) - members
    if any((u in members) == (v in members) for u, v in g.edges):
        return False
    for v in members:
        nbrs = g.neighbor_set(v) & other
        if len(nbrs) > 1 and center not in nbrs:
            return False
    return True


def _cover_of(g: Graph) -> List[int]:
    return sorted(approximation.min_weighted_vertex_cover(g.to_networkx()))


def reduce_vc_coloring_to_odd(g: Graph, X: Iterable[int], k: int) -> ReductionOutput:
    """
    Odd-degree target for coloring parameterized by a vertex cover: a universal
    vertex ``u`` over the source, a hub ``z`` over the odd-degree vertices
    outside the cover, and pendants on odd-degree cover vertices. Source
    ``G`` is k-colorable iff the target is odd (k+1)-colorable.
    """
    X = sorted(set(X))
    if any(not 0 <= x < g.n for x in X):
        raise ContractError("modulator lists a vertex outside the graph")
    if not is_vertex_cover(g, X):
        raise ContractError("modulator is not a vertex cover")

    n = g.n
    edges = list(g.edges)
    roles = [ROLE_ORIGINAL] * n
    cover = list(X)
    provenance = []
    if n % 2 == 0:
        a, b, c = n, n + 1, n + 2
        edges += [(a, b), (a, c), (b, c)]
        roles += [ROLE_PARITY] * 3
        cover += [a, b]
        provenance.append('isolated-triangle')
        n += 3
    source = Graph(n, edges)
    in_cover = set(cover)
    outside_odd = [v for v in source.vertices() if v not in in_cover and source.degree(v) % 2 == 1]
    if len(outside_odd) % 2 == 0:
        a, b = n, n + 1
        edges.append((a, b))
        roles += [ROLE_PARITY] * 2
        cover.append(a)
        outside_odd.append(b)
        provenance.append('isolated-edge')
        n += 2
    source = Graph(n, edges)

    h_edges = list(edges)
    next_id = n
    for v in sorted(cover):
        if source.degree(v) % 2 == 1:
            h_edges.append((v, next_id))
            roles.append(ROLE_PENDANT)
            next_id += 1
    z = next_id
    h_edges += [(z, v) for v in sorted(outside_odd)]
    roles.append(ROLE_HUB)
    u = z + 1
    h_edges += [(u, v) for v in range(n)]
    roles.append(ROLE_UNIVERSAL)
    h = Graph(u + 1, h_edges)

    modulator = tuple(sorted(cover)) + (z, u)
    if not all_degrees_odd(h):
        raise ContractError("vertex-cover target has a vertex of even degree")  # no cov
    if not is_vertex_cover(h, modulator):
        raise ContractError("vertex-cover target modulator is not a cover")  # no cov
    logger.debug("vc reduction: n=%d -> %d, cover %d -> %d, fixups %s", g.n, h.n, len(X), len(modulator), provenance)
    return ReductionOutput('vc', source, h, k, k + 1, tuple(roles), tuple(provenance), modulator)


def reduce_cw_coloring_to_odd(g: Graph, k: Optional[int] = None) -> ReductionOutput:
    """
    Pendants on even-degree vertices. Every target vertex has odd degree, so
    ``chi(g) == chi_odd(h)`` once ``g`` has an edge.
    """
    edges = list(g.edges)
    roles = [ROLE_ORIGINAL] * g.n
    next_id = g.n
    for v in g.vertices():
        if g.degree(v) % 2 == 0:
            edges.append((v, next_id))
            roles.append(ROLE_PENDANT)
            next_id += 1
    h = Graph(next_id, edges)
    if not all_degrees_odd(h):
        raise ContractError("clique-width target has a vertex of even degree")  # no cov
    return ReductionOutput('cw', g, h, k, k, tuple(roles))


def _require_k(k: int, kind: str) -> None:
    if k < 3:
        raise ContractError(f"{kind} reduction needs k >= 3, got {k}")


def reduce_to_perfect_elim_bipartite(g: Graph, k: int) -> ReductionOutput:
    """Subdivide every edge and hang a pendant ``y_p`` on every source vertex."""
    _require_k(k, 'perfect elimination')
    n = g.n
    roles = [ROLE_ORIGINAL] * n
    edges: List[Edge] = []
    next_id = n
    for a, b in g.sorted_edges():
        edges += [(a, next_id), (b, next_id)]
        roles.append(ROLE_EDGE)
        next_id += 1
    scheme = []
    for v in range(n):
        edges.append((next_id, v))
        roles.append(ROLE_PENDANT)
        scheme.append((next_id, v))
        next_id += 1
    h = Graph(next_id, edges)
    if not is_bipartite(h):
        raise ContractError("perfect elimination target is not bipartite")  # no cov
    if not check_edge_elimination_scheme(h, scheme):
        raise ContractError("pendant edges do not form a perfect edge elimination scheme")  # no cov
    return ReductionOutput('peb', g, h, k, k, tuple(roles), scheme=tuple(scheme))


def reduce_to_star_convex_bipartite(g: Graph, k: int) -> ReductionOutput:
    """
    Add a universal vertex ``x``, subdivide every edge of the result and join a
    center ``w`` to all of its original vertices. ``chi(g) <= k`` iff the
    target is odd (k+2)-colorable.
    """
    _require_k(k, 'star-convex')
    n = g.n
    x_label = n
    with_x = list(g.sorted_edges()) + [(v, x_label) for v in range(n)]
    m = len(with_x)
    w = n + m
    x = n + m + 1
    relabel = {v: v for v in range(n)}
    relabel[x_label] = x

    roles = [ROLE_ORIGINAL] * n + [ROLE_EDGE] * m + [ROLE_CENTER, ROLE_UNIVERSAL]
    edges: List[Edge] = []
    for i, (a, b) in enumerate(sorted(with_x)):
        edges += [(relabel[a], n + i), (relabel[b], n + i)]
    edges += [(w, v) for v in range(n)] + [(w, x)]
    h = Graph(x + 1, edges)

    side = list(range(n)) + [x]
    if not is_bipartite(h) or not check_star_convex(h, side, w):
        raise ContractError("star-convex target failed its structural check")  # no cov
    return ReductionOutput('scb', g, h, k, k + 2, tuple(roles), star_center=w)


def build_reduction(g: Graph, k: int, which: str, X: Optional[Iterable[int]] = None) -> ReductionOutput:
    if which == 'vc':
        return reduce_vc_coloring_to_odd(g, _cover_of(g) if X is None else X, k)
    if which == 'cw':
        return reduce_cw_coloring_to_odd(g, k)
    if which == 'peb':
        return reduce_to_perfect_elim_bipartite(g, k)
    if which == 'scb':
        return reduce_to_star_convex_bipartite(g, k)
    raise ContractError(f"unknown reduction '{which}', expected one of {', '.join(KINDS)}")


def verify_reduction_equivalence(
    g: Graph, k: int, which: str, guard_n: Optional[int] = DEFAULT_GUARD_N
) -> bool:
    """The oracle answers the source and the target question the same way."""
    out = build_reduction(g, k, which)
    check_guard(out.h.n, guard_n, f"{which} target")
    source_yes = decide_proper(out.source, k, guard_n=None)
    target_yes = decide_odd(out.h, out.k_out, guard_n=None)
    if source_yes != target_yes:
        logger.warning("%s reduction broke equivalence at k=%d on n=%d", which, k, g.n)
    return source_yes == target_yes


def structural_check(out: ReductionOutput) -> bool:
    """The class property the target of ``out.kind`` promises."""
    if out.kind == 'vc':
        return all_degrees_odd(out.h) and is_vertex_cover(out.h, out.modulator)
    if out.kind == 'cw':
        return all_degrees_odd(out.h)
    if out.kind == 'peb':
        return is_bipartite(out.h) and check_edge_elimination_scheme(out.h, out.scheme)
    side = [v for v, role in enumerate(out.roles) if role in (ROLE_ORIGINAL, ROLE_UNIVERSAL)]
    return is_bipartite(out.h) and check_star_convex(out.h, side, out.star_center)
