"""
Odd coloring of split graphs.

A split graph is stored as a maximal clique ``K`` plus an independent set ``I``;
``tcells[Y]`` holds the vertices of ``I`` whose neighborhood is exactly ``Y``.
The odd chromatic number is ``k`` or ``k + 1`` for ``k = |K|``, and ``k + 1``
happens exactly when some clique vertex ``v`` sees, through ``I``, nothing but
the cells ``T^{K-w}`` (``w != v``) and each of those cells is odd.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .core import Coloring, Graph, verify_odd_coloring
from .oracle import OracleResult, chi_odd, odd_colorable_with
from .utils import UNBOUNDED, VerificationError

logger = logging.getLogger(__name__)

Vertices = Tuple[int, ...]

CASE_UNBOUNDED = 'unbounded'
CASE_ORACLE = 'oracle'
CASE_TWO_EVEN = 'two-even'
CASE_TWO_ODD = 'two-odd'
CASE_EMPTY = 'empty-neighborhood'
CASE_PREDICATE = 'characterization'
CASE_1A = 'case-1a'
CASE_1B = 'case-1b'
CASE_2 = 'case-2'


@dataclass(frozen=True)
class SplitPartition:
    K: Vertices
    I: Vertices
    tcells: Dict[FrozenSet[int], Vertices]

    @property
    def k(self) -> int:
        return len(self.K)

    def cell(self, Y: Iterable[int]) -> Vertices:
        return self.tcells.get(frozenset(Y), ())

    def cell_without(self, w: int) -> Vertices:
        """The cell ``T^{K-w}``."""
        return self.cell(set(self.K) - {w})

    def i_neighbors(self, v: int) -> FrozenSet[int]:
        return frozenset(u for Y, cell in self.tcells.items() if v in Y for u in cell)


@dataclass(frozen=True)
class SplitReport:
    k: int
    case_taken: str
    predicate_vertex: Optional[int] = None
    fallback: bool = False

    def as_dict(self) -> Dict[str, object]:
        return {
            'k': self.k,
            'case_taken': self.case_taken,
            'predicate_vertex': self.predicate_vertex,
            'fallback': self.fallback,
        }


def split_partition(g: Graph) -> Optional[SplitPartition]:
    """Recognize a split graph from its degree sequence and return a maximal-clique partition."""
    order = sorted(g.vertices(), key=lambda v: (-g.degree(v), v))
    degrees = [g.degree(v) for v in order]
    m = 0
    for i, d in enumerate(degrees, start=1):
        if d >= i - 1:
            m = i
    if sum(degrees[:m]) != m * (m - 1) + sum(degrees[m:]):
        return None

    K = set(order[:m])
    I = set(order[m:])
    for v in sorted(I):
        if K <= g.neighbor_set(v):
            K.add(v)
            I.discard(v)
    if not g.is_clique(K) or not g.is_independent(I):
        return None  # no cov

    tcells: Dict[FrozenSet[int], List[int]] = {}
    for v in sorted(I):
        tcells.setdefault(g.neighbor_set(v), []).append(v)
    return SplitPartition(tuple(sorted(K)), tuple(sorted(I)), {Y: tuple(vs) for Y, vs in tcells.items()})


def characterization_vertex(sp: SplitPartition) -> Optional[int]:
    """The lowest clique vertex certifying ``chi_odd = k + 1``, if there is one (``k >= 2``)."""
    if sp.k < 2:
        return None
    for v in sp.K:
        others = [w for w in sp.K if w != v]
        if any(len(sp.cell_without(w)) % 2 == 0 for w in others):
            continue
        union = frozenset(u for w in others for u in sp.cell_without(w))
        if sp.i_neighbors(v) == union:
            return v
    return None


def random_split_graph(k: int, ell: int, rng) -> Graph:
    """Clique ``0..k-1`` plus ``ell`` independent vertices, each with a nonempty proper subset of the clique."""
    edges = [(u, v) for u in range(k) for v in range(u + 1, k)]
    for i in range(k, k + ell):
        if k < 2:
            break
        if rng.random() < 0.5:
            w = rng.randrange(k)
            Y = [u for u in range(k) if u != w]
        else:
            Y = [u for u in range(k) if rng.random() < 0.5]
            if not Y:
                Y = [rng.randrange(k)]
            if len(Y) == k:
                Y.pop(rng.randrange(k))
        edges += [(u, i) for u in Y]
    return Graph(k + ell, edges)


class _Builder:
    """Partial coloring over the clique colors ``1..k`` with ``f(K[i]) = i + 1``."""

    def __init__(self, g: Graph, sp: SplitPartition):
        self.g = g
        self.sp = sp
        self.colors: List[Optional[int]] = [None] * g.n
        for i, v in enumerate(sp.K):
            self.colors[v] = i + 1

    def f(self, v: int) -> int:
        return self.colors[v]

    def paint(self, vertices: Iterable[int], c: int) -> None:
        for v in vertices:
            self.colors[v] = c

    def neighbor_colors(self, v: int) -> FrozenSet[int]:
        return frozenset(self.colors[u] for u in self.g.neighbors(v) if self.colors[u] is not None)

    def lowest(self, v: int, avoid: Iterable[int] = ()) -> int:
        """Lowest color of ``1..k`` proper at ``v`` outside ``avoid``; drops ``avoid`` when nothing fits."""
        blocked = self.neighbor_colors(v)
        for c in range(1, self.sp.k + 1):
            if c not in blocked and c not in avoid:
                return c
        return min(c for c in range(1, self.sp.k + 1) if c not in blocked)

    def uncolored(self) -> List[int]:
        return [v for v in self.sp.I if self.colors[v] is None]

    def coloring(self) -> Coloring:
        return Coloring(tuple(self.colors), self.sp.k)


def _case_1a(b: _Builder, w: int, z: int) -> None:
    sp = b.sp
    for y in sp.K:
        b.paint(sp.cell_without(y), b.f(y))
    near_w = b.g.neighbor_set(w)
    for u in b.uncolored():
        b.colors[u] = b.lowest(u, avoid=(b.f(z),) if u in near_w else (b.f(w),))


def _case_1b(b: _Builder, w: int) -> None:
    sp = b.sp
    for x in sp.K:
        b.paint(sp.cell_without(x), b.f(x))
    D = [u for u in b.uncolored() if b.g.has_edge(u, w)]
    if D:
        c_w = b.lowest(D[0])
        b.colors[D[0]] = c_w
        for u in D[1:]:
            b.colors[u] = b.lowest(u, avoid=(c_w,))
    for u in b.uncolored():
        b.colors[u] = b.lowest(u, avoid=(b.f(w),))


def _peel(g: Graph, K: Sequence[int], rest: Sequence[int]) -> List[Tuple[int, Vertices, Vertices]]:
    """Carve off the highest-degree vertex ``p`` of ``rest``, its clique side ``Q`` and the vertices it dominates."""
    K_left = set(K)
    I_left = list(rest)
    steps = []
    while K_left and I_left:
        degree = {v: len(g.neighbor_set(v) & K_left) for v in I_left}
        p = max(I_left, key=lambda v: (degree[v], -v))
        Q = g.neighbor_set(p) & K_left
        if not Q:
            break
        R = tuple(v for v in I_left if v != p and g.neighbor_set(v) & K_left <= Q)
        steps.append((p, tuple(sorted(Q)), R))
        K_left -= Q
        I_left = [v for v in I_left if v != p and v not in R]
    return steps


def _case_2(b: _Builder) -> None:
    sp = b.sp
    for x in sp.K:
        b.paint(sp.cell_without(x), b.f(x))
    steps = _peel(b.g, sp.K, b.uncolored())
    chosen: List[int] = []
    for j, (p, _, _) in enumerate(steps):
        source = steps[-1][1] if j == 0 else steps[j - 1][1]
        blocked = b.neighbor_colors(p)
        candidates = [b.f(q) for q in source if b.f(q) not in blocked]
        b.colors[p] = min(candidates) if candidates else b.lowest(p)
        chosen.append(b.colors[p])
    for j, (_, _, R) in enumerate(steps):
        for v in R:
            b.colors[v] = b.lowest(v, avoid=chosen[: j + 1])
    for v in b.uncolored():
        b.colors[v] = b.lowest(v)


def _k_plus_one_witness(g: Graph, sp: SplitPartition) -> Coloring:
    b = _Builder(g, sp)
    b.paint(sp.I, sp.k + 1)
    return Coloring(tuple(b.colors), sp.k + 1)


def _two_clique_witness(g: Graph, sp: SplitPartition) -> Coloring:
    v1, v2 = sp.K
    colors = [None] * g.n
    colors[v1], colors[v2] = 1, 2
    for u in sp.I:
        colors[u] = 2 if g.has_edge(u, v1) else 1
    return Coloring(tuple(colors), 2)


def _extend_clique(g: Graph, sp: SplitPartition, guard_n: Optional[int]) -> Optional[Coloring]:
    pre = Coloring.empty(g.n, sp.k).with_colors({v: i + 1 for i, v in enumerate(sp.K)})
    return odd_colorable_with(g, sp.k, pre=pre, guard_n=guard_n)


def chi_odd_split(g: Graph, sp: SplitPartition, guard_n: Optional[int] = None) -> OracleResult:
    """
    Exact odd chromatic number of a split graph with a witness.

    The value is decided by the characterization alone; the witness for value
    ``k`` comes from the case constructions and is checked before it is
    returned. A construction that fails the check is replaced by an exhaustive
    extension of the clique coloring, and the report is flagged.
    """
    k = sp.k
    if g.n and g.has_isolated_vertex():
        return OracleResult(UNBOUNDED, None, SplitReport(k, CASE_UNBOUNDED).as_dict())
    if k <= 1:
        res = chi_odd(g, guard_n=guard_n)
        return OracleResult(res.value, res.witness, SplitReport(k, CASE_ORACLE).as_dict())

    v = characterization_vertex(sp)
    if k == 2:
        if v is None:
            return _finish(g, sp, 2, _two_clique_witness(g, sp), SplitReport(k, CASE_TWO_EVEN), guard_n)
        return _finish(g, sp, 3, _k_plus_one_witness(g, sp), SplitReport(k, CASE_TWO_ODD, v), guard_n)

    for i, p in enumerate(sp.K):
        if not sp.i_neighbors(p):
            b = _Builder(g, sp)
            b.paint(sp.I, i + 1)
            return _finish(g, sp, k, b.coloring(), SplitReport(k, CASE_EMPTY), guard_n)

    if v is not None:
        return _finish(g, sp, k + 1, _k_plus_one_witness(g, sp), SplitReport(k, CASE_PREDICATE, v), guard_n)

    b = _Builder(g, sp)
    even = [w for w in sp.K if len(sp.cell_without(w)) % 2 == 0]
    if len(even) >= 2:
        _case_1a(b, even[0], even[1])
        case = CASE_1A
    elif even:
        _case_1b(b, even[0])
        case = CASE_1B
    else:
        _case_2(b)
        case = CASE_2
    return _finish(g, sp, k, b.coloring(), SplitReport(k, case), guard_n)


def _finish(
    g: Graph, sp: SplitPartition, value: int, witness: Coloring, report: SplitReport, guard_n: Optional[int]
) -> OracleResult:
    if verify_odd_coloring(g, witness).valid:
        logger.debug("split: k=%d value=%d case=%s", sp.k, value, report.case_taken)
        return OracleResult(value, witness, report.as_dict())

    logger.warning("split: %s construction failed verification on n=%d, k=%d", report.case_taken, g.n, sp.k)
    if value != sp.k:
        raise VerificationError(f"split {report.case_taken} witness is not an odd coloring")  # no cov
    witness = _extend_clique(g, sp, guard_n)
    if witness is None:
        raise VerificationError(f"no odd {sp.k}-coloring extends the clique coloring")  # no cov
    report = SplitReport(report.k, report.case_taken, report.predicate_vertex, fallback=True)
    return OracleResult(value, witness, report.as_dict())
