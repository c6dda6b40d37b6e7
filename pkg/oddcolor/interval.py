"""
Odd coloring of interval graphs from an interval representation.

The general algorithm picks a dominating backbone path by the greedy
rightmost-reach rule, colors it 1, 2, 3 cyclically, then list-colors the
other intervals greedily in left-endpoint order from ``{4, .., ω + 1}`` plus
one released backbone color. The result uses at most ``ω + 1`` colors. When
that run exhausts a list or fails verification the greedy is retried in
right-endpoint order; a component where both orders fail is recolored by the
exhaustive extension routine and flagged.

Proper interval graphs are solved exactly: ``ω + 1`` when some vertex has
``ω - 1`` neighbors on each side, ``ω`` otherwise with colors assigned
cyclically in endpoint order.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import Coloring, Graph, verify_odd_coloring
from .oracle import OracleResult, odd_colorable_with
from .utils import DEFAULT_GUARD_N, UNBOUNDED, ContractError, GraphParseError, VerificationError

logger = logging.getLogger(__name__)

Interval = Tuple[Fraction, Fraction]

LEFT = 0


@dataclass(frozen=True)
class IntervalRepresentation:
    intervals: Tuple[Interval, ...]

    def __post_init__(self):
        fixed = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.intervals)
        for v, (lo, hi) in enumerate(fixed):
            if lo > hi:
                raise ContractError(f"interval of vertex {v} has left end {lo} after right end {hi}")
        object.__setattr__(self, 'intervals', fixed)

    @property
    def n(self) -> int:
        return len(self.intervals)

    def left(self, v: int) -> Fraction:
        return self.intervals[v][0]

    def right(self, v: int) -> Fraction:
        return self.intervals[v][1]

    def intersects(self, u: int, v: int) -> bool:
        return self.left(u) <= self.right(v) and self.left(v) <= self.right(u)

    def to_graph(self) -> Graph:
        order = self.left_order()
        edges = []
        for i, u in enumerate(order):
            for v in order[i + 1 :]:
                if self.left(v) > self.right(u):
                    break
                edges.append((u, v))
        return Graph(self.n, edges)

    def left_order(self) -> List[int]:
        return sorted(range(self.n), key=lambda v: (self.left(v), v))

    def right_order(self) -> List[int]:
        return sorted(range(self.n), key=lambda v: (self.right(v), v))

    def induced(self, vertices: Sequence[int]) -> 'IntervalRepresentation':
        return IntervalRepresentation(tuple(self.intervals[v] for v in vertices))

    def is_distinguishing(self) -> bool:
        points = [p for interval in self.intervals for p in interval]
        return len(set(points)) == len(points)

    def distinguish(self) -> 'IntervalRepresentation':
        """
        Same intersection graph with all 2n endpoints distinct.

        Endpoints are replaced by their ranks; at a shared coordinate left ends
        rank before right ends, and ties of one kind break by vertex index.
        """
        events = sorted(
            (point, kind, v) for v, interval in enumerate(self.intervals) for kind, point in enumerate(interval)
        )
        ranked: List[List[Fraction]] = [[Fraction(0), Fraction(0)] for _ in range(self.n)]
        for rank, (_, kind, v) in enumerate(events):
            ranked[v][kind] = Fraction(rank)
        return IntervalRepresentation(tuple((lo, hi) for lo, hi in ranked))

    def is_proper(self) -> bool:
        """No interval contains another one once shared endpoints are separated."""
        rep = self if self.is_distinguishing() else self.distinguish()
        order = rep.left_order()
        for i, u in enumerate(order):
            for v in order[i + 1 :]:
                if rep.left(v) > rep.right(u):
                    break
                if rep.right(v) < rep.right(u):
                    return False
        return True


@dataclass(frozen=True)
class BackbonePath:
    vertices: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class IntervalColoring:
    coloring: Coloring
    omega: int
    fallback_components: Tuple[int, ...] = ()

    @property
    def fallback(self) -> bool:
        return bool(self.fallback_components)


def parse_intervals(text: str) -> IntervalRepresentation:
    """
    Parse ``id l r`` lines (``id`` is the 0-based vertex index, endpoints are
    integers, decimals or fractions like ``3/2``). ``#`` starts a comment.
    """
    found: Dict[int, Interval] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise GraphParseError("expected 'id l r'", lineno)
        try:
            v = int(tokens[0])
            lo, hi = Fraction(tokens[1]), Fraction(tokens[2])
        except (ValueError, ZeroDivisionError):
            raise GraphParseError(f"malformed interval line '{line}'", lineno) from None
        if v < 0:
            raise GraphParseError("negative vertex index", lineno)
        if v in found:
            raise GraphParseError(f"vertex {v} listed twice", lineno)
        if lo > hi:
            raise GraphParseError(f"left end {lo} exceeds right end {hi}", lineno)
        found[v] = (lo, hi)
    missing = sorted(set(range(len(found))) - set(found))
    if missing:
        raise GraphParseError(f"no interval for vertex {missing[0]}")
    return IntervalRepresentation(tuple(found[v] for v in range(len(found))))


def read_intervals(path: str) -> IntervalRepresentation:
    with open(path, encoding='utf-8') as fh:
        return parse_intervals(fh.read())


def random_intervals(n: int, rng, span: Optional[int] = None) -> IntervalRepresentation:
    span = span or 3 * n
    intervals = []
    for _ in range(n):
        lo = rng.randint(0, span)
        intervals.append((Fraction(lo), Fraction(lo + rng.randint(1, max(2, span // 4)))))
    return IntervalRepresentation(tuple(intervals))


def random_unit_intervals(n: int, rng, density: int = 3) -> IntervalRepresentation:
    """Unit intervals with left ends drawn from a grid of ``density`` points per unit."""
    lefts = [Fraction(rng.randint(0, n * density // 2), density) for _ in range(n)]
    return IntervalRepresentation(tuple((lo, lo + 1) for lo in lefts))


def omega(ir: IntervalRepresentation) -> int:
    events = sorted((point, kind) for interval in ir.intervals for kind, point in enumerate(interval))
    best = active = 0
    for _, kind in events:
        if kind == LEFT:
            active += 1
            best = max(best, active)
        else:
            active -= 1
    return best


def build_backbone_path(ir: IntervalRepresentation) -> BackbonePath:
    """
    Start from the interval ending first and keep jumping to the intersecting
    interval that reaches furthest right, while that reach grows.
    """
    if ir.n == 0:
        return BackbonePath(())
    if not ir.is_distinguishing():
        raise ContractError("backbone needs a representation with distinct endpoints")
    path = [min(range(ir.n), key=ir.right)]
    while True:
        cur = path[-1]
        reach = max((v for v in range(ir.n) if ir.intersects(v, cur)), key=ir.right)
        if ir.right(reach) <= ir.right(cur):
            break
        path.append(reach)

    for v in range(ir.n):
        if not any(ir.intersects(v, p) for p in path):
            raise ContractError(f"backbone does not reach vertex {v}, the representation is disconnected")
    return BackbonePath(tuple(path))


def _phase1(ir: IntervalRepresentation, path: BackbonePath) -> List[Optional[int]]:
    colors: List[Optional[int]] = [None] * ir.n
    for i, v in enumerate(path.vertices):
        colors[v] = i % 3 + 1
    return colors


def _phase2(g: Graph, path: BackbonePath, k: int, colors: List[Optional[int]], order: Sequence[int]) -> bool:
    """Greedy list coloring of the non-backbone intervals in ``order``; False when some list runs out."""
    on_path = {v: i for i, v in enumerate(path.vertices)}
    fresh = list(range(4, k + 2))
    for u in order:
        if u in on_path:
            continue
        hits = sorted(on_path[p] for p in g.neighbors(u) if p in on_path)
        if len(hits) >= 3:
            allowed = list(fresh)
        else:
            q = hits[0]
            allowed = fresh + ([colors[path.vertices[q - 1]]] if q > 0 else [])
        taken = {colors[w] for w in g.neighbors(u) if colors[w] is not None}
        options = [c for c in allowed if c not in taken]
        if not options:
            logger.debug("interval: list of vertex %d exhausted", u)
            return False
        colors[u] = min(options)
    return True


def _fallback(g: Graph, ir: IntervalRepresentation, k: int, colors: List[Optional[int]]) -> Coloring:
    order = ir.left_order()
    pre = Coloring(tuple(colors), k)
    witness = odd_colorable_with(g, k, pre=pre, order=order, guard_n=None)
    if witness is None:
        witness = odd_colorable_with(g, k, order=order, guard_n=None)
    if witness is None:
        raise VerificationError(f"no odd {k}-coloring of an interval component with {g.n} vertices")  # no cov
    return witness


def _color_component(ir: IntervalRepresentation) -> Tuple[Coloring, bool]:
    g = ir.to_graph()
    k = omega(ir)
    path = build_backbone_path(ir)
    phase1 = _phase1(ir, path)
    for order in (ir.left_order(), ir.right_order()):
        colors = list(phase1)
        if _phase2(g, path, k, colors, order):
            coloring = Coloring(tuple(colors), k + 1)
            if verify_odd_coloring(g, coloring).valid:
                return coloring, False
    logger.warning("interval: greedy list coloring failed on a component with n=%d, omega=%d", ir.n, k)
    return _fallback(g, ir, k + 1, phase1), True


def interval_odd_coloring(ir: IntervalRepresentation) -> IntervalColoring:
    ir = ir if ir.is_distinguishing() else ir.distinguish()
    g = ir.to_graph()
    if g.has_isolated_vertex():
        raise ContractError(f"vertex {g.isolated_vertices()[0]} has no neighbors, no odd coloring exists")
    k = omega(ir)
    colors: List[Optional[int]] = [None] * ir.n
    fallbacks = []
    for index, comp in enumerate(g.components()):
        sub, used_fallback = _color_component(ir.induced(comp))
        for new, old in enumerate(comp):
            colors[old] = sub[new]
        if used_fallback:
            fallbacks.append(index)
    coloring = Coloring(tuple(colors), k + 1)
    if not verify_odd_coloring(g, coloring).valid:
        raise VerificationError("interval coloring failed verification")  # no cov
    return IntervalColoring(coloring, k, tuple(fallbacks))


def color_interval_graph(ir: IntervalRepresentation) -> Coloring:
    return interval_odd_coloring(ir).coloring


def _require_proper(ir: IntervalRepresentation) -> IntervalRepresentation:
    if not ir.is_proper():
        raise ContractError("representation is not proper, some interval contains another")
    return ir if ir.is_distinguishing() else ir.distinguish()


def has_two_max_disjoint_cliques_vertex(ir: IntervalRepresentation) -> Optional[int]:
    """A vertex with ``ω - 1`` neighbors on each side in endpoint order, if any."""
    ir = _require_proper(ir)
    k = omega(ir)
    g = ir.to_graph()
    position = {v: i for i, v in enumerate(ir.left_order())}
    for v in ir.left_order():
        before = sum(1 for u in g.neighbors(v) if position[u] < position[v])
        after = g.degree(v) - before
        if before == after == k - 1:
            return v
    return None


def cyclic_coloring(ir: IntervalRepresentation, k: int) -> Coloring:
    colors: List[Optional[int]] = [None] * ir.n
    for i, v in enumerate(ir.right_order()):
        colors[v] = i % k + 1
    return Coloring(tuple(colors), k)


def chi_odd_proper_interval(ir: IntervalRepresentation) -> OracleResult:
    ir = _require_proper(ir)
    g = ir.to_graph()
    k = omega(ir)
    if ir.n == 0:
        return OracleResult(0, Coloring((), 0), {'omega': 0})
    if g.has_isolated_vertex():
        return OracleResult(UNBOUNDED, None, {'omega': k})

    v = has_two_max_disjoint_cliques_vertex(ir)
    if v is not None:
        colored = interval_odd_coloring(ir)
        diagnostics = {'omega': k, 'vertex': v, 'fallback': colored.fallback}
        return OracleResult(k + 1, colored.coloring, diagnostics)

    witness = cyclic_coloring(ir, k)
    if not verify_odd_coloring(g, witness).valid:
        raise VerificationError("cyclic coloring of a proper interval graph is not odd")  # no cov
    return OracleResult(k, witness, {'omega': k, 'vertex': None, 'fallback': False})


def chi_odd_interval(ir: IntervalRepresentation, guard_n: Optional[int] = DEFAULT_GUARD_N) -> OracleResult:
    """
    Exact value for any interval graph. Proper models use the closed form; for
    the rest the constructive coloring settles ``ω`` whenever it needs no
    extra color, and otherwise the oracle decides between ``ω`` and ``ω + 1``.
    """
    if ir.is_proper():
        result = chi_odd_proper_interval(ir)
        return OracleResult(result.value, result.witness, {**result.diagnostics, 'proper': True, 'exact_via': 'proper'})
    g = ir.to_graph()
    if g.has_isolated_vertex():
        return OracleResult(UNBOUNDED, None, {'omega': omega(ir), 'proper': False})
    colored = interval_odd_coloring(ir)
    k = colored.omega
    diagnostics = {'omega': k, 'proper': False, 'fallback': colored.fallback, 'exact_via': 'construction'}
    if colored.coloring.palette_size() <= k:
        return OracleResult(k, colored.coloring.compacted(), diagnostics)
    tighter = odd_colorable_with(g, k, guard_n=guard_n)
    diagnostics['exact_via'] = 'oracle'
    if tighter is not None:
        return OracleResult(k, tighter, diagnostics)
    return OracleResult(k + 1, colored.coloring, diagnostics)
