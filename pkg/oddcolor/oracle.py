"""
Exact backtracking oracle for chi, chi_odd and their strong variants.

The search colors vertices in a fixed order (descending degree unless the
caller supplies one), tries colors in ascending order and only ever opens the
lowest unused free color, so permutations of interchangeable colors are never
revisited. In odd mode a branch dies as soon as some vertex has its whole
neighborhood colored without an odd color.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import networkx as nx

from .core import Coloring, Graph
from .utils import DEFAULT_GUARD_N, UNBOUNDED, ContractError, Value, check_guard

logger = logging.getLogger(__name__)

MODES = ('odd', 'proper')


@dataclass(frozen=True)
class OracleResult:
    value: Value
    witness: Optional[Coloring] = None
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def bounded(self) -> bool:
        return self.value != UNBOUNDED


class _Search:
    def __init__(self, g: Graph, k: int, odd: bool, strong: bool, order: Sequence[int]):
        self.g = g
        self.k = k
        self.odd = odd
        self.strong = strong
        self.order = list(order)
        n = g.n
        self.colors: List[Optional[int]] = [None] * n
        self.counts = [[0] * (k + 1) for _ in range(n)]
        self.odd_count = [0] * n
        self.uncolored_nbrs = [g.degree(v) for v in range(n)]
        self.class_size = [0] * (k + 1)
        self.fixed_colors: List[int] = []
        self.free_colors: List[int] = list(range(1, k + 1))
        self.free_used = 0

    def _closed_without_odd(self, v: int) -> bool:
        return self.uncolored_nbrs[v] == 0 and self.odd_count[v] == 0

    def assign(self, v: int, c: int) -> bool:
        """Color ``v``; returns False when the odd-parity check fails (state is still updated)."""
        self.colors[v] = c
        self.class_size[c] += 1
        ok = True
        for w in self.g.neighbors(v):
            row = self.counts[w]
            self.odd_count[w] += -1 if row[c] % 2 else 1
            row[c] += 1
            self.uncolored_nbrs[w] -= 1
            if self.odd and self._closed_without_odd(w):
                ok = False
        if self.odd and self._closed_without_odd(v):
            ok = False
        return ok

    def unassign(self, v: int, c: int) -> None:
        self.colors[v] = None
        self.class_size[c] -= 1
        for w in self.g.neighbors(v):
            row = self.counts[w]
            self.odd_count[w] += -1 if row[c] % 2 else 1
            row[c] -= 1
            self.uncolored_nbrs[w] += 1

    def precolor(self, pre: Coloring) -> bool:
        fixed = sorted(pre.used_colors())
        self.fixed_colors = fixed
        self.free_colors = [c for c in range(1, self.k + 1) if c not in set(fixed)]
        for v, c in sorted(pre.assigned().items()):
            if self.counts[v][c]:
                return False
            if not self.assign(v, c):
                return False
        return True

    def candidates(self, v: int) -> List[int]:
        opened = self.free_colors[: self.free_used + 1]
        row = self.counts[v]
        return [c for c in sorted(self.fixed_colors + opened) if row[c] == 0]

    def extend(self, i: int = 0) -> bool:
        if i == len(self.order):
            return not self.strong or any(s % 2 for s in self.class_size)
        v = self.order[i]
        for c in self.candidates(v):
            opens = self.free_used < len(self.free_colors) and c == self.free_colors[self.free_used]
            if opens:
                self.free_used += 1
            if self.assign(v, c) and self.extend(i + 1):
                return True
            self.unassign(v, c)
            if opens:
                self.free_used -= 1
        return False


def _default_order(g: Graph) -> List[int]:
    return sorted(g.vertices(), key=lambda v: (-g.degree(v), v))


def odd_colorable_with(
    g: Graph,
    k: int,
    pre: Optional[Coloring] = None,
    mode: str = 'odd',
    strong: bool = False,
    order: Optional[Sequence[int]] = None,
    guard_n: Optional[int] = DEFAULT_GUARD_N,
) -> Optional[Coloring]:
    """
    Extend ``pre`` to a total k-coloring that is odd (``mode='odd'``) or merely
    proper (``mode='proper'``); with ``strong`` some color class must have odd
    size. Returns None when no extension exists.
    """
    if mode not in MODES:
        raise ContractError(f"unknown extension mode '{mode}'")
    check_guard(g.n, guard_n, 'oracle input')
    if pre is None:
        pre = Coloring.empty(g.n, k)
    if len(pre) != g.n:
        raise ContractError(f"precoloring covers {len(pre)} vertices, graph has {g.n}")
    if any(c > k for c in pre.used_colors()):
        raise ContractError(f"precoloring uses colors outside 1..{k}")
    if g.n == 0:
        return Coloring((), k) if not strong else None
    if k <= 0:
        return None
    if mode == 'odd' and g.has_isolated_vertex():
        return None

    precolored = pre.assigned()
    if order is None:
        order = _default_order(g)
    search_order = [v for v in order if v not in precolored]
    if sorted(search_order) != sorted(set(g.vertices()) - set(precolored)):
        raise ContractError("vertex order must list every uncolored vertex once")

    search = _Search(g, k, odd=(mode == 'odd'), strong=strong, order=search_order)
    if not search.precolor(pre):
        return None
    if not search.extend():
        return None
    return Coloring(tuple(search.colors), k)


def decide_odd(g: Graph, k: int, guard_n: Optional[int] = DEFAULT_GUARD_N) -> bool:
    return odd_colorable_with(g, k, guard_n=guard_n) is not None


def decide_proper(g: Graph, k: int, guard_n: Optional[int] = DEFAULT_GUARD_N) -> bool:
    return odd_colorable_with(g, k, mode='proper', guard_n=guard_n) is not None


def clique_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    return max(len(c) for c in nx.find_cliques(g.to_networkx()))


def _deepen(g: Graph, start: int, mode: str, strong: bool) -> OracleResult:
    for k in range(max(start, 1), g.n + 1):
        witness = odd_colorable_with(g, k, mode=mode, strong=strong, guard_n=None)
        if witness is not None:
            logger.debug("oracle %s%s: n=%d value=%d", mode, ' strong' if strong else '', g.n, k)
            return OracleResult(k, witness)
    raise ContractError(f"no {mode} coloring with at most n colors")  # no cov


def chi(g: Graph, guard_n: Optional[int] = DEFAULT_GUARD_N) -> OracleResult:
    check_guard(g.n, guard_n, 'oracle input')
    if g.n == 0:
        return OracleResult(0, Coloring((), 0))
    return _deepen(g, clique_number(g), 'proper', strong=False)


def chi_strong(g: Graph, guard_n: Optional[int] = DEFAULT_GUARD_N) -> OracleResult:
    check_guard(g.n, guard_n, 'oracle input')
    if g.n == 0:
        return OracleResult(UNBOUNDED)
    return _deepen(g, chi(g, guard_n=None).value, 'proper', strong=True)


def chi_odd(g: Graph, guard_n: Optional[int] = DEFAULT_GUARD_N) -> OracleResult:
    check_guard(g.n, guard_n, 'oracle input')
    if g.n == 0:
        return OracleResult(0, Coloring((), 0))
    if g.has_isolated_vertex():
        return OracleResult(UNBOUNDED)
    return _deepen(g, chi(g, guard_n=None).value, 'odd', strong=False)


def chi_odd_strong(g: Graph, guard_n: Optional[int] = DEFAULT_GUARD_N) -> OracleResult:
    check_guard(g.n, guard_n, 'oracle input')
    if g.n == 0 or g.has_isolated_vertex():
        return OracleResult(UNBOUNDED)
    return _deepen(g, chi_odd(g, guard_n=None).value, 'odd', strong=True)


ORACLES = {
    'chi': chi,
    'chi_odd': chi_odd,
    'chi_strong': chi_strong,
    'chi_odd_strong': chi_odd_strong,
}
