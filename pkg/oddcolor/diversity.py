"""
Odd coloring parameterized by neighborhood diversity.

Vertices of one type are twins, so an independent type shares its odd colors
and a clique type of size two or more always has one (a clique mate's color
never appears elsewhere in the shared neighborhood). A guess groups the
independent types by a common odd color and says, for each such color, which
types hold it and with which parity. Phase I places one or two vertices per
(color, type), phase II floods the rest of every independent type while
keeping each parity, and the vertices left over are properly colored with
new colors by the exact oracle.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .core import Coloring, Graph, Parity, require_odd_coloring
from .oracle import OracleResult, chi
from .utils import DEFAULT_GUARD_N, UNBOUNDED, ContractError, GuardExceededError

logger = logging.getLogger(__name__)

DEFAULT_ND_LIMIT = 6

CLIQUE = 'clique'
INDEPENDENT = 'independent'

Vertices = Tuple[int, ...]
# type index -> parity of the number of its vertices holding the group color
Placement = Tuple[Tuple[int, Parity], ...]


@dataclass(frozen=True)
class NDPartition:
    n: int
    types: Tuple[Vertices, ...]
    kinds: Tuple[str, ...]
    adjacency: FrozenSet[Tuple[int, int]]

    @property
    def t(self) -> int:
        return len(self.types)

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.adjacency

    def independent_types(self) -> Vertices:
        return tuple(i for i, kind in enumerate(self.kinds) if kind == INDEPENDENT)


@dataclass(frozen=True)
class NDGuess:
    """Group ``i`` owns color ``i + 1``; ``placements[i]`` lists the types holding it."""

    groups: Tuple[Vertices, ...]
    placements: Tuple[Placement, ...]

    @property
    def t1(self) -> int:
        return len(self.groups)


@dataclass(frozen=True)
class PhaseTwoResult:
    coloring: Coloring
    deferred: Vertices


def compute_nd_partition(g: Graph) -> NDPartition:
    closed: Dict[FrozenSet[int], List[int]] = {}
    for v in g.vertices():
        closed.setdefault(g.closed_neighbor_set(v), []).append(v)
    types: List[Vertices] = []
    kinds: List[str] = []
    placed = set()
    for members in closed.values():
        if len(members) >= 2:
            types.append(tuple(members))
            kinds.append(CLIQUE)
            placed.update(members)
    opened: Dict[FrozenSet[int], List[int]] = {}
    for v in g.vertices():
        if v not in placed:
            opened.setdefault(g.neighbor_set(v), []).append(v)
    for members in opened.values():
        types.append(tuple(members))
        kinds.append(INDEPENDENT)

    order = sorted(range(len(types)), key=lambda i: types[i][0])
    types = [types[i] for i in order]
    kinds = [kinds[i] for i in order]
    adjacency = frozenset(
        (i, j)
        for i in range(len(types))
        for j in range(i + 1, len(types))
        if g.has_edge(types[i][0], types[j][0])
    )
    return NDPartition(g.n, tuple(types), tuple(kinds), adjacency)


def _set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        yield [[first], *sub]
        for i in range(len(sub)):
            yield sub[:i] + [[first, *sub[i]]] + sub[i + 1 :]


def _group_placements(part: NDPartition, group: Sequence[int]) -> List[Placement]:
    """Placements of one odd color that are proper and odd for every type in ``group``."""
    found: List[Placement] = []

    def rec(i: int, chosen: List[Tuple[int, Parity]]) -> None:
        if i == part.t:
            for j in group:
                odd = sum(1 for other, p in chosen if p is Parity.ODD and part.adjacent(j, other))
                if odd % 2 == 0:
                    return
            found.append(tuple(chosen))
            return
        rec(i + 1, chosen)
        if any(part.adjacent(i, other) for other, _ in chosen):
            return
        for parity in (Parity.ODD, Parity.EVEN):
            if parity is Parity.EVEN and (part.kinds[i] == CLIQUE or len(part.types[i]) < 2):
                continue
            chosen.append((i, parity))
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return found


def _demand(parity: Parity) -> int:
    return 2 if parity is Parity.EVEN else 1


def enumerate_nd_guesses(part: NDPartition, max_t1: Optional[int] = None) -> Iterator[NDGuess]:
    """Every guess whose phase I placement fits, in ascending number of odd colors."""
    partitions = sorted(_set_partitions(list(part.independent_types())), key=len)
    for groups in partitions:
        if max_t1 is not None and len(groups) > max_t1:
            return
        options = [_group_placements(part, grp) for grp in groups]

        def rec(i: int, used: List[int], chosen: List[Placement]) -> Iterator[NDGuess]:
            if i == len(groups):
                yield NDGuess(tuple(tuple(grp) for grp in groups), tuple(chosen))
                return
            for placement in options[i]:
                nxt = list(used)
                for j, parity in placement:
                    nxt[j] += _demand(parity)
                if all(u <= len(ty) for u, ty in zip(nxt, part.types)):
                    yield from rec(i + 1, nxt, chosen + [placement])

        yield from rec(0, [0] * part.t, [])


def phase1_color(part: NDPartition, guess: NDGuess) -> Optional[Coloring]:
    colors: List[Optional[int]] = [None] * part.n
    taken = [0] * part.t
    for i, placement in enumerate(guess.placements):
        for j, parity in placement:
            if parity is Parity.EVEN and part.kinds[j] == CLIQUE:
                return None
            need = _demand(parity)
            if taken[j] + need > len(part.types[j]):
                return None
            for v in part.types[j][taken[j] : taken[j] + need]:
                colors[v] = i + 1
            taken[j] += need
    return Coloring(tuple(colors), max(guess.t1, 1))


def _flood_color(counts: Dict[int, int], remaining: int) -> int:
    want = remaining % 2
    matching = sorted(c for c, cnt in counts.items() if cnt % 2 == want)
    return matching[0] if matching else min(counts)


def phase2_fill(part: NDPartition, partial: Coloring, guess: NDGuess) -> PhaseTwoResult:
    """
    Flood each independent type with one of its phase I colors, an even number
    of vertices at a time; a type with an odd number of uncolored vertices
    keeps one back for phase III, a type phase I never touched keeps all.
    """
    colors = list(partial.colors)
    deferred = []
    for j, members in enumerate(part.types):
        uncolored = [v for v in members if colors[v] is None]
        if part.kinds[j] == CLIQUE:
            deferred.append(len(uncolored))
            continue
        counts: Dict[int, int] = {}
        for v in members:
            if colors[v] is not None:
                counts[colors[v]] = counts.get(colors[v], 0) + 1
        if not counts:
            deferred.append(len(uncolored))
            continue
        flood = _flood_color(counts, len(uncolored))
        keep = len(uncolored) % 2
        for v in uncolored[: len(uncolored) - keep]:
            colors[v] = flood
        deferred.append(keep)
    return PhaseTwoResult(Coloring(tuple(colors), partial.k), tuple(deferred))


def residual_graph(g: Graph, partial: Coloring) -> Tuple[Graph, List[int]]:
    return g.induced(v for v in g.vertices() if partial[v] is None)


def assemble_coloring(partial: Coloring, kept: Sequence[int], residual: Coloring, t1: int) -> Coloring:
    """Phase I/II colors plus the residual coloring shifted past the ``t1`` odd colors."""
    colors = list(partial.colors)
    for new, old in enumerate(kept):
        colors[old] = t1 + residual[new]
    return Coloring(tuple(colors), t1 + residual.k)


def _residual_vertices(part: NDPartition, used: Sequence[int]) -> FrozenSet[int]:
    """Vertices left uncolored after phase II when type ``j`` had ``used[j]`` phase I vertices."""
    out = set()
    for j, members in enumerate(part.types):
        rest = members[used[j] :]
        if part.kinds[j] == CLIQUE or used[j] == 0:
            out.update(rest)
        elif len(rest) % 2:
            out.add(rest[-1])
    return frozenset(out)


class _Search:
    def __init__(self, g: Graph, part: NDPartition, guard_n: Optional[int]):
        self.g = g
        self.part = part
        self.guard_n = guard_n
        self._residual: Dict[FrozenSet[int], OracleResult] = {}
        self._placements: Dict[Vertices, List[Placement]] = {}
        self.guesses_tried = 0

    def residual_chi(self, residual: FrozenSet[int]) -> OracleResult:
        if residual not in self._residual:
            sub, _ = self.g.induced(residual)
            self._residual[residual] = chi(sub, guard_n=self.guard_n)
        return self._residual[residual]

    def placements(self, group: Vertices) -> List[Placement]:
        if group not in self._placements:
            self._placements[group] = _group_placements(self.part, group)
        return self._placements[group]

    def reachable(self, groups: Sequence[Vertices]) -> Dict[Vertices, Tuple[Placement, ...]]:
        """Phase I vertex counts per type reachable by some choice of placements, with one witness each."""
        part = self.part
        states: Dict[Vertices, Tuple[Placement, ...]] = {tuple([0] * part.t): ()}
        for grp in groups:
            nxt: Dict[Vertices, Tuple[Placement, ...]] = {}
            for used, wit in states.items():
                for placement in self.placements(grp):
                    after = list(used)
                    for j, parity in placement:
                        after[j] += _demand(parity)
                    key = tuple(after)
                    if key not in nxt and all(u <= len(ty) for u, ty in zip(after, part.types)):
                        nxt[key] = wit + (placement,)
            states = nxt
        return states

    def best(self) -> Optional[Tuple[int, NDGuess]]:
        best: Optional[Tuple[int, NDGuess]] = None
        partitions = sorted(_set_partitions(list(self.part.independent_types())), key=len)
        for groups in partitions:
            t1 = len(groups)
            if best is not None and t1 >= best[0]:
                break
            groups = [tuple(grp) for grp in groups]
            for used, wit in sorted(self.reachable(groups).items()):
                self.guesses_tried += 1
                value = t1 + self.residual_chi(_residual_vertices(self.part, used)).value
                if best is None or value < best[0]:
                    best = (value, NDGuess(tuple(groups), wit))
        return best


def solve_neighborhood_diversity(
    g: Graph,
    k: Optional[int] = None,
    limit: int = DEFAULT_ND_LIMIT,
    guard_n: Optional[int] = DEFAULT_GUARD_N,
) -> OracleResult:
    part = compute_nd_partition(g)
    if part.t > limit:
        raise GuardExceededError(f"neighborhood diversity {part.t} exceeds {limit}")
    if g.n == 0:
        return OracleResult(0, Coloring((), 0), {'t': 0, 't1': 0, 'guesses_tried': 0, 'residual_size': 0})
    if g.has_isolated_vertex():
        return OracleResult(UNBOUNDED, None, {'t': part.t, 't1': 0, 'guesses_tried': 0, 'residual_size': 0})

    search = _Search(g, part, guard_n)
    found = search.best()
    if found is None:
        raise ContractError("no valid guess for a graph without isolated vertices")  # no cov
    value, guess = found

    partial = phase1_color(part, guess)
    filled = phase2_fill(part, partial, guess)
    sub, kept = residual_graph(g, filled.coloring)
    residual = search.residual_chi(frozenset(kept)).witness
    witness = assemble_coloring(filled.coloring, kept, residual, guess.t1)
    require_odd_coloring(g, witness, 'neighborhood-diversity solver')
    logger.debug("nd solver: t=%d t1=%d value=%d guesses=%d", part.t, guess.t1, value, search.guesses_tried)
    diagnostics = {
        't': part.t,
        't1': guess.t1,
        'guesses_tried': search.guesses_tried,
        'residual_size': sub.n,
    }
    if k is not None:
        diagnostics['decision'] = value <= k
    return OracleResult(value, witness, diagnostics)
