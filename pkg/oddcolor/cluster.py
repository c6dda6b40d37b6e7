"""
Odd coloring parameterized by the distance to a cluster graph.

``X`` is a modulator whose removal leaves disjoint cliques. For every proper
coloring ``c`` of ``G[X]`` and every choice ``g_odd`` of the odd color each
modulator vertex should end up with, a dynamic program walks the cliques in
order. Clique vertices are grouped into cells by their neighborhood ``Y`` in
``X``; a clique decides which base colors (``1..t'``) each cell uses, every
other clique vertex gets a new color, and new colors are shared between
cliques because cliques are pairwise non-adjacent. The DP state is the
running zero/odd/even count of every base color in every cell neighborhood
that some modulator vertex reads its odd color from.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .core import Coloring, Graph, Parity, require_odd_coloring
from .oracle import OracleResult
from .utils import UNBOUNDED, ContractError, GuardExceededError

logger = logging.getLogger(__name__)

MAX_CLUSTER_BUDGET = 8
DEFAULT_T_LIMIT = 5

Vertices = Tuple[int, ...]
Cell = Tuple[FrozenSet[int], Vertices]
Option = Tuple[FrozenSet[int], ...]
Coord = Tuple[FrozenSet[int], int]


def accumulate_parity(prev: Parity, indicator: int) -> Parity:
    """Parity of a color count after adding ``indicator`` (0 or 1) occurrences."""
    if not indicator:
        return prev
    return Parity.EVEN if prev is Parity.ODD else Parity.ODD


def previous_parities(current: Parity, indicator: int) -> FrozenSet[Parity]:
    """Every parity that ``accumulate_parity(_, indicator)`` sends to ``current``."""
    if not indicator:
        return frozenset({current})
    if current is Parity.ODD:
        return frozenset({Parity.ZERO, Parity.EVEN})
    if current is Parity.EVEN:
        return frozenset({Parity.ODD})
    return frozenset()


@dataclass(frozen=True)
class ClusterInstance:
    g: Graph
    X: Vertices
    k: Optional[int]
    cliques: Tuple[Vertices, ...]

    @classmethod
    def from_graph(cls, g: Graph, X: Sequence[int], k: Optional[int] = None) -> 'ClusterInstance':
        rest, kept = g.remove_vertices(X)
        cliques = [tuple(kept[i] for i in comp) for comp in rest.components()]
        for clique in cliques:
            if not g.is_clique(clique):
                raise ContractError(f"component {clique} of g - X is not a clique")
        return cls(g, tuple(sorted(X)), k, tuple(cliques))

    @property
    def t(self) -> int:
        return len(self.X)

    def cells(self, clique: Sequence[int]) -> List[Cell]:
        """The clique split by exact modulator neighborhood, ordered by smallest vertex."""
        xs = set(self.X)
        groups: Dict[FrozenSet[int], List[int]] = {}
        for v in clique:
            groups.setdefault(frozenset(self.g.neighbor_set(v) & xs), []).append(v)
        return sorted(((y, tuple(vs)) for y, vs in groups.items()), key=lambda cell: cell[1][0])


@dataclass(frozen=True)
class ModulatorGuess:
    c: Vertices
    g_odd: Vertices
    t_prime: int

    @property
    def t1(self) -> int:
        return max(self.c, default=0)


def enumerate_modulator_colorings(g: Graph, X: Sequence[int]) -> Iterator[Vertices]:
    """Proper colorings of ``G[X]`` with colors numbered by first use."""
    X = list(X)
    colors = [0] * len(X)

    def rec(i: int, used: int) -> Iterator[Vertices]:
        if i == len(X):
            yield tuple(colors)
            return
        for col in range(1, used + 2):
            if any(colors[j] == col and g.has_edge(X[i], X[j]) for j in range(i)):
                continue
            colors[i] = col
            yield from rec(i + 1, max(used, col))

    yield from rec(0, 0)


def enumerate_odd_assignments(c: Sequence[int]) -> Iterator[Tuple[Vertices, int]]:
    """Designated odd colors for the modulator; colors past ``t1`` are new slots opened in order."""
    t1 = max(c, default=0)
    odd = [0] * len(c)

    def rec(i: int, slots: int) -> Iterator[Tuple[Vertices, int]]:
        if i == len(c):
            yield tuple(odd), t1 + slots
            return
        for col in range(1, t1 + slots + 2):
            if col == c[i]:
                continue
            odd[i] = col
            yield from rec(i + 1, max(slots, col - t1))

    yield from rec(0, 0)


def _blocked(cell: Cell, X: Sequence[int], c: Sequence[int]) -> FrozenSet[int]:
    pos = {x: i for i, x in enumerate(X)}
    return frozenset(c[pos[x]] for x in cell[0])


def _realize(cells: Sequence[Cell], option: Option, t_prime: int) -> Dict[int, int]:
    """Concrete clique coloring: base colors go to the lowest vertices of their cell, the rest get new colors."""
    colors: Dict[int, int] = {}
    for (_, verts), used in zip(cells, option):
        for v, col in zip(verts, sorted(used)):
            colors[v] = col
    fresh = t_prime
    for v in sorted(v for _, verts in cells for v in verts):
        if v not in colors:
            fresh += 1
            colors[v] = fresh
    return colors


def _clique_is_odd(cells: Sequence[Cell], colors: Dict[int, int], c_of: Dict[int, int]) -> bool:
    clique_colors = set(colors.values())
    for y, verts in cells:
        x_counts: Dict[int, int] = {}
        for x in y:
            x_counts[c_of[x]] = x_counts.get(c_of[x], 0) + 1
        for v in verts:
            seen = clique_colors - {colors[v]}
            if any((x_counts.get(col, 0) + 1) % 2 for col in seen):
                continue
            if any(cnt % 2 and col not in seen for col, cnt in x_counts.items()):
                continue
            return False
    return True


def clique_local_min_new(
    inst: ClusterInstance,
    clique: Sequence[int],
    guess: ModulatorGuess,
    h_q: Dict[FrozenSet[int], FrozenSet[int]],
    transition: Optional[Dict[Coord, int]] = None,
) -> Optional[int]:
    """
    Number of clique vertices that need colors outside ``1..t'`` when cell ``Y``
    uses exactly the base colors ``h_q[Y]``; None if that is not a valid odd
    assignment of the clique. ``transition`` optionally pins the per-(Y, i)
    parity increment, which must equal the used-color indicator.
    """
    cells = inst.cells(clique)
    c_of = dict(zip(inst.X, guess.c))
    option = tuple(frozenset(h_q.get(y, frozenset())) for y, _ in cells)
    if set(h_q) - {y for y, _ in cells} and any(h_q[y] for y in set(h_q) - {y for y, _ in cells}):
        return None
    seen: set = set()
    for cell, used in zip(cells, option):
        if used & seen or any(not 1 <= col <= guess.t_prime for col in used):
            return None
        if used & _blocked(cell, inst.X, guess.c) or len(used) > len(cell[1]):
            return None
        seen |= used
    if transition is not None:
        for (y, col), delta in transition.items():
            if delta != int(col in h_q.get(y, frozenset())):
                return None
    colors = _realize(cells, option, guess.t_prime)
    if not _clique_is_odd(cells, colors, c_of):
        return None
    return len(clique) - sum(len(used) for used in option)


def _clique_options(
    cells: Sequence[Cell], blocked: Sequence[FrozenSet[int]], t_prime: int
) -> Iterator[Option]:
    caps = [len(verts) for _, verts in cells]
    used: List[List[int]] = [[] for _ in cells]

    def rec(col: int) -> Iterator[Option]:
        if col > t_prime:
            yield tuple(frozenset(u) for u in used)
            return
        yield from rec(col + 1)
        for j in range(len(cells)):
            if col not in blocked[j] and len(used[j]) < caps[j]:
                used[j].append(col)
                yield from rec(col + 1)
                used[j].pop()

    yield from rec(1)


class _Solver:
    def __init__(self, inst: ClusterInstance):
        self.inst = inst
        self.cells = [inst.cells(q) for q in inst.cliques]
        self.realized = sorted({y for cells in self.cells for y, _ in cells}, key=lambda y: (len(y), sorted(y)))
        self._option_cache: Dict[Tuple[int, Vertices, int], List[Tuple[Option, int]]] = {}
        self.dp_states = 0

    def feasible_options(self, q: int, c: Vertices, t_prime: int) -> List[Tuple[Option, int]]:
        key = (q, c, t_prime)
        if key not in self._option_cache:
            cells = self.cells[q]
            c_of = dict(zip(self.inst.X, c))
            blocked = [_blocked(cell, self.inst.X, c) for cell in cells]
            found = []
            for option in _clique_options(cells, blocked, t_prime):
                colors = _realize(cells, option, t_prime)
                if _clique_is_odd(cells, colors, c_of):
                    found.append((option, len(self.inst.cliques[q]) - sum(len(u) for u in option)))
            self._option_cache[key] = found
        return self._option_cache[key]

    def coords(self, guess: ModulatorGuess) -> List[Coord]:
        pos = {x: i for i, x in enumerate(self.inst.X)}
        return sorted(
            {(y, guess.g_odd[pos[x]]) for y in self.realized for x in y},
            key=lambda cd: (sorted(cd[0]), cd[1]),
        )

    def target_met(self, guess: ModulatorGuess, coords: List[Coord], state: Tuple[Parity, ...]) -> bool:
        g, X = self.inst.g, self.inst.X
        pos = {x: i for i, x in enumerate(X)}
        index = {cd: j for j, cd in enumerate(coords)}
        for i, x in enumerate(X):
            want = guess.g_odd[i]
            count = sum(1 for y in X if g.has_edge(x, y) and guess.c[pos[y]] == want)
            count += sum(1 for y in self.realized if x in y and state[index[(y, want)]].is_odd())
            if count % 2 == 0:
                return False
        return True

    def run(self, guess: ModulatorGuess, bound: float) -> Optional[Tuple[int, Dict[int, int]]]:
        """Best ``(total, coloring)`` for this guess strictly below ``bound``."""
        coords = self.coords(guess)
        cell_of = []
        for cells in self.cells:
            where = {y: j for j, (y, _) in enumerate(cells)}
            cell_of.append([where.get(y) for y, _ in coords])
        start = tuple(Parity.ZERO for _ in coords)
        tables: List[Dict[Tuple[Parity, ...], Tuple[int, Optional[Option], Tuple[int, ...]]]] = [{start: (0, None, ())}]
        cap = bound - guess.t_prime
        for q in range(len(self.inst.cliques)):
            projected: Dict[Tuple[int, ...], Tuple[int, Option]] = {}
            for option, a in self.feasible_options(q, guess.c, guess.t_prime):
                if a >= cap:
                    continue
                delta = tuple(
                    0 if j is None else int(col in option[j]) for j, (_, col) in zip(cell_of[q], coords)
                )
                if delta not in projected or a < projected[delta][0]:
                    projected[delta] = (a, option)
            table: Dict[Tuple[Parity, ...], Tuple[int, Optional[Option], Tuple[int, ...]]] = {}
            for state, (value, _, _) in tables[-1].items():
                for delta, (a, option) in projected.items():
                    nxt = tuple(accumulate_parity(s, dl) for s, dl in zip(state, delta))
                    nv = max(a, value)
                    if nxt not in table or nv < table[nxt][0]:
                        table[nxt] = (nv, option, delta)
            self.dp_states += len(table)
            if not table:
                return None
            tables.append(table)

        best: Optional[Tuple[int, Tuple[Parity, ...]]] = None
        for state, (value, _, _) in tables[-1].items():
            if guess.t_prime + value < bound and self.target_met(guess, coords, state):
                if best is None or value < best[0]:
                    best = (value, state)
        if best is None:
            return None
        return guess.t_prime + best[0], self.backtrace(guess, tables, best[1])

    def backtrace(self, guess: ModulatorGuess, tables, state: Tuple[Parity, ...]) -> Dict[int, int]:
        colors = dict(zip(self.inst.X, guess.c))
        for q in range(len(self.inst.cliques), 0, -1):
            value, option, delta = tables[q][state]
            colors.update(_realize(self.cells[q - 1], option, guess.t_prime))
            choices = [previous_parities(s, dl) for s, dl in zip(state, delta)]
            for prev in itertools.product(*choices):
                if prev in tables[q - 1] and tables[q - 1][prev][0] <= value:
                    state = prev
                    break
            else:
                raise ContractError("DP backtrace lost its predecessor")  # no cov
        return colors


def find_cluster_modulator(g: Graph, budget: int) -> Optional[Vertices]:
    """Smallest X with ``g - X`` a disjoint union of cliques, by branching on induced P3s."""
    if budget > MAX_CLUSTER_BUDGET:
        raise GuardExceededError(f"cluster modulator budget {budget} exceeds {MAX_CLUSTER_BUDGET}")

    def induced_p3(alive: FrozenSet[int]) -> Optional[Vertices]:
        for v in sorted(alive):
            nbrs = sorted(g.neighbor_set(v) & alive)
            for i, u in enumerate(nbrs):
                for w in nbrs[i + 1 :]:
                    if not g.has_edge(u, w):
                        return (u, v, w)
        return None

    def branch(alive: FrozenSet[int], left: int) -> Optional[List[int]]:
        p3 = induced_p3(alive)
        if p3 is None:
            return []
        if left == 0:
            return None
        for x in p3:
            sub = branch(alive - {x}, left - 1)
            if sub is not None:
                return [x, *sub]
        return None

    everything = frozenset(g.vertices())
    for size in range(budget + 1):
        found = branch(everything, size)
        if found is not None:
            return tuple(sorted(found))
    return None


def solve_distance_to_cluster(inst: ClusterInstance, t_limit: int = DEFAULT_T_LIMIT) -> OracleResult:
    g = inst.g
    if inst.t > t_limit:
        raise GuardExceededError(f"cluster modulator has {inst.t} vertices, limit is {t_limit}")
    if g.n == 0:
        return OracleResult(0, Coloring((), 0))
    if g.has_isolated_vertex():
        return OracleResult(UNBOUNDED, None, {'t': inst.t})

    solver = _Solver(inst)
    guesses = [
        ModulatorGuess(c, odd, t_prime)
        for c in enumerate_modulator_colorings(g, inst.X)
        for odd, t_prime in enumerate_odd_assignments(c)
    ]
    guesses.sort(key=lambda gs: (gs.t_prime, gs.c, gs.g_odd))
    largest = max((len(q) for q in inst.cliques), default=0)

    best_value: float = UNBOUNDED
    best_colors: Optional[Dict[int, int]] = None
    best_guess: Optional[ModulatorGuess] = None
    tried = 0
    for guess in guesses:
        if max(guess.t_prime, largest) >= best_value:
            continue
        tried += 1
        found = solver.run(guess, best_value)
        if found is not None:
            best_value, best_colors = found
            best_guess = guess
    if best_colors is None:
        raise ContractError("no odd coloring found for a graph without isolated vertices")  # no cov

    witness = Coloring(tuple(best_colors[v] for v in g.vertices()), int(best_value))
    require_odd_coloring(g, witness, 'distance-to-cluster solver')
    logger.debug("cluster solver: t=%d value=%d guesses=%d", inst.t, best_value, tried)
    diagnostics = {
        't': inst.t,
        't_prime': best_guess.t_prime,
        'guesses_tried': tried,
        'dp_states': solver.dp_states,
    }
    return OracleResult(int(best_value), witness, diagnostics)
