"""
Odd coloring parameterized by the distance to a co-cluster graph.

``g - X`` is complete multipartite, so a color used outside the modulator
lives inside one part. On top of the modulator guess (proper coloring ``c``,
designated odd colors, base palette ``1..t'``) the solver guesses which base
colors have an odd number of vertices outside ``X``. Each part then picks the
base colors it hosts and how many of its vertices take them per type (type =
neighborhood in ``X``); the rest of the part takes one or two fresh colors.
A vertex whose odd color cannot come from a base color relies on some other
part owning an odd fresh class, which the DP tracks with a capped counter.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .cluster import enumerate_modulator_colorings, enumerate_odd_assignments, find_cluster_modulator
from .core import Coloring, Graph, require_odd_coloring
from .oracle import OracleResult
from .utils import UNBOUNDED, ContractError, GuardExceededError

logger = logging.getLogger(__name__)

DEFAULT_T_LIMIT = 5

Vertices = Tuple[int, ...]
TypeCell = Tuple[FrozenSet[int], Vertices]
# (parity mask, hosted mask, modulator parity bits, remaining vertices capped at 2)
SummaryKey = Tuple[int, int, int, int]
Counts = Dict[int, int]


def find_cocluster_modulator(g: Graph, budget: int) -> Optional[Vertices]:
    """Smallest X with ``g - X`` complete multipartite; a cluster modulator of the complement."""
    return find_cluster_modulator(g.complement(), budget)


@dataclass(frozen=True)
class CoClusterInstance:
    g: Graph
    X: Vertices
    k: Optional[int]
    parts: Tuple[Vertices, ...]

    @classmethod
    def from_graph(cls, g: Graph, X: Sequence[int], k: Optional[int] = None) -> 'CoClusterInstance':
        rest, kept = g.remove_vertices(X)
        parts = [tuple(kept[i] for i in comp) for comp in rest.complement().components()]
        for i, part in enumerate(parts):
            if not g.is_independent(part):
                raise ContractError(f"part {part} of g - X is not independent")
            for other in parts[i + 1 :]:
                if any(not g.has_edge(u, v) for u in part for v in other):
                    raise ContractError(f"parts {part} and {other} do not form a biclique")
        return cls(g, tuple(sorted(X)), k, tuple(parts))

    @property
    def t(self) -> int:
        return len(self.X)

    def types(self, part: Sequence[int]) -> List[TypeCell]:
        xs = set(self.X)
        groups: Dict[FrozenSet[int], List[int]] = {}
        for v in part:
            groups.setdefault(frozenset(self.g.neighbor_set(v) & xs), []).append(v)
        return sorted(((s, tuple(vs)) for s, vs in groups.items()), key=lambda cell: cell[1][0])


@dataclass(frozen=True)
class CoClusterGuess:
    c: Vertices
    g_odd: Vertices
    t_prime: int
    odd_mask: int

    def is_odd(self, color: int) -> bool:
        return bool(self.odd_mask >> (color - 1) & 1)


def _bit(color: int) -> int:
    return 1 << (color - 1)


def _type_options(size: int, allowed: Tuple[int, ...]) -> Dict[Tuple[int, int, int], Counts]:
    """
    Per-type base color counts keyed by (parity mask, hosted mask, leftover capped at 2).
    Counts 0, 1 and 2 cover every parity pattern; extra pairs go to the smallest hosted color.
    """
    found: Dict[Tuple[int, int, int], Counts] = {}
    for pattern in itertools.product((0, 1, 2), repeat=len(allowed)):
        used = sum(pattern)
        if used > size:
            continue
        counts = {a: n for a, n in zip(allowed, pattern) if n}
        pmask = sum(_bit(a) for a, n in counts.items() if n == 1)
        nmask = sum(_bit(a) for a in counts)
        pairs = (size - used) // 2 if counts else 0
        for extra in range(pairs + 1):
            key = (pmask, nmask, min(2, size - used - 2 * extra))
            if key in found:
                continue
            padded = dict(counts)
            if extra:
                padded[min(counts)] += 2 * extra
            found[key] = padded
    return found


def _fresh_options(rcap: int, parity: int) -> List[Tuple[int, int]]:
    """(fresh colors, has an odd fresh class) choices for a part with ``rcap`` leftover vertices."""
    if rcap == 0:
        return [(0, 0)]
    options = [(1, parity)]
    if rcap == 2:
        options.append((2, 1))
    return options


class _Solver:
    def __init__(self, inst: CoClusterInstance):
        self.inst = inst
        self.types = [inst.types(part) for part in inst.parts]
        self._type_cache: Dict[Tuple[int, Tuple[int, ...]], Dict[Tuple[int, int, int], Counts]] = {}
        self._summary_cache: Dict[Tuple[int, Vertices, Vertices, int], Dict[SummaryKey, Tuple[Counts, ...]]] = {}
        self.dp_states = 0

    def type_options(self, size: int, allowed: Tuple[int, ...]):
        key = (size, allowed)
        if key not in self._type_cache:
            self._type_cache[key] = _type_options(size, allowed)
        return self._type_cache[key]

    def summaries(self, j: int, guess: CoClusterGuess) -> Dict[SummaryKey, Tuple[Counts, ...]]:
        key = (j, guess.c, guess.g_odd, guess.t_prime)
        if key in self._summary_cache:
            return self._summary_cache[key]
        X = self.inst.X
        c_of = dict(zip(X, guess.c))
        states: Dict[SummaryKey, Tuple[Counts, ...]] = {(0, 0, 0, 0): ()}
        for s, verts in self.types[j]:
            blocked = {c_of[x] for x in s}
            allowed = tuple(a for a in range(1, guess.t_prime + 1) if a not in blocked)
            watchers = [(i, guess.g_odd[i]) for i, x in enumerate(X) if x in s]
            nxt: Dict[SummaryKey, Tuple[Counts, ...]] = {}
            for (pm, nm, xb, rc), wit in states.items():
                for (tpm, tnm, trc), counts in self.type_options(len(verts), allowed).items():
                    flip = sum(1 << i for i, a in watchers if tpm & _bit(a))
                    state = (pm ^ tpm, nm | tnm, xb ^ flip, min(2, rc + trc))
                    if state not in nxt:
                        nxt[state] = wit + (counts,)
            states = nxt
        self._summary_cache[key] = states
        return states

    def needs_fresh_odd(self, j: int, guess: CoClusterGuess, hosted: int) -> bool:
        """True when some type of part ``j`` has no base color with odd multiplicity in its neighborhood."""
        c_of = dict(zip(self.inst.X, guess.c))
        for s, _ in self.types[j]:
            seen = [c_of[x] for x in s]
            ok = False
            for a in range(1, guess.t_prime + 1):
                from_x = seen.count(a) % 2 == 1
                from_parts = guess.is_odd(a) and not hosted & _bit(a)
                if from_x != from_parts:
                    ok = True
                    break
            if not ok:
                return True
        return False

    def modulator_target(self, guess: CoClusterGuess) -> int:
        g, X = self.inst.g, self.inst.X
        target = 0
        for i, x in enumerate(X):
            inside = sum(1 for y, cy in zip(X, guess.c) if cy == guess.g_odd[i] and g.has_edge(x, y))
            if inside % 2 == 0:
                target |= 1 << i
        return target

    def run(self, guess: CoClusterGuess, bound: float):
        """Cheapest completion of ``guess`` costing less than ``bound``, with its per-part choices."""
        start = (0, 0, 0, False, False)
        tables: List[Dict[tuple, tuple]] = [{start: (0, None, None)}]
        for j, part in enumerate(self.inst.parts):
            choices = []
            for skey, _ in self.summaries(j, guess).items():
                pm, nm, xb, rc = skey
                if pm != nm & guess.odd_mask:
                    continue
                relies = self.needs_fresh_odd(j, guess, nm)
                parity = (len(part) - bin(pm).count('1')) % 2
                for f, odd_fresh in _fresh_options(rc, parity):
                    choices.append((nm, xb, f, odd_fresh, relies, skey))
            table: Dict[tuple, tuple] = {}
            for state, (cost, _, _) in tables[-1].items():
                placed, xbits, fc, need0, need1 = state
                for nm, xb, f, odd_fresh, relies, skey in choices:
                    if nm & placed or guess.t_prime + cost + f >= bound:
                        continue
                    nxt = (
                        placed | nm,
                        xbits ^ xb,
                        min(2, fc + odd_fresh),
                        need0 or (relies and not odd_fresh),
                        need1 or (relies and bool(odd_fresh)),
                    )
                    if nxt not in table or cost + f < table[nxt][0]:
                        table[nxt] = (cost + f, state, (skey, f))
            self.dp_states += len(table)
            if not table:
                return None
            tables.append(table)

        target = self.modulator_target(guess)
        best = None
        for state, (cost, _, _) in tables[-1].items():
            placed, xbits, fc, need0, need1 = state
            if placed & guess.odd_mask != guess.odd_mask or xbits != target:
                continue
            if (need0 and fc < 1) or (need1 and fc < 2):
                continue
            if best is None or cost < best[0]:
                best = (cost, state)
        if best is None:
            return None
        plan = []
        state = best[1]
        for q in range(len(self.inst.parts), 0, -1):
            _, prev, choice = tables[q][state]
            plan.append(choice)
            state = prev
        plan.reverse()
        return guess.t_prime + best[0], plan

    def realize(self, guess: CoClusterGuess, plan) -> Dict[int, int]:
        colors = dict(zip(self.inst.X, guess.c))
        fresh = guess.t_prime
        for j, (skey, f) in enumerate(plan):
            witness = self.summaries(j, guess)[skey]
            leftover = []
            for (_, verts), counts in zip(self.types[j], witness):
                queue = list(verts)
                for a in sorted(counts):
                    for _ in range(counts[a]):
                        colors[queue.pop(0)] = a
                leftover += queue
            leftover.sort()
            if f:
                colors[leftover[0]] = fresh + 1
                for v in leftover[1:]:
                    colors[v] = fresh + f
            fresh += f
        return colors


def solve_distance_to_cocluster(inst: CoClusterInstance, t_limit: int = DEFAULT_T_LIMIT) -> OracleResult:
    g = inst.g
    if inst.t > t_limit:
        raise GuardExceededError(f"co-cluster modulator has {inst.t} vertices, limit is {t_limit}")
    if g.n == 0:
        return OracleResult(0, Coloring((), 0))
    if g.has_isolated_vertex():
        return OracleResult(UNBOUNDED, None, {'t': inst.t, 'parts': len(inst.parts)})

    solver = _Solver(inst)
    guesses = [
        CoClusterGuess(c, odd, t_prime, mask)
        for c in enumerate_modulator_colorings(g, inst.X)
        for odd, t_prime in enumerate_odd_assignments(c)
        for mask in range(1 << t_prime)
    ]
    guesses.sort(key=lambda gs: (gs.t_prime, gs.c, gs.g_odd, gs.odd_mask))

    best_value: float = UNBOUNDED
    best = None
    tried = 0
    for guess in guesses:
        if guess.t_prime >= best_value:
            continue
        tried += 1
        found = solver.run(guess, best_value)
        if found is not None:
            best_value = found[0]
            best = (guess, found[1])
    if best is None:
        raise ContractError("no odd coloring found for a graph without isolated vertices")  # no cov

    guess, plan = best
    colors = solver.realize(guess, plan)
    witness = Coloring(tuple(colors[v] for v in g.vertices()), int(best_value))
    require_odd_coloring(g, witness, 'distance-to-co-cluster solver')
    logger.debug("co-cluster solver: t=%d value=%d guesses=%d", inst.t, best_value, tried)
    diagnostics = {
        't': inst.t,
        'guesses_tried': tried,
        'parts': len(inst.parts),
        'extra_colors_used': int(best_value) - guess.t_prime,
        'dp_states': solver.dp_states,
    }
    return OracleResult(int(best_value), witness, diagnostics)
