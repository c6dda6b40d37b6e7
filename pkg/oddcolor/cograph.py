"""
Cographs: cotree construction and the four chromatic invariants.

Join nodes use the closed forms for chi, the strong chromatic number, chi_odd
and the strong odd chromatic number. Union nodes take the maximum for chi and
chi_odd; the strong values there come from class parity profiles, i.e. the
set of achievable numbers of odd-size color classes for every palette size.
Profiles also drive witness reconstruction.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .core import Coloring, Graph, has_odd_class, is_proper, require_odd_coloring
from .utils import UNBOUNDED, ContractError, Value, VerificationError

logger = logging.getLogger(__name__)

LEAF = 'leaf'
UNION = 'union'
JOIN = 'join'

PROPER = 'proper'
ODD = 'odd'

Vertices = Tuple[int, ...]
# profile[kind][k] = achievable odd-class counts over colorings with at most k colors
Profile = Dict[str, Tuple[FrozenSet[int], ...]]


@dataclass(frozen=True)
class Cotree:
    kind: str
    vertex: Optional[int] = None
    children: Tuple['Cotree', ...] = ()

    def vertices(self) -> Vertices:
        if self.kind == LEAF:
            return (self.vertex,)
        return tuple(sorted(v for child in self.children for v in child.vertices()))

    @property
    def size(self) -> int:
        return len(self.vertices())

    def __str__(self) -> str:
        if self.kind == LEAF:
            return str(self.vertex)
        return f"{self.kind}({', '.join(str(c) for c in self.children)})"


@dataclass(frozen=True)
class InvariantTuple:
    chi: Value
    chi_strong: Value
    chi_odd: Value
    chi_odd_strong: Value

    def as_dict(self) -> Dict[str, Value]:
        return {
            'chi': self.chi,
            'chi_strong': self.chi_strong,
            'chi_odd': self.chi_odd,
            'chi_odd_strong': self.chi_odd_strong,
        }


def _split(g: Graph, vertices: Vertices) -> Optional[Cotree]:
    if len(vertices) == 1:
        return Cotree(LEAF, vertices[0])
    sub, kept = g.induced(vertices)
    comps = sub.components()
    kind = UNION
    if len(comps) == 1:
        comps = sub.complement().components()
        kind = JOIN
        if len(comps) == 1:
            return None
    children = []
    for comp in comps:
        child = _split(g, tuple(kept[i] for i in comp))
        if child is None:
            return None
        children.append(child)
    return Cotree(kind, None, tuple(children))


def build_cotree(g: Graph) -> Optional[Cotree]:
    """Canonical cotree of ``g``, or None when ``g`` contains an induced P4."""
    if g.n == 0:
        return None
    return _split(g, tuple(g.vertices()))


def find_induced_p4(g: Graph) -> Optional[Vertices]:
    """Vertices ``a, b, c, d`` of an induced path a-b-c-d, or None for a cograph."""
    for quad in itertools.combinations(g.vertices(), 4):
        for a, b, c, d in itertools.permutations(quad):
            if a > d:
                continue
            if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d):
                if not (g.has_edge(a, c) or g.has_edge(b, d) or g.has_edge(a, d)):
                    return (a, b, c, d)
    return None


def cotree_to_graph(tree: Cotree, n: Optional[int] = None) -> Graph:
    if n is None:
        n = max(tree.vertices()) + 1
    edges = []

    def walk(node: Cotree) -> None:
        if node.kind == JOIN:
            groups = [child.vertices() for child in node.children]
            for i, left in enumerate(groups):
                for right in groups[i + 1 :]:
                    edges.extend((u, v) for u in left for v in right)
        for child in node.children:
            walk(child)

    walk(tree)
    return Graph(n, edges)


def random_cotree(n: int, rng: random.Random) -> Cotree:
    """Canonical cotree on leaves ``0..n-1`` with alternating internal node kinds."""

    def grow(vertices: List[int], kind: str) -> Cotree:
        if len(vertices) == 1:
            return Cotree(LEAF, vertices[0])
        parts = rng.randint(2, min(3, len(vertices)))
        rng.shuffle(vertices)
        cuts = sorted(rng.sample(range(1, len(vertices)), parts - 1))
        groups = [vertices[i:j] for i, j in zip([0, *cuts], [*cuts, len(vertices)])]
        other = JOIN if kind == UNION else UNION
        return Cotree(kind, None, tuple(grow(sorted(grp), other) for grp in groups))

    if n < 1:
        raise ContractError("a cotree needs at least one leaf")
    return grow(list(range(n)), rng.choice([UNION, JOIN]))


def _at(row: Tuple[FrozenSet[int], ...], k: int) -> FrozenSet[int]:
    return row[min(k, len(row) - 1)]


def _leaf_profile() -> Profile:
    return {PROPER: (frozenset(), frozenset({1})), ODD: (frozenset(), frozenset())}


def _overlaps(a1: int, a2: int, k: int) -> range:
    return range(abs(a1 - a2), min(a1 + a2, 2 * k - a1 - a2) + 1, 2)


def _union_profile(p1: Profile, p2: Profile, n: int) -> Profile:
    out: Profile = {}
    for kind in (PROPER, ODD):
        rows = [frozenset()]
        for k in range(1, n + 1):
            found = set()
            for a1 in _at(p1[kind], k):
                for a2 in _at(p2[kind], k):
                    found.update(_overlaps(a1, a2, k))
            rows.append(frozenset(found))
        out[kind] = tuple(rows)
    return out


def _join_options(p1: Profile, p2: Profile, n1: int, n2: int, k: int):
    """(kind1, a1, k1, kind2, a2, k2, kind) combinations realizable on a join with k colors."""
    for k1 in range(1, k):
        k2 = k - k1
        if k1 > n1 or k2 > n2:
            continue
        for x1, x2 in itertools.product((PROPER, ODD), repeat=2):
            for a1 in _at(p1[x1], k1):
                for a2 in _at(p2[x2], k2):
                    if (x1 == ODD or a2 >= 1) and (x2 == ODD or a1 >= 1):
                        yield x1, a1, k1, x2, a2, k2, ODD
                    if x1 == PROPER and x2 == PROPER:
                        yield x1, a1, k1, x2, a2, k2, PROPER


def _join_profile(p1: Profile, p2: Profile, n1: int, n2: int) -> Profile:
    n = n1 + n2
    rows: Dict[str, List[FrozenSet[int]]] = {PROPER: [frozenset()], ODD: [frozenset()]}
    for k in range(1, n + 1):
        found: Dict[str, set] = {PROPER: set(), ODD: set()}
        for _, a1, _, _, a2, _, kind in _join_options(p1, p2, n1, n2, k):
            found[kind].add(a1 + a2)
        for kind in (PROPER, ODD):
            # colorings with fewer colors stay valid
            rows[kind].append(frozenset(found[kind]) | rows[kind][-1])
    return {kind: tuple(rows[kind]) for kind in rows}


def _first(row: Tuple[FrozenSet[int], ...], strong: bool) -> Value:
    for k, counts in enumerate(row):
        if any(a >= 1 for a in counts) if strong else counts:
            return k
    return UNBOUNDED


def _join_values(a: InvariantTuple, b: InvariantTuple) -> InvariantTuple:
    return InvariantTuple(
        chi=a.chi + b.chi,
        chi_strong=min(a.chi_strong + b.chi, a.chi + b.chi_strong),
        chi_odd=min(
            a.chi_odd + b.chi_odd,
            a.chi_strong + b.chi_strong,
            a.chi_odd_strong + b.chi,
            a.chi + b.chi_odd_strong,
        ),
        chi_odd_strong=min(
            a.chi_strong + b.chi_strong,
            a.chi_odd_strong + b.chi,
            a.chi + b.chi_odd_strong,
        ),
    )


class _Evaluator:
    def __init__(self):
        self.profiles: Dict[int, Profile] = {}
        self.values: Dict[int, InvariantTuple] = {}
        # binary folds of n-ary nodes, keyed by the node id
        self.folds: Dict[int, List[Tuple[Profile, int]]] = {}

    def evaluate(self, node: Cotree) -> Tuple[InvariantTuple, Profile]:
        key = id(node)
        if key in self.values:
            return self.values[key], self.profiles[key]
        if node.kind == LEAF:
            value = InvariantTuple(1, 1, UNBOUNDED, UNBOUNDED)
            profile = _leaf_profile()
        else:
            value, profile = self.evaluate(node.children[0])
            size = node.children[0].size
            folds = [(profile, size)]
            for child in node.children[1:]:
                cval, cprof = self.evaluate(child)
                if node.kind == JOIN:
                    profile = _join_profile(profile, cprof, size, child.size)
                    value = _join_values(value, cval)
                else:
                    profile = _union_profile(profile, cprof, size + child.size)
                    value = InvariantTuple(
                        chi=max(value.chi, cval.chi),
                        chi_strong=_first(profile[PROPER], strong=True),
                        chi_odd=max(value.chi_odd, cval.chi_odd),
                        chi_odd_strong=_first(profile[ODD], strong=True),
                    )
                size += child.size
                folds.append((profile, size))
            self.folds[key] = folds
        self.values[key] = value
        self.profiles[key] = profile
        return value, profile


def cograph_invariants(tree: Cotree) -> InvariantTuple:
    value, _ = _Evaluator().evaluate(tree)
    logger.debug("cograph invariants for n=%d: %s", tree.size, value)
    return value


def class_parity_profile(tree: Cotree) -> Profile:
    _, profile = _Evaluator().evaluate(tree)
    return profile


def _permutation(odd1: FrozenSet[int], odd2: FrozenSet[int], k: int, overlap: int) -> Dict[int, int]:
    """Color map for the second child that lands exactly ``overlap`` of its odd classes on ``odd1``."""
    in1 = sorted(odd1)
    out1 = [c for c in range(1, k + 1) if c not in odd1]
    src_odd = sorted(odd2)
    src_even = [c for c in range(1, k + 1) if c not in odd2]
    mapping = {}
    for c, target in zip(src_odd[:overlap], in1):
        mapping[c] = target
    for c, target in zip(src_odd[overlap:], out1):
        mapping[c] = target
    free = in1[overlap:] + out1[len(src_odd) - overlap :]
    for c, target in zip(src_even, free):
        mapping[c] = target
    return mapping


def _odd_classes(colors: Dict[int, int]) -> FrozenSet[int]:
    sizes: Dict[int, int] = {}
    for c in colors.values():
        sizes[c] = sizes.get(c, 0) + 1
    return frozenset(c for c, s in sizes.items() if s % 2)


class _Realizer:
    def __init__(self, evaluator: _Evaluator):
        self.ev = evaluator

    def realize(self, node: Cotree, kind: str, k: int, a: int) -> Dict[int, int]:
        """Coloring of the subtree with colors ``1..k`` of the given kind and exactly ``a`` odd classes."""
        if node.kind == LEAF:
            return {node.vertex: 1}
        folds = self.ev.folds[id(node)]
        return self._fold(node, len(node.children) - 1, folds, kind, k, a)

    def _fold(self, node: Cotree, i: int, folds, kind: str, k: int, a: int) -> Dict[int, int]:
        """Realize the left fold of the first ``i + 1`` children."""
        if i == 0:
            return self.realize(node.children[0], kind, k, a)
        left_profile, left_size = folds[i - 1]
        child = node.children[i]
        _, right_profile = self.ev.evaluate(child)
        if node.kind == JOIN:
            for x1, a1, k1, x2, a2, k2, got in _join_options(left_profile, right_profile, left_size, child.size, k):
                if got == kind and a1 + a2 == a:
                    left = self._fold(node, i - 1, folds, x1, k1, a1)
                    right = self.realize(child, x2, k2, a2)
                    return {**left, **{v: c + k1 for v, c in right.items()}}
            # join profiles are cumulative in k, so the count may need fewer colors
            if k > 2:
                return self._fold(node, i, folds, kind, k - 1, a)
            raise ContractError(f"odd-class count {a} not realizable")  # no cov
        for a1 in sorted(_at(left_profile[kind], k)):
            for a2 in sorted(_at(right_profile[kind], k)):
                if a in _overlaps(a1, a2, k):
                    left = self._fold(node, i - 1, folds, kind, k, a1)
                    right = self.realize(child, kind, k, a2)
                    mapping = _permutation(_odd_classes(left), _odd_classes(right), k, (a1 + a2 - a) // 2)
                    return {**left, **{v: mapping[c] for v, c in right.items()}}
        raise ContractError(f"odd-class count {a} not realizable with {k} colors")  # no cov


def cograph_witness(tree: Cotree, which: str = 'chi_odd', n: Optional[int] = None) -> Optional[Coloring]:
    """Witness coloring for one of the four invariants; None when it is unbounded."""
    ev = _Evaluator()
    value, profile = ev.evaluate(tree)
    target = value.as_dict()[which]
    if target == UNBOUNDED:
        return None
    kind = ODD if which.startswith('chi_odd') else PROPER
    strong = which.endswith('strong')
    k = int(target)
    choices = sorted(a for a in _at(profile[kind], k) if a >= 1 or not strong)
    if not choices:
        raise ContractError(f"no {which} coloring with {k} colors")  # no cov
    colors = _Realizer(ev).realize(tree, kind, k, choices[-1] if strong else choices[0])
    if n is None:
        n = max(tree.vertices()) + 1
    witness = Coloring(tuple(colors.get(v) for v in range(n)), k)

    g = cotree_to_graph(tree, n)
    if kind == ODD:
        require_odd_coloring(g, witness, 'cograph witness')
    elif not is_proper(g, witness):
        raise VerificationError("cograph witness is not proper")
    if strong and not has_odd_class(g, witness):
        raise VerificationError("cograph witness has no odd color class")
    return witness
