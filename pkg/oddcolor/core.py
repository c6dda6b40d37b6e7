"""
Graph model, colorings and the odd-coloring verifier.

Every solver in the package hands its witness to :func:`verify_odd_coloring`
before returning it, so this module is deliberately free of search logic.
"""

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .utils import ContractError, GraphParseError, VerificationError

Edge = Tuple[int, int]


class Parity(IntEnum):
    ZERO = 0
    ODD = 1
    EVEN = 2

    @classmethod
    def of_count(cls, count: int) -> 'Parity':
        if count == 0:
            return cls.ZERO
        return cls.ODD if count % 2 else cls.EVEN

    def is_odd(self) -> bool:
        return self is Parity.ODD


class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ContractError(f"negative vertex count {n}")
        normalized = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ContractError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ContractError(f"edge ({u}, {v}) outside 0..{n - 1}")
            normalized.add((u, v) if u < v else (v, u))
        neighbor_sets: List[set] = [set() for _ in range(n)]
        for u, v in normalized:
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        self.n = n
        self.edges: FrozenSet[Edge] = frozenset(normalized)
        self.adjacency: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in neighbor_sets)
        self._neighbor_sets: Tuple[FrozenSet[int], ...] = tuple(frozenset(s) for s in neighbor_sets)
        self._matrix: Optional[np.ndarray] = None

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def neighbor_set(self, v: int) -> FrozenSet[int]:
        return self._neighbor_sets[v]

    def closed_neighbor_set(self, v: int) -> FrozenSet[int]:
        return self._neighbor_sets[v] | {v}

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbor_sets[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def isolated_vertices(self) -> List[int]:
        return [v for v in self.vertices() if not self.adjacency[v]]

    def has_isolated_vertex(self) -> bool:
        return any(not nbrs for nbrs in self.adjacency)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :])

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return not any(self.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :])

    def induced(self, vertices: Iterable[int]) -> Tuple['Graph', List[int]]:
        """Induced subgraph plus the map from new indices to old ones."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(keep), edges), keep

    def remove_vertices(self, vertices: Iterable[int]) -> Tuple['Graph', List[int]]:
        drop = set(vertices)
        return self.induced(v for v in self.vertices() if v not in drop)

    def extend(self, extra: int, edges: Iterable[Sequence[int]] = ()) -> 'Graph':
        """Append ``extra`` fresh vertices and the given edges."""
        return Graph(self.n + extra, list(self.edges) + [tuple(e) for e in edges])

    def complement(self) -> 'Graph':
        return Graph(
            self.n,
            [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if not self.has_edge(u, v)],
        )

    def relabel(self, perm: Sequence[int]) -> 'Graph':
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise ContractError("relabeling must be a permutation")
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def components(self) -> List[List[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        comps = [sorted(c) for c in nx.connected_components(self.to_networkx())]
        return sorted(comps, key=lambda c: c[0])

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            a = np.zeros((self.n, self.n), dtype=np.int64)
            for u, v in self.edges:
                a[u, v] = a[v, u] = 1
            self._matrix = a
        return self._matrix

    def to_networkx(self) -> nx.Graph:
        nxg = nx.Graph()
        nxg.add_nodes_from(range(self.n))
        nxg.add_edges_from(self.edges)
        return nxg

    @classmethod
    def from_networkx(cls, nxg: nx.Graph) -> 'Graph':
        nodes = sorted(nxg.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), [(index[u], index[v]) for u, v in nxg.edges() if u != v])


@dataclass(frozen=True)
class Coloring:
    """Total or partial map vertex -> color in ``1..k``; ``None`` marks an uncolored vertex."""

    colors: Tuple[Optional[int], ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, 'colors', tuple(None if c is None else int(c) for c in self.colors))
        for v, c in enumerate(self.colors):
            if c is not None and not 1 <= c <= self.k:
                raise ContractError(f"vertex {v} has color {c} outside 1..{self.k}")

    @classmethod
    def of(cls, colors: Sequence[Optional[int]], k: Optional[int] = None) -> 'Coloring':
        if k is None:
            k = max((c for c in colors if c is not None), default=0)
        return cls(tuple(colors), k)

    @classmethod
    def empty(cls, n: int, k: int) -> 'Coloring':
        return cls((None,) * n, k)

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> Optional[int]:
        return self.colors[v]

    def is_total(self) -> bool:
        return all(c is not None for c in self.colors)

    def require_total(self) -> None:
        if not self.is_total():
            missing = [v for v, c in enumerate(self.colors) if c is None]
            raise ContractError(f"coloring is partial, uncolored vertices {missing[:10]}")

    def assigned(self) -> Dict[int, int]:
        return {v: c for v, c in enumerate(self.colors) if c is not None}

    def used_colors(self) -> FrozenSet[int]:
        return frozenset(c for c in self.colors if c is not None)

    def palette_size(self) -> int:
        return len(self.used_colors())

    def with_colors(self, mapping: Mapping[int, int], k: Optional[int] = None) -> 'Coloring':
        colors = list(self.colors)
        for v, c in mapping.items():
            colors[v] = c
        return Coloring(tuple(colors), self.k if k is None else k)

    def restricted(self, vertices: Sequence[int]) -> 'Coloring':
        """Coloring of an induced subgraph given its new->old vertex map."""
        return Coloring(tuple(self.colors[v] for v in vertices), self.k)

    def compacted(self) -> 'Coloring':
        """Renumber used colors to ``1..palette_size`` in order of first appearance."""
        renumber: Dict[int, int] = {}
        for c in self.colors:
            if c is not None and c not in renumber:
                renumber[c] = len(renumber) + 1
        return Coloring(tuple(None if c is None else renumber[c] for c in self.colors), len(renumber))


@dataclass(frozen=True)
class OddCertificate:
    witness: Dict[int, int] = field(default_factory=dict)
    no_odd: FrozenSet[int] = frozenset()
    conflicts: FrozenSet[int] = frozenset()

    @property
    def violations(self) -> FrozenSet[int]:
        return self.no_odd | self.conflicts

    @property
    def valid(self) -> bool:
        return not self.no_odd and not self.conflicts


def parse_graph(text: str, fmt: str = 'dimacs') -> Graph:
    if fmt == 'dimacs':
        return _parse_dimacs(text)
    if fmt == 'edgelist':
        return _parse_edgelist(text)
    raise GraphParseError(f"unknown graph format '{fmt}'")


def read_graph(path: str, fmt: str = 'dimacs') -> Graph:
    return parse_graph(Path(path).read_text(encoding='utf-8'), fmt)


def _int_token(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"expected an integer, got '{token}'", lineno) from None


def _parse_dimacs(text: str) -> Graph:
    n: Optional[int] = None
    edges: List[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == 'c':
            continue
        tag = tokens[0]
        if tag == 'p':
            if n is not None:
                raise GraphParseError("duplicate 'p' header", lineno)
            if len(tokens) != 4 or tokens[1] not in ('edge', 'col'):
                raise GraphParseError("malformed header, expected 'p edge <n> <m>'", lineno)
            n = _int_token(tokens[2], lineno)
            _int_token(tokens[3], lineno)
            if n < 0:
                raise GraphParseError("negative vertex count", lineno)
        elif tag == 'e':
            if n is None:
                raise GraphParseError("edge line before 'p' header", lineno)
            if len(tokens) != 3:
                raise GraphParseError("malformed edge line, expected 'e <u> <v>'", lineno)
            u, v = _int_token(tokens[1], lineno), _int_token(tokens[2], lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise GraphParseError(f"vertex {x} out of range 1..{n}", lineno)
            if u == v:
                raise GraphParseError(f"self-loop at vertex {u}", lineno)
            edges.append((u - 1, v - 1))
        else:
            raise GraphParseError(f"unknown line type '{tag}'", lineno)
    if n is None:
        raise GraphParseError("missing 'p edge' header")
    return Graph(n, edges)


def _parse_edgelist(text: str) -> Graph:
    """
    One ``u v`` pair per line, vertices from 0; ``#`` starts a comment. A
    ``# n <count>`` comment declares the vertex count so trailing isolated
    vertices survive.
    """
    edges: List[Edge] = []
    n = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line, _, comment = raw.partition('#')
        header = comment.split()
        if len(header) == 2 and header[0] == 'n':
            n = max(n, _int_token(header[1], lineno))
        line = line.strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphParseError("expected 'u v'", lineno)
        u, v = _int_token(tokens[0], lineno), _int_token(tokens[1], lineno)
        if u < 0 or v < 0:
            raise GraphParseError("negative vertex index", lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        edges.append((u, v))
        n = max(n, u + 1, v + 1)
    return Graph(n, edges)


def serialize_graph(g: Graph, fmt: str = 'dimacs') -> str:
    if fmt == 'dimacs':
        lines = [f"p edge {g.n} {g.m}"] + [f"e {u + 1} {v + 1}" for u, v in g.sorted_edges()]
    elif fmt == 'edgelist':
        lines = [f"# n {g.n}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    else:
        raise GraphParseError(f"unknown graph format '{fmt}'")
    return '\n'.join(lines) + '\n'


def is_proper(g: Graph, f: Coloring) -> bool:
    f.require_total()
    return all(f[u] != f[v] for u, v in g.edges)


def odd_colors(g: Graph, f: Coloring, v: int) -> FrozenSet[int]:
    """All colors with odd multiplicity in the open neighborhood of ``v``."""
    counts = Counter()
    for u in g.neighbors(v):
        if f[u] is None:
            raise ContractError(f"neighbor {u} of vertex {v} is uncolored")
        counts[f[u]] += 1
    return frozenset(c for c, cnt in counts.items() if cnt % 2)


def odd_color_of(g: Graph, f: Coloring, v: int) -> Optional[int]:
    return min(odd_colors(g, f, v), default=None)


def _color_counts(g: Graph, f: Coloring) -> np.ndarray:
    """``counts[v, c]`` is the number of neighbors of ``v`` colored ``c``."""
    onehot = np.zeros((g.n, f.k + 1), dtype=np.int64)
    onehot[np.arange(g.n), np.asarray(f.colors, dtype=np.int64)] = 1
    return g.matrix() @ onehot


def verify_odd_coloring(g: Graph, f: Coloring) -> OddCertificate:
    f.require_total()
    if len(f) != g.n:
        raise ContractError(f"coloring covers {len(f)} vertices, graph has {g.n}")
    conflicts = set()
    for u, v in g.edges:
        if f[u] == f[v]:
            conflicts.update((u, v))
    witness: Dict[int, int] = {}
    no_odd = set()
    if g.n:
        odd = _color_counts(g, f) % 2 == 1
        for v in g.vertices():
            hits = np.flatnonzero(odd[v])
            if hits.size:
                witness[v] = int(hits[0])
            else:
                no_odd.add(v)
    return OddCertificate(witness=witness, no_odd=frozenset(no_odd), conflicts=frozenset(conflicts))


def require_odd_coloring(g: Graph, f: Coloring, source: str) -> OddCertificate:
    """Verify ``f`` and raise if it is not an odd coloring."""
    cert = verify_odd_coloring(g, f)
    if not cert.valid:
        raise VerificationError(f"{source} produced an invalid odd coloring, violations {sorted(cert.violations)}")
    return cert


def color_class_parities(g: Graph, f: Coloring) -> Dict[int, Parity]:
    f.require_total()
    if len(f) != g.n:
        raise ContractError(f"coloring covers {len(f)} vertices, graph has {g.n}")
    sizes = np.bincount(np.asarray(f.colors, dtype=np.int64), minlength=f.k + 1)
    return {int(c): Parity.of_count(int(sizes[c])) for c in np.flatnonzero(sizes)}


def has_odd_class(g: Graph, f: Coloring) -> bool:
    return any(p.is_odd() for p in color_class_parities(g, f).values())


def coloring_to_json(g: Graph, f: Coloring) -> Dict[str, object]:
    cert = verify_odd_coloring(g, f)
    return {
        'k': f.k,
        'colors': list(f.colors),
        'valid': cert.valid,
        'violations': sorted(cert.violations),
    }


def parse_coloring_json(text: str) -> Coloring:
    try:
        data = json.loads(text)
        colors = [int(c) for c in data['colors']]
        k = int(data.get('k', max(colors, default=0)))
    except (ValueError, KeyError, TypeError) as e:
        raise GraphParseError(f"malformed coloring JSON: {e}") from None
    return Coloring(tuple(colors), k)
