"""
Kernelization for odd coloring parameterized by the distance to a clique.

An instance is ``(g, X, k)`` with ``g - X`` a clique ``C``. The modulator is
split by how many clique neighbors each vertex has; vertices of middling
degree are replaced by pendants on their low-degree neighbors (rule 1) and,
once a high-degree vertex exists, the clique vertices that nothing in the
modulator can tell apart are deleted together with their colors (rule 2).
The loop runs to a fixpoint, so kernelizing a kernel is a no-op.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .core import Coloring, Graph, verify_odd_coloring
from .oracle import odd_colorable_with
from .utils import DEFAULT_GUARD_N, ContractError, GuardExceededError

logger = logging.getLogger(__name__)

MAX_CLIQUE_BUDGET = 10

Vertices = Tuple[int, ...]


@dataclass(frozen=True)
class DcliqueInstance:
    g: Graph
    X: Vertices
    k: int

    def __post_init__(self):
        object.__setattr__(self, 'X', tuple(sorted(set(self.X))))
        if not self.g.is_clique(self.C):
            raise ContractError("g - X is not a clique")

    @property
    def d(self) -> int:
        return len(self.X)

    @property
    def C(self) -> Vertices:
        xs = set(self.X)
        return tuple(v for v in self.g.vertices() if v not in xs)

    @property
    def n(self) -> int:
        return self.g.n


@dataclass(frozen=True)
class ModulatorPartition:
    X_low: Vertices = ()
    X_mid: Vertices = ()
    X_high: Vertices = ()
    X_low_m: Vertices = ()
    C_N: Vertices = ()
    D_h: Vertices = ()
    D_low: Vertices = ()
    C1: Vertices = ()
    C2: Vertices = ()
    Cprime: Vertices = ()
    rule2_applicable: bool = False
    dh_bound_ok: bool = True


@dataclass(frozen=True)
class ReductionStep:
    rule: str
    before: DcliqueInstance
    part: ModulatorPartition
    kept: Vertices
    removed: Vertices


@dataclass(frozen=True)
class KernelResult:
    original: DcliqueInstance
    reduced: DcliqueInstance
    verdict: Optional[bool]
    trace: Tuple[ReductionStep, ...] = ()
    stop_reason: str = ''
    size_bound_ok: bool = True


def size_bound(d: int) -> int:
    """Vertex bound for an emitted kernel with modulator size ``d``."""
    return max(d**3 + 2 * d * d, d**3 + d * d + d + 1)


def dh_lower_bound(n: int, d: int, x_high: int) -> int:
    return n - (x_high * d + 1) * d


def find_clique_modulator(g: Graph, budget: int) -> Optional[Vertices]:
    """Smallest X with ``g - X`` a clique and ``|X| <= budget``, by branching on non-edges."""
    if budget > MAX_CLIQUE_BUDGET:
        raise GuardExceededError(f"clique modulator budget {budget} exceeds {MAX_CLIQUE_BUDGET}")
    non_edges = [(u, v) for u, v in g.complement().sorted_edges()]

    def cover(edges: List[Tuple[int, int]], left: int) -> Optional[List[int]]:
        if not edges:
            return []
        if left == 0:
            return None
        u, v = edges[0]
        for w in (u, v):
            sub = cover([e for e in edges if w not in e], left - 1)
            if sub is not None:
                return [w, *sub]
        return None

    for size in range(budget + 1):
        found = cover(non_edges, size)
        if found is not None:
            return tuple(sorted(found))
    return None


def partition_modulator(inst: DcliqueInstance) -> ModulatorPartition:
    g, d, n = inst.g, inst.d, inst.n
    C = inst.C
    cset = set(C)
    low, mid, high = [], [], []
    for x in inst.X:
        cnt = len(g.neighbor_set(x) & cset)
        if cnt <= d - 1:
            low.append(x)
        elif cnt >= n - d * d - d:
            high.append(x)
        else:
            mid.append(x)
    mid_set = set(mid)
    low_m = [x for x in low if g.neighbor_set(x) & mid_set]
    xset = set(inst.X)
    c_n = [v for v in C if not (g.neighbor_set(v) & xset)]

    d_h = set(C)
    for x in high:
        d_h &= g.neighbor_set(x)
    d_low = set()
    for x in low:
        d_low |= g.neighbor_set(x) & cset
    c1 = sorted(d_h - d_low)
    applicable = bool(high) and len(c1) >= d + 1
    c2 = c1[: d + 1] if applicable else []
    cprime = c1[d + 1 :] if applicable else []
    dh_ok = not high or len(d_h) >= dh_lower_bound(n, d, len(high))
    return ModulatorPartition(
        X_low=tuple(low),
        X_mid=tuple(mid),
        X_high=tuple(high),
        X_low_m=tuple(low_m),
        C_N=tuple(c_n),
        D_h=tuple(sorted(d_h)),
        D_low=tuple(sorted(d_low)),
        C1=tuple(c1),
        C2=tuple(c2),
        Cprime=tuple(cprime),
        rule2_applicable=applicable,
        dh_bound_ok=dh_ok,
    )


def _rule1(inst: DcliqueInstance, part: ModulatorPartition) -> Tuple[DcliqueInstance, ReductionStep]:
    g2, kept = inst.g.remove_vertices(part.X_mid)
    index = {old: new for new, old in enumerate(kept)}
    pendants = [(index[x], g2.n + i) for i, x in enumerate(part.X_low_m)]
    g3 = g2.extend(len(pendants), pendants)
    X = [index[x] for x in inst.X if x in index] + [p for _, p in pendants]
    reduced = DcliqueInstance(g3, tuple(X), inst.k)
    return reduced, ReductionStep('rr1', inst, part, tuple(kept), part.X_mid)


def _rule2(inst: DcliqueInstance, part: ModulatorPartition) -> Tuple[DcliqueInstance, ReductionStep]:
    g2, kept = inst.g.remove_vertices(part.Cprime)
    index = {old: new for new, old in enumerate(kept)}
    reduced = DcliqueInstance(g2, tuple(index[x] for x in inst.X), inst.k - len(part.Cprime))
    return reduced, ReductionStep('rr2', inst, part, tuple(kept), part.Cprime)


def apply_rr1(inst: DcliqueInstance) -> DcliqueInstance:
    part = partition_modulator(inst)
    if not part.X_mid:
        return inst
    return _rule1(inst, part)[0]


def apply_rr2(inst: DcliqueInstance, part: ModulatorPartition) -> DcliqueInstance:
    """Delete ``Cprime``; the input comes back unchanged when ``part.rule2_applicable`` is False."""
    if not part.rule2_applicable or not part.Cprime:
        return inst
    return _rule2(inst, part)[0]


def kernelize(inst: DcliqueInstance) -> KernelResult:
    trace: List[ReductionStep] = []
    cur = inst

    def done(verdict: Optional[bool], reason: str) -> KernelResult:
        ok = verdict is not None or cur.n <= size_bound(cur.d)
        logger.debug("kernelize: %s after %d steps, n=%d d=%d k=%d", reason, len(trace), cur.n, cur.d, cur.k)
        return KernelResult(inst, cur, verdict, tuple(trace), reason, ok)

    while True:
        C = cur.C
        d = cur.d
        if cur.g.has_isolated_vertex():
            return done(False, 'isolated-vertex')
        if cur.k < len(C):
            return done(False, 'k-below-clique')
        if len(C) <= d * d + d + 1:
            return done(None, 'small-clique')
        part = partition_modulator(cur)
        if len(part.C_N) >= d:
            return done(True, 'free-clique-vertices')
        if part.X_mid:
            cur, step = _rule1(cur, part)
            trace.append(step)
            continue
        if not part.X_high:
            return done(None, 'no-high-degree')
        if part.rule2_applicable and part.Cprime:
            cur, step = _rule2(cur, part)
            trace.append(step)
            continue
        return done(None, 'fixpoint')


def yes_witness(inst: DcliqueInstance) -> Coloring:
    """Odd k-coloring for an instance with at least d clique vertices outside N(X)."""
    part = partition_modulator(inst)
    if len(part.C_N) < inst.d or inst.k < len(inst.C):
        raise ContractError("instance does not have d free clique vertices")
    colors: List[Optional[int]] = [None] * inst.n
    for i, v in enumerate(inst.C):
        colors[v] = i + 1
    for x, free in zip(inst.X, part.C_N):
        colors[x] = colors[free]
    return Coloring(tuple(colors), inst.k)


def _lift_rr1(step: ReductionStep, inner: Coloring) -> Coloring:
    before = step.before
    g = before.g
    part = step.part
    colors: List[Optional[int]] = [None] * before.n
    for new, old in enumerate(step.kept):
        colors[old] = inner[new]
    cset = set(before.C)
    taken = {colors[x] for x in part.X_low + part.X_high}
    for x in part.X_low:
        taken |= {colors[v] for v in g.neighbor_set(x) & cset}
    for x in part.X_mid:
        blocked = taken | {colors[v] for v in g.neighbor_set(x) & cset}
        choice = next((c for c in range(1, before.k + 1) if c not in blocked), None)
        if choice is None:
            raise ContractError("no color left for a deleted mid-degree vertex")
        colors[x] = choice
        taken.add(choice)
    return Coloring(tuple(colors), before.k)


def _lift_rr2(step: ReductionStep, inner: Coloring) -> Coloring:
    before = step.before
    colors: List[Optional[int]] = [None] * before.n
    for new, old in enumerate(step.kept):
        colors[old] = inner[new]
    base = before.k - len(step.removed)
    for i, v in enumerate(step.removed):
        colors[v] = base + i + 1
    return Coloring(tuple(colors), before.k)


def lift_coloring(
    result: KernelResult, coloring: Coloring, guard_n: Optional[int] = DEFAULT_GUARD_N
) -> Tuple[Coloring, int]:
    """Map an odd coloring of ``result.reduced`` back to the original instance.

    Returns the lifted coloring and the number of steps that needed the oracle.
    """
    f = coloring
    fallbacks = 0
    for step in reversed(result.trace):
        try:
            lifted = (_lift_rr1 if step.rule == 'rr1' else _lift_rr2)(step, f)
            valid = verify_odd_coloring(step.before.g, lifted).valid
        except ContractError:
            valid = False
        if not valid:
            logger.warning(
                "kernel lift through %s failed on n=%d, falling back to the oracle", step.rule, step.before.n
            )
            fallbacks += 1
            lifted = odd_colorable_with(step.before.g, step.before.k, guard_n=guard_n)
            if lifted is None:
                raise ContractError("reduced instance was colorable but the original is not")
        f = lifted
    return f, fallbacks
