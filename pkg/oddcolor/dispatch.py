"""
Routing of a solve request to the first exact algorithm that applies.

Routes are tried in a fixed order, from the cheapest structural class test
down to the exhaustive oracle. A route that does not apply, or whose guard
is exceeded, hands over to the next one. Whatever a route returns is checked
by the verifier before it is reported.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from .cluster import ClusterInstance, find_cluster_modulator, solve_distance_to_cluster
from .cocluster import CoClusterInstance, find_cocluster_modulator, solve_distance_to_cocluster
from .cograph import build_cotree, cograph_invariants, cograph_witness
from .core import Coloring, Graph, OddCertificate, coloring_to_json, require_odd_coloring
from .diversity import compute_nd_partition, solve_neighborhood_diversity
from .interval import IntervalRepresentation, chi_odd_interval
from .kernel import DcliqueInstance, find_clique_modulator, kernelize, lift_coloring, yes_witness
from .oracle import OracleResult, chi_odd, clique_number, odd_colorable_with
from .split import chi_odd_split, split_partition
from .utils import (
    DEFAULT_CONFIG,
    UNBOUNDED,
    ContractError,
    GuardExceededError,
    Value,
    VerificationError,
    check_guard,
    format_value,
)

logger = logging.getLogger(__name__)

ROUTES = ('cograph', 'split', 'interval', 'nd', 'cluster', 'cocluster', 'kernel', 'oracle')

APPLIES = 'applies'
NOT_APPLICABLE = 'no'
GUARD = 'guard'


@dataclass
class SolveReport:
    algorithm: str
    value: Value
    witness: Optional[Coloring]
    certificate: Optional[OddCertificate]
    elapsed: float
    detections: Dict[str, str] = field(default_factory=dict)
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    k: Optional[int] = None

    @property
    def feasible(self) -> Optional[bool]:
        """Whether the value fits the requested palette; None when no ``k`` was given."""
        if self.k is None:
            return None
        return self.value <= self.k

    def to_dict(self, g: Graph) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'algorithm': self.algorithm,
            'chi_odd': format_value(self.value),
            'elapsed': round(self.elapsed, 6),
            'detections': dict(self.detections),
            'diagnostics': {key: _plain(value) for key, value in self.diagnostics.items()},
        }
        if self.witness is not None:
            data['coloring'] = coloring_to_json(g, self.witness)
        if self.k is not None:
            data['k'] = self.k
            data['feasible'] = self.feasible
        return data


def _plain(value: Any) -> Any:
    if isinstance(value, float) and value == UNBOUNDED:
        return 'unbounded'
    return value


class Dispatcher:
    """Tries the routes of ``ROUTES`` in order using the limits in ``config``."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = {**DEFAULT_CONFIG, **(config or {})}
        self.guard_n: Optional[int] = self.config['guard_n']

    def _detectors(self) -> Dict[str, Callable[[Graph, Optional[IntervalRepresentation]], Any]]:
        return {
            'cograph': lambda g, ir: build_cotree(g),
            'split': lambda g, ir: split_partition(g),
            'interval': self._detect_interval,
            'nd': self._detect_nd,
            'cluster': self._detect_cluster,
            'cocluster': self._detect_cocluster,
            'kernel': self._detect_kernel,
            'oracle': self._detect_oracle,
        }

    def _runners(self) -> Dict[str, Callable[[Graph, Any], OracleResult]]:
        return {
            'cograph': self._run_cograph,
            'split': lambda g, sp: chi_odd_split(g, sp, guard_n=self.guard_n),
            'interval': lambda g, ir: chi_odd_interval(ir, guard_n=self.guard_n),
            'nd': lambda g, part: solve_neighborhood_diversity(
                g, limit=self.config['nd_limit'], guard_n=self.guard_n
            ),
            'cluster': lambda g, X: solve_distance_to_cluster(
                ClusterInstance.from_graph(g, X), t_limit=self.config['cluster_t_limit']
            ),
            'cocluster': lambda g, X: solve_distance_to_cocluster(
                CoClusterInstance.from_graph(g, X), t_limit=self.config['cluster_t_limit']
            ),
            'kernel': self._run_kernel,
            'oracle': lambda g, _: chi_odd(g, guard_n=self.guard_n),
        }

    def _detect_interval(self, g: Graph, ir: Optional[IntervalRepresentation]) -> Optional[IntervalRepresentation]:
        if ir is None:
            return None
        if ir.to_graph() != g:
            raise ContractError("interval representation does not match the graph")
        return ir

    def _detect_nd(self, g: Graph, ir) -> Optional[int]:
        t = compute_nd_partition(g).t
        return t if t <= self.config['nd_limit'] else None

    def _modulator_budget(self) -> int:
        return min(self.config['cluster_budget'], self.config['cluster_t_limit'])

    def _detect_cluster(self, g: Graph, ir):
        return find_cluster_modulator(g, self._modulator_budget())

    def _detect_cocluster(self, g: Graph, ir):
        return find_cocluster_modulator(g, self._modulator_budget())

    def _detect_kernel(self, g: Graph, ir):
        return find_clique_modulator(g, self.config['clique_budget'])

    def _detect_oracle(self, g: Graph, ir) -> bool:
        check_guard(g.n, self.guard_n, 'oracle input')
        return True

    def _run_cograph(self, g: Graph, tree) -> OracleResult:
        values = cograph_invariants(tree)
        witness = cograph_witness(tree, 'chi_odd', n=g.n)
        return OracleResult(values.chi_odd, witness, values.as_dict())

    def _run_kernel(self, g: Graph, X: Tuple[int, ...]) -> OracleResult:
        if g.n == 0:
            return OracleResult(0, Coloring((), 0), {'d': 0})
        if g.has_isolated_vertex():
            return OracleResult(UNBOUNDED, None, {'d': len(X)})
        for k in range(clique_number(g), g.n + 1):
            result = kernelize(DcliqueInstance(g, X, k))
            if result.verdict is False:
                continue
            if result.verdict:
                inner = yes_witness(result.reduced)
            else:
                check_guard(result.reduced.n, self.guard_n, 'kernel')
                inner = odd_colorable_with(result.reduced.g, k, guard_n=None)
                if inner is None:
                    continue
            witness, fallbacks = lift_coloring(result, inner, guard_n=self.guard_n)
            diagnostics = {
                'd': len(X),
                'kernel_n': result.reduced.n,
                'stop_reason': result.stop_reason,
                'lift_fallbacks': fallbacks,
            }
            return OracleResult(k, witness, diagnostics)
        raise ContractError("no odd coloring with at most n colors")  # no cov

    def detect(self, g: Graph, route: str, intervals: Optional[IntervalRepresentation] = None) -> Tuple[str, Any]:
        """Detection outcome of one route and the structure it found."""
        try:
            found = self._detectors()[route](g, intervals)
        except GuardExceededError as e:
            logger.debug("route %s: %s", route, e)
            return GUARD, None
        if found is None:
            return NOT_APPLICABLE, None
        return APPLIES, found

    def applicable_routes(self, g: Graph, intervals: Optional[IntervalRepresentation] = None) -> List[str]:
        return [route for route in ROUTES if self.detect(g, route, intervals)[0] == APPLIES]

    def solve(
        self,
        g: Graph,
        intervals: Optional[IntervalRepresentation] = None,
        k: Optional[int] = None,
        algo: Optional[str] = None,
    ) -> SolveReport:
        if algo is not None and algo not in ROUTES:
            raise ContractError(f"unknown algorithm '{algo}', expected one of {', '.join(ROUTES)}")
        start = time.perf_counter()
        detections: Dict[str, str] = {}
        for route in (algo,) if algo else ROUTES:
            outcome, found = self.detect(g, route, intervals)
            detections[route] = outcome
            if outcome != APPLIES:
                continue
            try:
                result = self._runners()[route](g, found)
            except GuardExceededError as e:
                logger.debug("route %s gave up: %s", route, e)
                detections[route] = GUARD
                continue
            logger.debug("dispatch: route=%s value=%s n=%d", route, result.value, g.n)
            report = SolveReport(
                algorithm=route,
                value=result.value,
                witness=result.witness,
                certificate=None,
                elapsed=time.perf_counter() - start,
                detections=detections,
                diagnostics=dict(result.diagnostics or {}),
                k=k,
            )
            return self._verified(g, report)

        if algo:
            if detections[algo] == GUARD:
                raise GuardExceededError(f"route '{algo}' exceeds its guard on this instance")
            raise ContractError(f"route '{algo}' does not apply to this graph")
        raise GuardExceededError("instance too large for exact toolkit")

    def _verified(self, g: Graph, report: SolveReport) -> SolveReport:
        if report.witness is None:
            if report.value != UNBOUNDED and g.n:
                raise VerificationError(f"{report.algorithm} returned a finite value without a witness")
            return report
        report.certificate = require_odd_coloring(g, report.witness, report.algorithm)
        if report.witness.palette_size() > report.value:
            raise VerificationError(
                f"{report.algorithm} reported {report.value} but its witness uses "
                f"{report.witness.palette_size()} colors"
            )
        return report
