import logging
import math
from typing import Any, Dict, Iterable, Optional, Union

Value = Union[int, float]

# Odd variants of graphs with an isolated vertex. Float infinity already gives
# the arithmetic the recursions need: inf + x == inf, min drops it, max keeps it.
UNBOUNDED = math.inf

DEFAULT_GUARD_N = 24

DEFAULT_CONFIG: Dict[str, Any] = {
    'format': 'dimacs',
    'guard_n': DEFAULT_GUARD_N,
    'clique_budget': 10,
    'cluster_budget': 8,
    'cluster_t_limit': 5,
    'nd_limit': 6,
    'seed': 0,
    'json': False,
    'log_level': 'WARNING',
    'bench_instances': 20,
    'bench_n': 10,
    'bench_p': 0.4,
    'bench_interval_models': 100,
    'bench_interval_n': 50,
}


class OddColorError(Exception):
    """Base class for every error raised by the toolkit."""


class GraphParseError(OddColorError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GuardExceededError(OddColorError):
    """The instance is larger than an exhaustive routine is allowed to handle."""


class ContractError(OddColorError):
    """A precondition of an operation does not hold."""


class VerificationError(ContractError):
    """A coloring about to be emitted failed verification."""


def is_unbounded(value: Value) -> bool:
    return value == UNBOUNDED


def vmin(values: Iterable[Value]) -> Value:
    """Minimum that treats an empty argument as unbounded."""
    return min(values, default=UNBOUNDED)


def format_value(value: Value) -> Union[int, str]:
    if is_unbounded(value):
        return 'unbounded'
    return int(value)


def check_guard(n: int, guard_n: Optional[int], what: str = 'instance') -> None:
    if guard_n is not None and n > guard_n:
        raise GuardExceededError(f"{what} has {n} vertices, guard is {guard_n}")


def configure_logging(level: str = 'WARNING') -> None:
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format='%(levelname)s %(name)s: %(message)s',
    )
