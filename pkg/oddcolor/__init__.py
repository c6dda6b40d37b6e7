from .__about__ import __version__
from .core import Coloring, Graph, parse_graph, read_graph, serialize_graph, verify_odd_coloring
from .dispatch import Dispatcher, SolveReport
from .oracle import chi, chi_odd, chi_odd_strong, chi_strong, odd_colorable_with
from .utils import ContractError, GraphParseError, GuardExceededError, OddColorError, VerificationError
