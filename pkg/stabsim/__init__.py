"""stabsim - CHP stabilizer simulation, Pauli grouping and PBC transpilation."""

# Load environment variables FIRST - STABSIM_WORKERS is read by Config
try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass

__version__ = "0.1.0"

from .circuit import Circuit, Gate, GateKind
from .config import Config
from .pauli import PauliString, parse_pauli
from .tableau import Tableau

__all__ = ["Circuit", "Config", "Gate", "GateKind", "PauliString", "Tableau", "parse_pauli"]
