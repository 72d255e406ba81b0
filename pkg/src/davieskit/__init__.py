"""davieskit: thermal (Davies) quantum channels for qubits and qutrits.

Construction from physical or geometric parameters, membership tests
(complete positivity, quantum detailed balance, semigroup embedding,
conditional complete positivity) and minimal output entropy, both in
closed form and by an independent numeric oracle.
"""
from . import channels, entropy, errors, linalg, matio, qubit, qutrit
from .channels import GibbsState, gibbs_state
from .entropy import EntropyResult, moe_numeric, shannon, von_neumann
from .kernels import BACKEND as KERNEL_BACKEND
from .qubit import QubitDaviesParams, QubitRates, RelaxationTimes
from .qutrit import QutritDaviesParams

__version__ = "0.1.0"

__all__ = [
    "channels",
    "entropy",
    "errors",
    "linalg",
    "matio",
    "qubit",
    "qutrit",
    "GibbsState",
    "gibbs_state",
    "EntropyResult",
    "moe_numeric",
    "shannon",
    "von_neumann",
    "KERNEL_BACKEND",
    "QubitDaviesParams",
    "QubitRates",
    "RelaxationTimes",
    "QutritDaviesParams",
    "__version__",
]
