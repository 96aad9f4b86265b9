"""Two-electron 1D quantum dot solver: exact diagonalization in a harmonic
oscillator basis with a contact interaction, plus entanglement observables.

Energies are in effective Hartree, lengths in effective Bohr.
"""

__version__ = "0.1.0"

from .potential import PotentialParams
from .basis import BasisSpec
from .quadrature import QuadSpec
from .hamiltonian import TwoElectronSolver, GroundState, PairIndex
from .oracle import GridSpec

__all__ = [
    "PotentialParams",
    "BasisSpec",
    "QuadSpec",
    "TwoElectronSolver",
    "GroundState",
    "PairIndex",
    "GridSpec",
    "__version__",
]
