"""torsionlab: exact arithmetic for torsion-coset machinery.

Subpackages by topic: integers (factorization, primes, Jacobsthal), bounds
(explicit threshold constants), cosets (the finite torsion model), glorbits
(orbit densities over prime fields), algebras (idempotent lifting), selfcheck
(the acceptance suite), cli (command-line front end).
"""

from .errors import CapExceededError, InternalCheckError, TorsionLabError, ValidationError

__all__ = [
    "CapExceededError",
    "InternalCheckError",
    "TorsionLabError",
    "ValidationError",
]

__version__ = "0.1.0"
