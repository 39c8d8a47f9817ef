from ._core import (
    Graph,
    NumericalGuardError,
    ValidationError,
    __version__,
    continued_fraction,
    dirichlet_simultaneous,
    scattering_matrix,
)

__all__ = [
    "Graph",
    "NumericalGuardError",
    "ValidationError",
    "continued_fraction",
    "dirichlet_simultaneous",
    "scattering_matrix",
]
