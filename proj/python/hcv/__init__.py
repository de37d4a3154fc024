"""Self-dual vortex solver on the hyperbolic caloron strip."""

from ._core import (
    DiagnosticError,
    SolverError,
    ValidationError,
    expu0,
    g_integral,
    run,
)

__all__ = [
    "run",
    "g_integral",
    "expu0",
    "ValidationError",
    "SolverError",
    "DiagnosticError",
]
