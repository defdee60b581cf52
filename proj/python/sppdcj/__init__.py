"""Small parsimony under the DCJ-indel model.

All functions take and return TSV text in the formats of the command line tool.
"""

from ._core import (
    Error,
    GenomeError,
    ModelError,
    ParseError,
    SolverError,
    __version__,
    build,
    distance,
    evaluate,
    indel_potential,
    linearize,
    run,
    simulate,
)

__all__ = [
    "Error",
    "GenomeError",
    "ModelError",
    "ParseError",
    "SolverError",
    "__version__",
    "build",
    "distance",
    "evaluate",
    "indel_potential",
    "linearize",
    "run",
    "simulate",
]
