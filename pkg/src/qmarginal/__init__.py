"""Spectral compatibility checks for quantum marginals.

Given candidate spectra for the reductions of a multipartite state, the
checkers in :mod:`qmarginal.conditions` evaluate necessary linear
inequalities and report a signed slack for each.  :mod:`qmarginal.verify`
samples genuine states and confirms that no inequality is ever violated.
"""

from .conditions import (
    COMPATIBLE,
    INCOMPATIBLE,
    CompatReport,
    InequalityRecord,
    check_bipartite,
    check_pure_multipartite,
    check_rank_deficiency,
    check_three_qutrit_polytope,
    check_tripartite,
    check_two_qubit,
)
from .linalg import ConvergenceError, PSDViolationError, Spectrum, eigh, min_trace_isometry
from .majorization import majorizes
from .qstate import DensityMatrix, partial_trace, spectrum

__version__ = "0.1.0"

__all__ = [
    "COMPATIBLE",
    "INCOMPATIBLE",
    "CompatReport",
    "ConvergenceError",
    "DensityMatrix",
    "InequalityRecord",
    "PSDViolationError",
    "Spectrum",
    "check_bipartite",
    "check_pure_multipartite",
    "check_rank_deficiency",
    "check_three_qutrit_polytope",
    "check_tripartite",
    "check_two_qubit",
    "eigh",
    "majorizes",
    "min_trace_isometry",
    "partial_trace",
    "spectrum",
]
