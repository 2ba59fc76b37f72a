"""Turaev-Viro state sums and Levin-Wen string nets for SU(2)_q."""

from .qalgebra import (
    QContext,
    LabelTriple,
    get_context,
    qint,
    quantum_dimension,
    admissible,
    q6j,
    sym6j,
    F_symbol,
    identity_residuals,
)

__version__ = "0.1.0"
