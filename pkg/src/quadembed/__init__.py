"""Structure-preserving eigenvalue embedding for quadratic matrix polynomials."""

from .core import Field, MatrixPair, PerturbationTriple, QuadPoly, Star, StructureClass
from .errors import QuadEmbedError, exit_code_for
from .invariant import coupling_matrix, evaluate_pair, relative_residual, structure_check
from .seep import EigenGroup, EmbedSpec, embed, solve, spillover_check
from .spectrum import quad_eig
from .structured import structured_family, structured_mup, structured_no_spillover
from .unstructured import family_with_pair, mup_update, no_spillover_update_known_fixed

__version__ = "0.1.0"

__all__ = [
    "EigenGroup", "EmbedSpec", "Field", "MatrixPair", "PerturbationTriple", "QuadEmbedError",
    "QuadPoly", "Star", "StructureClass", "coupling_matrix", "embed", "evaluate_pair",
    "exit_code_for", "family_with_pair", "mup_update", "no_spillover_update_known_fixed",
    "quad_eig", "relative_residual", "solve", "spillover_check", "structure_check",
    "structured_family", "structured_mup", "structured_no_spillover",
]
