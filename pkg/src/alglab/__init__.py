"""Exact computations for transitive Lie algebroid cohomology at desk scale.

Submodules: ``exactla`` (rational linear algebra), ``liealg`` (Lie algebras
and representations), ``ce`` (Chevalley-Eilenberg cohomology),
``basecomplex`` (presentation complexes and local systems), ``algebroid``
(discrete algebroid models and the localization map), ``bialg`` (compatible
pairs on Lie algebras), ``cli`` (batch front end).
"""

__version__ = "0.1.0"

from .algebroid import (
    AlgebroidModel,
    MixedCochain,
    coboundary,
    compare_images,
    h1,
    is_cocycle,
    kernel_upsilon,
    localize,
    rho_pullback,
    validate_model,
    verify_kernel_theorem,
    verify_les,
    verify_six_statements,
)
from .basecomplex import BaseComplex, LocalSystem, h_dims, holonomy, twisted_complex
from .bialg import (
    CobracketMap,
    MultiVector,
    coboundary_detect,
    compatible_pair_check,
    dual_bracket,
    extend_derivation,
    is_cocycle_L2,
    pairs_equivalent,
    schouten,
)
from .ce import ce_differential, coboundary_primitive, cohomology
from .errors import (
    AlglabError,
    ConsistencyError,
    InvalidStructureError,
    PreconditionError,
    UsageError,
)
from .exactla import RationalMatrix, Subspace, image_basis, kernel_basis, rref, solve
from .liealg import LieAlgebra, Representation, adjoint_rep, exterior_square_rep, invariants, quotient_rep
