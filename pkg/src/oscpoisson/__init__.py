"""Exact computations on oscillator Lie algebras: Poisson and symmetric Leibniz
structures, Lie and Leibniz bialgebras, and bi-invariant connections."""

from .algebra import (
    Basis,
    BilinearForm,
    BilinearMap,
    LinearMap,
    PreconditionError,
    Report,
    SymbolicInputError,
    check_assoc_comm,
    check_form_invariance,
    check_jacobi,
    check_poisson,
    check_symmetric_leibniz,
    derivations,
    invariant_symmetric_forms,
    signature,
    split_admissible,
)
from .exactmath import AffineSolutionSpace, InconsistentSystem, Matrix, MissingVariable, Poly, solve_linear
from .oscillator import (
    Lambda,
    build_J_mu,
    build_k_lambda,
    build_omega,
    build_oscillator,
    is_generic,
    leibniz_product,
    poisson_product,
)

__version__ = "0.1.0"
