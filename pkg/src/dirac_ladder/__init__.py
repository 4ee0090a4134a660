"""Relativistic hydrogenic radial matrix elements.

Bound-state solutions of the radial Dirac-Coulomb problem, matrix
elements <r^lam> and <beta r^lam> (and friends) by two independent
oracles, recurrence ladders that climb the power lam from three seed
values, and a numerical audit of the operator identities connecting them.
"""

from .errors import (AbortOnDrift, CriticalCoupling, DiagonalCase,
                     DiracLadderError, DivergentIntegral, DomainError,
                     NoConvergence, NonPhysical, QuantizationMismatch,
                     SingularDenominator, VariantUnresolved)
from .identities import (IdentityReport, RelationId, audit_diagonal_starters,
                         audit_first_hypervirial, audit_grid,
                         audit_ps_and_virial, audit_relation,
                         audit_second_order, standard_states)
from .oracle import (MatrixElement, Method, OperatorKind, element_analytic,
                     element_quadrature, quad_semi_infinite)
from .recurrence import (DiagonalInputs, DiagonalStep, LadderEntry, LadderTable,
                         Provenance, RecurrenceCoefficients, coefficients,
                         descend, ladder, step_beta, step_diagonal_kappa,
                         step_plain)
from .specfun import gamma_ratio, ln_gamma
from .states import (CODATA_ALPHA, CoulombSystem, DeltaPair, QuantumState,
                     delta_pair, energy, energy_difference, exponent_w,
                     make_state, validity_exponent)
from .wavefunctions import (RadialWavefunction, evaluate,
                            evaluate_with_derivatives, norm_integral,
                            ode_residual, overlap, solve_radial)

__version__ = "0.1.0"

__all__ = [
    "AbortOnDrift", "CODATA_ALPHA", "CoulombSystem", "CriticalCoupling",
    "DeltaPair", "DiagonalCase", "DiagonalInputs", "DiagonalStep",
    "DiracLadderError", "DivergentIntegral", "DomainError", "IdentityReport",
    "LadderEntry", "LadderTable", "MatrixElement", "Method", "NoConvergence",
    "NonPhysical", "OperatorKind", "Provenance", "QuantizationMismatch",
    "QuantumState", "RadialWavefunction", "RecurrenceCoefficients",
    "RelationId", "SingularDenominator", "VariantUnresolved",
    "audit_diagonal_starters", "audit_first_hypervirial", "audit_grid",
    "audit_ps_and_virial", "audit_relation", "audit_second_order",
    "coefficients", "delta_pair", "descend", "element_analytic",
    "element_quadrature", "energy", "energy_difference", "evaluate",
    "evaluate_with_derivatives", "exponent_w", "gamma_ratio", "ladder",
    "ln_gamma", "make_state", "norm_integral", "ode_residual", "overlap",
    "quad_semi_infinite", "solve_radial", "standard_states",
    "step_beta", "step_diagonal_kappa", "step_plain", "validity_exponent",
]
