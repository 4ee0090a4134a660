"""Exception hierarchy.

Every failure mode of the numeric engines maps to a dedicated class so
callers (and the CLI) can distinguish bad input from numerical breakdown.
"""


class DiracLadderError(Exception):
    """Base class for all package errors."""


class NonPhysical(DiracLadderError):
    """Quantum-number combination that does not label a bound state."""


class CriticalCoupling(DiracLadderError):
    """Coupling g = Z*alpha at or above j+1/2; the origin exponent turns complex."""


class DomainError(DiracLadderError):
    """Argument outside a numeric kernel's domain."""


class QuantizationMismatch(DiracLadderError):
    """Power series failed to terminate: energy inconsistent with the spectrum."""


class DivergentIntegral(DiracLadderError):
    """Radial integral does not converge for the requested power."""


class NoConvergence(DiracLadderError):
    """Quadrature hit the refinement depth cap before reaching tolerance.

    Carries the best value obtained so far and its error estimate.
    """

    def __init__(self, message, partial, err_est):
        super().__init__(message)
        self.partial = partial
        self.err_est = err_est


class SingularDenominator(DiracLadderError):
    """A recurrence denominator is (numerically) zero for this pair/power."""


class DiagonalCase(DiracLadderError):
    """Pair diagonality (kappa1 == kappa2 or not) conflicts with the requested relation."""


class VariantUnresolved(DiracLadderError):
    """Neither printed nor g-corrected diagonal recurrence matched the oracle."""

    def __init__(self, message, residual_printed, residual_corrected):
        super().__init__(message)
        self.residual_printed = residual_printed
        self.residual_corrected = residual_corrected


class AbortOnDrift(DiracLadderError):
    """Ladder cross-check against the oracle drifted beyond tolerance."""

    def __init__(self, message, lam, drift):
        super().__init__(message)
        self.lam = lam
        self.drift = drift
