"""Quantum-number bookkeeping and the bound-state spectrum.

Conventions used throughout the package:

* natural units, hbar = c = 1; lengths in 1/mass, energies in units of mass;
* the nuclear attraction enters only through the dimensionless coupling
  g = Z * alpha;
* states carry (n, j, eps) with eps = +1 when l = j + 1/2 and -1 when
  l = j - 1/2 (l is the orbital momentum of the upper radial component);
* kappa = eps * (j + 1/2), the standard Dirac label: kappa = -1 for s_1/2,
  +1 for p_1/2, -2 for p_3/2, ...  The operator beta*(1 + Sigma.L) has
  eigenvalue -kappa on these states (sign map is an involution).

j is stored as the integer two_j to keep half-integer arithmetic exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CriticalCoupling, NonPhysical

#: CODATA 2018 fine-structure constant.
CODATA_ALPHA = 7.2973525693e-3


@dataclass(frozen=True)
class CoulombSystem:
    """Physical context: nuclear charge, fine-structure constant, electron mass."""

    Z: int
    alpha: float = CODATA_ALPHA
    mass: float = 1.0

    def __post_init__(self):
        if not isinstance(self.Z, int) or self.Z < 1:
            raise NonPhysical(f"Z must be a positive integer, got {self.Z!r}")
        if not (self.alpha > 0.0):
            raise NonPhysical(f"alpha must be positive, got {self.alpha!r}")
        if not (self.mass > 0.0):
            raise NonPhysical(f"mass must be positive, got {self.mass!r}")

    @property
    def g(self) -> float:
        """Dimensionless coupling Z*alpha."""
        return self.Z * self.alpha

    @classmethod
    def from_coupling(cls, g: float, mass: float = 1.0) -> "CoulombSystem":
        """System with the coupling set directly (stored as Z=1, alpha=g)."""
        return cls(Z=1, alpha=g, mass=mass)


@dataclass(frozen=True)
class QuantumState:
    """Bound-state labels (n, j, eps); j transported as the integer two_j."""

    n: int
    two_j: int
    eps: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise NonPhysical(f"n must be an integer >= 1, got {self.n!r}")
        if not isinstance(self.two_j, int) or self.two_j < 1 or self.two_j % 2 == 0:
            raise NonPhysical(
                f"j must be a positive half-integer (two_j odd), got two_j={self.two_j!r}")
        if self.eps not in (-1, 1):
            raise NonPhysical(f"eps must be +1 or -1, got {self.eps!r}")
        if 2 * self.n < self.two_j + 1:
            raise NonPhysical(
                f"n >= j + 1/2 required: n={self.n}, two_j={self.two_j}")
        if self.n_r == 0 and self.eps == 1:
            # nodeless states exist only on the kappa < 0 branch
            raise NonPhysical(
                f"n_r = 0 requires eps = -1: n={self.n}, two_j={self.two_j}")

    @property
    def j(self) -> float:
        return self.two_j / 2.0

    @property
    def l(self) -> int:
        """Orbital momentum of the upper component, l = j + eps/2."""
        return (self.two_j + self.eps) // 2

    @property
    def kappa(self) -> int:
        return self.eps * (self.two_j + 1) // 2

    @property
    def n_r(self) -> int:
        """Radial quantum number (node count), n - j - 1/2."""
        return self.n - (self.two_j + 1) // 2


@dataclass(frozen=True)
class DeltaPair:
    """The pair combinations eps2*(2j2+1) -+ eps1*(2j1+1); always even integers."""

    minus: int
    plus: int


def make_state(n: int, j: float, eps: int) -> QuantumState:
    """Validated state from (n, j, eps) with j given as a half-integer."""
    two_j = round(2 * j)
    if abs(2 * j - two_j) > 1e-12:
        raise NonPhysical(f"j must be a half-integer, got {j!r}")
    return QuantumState(n=n, two_j=two_j, eps=eps)


def exponent_w(sys: CoulombSystem, s: QuantumState) -> float:
    """Origin exponent w = sqrt((j+1/2)^2 - g^2); real only below critical coupling."""
    half = (s.two_j + 1) / 2.0
    g = sys.g
    if g >= half:
        raise CriticalCoupling(
            f"coupling g={g:.6g} >= j+1/2={half:.6g}; no real exponent")
    return math.sqrt((half - g) * (half + g))


def energy(sys: CoulombSystem, s: QuantumState) -> float:
    """Bound-state energy, 0 < E < mass.

    Evaluated as m*N/sqrt(N^2 + g^2) with N = n_r + w, which is
    algebraically identical to the usual inverse-square-root form but
    stays fully accurate as g -> 0.
    """
    w = exponent_w(sys, s)
    N = s.n_r + w
    return sys.mass * N / math.hypot(N, sys.g)


def energy_difference(sys: CoulombSystem, s2: QuantumState, s1: QuantumState) -> float:
    """E(s2) - E(s1) without subtractive cancellation.

    Rationalized form: the difference is proportional to g^2*(N2^2 - N1^2),
    so nearly degenerate pairs (small g, neighbouring n) keep full relative
    accuracy, and exactly degenerate pairs (equal n and j) give exactly 0.
    """
    w1 = exponent_w(sys, s1)
    w2 = exponent_w(sys, s2)
    N1 = s1.n_r + w1
    N2 = s2.n_r + w2
    D1 = math.hypot(N1, sys.g)
    D2 = math.hypot(N2, sys.g)
    # N2 - N1 with the w-part rationalized: w2 - w1 = (kappa2^2 - kappa1^2)/(w2 + w1)
    k1 = s1.kappa
    k2 = s2.kappa
    dN = (s2.n_r - s1.n_r) + (k2 * k2 - k1 * k1) / (w2 + w1)
    num = sys.g ** 2 * dN * (N2 + N1)
    return sys.mass * num / (D1 * D2 * (N2 * D1 + N1 * D2))


def delta_pair(s1: QuantumState, s2: QuantumState) -> DeltaPair:
    """Delta^- and Delta^+ for the ordered pair (s1 = ket, s2 = bra)."""
    t2 = s2.eps * (s2.two_j + 1)
    t1 = s1.eps * (s1.two_j + 1)
    return DeltaPair(minus=t2 - t1, plus=t2 + t1)


def validity_exponent(sys: CoulombSystem, s1: QuantumState, s2: QuantumState,
                      lam: float) -> bool:
    """True iff w1 + w2 + lam + 1 > 0 (strict), the integrability condition."""
    return exponent_w(sys, s1) + exponent_w(sys, s2) + lam + 1.0 > 0.0
