"""Exact bound-state radial functions as terminating power series.

The two radial components are

    F(r) = norm * r^w e^{-qr} * (a_0 + a_1 r + ... + a_{n_r} r^{n_r})
    G(r) = norm * r^w e^{-qr} * (b_0 + b_1 r + ... + b_{n_r} r^{n_r})

built by substituting the ansatz into the first-order system

    F' = -(kappa/r) F + (E + m + g/r) G
    G' = +(kappa/r) G - (E - m + g/r) F

and normalized analytically so that the integral of F^2 + G^2 over
(0, inf) equals one.  The series terminates at degree n_r exactly when E
is the bound-state energy; construction verifies that and rejects any
other energy, which doubles as an independent check of the spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import _core
from .errors import DomainError, QuantizationMismatch
from .states import CoulombSystem, QuantumState, energy as state_energy, exponent_w

#: trailing-coefficient threshold (relative) above which the series is
#: declared non-terminating.
TERMINATION_TOL = 1e-10


@dataclass(frozen=True)
class RadialWavefunction:
    """Closed-form bound-state solution; immutable and cheap to share."""

    state: QuantumState
    sys: CoulombSystem
    energy: float
    w: float
    q: float
    a: tuple
    b: tuple
    norm: float
    ln_norm: float

    def _series(self) -> _core.Series:
        return _core.Series(g=self.sys.g, m=self.sys.mass, kappa=self.state.kappa,
                            n_r=self.state.n_r, E=self.energy, w=self.w, q=self.q,
                            a=self.a, b=self.b, ln_norm=self.ln_norm, trailing=0.0)


class RadialValue(NamedTuple):
    F: float
    G: float
    underflow: bool


class RadialDerivatives(NamedTuple):
    F: float
    G: float
    dF: float
    dG: float
    underflow: bool


def solve_radial(sys: CoulombSystem, s: QuantumState, *,
                 energy: float | None = None) -> RadialWavefunction:
    """Construct the normalized bound-state solution for (sys, s).

    energy overrides the spectrum value (diagnostic use); if the series
    then fails to terminate, QuantizationMismatch is raised.
    """
    exponent_w(sys, s)  # raises CriticalCoupling early
    ser = _core.radial_series(sys.g, sys.mass, s.kappa, s.n_r,
                              ctx=_core.FLOAT64, energy=energy)
    if ser.trailing > TERMINATION_TOL:
        raise QuantizationMismatch(
            f"series does not terminate at degree n_r={s.n_r} "
            f"(trailing residual {ser.trailing:.3e}); energy inconsistent "
            f"with the spectrum")
    return RadialWavefunction(state=s, sys=sys, energy=ser.E, w=ser.w, q=ser.q,
                              a=ser.a, b=ser.b, norm=math.exp(ser.ln_norm),
                              ln_norm=ser.ln_norm)


def _exponent(wf: RadialWavefunction, r: float) -> float:
    return wf.w * math.log(r) - wf.q * r + wf.ln_norm


def _poly(coefs, r):
    acc = 0.0
    for c in reversed(coefs):
        acc = acc * r + c
    return acc


def _dpoly(coefs, r):
    acc = 0.0
    for i in range(len(coefs) - 1, 0, -1):
        acc = acc * r + i * coefs[i]
    return acc


def evaluate(wf: RadialWavefunction, r: float) -> RadialValue:
    """(F(r), G(r)); exponent assembled in log space.

    Far in the exponential tail the result underflows to exact zeros and
    the underflow flag is set instead of returning NaN or raising.
    """
    if not (r > 0.0):
        raise DomainError(f"radius must be positive, got {r!r}")
    t = _exponent(wf, r)
    if t < -745.0:
        return RadialValue(0.0, 0.0, True)
    pre = math.exp(t)
    return RadialValue(pre * _poly(wf.a, r), pre * _poly(wf.b, r), False)


def evaluate_with_derivatives(wf: RadialWavefunction, r: float) -> RadialDerivatives:
    """(F, G, F', G') with analytic derivatives of the ansatz."""
    if not (r > 0.0):
        raise DomainError(f"radius must be positive, got {r!r}")
    t = _exponent(wf, r)
    if t < -745.0:
        return RadialDerivatives(0.0, 0.0, 0.0, 0.0, True)
    pre = math.exp(t)
    P = _poly(wf.a, r)
    Q = _poly(wf.b, r)
    shift = wf.w / r - wf.q
    dF = pre * (_dpoly(wf.a, r) + shift * P)
    dG = pre * (_dpoly(wf.b, r) + shift * Q)
    return RadialDerivatives(pre * P, pre * Q, dF, dG, False)


def ode_residual(wf: RadialWavefunction, r: float) -> tuple:
    """Residuals of the first-order system at r.

    res_F = F' + (kappa/r) F - (E + m + g/r) G
    res_G = G' - (kappa/r) G + (E - m + g/r) F

    Both vanish (to rounding) for a valid wavefunction at any radius.
    """
    F, G, dF, dG, _ = evaluate_with_derivatives(wf, r)
    kappa = wf.state.kappa
    E = wf.energy
    m = wf.sys.mass
    g = wf.sys.g
    res_f = dF + (kappa / r) * F - (E + m + g / r) * G
    res_g = dG - (kappa / r) * G + (E - m + g / r) * F
    return res_f, res_g


def norm_integral(wf: RadialWavefunction) -> float:
    """Analytic integral of F^2 + G^2 over (0, inf); equals 1 for valid input."""
    ser = wf._series()
    val, _ = _core.analytic_element(ser, ser, "plain", 0)
    return val


def overlap(wf1: RadialWavefunction, wf2: RadialWavefunction) -> float:
    """Analytic integral of F1 F2 + G1 G2; zero for distinct same-kappa states."""
    val, _ = _core.analytic_element(wf1._series(), wf2._series(), "plain", 0)
    return val


def spectrum_energy(wf: RadialWavefunction) -> float:
    """Energy from the closed-form spectrum for this wavefunction's labels."""
    return state_energy(wf.sys, wf.state)
