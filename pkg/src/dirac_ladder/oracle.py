"""Ground-truth matrix elements by two independent routes.

element_analytic integrates the terminating series termwise against
gamma integrals; element_quadrature integrates the same bilinear kernels
numerically with a double-exponential rule on (0, inf).  Agreement of the
two within their combined error estimates is the package's primary
self-check, exercised heavily by the test suite.

Operator kinds and their bilinear kernels in the radial components:

    PLAIN       f            F2 F1  + G2 G1
    BETA        beta f       F2 F1  - G2 G1
    ALPHA       -i alpha_r f          G2 F1  - F2 G1
    ALPHABETA   -i alpha_r beta f     F2 G1  + G2 F1
    DERIV       f d/dr       F2 F1' + G2 G1'
    BETADERIV   beta f d/dr  F2 F1' - G2 G1'

with |s1> the ket (components F1, G1) and <s2| the bra.  DERIV kinds act
with d/dr on the reduced components; differentiation introduces one
inverse power of r, so their integrability condition is shifted by one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import _core
from .errors import DivergentIntegral, NoConvergence
from .wavefunctions import RadialWavefunction

#: default relative tolerance of the quadrature oracle
DEFAULT_REL_TOL = 1e-10
#: refinement depth cap of the nested quadrature rule
MAX_REFINEMENT_DEPTH = 30


class OperatorKind(enum.Enum):
    PLAIN = "plain"
    BETA = "beta"
    ALPHA = "alpha"
    ALPHABETA = "alphabeta"
    DERIV = "deriv"
    BETADERIV = "betaderiv"

    @property
    def differentiates(self) -> bool:
        return self in (OperatorKind.DERIV, OperatorKind.BETADERIV)

    @property
    def convergence_shift(self) -> int:
        """Powers of r lost to differentiation in the integrability gate."""
        return 1 if self.differentiates else 0


class Method(enum.Enum):
    ANALYTIC = "ANALYTIC"
    QUADRATURE = "QUADRATURE"
    RECURRENCE = "RECURRENCE"
    SEED = "SEED"


@dataclass(frozen=True)
class MatrixElement:
    value: float
    op: OperatorKind
    lam: float
    method: Method
    err_est: float


def convergence_margin(wf1: RadialWavefunction, wf2: RadialWavefunction,
                       op: OperatorKind, lam: float) -> float:
    """w1 + w2 + lam + 1 (minus the derivative shift); must be > 0."""
    return wf1.w + wf2.w + lam + 1.0 - op.convergence_shift


def _require_convergent(wf1, wf2, op, lam):
    margin = convergence_margin(wf1, wf2, op, lam)
    if not (margin > 0.0):
        raise DivergentIntegral(
            f"element {op.value} with lam={lam:.6g} diverges: "
            f"w1+w2+lam+1{'-1' if op.differentiates else ''} = {margin:.6g} <= 0")


def element_analytic(wf1: RadialWavefunction, wf2: RadialWavefunction,
                     op: OperatorKind, lam: float) -> MatrixElement:
    """<s2| op r^lam |s1> from termwise gamma integrals (exact up to rounding)."""
    _require_convergent(wf1, wf2, op, lam)
    value, err = _core.analytic_element(wf1._series(), wf2._series(),
                                        op.value, lam)
    return MatrixElement(value=value, op=op, lam=lam,
                         method=Method.ANALYTIC, err_est=err)


# ---------------------------------------------------------------------------
# double-exponential quadrature on (0, inf)
# ---------------------------------------------------------------------------

_PI_2 = math.pi / 2.0
_T_MAX = 6.7  # sinh(6.7)*pi/2 ~ 638: mapped radii span ~e+-638 * scale


def quad_semi_infinite(f, rel_tol: float = DEFAULT_REL_TOL, r_scale: float = 1.0,
                       max_depth: int = MAX_REFINEMENT_DEPTH):
    """Integral of f over (0, inf) by the exp-sinh double-exponential rule.

    Nested trapezoid levels (each halving the step reuses all previous
    nodes).  The map r = r_scale*exp(pi/2 sinh t) absorbs both an
    integrable power singularity at r=0 and exponential decay at infinity.
    Returns (value, err_est, depth); raises NoConvergence carrying the
    partial value if the depth cap is hit.
    """
    ln_scale = math.log(r_scale)

    def node(t):
        u = _PI_2 * math.sinh(t) + ln_scale
        if u > 690.0 or u < -690.0:
            return 0.0  # integrand vanishes beyond representable radii
        r = math.exp(u)
        v = f(r)
        if v == 0.0:
            return 0.0
        v = v * r * _PI_2 * math.cosh(t)
        # overflow/underflow artifacts at the map's extremes (for an
        # absolutely integrable f the true contribution there is negligible)
        if not math.isfinite(v):
            return 0.0
        return v

    def sweep(h, only_odd):
        total = 0.0
        l1 = 0.0
        kmax = int(_T_MAX / h)
        start, step = (1, 2) if only_odd else (0, 1)
        for k in range(start, kmax + 1, step):
            v = node(k * h)
            total += v
            l1 += abs(v)
        for k in range(-start if only_odd else -1, -kmax - 1, -step):
            v = node(k * h)
            total += v
            l1 += abs(v)
        return total, l1

    h = 0.5
    raw, l1 = sweep(h, only_odd=False)
    value_prev = h * raw
    value = value_prev
    err = abs(value)
    for depth in range(1, max_depth + 1):
        h /= 2.0
        raw_odd, l1_odd = sweep(h, only_odd=True)
        raw += raw_odd
        l1 += l1_odd
        value = h * raw
        err = abs(value - value_prev)
        # absolute floor: rounding of the L1 mass limits achievable accuracy
        tol = max(rel_tol * abs(value), 1e-15 * h * l1)
        if err <= tol and depth >= 2:
            return value, max(err, 1e-16 * h * l1), depth
        value_prev = value
    raise NoConvergence(
        f"quadrature did not reach rel_tol={rel_tol:.2g} within "
        f"{max_depth} refinements (err ~ {err:.3g})", partial=value, err_est=err)


def _kernel_factory(wf1, wf2, op):
    """Pointwise kernel evaluator with the exponential prefactor kept in log space."""
    a1, b1, a2, b2 = wf1.a, wf1.b, wf2.a, wf2.b
    W = wf1.w + wf2.w
    Q = wf1.q + wf2.q
    lnN = wf1.ln_norm + wf2.ln_norm
    w1, q1 = wf1.w, wf1.q
    kind = op.value

    def poly(coefs, r):
        acc = 0.0
        for c in reversed(coefs):
            acc = acc * r + c
        return acc

    def dpoly(coefs, r):
        acc = 0.0
        for i in range(len(coefs) - 1, 0, -1):
            acc = acc * r + i * coefs[i]
        return acc

    def kernel(r, extra_exponent=0.0):
        t = W * math.log(r) - Q * r + lnN + extra_exponent
        if t < -700.0:
            return 0.0
        pre = math.exp(t)
        P1 = poly(a1, r)
        Q1 = poly(b1, r)
        P2 = poly(a2, r)
        Q2 = poly(b2, r)
        if kind == "plain":
            return pre * (P2 * P1 + Q2 * Q1)
        if kind == "beta":
            return pre * (P2 * P1 - Q2 * Q1)
        if kind == "alpha":
            return pre * (Q2 * P1 - P2 * Q1)
        if kind == "alphabeta":
            return pre * (P2 * Q1 + Q2 * P1)
        shift = w1 / r - q1
        dP1 = dpoly(a1, r) + shift * P1
        dQ1 = dpoly(b1, r) + shift * Q1
        if kind == "deriv":
            return pre * (P2 * dP1 + Q2 * dQ1)
        return pre * (P2 * dP1 - Q2 * dQ1)

    return kernel


def element_quadrature(wf1: RadialWavefunction, wf2: RadialWavefunction,
                       op: OperatorKind, lam: float | None = None,
                       func=None, rel_tol: float = DEFAULT_REL_TOL) -> MatrixElement:
    """<s2| op f(r) |s1> by adaptive double-exponential quadrature.

    Pass lam for f(r) = r^lam (the power is folded into the log-space
    exponent, so steep negative powers near r=0 stay representable), or a
    callable func for an arbitrary radial factor; exactly one of the two.
    """
    if (lam is None) == (func is None):
        raise ValueError("specify exactly one of lam= or func=")
    kernel = _kernel_factory(wf1, wf2, op)
    if func is None:
        _require_convergent(wf1, wf2, op, lam)

        def integrand(r):
            return kernel(r, extra_exponent=lam * math.log(r))

        power = lam
    else:
        def integrand(r):
            k = kernel(r)
            if k == 0.0:
                return 0.0
            return k * func(r)

        power = 0.0

    deg = len(wf1.a) + len(wf2.a) - 2
    smid = wf1.w + wf2.w + power + deg / 2.0
    r_scale = max(smid + 1.0, 1.0) / (wf1.q + wf2.q)
    value, err, _depth = quad_semi_infinite(integrand, rel_tol=rel_tol,
                                            r_scale=r_scale)
    return MatrixElement(value=value, op=op, lam=power if func is None else math.nan,
                         method=Method.QUADRATURE, err_est=err)
