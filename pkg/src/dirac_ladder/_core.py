"""Precision-agnostic numeric kernels shared by the oracle and the ladder.

Every routine here is generic over the scalar type: plain floats for the
public float64 surface, mpmath numbers when the recurrence engine needs
extended precision.  The dispatch lives in NumericContext; arithmetic in the
kernels is ordinary Python operators, which both scalar types support.

Two stability rules are baked in and matter at small coupling:

* quantities that would be computed as differences of nearly equal numbers
  (E - m, w + kappa for kappa < 0, E2 - E1) use rationalized forms;
* per-element gamma factors come from ONE lgamma/exp evaluation extended by
  exact ratio recursion, so the transcendental rounding enters every term as
  a common factor instead of independent noise that cancellation amplifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .errors import DivergentIntegral, QuantizationMismatch

KINDS = ("plain", "beta", "alpha", "alphabeta", "deriv", "betaderiv")
DERIV_KINDS = ("deriv", "betaderiv")


class NumericContext:
    """Scalar-type dispatch: dps=None -> float64, dps=int -> mpmath at that precision."""

    __slots__ = ("dps",)

    def __init__(self, dps=None):
        self.dps = dps

    @property
    def hp(self):
        return self.dps is not None

    def real(self, x):
        if self.dps is None:
            return float(x)
        import mpmath as mp
        return mp.mpf(x)

    def sqrt(self, x):
        if self.dps is None:
            return math.sqrt(x)
        import mpmath as mp
        with mp.workdps(self.dps):
            return mp.sqrt(x)

    def exp(self, x):
        if self.dps is None:
            return math.exp(x)
        import mpmath as mp
        with mp.workdps(self.dps):
            return mp.exp(x)

    def log(self, x):
        if self.dps is None:
            return math.log(x)
        import mpmath as mp
        with mp.workdps(self.dps):
            return mp.log(x)

    def lgamma(self, x):
        if self.dps is None:
            return specfun.ln_gamma(x)
        import mpmath as mp
        with mp.workdps(self.dps):
            return mp.loggamma(x)

    def fsum(self, terms):
        if self.dps is None:
            return math.fsum(terms)
        import mpmath as mp
        with mp.workdps(self.dps):
            return mp.fsum(terms)

    @property
    def term_epsilon(self):
        """Relative rounding scale of a single evaluated term."""
        return 2e-15 if self.dps is None else 10.0 ** (2 - self.dps)


FLOAT64 = NumericContext()


@dataclass
class Series:
    """Terminating power-series solution in one-scalar-type form.

    F = exp(ln_norm) * r^w e^{-qr} sum a_i r^i, same for G with b_i.
    trailing is the termination residual, relative to the largest coefficient.
    """

    g: object
    m: object
    kappa: int
    n_r: int
    E: object
    w: object
    q: object
    a: tuple
    b: tuple
    ln_norm: object
    trailing: float


def radial_series(g, m, kappa, n_r, ctx=FLOAT64, energy=None) -> Series:
    """Solve the two-term coefficient recursion and normalize analytically.

    With energy=None the bound-state energy is used and the decay constant
    is taken from the exact quantization relation q*(n_r+w) = g*E.  With an
    explicit energy the series is built as-is; the caller inspects
    .trailing to detect non-termination.
    """
    g = ctx.real(g)
    m = ctx.real(m)
    one = ctx.real(1)
    w = ctx.sqrt((kappa - g) * (kappa + g)) if kappa > 0 else \
        ctx.sqrt((-kappa - g) * (-kappa + g))
    if energy is None:
        N = n_r + w
        E = m * N / ctx.sqrt(N * N + g * g)
        q = g * E / N
    else:
        E = ctx.real(energy)
        if not (0 < E < m):
            raise QuantizationMismatch(f"energy must satisfy 0 < E < m, got {energy!r}")
        q = ctx.sqrt((m - E) * (m + E))
    e_minus_m = -q * q / (E + m)

    a = [one]
    b = [-g / (w - kappa) if kappa < 0 else (w + kappa) / g]
    for i in range(1, n_r + 1):
        u = q * a[i - 1] + (E + m) * b[i - 1]
        v = q * b[i - 1] - e_minus_m * a[i - 1]
        det = i * (i + 2 * w)
        a.append(((i + w - kappa) * u + g * v) / det)
        b.append((-g * u + (i + w + kappa) * v) / det)

    # would-be source terms of coefficient n_r + 1; zero iff the series
    # terminates.  Normalized against the LAST coefficients: at small g the
    # coefficients fall off like q^i and a global scale would mask a
    # non-terminating tail.
    u = q * a[n_r] + (E + m) * b[n_r]
    v = q * b[n_r] - e_minus_m * a[n_r]
    scale = max(abs(a[n_r]), abs(b[n_r]))
    trailing = float(max(abs(u), abs(v)) / ((E + m) * scale))

    # norm integral: common base Gamma(2w+1)/(2q)^(2w+1) times an exact ratio chain
    ratios = [one]
    for p in range(1, 2 * n_r + 1):
        ratios.append(ratios[-1] * (2 * w + p) / (2 * q))
    total = ctx.fsum((a[i] * a[k] + b[i] * b[k]) * ratios[i + k]
                     for i in range(n_r + 1) for k in range(n_r + 1))
    ln_norm = -(ctx.log(total) + ctx.lgamma(2 * w + 1)
                - (2 * w + 1) * ctx.log(2 * q)) / 2

    return Series(g=g, m=m, kappa=kappa, n_r=n_r, E=E, w=w, q=q,
                  a=tuple(a), b=tuple(b), ln_norm=ln_norm, trailing=trailing)


def derivative_coefficients(s: Series):
    """Coefficient maps (power -> coef) of F' and G' on powers w-1 .. w+n_r."""
    da = {}
    db = {}
    for i, c in enumerate(s.a):
        da[i - 1] = da.get(i - 1, 0) + (i + s.w) * c
        da[i] = da.get(i, 0) - s.q * c
    for i, c in enumerate(s.b):
        db[i - 1] = db.get(i - 1, 0) + (i + s.w) * c
        db[i] = db.get(i, 0) - s.q * c
    return da, db


def min_gamma_argument(s1: Series, s2: Series, kind: str, lam) -> float:
    """Smallest gamma argument across the termwise integrals."""
    shift = 1 if kind in DERIV_KINDS else 0
    return float(s1.w + s2.w + lam + 1 - shift)


def analytic_element(s1: Series, s2: Series, kind: str, lam, ctx=FLOAT64):
    """<s2| kind with r^lam |s1> by termwise gamma integrals.

    Returns (value, err_est).  Raises DivergentIntegral when any termwise
    gamma argument is non-positive (equivalently, when the validity
    condition for this kind fails).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown operator kind {kind!r}")
    lam = ctx.real(lam)
    Q = s1.q + s2.q
    W = s1.w + s2.w
    lnN = s1.ln_norm + s2.ln_norm

    deriv = kind in DERIV_KINDS
    p_min = -1 if deriv else 0
    p_max = s1.n_r + s2.n_r
    arg0 = W + p_min + lam + 1
    if not (float(arg0) > 0.0):
        raise DivergentIntegral(
            f"gamma argument {float(arg0):.6g} <= 0 for kind={kind}, "
            f"lam={float(lam):.6g}; validity condition violated")
    base = ctx.exp(ctx.lgamma(arg0) - arg0 * ctx.log(Q) + lnN)
    itab = {p_min: base}
    for p in range(p_min + 1, p_max + 1):
        itab[p] = itab[p - 1] * (W + p + lam) / Q

    a1, b1, a2, b2 = s1.a, s1.b, s2.a, s2.b
    terms = []
    if not deriv:
        for i2 in range(len(a2)):
            for i1 in range(len(a1)):
                if kind == "plain":
                    c = a2[i2] * a1[i1] + b2[i2] * b1[i1]
                elif kind == "beta":
                    c = a2[i2] * a1[i1] - b2[i2] * b1[i1]
                elif kind == "alpha":
                    c = b2[i2] * a1[i1] - a2[i2] * b1[i1]
                else:  # alphabeta
                    c = a2[i2] * b1[i1] + b2[i2] * a1[i1]
                terms.append(c * itab[i2 + i1])
    else:
        da, db = derivative_coefficients(s1)
        sgn = 1 if kind == "deriv" else -1
        for i2 in range(len(a2)):
            for p, ca in da.items():
                terms.append(a2[i2] * ca * itab[i2 + p])
            for p, cb in db.items():
                terms.append(sgn * b2[i2] * cb * itab[i2 + p])
    value = ctx.fsum(terms)
    err_est = ctx.term_epsilon * float(ctx.fsum(abs(t) for t in terms))
    return value, err_est
