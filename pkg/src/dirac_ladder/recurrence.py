"""Recurrence ladders for <r^lam> and <beta r^lam> between bound states.

Two coupled three-term-style relations climb the power lam:

    c0 <r^l>       = c1 <r^{l-1}> + c2 <r^{l-2}> + c3 <r^{l-3}>
                     + d2 <beta r^{l-2}> + d3 <beta r^{l-3}>
    e0 <beta r^l>  = b0 <r^l> + b2 <r^{l-2}>
                     + e1 <beta r^{l-1}> + e2 <beta r^{l-2}>

valid for kappa1 != kappa2 whenever w1 + w2 + lam + 1 > 0 for every power
touched.  For kappa1 == kappa2 both relations degenerate to a single
equation per power; the diagonal route keeps the plain track seeded from
the analytic oracle and steps only the beta track (see
step_diagonal_kappa), evaluating BOTH the printed coefficient variant
(-4m on the beta r^{l-1} term) and the g-corrected one (-4mg); only the
corrected variant is consistent with the fully diagonal virial relation,
and the residuals of both are always recorded.

Forward stepping amplifies relative errors of the inputs by roughly
|c2 x_{l-2} / (c0 x_l)|, which reaches 1e4..1e5 per step for nearly
degenerate energies (hydrogen at Z=1).  Ladders therefore run their
arithmetic at extended precision internally (mpmath, WORK_DPS digits) and
convert to float64 only at the table boundary; steps remain pure
recurrence evaluations seeded by three oracle powers.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

from . import _core
from .errors import (AbortOnDrift, DiagonalCase, DivergentIntegral,
                     SingularDenominator, VariantUnresolved)
from .oracle import Method
from .states import (CoulombSystem, QuantumState, delta_pair, energy_difference,
                     exponent_w, validity_exponent)

#: decimal digits of the internal ladder arithmetic
WORK_DPS = 50
#: relative threshold (in units of mass powers) below which a denominator
#: counts as singular
TOL_DEN = 1e-9
#: relative drift between ladder and oracle that aborts the climb
DRIFT_TOL = 1e-6
#: how often (in steps) the ladder cross-checks against the oracle
CHECK_EVERY = 3
#: tolerance used when selecting the diagonal-recurrence variant
VARIANT_TOL = 1e-6


class Provenance(enum.Enum):
    SEED = "SEED"
    RECURRENCE = "RECURRENCE"


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """All eleven coefficients at one power, plus the two shared denominators."""

    lam: int
    c0: float
    c1: float
    c2: float
    c3: float
    d2: float
    d3: float
    b0: float
    b2: float
    e0: float
    e1: float
    e2: float
    denominators: tuple
    mass: float


def _denominator_values(dE, dm, m, lam):
    """The two denominators shared by the c/d coefficient set."""
    return dE * dm - 4 * m * lam, dE * dm - 4 * m * (lam - 1)


def _cd_coefficient_values(E1, E2, dE, dm, dp, g, m, lam, Dl, Dl1):
    """c0..c3, d2, d3 (the plain-track set); divides by both denominators."""
    c0 = (E2 + E1) * dE * dE * dm / Dl
    c1 = -2 * g * dE * dE * dm / Dl1
    c2 = dm * dp / 4 - lam * (lam - 1) * (E1 + E2) * dm / Dl
    c3 = -2 * g * (lam - 1) * (lam - 2) * dm / Dl1
    d2 = dm / 2 * ((1 - lam) + lam * (E2 + E1) * dp / Dl)
    d3 = g * (lam - 1) * dm * dp / Dl1
    return c0, c1, c2, c3, d2, d3


def _coefficient_values(E1, E2, dE, dm, dp, g, m, lam):
    """All eleven coefficients; requires both denominators nonzero."""
    Dl, Dl1 = _denominator_values(dE, dm, m, lam)
    cd = _cd_coefficient_values(E1, E2, dE, dm, dp, g, m, lam, Dl, Dl1)
    be = _beta_track_values(E1, E2, dE, dm, dp, g, m, lam)
    return cd + be, (Dl, Dl1)


def _beta_track_values(E1, E2, dE, dm, dp, g, m, lam):
    """b0, b2, e0, e1, e2; no denominators involved."""
    Dl = dE * dm - 4 * m * lam
    b0 = 4 * lam * (dE * dE - 4 * m * m)
    b2 = (1 - lam) * (dm * dm - 4 * lam * lam)
    e0 = 2 * (E2 + E1) * Dl
    e1 = 4 * g * (4 * m * lam - dE * dm)
    e2 = dp / 2 * (dm * dm - 4 * lam * lam)
    return b0, b2, e0, e1, e2


def coefficients(sys: CoulombSystem, s1: QuantumState, s2: QuantumState,
                 lam: int, tol_den: float = TOL_DEN) -> RecurrenceCoefficients:
    """Evaluate the coefficient set for the ordered pair (s1 = ket, s2 = bra).

    Raises DiagonalCase when kappa1 == kappa2 (the c/d relations presuppose
    a nonzero Delta^-), SingularDenominator when either shared denominator
    vanishes within tol_den * mass.
    """
    dp_pair = delta_pair(s1, s2)
    if dp_pair.minus == 0:
        raise DiagonalCase(
            "kappa1 == kappa2: coefficient set undefined, use the diagonal route")
    from .states import energy as _energy
    E1 = _energy(sys, s1)
    E2 = _energy(sys, s2)
    dE = energy_difference(sys, s2, s1)
    m = sys.mass
    dm = float(dp_pair.minus)
    dp = float(dp_pair.plus)
    Dl, Dl1 = _denominator_values(dE, dm, m, float(lam))
    for den in (Dl, Dl1):
        if abs(den) < tol_den * m:
            raise SingularDenominator(
                f"denominator {den:.3e} within {tol_den:.1e}*m of zero at lam={lam}")
    cd = _cd_coefficient_values(E1, E2, dE, dm, dp, sys.g, m, float(lam), Dl, Dl1)
    be = _beta_track_values(E1, E2, dE, dm, dp, sys.g, m, float(lam))
    return RecurrenceCoefficients(lam=lam, c0=cd[0], c1=cd[1], c2=cd[2],
                                  c3=cd[3], d2=cd[4], d3=cd[5], b0=be[0],
                                  b2=be[1], e0=be[2], e1=be[3], e2=be[4],
                                  denominators=(Dl, Dl1), mass=m)


def step_plain(coeffs: RecurrenceCoefficients, plain_prev, beta_prev) -> float:
    """<r^lam> from the six elements at powers lam-1, lam-2, lam-3.

    plain_prev and beta_prev are (value at lam-1, lam-2, lam-3).
    """
    m = coeffs.mass
    if abs(coeffs.c0) < TOL_DEN * m ** 3:
        raise SingularDenominator(
            f"c0 = {coeffs.c0:.3e} ~ 0 (degenerate energies or resonant power)")
    x1, x2, x3 = plain_prev
    _, y2, y3 = beta_prev
    num = (coeffs.c1 * x1 + coeffs.c2 * x2 + coeffs.c3 * x3
           + coeffs.d2 * y2 + coeffs.d3 * y3)
    return num / coeffs.c0


def step_beta(coeffs: RecurrenceCoefficients, plain_lam: float, plain_lm2: float,
              beta_lm1: float, beta_lm2: float) -> float:
    """<beta r^lam> from the current <r^lam> and three lower elements."""
    m = coeffs.mass
    if abs(coeffs.e0) < TOL_DEN * m ** 2:
        raise SingularDenominator(
            f"e0 = {coeffs.e0:.3e} ~ 0 (degenerate energies at lam=0 or resonance)")
    num = (coeffs.b0 * plain_lam + coeffs.b2 * plain_lm2
           + coeffs.e1 * beta_lm1 + coeffs.e2 * beta_lm2)
    return num / coeffs.e0


# ---------------------------------------------------------------------------
# diagonal route (kappa1 == kappa2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalInputs:
    """Elements feeding one diagonal beta step, plus the oracle reference."""

    plain_lam: float
    plain_lm2: float
    beta_lm1: float
    beta_lm2: float
    oracle_beta: float


@dataclass(frozen=True)
class DiagonalStep:
    value: float
    variant: str  # "corrected" or "printed"
    residual_corrected: float
    residual_printed: float


def _diagonal_beta_variants(E1, E2, dE, dplus, g, m, lam,
                            x_lam, x_lm2, y_lm1, y_lm2):
    """Solve the diagonal relation for <beta r^lam>, both coefficient variants.

    [dE^2 - 4m^2] <r^l> = l*(D+/2) <b r^{l-2}> - 4m{g} <b r^{l-1}>
                          - 2m(E2+E1) <b r^l> - l(l-1) <r^{l-2}>
    """
    lead = dE * dE - 4 * m * m
    common = lam * dplus / 2 * y_lm2 - lam * (lam - 1) * x_lm2 - lead * x_lam
    den = 2 * m * (E2 + E1)
    corrected = (common - 4 * m * g * y_lm1) / den
    printed = (common - 4 * m * y_lm1) / den
    return corrected, printed


def step_diagonal_kappa(sys: CoulombSystem, s1: QuantumState, s2: QuantumState,
                        lam: int, inputs: DiagonalInputs,
                        tol: float = VARIANT_TOL) -> DiagonalStep:
    """Diagonal-kappa beta step; returns the variant that matches the oracle.

    Both the printed and the g-corrected coefficient variants are
    evaluated and their residuals against inputs.oracle_beta recorded.
    The corrected variant is expected to win; if neither is within tol,
    VariantUnresolved is raised rather than guessing.
    """
    if s1.kappa != s2.kappa:
        raise DiagonalCase("step_diagonal_kappa requires kappa1 == kappa2")
    from .states import energy as _energy
    E1 = _energy(sys, s1)
    E2 = _energy(sys, s2)
    dE = energy_difference(sys, s2, s1)
    dplus = float(delta_pair(s1, s2).plus)
    corrected, printed = _diagonal_beta_variants(
        E1, E2, dE, dplus, sys.g, sys.mass, float(lam),
        inputs.plain_lam, inputs.plain_lm2, inputs.beta_lm1, inputs.beta_lm2)
    ref = inputs.oracle_beta
    scale = max(abs(ref), 1e-300)
    res_c = abs(corrected - ref) / scale
    res_p = abs(printed - ref) / scale
    if res_c <= tol:
        return DiagonalStep(corrected, "corrected", res_c, res_p)
    if res_p <= tol:
        return DiagonalStep(printed, "printed", res_c, res_p)
    raise VariantUnresolved(
        f"neither diagonal variant matches the oracle at lam={lam}: "
        f"corrected {res_c:.3e}, printed {res_p:.3e}", res_p, res_c)


# ---------------------------------------------------------------------------
# ladder tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderEntry:
    plain: float
    beta: float
    provenance: Provenance
    err_est: float


@dataclass
class LadderTable:
    sys: CoulombSystem
    s1: QuantumState
    s2: QuantumState
    entries: dict = field(default_factory=dict)           # lam -> LadderEntry
    seeds: dict = field(default_factory=dict)             # power -> (plain, beta)
    diagonal_steps: dict = field(default_factory=dict)    # lam -> DiagonalStep

    def rows(self):
        """(lam, plain, beta, provenance, err_est) sorted by lam."""
        return [(lam, e.plain, e.beta, e.provenance.value, e.err_est)
                for lam, e in sorted(self.entries.items())]


def _hp_pair(sys, s1, s2, ctx):
    ser1 = _core.radial_series(sys.g, sys.mass, s1.kappa, s1.n_r, ctx=ctx)
    ser2 = _core.radial_series(sys.g, sys.mass, s2.kappa, s2.n_r, ctx=ctx)
    return ser1, ser2


def _hp_element(ser1, ser2, kind, lam, ctx):
    value, _ = _core.analytic_element(ser1, ser2, kind, lam, ctx=ctx)
    return value


def _gate_or_raise(sys, s1, s2, power):
    if not validity_exponent(sys, s1, s2, power):
        w_sum = exponent_w(sys, s1) + exponent_w(sys, s2)
        raise DivergentIntegral(
            f"seed power {power} violates the validity condition: "
            f"w1+w2+lam+1 = {w_sum + power + 1:.6g} <= 0")


def ladder(sys: CoulombSystem, s1: QuantumState, s2: QuantumState,
           lambda_min: int, lambda_max: int, *, seeds=None,
           check_every: int = CHECK_EVERY, drift_tol: float = DRIFT_TOL,
           work_dps: int = WORK_DPS) -> LadderTable:
    """Build the table of (plain, beta) elements for lam in [lambda_min, lambda_max].

    Seeds the three powers below lambda_min from the analytic oracle, then
    climbs with the paired recurrences (diagonal pairs dispatch to the
    single-relation diagonal route).  Every check_every steps one entry is
    cross-checked against the oracle; drift beyond drift_tol aborts.  A
    seeds mapping {power: (plain, beta)} overrides the oracle seeds for
    resume/diagnostic use.
    """
    table = LadderTable(sys=sys, s1=s1, s2=s2)
    if lambda_max < lambda_min:
        return table
    diagonal = delta_pair(s1, s2).minus == 0
    # the diagonal relation reaches only lam-2, so that route seeds (and
    # gates) two powers instead of three
    seed_powers = ((lambda_min - 2, lambda_min - 1) if diagonal
                   else (lambda_min - 3, lambda_min - 2, lambda_min - 1))
    for power in seed_powers:
        _gate_or_raise(sys, s1, s2, power)

    ctx = _core.NumericContext(work_dps)
    ser1, ser2 = _hp_pair(sys, s1, s2, ctx)
    hp_seeds = {}
    for power in seed_powers:
        if seeds is not None and power in seeds:
            hp_seeds[power] = (ctx.real(seeds[power][0]), ctx.real(seeds[power][1]))
        else:
            hp_seeds[power] = (_hp_element(ser1, ser2, "plain", power, ctx),
                               _hp_element(ser1, ser2, "beta", power, ctx))
        table.seeds[power] = (float(hp_seeds[power][0]), float(hp_seeds[power][1]))

    if diagonal:
        return _ladder_diagonal(table, ctx, ser1, ser2, hp_seeds,
                                lambda_min, lambda_max)
    return _ladder_offdiagonal(table, ctx, ser1, ser2, hp_seeds, lambda_min,
                               lambda_max, check_every, drift_tol)


def _ladder_offdiagonal(table, ctx, ser1, ser2, hp, lambda_min, lambda_max,
                        check_every, drift_tol):
    sys, s1, s2 = table.sys, table.s1, table.s2
    dpair = delta_pair(s1, s2)
    E1, E2 = ser1.E, ser2.E
    dE = E2 - E1  # extended precision: direct difference keeps ~work_dps-16 digits
    m = ctx.real(sys.mass)
    g = ctx.real(sys.g)
    tol_c0 = TOL_DEN * sys.mass ** 3
    tol_e0 = TOL_DEN * sys.mass ** 2

    pending = []  # entries since the last cross-check, err_est to be filled
    err_floor = 2.2e-16
    last_drift = err_floor
    steps_done = 0
    for lam in range(lambda_min, lambda_max + 1):
        Dl, Dl1 = _denominator_values(dE, dpair.minus, m, lam)
        singular = min(abs(float(Dl)), abs(float(Dl1))) < TOL_DEN * sys.mass
        if not singular:
            c0, c1, c2, c3, d2, d3 = _cd_coefficient_values(
                E1, E2, dE, dpair.minus, dpair.plus, g, m, lam, Dl, Dl1)
            b0, b2, e0, e1, e2 = _beta_track_values(
                E1, E2, dE, dpair.minus, dpair.plus, g, m, lam)
            singular = abs(float(c0)) < tol_c0 or abs(float(e0)) < tol_e0
        if singular:
            # resonant or degenerate power: take this one row from the oracle
            x = _hp_element(ser1, ser2, "plain", lam, ctx)
            y = _hp_element(ser1, ser2, "beta", lam, ctx)
            hp[lam] = (x, y)
            table.entries[lam] = LadderEntry(float(x), float(y),
                                             Provenance.SEED, err_floor)
            continue
        x1, y1 = hp[lam - 1]
        x2, y2 = hp[lam - 2]
        x3, y3 = hp[lam - 3]
        x = (c1 * x1 + c2 * x2 + c3 * x3 + d2 * y2 + d3 * y3) / c0
        y = (b0 * x + b2 * x2 + e1 * y1 + e2 * y2) / e0
        hp[lam] = (x, y)
        entry = LadderEntry(float(x), float(y), Provenance.RECURRENCE, math.nan)
        table.entries[lam] = entry
        pending.append(lam)
        steps_done += 1
        if steps_done % check_every == 0 or lam == lambda_max:
            x_ref = _hp_element(ser1, ser2, "plain", lam, ctx)
            y_ref = _hp_element(ser1, ser2, "beta", lam, ctx)
            drift = max(abs(float((x - x_ref) / x_ref)) if x_ref != 0 else 0.0,
                        abs(float((y - y_ref) / y_ref)) if y_ref != 0 else 0.0)
            if drift > drift_tol:
                raise AbortOnDrift(
                    f"ladder drifted {drift:.3e} from the oracle at lam={lam}",
                    lam=lam, drift=drift)
            last_drift = max(drift, err_floor)
            for mu in pending:
                e = table.entries[mu]
                table.entries[mu] = LadderEntry(e.plain, e.beta, e.provenance,
                                                last_drift)
            pending.clear()
    for mu in pending:
        e = table.entries[mu]
        table.entries[mu] = LadderEntry(e.plain, e.beta, e.provenance, last_drift)
    return table


def _ladder_diagonal(table, ctx, ser1, ser2, hp, lambda_min, lambda_max):
    """kappa1 == kappa2: plain track seeded per power, beta track stepped.

    The toolkit supplies only one independent relation per power here, so
    <r^lam> comes from the oracle (provenance SEED applies to that half);
    the beta value is produced by the recurrence and both coefficient
    variants are scored against the oracle each step.
    """
    sys, s1, s2 = table.sys, table.s1, table.s2
    E1, E2 = ser1.E, ser2.E
    dE = E2 - E1
    dplus = delta_pair(s1, s2).plus
    m = ctx.real(sys.mass)
    g = ctx.real(sys.g)
    for lam in range(lambda_min, lambda_max + 1):
        x_lam = _hp_element(ser1, ser2, "plain", lam, ctx)
        x_lm2 = hp[lam - 2][0] if (lam - 2) in hp else _hp_element(
            ser1, ser2, "plain", lam - 2, ctx)
        y_lm1 = hp[lam - 1][1]
        y_lm2 = hp[lam - 2][1]
        corrected, printed = _diagonal_beta_variants(
            E1, E2, dE, dplus, g, m, lam, x_lam, x_lm2, y_lm1, y_lm2)
        y_ref = _hp_element(ser1, ser2, "beta", lam, ctx)
        scale = max(abs(float(y_ref)), 1e-300)
        res_c = abs(float(corrected - y_ref)) / scale
        res_p = abs(float(printed - y_ref)) / scale
        if res_c <= VARIANT_TOL:
            value, variant = corrected, "corrected"
        elif res_p <= VARIANT_TOL:
            value, variant = printed, "printed"
        else:
            raise VariantUnresolved(
                f"neither diagonal variant matches the oracle at lam={lam}: "
                f"corrected {res_c:.3e}, printed {res_p:.3e}", res_p, res_c)
        hp[lam] = (x_lam, value)
        err = max(res_c if variant == "corrected" else res_p, 2.2e-16)
        table.entries[lam] = LadderEntry(float(x_lam), float(value),
                                         Provenance.RECURRENCE, err)
        table.diagonal_steps[lam] = DiagonalStep(float(value), variant,
                                                 res_c, res_p)
    return table


def descend(sys: CoulombSystem, s1: QuantumState, s2: QuantumState,
            table: LadderTable, lambda_floor: int,
            work_dps: int = WORK_DPS) -> LadderTable:
    """Extend a ladder downward by solving the plain relation for power lam-3.

    Only the plain element can be recovered this way: the pair of relations
    touches the two lowest-power unknowns solely through proportional
    combinations (c3:d3 equals b2:e2 at the shifted power, identically), so
    the would-be 2x2 system is singular and the beta companion at each new
    power is seeded from the analytic oracle instead.  Downward solving is
    also subject to subtractive cancellation the forward direction avoids;
    a warning is emitted and results should be checked against the oracle.
    """
    warnings.warn("downward recurrence is prone to subtractive cancellation; "
                  "validate results against the oracle", stacklevel=2)
    if delta_pair(s1, s2).minus == 0:
        raise DiagonalCase("descend requires kappa1 != kappa2")
    known = dict(table.seeds)
    for lam, e in table.entries.items():
        known[lam] = (e.plain, e.beta)
    lo = min(known)
    ctx = _core.NumericContext(work_dps)
    ser1, ser2 = _hp_pair(sys, s1, s2, ctx)
    E1, E2 = ser1.E, ser2.E
    dE = E2 - E1
    dpair = delta_pair(s1, s2)
    m = ctx.real(sys.mass)
    g = ctx.real(sys.g)
    hp = {mu: (ctx.real(v[0]), ctx.real(v[1])) for mu, v in known.items()}
    out = LadderTable(sys=sys, s1=s1, s2=s2, entries=dict(table.entries),
                      seeds=dict(table.seeds))
    while lo > lambda_floor:
        target = lo - 1          # recover X at target from (17) at target+3
        lam = target + 3
        _gate_or_raise(sys, s1, s2, target)
        Dl, Dl1 = _denominator_values(dE, dpair.minus, m, lam)
        if min(abs(float(Dl)), abs(float(Dl1))) < TOL_DEN * sys.mass:
            raise SingularDenominator(
                f"denominator ~ 0 during descent at lam={lam}")
        c0, c1, c2, c3, d2, d3 = _cd_coefficient_values(
            E1, E2, dE, dpair.minus, dpair.plus, g, m, lam, Dl, Dl1)
        if abs(float(c3)) < TOL_DEN * sys.mass:
            # c3 carries (lam-1)(lam-2): the relation loses its lowest term
            raise SingularDenominator(
                f"c3 = 0 at lam={lam}; power {target} unreachable downward")
        y = _hp_element(ser1, ser2, "beta", target, ctx)
        x = (c0 * hp[lam][0] - c1 * hp[lam - 1][0] - c2 * hp[lam - 2][0]
             - d2 * hp[lam - 2][1] - d3 * y) / c3
        hp[target] = (x, y)
        out.entries[target] = LadderEntry(float(x), float(y),
                                          Provenance.RECURRENCE, math.nan)
        lo = target
    return out
