"""Numerical audit of the operator identities relating radial matrix elements.

Each relation is assembled termwise from oracle elements (analytic route)
and scored as lhs vs rhs.  Derivative terms follow one fixed convention:
in the audited relations d/dr acts on the full radial spinor, whose
components are F/r and G/r, so on the reduced components it reads
d/dr - 1/r; a term x(r) d/dr therefore contributes DERIV(f=x) minus
PLAIN(f=x/r).  Under this reading the second-order relations close
exactly; the literal reduced-component reading fails them by 2<f'/r>-type
terms, which the relabeling metamorphic tests would also expose.

Relations that carry a suspected misprint are audited in BOTH the printed
and corrected coefficient variants as first-class relation ids; nothing
is silently repaired.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .errors import DiagonalCase, DivergentIntegral, SingularDenominator
from .oracle import OperatorKind, element_analytic
from .recurrence import (_beta_track_values, _cd_coefficient_values,
                         _denominator_values)
from .states import (CoulombSystem, QuantumState, delta_pair, energy,
                     energy_difference, exponent_w)
from .wavefunctions import solve_radial

#: dominant relative tolerance of the audit verdict
REL_TOL = 1e-8
#: absolute floor applied when both sides are below SMALL_SIDE
ABS_TOL = 1e-12
SMALL_SIDE = 1e-6


class RelationId(enum.Enum):
    EQ6 = "EQ6"
    EQ8 = "EQ8"
    EQ9 = "EQ9"
    EQ10 = "EQ10"
    EQ11 = "EQ11"
    EQ12 = "EQ12"
    EQ17 = "EQ17"
    EQ20 = "EQ20"
    EQ22 = "EQ22"
    EQ23 = "EQ23"
    EQ24 = "EQ24"
    EQ25_PRINTED = "EQ25_PRINTED"
    EQ25_CORRECTED = "EQ25_CORRECTED"
    EQ26_PRINTED = "EQ26_PRINTED"
    EQ26_CORRECTED = "EQ26_CORRECTED"
    EQ27 = "EQ27"
    EQ28 = "EQ28"
    BETA_EXPECTATION = "BETA_EXPECTATION"


@dataclass(frozen=True)
class IdentityReport:
    relation_id: RelationId
    s1: QuantumState
    s2: QuantumState
    lam: int
    lhs: float
    rhs: float
    rel_residual: float
    verdict: str  # "PASS" | "FAIL"

    def to_json_dict(self) -> dict:
        """Record in the external schema (field order is part of the contract)."""
        return {
            "relation_id": self.relation_id.value,
            "pair": {
                "n1": self.s1.n, "two_j1": self.s1.two_j, "eps1": self.s1.eps,
                "n2": self.s2.n, "two_j2": self.s2.two_j, "eps2": self.s2.eps,
            },
            "lambda": self.lam,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rel_residual": self.rel_residual,
            "verdict": self.verdict,
        }


@lru_cache(maxsize=None)
def _wf(sys: CoulombSystem, s: QuantumState):
    return solve_radial(sys, s)


@lru_cache(maxsize=None)
def _elem(sys: CoulombSystem, s1: QuantumState, s2: QuantumState,
          kind: OperatorKind, power: int) -> float:
    return element_analytic(_wf(sys, s1), _wf(sys, s2), kind, power).value


# ---------------------------------------------------------------------------
# relation term tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Env:
    """Pair context every coefficient is written in terms of."""

    sys: CoulombSystem
    s1: QuantumState
    s2: QuantumState
    E1: float
    E2: float
    dE: float
    dminus: float
    dplus: float
    g: float
    m: float


def _env(sys, s1, s2) -> _Env:
    dp = delta_pair(s1, s2)
    return _Env(sys=sys, s1=s1, s2=s2, E1=energy(sys, s1), E2=energy(sys, s2),
                dE=energy_difference(sys, s2, s1), dminus=float(dp.minus),
                dplus=float(dp.plus), g=sys.g, m=sys.mass)


_K = OperatorKind


def _terms_eq6(v, lam):
    lhs = [(v.dE, _K.PLAIN, lam)]
    rhs = [(lam, _K.ALPHA, lam - 1), (v.dminus / 2, _K.ALPHABETA, lam - 1)]
    return lhs, rhs


def _terms_eq8(v, lam):
    # printed second-order hypervirial; beta d/dr on the spinor splits into
    # BETADERIV minus BETA(f/r) on reduced components
    lhs = [(v.dE * v.dE, _K.PLAIN, lam)]
    rhs = [
        (-v.dminus / 2, _K.BETA, lam - 2),
        (-lam * (lam - 1), _K.PLAIN, lam - 2),
        (-v.dminus / 2 * lam, _K.BETA, lam - 2),
        (-v.dminus, _K.BETADERIV, lam - 1),
        (v.dminus, _K.BETA, lam - 2),
        (v.dplus / 2 * lam, _K.BETA, lam - 2),
        (v.dminus ** 2 / 4, _K.PLAIN, lam - 2),
        (-2 * v.m * lam, _K.ALPHABETA, lam - 1),
        (-v.m * v.dminus, _K.ALPHA, lam - 1),
    ]
    return lhs, rhs


def _terms_eq9(v, lam):
    lhs = [((v.E2 + v.E1) * v.dE, _K.PLAIN, lam)]
    rhs = [
        (-2 * lam, _K.PLAIN, lam - 2),
        (v.dminus / 2, _K.BETA, lam - 2),
        (-lam * (lam - 1), _K.PLAIN, lam - 2),
        (-2 * lam, _K.DERIV, lam - 1),
        (2 * lam, _K.PLAIN, lam - 2),
        (v.dplus * v.dminus / 4, _K.PLAIN, lam - 2),
        (-2 * v.g * lam, _K.ALPHA, lam - 2),
        (-v.g * v.dminus, _K.ALPHABETA, lam - 2),
    ]
    return lhs, rhs


def _terms_eq10(v, lam):
    lhs = [((v.E2 + v.E1), _K.ALPHA, lam)]
    rhs = [
        (-2, _K.PLAIN, lam - 1),
        (-lam, _K.PLAIN, lam - 1),
        (-2, _K.DERIV, lam),
        (2, _K.PLAIN, lam - 1),
        (v.dminus / 2, _K.BETA, lam - 1),
        (-2 * v.g, _K.ALPHA, lam - 1),
    ]
    return lhs, rhs


def _terms_eq11(v, lam):
    lhs = [(v.dE, _K.ALPHA, lam)]
    rhs = [(-lam, _K.PLAIN, lam - 1), (v.dplus / 2, _K.BETA, lam - 1),
           (-2 * v.m, _K.ALPHABETA, lam)]
    return lhs, rhs


def _terms_eq12(v, lam):
    lhs = [((v.E2 + v.E1), _K.BETA, lam)]
    rhs = [(lam, _K.ALPHABETA, lam - 1), (v.dminus / 2, _K.ALPHA, lam - 1),
           (2 * v.m, _K.PLAIN, lam), (-2 * v.g, _K.BETA, lam - 1)]
    return lhs, rhs


def _terms_eq17(v, lam):
    if v.dminus == 0:
        raise DiagonalCase("EQ17 requires kappa1 != kappa2")
    Dl, Dl1 = _denominator_values(v.dE, v.dminus, v.m, float(lam))
    if min(abs(Dl), abs(Dl1)) < 1e-9 * v.m:
        raise SingularDenominator(f"EQ17 denominator ~ 0 at lam={lam}")
    c0, c1, c2, c3, d2, d3 = _cd_coefficient_values(
        v.E1, v.E2, v.dE, v.dminus, v.dplus, v.g, v.m, float(lam), Dl, Dl1)
    lhs = [(c0, _K.PLAIN, lam)]
    rhs = [(c1, _K.PLAIN, lam - 1), (c2, _K.PLAIN, lam - 2),
           (c3, _K.PLAIN, lam - 3), (d2, _K.BETA, lam - 2),
           (d3, _K.BETA, lam - 3)]
    return lhs, rhs


def _terms_eq20(v, lam):
    # the beta-track coefficients are denominator-free, so this relation is
    # well defined even for diagonal or degenerate pairs
    b0, b2, e0, e1, e2 = _beta_track_values(
        v.E1, v.E2, v.dE, v.dminus, v.dplus, v.g, v.m, float(lam))
    lhs = [(e0, _K.BETA, lam)]
    rhs = [(b0, _K.PLAIN, lam), (b2, _K.PLAIN, lam - 2),
           (e1, _K.BETA, lam - 1), (e2, _K.BETA, lam - 2)]
    return lhs, rhs


def _terms_eq22(v, lam):
    lhs = [(v.dE, _K.PLAIN, lam)]
    rhs = [(lam, _K.ALPHA, lam - 1)]
    return lhs, rhs


def _terms_eq23(v, lam):
    return _terms_eq11(v, lam)


def _terms_eq24(v, lam):
    lhs = [((v.E2 + v.E1), _K.BETA, lam)]
    rhs = [(lam, _K.ALPHABETA, lam - 1), (2 * v.m, _K.PLAIN, lam),
           (-2 * v.g, _K.BETA, lam - 1)]
    return lhs, rhs


def _terms_eq25(v, lam, corrected):
    lhs = [(v.dE * v.dE - 4 * v.m * v.m, _K.PLAIN, lam)]
    beta_lm1_coef = -4 * v.m * v.g if corrected else -4 * v.m
    rhs = [(lam * v.dplus / 2, _K.BETA, lam - 2),
           (beta_lm1_coef, _K.BETA, lam - 1),
           (-2 * v.m * (v.E2 + v.E1), _K.BETA, lam),
           (-lam * (lam - 1), _K.PLAIN, lam - 2)]
    return lhs, rhs


_GENERAL_RELATIONS = {
    RelationId.EQ6: _terms_eq6,
    RelationId.EQ8: _terms_eq8,
    RelationId.EQ9: _terms_eq9,
    RelationId.EQ10: _terms_eq10,
    RelationId.EQ11: _terms_eq11,
    RelationId.EQ12: _terms_eq12,
    RelationId.EQ17: _terms_eq17,
    RelationId.EQ20: _terms_eq20,
}

_DIAGONAL_RELATIONS = {
    RelationId.EQ22: _terms_eq22,
    RelationId.EQ23: _terms_eq23,
    RelationId.EQ24: _terms_eq24,
}


def _side_value(sys, s1, s2, terms):
    """(signed sum, L1 mass) of coef * element over the term list."""
    total = 0.0
    l1 = 0.0
    for coef, kind, power in terms:
        if coef == 0.0 or coef == 0:
            continue
        piece = coef * _elem(sys, s1, s2, kind, power)
        total += piece
        l1 += abs(piece)
    return total, l1


def _report(relation_id, sys, s1, s2, lam, lhs, rhs, scale=1.0) -> IdentityReport:
    """Score one relation.  PASS on relative residual <= REL_TOL, or, for
    sides that are near zero compared with the terms that formed them, on an
    absolute floor proportional to that term scale (the achievable accuracy
    of a cancelling sum).
    """
    scale = max(scale, 1.0)
    denom = max(abs(lhs), abs(rhs))
    rel = abs(lhs - rhs) / denom if denom > 0.0 else 0.0
    if rel <= REL_TOL:
        verdict = "PASS"
    elif (abs(lhs) < SMALL_SIDE * scale and abs(rhs) < SMALL_SIDE * scale
          and abs(lhs - rhs) <= ABS_TOL * scale):
        verdict = "PASS"
    else:
        verdict = "FAIL"
    return IdentityReport(relation_id=relation_id, s1=s1, s2=s2, lam=lam,
                          lhs=lhs, rhs=rhs, rel_residual=rel, verdict=verdict)


def relation_margin(sys, s1, s2, relation_id: RelationId, lam: int) -> float:
    """Smallest integrability margin over the relation's nonzero terms."""
    v = _env(sys, s1, s2)
    builder = _GENERAL_RELATIONS.get(relation_id) or _DIAGONAL_RELATIONS.get(relation_id)
    if builder is None:
        if relation_id in (RelationId.EQ25_PRINTED, RelationId.EQ25_CORRECTED):
            builder = lambda vv, ll: _terms_eq25(
                vv, ll, relation_id is RelationId.EQ25_CORRECTED)
        else:
            raise ValueError(f"no term table for {relation_id}")
    lhs, rhs = builder(v, lam)
    W = exponent_w(sys, s1) + exponent_w(sys, s2)
    margin = float("inf")
    for coef, kind, power in lhs + rhs:
        if coef == 0.0 or coef == 0:
            continue
        margin = min(margin, W + power + 1 - kind.convergence_shift)
    return margin


def audit_relation(sys: CoulombSystem, s1: QuantumState, s2: QuantumState,
                   relation_id: RelationId, lam: int) -> IdentityReport:
    """Audit one relation at one power for the ordered pair (s1 = ket, s2 = bra)."""
    v = _env(sys, s1, s2)
    diagonal = (s1.kappa == s2.kappa)
    if relation_id is RelationId.EQ8 and diagonal:
        raise DiagonalCase("EQ8 presupposes kappa1 != kappa2")
    if relation_id in _DIAGONAL_RELATIONS and not diagonal:
        raise DiagonalCase(f"{relation_id.value} requires kappa1 == kappa2")

    if relation_id in _GENERAL_RELATIONS:
        lhs_t, rhs_t = _GENERAL_RELATIONS[relation_id](v, lam)
    elif relation_id in _DIAGONAL_RELATIONS:
        lhs_t, rhs_t = _DIAGONAL_RELATIONS[relation_id](v, lam)
    elif relation_id in (RelationId.EQ25_PRINTED, RelationId.EQ25_CORRECTED):
        if not diagonal:
            raise DiagonalCase(f"{relation_id.value} requires kappa1 == kappa2")
        lhs_t, rhs_t = _terms_eq25(v, lam, relation_id is RelationId.EQ25_CORRECTED)
    elif relation_id in (RelationId.EQ26_PRINTED, RelationId.EQ26_CORRECTED):
        if not diagonal:
            raise DiagonalCase(f"{relation_id.value} requires kappa1 == kappa2")
        delta = 1.0 if s1.n == s2.n else 0.0
        lhs = (v.dE * v.dE - 4 * v.m * v.m) * delta
        coef = -4 * v.m * v.g if relation_id is RelationId.EQ26_CORRECTED else -4 * v.m
        rhs, scale = _side_value(sys, s1, s2,
                                 [(coef, _K.BETA, -1),
                                  (-2 * v.m * (v.E2 + v.E1), _K.BETA, 0)])
        return _report(relation_id, sys, s1, s2, 0, lhs, rhs, scale)
    elif relation_id is RelationId.EQ27:
        _require_fully_diagonal(s1, s2)
        lhs = v.m
        rhs, scale = _side_value(sys, s1, s1,
                                 [(v.g, _K.BETA, -1), (v.E1, _K.BETA, 0)])
        return _report(relation_id, sys, s1, s2, 0, lhs, rhs, scale)
    elif relation_id is RelationId.EQ28:
        _require_fully_diagonal(s1, s2)
        lhs = v.E1 * v.E1
        rhs = v.m * v.m - v.m * v.g * _elem(sys, s1, s1, _K.BETA, -1)
        return _report(relation_id, sys, s1, s2, 0, lhs, rhs)
    elif relation_id is RelationId.BETA_EXPECTATION:
        _require_fully_diagonal(s1, s2)
        lhs = _elem(sys, s1, s1, _K.BETA, 0)
        rhs = v.E1 / v.m
        return _report(relation_id, sys, s1, s2, 0, lhs, rhs)
    else:
        raise ValueError(f"unhandled relation {relation_id}")

    lhs, scale_l = _side_value(sys, s1, s2, lhs_t)
    rhs, scale_r = _side_value(sys, s1, s2, rhs_t)
    return _report(relation_id, sys, s1, s2, lam, lhs, rhs,
                   max(scale_l, scale_r))


def _require_fully_diagonal(s1, s2):
    if s1 != s2:
        raise DiagonalCase("relation is defined for the fully diagonal case")


def audit_first_hypervirial(sys, s1, s2, lam) -> IdentityReport:
    """First hypervirial: (E2-E1)<r^l> vs the alpha/alphabeta combination."""
    return audit_relation(sys, s1, s2, RelationId.EQ6, lam)


def audit_second_order(sys, s1, s2, lam) -> list:
    """Second-order relations at one power; EQ8 included only off-diagonally."""
    ids = [RelationId.EQ9, RelationId.EQ10, RelationId.EQ11, RelationId.EQ12]
    if s1.kappa != s2.kappa:
        ids.insert(0, RelationId.EQ8)
    return [audit_relation(sys, s1, s2, rid, lam) for rid in ids]


def audit_diagonal_starters(sys, s1, s2, lam) -> list:
    """Equal-kappa starting relations at one power."""
    return [audit_relation(sys, s1, s2, rid, lam)
            for rid in (RelationId.EQ22, RelationId.EQ23, RelationId.EQ24)]


def audit_ps_and_virial(sys, states) -> list:
    """Orthogonality-rule analogue (printed and corrected) plus virial forms."""
    reports = []
    states = list(states)
    for i, s1 in enumerate(states):
        for s2 in states[i + 1:]:
            if s1.kappa == s2.kappa and s1.n != s2.n:
                reports.append(audit_relation(sys, s1, s2,
                                              RelationId.EQ26_PRINTED, 0))
                reports.append(audit_relation(sys, s1, s2,
                                              RelationId.EQ26_CORRECTED, 0))
    for s in states:
        for rid in (RelationId.EQ27, RelationId.EQ28, RelationId.BETA_EXPECTATION):
            reports.append(audit_relation(sys, s, s, rid, 0))
    return reports


def standard_states(max_n: int = 4) -> list:
    """All bound states with n <= max_n, every (j, eps) branch."""
    out = []
    for n in range(1, max_n + 1):
        for two_j in range(1, 2 * n, 2):
            for eps in (-1, 1):
                if n == (two_j + 1) // 2 and eps == 1:
                    continue
                out.append(QuantumState(n=n, two_j=two_j, eps=eps))
    return out


#: margin below which grid audits skip a (relation, pair, power) combination;
#: keeps near-divergent integrals out of the default report
GRID_MARGIN = 0.1


def audit_grid(sys: CoulombSystem, states=None, lam_max: int = 4,
               tasks_only: bool = False):
    """Full audit over the state grid; deterministic ordering.

    Returns a sorted list of IdentityReport (or, with tasks_only, the task
    tuples for external parallel execution; task order equals report order).
    """
    if states is None:
        states = standard_states()
    tasks = []
    npairs = len(states)
    for i in range(npairs):
        for k in range(i, npairs):
            s1, s2 = states[i], states[k]
            diagonal = s1.kappa == s2.kappa
            for rid, builder in _GENERAL_RELATIONS.items():
                if rid is RelationId.EQ8 and diagonal:
                    continue
                if rid is RelationId.EQ17 and diagonal:
                    continue  # every EQ17 coefficient carries Delta^-; 0 = 0
                for lam in range(0, lam_max + 1):
                    try:
                        if relation_margin(sys, s1, s2, rid, lam) <= GRID_MARGIN:
                            continue
                    except (DiagonalCase, SingularDenominator):
                        continue
                    tasks.append((sys, s1, s2, rid, lam))
            if diagonal:
                for rid in (RelationId.EQ22, RelationId.EQ23, RelationId.EQ24,
                            RelationId.EQ25_PRINTED, RelationId.EQ25_CORRECTED):
                    for lam in range(0, lam_max + 1):
                        if relation_margin(sys, s1, s2, rid, lam) <= GRID_MARGIN:
                            continue
                        tasks.append((sys, s1, s2, rid, lam))
                if s1.n != s2.n:
                    tasks.append((sys, s1, s2, RelationId.EQ26_PRINTED, 0))
                    tasks.append((sys, s1, s2, RelationId.EQ26_CORRECTED, 0))
            if s1 == s2:
                for rid in (RelationId.EQ27, RelationId.EQ28,
                            RelationId.BETA_EXPECTATION):
                    tasks.append((sys, s1, s2, rid, 0))
    tasks.sort(key=_task_key)
    if tasks_only:
        return tasks
    return [audit_relation(*t) for t in tasks]


def _task_key(task):
    sys, s1, s2, rid, lam = task
    return (rid.value, s1.n, s1.two_j, s1.eps, s2.n, s2.two_j, s2.eps, lam)
