"""Batch command-line interface.

Subcommands: energy, element, ladder, audit.  All numeric output is
printed with 17 significant digits, fixed column order and LF line
endings, so identical configurations produce byte-identical files.  Exit
codes: 0 success, 1 computational failure, 2 usage error.

Half-integer j is transported as the integer 2j everywhere; states are
spelled n,two_j,eps and pairs ket:bra, e.g. --pair 1,1,-1:2,3,-1.

DIRAC_LADDER_THREADS caps worker threads for audit batches; results are
sorted before emission, so the thread count never changes output bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .errors import DiracLadderError
from .identities import audit_grid, audit_relation
from .oracle import Method, OperatorKind, element_analytic, element_quadrature
from .recurrence import ladder
from .states import CODATA_ALPHA, CoulombSystem, QuantumState
from .states import energy as state_energy

_USAGE_EXIT = 2
_COMPUTE_EXIT = 1


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _parse_state(text: str) -> QuantumState:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"state must be n,two_j,eps, got {text!r}")
    n, two_j, eps = (int(p) for p in parts)
    return QuantumState(n=n, two_j=two_j, eps=eps)


def _parse_pair(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"pair must be ket:bra, got {text!r}")
    return _parse_state(parts[0]), _parse_state(parts[1])


def _merged(args: argparse.Namespace, key: str, default=None):
    """Flag value if given, else config-file value, else default."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    if args._config and key in args._config:
        return args._config[key]
    return default


def _system(args) -> CoulombSystem:
    mass = _merged(args, "mass", 1.0)
    g = _merged(args, "g")
    if g is not None:
        return CoulombSystem.from_coupling(float(g), mass=float(mass))
    Z = _merged(args, "Z", 1)
    alpha = _merged(args, "alpha", CODATA_ALPHA)
    return CoulombSystem(Z=int(Z), alpha=float(alpha), mass=float(mass))


def _open_out(args):
    path = _merged(args, "out")
    if path is None:
        return sys.stdout, False
    return open(path, "w", newline="\n"), True


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_energy(args) -> int:
    sys_ = _system(args)
    states = []
    n = _merged(args, "n")
    if n is not None:
        two_j = _merged(args, "two_j")
        eps = _merged(args, "eps")
        if two_j is None or eps is None:
            print("energy: --n requires --two-j and --eps", file=sys.stderr)
            return _USAGE_EXIT
        states.append(QuantumState(n=int(n), two_j=int(two_j), eps=int(eps)))
    for text in (_merged(args, "state") or []):
        states.append(_parse_state(text))
    if not states:
        print("energy: give --n/--two-j/--eps or --state n,two_j,eps",
              file=sys.stderr)
        return _USAGE_EXIT
    out, close = _open_out(args)
    try:
        out.write("n,two_j,eps,E_over_m\n")
        for s in states:
            E = state_energy(sys_, s)
            out.write(f"{s.n},{s.two_j},{s.eps},{_fmt(E / sys_.mass)}\n")
    finally:
        if close:
            out.close()
    return 0


def _element_by_recurrence(sys_, ket, bra, op, lam):
    if op not in (OperatorKind.PLAIN, OperatorKind.BETA):
        raise ValueError("recurrence method produces plain/beta elements only")
    if lam != int(lam):
        raise ValueError("recurrence method needs an integer power")
    table = ladder(sys_, ket, bra, int(lam), int(lam))
    entry = table.entries[int(lam)]
    value = entry.plain if op is OperatorKind.PLAIN else entry.beta
    return value, entry.err_est


def cmd_element(args) -> int:
    sys_ = _system(args)
    pair = _merged(args, "pair")
    op_name = _merged(args, "op")
    lam = _merged(args, "lam")
    if pair is None or op_name is None or lam is None:
        print("element: --pair, --op and --lambda are required", file=sys.stderr)
        return _USAGE_EXIT
    try:
        ket, bra = _parse_pair(pair) if isinstance(pair, str) else pair
        op = OperatorKind(op_name)
    except ValueError as exc:
        print(f"element: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    lam = float(lam)
    method = _merged(args, "method", "analytic")
    rel_tol = float(_merged(args, "rel_tol", 1e-10))

    from .wavefunctions import solve_radial
    wf1 = solve_radial(sys_, ket)
    wf2 = solve_radial(sys_, bra)

    rows = []
    if method in ("analytic", "all"):
        el = element_analytic(wf1, wf2, op, lam)
        rows.append((Method.ANALYTIC.value, el.value, el.err_est))
    if method in ("quadrature", "all"):
        el = element_quadrature(wf1, wf2, op, lam=lam, rel_tol=rel_tol)
        rows.append((Method.QUADRATURE.value, el.value, el.err_est))
    if method in ("recurrence", "all"):
        value, err = _element_by_recurrence(sys_, ket, bra, op, lam)
        rows.append((Method.RECURRENCE.value, value, err))
    if not rows:
        print(f"element: unknown method {method!r}", file=sys.stderr)
        return _USAGE_EXIT

    out, close = _open_out(args)
    try:
        reference = rows[0][1]
        out.write("method,value,err_est,delta_vs_first\n")
        for name, value, err in rows:
            out.write(f"{name},{_fmt(value)},{_fmt(err)},{_fmt(value - reference)}\n")
    finally:
        if close:
            out.close()
    return 0


def cmd_ladder(args) -> int:
    sys_ = _system(args)
    pair = _merged(args, "pair")
    lmin = _merged(args, "lmin")
    lmax = _merged(args, "lmax")
    if pair is None or lmin is None or lmax is None:
        print("ladder: --pair, --lmin and --lmax are required", file=sys.stderr)
        return _USAGE_EXIT
    try:
        ket, bra = _parse_pair(pair) if isinstance(pair, str) else pair
    except ValueError as exc:
        print(f"ladder: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    table = ladder(sys_, ket, bra, int(lmin), int(lmax))
    out, close = _open_out(args)
    try:
        out.write("lambda,plain,beta,provenance,err_est\n")
        for lam, plain, beta, provenance, err in table.rows():
            out.write(f"{lam},{_fmt(plain)},{_fmt(beta)},{provenance},{_fmt(err)}\n")
    finally:
        if close:
            out.close()
    return 0


def _audit_json_line(report) -> str:
    d = report.to_json_dict()
    p = d["pair"]
    return ('{"relation_id": "%s", '
            '"pair": {"n1": %d, "two_j1": %d, "eps1": %d, '
            '"n2": %d, "two_j2": %d, "eps2": %d}, '
            '"lambda": %d, "lhs": %s, "rhs": %s, '
            '"rel_residual": %s, "verdict": "%s"}'
            % (d["relation_id"], p["n1"], p["two_j1"], p["eps1"],
               p["n2"], p["two_j2"], p["eps2"], d["lambda"],
               _fmt(d["lhs"]), _fmt(d["rhs"]), _fmt(d["rel_residual"]),
               d["verdict"]))


def cmd_audit(args) -> int:
    sys_ = _system(args)
    grid = _merged(args, "grid", "default")
    if grid != "default":
        print(f"audit: unknown grid {grid!r}", file=sys.stderr)
        return _USAGE_EXIT
    max_n = int(_merged(args, "max_n", 4))
    lam_max = int(_merged(args, "lam_max", 4))
    from .identities import standard_states
    tasks = audit_grid(sys_, states=standard_states(max_n), lam_max=lam_max,
                       tasks_only=True)

    threads = int(os.environ.get("DIRAC_LADDER_THREADS", "1"))
    failures = []

    def run(task):
        try:
            return audit_relation(*task)
        except DiracLadderError as exc:
            failures.append((task, exc))
            return None

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]
    reports = [r for r in results if r is not None]

    out, close = _open_out(args)
    try:
        out.write("[\n")
        for i, rep in enumerate(reports):
            comma = "," if i + 1 < len(reports) else ""
            out.write("  " + _audit_json_line(rep) + comma + "\n")
        out.write("]\n")
    finally:
        if close:
            out.close()

    if failures:
        print(f"audit: {len(failures)} task(s) failed; partial results written",
              file=sys.stderr)
        for task, exc in failures:
            _, s1, s2, rid, lam = task
            print(f"  {rid.value} pair {s1.n},{s1.two_j},{s1.eps}:"
                  f"{s2.n},{s2.two_j},{s2.eps} lambda={lam}: {exc}",
                  file=sys.stderr)
        return _COMPUTE_EXIT
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_system_flags(p):
    p.add_argument("--Z", type=int, help="nuclear charge (default 1)")
    p.add_argument("--alpha", type=float,
                   help="fine-structure constant (default CODATA)")
    p.add_argument("--g", type=float,
                   help="coupling Z*alpha set directly (overrides --Z/--alpha)")
    p.add_argument("--mass", type=float, help="electron mass (default 1)")
    p.add_argument("--config", help="JSON file with defaults; flags win")
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dirac-ladder",
        description="Relativistic hydrogenic radial matrix elements: "
                    "energies, dual-oracle elements, recurrence ladders, "
                    "identity audits.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy", help="bound-state energies")
    _add_system_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--two-j", dest="two_j", type=int)
    p.add_argument("--eps", type=int, choices=(-1, 1))
    p.add_argument("--state", action="append",
                   help="n,two_j,eps (repeatable)")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("element", help="single matrix element")
    _add_system_flags(p)
    p.add_argument("--pair", help="ket:bra as n,two_j,eps:n,two_j,eps")
    p.add_argument("--op", choices=[k.value for k in OperatorKind])
    p.add_argument("--lambda", dest="lam", type=float, help="power of r")
    p.add_argument("--method",
                   choices=("analytic", "quadrature", "recurrence", "all"))
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.set_defaults(func=cmd_element)

    p = sub.add_parser("ladder", help="recurrence ladder table")
    _add_system_flags(p)
    p.add_argument("--pair", help="ket:bra as n,two_j,eps:n,two_j,eps")
    p.add_argument("--lmin", type=int)
    p.add_argument("--lmax", type=int)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("audit", help="identity audit report (JSON)")
    _add_system_flags(p)
    p.add_argument("--grid", help="grid name (default: default)")
    p.add_argument("--max-n", dest="max_n", type=int,
                   help="largest principal quantum number (default 4)")
    p.add_argument("--lam-max", dest="lam_max", type=int,
                   help="largest power audited (default 4)")
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args._config = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                args._config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"cannot read config: {exc}", file=sys.stderr)
            return _USAGE_EXIT
    try:
        return args.func(args)
    except DiracLadderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _COMPUTE_EXIT
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
