"""Command-line front end: ``pstnet catalog|solve|verify|sweep|ingest``."""
from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import catalog as cat
from .dynamics import DEFAULT_ORACLE_LIMIT, PST_THRESHOLD, fidelity_report, sweep
from .errors import (
    GraphError,
    InfeasibleError,
    ModulusMismatch,
    NotAntipodal,
    NotDistanceRegular,
    NumericalInconsistency,
    PSTError,
    UnknownName,
)
from .graphs import check_distance_regular, ingest_edge_list
from .network import Network
from .records import dumps, fmt15, fmt_angle
from .scheme import parse_intersection_array
from .solver import CouplingSolution, feasibility, search_branches

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_INCONSISTENT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; usage errors here exit with 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- helpers ---------------------------------------------------------------------

def _network(args, with_graph: bool = True) -> tuple[Network, Optional[cat.CatalogEntry]]:
    if bool(getattr(args, "name", None)) == bool(getattr(args, "array", None)):
        raise UsageError("give exactly one of --name or --array")
    if args.array:
        try:
            arr = parse_intersection_array(args.array)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return Network.from_array(arr), None
    name = args.name
    entry = None
    if ":" not in name:
        entries = cat.load_catalog()
        entry = entries.get(name)
        return cat.resolve(name, entries, with_graph=with_graph), entry
    return cat.resolve(name, with_graph=with_graph), entry


def _parse_J(text: str, d: int) -> np.ndarray:
    try:
        J = np.array([cat.eval_expr(tok) for tok in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"--J: {exc}") from None
    if len(J) != d + 1:
        raise UsageError(f"--J needs {d + 1} comma-separated values, got {len(J)}")
    return J


def _vec(vals, as_pi: bool = False) -> str:
    return "(" + ", ".join(fmt_angle(v, as_pi) for v in vals) + ")"


def _modulus_report(exc: ModulusMismatch, net: Network, out) -> None:
    print(f"infeasible: |P_d(x_k)| != 1 at k = {exc.k}", file=out)
    print("k  x_k  |P_d(x_k)|", file=out)
    for k, (x, m) in enumerate(zip(net.spectrum.x, exc.table)):
        print(f"{k}  {fmt15(x)}  {fmt15(m)}", file=out)


def _feasible_signs(net: Network, out) -> Optional[tuple[int, ...]]:
    try:
        return feasibility(net.spectrum, net.params)
    except NotAntipodal as exc:
        print(f"infeasible: not antipodal (kappa_d = {exc.kappa_d} > 1)", file=out)
    except ModulusMismatch as exc:
        _modulus_report(exc, net, out)
    return None


def _header(net: Network, out) -> None:
    print(f"network: {net.name}", file=out)
    print(f"array: {net.array}", file=out)
    print(f"d: {net.d}  v: {net.v}", file=out)


def _solution_line(rank: int, sol: CouplingSolution, as_pi: bool) -> str:
    return (f"[{rank}] l = {tuple(sol.l)}  zeros = {sol.zero_count}  range = {sol.coupling_range}"
            f"  residual = {fmt15(sol.residual)}\n    J = {_vec(sol.J, as_pi)}")


def _erratum_lines(entry: cat.CatalogEntry, net: Network, s) -> list[str]:
    lines = []
    for chk in cat.compare_printed(entry, net, s):
        tag = "OK" if chk.ok else "ERRATUM"
        lines.append(f"{tag} {chk.what}: {chk.detail}")
    for flag in entry.flags:
        lines.append(f"FLAG {flag['id']}: {flag.get('note', '')}")
    return lines


# --- commands --------------------------------------------------------------------

def cmd_catalog(args, out) -> int:
    entries = cat.load_catalog()
    if args.action == "list":
        width = max(len(n) for n in entries)
        for name, e in entries.items():
            print(f"{name:<{width}}  {e.array}  {e.title}", file=out)
        print(f"{'cycle:<m>':<{width}}  even cycle with 2m vertices (generator)", file=out)
        print(f"{'cube:<d>':<{width}}  binary hypercube H(d,2) (generator)", file=out)
        return EXIT_OK
    if not args.target:
        raise UsageError("catalog show needs a name")
    net = cat.resolve(args.target, entries, with_graph=False)
    entry = entries.get(args.target)
    if entry is not None:
        print(f"title: {entry.title}", file=out)
    _header(net, out)
    p = net.params
    print(f"kappa: {p.kappa}", file=out)
    print(f"alpha: {p.alpha}", file=out)
    print(f"omega: {p.omega}", file=out)
    print(f"antipodal: {'yes' if p.antipodal else 'no'}", file=out)
    for i in range(2, net.d + 1):
        print(f"P_{i}(x) = {net.polys.P[i]}", file=out)
    print(f"stieltjes: ({net.polys.Q1[net.d]}) / ({net.polys.Q[net.d + 1]})", file=out)
    print("spectrum: k  x_k  gamma_k  multiplicity", file=out)
    for k, (x, g, m) in enumerate(zip(net.spectrum.x, net.spectrum.gamma, net.spectrum.m)):
        x = 0.0 if abs(x) < 1e-12 * net.params.kappa[1] else x
        print(f"  {k}  {fmt15(x)}  {fmt15(g)}  {int(round(m))}", file=out)
    if entry is not None:
        s = None
        if p.antipodal:
            try:
                s = feasibility(net.spectrum, p)
            except InfeasibleError:
                s = None
        for line in _erratum_lines(entry, net, s):
            print(line, file=out)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    net, _ = _network(args, with_graph=False)
    _header(net, out)
    s = _feasible_signs(net, out)
    if s is None:
        return EXIT_INFEASIBLE
    print(f"s: {s}", file=out)
    sols = search_branches(net.spectrum, s, theta=args.theta, t0=args.t0, depth=args.branch_depth)
    shown = sols if args.top <= 0 else sols[: args.top]
    print(f"theta: {fmt15(args.theta)}  t0: {fmt15(args.t0)}  branch depth: {args.branch_depth}"
          f"  solutions: {len(sols)} (showing {len(shown)})", file=out)
    for r, sol in enumerate(shown, start=1):
        print(_solution_line(r, sol, args.pi), file=out)
    if args.out:
        doc = {"network": net.name, "array": str(net.array), "v": net.v, "d": net.d,
               "solutions": [sol.to_record(net.name, net.v) for sol in shown]}
        Path(args.out).write_text(dumps(doc))
    return EXIT_OK


def _couplings(args, net: Network, out) -> Optional[np.ndarray]:
    if args.J:
        return _parse_J(args.J, net.d)
    s = _feasible_signs(net, out)
    if s is None:
        return None
    top = search_branches(net.spectrum, s, theta=args.theta, t0=args.t0, depth=args.branch_depth)[0]
    return np.asarray(top.J)


def cmd_verify(args, out) -> int:
    net, entry = _network(args)
    _header(net, out)
    J = _couplings(args, net, out)
    if J is None:
        return EXIT_INFEASIBLE
    print(f"J: {_vec(J, args.pi)}", file=out)
    rep = fidelity_report(net, J, theta=args.theta, t0=args.t0, oracle_limit=args.oracle_limit)
    print(f"t0: {fmt15(args.t0)}  theta: {fmt15(args.theta)}", file=out)
    for eng, val in rep.abs_fd.items():
        print(f"engine {eng}: |f_{net.d}(t0)| = {fmt15(val)}", file=out)
    for eng, why in rep.engines_skipped.items():
        print(f"engine {eng}: skipped ({why})", file=out)
    print(f"max engine deviation: {fmt15(rep.max_deviation)}", file=out)
    print(f"transfer phase: {fmt15(rep.phase)}  expected theta - c t0: {fmt15(rep.expected_phase)}", file=out)
    if entry is not None and net.params.antipodal:
        try:
            s = feasibility(net.spectrum, net.params)
        except InfeasibleError:
            s = None
        for line in _erratum_lines(entry, net, s):
            if not line.startswith("OK"):
                print(line, file=out)
    if args.out:
        Path(args.out).write_text(dumps({**rep.to_record(), "J": J}))
    verdict = "certified" if rep.certified else f"NOT certified (threshold 1 - {PST_THRESHOLD:g})"
    print(f"verdict: {verdict}", file=out)
    return EXIT_OK if rep.certified else EXIT_INFEASIBLE


def cmd_sweep(args, out) -> int:
    net, _ = _network(args, with_graph=False)
    J = _couplings(args, net, sys.stderr)
    if J is None:
        return EXIT_INFEASIBLE
    t_max = args.t_max if args.t_max is not None else 2.0 * args.t0
    rows = sweep(net, J, t_max, args.samples)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "abs_f_d", "arg_f_d", "abs_f_0"])
    for row in rows:
        w.writerow([fmt15(v) for v in row])
    if args.out:
        Path(args.out).write_text(buf.getvalue())
        print(f"wrote {len(rows)} rows to {args.out}", file=out)
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_ingest(args, out) -> int:
    try:
        text = Path(args.edges).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.edges}: {exc.strerror}") from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        g = ingest_edge_list(text, name=Path(args.edges).stem)
    for w in caught:
        print(f"warning: {w.message}", file=out)
    print(f"vertices: {g.n}  edges: {len(g.edges())}", file=out)
    try:
        arr = check_distance_regular(g)
    except NotDistanceRegular as exc:
        print(f"not distance-regular: {exc}", file=out)
        return EXIT_INFEASIBLE
    print(f"array: {arr}", file=out)
    net = Network.from_array(arr, name=g.name or "", graph=g)
    kd = net.params.kappa[-1]
    if kd != 1:
        print(f"antipodal: no (kappa_{net.d} = {kd} > 1); PST pipeline declined", file=out)
        return EXIT_INFEASIBLE
    print("antipodal: yes", file=out)
    s = _feasible_signs(net, out)
    if s is None:
        return EXIT_INFEASIBLE
    print(f"feasible: yes  s = {s}", file=out)
    return EXIT_OK


# --- parser ----------------------------------------------------------------------

def _add_target(p, required_J: bool = False) -> None:
    p.add_argument("--name", help="catalog name, cycle:<m> or cube:<d>")
    p.add_argument("--array", help='intersection array "b0,...;c1,..."')
    p.add_argument("--theta", type=float, default=0.0, help="target transfer phase (default 0)")
    p.add_argument("--t0", type=float, default=1.0, help="transfer time (default 1)")
    p.add_argument("--branch-depth", type=int, default=1, help="branch integers searched in [-L, L] (default 1)")
    p.add_argument("--pi", action="store_true", help="render angles as multiples of pi when exact")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pstnet", description="Perfect state transfer design on distance-regular networks.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("catalog", help="list or show catalog entries")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("target", nargs="?")

    p = sub.add_parser("solve", help="solve the phase equations for the couplings")
    _add_target(p)
    p.add_argument("--top", type=int, default=10, help="number of ranked solutions to print (0 = all)")
    p.add_argument("--out", help="write solutions as JSON")

    p = sub.add_parser("verify", help="certify transfer with every applicable engine")
    _add_target(p)
    p.add_argument("--J", help="comma-separated couplings J_0..J_d (expressions like -pi/4 allowed)")
    p.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT)
    p.add_argument("--out", help="write the report as JSON")

    p = sub.add_parser("sweep", help="fidelity curve as CSV")
    _add_target(p)
    p.add_argument("--J", help="comma-separated couplings (default: top solved solution)")
    p.add_argument("--t-max", type=float, default=None, help="end time (default 2 t0)")
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", help="CSV path (default stdout)")

    p = sub.add_parser("ingest", help="detect distance-regularity of an edge list")
    p.add_argument("--edges", required=True)
    return ap


COMMANDS = {"catalog": cmd_catalog, "solve": cmd_solve, "verify": cmd_verify,
            "sweep": cmd_sweep, "ingest": cmd_ingest}


def _glue_values(argv: Sequence[str]) -> list[str]:
    # values like "-0.78,0,0.78" look like options to argparse; attach them to their flag
    argv = list(argv)
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--J", "--array", "--theta") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    argv = _glue_values(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "t0", 1.0) <= 0:
            raise UsageError("--t0 must be positive")
        if getattr(args, "branch_depth", 0) < 0:
            raise UsageError("--branch-depth must be nonnegative")
        if getattr(args, "samples", 1) < 1:
            raise UsageError("--samples must be at least 1")
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"pstnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownName as exc:
        print(f"pstnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalInconsistency as exc:
        print(f"pstnet: numerical inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (GraphError, InfeasibleError) as exc:
        print(f"pstnet: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except PSTError as exc:
        print(f"pstnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
