"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 numerical failure,
3 verification failure.  CSV goes to standard output (or ``--out``),
notices and warnings to standard error.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import ExplosionError, NotAnEigenvalueError, QuantumGraphError, SingularityError
from .evolution import GREENS, SCHRODINGER, build_bond_scattering, build_propagator, evolution_map
from .io import GraphSpecError, load_graph_spec
from .orbits import counting_function, enumerate_orbits
from .scattering import greens_function, solve_families
from .similarity import eigen_match, specht_check
from .spectrum import ScanConfig, find_spectrum
from .vertex import sigma_of_k

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3
VERIFY_TOL = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    # repr gives the shortest round-trip decimal
    return repr(float(x))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("QG_THREADS", "1")))
    except ValueError:
        return 1


def _sweep(fn, ks):
    workers = _threads()
    if workers == 1:
        return [fn(k) for k in ks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, ks))


def _note(msg):
    print(msg, file=sys.stderr)


def _write_csv(args, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _emit(args, buf.getvalue())


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid(args):
    if not (0 < args.kmin < args.kmax):
        raise UsageError("need 0 < --kmin < --kmax")
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    return np.linspace(args.kmin, args.kmax, args.samples)


def _closed(spec, command):
    if spec.graph.leads is not None:
        _note(f"{command}: leads in {spec.path} are ignored (closed graph)")
    return spec.graph.closed()


def _open(spec):
    if spec.graph.leads is None:
        raise UsageError(f"{spec.path} declares no leads; scattering needs entrance and exit")
    return spec.graph


def cmd_spectrum(args):
    spec = load_graph_spec(args.graph)
    g = _closed(spec, "spectrum")
    _grid(args)
    cfg = ScanConfig(args.kmin, args.kmax, args.samples, refine_tolerance=args.tol)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        points = find_spectrum(g, spec.bcs, cfg)
    for w in caught:
        _note(f"warning: {w.message}")
    _write_csv(args, ["k", "multiplicity"], [[_fmt(p.k), p.multiplicity] for p in points])
    return EXIT_OK


def cmd_scatter(args):
    spec = load_graph_spec(args.graph)
    g = _open(spec)
    ks = _grid(args)
    results = _sweep(lambda k: solve_families(g, spec.bcs, k), ks)
    rows = [[_fmt(r.k), _fmt(r.T.real), _fmt(r.T.imag), _fmt(r.transmission), _fmt(r.reflection), _fmt(r.flux)]
            for r in results]
    _write_csv(args, ["k", "re_T", "im_T", "T2", "R2", "flux"], rows)
    return EXIT_OK


def cmd_trace(args):
    spec = load_graph_spec(args.graph)
    g = _closed(spec, "trace")
    ks = _grid(args)
    if args.numax < 0:
        raise UsageError("--numax must be >= 0")
    sf = counting_function(g, spec.bcs, ks, args.numax)
    if sf.N_smooth is None:
        _note("trace: no built-in smooth term for these conditions; N_smooth left empty, "
              "N_total is the oscillatory part only")
    rows = []
    for idx, k in enumerate(ks):
        smooth = "" if sf.N_smooth is None else _fmt(sf.N_smooth[idx])
        rows.append([_fmt(k), smooth, _fmt(sf.N[idx]), _fmt(sf.d_smoothed[idx])])
    _write_csv(args, ["k", "N_smooth", "N_total", "d_smoothed"], rows)
    return EXIT_OK


def cmd_orbits(args):
    spec = load_graph_spec(args.graph)
    g = _closed(spec, "orbits")
    if args.max_period < 0:
        raise UsageError("--max-period must be >= 0")
    k = args.k
    if k is None and not all(bc.k_independent for bc in spec.bcs.values()):
        raise UsageError("some vertex conditions depend on k; pass --k")
    if k is not None and k <= 0:
        raise UsageError("--k must be > 0")
    orbits = []
    for nu in range(1, args.max_period + 1):
        orbits += enumerate_orbits(g, spec.bcs, k, nu)
    orbits.sort(key=lambda o: (o.period, o.length, o.bonds))
    rows = [[o.period, _fmt(o.length), _fmt(o.amplitude.real), _fmt(o.amplitude.imag), " ".join(o.labels)]
            for o in orbits]
    _write_csv(args, ["period", "length", "re_W", "im_W", "bond_sequence"], rows)
    return EXIT_OK


def cmd_greens(args):
    spec = load_graph_spec(args.graph)
    g = _open(spec)
    if args.k <= 0:
        raise UsageError("--k must be > 0")
    if args.xi < 0 or args.xf < 0:
        raise UsageError("--xi and --xf must be >= 0")
    G = greens_function(g, spec.bcs, args.k, args.xi, args.xf, spec.units)
    _emit(args, f"{_fmt(G.real)} {_fmt(G.imag)}\n")
    return EXIT_OK


def _is_small_star(g):
    degs = sorted(g.topology.degrees)
    n = g.n
    return 2 <= n <= 5 and (n == 2 or (degs[-1] == n - 1 and all(d == 1 for d in degs[:-1])))


def cmd_verify(args):
    spec = load_graph_spec(args.graph)
    g = _closed(spec, "verify")
    k = args.k
    if k <= 0:
        raise UsageError("--k must be > 0")
    lines = []
    ok = True

    def check(name, value, tol):
        nonlocal ok
        passed = value < tol
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'}  {name:<46s} {value:.3e}  (tol {tol:.0e})")

    for v in g.topology.vertices:
        sigma = sigma_of_k(spec.bcs[v], g.topology.degree(v), k, vertex=v)
        check(f"unitarity sigma_{v}", sigma.unitarity_residual(), VERIFY_TOL)
    S = build_bond_scattering(g, spec.bcs, k)
    check("unitarity S", S.unitarity_residual(), VERIFY_TOL)
    D = build_propagator(g, k)
    check("unitarity D", float(np.max(np.abs(np.abs(D.z) - 1))), VERIFY_TOL)
    US = evolution_map(g, spec.bcs, k, SCHRODINGER)
    UG = evolution_map(g, spec.bcs, k, GREENS)
    check("unitarity U_S = S D", US.unitarity_residual(), VERIFY_TOL)
    check("unitarity U_G = D S", UG.unitarity_residual(), VERIFY_TOL)
    eye = np.eye(US.matrix.shape[0])
    zs = np.linalg.det(eye - US.matrix)
    zg = np.linalg.det(eye - UG.matrix)
    check("secular det |zeta_S - zeta_G|/(1+|zeta_S|)", abs(zs - zg) / (1 + abs(zs)), VERIFY_TOL)
    em = eigen_match(US.matrix, UG.matrix, VERIFY_TOL)
    check("eigenvalues U_S vs U_G", em.residual, VERIFY_TOL)
    lam, vecs = np.linalg.eig(US.matrix)
    Da = UG.D @ vecs
    check("D a is an eigenvector of U_G", float(np.max(np.abs(UG.matrix @ Da - Da * lam))), VERIFY_TOL)
    lines.append(f"{'PASS' if em.degeneracy_match else 'FAIL'}  degeneracy structure {em.clusters_a}")
    ok &= em.degeneracy_match
    if args.specht:
        report = specht_check(US.matrix, UG.matrix)
        passed = report.verdict == "similar"
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'}  Specht word traces: {report.summary()}")
        if _is_small_star(g):
            lines.append("scope: star graph with n <= 5 vertices")
        else:
            lines.append("scope: outside the n <= 5 star family; the result is supporting evidence, not proof")
    lines.append(f"overall: {'PASS' if ok else 'FAIL'}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgraph", description="Spectra, scattering and trace formulas of quantum graphs.")
    parser.add_argument("--version", action="version", version=f"qgraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, grid=False):
        p.add_argument("--graph", required=True, metavar="FILE", help="graph description (YAML)")
        p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
        if grid:
            p.add_argument("--kmin", type=float, required=True)
            p.add_argument("--kmax", type=float, required=True)
            p.add_argument("--samples", type=int, required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of the closed graph")
    common(p, grid=True)
    p.add_argument("--tol", type=float, default=1e-10, help="root tolerance in k")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("scatter", help="transmission/reflection sweep between the leads")
    common(p, grid=True)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("trace", help="trace-formula counting function and density of states")
    common(p, grid=True)
    p.add_argument("--numax", type=int, default=100)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="check unitarity and the equivalence of the two evolution maps")
    common(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--specht", action="store_true", help="also run the Specht word-trace test")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("orbits", help="periodic orbits up to a given period")
    common(p)
    p.add_argument("--max-period", type=int, required=True)
    p.add_argument("--k", type=float, default=None, help="needed for k-dependent conditions")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("greens", help="Green's function between the two leads")
    common(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--xf", type=float, default=0.0)
    p.set_defaults(func=cmd_greens)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphSpecError, UsageError) as exc:
        print(f"qgraph {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularityError, NotAnEigenvalueError, ExplosionError) as exc:
        print(f"qgraph {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (QuantumGraphError, ValueError) as exc:
        print(f"qgraph {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
