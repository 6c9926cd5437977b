"""Command line interface: ``quadembed verify|eig|embed|sweep|examples``."""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import fixtures
from .core import StructureClass
from .errors import (EXIT_INTERNAL, EXIT_OK, EXIT_PARSE, EXIT_VERIFY, ParseError, QuadEmbedError,
                     UnknownParameter, exit_code_for)
from .invariant import structure_check, structure_deviations
from .io import (FORMATS, format_complex, load_problem, parse_problem, read_poly, render_report,
                 to_jsonable, write_matrix)
from .seep import METHODS, solve, spillover_check
from .spectrum import backward_error, quad_eig

log = logging.getLogger("quadembed")


def _problem(arg):
    if arg in fixtures.BUILTIN:
        return parse_problem(fixtures.BUILTIN[arg]())
    return load_problem(arg)


def cmd_verify(args) -> int:
    Q = read_poly(args.M, args.D, args.K)
    try:
        cls = StructureClass.from_name(args.cls, args.field)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    dev = structure_deviations(Q, cls)
    ok = structure_check(Q, cls, args.tol)
    print(f"class              {cls}")
    for name, d in zip("MDK", dev):
        print(f"deviation {name}        {d:.3e}")
    print(f"regular (M nonsingular) {Q.is_regular()}")
    print(f"structure_check    {'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_eig(args) -> int:
    Q = read_poly(args.M, args.D, args.K)
    lam, X = quad_eig(Q)
    print(f"{'#':>3}  {'eigenvalue':>28}  {'|lambda|':>12}  backward error")
    for j, (l, x) in enumerate(zip(lam, X.T)):
        print(f"{j:>3}  {format_complex(l):>28}  {abs(l):>12.6g}  {backward_error(Q, l, x):.2e}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_matrix(out / "eigenvalues", lam[:, None], args.format)
        write_matrix(out / "eigenvectors", X, args.format)
    return EXIT_OK


def _solve_problem(prob, method, seed, max_retries=10, check_spillover=False):
    method = method or prob.method
    delta, report = solve(prob.Q, prob.spec, method, seed=seed, max_retries=max_retries)
    Qn = prob.Q.perturbed(delta)
    if check_spillover:
        report.update(spillover_check(prob.Q, Qn, prob.spec, prob.spillover_tol))
    return delta, Qn, report


def cmd_embed(args) -> int:
    prob = _problem(args.problem)
    delta, Qn, report = _solve_problem(prob, args.method, args.seed,
                                       check_spillover=args.check_spillover)
    text = render_report(report)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, A in (("dM", delta.dM), ("dD", delta.dD), ("dK", delta.dK),
                        ("M", Qn.M), ("D", Qn.D), ("K", Qn.K)):
            write_matrix(out / name, A, args.format)
        (out / "report.json").write_text(json.dumps(to_jsonable(report), indent=2))
        (out / "report.txt").write_text(text + "\n")
    if args.check_spillover and not report["ok"]:
        print(f"spillover check failed: spectrum mismatch {report['spectrum_mismatch']:.3e}",
              file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _parse_range(text):
    try:
        name, rng = text.split("=", 1)
        start, stop, n = rng.split(":")
        return name.strip(), np.linspace(float(start), float(stop), int(n))
    except ValueError as exc:
        raise ParseError(f"bad --param {text!r}; expected name=start:stop:n") from exc


def sweep(prob, params, method=None, seed=0):
    """Yield one result dict per grid point (product of ``params`` in order)."""
    names = [n for n, _ in params]
    prob.spec.with_params({n: 0.0 for n in names})  # fail early on unknown names
    for point in itertools.product(*(v for _, v in params)):
        values = dict(zip(names, (float(p) for p in point)))
        sub = type(prob)(prob.Q, prob.spec.with_params(values), prob.method, prob.name,
                         prob.spillover_tol)
        row = dict(values)
        try:
            _, _, rep = _solve_problem(sub, method, seed, max_retries=0, check_spillover=True)
            row.update(RR_f=rep["RR_f"], RR_a=rep["RR_a"], structure_ok=rep["structure_ok"],
                       status="ok")
        except QuadEmbedError as exc:
            row.update(RR_f=float("nan"), RR_a=float("nan"), structure_ok=False,
                       status=type(exc).__name__)
        yield row


def cmd_sweep(args) -> int:
    prob = _problem(args.problem)
    params = [_parse_range(p) for p in args.param]
    if not params:
        raise ParseError("sweep needs at least one --param")
    names = [n for n, _ in params]
    fields = names + ["RR_f", "RR_a", "structure_ok", "status"]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for row in sweep(prob, params, args.method, args.seed):
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_examples(args) -> int:
    for name, make in fixtures.BUILTIN.items():
        doc = make()
        print(f"{name:<12} class={doc['class']:<10} n={len(doc['matrices']['K'])} "
              f"groups={len(doc['groups'])}")
        if args.write:
            out = Path(args.write)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{name}.json").write_text(json.dumps(doc, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadembed",
                                description="Structure-preserving eigenvalue embedding for "
                                            "quadratic matrix polynomials.")
    p.add_argument("--tol", type=float, default=1e-9, help="structure check tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed for parameter redraws")
    p.add_argument("--format", choices=FORMATS, default="mm", help="matrix output format")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check the (star, eps1, eps2) structure of M, D, K")
    v.add_argument("M")
    v.add_argument("D")
    v.add_argument("K")
    v.add_argument("--class", dest="cls", required=True, help="e.g. symmetric, hermitian, t-even")
    v.add_argument("--field", choices=("real", "complex"), default="real")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eig", help="list all eigenpairs via linearization")
    e.add_argument("M")
    e.add_argument("D")
    e.add_argument("K")
    e.add_argument("--out", help="directory for eigenvalue/eigenvector files")
    e.set_defaults(func=cmd_eig)

    m = sub.add_parser("embed", help="solve an embedding problem")
    m.add_argument("problem", help="problem JSON file or a built-in example name")
    m.add_argument("--method", choices=METHODS, default=None)
    m.add_argument("--out", help="output directory")
    m.add_argument("--check-spillover", action="store_true",
                   help="recompute the updated spectrum and compare with aimed + fixed")
    m.set_defaults(func=cmd_embed)

    s = sub.add_parser("sweep", help="residuals over a grid of free parameters (CSV)")
    s.add_argument("problem")
    s.add_argument("--param", action="append", default=[], help="name=start:stop:n, e.g. a2=-0.04:0.05:10")
    s.add_argument("--method", choices=METHODS, default=None)
    s.add_argument("--out", help="CSV file (default stdout)")
    s.set_defaults(func=cmd_sweep)

    x = sub.add_parser("examples", help="list (and optionally write) built-in problems")
    x.add_argument("--write", help="directory to write problem JSON files to")
    x.set_defaults(func=cmd_examples)
    return p


def main(argv=None) -> int:
    level = os.environ.get("QUADEMBED_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    try:
        return args.func(args)
    except (QuadEmbedError, UnknownParameter) as exc:
        code = exit_code_for(exc)
        print(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}),
              file=sys.stderr)
        return code
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(json.dumps({"error": type(exc).__name__, "message": str(exc),
                          "exit_code": EXIT_INTERNAL}), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
