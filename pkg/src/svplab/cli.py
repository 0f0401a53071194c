"""Command-line front end: ``svplab {gen,solve,exponents,bench,fit}``.

Exit status is 0 on success, 1 on a parameter error (including bad usage)
and 2 on a runtime failure of a solver.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys

from svplab import bench
from svplab import complexity as cx
from svplab.errors import (
    InsufficientSampleError,
    OracleLimitError,
    ParameterError,
)
from svplab.gauss import DEFAULT_COLLISIONS
from svplab.lattice import format_basis, lll_reduce, read_basis, write_basis
from svplab.ps import DEFAULT_BIGR, DEFAULT_XI

EXIT_OK, EXIT_PARAM, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def _cmd_gen(args) -> int:
    basis = bench.gen_lattice(args.dim, args.bits, args.seed)
    if args.out:
        write_basis(basis, args.out)
    else:
        sys.stdout.write(format_basis(basis))
    return EXIT_OK


def _cmd_solve(args) -> int:
    basis = lll_reduce(read_basis(args.basis))
    res = bench.solve(
        basis,
        args.algo,
        args.engine,
        args.seed,
        pick=args.pick,
        gamma=args.gamma,
        collisions=args.collisions,
        xi=args.xi,
        bigr=args.bigr,
        mu_factor=args.mu_factor,
        attempts=args.attempts,
    )
    led = res.ledger
    if res.vector is None:
        print("found: none")
    else:
        print("found: " + " ".join(str(int(x)) for x in res.vector.cart))
        print(f"norm_sq: {res.vector.norm_sq}")
        print(f"norm: {res.vector.norm:.6f}")
    print(f"engine: {args.engine}")
    print(f"charged_queries: {led.charged_queries}")
    print(f"predicate_evals: {led.predicate_evals}")
    print(f"invocations: {led.invocations}")
    for key, val in res.detail.items():
        print(f"{key}: {val}")
    return EXIT_OK if res.vector is not None else EXIT_RUNTIME


def _print_reports(reports, fmt: str) -> None:
    if fmt == "csv":
        w = csv.writer(sys.stdout)
        w.writerow(["model", "xi", "bigr", "time_exp", "space_exp", "components"])
        for r in reports:
            comps = ";".join(f"{k}={v:.6f}" for k, v in r.components.items())
            w.writerow([r.model.value, r.xi, r.bigR, f"{r.time_exp:.6f}", f"{r.space_exp:.6f}", comps])
        return
    for r in reports:
        print(f"model: {r.model.value}")
        print(f"xi: {r.xi:.6f}  R: {r.bigR:.6f}  c_t form: {r.ct_form}")
        print(f"time exponent: {r.time_exp:.6f}")
        print(f"space exponent: {r.space_exp:.6f}")
        for k, v in r.components.items():
            print(f"  {k}: {v:.6f}")


def _cmd_exponents(args) -> int:
    if args.table1:
        print(cx.table1_report())
        print(cx.discrepancy_note())
        return EXIT_OK
    if args.optimize:
        form = args.ct_form or "corrected"
        _, _, rep = cx.optimize_exponents(args.model, args.objective, form)
    else:
        xi = DEFAULT_XI if args.xi is None else args.xi
        bigr = DEFAULT_BIGR if args.bigr is None else args.bigr
        if args.xi is None and args.bigr is None:
            xi, bigr = cx.QUOTED_POINTS[cx.Model(args.model)]
        rep = cx.ps_exponents(xi, bigr, args.model, args.ct_form or "printed")
    _print_reports([rep], args.format)
    if rep.model is cx.Model.QUANTUM and args.format == "text":
        print(cx.discrepancy_note())
    return EXIT_OK


def _cmd_bench(args) -> int:
    config = bench.load_config(args.config)
    records = bench.run_experiment(config, args.out or config.out)
    ok = sum(r.success for r in records)
    print(f"{len(records)} runs, {ok} successful, written to {args.out or config.out}")
    return EXIT_OK


def _cmd_fit(args) -> int:
    fit = bench.fit_exponent(args.inp, args.algo, args.engine)
    print(f"slope: {fit.slope:.6f}")
    print(f"intercept: {fit.intercept:.6f}")
    print(f"r2: {fit.r2:.6f}")
    print("dims: " + " ".join(str(d) for d in fit.dims))
    print("median_queries: " + " ".join(f"{m:.1f}" for m in fit.medians))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="svplab", description="Lattice sieves with classical and quantum query accounting.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a random scrambled lattice basis")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--bits", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="basis file (stdout if omitted)")
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("solve", help="run one solver on a basis file")
    s.add_argument("--algo", choices=bench.ALGOS, required=True)
    s.add_argument("--engine", choices=("classical", "qcost"), default="classical")
    s.add_argument("--pick", choices=("first", "random"), default=None)
    s.add_argument("--basis", required=True)
    s.add_argument("--gamma", type=float, default=0.97)
    s.add_argument("--xi", type=float, default=DEFAULT_XI)
    s.add_argument("--bigr", type=float, default=DEFAULT_BIGR)
    s.add_argument("--mu-factor", type=float, default=1.01)
    s.add_argument("--attempts", type=int, default=8)
    s.add_argument("--collisions", type=int, default=DEFAULT_COLLISIONS)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_solve)

    e = sub.add_parser("exponents", help="leading-order complexity exponents")
    e.add_argument("--model", choices=[m.value for m in cx.Model], default="classical")
    e.add_argument("--xi", type=float)
    e.add_argument("--bigr", type=float)
    e.add_argument("--optimize", action="store_true")
    e.add_argument("--objective", choices=("time", "space"), default="time")
    e.add_argument("--ct-form", choices=("printed", "corrected"), default=None)
    e.add_argument("--table1", action="store_true")
    e.add_argument("--format", choices=("text", "csv"), default="text")
    e.set_defaults(func=_cmd_exponents)

    b = sub.add_parser("bench", help="run a seeded experiment batch to CSV")
    b.add_argument("--config", required=True)
    b.add_argument("--out")
    b.set_defaults(func=_cmd_bench)

    f = sub.add_parser("fit", help="fit log2(median charged queries) against n")
    f.add_argument("--in", dest="inp", required=True)
    f.add_argument("--algo", choices=bench.ALGOS, required=True)
    f.add_argument("--engine", choices=("classical", "qcost"), required=True)
    f.set_defaults(func=_cmd_fit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "exponents" and args.optimize and (args.xi is not None or args.bigr is not None):
        parser.error("--optimize cannot be combined with --xi/--bigr")
    try:
        return args.func(args)
    except (ParameterError, OracleLimitError, InsufficientSampleError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (RuntimeError, ArithmeticError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
