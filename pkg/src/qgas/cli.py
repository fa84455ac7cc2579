"""Command-line front end.

Exit codes: 0 success, 1 input or configuration error, 2 valid output from a
search that stopped on its query budget.  Every written artifact embeds the
resolved configuration, seed included, and is byte-reproducible.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .codebook import DEFAULT_EXPONENT, maxmin_codebook_polynomial, min_pairwise_distance, proxy_distance, selected
from .coloring import ColoringInstance, coloring_polynomial, conflicts, decode_coloring, parse_graph
from .experiment import DEFAULT_STRATEGIES, check_experiment_size, run_query_experiment
from .gas import BACKENDS, DEFAULT_BUDGET, DEFAULT_LAMBDA, GasConfig, ThresholdStrategy, greedy_descent, run_gas
from .grassmann import Codebook, CodebookWarning, bloch_coordinates, min_chordal_distance, mub_codebook, parse_codebook
from .mimo import bits_per_symbol
from .poly import BinaryPolynomial, format_polynomial, parse_polynomial
from .sim import SimulatorLimitError, StateVector, apply_circuit, check_qubit_budget, parse_circuit, sample_counts

EXIT_OK, EXIT_INPUT, EXIT_UNCONVERGED = 0, 1, 2


class InputError(Exception):
    """Bad flags or input files (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        raise InputError(f"{self.prog}: {message}")


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text)


def _gas_config(args) -> GasConfig:
    try:
        ThresholdStrategy.parse(args.strategy)
        return GasConfig(m=args.m_bits, lam=args.lam, max_oracle_queries=args.budget, rng_seed=args.seed,
                         initial_threshold_strategy=args.strategy, backend=args.backend)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _approximate(poly: BinaryPolynomial, cfg: GasConfig, dicke_weight=None):
    if cfg.strategy.kind in ("classical", "combined"):
        return greedy_descent(poly, dicke_weight=dicke_weight)
    return None


def _solve_report(args, cfg, trace, extra: dict) -> str:
    doc = {"command": args.command, "version": __version__, "config": cfg.to_dict(), **extra, **trace.to_dict()}
    return _dump(doc)


def _print_summary(trace) -> None:
    bits = "".join(str(b) for b in trace.best_assignment)
    print(f"best_assignment: {bits}")
    print(f"best_cost: {trace.best_cost!r}")
    print(f"total_queries: {trace.total_oracle_queries}")
    print(f"converged: {str(trace.converged).lower()}")


def _run_poly(args, poly: BinaryPolynomial, extra: dict, dicke_weight=None):
    cfg = _gas_config(args)
    check_qubit_budget(poly.num_vars + (cfg.m or 0))
    trace = run_gas(poly, cfg, approximate=_approximate(poly, cfg, dicke_weight), dicke_weight=dicke_weight)
    _write(args.out, _solve_report(args, cfg, trace, extra))
    return trace


def cmd_solve(args) -> int:
    poly = parse_polynomial(_read(args.poly))
    trace = _run_poly(args, poly, {"polynomial": format_polynomial(poly), "poly_file": args.poly})
    _print_summary(trace)
    return EXIT_OK if trace.converged else EXIT_UNCONVERGED


def cmd_coloring(args) -> int:
    vertices, edges = parse_graph(_read(args.graph))
    try:
        inst = ColoringInstance(vertices, tuple(edges), args.colors)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    poly = coloring_polynomial(inst)
    trace = _run_poly(args, poly, {"graph": {"vertices": vertices, "edges": [list(e) for e in inst.edges]},
                                   "colors": args.colors})
    colors = decode_coloring(inst, trace.best_assignment)
    _print_summary(trace)
    print(f"coloring: {' '.join(map(str, colors))}")
    print(f"conflicts: {conflicts(inst, colors)}")
    return EXIT_OK if trace.converged else EXIT_UNCONVERGED


def _load_codebook(args) -> Codebook:
    if args.mub == bool(args.codebook):
        raise InputError("give exactly one of --mub or --codebook FILE")
    if args.mub:
        return mub_codebook()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CodebookWarning)
        cb = parse_codebook(_read(args.codebook))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return cb


def cmd_codebook(args) -> int:
    cb = _load_codebook(args)
    if args.k == len(cb):
        # a single feasible selection; nothing to search
        sel = tuple(range(len(cb)))
        print(f"selection: {' '.join(map(str, sel))}")
        print(f"min_distance: {min_pairwise_distance(cb, sel)!r}")
        return EXIT_OK
    poly = maxmin_codebook_polynomial(cb, args.k, args.p)
    trace = _run_poly(args, poly, {"k": args.k, "p": args.p, "candidates": len(cb)}, dicke_weight=args.k)
    sel = selected(trace.best_assignment)
    print(f"selection: {' '.join(map(str, sel))}")
    print(f"min_distance: {min_pairwise_distance(cb, sel)!r}")
    print(f"proxy_distance: {proxy_distance(cb, sel, args.p)!r}")
    print(f"total_queries: {trace.total_oracle_queries}")
    print(f"converged: {str(trace.converged).lower()}")
    return EXIT_OK if trace.converged else EXIT_UNCONVERGED


def cmd_grassmann_check(args) -> int:
    cb = _load_codebook(args)
    fid = cb.fidelity_matrix()
    d_min = min_chordal_distance(cb)
    if d_min <= 1e-9:
        print("warning: codebook contains duplicate points", file=sys.stderr)
    print("fidelity table:")
    for row in fid:
        print("  " + " ".join(f"{v:.6f}" for v in row))
    print(f"min_chordal_distance: {d_min:.5f}")
    report = {"command": args.command, "version": __version__, "source": "mub" if args.mub else args.codebook,
              "fidelity": fid.tolist(), "min_chordal_distance": d_min}
    if cb.dim == 2:
        coords = [list(bloch_coordinates(p)) for p in cb.points]
        print("bloch coordinates:")
        for c in coords:
            print("  " + " ".join(f"{v:+.6f}" for v in c))
        report["bloch"] = coords
    _write(args.out, _dump(report))
    return EXIT_OK


def cmd_simulate(args) -> int:
    circuit = parse_circuit(_read(args.circuit))
    check_qubit_budget(circuit.num_qubits)
    state = apply_circuit(StateVector.zero(circuit.num_qubits), circuit)
    counts = sample_counts(state, args.shots, args.seed)
    for bits in sorted(counts):
        print(f"{bits} {counts[bits]}")
    _write(args.out, _dump({"command": args.command, "version": __version__, "circuit_file": args.circuit,
                            "seed": args.seed, "shots": args.shots, "counts": counts}))
    return EXIT_OK


def cmd_mimo_experiment(args) -> int:
    bps = bits_per_symbol(args.mod)
    if args.n % bps:
        raise InputError(f"--n {args.n} is not a multiple of {bps} bits per {args.mod.upper()} symbol")
    strategies = tuple(args.strategy or DEFAULT_STRATEGIES)
    for s in strategies:
        try:
            ThresholdStrategy.parse(s)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    num_tx = args.n // bps
    try:
        check_experiment_size(num_tx, args.mod, args.m_bits)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = run_query_experiment(num_tx, args.mod, args.snr_db, args.trials, strategies, args.seed,
                                  m=args.m_bits, num_rx=args.num_rx, lam=args.lam, budget=args.budget)
    summary = result.summary()
    summary.update(command=args.command, version=__version__)
    Path(f"{args.out}.csv").write_text(result.to_csv())
    Path(f"{args.out}.json").write_text(_dump(summary))
    for s in result.strategies():
        mean = result.mean_queries(s)
        print(f"{s}: mean_queries={'nan' if np.isnan(mean) else format(mean, '.3f')}")
    return EXIT_OK


def _add_gas_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m-bits", type=int, default=None, dest="m_bits", help="cost register width")
    p.add_argument("--lambda", type=float, default=DEFAULT_LAMBDA, dest="lam", help="schedule growth factor")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum oracle queries")
    p.add_argument("--strategy", default="random", help="random | quantile:<q> | classical | combined")
    p.add_argument("--backend", choices=BACKENDS, default="plane")
    p.add_argument("--out", default=None, help="write the JSON trace here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgas", description="Grover adaptive search on simulated qubits")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="minimise a polynomial file")
    p.add_argument("--poly", required=True)
    _add_gas_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("coloring", help="colour a graph edge-list file")
    p.add_argument("--graph", required=True)
    p.add_argument("--colors", type=int, default=4)
    _add_gas_flags(p)
    p.set_defaults(func=cmd_coloring)

    p = sub.add_parser("codebook", help="max-min selection of k candidate lines")
    p.add_argument("--codebook", default=None)
    p.add_argument("--mub", action="store_true")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, default=DEFAULT_EXPONENT)
    _add_gas_flags(p)
    p.set_defaults(func=cmd_codebook)

    p = sub.add_parser("grassmann-check", help="fidelities and packing distance of a codebook")
    p.add_argument("--codebook", default=None)
    p.add_argument("--mub", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_grassmann_check)

    p = sub.add_parser("simulate", help="sample a circuit file")
    p.add_argument("--circuit", required=True)
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mimo-experiment", help="query counts to the ML optimum")
    p.add_argument("--n", type=int, default=8, help="number of bits")
    p.add_argument("--mod", type=str.lower, choices=("bpsk", "qpsk"), default="qpsk")
    p.add_argument("--snr-db", type=float, default=10.0, dest="snr_db")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--num-rx", type=int, default=None, dest="num_rx")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m-bits", type=int, default=None, dest="m_bits")
    p.add_argument("--lambda", type=float, default=DEFAULT_LAMBDA, dest="lam")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--strategy", action="append", default=None,
                   help="repeat to run several; defaults to all four")
    p.add_argument("--out", default="mimo_experiment", help="output prefix for .csv and .json")
    p.set_defaults(func=cmd_mimo_experiment)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (InputError, SimulatorLimitError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
