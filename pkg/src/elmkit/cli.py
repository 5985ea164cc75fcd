"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 enumeration/solver cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .aqcbound import DEFAULT_QUBIT_CAP, InterpolationProblem, runtime_bounds
from .artifact import ArtifactError, dumps, hamiltonian_document, read_hamiltonian, sha256_text
from .deduction import DeductionError, load_deductions
from .elm import PreconditionError, deduc_elm, multiplicity_elm, plan_weights, verify_ground_state_preserved
from .factoring import (
    SystemFormatError,
    UnsatisfiableSystemError,
    apply_simple_deductions,
    generate_factoring_system,
    load_system,
    save_system,
    system_to_hamiltonian,
)
from .pbpoly import PolynomialError, natural_key
from .reproduce import reproduce_tables
from .spectrum import DEFAULT_CAP, CapExceededError, compare_spectra, default_workers, enumerate_spectrum

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_CAP = 0, 1, 2, 3
VERIFY_CAP = 24


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config(args: argparse.Namespace) -> dict:
    skip = {"func"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if key == "workers" and value is None:
            value = default_workers()
        out[key] = str(value) if isinstance(value, Path) else value
    return out


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _workers(args) -> int:
    return args.workers if args.workers else default_workers()


# -- subcommands ---------------------------------------------------------------

def cmd_generate(args) -> int:
    try:
        system = generate_factoring_system(args.n, args.p_bits, args.q_bits)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    header = ["config: " + json.dumps(_config(args), sort_keys=True)]
    if not args.no_simplify:
        try:
            system, deductions = apply_simple_deductions(system)
        except UnsatisfiableSystemError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VERIFY
        header += [f"deduced: {d.f.format()} = {d.g.format()}" for d in deductions]
    _emit(save_system(system, header), args.out)
    return EXIT_OK


def cmd_elm(args) -> int:
    system = load_system(args.system)
    source_text = Path(args.system).read_text(encoding="utf-8")
    baseline = system_to_hamiltonian(system)
    transforms: list[dict] = [{"op": "system_to_hamiltonian", "weights": [1] * len(system)}]
    extra: dict = {}
    variables = set(system.variables)
    if args.deductions:
        deductions = load_deductions(args.deductions)
        if args.deduction_lambda is not None:
            deductions = [d.with_weight(args.deduction_lambda) for d in deductions]
        hamiltonian = deduc_elm(baseline, deductions)
        for d in deductions:
            variables.update(d.variables())
        transforms.append({"op": "deduc_elm", "deductions": [d.to_line() for d in deductions],
                           "penalties": [d.describe() for d in deductions]})
        extra["deductions"] = [{"line": d.to_line(), "penalty": d.describe(), "lambda": d.weight} for d in deductions]
    else:
        scheme = plan_weights(system, args.scheme, args.mode)
        hamiltonian = multiplicity_elm(system, scheme)
        transforms.append({"op": "multiplicity_elm", **scheme.to_dict()})
        extra["before"] = {"kind": "uniform", "weights": [1] * len(system)}
        extra["weight_scheme"] = scheme.to_dict()
    names = tuple(sorted(variables, key=natural_key))

    verdict: dict
    status = EXIT_OK
    if len(names) <= VERIFY_CAP:
        check = verify_ground_state_preserved(baseline, hamiltonian, names, workers=_workers(args), cap=VERIFY_CAP)
        verdict = {"checked": True, "preserved": check.preserved, "witness": check.witness}
        if not check.preserved:
            status = EXIT_VERIFY
            print(f"ground states changed; witness {check.witness} over {' '.join(names)}", file=sys.stderr)
    else:
        verdict = {"checked": False, "preserved": None, "witness": None,
                   "reason": f"{len(names)} variables exceeds the verification cap of {VERIFY_CAP}"}

    provenance = {"source": Path(args.system).name, "source_sha256": sha256_text(source_text),
                  "transforms": transforms}
    doc = hamiltonian_document(hamiltonian, names, provenance, config=_config(args), verification=verdict, **extra)
    _emit(dumps(doc), args.out)
    return status


def _spectrum_text(report, depth: int) -> str:
    cols = []
    for k in range(1, depth + 1):
        cols += [f"E{k}", f"n{k}"]
    cols += ["E_max", "R"]
    cells = ["-" if v is None else str(v) for v in report.row(depth)]
    widths = [max(len(c), len(v)) + 2 for c, v in zip(cols, cells)]
    head = "".join(c.rjust(w) for c, w in zip(cols, widths))
    body = "".join(v.rjust(w) for v, w in zip(cells, widths))
    lines = [head, body]
    if report.ratio is not None:
        lines.append(f"R exact = {report.ratio}")
    lines.append(f"ground states: {report.total_ground_states} (E0 = {report.e_ground})")
    lines.extend(f"note: {n}" for n in report.notes)
    return "\n".join(lines) + "\n"


def cmd_spectrum(args) -> int:
    poly, variables, _ = read_hamiltonian(args.input)
    report = enumerate_spectrum(poly, variables, workers=_workers(args), cap=args.cap,
                                ground_state_limit=args.ground_limit)
    config = _config(args)
    if args.format == "json":
        _emit(dumps({"config": config, "report": report.to_dict()}), args.out)
    elif args.format == "csv":
        _emit(f"# config: {json.dumps(config, sort_keys=True)}\n" + report.to_csv(), args.out)
    else:
        _emit(f"# config: {json.dumps(config, sort_keys=True)}\n" + _spectrum_text(report, args.depth), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    reports = []
    for path in (args.a, args.b):
        poly, variables, _ = read_hamiltonian(path)
        reports.append(enumerate_spectrum(poly, variables, workers=_workers(args), cap=args.cap))
    cmp = compare_spectra(*reports, depth=args.depth)
    doc = {"config": _config(args), "comparison": cmp.to_dict(),
           "a": reports[0].to_dict(), "b": reports[1].to_dict()}
    if args.format == "json":
        _emit(dumps(doc), args.out)
    else:
        lines = [f"# config: {json.dumps(_config(args), sort_keys=True)}"]
        if cmp.factor is None:
            lines.append("factor: undefined (flat spectrum)")
        else:
            lines.append(f"factor R(a)/R(b) = {cmp.factor} = {float(cmp.factor):.6f} ({float(cmp.percent):.1f}%)")
        lines.append(f"same ground states: {cmp.same_ground_states}")
        lines.append(f"{'level':>5} {'E_a':>6} {'n_a':>8} {'E_b':>6} {'n_b':>8}")
        for k, ea, na, eb, nb in cmp.levels:
            lines.append(f"{k:>5} {str(ea):>6} {str(na):>8} {str(eb):>6} {str(nb):>8}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    poly, variables, _ = read_hamiltonian(args.input)
    try:
        eps = Fraction(args.epsilon)
    except ValueError as exc:
        raise UsageError(f"bad --epsilon {args.epsilon!r}") from exc
    if not 0 < eps < 1:
        raise UsageError("--epsilon must lie in (0, 1)")
    problem = InterpolationProblem(poly, epsilon=eps, h_init_kind=args.hinit, tf_scale=args.tf_scale,
                                   grid=args.grid, variables=variables, cap=args.qubit_cap)
    classical = enumerate_spectrum(poly, variables, workers=_workers(args), cap=args.qubit_cap)
    report = runtime_bounds(problem, classical, workers=_workers(args))
    _emit(dumps({"config": _config(args), "bound": report.to_dict()}), args.out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    result = reproduce_tables(args.data_dir, workers=_workers(args))
    if args.format == "json":
        _emit(dumps({"config": _config(args), **result.to_dict()}), args.out)
    else:
        _emit(f"# config: {json.dumps(_config(args), sort_keys=True)}\n" + result.to_text(), args.out)
    return EXIT_OK if result.ok else EXIT_VERIFY


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elmkit", description="Energy landscape manipulation for binary-equation Hamiltonians.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, cap=True):
        p.add_argument("--workers", type=int, default=None, help="worker threads (default: $ELMKIT_WORKERS or CPU count)")
        if cap:
            p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum variables to enumerate")
        p.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")

    p = sub.add_parser("generate", help="write the factoring equation system for N")
    p.add_argument("n", type=int)
    p.add_argument("--p-bits", type=int, required=True)
    p.add_argument("--q-bits", type=int, required=True)
    p.add_argument("--no-simplify", action="store_true", help="skip the elementary deductions")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("elm", help="apply deduc-ELM or multiplicity-ELM to an equation system")
    p.add_argument("system", type=Path)
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--deductions", type=Path)
    how.add_argument("--scheme", choices=["ceil", "indicator", "uniform"])
    p.add_argument("--mode", choices=["side", "diff", "exact"], default="side")
    p.add_argument("--deduction-lambda", type=int, default=None, help="override every deduction's weight")
    common(p, cap=False)
    p.set_defaults(func=cmd_elm)

    p = sub.add_parser("spectrum", help="exhaustive density of states of a Hamiltonian")
    p.add_argument("input", type=Path, help="Hamiltonian artifact (.json) or equation file (.eqs)")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--ground-limit", type=int, default=64)
    p.add_argument("--depth", type=int, default=4, help="excited levels shown in text output")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("compare", help="compare the spectral ratios of two Hamiltonians")
    p.add_argument("a", type=Path)
    p.add_argument("b", type=Path)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--depth", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bound", help="adiabatic runtime-bound quantities (dense, small n)")
    p.add_argument("input", type=Path)
    p.add_argument("--epsilon", default="0.1")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--hinit", choices=["transverse", "none"], default="transverse")
    p.add_argument("--tf-scale", type=float, default=1.0)
    p.add_argument("--qubit-cap", type=int, default=DEFAULT_QUBIT_CAP)
    common(p, cap=False)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("reproduce-tables", help="recompute the published tables from the shipped data")
    p.add_argument("--data-dir", type=Path, default=None)
    p.add_argument("--format", choices=["text", "json"], default="text")
    common(p, cap=False)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, SystemFormatError, DeductionError, ArtifactError, PreconditionError,
            PolynomialError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
